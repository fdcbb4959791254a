#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "spreadsurv/ingest.hpp"
#include "spreadsurv/types.hpp"

namespace spreadsurv {

enum class ThresholdSource : std::uint8_t { ReferenceDayMedian, Explicit };

struct Threshold {
    Tick c = 1;
    ThresholdSource source = ThresholdSource::Explicit;
};

enum class Trigger : std::uint8_t { MarketOrder, Cancellation, Other };

/// One maximal interval during which the spread stays above the threshold.
struct DeviationEpisode {
    TimeUs start_time = 0;     // T_i
    TimeUs duration = 0;       // tau_i in microseconds, floored at 100us; 0 when censored
    bool censored = false;
    TimeUs observed_time = 0;  // == duration if uncensored, TD - T_i otherwise
    Trigger trigger = Trigger::Other;
    std::size_t open_event_index = 0;  // index into the day's event list

    bool operator==(const DeviationEpisode&) const = default;
};

struct EmptySampleError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// The uncensored duration floor: deviations that are born and die within
/// the same millisecond stamp are recorded as 0.1 ms.
constexpr TimeUs kDurationFloorUs = 100;

/// Median spread of a reference day's samples; even counts round the mean of
/// the two central order statistics half-up to an integer tick.
Threshold compute_threshold(const std::vector<Tick>& spread_samples);

/// Spreads observed at every event time of a day (skipping instants where a
/// side is empty), the reference-day input to compute_threshold.
std::vector<Tick> spread_samples(const DayLog& day);

/// Replays the day and extracts spread deviation episodes over the window
/// [t0, td]. An episode opens at the first event time with spread > c while
/// none is open (one-sided and empty books count as infinitely wide) and
/// closes at the first later event time with spread <= c. Zero durations are
/// floored to 0.1 ms; an episode still open at td is censored. The trigger
/// is the opening event's action.
std::vector<DeviationEpisode> extract_episodes(const DayLog& day, Threshold threshold,
                                               TimeUs t0, TimeUs td);

/// Number of episodes with start time in [t - delta, t), strictly before any
/// episode starting at t itself.
std::int64_t count_recent_episodes(const std::vector<DeviationEpisode>& episodes, TimeUs t,
                                   TimeUs delta);

/// Episode CSV: `T_i_us,observed_us,censored,trigger`.
void write_episode_csv(const std::vector<DeviationEpisode>& episodes, std::ostream& out);
std::vector<DeviationEpisode> read_episode_csv(std::istream& in);

}  // namespace spreadsurv
