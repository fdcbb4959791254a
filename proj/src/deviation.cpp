#include "spreadsurv/deviation.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "spreadsurv/lob.hpp"

namespace spreadsurv {

Threshold compute_threshold(const std::vector<Tick>& samples) {
    if (samples.empty()) throw EmptySampleError("threshold requires a non-empty spread sample");
    std::vector<Tick> sorted(samples);
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    Tick c;
    if (n % 2 == 1) {
        c = sorted[n / 2];
    } else {
        // mean of the central pair, rounded half-up to an integer tick
        const Tick a = sorted[n / 2 - 1];
        const Tick b = sorted[n / 2];
        c = (a + b + 1) / 2;
    }
    return Threshold{std::max<Tick>(c, 1), ThresholdSource::ReferenceDayMedian};
}

std::vector<Tick> spread_samples(const DayLog& day) {
    std::vector<Tick> samples;
    samples.reserve(day.events.size());
    OrderBook book;
    for (const LobEvent& e : day.events) {
        book.apply(e);
        if (auto s = book.spread()) samples.push_back(*s);
    }
    return samples;
}

namespace {

// One-sided and empty books are treated as infinitely wide.
bool above_threshold(const OrderBook& book, Tick c) {
    const auto s = book.spread();
    return !s || *s > c;
}

}  // namespace

std::vector<DeviationEpisode> extract_episodes(const DayLog& day, Threshold threshold,
                                               TimeUs t0, TimeUs td) {
    if (!(t0 < td)) throw std::invalid_argument("observation window is empty");
    const Tick c = threshold.c;

    std::vector<DeviationEpisode> episodes;
    OrderBook book;
    bool open = false;
    DeviationEpisode current;

    for (std::size_t i = 0; i < day.events.size(); ++i) {
        const LobEvent& e = day.events[i];
        if (e.timestamp > td) break;
        book.apply(e);
        if (e.timestamp < t0) continue;

        const bool above = above_threshold(book, c);
        if (!open && above) {
            open = true;
            current = DeviationEpisode{};
            current.start_time = e.timestamp;
            current.open_event_index = i;
            current.trigger = e.action == Action::Execute ? Trigger::MarketOrder
                              : e.action == Action::Cancel ? Trigger::Cancellation
                                                           : Trigger::Other;
        } else if (open && !above) {
            current.duration = std::max(e.timestamp - current.start_time, kDurationFloorUs);
            current.observed_time = current.duration;
            current.censored = false;
            episodes.push_back(current);
            open = false;
        }
    }

    if (open) {
        current.censored = true;
        current.duration = 0;
        current.observed_time = td - current.start_time;
        episodes.push_back(current);
    }
    return episodes;
}

std::int64_t count_recent_episodes(const std::vector<DeviationEpisode>& episodes, TimeUs t,
                                   TimeUs delta) {
    std::int64_t count = 0;
    for (const DeviationEpisode& ep : episodes) {
        if (ep.start_time >= t) break;  // episodes are ordered by start time
        if (ep.start_time >= t - delta) ++count;
    }
    return count;
}

void write_episode_csv(const std::vector<DeviationEpisode>& episodes, std::ostream& out) {
    out << "T_i_us,observed_us,censored,trigger\n";
    for (const DeviationEpisode& ep : episodes) {
        const char* trigger = ep.trigger == Trigger::MarketOrder  ? "market_order"
                              : ep.trigger == Trigger::Cancellation ? "cancellation"
                                                                    : "other";
        out << ep.start_time << ',' << ep.observed_time << ',' << (ep.censored ? 1 : 0) << ','
            << trigger << '\n';
    }
}

std::vector<DeviationEpisode> read_episode_csv(std::istream& in) {
    std::vector<DeviationEpisode> episodes;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty episode csv");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        DeviationEpisode ep;
        char trigger[32] = {0};
        int censored = 0;
        if (std::sscanf(line.c_str(), "%ld,%ld,%d,%31s", &ep.start_time, &ep.observed_time,
                        &censored, trigger) != 4) {
            throw std::runtime_error("malformed episode csv line: " + line);
        }
        ep.censored = censored != 0;
        ep.duration = ep.censored ? 0 : ep.observed_time;
        const std::string t(trigger);
        ep.trigger = t == "market_order"  ? Trigger::MarketOrder
                     : t == "cancellation" ? Trigger::Cancellation
                                           : Trigger::Other;
        episodes.push_back(ep);
    }
    return episodes;
}

}  // namespace spreadsurv
