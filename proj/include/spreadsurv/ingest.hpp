#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spreadsurv/types.hpp"

namespace spreadsurv {

/// One trading day of normalized events, ordered by (timestamp, seq).
/// Order ids are dense indexes into order_names, interned in order of first
/// appearance, so identical streams produce identical DayLogs.
struct DayLog {
    std::string date;
    std::vector<LobEvent> events;
    TimeUs session_start = 0;
    TimeUs session_end = 0;
    std::vector<std::string> order_names;

    bool operator==(const DayLog&) const = default;
};

struct ValidationReport {
    std::int64_t events_total = 0;
    std::int64_t submits = 0;
    std::int64_t executes = 0;
    std::int64_t cancels = 0;
    std::int64_t unknown_ids = 0;
    std::int64_t crossed_incidents = 0;
    std::int64_t malformed_lines = 0;

    bool clean() const { return unknown_ids == 0 && crossed_incidents == 0 && malformed_lines == 0; }
    std::string to_json() const;
};

struct NonMonotoneTimestampError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InfeasibleConfig : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ParseResult {
    DayLog day;
    ValidationReport report;  // only malformed_lines is populated by parsing
};

inline constexpr const char* kEventCsvHeader = "timestamp_ms,order_id,side,action,price_ticks,size";

/// Parses the event CSV (header + `timestamp_ms,order_id,side,action,price_ticks,size`
/// lines, side in {b,a}, action in {S,E,C}). Malformed lines are skipped and
/// counted; a timestamp going backwards is a hard error. The CSV carries no
/// session metadata, so date and session bounds are optional inputs; bounds
/// default to the first/last event timestamps.
ParseResult parse_event_log(std::istream& in, const std::string& date = "",
                            std::optional<TimeUs> session_start = std::nullopt,
                            std::optional<TimeUs> session_end = std::nullopt);

ParseResult parse_event_log_file(const std::string& path, const std::string& date = "",
                                 std::optional<TimeUs> session_start = std::nullopt,
                                 std::optional<TimeUs> session_end = std::nullopt);

void serialize_event_log(const DayLog& day, std::ostream& out);
void serialize_event_log_file(const DayLog& day, const std::string& path);

/// Replays the full day through the order book and reports event counts,
/// unknown order ids and crossed-book incidents. Never throws on findings.
ValidationReport validate_log(const DayLog& day);

/// Synthetic daily order flow. Quiet flow keeps the spread pinned at
/// equilibrium_spread: submissions price at geometric offsets behind the
/// touch, cancels and partial executions never remove the last order at a
/// best level. Shocks clear one side's touch in a burst (market-order sweep
/// or cancellation burst) so that the spread jumps in a single event, and a
/// replenishing limit order inside the spread restores equilibrium after a
/// recovery delay that grows with the post-shock spread and shrinks with the
/// number of recent shocks.
struct SyntheticConfig {
    std::uint64_t seed = 1;
    std::int64_t event_count = 200'000;

    // arrival mix; submit/cancel weights are renormalized around the
    // execution fraction
    double exec_fraction = 0.03;
    double submit_weight = 0.55;
    double cancel_weight = 0.42;

    // depth profile
    Tick initial_mid = 2700;
    Tick equilibrium_spread = 2;
    int seed_levels = 8;
    int orders_per_level = 4;
    double mean_order_size = 80.0;
    double size_log_sd = 0.8;
    double offset_geom_p = 0.4;     // level offset behind the touch
    double revision_fraction = 0.05;  // share of submits that revise a live order

    // shocks
    double shock_rate_per_hour = 40.0;  // 0 disables shocks entirely
    double shock_cluster_prob = 0.35;   // chance a closed shock spawns a follow-up
    Tick shock_spread_min = 2;          // widening beyond equilibrium, lower bound
    double shock_spread_geom_p = 0.45;  // extra widening is geometric
    double recovery_base_ms = 30.0;
    double recovery_spread_slope = 0.30;   // per tick of (post-shock spread - eq - 1)
    double recovery_cluster_slope = 0.50;  // per recent deviation, shortening
    double recovery_noise_sd = 0.35;
    double zero_duration_prob = 0.02;  // same-millisecond recoveries

    TimeUs session_start = 8 * 3600 * kUsPerSecond;          // 08:00
    TimeUs session_end = (16 * 3600 + 1800) * kUsPerSecond;  // 16:30
};

/// Deterministic function of the config: the same seed yields the same
/// DayLog, byte for byte once serialized.
DayLog generate_synthetic_day(const SyntheticConfig& cfg);

}  // namespace spreadsurv
