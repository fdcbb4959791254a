#include "spreadsurv/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string_view>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "spreadsurv/lob.hpp"
#include "spreadsurv/rng.hpp"

namespace spreadsurv {

namespace {

bool parse_int(std::string_view field, std::int64_t& out) {
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last && !field.empty();
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

}  // namespace

std::string ValidationReport::to_json() const {
    nlohmann::ordered_json j;
    j["events_total"] = events_total;
    j["submits"] = submits;
    j["executes"] = executes;
    j["cancels"] = cancels;
    j["unknown_ids"] = unknown_ids;
    j["crossed_incidents"] = crossed_incidents;
    j["malformed_lines"] = malformed_lines;
    return j.dump(2);
}

ParseResult parse_event_log(std::istream& in, const std::string& date,
                            std::optional<TimeUs> session_start,
                            std::optional<TimeUs> session_end) {
    ParseResult result;
    result.day.date = date;

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty event log: missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kEventCsvHeader) {
        throw std::runtime_error("event log header mismatch, expected '" +
                                 std::string(kEventCsvHeader) + "'");
    }

    std::unordered_map<std::string, OrderId> interned;
    TimeUs prev_ts = -1;

    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        const auto fields = split_fields(line);
        auto malformed = [&]() { result.report.malformed_lines += 1; };
        if (fields.size() != 6) {
            malformed();
            continue;
        }

        std::int64_t ts_ms = 0, price = 0, size = 0;
        if (!parse_int(fields[0], ts_ms) || !parse_int(fields[4], price) ||
            !parse_int(fields[5], size) || ts_ms < 0 || fields[1].empty()) {
            malformed();
            continue;
        }

        Side side;
        if (fields[2] == "b") side = Side::Bid;
        else if (fields[2] == "a") side = Side::Ask;
        else { malformed(); continue; }

        Action action;
        if (fields[3] == "S") action = Action::Submit;
        else if (fields[3] == "E") action = Action::Execute;
        else if (fields[3] == "C") action = Action::Cancel;
        else { malformed(); continue; }

        if (action == Action::Submit && (price <= 0 || size <= 0)) { malformed(); continue; }
        if (action == Action::Execute && size <= 0) { malformed(); continue; }

        const TimeUs ts = ts_ms * kUsPerMs;
        if (prev_ts >= 0 && ts < prev_ts) {
            throw NonMonotoneTimestampError("timestamp went backwards at ms " +
                                            std::to_string(ts_ms));
        }
        if ((session_start && ts < *session_start) || (session_end && ts > *session_end)) {
            malformed();
            continue;
        }
        prev_ts = ts;

        const std::string name(fields[1]);
        OrderId id;
        if (auto it = interned.find(name); it != interned.end()) {
            id = it->second;
        } else {
            id = result.day.order_names.size();
            interned.emplace(name, id);
            result.day.order_names.push_back(name);
        }

        LobEvent event;
        event.timestamp = ts;
        event.seq = result.day.events.size();
        event.order_id = id;
        event.side = side;
        event.action = action;
        event.price = price;
        event.size = size;
        result.day.events.push_back(event);
    }

    if (session_start) {
        result.day.session_start = *session_start;
    } else {
        result.day.session_start = result.day.events.empty() ? 0 : result.day.events.front().timestamp;
    }
    if (session_end) {
        result.day.session_end = *session_end;
    } else {
        result.day.session_end = result.day.events.empty() ? 0 : result.day.events.back().timestamp;
    }
    return result;
}

ParseResult parse_event_log_file(const std::string& path, const std::string& date,
                                 std::optional<TimeUs> session_start,
                                 std::optional<TimeUs> session_end) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open event log: " + path);
    return parse_event_log(in, date, session_start, session_end);
}

void serialize_event_log(const DayLog& day, std::ostream& out) {
    out << kEventCsvHeader << '\n';
    for (const LobEvent& e : day.events) {
        out << e.timestamp / kUsPerMs << ',' << day.order_names[e.order_id] << ','
            << (e.side == Side::Bid ? 'b' : 'a') << ','
            << (e.action == Action::Submit ? 'S' : e.action == Action::Execute ? 'E' : 'C') << ','
            << e.price << ',' << e.size << '\n';
    }
}

void serialize_event_log_file(const DayLog& day, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write event log: " + path);
    serialize_event_log(day, out);
}

ValidationReport validate_log(const DayLog& day) {
    ValidationReport report;
    report.events_total = static_cast<std::int64_t>(day.events.size());

    OrderBook book;
    for (const LobEvent& e : day.events) {
        switch (e.action) {
            case Action::Submit: report.submits += 1; break;
            case Action::Execute: report.executes += 1; break;
            case Action::Cancel: report.cancels += 1; break;
        }
        try {
            if (book.apply(e) == ApplyStatus::UnknownOrderId) report.unknown_ids += 1;
        } catch (const CrossedBookError&) {
            report.crossed_incidents += 1;  // event skipped, book stays valid
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Synthetic day generation
// ---------------------------------------------------------------------------

namespace {

struct DayBuilder {
    DayLog day;
    OrderBook book;
    Rng rng;
    std::vector<OrderId> live;  // for uniform sampling of live orders
    std::unordered_map<OrderId, std::size_t> live_pos;

    explicit DayBuilder(std::uint64_t seed) : rng(seed) {}

    OrderId fresh_id() {
        const OrderId id = day.order_names.size();
        day.order_names.push_back("O" + std::to_string(id));
        return id;
    }

    void track_live(OrderId id) {
        if (live_pos.contains(id)) return;
        live_pos[id] = live.size();
        live.push_back(id);
    }

    void untrack_live(OrderId id) {
        auto it = live_pos.find(id);
        if (it == live_pos.end()) return;
        const std::size_t pos = it->second;
        const OrderId last = live.back();
        live[pos] = last;
        live_pos[last] = pos;
        live.pop_back();
        live_pos.erase(it);
    }

    void emit(TimeUs ts, OrderId id, Side side, Action action, Tick price, Qty size) {
        LobEvent e;
        e.timestamp = ts;
        e.seq = day.events.size();
        e.order_id = id;
        e.side = side;
        e.action = action;
        e.price = price;
        e.size = size;
        day.events.push_back(e);
        book.apply(e);
        if (action == Action::Submit) {
            track_live(id);
        } else if (book.find_order(id) == nullptr) {
            untrack_live(id);
        }
    }

    Qty sample_size(double mean, double log_sd) {
        const double v = std::exp(std::log(mean) + log_sd * rng.normal());
        return std::clamp<Qty>(static_cast<Qty>(std::llround(v)), 1, 5000);
    }

    /// True when the order is the only one resting at its side's best level;
    /// removing it would move the touch.
    bool sole_at_best(const RestingOrder& order, Side side) const {
        const auto best = book.best_price(side);
        if (!best || *best != order.price) return false;
        return book.level_orders(side, order.price)->size() == 1;
    }
};

}  // namespace

DayLog generate_synthetic_day(const SyntheticConfig& cfg) {
    if (!(cfg.exec_fraction > 0.0 && cfg.exec_fraction < 1.0))
        throw InfeasibleConfig("exec_fraction must lie in (0, 1)");
    if (cfg.event_count <= 0) throw InfeasibleConfig("event_count must be positive");
    if (cfg.session_end <= cfg.session_start) throw InfeasibleConfig("empty session");
    if (cfg.equilibrium_spread < 1) throw InfeasibleConfig("equilibrium_spread must be >= 1");
    if (cfg.submit_weight <= 0.0 || cfg.cancel_weight <= 0.0)
        throw InfeasibleConfig("arrival weights must be positive");
    if (cfg.seed_levels < 2 || cfg.orders_per_level < 1)
        throw InfeasibleConfig("depth profile too shallow");
    if (cfg.shock_rate_per_hour < 0.0) throw InfeasibleConfig("shock rate must be >= 0");
    if (cfg.recovery_base_ms <= 0.0) throw InfeasibleConfig("recovery base must be positive");

    DayBuilder b(cfg.seed);
    b.day.date = "synth-" + std::to_string(cfg.seed);
    b.day.session_start = cfg.session_start;
    b.day.session_end = cfg.session_end;

    const Tick eq = cfg.equilibrium_spread;
    const Tick best_bid0 = cfg.initial_mid - (eq + 1) / 2;
    const Tick best_ask0 = best_bid0 + eq;

    // The builder works on the millisecond grid; timestamps are scaled to
    // microseconds at the end.
    const TimeUs start_ms = cfg.session_start / kUsPerMs;
    const TimeUs end_ms = cfg.session_end / kUsPerMs;

    // Seed the depth profile at the session open.
    for (int lvl = 0; lvl < cfg.seed_levels; ++lvl) {
        for (int j = 0; j < cfg.orders_per_level; ++j) {
            b.emit(start_ms, b.fresh_id(), Side::Bid, Action::Submit, best_bid0 - lvl,
                   b.sample_size(cfg.mean_order_size, cfg.size_log_sd));
            b.emit(start_ms, b.fresh_id(), Side::Ask, Action::Submit, best_ask0 + lvl,
                   b.sample_size(cfg.mean_order_size, cfg.size_log_sd));
        }
    }

    const double session_ms = static_cast<double>(end_ms - start_ms);
    const double mean_gap_ms = session_ms / static_cast<double>(cfg.event_count);
    const double submit_share = (1.0 - cfg.exec_fraction) * cfg.submit_weight /
                                (cfg.submit_weight + cfg.cancel_weight);

    const TimeUs shock_deadline_ms = end_ms - 90'000;  // closers must fit in session

    TimeUs t_ms = start_ms;
    bool shock_open = false;
    Side shock_side = Side::Ask;
    TimeUs close_at_ms = 0;
    TimeUs next_shock_ms = std::numeric_limits<TimeUs>::max();
    const bool shocks_enabled = cfg.shock_rate_per_hour > 0.0;
    const double mean_shock_gap_ms = shocks_enabled ? 3'600'000.0 / cfg.shock_rate_per_hour : 0.0;
    if (shocks_enabled) {
        next_shock_ms = start_ms + 62'000 +
                        static_cast<TimeUs>(b.rng.exponential(mean_shock_gap_ms));
    }
    std::vector<TimeUs> shock_open_times_ms;

    auto quiet_submit = [&](TimeUs ts) {
        if (!b.live.empty() && b.rng.bernoulli(cfg.revision_fraction)) {
            // Revise a live order: same or deeper price, resampled size.
            const OrderId id = b.live[b.rng.uniform_int(0, static_cast<std::int64_t>(b.live.size()) - 1)];
            const RestingOrder* order = b.book.find_order(id);
            const Side side = *b.book.find_side(id);
            Tick price = order->price;
            if (!b.sole_at_best(*order, side) && b.rng.bernoulli(0.5)) {
                price += (side == Side::Bid) ? -1 : 1;
            }
            b.emit(ts, id, side, Action::Submit, price,
                   b.sample_size(cfg.mean_order_size, cfg.size_log_sd));
            return;
        }
        const Side side = b.rng.bernoulli(0.5) ? Side::Bid : Side::Ask;
        const Tick offset = std::min<Tick>(b.rng.geometric(cfg.offset_geom_p), 12);
        const auto best = b.book.best_price(side);
        const Tick anchor = best ? *best : (side == Side::Bid ? best_bid0 : best_ask0);
        const Tick price = side == Side::Bid ? anchor - offset : anchor + offset;
        b.emit(ts, b.fresh_id(), side, Action::Submit, price,
               b.sample_size(cfg.mean_order_size, cfg.size_log_sd));
    };

    auto quiet_cancel = [&](TimeUs ts) -> bool {
        if (b.live.empty()) return false;
        for (int attempt = 0; attempt < 8; ++attempt) {
            const OrderId id = b.live[b.rng.uniform_int(0, static_cast<std::int64_t>(b.live.size()) - 1)];
            const RestingOrder* order = b.book.find_order(id);
            const Side side = *b.book.find_side(id);
            if (b.sole_at_best(*order, side)) continue;  // would move the touch
            b.emit(ts, id, side, Action::Cancel, order->price, order->remaining_size);
            return true;
        }
        return false;
    };

    auto quiet_execute = [&](TimeUs ts) -> bool {
        Side side = b.rng.bernoulli(0.5) ? Side::Bid : Side::Ask;
        for (int attempt = 0; attempt < 2; ++attempt, side = opposite(side)) {
            const auto best = b.book.best_price(side);
            if (!best) continue;
            const auto* level = b.book.level_orders(side, *best);
            const RestingOrder& front = level->front();
            if (level->size() > 1 && b.rng.bernoulli(0.5)) {
                b.emit(ts, front.order_id, side, Action::Execute, front.price, front.remaining_size);
                return true;
            }
            if (front.remaining_size > 1) {
                const Qty fill = b.rng.uniform_int(1, front.remaining_size - 1);
                b.emit(ts, front.order_id, side, Action::Execute, front.price, fill);
                return true;
            }
            if (level->size() > 1) {
                b.emit(ts, front.order_id, side, Action::Execute, front.price, front.remaining_size);
                return true;
            }
        }
        return false;
    };

    // Clears one side's touch so the spread jumps to ~target in the burst's
    // final event, which is the event that opens the deviation downstream.
    auto fire_shock = [&](TimeUs ts) -> bool {
        const Side side = b.rng.bernoulli(0.5) ? Side::Ask : Side::Bid;
        const bool market_type = b.rng.bernoulli(0.5);
        const Tick widen = eq + cfg.shock_spread_min +
                           std::min<Tick>(b.rng.geometric(cfg.shock_spread_geom_p), 6);

        const auto own_best = b.book.best_price(side);
        const auto opp_best = b.book.best_price(opposite(side));
        if (!own_best || !opp_best) return false;
        const Tick target =
            side == Side::Ask ? *opp_best + widen : *opp_best - widen;

        // The level at or beyond the target must survive the burst.
        std::vector<std::pair<Tick, OrderId>> deeper_victims;
        std::vector<OrderId> best_level_victims;
        bool survivor = false;
        b.book.for_each_order(side, [&](Tick price, const RestingOrder& o) {
            const bool inside = side == Side::Ask ? price < target : price > target;
            if (!inside) { survivor = true; return; }
            if (price == *own_best) best_level_victims.push_back(o.order_id);
            else deeper_victims.push_back({price, o.order_id});
        });
        if (!survivor || best_level_victims.empty()) return false;

        // Deeper levels fade first; the touch stays put until the last event.
        for (const auto& [price, id] : deeper_victims) {
            const RestingOrder* o = b.book.find_order(id);
            b.emit(ts, id, side, Action::Cancel, price, o->remaining_size);
        }
        for (std::size_t i = 0; i + 1 < best_level_victims.size(); ++i) {
            const OrderId id = best_level_victims[i];
            const RestingOrder* o = b.book.find_order(id);
            b.emit(ts, id, side, market_type ? Action::Execute : Action::Cancel, o->price,
                   o->remaining_size);
        }
        const OrderId last = best_level_victims.back();
        const RestingOrder* o = b.book.find_order(last);
        b.emit(ts, last, side, market_type ? Action::Execute : Action::Cancel, o->price,
               o->remaining_size);

        // Recovery time: longer for wider post-shock spreads, shorter when
        // deviations clustered recently.
        const Tick post_spread = *b.book.spread();
        std::int64_t recent = 0;
        for (auto it = shock_open_times_ms.rbegin(); it != shock_open_times_ms.rend(); ++it) {
            if (*it < ts - 1000) break;
            if (*it < ts) ++recent;
        }
        shock_open_times_ms.push_back(ts);

        TimeUs duration_ms = 0;
        if (!b.rng.bernoulli(cfg.zero_duration_prob)) {
            const double log_d = std::log(cfg.recovery_base_ms) +
                                 cfg.recovery_spread_slope * static_cast<double>(post_spread - eq - 1) -
                                 cfg.recovery_cluster_slope * static_cast<double>(recent) +
                                 cfg.recovery_noise_sd * b.rng.normal();
            duration_ms = std::max<TimeUs>(1, static_cast<TimeUs>(std::llround(std::exp(log_d))));
        }
        shock_open = true;
        shock_side = side;
        close_at_ms = std::min(ts + duration_ms, end_ms - 1);
        return true;
    };

    auto emit_closer = [&](TimeUs ts) {
        // A replenishing limit order inside the spread restores equilibrium.
        const Tick opp = *b.book.best_price(opposite(shock_side));
        const Tick price = shock_side == Side::Ask ? opp + eq : opp - eq;
        b.emit(ts, b.fresh_id(), shock_side, Action::Submit, price,
               b.sample_size(2.0 * cfg.mean_order_size, cfg.size_log_sd));
        shock_open = false;
        if (shocks_enabled) {
            if (b.rng.bernoulli(cfg.shock_cluster_prob)) {
                next_shock_ms = ts + b.rng.uniform_int(80, 800);
            } else {
                next_shock_ms = ts + static_cast<TimeUs>(b.rng.exponential(mean_shock_gap_ms));
            }
        }
    };

    while (static_cast<std::int64_t>(b.day.events.size()) < cfg.event_count) {
        const TimeUs t_quiet = t_ms + static_cast<TimeUs>(b.rng.exponential(mean_gap_ms));
        TimeUs t_next = t_quiet;
        enum class Kind { Quiet, Close, Shock } kind = Kind::Quiet;
        if (shock_open && close_at_ms <= t_next) {
            t_next = close_at_ms;
            kind = Kind::Close;
        } else if (!shock_open && shocks_enabled && next_shock_ms <= t_next &&
                   next_shock_ms < shock_deadline_ms) {
            t_next = next_shock_ms;
            kind = Kind::Shock;
        }
        if (t_next >= end_ms) break;
        t_ms = t_next;

        switch (kind) {
            case Kind::Close:
                emit_closer(t_ms);
                break;
            case Kind::Shock:
                if (!fire_shock(t_ms)) {
                    next_shock_ms = t_ms + static_cast<TimeUs>(b.rng.exponential(mean_shock_gap_ms));
                }
                break;
            case Kind::Quiet: {
                const double r = b.rng.uniform();
                if (r < cfg.exec_fraction) {
                    if (!quiet_execute(t_ms)) quiet_submit(t_ms);
                } else if (r < cfg.exec_fraction + submit_share) {
                    quiet_submit(t_ms);
                } else {
                    if (!quiet_cancel(t_ms)) quiet_submit(t_ms);
                }
                break;
            }
        }
    }

    if (shock_open) {
        emit_closer(std::max(close_at_ms, t_ms));
    }

    // Timestamps are milliseconds scaled to microseconds.
    for (LobEvent& e : b.day.events) e.timestamp *= kUsPerMs;
    b.day.session_start = cfg.session_start;
    b.day.session_end = cfg.session_end;
    return std::move(b.day);
}

}  // namespace spreadsurv
