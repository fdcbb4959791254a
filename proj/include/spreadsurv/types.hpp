#pragma once

#include <cstdint>

namespace spreadsurv {

using Tick = std::int64_t;    // price in ticks
using Qty = std::int64_t;     // shares
using TimeUs = std::int64_t;  // microseconds since midnight
using OrderId = std::uint64_t;

enum class Side : std::uint8_t { Bid, Ask };
enum class Action : std::uint8_t { Submit, Execute, Cancel };

inline Side opposite(Side s) { return s == Side::Bid ? Side::Ask : Side::Bid; }

constexpr TimeUs kUsPerMs = 1000;
constexpr TimeUs kUsPerSecond = 1'000'000;

/// One normalized feed event: a limit order submission, an execution against
/// a resting order, or a cancellation of a resting order.
struct LobEvent {
    TimeUs timestamp = 0;   // microseconds since midnight
    std::uint64_t seq = 0;  // tie break within equal timestamps, file order
    OrderId order_id = 0;
    Side side = Side::Bid;
    Action action = Action::Submit;
    Tick price = 0;
    Qty size = 0;

    bool operator==(const LobEvent&) const = default;
};

}  // namespace spreadsurv
