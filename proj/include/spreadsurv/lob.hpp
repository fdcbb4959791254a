#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "spreadsurv/types.hpp"

namespace spreadsurv {

/// A limit order currently resting in the book.
struct RestingOrder {
    OrderId order_id = 0;
    Tick price = 0;
    Qty remaining_size = 0;
    TimeUs submit_time = 0;         // original submission, survives revisions
    TimeUs last_revision_time = 0;  // == submit_time when never revised
    std::uint32_t revision_count = 0;
};

/// Aggregate statistics over the top-k occupied levels of one side.
struct DepthStats {
    std::int64_t order_count = 0;
    Qty total_volume = 0;
    std::int64_t modified_count = 0;  // orders with revision_count > 0
    double mean_age_ms = 0.0;         // relative to the book clock, 0 if empty

    bool operator==(const DepthStats&) const = default;
};

enum class ApplyStatus : std::uint8_t {
    Applied,
    UnknownOrderId,  // execute/cancel on an id that is not resting: skipped
};

/// The book crossed after applying an event; the stream is corrupt.
struct CrossedBookError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Price-time priority order book, rebuilt tick by tick from an event
/// stream. Bids are kept in descending and asks in ascending price order;
/// each level holds its orders in arrival order. Copy a book to snapshot it.
class OrderBook {
public:
    using Level = std::vector<RestingOrder>;

    /// Applies one event. Submits with an already-seen order id are treated
    /// as cancel+resubmit revisions: the order keeps its original submission
    /// time and its revision count grows, but it loses queue priority.
    /// Executes reduce the referenced order, removing it at zero; cancels
    /// remove it. Throws CrossedBookError if the book crosses.
    ApplyStatus apply(const LobEvent& event);

    /// Price of the i-th occupied level (i >= 1) from the top of a side.
    std::optional<Tick> level_price(Side side, int level) const;

    std::optional<Tick> best_price(Side side) const;

    /// Best ask minus best bid in ticks; absent when either side is empty.
    std::optional<Tick> spread() const;

    /// Quoted midpoint (best_bid + best_ask) / 2, exact in half ticks.
    std::optional<double> mid_price() const;

    /// Sums over the top min(k, available) occupied levels of a side.
    DepthStats depth_stats(Side side, int k) const;

    bool side_empty(Side side) const;
    TimeUs current_time() const { return current_time_; }

    /// Visits every resting order on one side, best level first. Used by
    /// brute-force oracles and covariate checks; iteration order is the
    /// book's price-time order.
    void for_each_order(Side side, const std::function<void(Tick, const RestingOrder&)>& fn) const;

    /// Live order by id, nullptr if not resting.
    const RestingOrder* find_order(OrderId id) const;
    std::optional<Side> find_side(OrderId id) const;

    /// Orders at one price level in queue order, nullptr if the level is empty.
    const Level* level_orders(Side side, Tick price) const;

    std::size_t live_order_count() const { return locations_.size(); }

private:
    struct OrderLoc {
        Side side;
        Tick price;
    };
    struct IdHistory {
        TimeUs first_submit = 0;
        std::uint32_t revisions = 0;
    };

    void insert_order(Side side, RestingOrder order);
    bool remove_order(OrderId id, const OrderLoc& loc);
    std::optional<Tick> best_price_excluding(Side side, const OrderLoc* removed) const;

    std::map<Tick, Level, std::greater<Tick>> bids_;
    std::map<Tick, Level, std::less<Tick>> asks_;
    std::unordered_map<OrderId, OrderLoc> locations_;  // live orders only
    std::unordered_map<OrderId, IdHistory> history_;   // every id ever seen
    TimeUs current_time_ = 0;
};

}  // namespace spreadsurv
