#include "spreadsurv/lob.hpp"

#include <algorithm>

namespace spreadsurv {

namespace {

template <typename Map>
std::optional<Tick> nth_level_price(const Map& levels, int n) {
    if (n < 1) return std::nullopt;
    int i = 1;
    for (const auto& [price, level] : levels) {
        if (i == n) return price;
        ++i;
    }
    return std::nullopt;
}

}  // namespace

ApplyStatus OrderBook::apply(const LobEvent& event) {
    current_time_ = event.timestamp;

    switch (event.action) {
        case Action::Submit: {
            // Fail before mutating so a crossing submit leaves the book valid.
            const auto live = locations_.find(event.order_id);
            if (auto opp = best_price_excluding(opposite(event.side),
                                                live == locations_.end() ? nullptr : &live->second)) {
                const bool crosses = event.side == Side::Bid ? event.price >= *opp
                                                             : event.price <= *opp;
                if (crosses) {
                    throw CrossedBookError("submit at " + std::to_string(event.price) +
                                           " would cross opposite best " + std::to_string(*opp));
                }
            }

            RestingOrder order;
            order.order_id = event.order_id;
            order.price = event.price;
            order.remaining_size = event.size;

            auto hist = history_.find(event.order_id);
            if (hist == history_.end()) {
                history_.emplace(event.order_id, IdHistory{event.timestamp, 0});
                order.submit_time = event.timestamp;
                order.last_revision_time = event.timestamp;
            } else {
                // Revision: cancel+resubmit under the same id. Age is kept
                // from the first submission; queue priority is not.
                hist->second.revisions += 1;
                order.submit_time = hist->second.first_submit;
                order.last_revision_time = event.timestamp;
                order.revision_count = hist->second.revisions;
                if (live != locations_.end()) {
                    remove_order(event.order_id, live->second);
                }
            }
            insert_order(event.side, std::move(order));
            return ApplyStatus::Applied;
        }

        case Action::Execute: {
            auto loc = locations_.find(event.order_id);
            if (loc == locations_.end()) return ApplyStatus::UnknownOrderId;
            const Side side = loc->second.side;
            const Tick price = loc->second.price;
            auto reduce = [&](auto& book_side) {
                auto lvl = book_side.find(price);
                auto it = std::find_if(lvl->second.begin(), lvl->second.end(),
                                       [&](const RestingOrder& o) { return o.order_id == event.order_id; });
                it->remaining_size -= std::min(event.size, it->remaining_size);
                if (it->remaining_size == 0) {
                    lvl->second.erase(it);
                    locations_.erase(event.order_id);
                    if (lvl->second.empty()) book_side.erase(lvl);
                }
            };
            if (side == Side::Bid) reduce(bids_); else reduce(asks_);
            return ApplyStatus::Applied;
        }

        case Action::Cancel: {
            auto loc = locations_.find(event.order_id);
            if (loc == locations_.end()) return ApplyStatus::UnknownOrderId;
            remove_order(event.order_id, loc->second);
            return ApplyStatus::Applied;
        }
    }
    return ApplyStatus::Applied;
}

void OrderBook::insert_order(Side side, RestingOrder order) {
    const Tick price = order.price;
    const OrderId id = order.order_id;
    if (side == Side::Bid) {
        bids_[price].push_back(std::move(order));
    } else {
        asks_[price].push_back(std::move(order));
    }
    locations_[id] = OrderLoc{side, price};
}

bool OrderBook::remove_order(OrderId id, const OrderLoc& loc) {
    auto erase_from = [&](auto& book_side) {
        auto lvl = book_side.find(loc.price);
        if (lvl == book_side.end()) return false;
        auto it = std::find_if(lvl->second.begin(), lvl->second.end(),
                               [&](const RestingOrder& o) { return o.order_id == id; });
        if (it == lvl->second.end()) return false;
        lvl->second.erase(it);
        if (lvl->second.empty()) book_side.erase(lvl);
        return true;
    };
    const bool removed = (loc.side == Side::Bid) ? erase_from(bids_) : erase_from(asks_);
    if (removed) locations_.erase(id);
    return removed;
}

std::optional<Tick> OrderBook::best_price_excluding(Side side, const OrderLoc* removed) const {
    auto scan = [&](const auto& book_side) -> std::optional<Tick> {
        for (const auto& [price, level] : book_side) {
            if (removed && removed->side == side && removed->price == price && level.size() == 1) {
                continue;  // this level would vanish with the revised order
            }
            return price;
        }
        return std::nullopt;
    };
    return side == Side::Bid ? scan(bids_) : scan(asks_);
}

std::optional<Tick> OrderBook::level_price(Side side, int level) const {
    return side == Side::Bid ? nth_level_price(bids_, level) : nth_level_price(asks_, level);
}

std::optional<Tick> OrderBook::best_price(Side side) const {
    if (side == Side::Bid) {
        if (bids_.empty()) return std::nullopt;
        return bids_.begin()->first;
    }
    if (asks_.empty()) return std::nullopt;
    return asks_.begin()->first;
}

std::optional<Tick> OrderBook::spread() const {
    if (bids_.empty() || asks_.empty()) return std::nullopt;
    return asks_.begin()->first - bids_.begin()->first;
}

std::optional<double> OrderBook::mid_price() const {
    if (bids_.empty() || asks_.empty()) return std::nullopt;
    return 0.5 * static_cast<double>(bids_.begin()->first + asks_.begin()->first);
}

DepthStats OrderBook::depth_stats(Side side, int k) const {
    DepthStats stats;
    double age_sum_us = 0.0;
    int levels_seen = 0;
    auto scan = [&](const auto& book_side) {
        for (const auto& [price, level] : book_side) {
            if (levels_seen == k) break;
            ++levels_seen;
            for (const RestingOrder& o : level) {
                stats.order_count += 1;
                stats.total_volume += o.remaining_size;
                if (o.revision_count > 0) stats.modified_count += 1;
                age_sum_us += static_cast<double>(current_time_ - o.submit_time);
            }
        }
    };
    if (side == Side::Bid) scan(bids_); else scan(asks_);
    if (stats.order_count > 0) {
        stats.mean_age_ms = age_sum_us / (1000.0 * static_cast<double>(stats.order_count));
    }
    return stats;
}

bool OrderBook::side_empty(Side side) const {
    return side == Side::Bid ? bids_.empty() : asks_.empty();
}

void OrderBook::for_each_order(Side side,
                               const std::function<void(Tick, const RestingOrder&)>& fn) const {
    auto scan = [&](const auto& book_side) {
        for (const auto& [price, level] : book_side) {
            for (const RestingOrder& o : level) fn(price, o);
        }
    };
    if (side == Side::Bid) scan(bids_); else scan(asks_);
}

const RestingOrder* OrderBook::find_order(OrderId id) const {
    auto loc = locations_.find(id);
    if (loc == locations_.end()) return nullptr;
    const Level* level = level_orders(loc->second.side, loc->second.price);
    auto it = std::find_if(level->begin(), level->end(),
                           [&](const RestingOrder& o) { return o.order_id == id; });
    return &*it;
}

std::optional<Side> OrderBook::find_side(OrderId id) const {
    auto loc = locations_.find(id);
    if (loc == locations_.end()) return std::nullopt;
    return loc->second.side;
}

const OrderBook::Level* OrderBook::level_orders(Side side, Tick price) const {
    if (side == Side::Bid) {
        auto it = bids_.find(price);
        return it == bids_.end() ? nullptr : &it->second;
    }
    auto it = asks_.find(price);
    return it == asks_.end() ? nullptr : &it->second;
}

}  // namespace spreadsurv
