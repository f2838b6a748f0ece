#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

namespace factdeck {

/// Constraints on a sequence. `pinned` items keep the given relative order;
/// `head`, when set, must come first.
struct SequenceConstraints {
    std::vector<std::size_t> pinned;
    std::optional<std::size_t> head;
};

/// Largest number of unpinned items solved exactly.
inline constexpr std::size_t kExactOrderingLimit = 12;

namespace detail {

inline bool near_equal(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b)) return a == b;
    return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

template <typename Cost>
double path_cost(std::span<const std::size_t> order, Cost& cost) {
    double total = 0.0;
    for (std::size_t i = 1; i < order.size(); ++i) total += cost(order[i - 1], order[i]);
    return total;
}

/// Held-Karp style search over subsets of the free items, interleaved with the
/// pinned chain. Among optimal orders the one with the smallest rank sequence wins.
template <typename Cost>
std::vector<std::size_t> order_exact(std::size_t n, Cost& cost, const std::vector<std::size_t>& pinned,
                                     const std::vector<std::size_t>& free_items, std::optional<std::size_t> head,
                                     std::span<const std::size_t> rank) {
    const std::size_t u = free_items.size();
    const std::size_t p = pinned.size();
    const std::size_t none = n;
    const std::size_t full = (std::size_t{1} << u) - 1;
    std::vector<std::size_t> free_pos(n, u);
    for (std::size_t j = 0; j < u; ++j) free_pos[free_items[j]] = j;

    auto state_index = [&](std::size_t mask, std::size_t k, std::size_t last) {
        return (mask * (p + 1) + k) * (n + 1) + last;
    };
    constexpr double kUnset = -1.0;
    std::vector<double> memo((full + 1) * (p + 1) * (n + 1), kUnset);

    // Remaining cost from a state; recursion depth is bounded by n.
    auto remaining = [&](auto&& self, std::size_t mask, std::size_t k, std::size_t last) -> double {
        if (mask == full && k == p) return 0.0;
        double& slot = memo[state_index(mask, k, last)];
        if (slot != kUnset) return slot;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < u; ++j) {
            if (mask & (std::size_t{1} << j)) continue;
            std::size_t item = free_items[j];
            double step = last == none ? 0.0 : cost(last, item);
            best = std::min(best, step + self(self, mask | (std::size_t{1} << j), k, item));
        }
        if (k < p) {
            std::size_t item = pinned[k];
            double step = last == none ? 0.0 : cost(last, item);
            best = std::min(best, step + self(self, mask, k + 1, item));
        }
        slot = best;
        return best;
    };

    std::vector<std::size_t> order;
    order.reserve(n);
    std::size_t mask = 0, k = 0, last = none;
    while (order.size() < n) {
        struct Option {
            std::size_t item;
            double total;
        };
        std::vector<Option> options;
        auto consider = [&](std::size_t item, std::size_t next_mask, std::size_t next_k) {
            if (last == none && head && item != *head) return;
            double step = last == none ? 0.0 : cost(last, item);
            options.push_back({item, step + remaining(remaining, next_mask, next_k, item)});
        };
        for (std::size_t j = 0; j < u; ++j)
            if (!(mask & (std::size_t{1} << j))) consider(free_items[j], mask | (std::size_t{1} << j), k);
        if (k < p) consider(pinned[k], mask, k + 1);

        double best = std::numeric_limits<double>::infinity();
        for (const auto& o : options) best = std::min(best, o.total);
        const Option* pick = nullptr;
        for (const auto& o : options) {
            if (!near_equal(o.total, best)) continue;
            if (!pick || rank[o.item] < rank[pick->item]) pick = &o;
        }
        std::size_t item = pick->item;
        order.push_back(item);
        if (free_pos[item] < u) mask |= std::size_t{1} << free_pos[item];
        else ++k;
        last = item;
    }
    return order;
}

/// Cheapest insertion of the free items into the pinned chain.
template <typename Cost>
std::vector<std::size_t> order_greedy(Cost& cost, const std::vector<std::size_t>& pinned,
                                      std::vector<std::size_t> free_items, std::optional<std::size_t> head,
                                      std::span<const std::size_t> rank) {
    std::sort(free_items.begin(), free_items.end(), [&](std::size_t a, std::size_t b) { return rank[a] < rank[b]; });
    std::vector<std::size_t> seq = pinned;
    if (head && (seq.empty() || seq.front() != *head)) {
        seq.insert(seq.begin(), *head);
        std::erase(free_items, *head);
    }
    if (seq.empty() && !free_items.empty()) {
        seq.push_back(free_items.front());
        free_items.erase(free_items.begin());
    }
    while (!free_items.empty()) {
        double best_delta = std::numeric_limits<double>::infinity();
        std::size_t best_item = 0, best_pos = 0;
        for (std::size_t fi = 0; fi < free_items.size(); ++fi) {
            std::size_t x = free_items[fi];
            for (std::size_t pos = head ? 1 : 0; pos <= seq.size(); ++pos) {
                double delta = 0.0;
                if (pos > 0) delta += cost(seq[pos - 1], x);
                if (pos < seq.size()) delta += cost(x, seq[pos]);
                if (pos > 0 && pos < seq.size()) delta -= cost(seq[pos - 1], seq[pos]);
                if (delta < best_delta && !near_equal(delta, best_delta)) {
                    best_delta = delta;
                    best_item = fi;
                    best_pos = pos;
                }
            }
        }
        seq.insert(seq.begin() + static_cast<std::ptrdiff_t>(best_pos), free_items[best_item]);
        free_items.erase(free_items.begin() + static_cast<std::ptrdiff_t>(best_item));
    }
    return seq;
}

} // namespace detail

/// Orders items 0..n-1 to minimise the summed cost of adjacent pairs (open
/// path, cost need not be symmetric) while keeping pinned items in their given
/// relative order. Exact up to `kExactOrderingLimit` free items, cheapest
/// insertion beyond. Ties go to the smaller `rank` sequence; pass the input
/// positions as ranks for a stable result.
template <typename Cost>
std::vector<std::size_t> order_sequence(std::size_t n, Cost&& cost, const SequenceConstraints& constraints,
                                        std::span<const std::size_t> rank) {
    if (n == 0) return {};
    std::vector<bool> is_pinned(n, false);
    for (std::size_t i : constraints.pinned) is_pinned[i] = true;
    std::vector<std::size_t> free_items;
    for (std::size_t i = 0; i < n; ++i)
        if (!is_pinned[i]) free_items.push_back(i);
    if (n == 1) return {0};
    SequenceConstraints c = constraints;
    if (c.head && is_pinned[*c.head] && c.pinned.front() != *c.head) c.head.reset();

    const std::size_t states = (std::size_t{1} << std::min<std::size_t>(free_items.size(), 63)) *
                               (c.pinned.size() + 1) * (n + 1);
    if (free_items.size() <= kExactOrderingLimit && states <= (std::size_t{1} << 25))
        return detail::order_exact(n, cost, c.pinned, free_items, c.head, rank);
    return detail::order_greedy(cost, c.pinned, std::move(free_items), c.head, rank);
}

template <typename Cost>
std::vector<std::size_t> order_sequence(std::size_t n, Cost&& cost, const SequenceConstraints& constraints = {}) {
    std::vector<std::size_t> rank(n);
    std::iota(rank.begin(), rank.end(), std::size_t{0});
    return order_sequence(n, std::forward<Cost>(cost), constraints, std::span<const std::size_t>(rank));
}

template <typename Cost>
double sequence_cost(std::span<const std::size_t> order, Cost&& cost) {
    return detail::path_cost(order, cost);
}

} // namespace factdeck
