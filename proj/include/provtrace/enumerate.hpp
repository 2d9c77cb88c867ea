#pragma once

#include <cstddef>
#include <vector>

namespace provtrace {

/// Calls `visit(const std::vector<int>&)` for every ordered tuple of
/// `length` distinct relays drawn from 1..nodes-1, in lexicographic order.
template <class Visit>
void for_each_relay_sequence(int nodes, int length, Visit&& visit)
{
    std::vector<int> sequence;
    std::vector<bool> used(static_cast<std::size_t>(nodes), false);
    sequence.reserve(static_cast<std::size_t>(length));

    auto extend = [&](auto&& self) -> void {
        if (static_cast<int>(sequence.size()) == length) {
            visit(static_cast<const std::vector<int>&>(sequence));
            return;
        }
        for (int node = 1; node < nodes; ++node) {
            if (used[static_cast<std::size_t>(node)]) continue;
            used[static_cast<std::size_t>(node)] = true;
            sequence.push_back(node);
            self(self);
            sequence.pop_back();
            used[static_cast<std::size_t>(node)] = false;
        }
    };
    extend(extend);
}

/// Calls `visit(const std::vector<std::size_t>&)` for every k-subset of
/// {0, ..., size-1}, in lexicographic order.
template <class Visit>
void for_each_combination(std::size_t size, std::size_t k, Visit&& visit)
{
    if (k > size) return;
    std::vector<std::size_t> pick(k);
    for (std::size_t j = 0; j < k; ++j) pick[j] = j;
    while (true) {
        visit(static_cast<const std::vector<std::size_t>&>(pick));
        std::size_t j = k;
        while (j > 0 && pick[j - 1] == size - k + (j - 1)) --j;
        if (j == 0) return;
        ++pick[j - 1];
        for (std::size_t t = j; t < k; ++t) pick[t] = pick[t - 1] + 1;
    }
}

}  // namespace provtrace
