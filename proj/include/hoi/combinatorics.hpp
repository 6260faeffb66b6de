#pragma once

#include "hoi/types.hpp"

#include <cstdint>

namespace hoi::combinatorics {

/// n choose k in exact 64-bit arithmetic. Throws Error on overflow.
uint64_t choose(uint32_t n, uint32_t k);

/// Lexicographic rank of a sorted K-combination among all K-combinations
/// of {0,...,C-1}.
uint64_t rank_of(uint32_t num_channels, const TupleIndex& t);

/// Inverse of rank_of: the combination at the given lexicographic rank.
TupleIndex unrank(uint32_t num_channels, int order, uint64_t rank);

/// Advances a sorted combination to its lexicographic successor in place.
/// Returns false when the input was the last combination.
bool next_combination(uint32_t num_channels, int order, uint32_t* idx);

/// Calls fn(TupleIndex) for every K-combination in lexicographic order.
template <typename Fn>
void for_each_tuple(uint32_t num_channels, int order, Fn&& fn) {
    if (order < 2 || static_cast<uint32_t>(order) > num_channels)
        throw Error("tuple enumeration requires 2 <= K <= C");
    std::vector<uint32_t> idx(order);
    for (int i = 0; i < order; ++i) idx[i] = static_cast<uint32_t>(i);
    while (true) {
        fn(TupleIndex(idx));
        if (!next_combination(num_channels, order, idx.data())) break;
    }
}

}  // namespace hoi::combinatorics
