#include "hoi/combinatorics.hpp"

namespace hoi::combinatorics {

uint64_t choose(uint32_t n, uint32_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    uint64_t r = 1;
    for (uint32_t i = 1; i <= k; ++i) {
        const uint64_t num = n - k + i;
        // r * num never overflows for the C <= ~10^4, K <= 4 range this
        // library sweeps; guard anyway.
        if (r > UINT64_MAX / num) throw Error("binomial overflow");
        r = r * num / i;
    }
    return r;
}

uint64_t rank_of(uint32_t num_channels, const TupleIndex& t) {
    const int k = t.order();
    uint64_t rank = 0;
    uint32_t prev = 0;
    for (int i = 0; i < k; ++i) {
        for (uint32_t v = prev; v < t[i]; ++v)
            rank += choose(num_channels - v - 1, static_cast<uint32_t>(k - i - 1));
        prev = t[i] + 1;
    }
    return rank;
}

TupleIndex unrank(uint32_t num_channels, int order, uint64_t rank) {
    if (order < 2 || static_cast<uint32_t>(order) > num_channels)
        throw Error("unrank requires 2 <= K <= C");
    const uint64_t total = choose(num_channels, static_cast<uint32_t>(order));
    if (rank >= total) throw Error("rank out of range");
    std::vector<uint32_t> idx(order);
    uint32_t v = 0;
    for (int i = 0; i < order; ++i) {
        while (true) {
            const uint64_t block = choose(num_channels - v - 1, static_cast<uint32_t>(order - i - 1));
            if (rank < block) break;
            rank -= block;
            ++v;
        }
        idx[i] = v++;
    }
    return TupleIndex(idx);
}

bool next_combination(uint32_t num_channels, int order, uint32_t* idx) {
    int i = order - 1;
    while (i >= 0 && idx[i] == num_channels - static_cast<uint32_t>(order - i)) --i;
    if (i < 0) return false;
    ++idx[i];
    for (int j = i + 1; j < order; ++j) idx[j] = idx[j - 1] + 1;
    return true;
}

}  // namespace hoi::combinatorics
