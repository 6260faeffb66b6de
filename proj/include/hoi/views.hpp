#pragma once

#include "hoi/tensor.hpp"
#include "hoi/types.hpp"

#include <functional>
#include <vector>

namespace hoi::views {

/// Progress callback: (tuples_done, tuples_total, elapsed_seconds).
/// Interim events are rate-limited to 10 Hz; one final completion event
/// always fires.
using ProgressFn = std::function<void(uint64_t, uint64_t, double)>;

struct BuildOptions {
    int workers = 1;
    /// Byte cap for the per-channel kernel cache (Renyi path). When the cache
    /// would exceed it, kernels are recomputed per tuple instead.
    uint64_t kernel_cache_cap_bytes = 1ull << 30;
    ProgressFn progress;
};

struct PairwiseView {
    PairwiseMatrix matrix;
    std::vector<Defect> defects;
};

struct OrderView {
    InteractionTensor tensor;
    std::vector<Defect> defects;
};

/// All C(C-1)/2 pairwise MI entries (Gaussian MI = TC at K=2 when
/// estimator=Gaussian), mirrored, zero diagonal. Failed pairs become NaN
/// sentinels plus defect records. Output is identical for any worker count.
PairwiseView build_pairwise_view(const TimeSeriesMatrix& x, const EstimatorConfig& cfg,
                                 const BuildOptions& opts = {});

/// Keeps the ceil(fraction * P) largest finite off-diagonal pairs by |value|
/// (P = finite unique pairs), zeroes the rest. Ties at the cutoff are broken
/// by ascending lexicographic (i, j). Throws if no finite entries exist.
PairwiseMatrix sparsify_top_fraction(const PairwiseMatrix& m, double fraction);

/// O-information for every C-choose-K tuple with the configured estimator.
/// Entries land in lexicographic slots regardless of schedule, so the tensor
/// is bit-identical for any worker count. Per-tuple failures are recorded as
/// defects; throws only if more than 1% of tuples defect.
OrderView build_order_view(const TimeSeriesMatrix& x, int order, const EstimatorConfig& cfg,
                           const BuildOptions& opts = {});

}  // namespace hoi::views
