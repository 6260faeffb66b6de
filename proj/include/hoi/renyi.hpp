#pragma once

#include "hoi/rng.hpp"
#include "hoi/types.hpp"

#include <Eigen/Dense>

#include <vector>

namespace hoi::renyi {

/// n x n kernel evaluation matrix over samples. Raw form has an all-ones
/// diagonal; normalized form has trace 1 and its spectrum defines the
/// matrix-based Renyi entropy.
struct GramMatrix {
    Eigen::MatrixXd values;
    bool normalized = false;
    int dim() const { return static_cast<int>(values.rows()); }
};

/// Resolves the bandwidth policy against the samples entering one Gram:
/// the median of all n(n-1)/2 pairwise Euclidean distances. A zero median
/// falls back to the smallest nonzero distance; all-zero distances throw.
/// samples: d x n, one column per sample.
double resolve_bandwidth(const Eigen::MatrixXd& samples, const Bandwidth& bw);

/// Raw Gaussian-kernel matrix exp(-||x_i - x_j||^2 / (2 sigma^2)), computed
/// on the upper triangle and mirrored. Diagonal is all ones.
GramMatrix kernel_matrix(const Eigen::MatrixXd& samples, const Bandwidth& bw);

/// Trace-normalized Gram (kernel_matrix / n).
GramMatrix gram(const Eigen::MatrixXd& samples, const Bandwidth& bw);

/// Entrywise product of raw kernel matrices, then trace-normalized. PSD is
/// preserved (Schur product theorem). Inputs must be un-normalized and of
/// equal dimension.
GramMatrix joint_gram(const std::vector<const GramMatrix*>& kernels);

/// Renormalizes a raw kernel matrix (single-variable joint).
GramMatrix normalize(const GramMatrix& kernel);

/// Exact matrix-based Renyi entropy (1/(1-alpha)) log sum(lambda_i^alpha)
/// over the eigenvalues of a normalized Gram. Eigenvalues in [-1e-10, 0) are
/// clamped to 0; anything lower throws. Result lies in [0, log n] up to slack.
double entropy_exact(const GramMatrix& g, double alpha);

/// Deterministic probe set: s standard-normal vectors of length n, addressed
/// by a counter stream so regeneration from (seed, count, n) is bit-identical.
struct ProbeSet {
    int count;
    uint64_t seed;

    /// n x count matrix, one probe per column. Element (e, p) is normal
    /// value p*n + e of the stream.
    Eigen::MatrixXd materialize(int n) const;
};

/// Hutchinson estimate (1/s) sum_i g_i^T G^alpha g_i for integer alpha >= 2.
/// G^alpha acts through repeated products with the probe block (G^alpha is
/// never formed); the quadratic form is evaluated as the split
/// (G^ceil(a/2) g) . (G^floor(a/2) g), which is the same scalar and keeps
/// every term nonnegative for PSD G.
double trace_estimate(const GramMatrix& g, int alpha, const ProbeSet& probes);

/// Randomized matrix-based Renyi entropy from trace_estimate. Throws if the
/// estimate is not positive (numerical corruption).
double entropy_randomized(const GramMatrix& g, int alpha, const ProbeSet& probes);

/// Per-term probe seeds: a hash of (master_seed, sorted tuple, subset mask).
/// Keying by subset (not by term position) lets coinciding terms share one
/// estimate, which makes the K=2 identity O = 0 exact for the randomized
/// backend as well.
uint64_t term_seed(uint64_t master_seed, const TupleIndex& tuple, uint32_t subset_mask);

/// O-information of one channel tuple: TC_alpha - DTC_alpha from the 2K+1
/// subset entropies (K marginals, K leave-one-out joints, full joint), each
/// evaluated exactly once with the configured backend.
double o_information(const TimeSeriesMatrix& x, const TupleIndex& tuple,
                     const EstimatorConfig& cfg);

/// Same, over caller-supplied raw per-channel kernel matrices (kernels[i]
/// belongs to tuple channel i). Lets sweeps share kernels across tuples.
double o_information_from_kernels(const std::vector<const GramMatrix*>& kernels,
                                  const TupleIndex& tuple, const EstimatorConfig& cfg);

/// Pairwise mutual information H(X_i) + H(X_j) - H(X_i, X_j). Symmetric in
/// (i, j) bit-exactly via canonical ordering.
double pairwise_mi(const TimeSeriesMatrix& x, uint32_t i, uint32_t j,
                   const EstimatorConfig& cfg);
double pairwise_mi_from_kernels(const GramMatrix& ki, const GramMatrix& kj,
                                const TupleIndex& pair, const EstimatorConfig& cfg);

/// Entropy of a latent mini-batch (gram + entropy_exact); the building block
/// of entropy-regularized training objectives. latents: d x N_b columns.
double batch_entropy(const Eigen::MatrixXd& latents, const EstimatorConfig& cfg);

}  // namespace hoi::renyi
