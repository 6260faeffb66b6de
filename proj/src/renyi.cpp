#include "hoi/renyi.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numbers>

namespace hoi::renyi {

namespace {

constexpr double kEigenClamp = -1e-10;

void check_samples(const Eigen::MatrixXd& samples) {
    if (samples.cols() < 2) throw Error("gram needs at least 2 samples");
    if (samples.cols() > 20000)
        throw Error("gram dimension " + std::to_string(samples.cols()) +
                    " exceeds the dense-kernel bound (20000)");
}

}  // namespace

double resolve_bandwidth(const Eigen::MatrixXd& samples, const Bandwidth& bw) {
    if (!bw.is_median()) return *bw.sigma;
    const int n = static_cast<int>(samples.cols());
    std::vector<double> dist;
    dist.reserve(static_cast<size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            dist.push_back((samples.col(i) - samples.col(j)).norm());
    std::sort(dist.begin(), dist.end());
    const size_t m = dist.size();
    double sigma = (m % 2 == 1) ? dist[m / 2] : 0.5 * (dist[m / 2 - 1] + dist[m / 2]);
    if (sigma == 0.0) {
        auto it = std::find_if(dist.begin(), dist.end(), [](double d) { return d > 0.0; });
        if (it == dist.end())
            throw Error("degenerate bandwidth: all samples identical under median heuristic");
        sigma = *it;
    }
    return sigma;
}

GramMatrix kernel_matrix(const Eigen::MatrixXd& samples, const Bandwidth& bw) {
    check_samples(samples);
    const int n = static_cast<int>(samples.cols());
    const double sigma = resolve_bandwidth(samples, bw);
    const double inv = -1.0 / (2.0 * sigma * sigma);
    Eigen::MatrixXd k(n, n);
    for (int i = 0; i < n; ++i) {
        k(i, i) = 1.0;
        for (int j = i + 1; j < n; ++j) {
            const double d2 = (samples.col(i) - samples.col(j)).squaredNorm();
            k(i, j) = k(j, i) = std::exp(d2 * inv);
        }
    }
    return GramMatrix{std::move(k), false};
}

GramMatrix gram(const Eigen::MatrixXd& samples, const Bandwidth& bw) {
    return normalize(kernel_matrix(samples, bw));
}

GramMatrix normalize(const GramMatrix& kernel) {
    if (kernel.normalized) throw Error("gram already normalized");
    GramMatrix g{kernel.values / static_cast<double>(kernel.dim()), true};
    return g;
}

GramMatrix joint_gram(const std::vector<const GramMatrix*>& kernels) {
    if (kernels.size() < 2) throw Error("joint gram needs at least 2 kernels");
    const int n = kernels.front()->dim();
    for (const auto* k : kernels) {
        if (k->normalized) throw Error("joint gram takes un-normalized kernel matrices");
        if (k->dim() != n) throw Error("joint gram dimension mismatch");
    }
    const double inv_n = 1.0 / n;
    Eigen::MatrixXd prod;
    // Single-pass expression per arity; tuple sweeps hit this on every term
    // and intermediate temporaries would dominate the cost.
    const auto& k0 = kernels[0]->values;
    const auto& k1 = kernels[1]->values;
    switch (kernels.size()) {
        case 2:
            prod = k0.cwiseProduct(k1) * inv_n;
            break;
        case 3:
            prod = k0.cwiseProduct(k1).cwiseProduct(kernels[2]->values) * inv_n;
            break;
        case 4:
            prod = k0.cwiseProduct(k1)
                       .cwiseProduct(kernels[2]->values)
                       .cwiseProduct(kernels[3]->values) *
                   inv_n;
            break;
        default:
            prod = k0.cwiseProduct(k1);
            for (size_t i = 2; i < kernels.size(); ++i)
                prod = prod.cwiseProduct(kernels[i]->values);
            prod *= inv_n;
            break;
    }
    return GramMatrix{std::move(prod), true};
}

double entropy_exact(const GramMatrix& g, double alpha) {
    if (!g.normalized) throw Error("entropy needs a normalized gram");
    if (!(alpha > 0.0) || alpha == 1.0) throw Error("alpha must be positive and != 1");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.values, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
    double sum = 0.0;
    for (int i = 0; i < g.dim(); ++i) {
        double lambda = es.eigenvalues()(i);
        if (lambda < kEigenClamp)
            throw Error("gram eigenvalue " + std::to_string(lambda) +
                        " below the PSD noise floor");
        if (lambda < 0.0) lambda = 0.0;
        sum += std::pow(lambda, alpha);
    }
    if (!(sum > 0.0)) throw Error("spectral sum is not positive");
    return std::log(sum) / (1.0 - alpha);
}

Eigen::MatrixXd ProbeSet::materialize(int n) const {
    rng::CounterStream stream(seed);
    Eigen::MatrixXd p(n, count);
    // Column-major storage makes memory index f the stream counter. Walking
    // Box-Muller pairs emits both outputs of each (u1, u2) draw, bit-identical
    // to stream.normal(f) element by element at half the transcendental cost.
    double* data = p.data();
    const uint64_t total = static_cast<uint64_t>(n) * count;
    for (uint64_t f = 0; f < total; f += 2) {
        const uint64_t pair = f >> 1;
        const double u1 = stream.uniform(2 * pair);
        const double u2 = stream.uniform(2 * pair + 1);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        data[f] = r * std::cos(theta);
        if (f + 1 < total) data[f + 1] = r * std::sin(theta);
    }
    return p;
}

double trace_estimate(const GramMatrix& g, int alpha, const ProbeSet& probes) {
    if (!g.normalized) throw Error("trace estimate needs a normalized gram");
    if (alpha < 2) throw Error("randomized estimator requires integer alpha >= 2");
    if (probes.count < 1) throw Error("probe count must be >= 1");
    const Eigen::MatrixXd p = probes.materialize(g.dim());
    const int hi = (alpha + 1) / 2;
    const int lo = alpha / 2;
    Eigen::MatrixXd y = g.values * p;
    Eigen::MatrixXd y_lo;
    if (lo == 1 && lo != hi) y_lo = y;
    for (int k = 2; k <= hi; ++k) {
        y = g.values * y;
        if (k == lo && lo != hi) y_lo = y;
    }
    if (lo == hi) return y.squaredNorm() / probes.count;
    return y_lo.cwiseProduct(y).sum() / probes.count;
}

double entropy_randomized(const GramMatrix& g, int alpha, const ProbeSet& probes) {
    const double est = trace_estimate(g, alpha, probes);
    if (!(est > 0.0) || !std::isfinite(est))
        throw Error("randomized trace estimate is not positive (" + std::to_string(est) + ")");
    return std::log(est) / (1.0 - alpha);
}

uint64_t term_seed(uint64_t master_seed, const TupleIndex& tuple, uint32_t subset_mask) {
    uint64_t h = rng::combine(master_seed, 0x484f49u);  // domain separator
    h = rng::combine(h, static_cast<uint64_t>(tuple.order()));
    for (int i = 0; i < tuple.order(); ++i) h = rng::combine(h, tuple[i]);
    return rng::combine(h, subset_mask);
}

namespace {

/// Evaluates the 2K+1 subset entropies of one tuple, each exactly once,
/// keyed by subset mask so coinciding terms share a value.
class TupleEntropies {
public:
    TupleEntropies(const std::vector<const GramMatrix*>& kernels, const TupleIndex& tuple,
                   const EstimatorConfig& cfg)
        : kernels_(kernels), tuple_(tuple), cfg_(cfg) {
        values_.assign(size_t{1} << kernels.size(), 0.0);
        have_.assign(size_t{1} << kernels.size(), 0);
    }

    double at(uint32_t mask) {
        if (!have_[mask]) {
            values_[mask] = evaluate(mask);
            have_[mask] = 1;
        }
        return values_[mask];
    }

private:
    double evaluate(uint32_t mask) {
        GramMatrix g = build_gram(mask);
        if (cfg_.estimator == Estimator::RenyiRandomized) {
            ProbeSet probes{cfg_.probes, term_seed(cfg_.master_seed, tuple_, mask)};
            return entropy_randomized(g, static_cast<int>(cfg_.alpha), probes);
        }
        return entropy_exact(g, cfg_.alpha);
    }

    GramMatrix build_gram(uint32_t mask) const {
        std::vector<const GramMatrix*> members;
        for (size_t i = 0; i < kernels_.size(); ++i)
            if (mask & (1u << i)) members.push_back(kernels_[i]);
        if (members.size() == 1) return normalize(*members.front());
        return joint_gram(members);
    }

    const std::vector<const GramMatrix*>& kernels_;
    const TupleIndex& tuple_;
    const EstimatorConfig& cfg_;
    std::vector<double> values_;
    std::vector<uint8_t> have_;
};

}  // namespace

double o_information_from_kernels(const std::vector<const GramMatrix*>& kernels,
                                  const TupleIndex& tuple, const EstimatorConfig& cfg) {
    cfg.validate();
    const int k = tuple.order();
    if (static_cast<int>(kernels.size()) != k)
        throw Error("kernel count does not match tuple order");
    const uint32_t full = (1u << k) - 1;
    TupleEntropies h(kernels, tuple, cfg);

    double marginal_sum = 0.0;
    for (int i = 0; i < k; ++i) marginal_sum += h.at(1u << i);
    const double joint = h.at(full);
    const double tc = marginal_sum - joint;

    double loo_sum = 0.0;
    for (int i = 0; i < k; ++i) loo_sum += h.at(full ^ (1u << i));
    const double dtc = loo_sum - (k - 1) * joint;

    return tc - dtc;
}

double o_information(const TimeSeriesMatrix& x, const TupleIndex& tuple,
                     const EstimatorConfig& cfg) {
    cfg.validate();
    const int k = tuple.order();
    std::vector<GramMatrix> kernels;
    kernels.reserve(k);
    for (int i = 0; i < k; ++i) {
        if (tuple[i] >= static_cast<uint32_t>(x.channels()))
            throw Error("tuple channel out of range: " + tuple.to_string());
        const Eigen::MatrixXd samples =
            x.values().row(static_cast<int>(tuple[i]));  // 1 x T, columns are samples
        kernels.push_back(kernel_matrix(samples, cfg.bandwidth));
    }
    std::vector<const GramMatrix*> ptrs;
    for (const auto& g : kernels) ptrs.push_back(&g);
    try {
        return o_information_from_kernels(ptrs, tuple, cfg);
    } catch (const Error& e) {
        throw Error(std::string(e.what()) + " for tuple " + tuple.to_string());
    }
}

double pairwise_mi_from_kernels(const GramMatrix& ki, const GramMatrix& kj,
                                const TupleIndex& pair, const EstimatorConfig& cfg) {
    cfg.validate();
    std::vector<const GramMatrix*> kernels{&ki, &kj};
    TupleEntropies h(kernels, pair, cfg);
    return h.at(1u) + h.at(2u) - h.at(3u);
}

double pairwise_mi(const TimeSeriesMatrix& x, uint32_t i, uint32_t j,
                   const EstimatorConfig& cfg) {
    if (i == j) throw Error("pairwise MI needs distinct channels");
    const TupleIndex pair = TupleIndex::canonical({i, j});
    const Eigen::MatrixXd si = x.values().row(static_cast<int>(pair[0]));
    const Eigen::MatrixXd sj = x.values().row(static_cast<int>(pair[1]));
    const GramMatrix ka = kernel_matrix(si, cfg.bandwidth);
    const GramMatrix kb = kernel_matrix(sj, cfg.bandwidth);
    return pairwise_mi_from_kernels(ka, kb, pair, cfg);
}

double batch_entropy(const Eigen::MatrixXd& latents, const EstimatorConfig& cfg) {
    cfg.validate();
    return entropy_exact(gram(latents, cfg.bandwidth), cfg.alpha);
}

}  // namespace hoi::renyi
