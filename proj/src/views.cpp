#include "hoi/views.hpp"

#include "hoi/gaussian.hpp"
#include "hoi/renyi.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>

namespace hoi::views {

namespace {

using Clock = std::chrono::steady_clock;

struct RankedDefect {
    uint64_t rank;
    Defect defect;
};

/// Rate-limited progress relay. Interim events at most every 100 ms, fired
/// from the master thread only; finish() always emits the final event.
class Progress {
public:
    Progress(const ProgressFn& fn, uint64_t total) : fn_(fn), total_(total), start_(Clock::now()) {}

    void add(uint64_t n) { done_.fetch_add(n, std::memory_order_relaxed); }

    void poll() {
        if (!fn_) return;
        const auto now = Clock::now();
        if (now - last_ < std::chrono::milliseconds(100)) return;
        last_ = now;
        fn_(done_.load(std::memory_order_relaxed), total_, elapsed(now));
    }

    void finish() {
        // reports the accumulated count, which equals the total exactly when
        // every tuple was processed once
        if (fn_) fn_(done_.load(std::memory_order_relaxed), total_, elapsed(Clock::now()));
    }

private:
    double elapsed(Clock::time_point now) const {
        return std::chrono::duration<double>(now - start_).count();
    }
    const ProgressFn& fn_;
    uint64_t total_;
    std::atomic<uint64_t> done_{0};
    Clock::time_point start_;
    Clock::time_point last_{};
};

/// Gaussian sweep state: channel means and the full C x C covariance,
/// computed once with the same per-entry dot product covariance() uses, so a
/// sliced tuple covariance is bit-identical to the direct computation.
struct GaussianCache {
    Eigen::MatrixXd cov;

    GaussianCache(const TimeSeriesMatrix& x) {
        const int c = x.channels();
        const int t = x.timepoints();
        Eigen::VectorXd mean(c);
        for (int i = 0; i < c; ++i) {
            double m = 0.0;
            const auto row = x.channel(i);
            for (int s = 0; s < t; ++s) m += row(s);
            mean(i) = m / t;
        }
        cov.resize(c, c);
        for (int i = 0; i < c; ++i) {
            const auto ri = x.channel(i);
            for (int j = i; j < c; ++j) {
                const auto rj = x.channel(j);
                double acc = 0.0;
                for (int s = 0; s < t; ++s) acc += (ri(s) - mean(i)) * (rj(s) - mean(j));
                cov(i, j) = cov(j, i) = acc / (t - 1);
            }
        }
    }

    gaussian::CovarianceMatrix slice(const TupleIndex& tuple, double ridge) const {
        const int k = tuple.order();
        Eigen::MatrixXd s(k, k);
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b) s(a, b) = cov(tuple[a], tuple[b]);
        if (ridge > 0.0) {
            const double bump = ridge * (s.trace() / k);
            for (int a = 0; a < k; ++a) s(a, a) += bump;
        }
        return gaussian::CovarianceMatrix{std::move(s)};
    }
};

/// Renyi sweep state: per-channel raw kernel matrices, cached when they fit
/// the configured byte budget and rebuilt per tuple otherwise.
struct KernelCache {
    const TimeSeriesMatrix& x;
    Bandwidth bandwidth;
    bool cached = false;
    std::vector<renyi::GramMatrix> kernels;

    KernelCache(const TimeSeriesMatrix& ts, const Bandwidth& bw, uint64_t cap_bytes)
        : x(ts), bandwidth(bw) {
        const uint64_t need = static_cast<uint64_t>(x.channels()) * x.timepoints() *
                              x.timepoints() * sizeof(double);
        if (need <= cap_bytes) {
            kernels.resize(x.channels());
            cached = true;
        }
    }

    void prefill(int workers) {
        if (!cached) return;
        const int c = x.channels();
        std::atomic<bool> failed{false};
        std::string first_error;
#pragma omp parallel for schedule(static) num_threads(workers)
        for (int i = 0; i < c; ++i) {
            try {
                kernels[i] = build(i);
            } catch (const std::exception& e) {
                bool expected = false;
                if (failed.compare_exchange_strong(expected, true))
                    first_error = e.what();
            }
        }
        if (failed) throw Error("kernel cache build failed: " + first_error);
    }

    renyi::GramMatrix build(int channel) const {
        const Eigen::MatrixXd samples = x.values().row(channel);
        return renyi::kernel_matrix(samples, bandwidth);
    }

    /// Pointers valid for the duration of one tuple evaluation; `local` backs
    /// the uncached mode.
    std::vector<const renyi::GramMatrix*> get(const TupleIndex& tuple,
                                              std::vector<renyi::GramMatrix>& local) const {
        std::vector<const renyi::GramMatrix*> out(tuple.order());
        if (cached) {
            for (int i = 0; i < tuple.order(); ++i) out[i] = &kernels[tuple[i]];
        } else {
            local.clear();
            local.reserve(tuple.order());
            for (int i = 0; i < tuple.order(); ++i) local.push_back(build(tuple[i]));
            for (int i = 0; i < tuple.order(); ++i) out[i] = &local[i];
        }
        return out;
    }
};

/// Partitions [0, total) into `workers` contiguous chunks and runs
/// fn(rank, tuple) over each. Results must go to rank-addressed slots; the
/// output is then independent of the partition. workers == 1 runs the plain
/// serial loop that the parallel path is tested against.
template <typename Fn>
void sweep(uint32_t num_channels, int order, uint64_t total, int workers, Progress& progress,
           Fn&& fn) {
    if (total == 0) return;
    const auto run_chunk = [&](uint64_t begin, uint64_t end, bool master) {
        if (begin >= end) return;
        TupleIndex t = combinatorics::unrank(num_channels, order, begin);
        std::array<uint32_t, TupleIndex::kMaxOrder> idx = t.raw();
        for (uint64_t r = begin; r < end; ++r) {
            fn(r, TupleIndex(std::vector<uint32_t>(idx.begin(), idx.begin() + order)));
            progress.add(1);
            if (master && (r - begin) % 64 == 0) progress.poll();
            if (r + 1 < end) combinatorics::next_combination(num_channels, order, idx.data());
        }
    };

    if (workers <= 1) {
        run_chunk(0, total, true);
        return;
    }
    const int w = workers;
#pragma omp parallel num_threads(w)
    {
        const int tid = omp_get_thread_num();
        const int nt = omp_get_num_threads();
        const uint64_t chunk = (total + nt - 1) / nt;
        const uint64_t begin = std::min(total, chunk * tid);
        const uint64_t end = std::min(total, begin + chunk);
        run_chunk(begin, end, tid == 0);
    }
}

}  // namespace

PairwiseView build_pairwise_view(const TimeSeriesMatrix& x, const EstimatorConfig& cfg,
                                 const BuildOptions& opts) {
    cfg.validate();
    const bool gaussian_path = cfg.estimator == Estimator::Gaussian;
    const TimeSeriesMatrix data = gaussian_path ? x : standardize(x);
    const uint32_t c = static_cast<uint32_t>(data.channels());
    const uint64_t total = combinatorics::choose(c, 2);
    const int workers = std::max(1, opts.workers);

    PairwiseMatrix matrix(c);
    std::vector<RankedDefect> ranked;
    std::vector<std::vector<RankedDefect>> per_thread(workers);

    Progress progress(opts.progress, total);

    std::optional<GaussianCache> gcache;
    std::optional<KernelCache> kcache;
    if (gaussian_path) {
        gcache.emplace(data);
    } else {
        kcache.emplace(data, cfg.bandwidth, opts.kernel_cache_cap_bytes);
        kcache->prefill(workers);
    }

    sweep(c, 2, total, workers, progress, [&](uint64_t rank, const TupleIndex& pair) {
        const int tid = workers <= 1 ? 0 : omp_get_thread_num();
        try {
            double v;
            if (gaussian_path) {
                v = gaussian::total_correlation(gcache->slice(pair, cfg.ridge));
            } else {
                std::vector<renyi::GramMatrix> local;
                const auto kernels = kcache->get(pair, local);
                v = renyi::pairwise_mi_from_kernels(*kernels[0], *kernels[1], pair, cfg);
            }
            matrix.set_pair(pair[0], pair[1], v);
        } catch (const std::exception& e) {
            matrix.set_pair(pair[0], pair[1], std::numeric_limits<double>::quiet_NaN());
            per_thread[tid].push_back({rank, Defect{pair, e.what()}});
        }
    });
    progress.finish();

    for (auto& v : per_thread)
        ranked.insert(ranked.end(), v.begin(), v.end());
    std::sort(ranked.begin(), ranked.end(),
              [](const RankedDefect& a, const RankedDefect& b) { return a.rank < b.rank; });

    PairwiseView out{std::move(matrix), {}};
    for (auto& r : ranked) out.defects.push_back(std::move(r.defect));
    return out;
}

PairwiseMatrix sparsify_top_fraction(const PairwiseMatrix& m, double fraction) {
    if (!(fraction > 0.0) || fraction > 1.0) throw Error("fraction must be in (0, 1]");
    const uint32_t c = m.num_channels();

    struct Pair {
        double mag;
        uint32_t i, j;
    };
    std::vector<Pair> pairs;
    for (uint32_t i = 0; i < c; ++i)
        for (uint32_t j = i + 1; j < c; ++j)
            if (std::isfinite(m(i, j))) pairs.push_back({std::abs(m(i, j)), i, j});
    if (pairs.empty()) throw Error("no finite off-diagonal entries to threshold");

    const uint64_t keep = static_cast<uint64_t>(
        std::ceil(fraction * static_cast<double>(pairs.size())));
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        if (a.mag != b.mag) return a.mag > b.mag;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });

    PairwiseMatrix out(c);
    for (uint64_t r = 0; r < keep && r < pairs.size(); ++r)
        out.set_pair(pairs[r].i, pairs[r].j, m(pairs[r].i, pairs[r].j));
    return out;
}

OrderView build_order_view(const TimeSeriesMatrix& x, int order, const EstimatorConfig& cfg,
                           const BuildOptions& opts) {
    cfg.validate();
    if (order < 3 || order > 4) throw Error("order view supports K in {3,4}");
    if (x.channels() < order) throw Error("need C >= K channels");

    const bool gaussian_path = cfg.estimator == Estimator::Gaussian;
    const TimeSeriesMatrix data = gaussian_path ? x : standardize(x);
    const uint32_t c = static_cast<uint32_t>(data.channels());
    const uint64_t total = combinatorics::choose(c, static_cast<uint32_t>(order));
    const int workers = std::max(1, opts.workers);

    InteractionTensor tensor(order, c, cfg.tag());
    std::vector<std::vector<RankedDefect>> per_thread(workers);
    Progress progress(opts.progress, total);

    std::optional<GaussianCache> gcache;
    std::optional<KernelCache> kcache;
    if (gaussian_path) {
        gcache.emplace(data);
    } else {
        kcache.emplace(data, cfg.bandwidth, opts.kernel_cache_cap_bytes);
        kcache->prefill(workers);
    }

    sweep(c, order, total, workers, progress, [&](uint64_t rank, const TupleIndex& tuple) {
        const int tid = workers <= 1 ? 0 : omp_get_thread_num();
        try {
            double v;
            if (gaussian_path) {
                v = gaussian::o_information(gcache->slice(tuple, cfg.ridge));
            } else {
                std::vector<renyi::GramMatrix> local;
                const auto kernels = kcache->get(tuple, local);
                v = renyi::o_information_from_kernels(kernels, tuple, cfg);
            }
            tensor.set_by_rank(rank, v);
        } catch (const std::exception& e) {
            per_thread[tid].push_back({rank, Defect{tuple, e.what()}});
        }
    });
    progress.finish();

    std::vector<RankedDefect> ranked;
    for (auto& v : per_thread)
        ranked.insert(ranked.end(), v.begin(), v.end());
    std::sort(ranked.begin(), ranked.end(),
              [](const RankedDefect& a, const RankedDefect& b) { return a.rank < b.rank; });

    if (ranked.size() * 100 > total)
        throw Error("order-" + std::to_string(order) + " sweep failed: " +
                    std::to_string(ranked.size()) + " of " + std::to_string(total) +
                    " tuples defective (first: " + ranked.front().defect.message + ")");

    OrderView out{std::move(tensor), {}};
    for (auto& r : ranked) out.defects.push_back(std::move(r.defect));
    return out;
}

}  // namespace hoi::views
