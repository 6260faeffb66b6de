#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hoi/renyi.hpp"
#include "hoi/rng.hpp"

#include "oracles.hpp"

#include <cmath>

using namespace hoi;
using renyi::GramMatrix;

namespace {

Eigen::MatrixXd scalar_samples(std::initializer_list<double> xs) {
    Eigen::MatrixXd m(1, xs.size());
    int i = 0;
    for (double x : xs) m(0, i++) = x;
    return m;
}

Eigen::MatrixXd random_samples(int dim, int n, uint64_t seed) {
    rng::CounterStream stream(seed);
    Eigen::MatrixXd m(dim, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < dim; ++i) m(i, j) = stream.normal(static_cast<uint64_t>(j) * dim + i);
    return m;
}

}  // namespace

TEST_CASE("median heuristic on {0,1,3} resolves sigma = 2") {
    CHECK(renyi::resolve_bandwidth(scalar_samples({0, 1, 3}), Bandwidth::median()) == 2.0);
}

TEST_CASE("median heuristic falls back past zero distances") {
    // distances {0, 2, 2}: median 2; mostly-zero distances -> smallest nonzero
    CHECK(renyi::resolve_bandwidth(scalar_samples({1, 1, 3}), Bandwidth::median()) == 2.0);
    CHECK(renyi::resolve_bandwidth(scalar_samples({1, 1, 1, 1, 5}), Bandwidth::median()) == 4.0);
    CHECK_THROWS_AS(renyi::resolve_bandwidth(scalar_samples({2, 2, 2}), Bandwidth::median()),
                    Error);
}

TEST_CASE("gram is trace-normalized with unit raw diagonal") {
    const auto samples = random_samples(2, 16, 7);
    const auto raw = renyi::kernel_matrix(samples, Bandwidth::fixed(1.5));
    CHECK_FALSE(raw.normalized);
    for (int i = 0; i < raw.dim(); ++i) CHECK(raw.values(i, i) == 1.0);
    CHECK(raw.values == raw.values.transpose().eval());
    const auto g = renyi::gram(samples, Bandwidth::fixed(1.5));
    CHECK(g.normalized);
    CHECK(std::abs(g.values.trace() - 1.0) < 1e-12);
}

TEST_CASE("identical samples give the all-ones kernel") {
    const auto g = renyi::gram(scalar_samples({4, 4, 4, 4}), Bandwidth::fixed(2.0));
    CHECK((g.values.array() - 0.25).abs().maxCoeff() == 0.0);
    CHECK(renyi::entropy_exact(g, 2.0) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("joint gram is the hadamard product, renormalized") {
    const auto a = renyi::kernel_matrix(random_samples(1, 8, 1), Bandwidth::fixed(1.0));
    const auto b = renyi::kernel_matrix(random_samples(1, 8, 2), Bandwidth::fixed(0.7));
    const auto j = renyi::joint_gram({&a, &b});
    CHECK(j.normalized);
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c)
            CHECK(j.values(r, c) ==
                  doctest::Approx(a.values(r, c) * b.values(r, c) / 8.0).epsilon(1e-15));

    // all-ones kernel is the identity element
    GramMatrix ones{Eigen::MatrixXd::Ones(8, 8), false};
    const auto j2 = renyi::joint_gram({&a, &ones});
    CHECK((j2.values - a.values / 8.0).cwiseAbs().maxCoeff() == 0.0);

    GramMatrix small{Eigen::MatrixXd::Ones(4, 4), false};
    CHECK_THROWS_AS(renyi::joint_gram({&a, &small}), Error);
}

TEST_CASE("exact entropy spot values") {
    // orthogonal-sample limit: G = I/n -> log n for any alpha
    GramMatrix id{Eigen::MatrixXd::Identity(6, 6) / 6.0, true};
    CHECK(renyi::entropy_exact(id, 2.0) == doctest::Approx(std::log(6.0)).epsilon(1e-12));
    CHECK(renyi::entropy_exact(id, 1.01) == doctest::Approx(std::log(6.0)).epsilon(1e-12));

    // n=2 spectrum {0.75, 0.25}, alpha=2 -> -log(0.625)
    Eigen::MatrixXd g(2, 2);
    g << 0.5, 0.25, 0.25, 0.5;
    CHECK(renyi::entropy_exact(GramMatrix{g, true}, 2.0) ==
          doctest::Approx(-std::log(0.625)).epsilon(1e-12));
}

TEST_CASE("exact entropy stays within [0, log n]") {
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 16 + (trial % 3) * 16;
        const auto g = renyi::gram(random_samples(1 + trial % 3, n, 50 + trial),
                                   Bandwidth::median());
        for (double alpha : {1.01, 2.0, 3.0}) {
            const double h = renyi::entropy_exact(g, alpha);
            CHECK(h >= -1e-9);
            CHECK(h <= std::log(n) + 1e-9);
        }
    }
}

TEST_CASE("probe sets regenerate bit-identically") {
    const renyi::ProbeSet p{30, 1234};
    const Eigen::MatrixXd a = p.materialize(64);
    const Eigen::MatrixXd b = p.materialize(64);
    CHECK(a == b);
    const renyi::ProbeSet q{30, 1235};
    CHECK(p.materialize(64) != q.materialize(64));
}

TEST_CASE("hutchinson estimates are unbiased in the 3-SE sense") {
    const auto g = renyi::gram(random_samples(2, 64, 99), Bandwidth::median());
    const double exact = g.values.squaredNorm();  // tr(G^2) for symmetric G
    const int runs = 200;
    std::vector<double> est(runs);
    for (int r = 0; r < runs; ++r)
        est[r] = renyi::trace_estimate(g, 2, renyi::ProbeSet{30, 5000 + (uint64_t)r});
    double mean = 0;
    for (double e : est) mean += e;
    mean /= runs;
    double ss = 0;
    for (double e : est) ss += (e - mean) * (e - mean);
    const double se = std::sqrt(ss / (runs - 1)) / std::sqrt(static_cast<double>(runs));
    CHECK(std::abs(mean - exact) <= 3 * se);
}

TEST_CASE("randomized entropy approaches exact as probes grow") {
    for (int n : {32, 64, 128}) {
        for (int alpha : {2, 3}) {
            const Eigen::MatrixXd gm = oracles::random_gram(n, 40 + n + alpha);
            const GramMatrix g{gm, true};
            const double exact = renyi::entropy_exact(g, alpha);
            const double approx =
                renyi::entropy_randomized(g, alpha, renyi::ProbeSet{1000, 321});
            CHECK(std::abs(approx - exact) / std::abs(exact) < 0.02);
        }
    }
}

TEST_CASE("randomized entropy is deterministic given the seed") {
    const auto g = renyi::gram(random_samples(1, 48, 11), Bandwidth::median());
    const renyi::ProbeSet p{30, 777};
    CHECK(renyi::entropy_randomized(g, 2, p) == renyi::entropy_randomized(g, 2, p));
}

TEST_CASE("rank-one gram has near-zero randomized entropy") {
    GramMatrix ones{Eigen::MatrixXd::Ones(32, 32) / 32.0, true};
    const double h = renyi::entropy_randomized(ones, 2, renyi::ProbeSet{1000, 4});
    CHECK(std::abs(h) < 0.1);
}

TEST_CASE("o-information at K=2 vanishes exactly for both backends") {
    const auto data = oracles::sample_gaussian(oracles::random_spd(2, 8), 96, 19);
    const TupleIndex pair({0, 1});
    EstimatorConfig cfg;
    cfg.estimator = Estimator::RenyiExact;
    cfg.alpha = 1.01;
    CHECK(renyi::o_information(data, pair, cfg) == 0.0);
    cfg.estimator = Estimator::RenyiRandomized;
    cfg.alpha = 2.0;
    cfg.probes = 8;
    CHECK(renyi::o_information(data, pair, cfg) == 0.0);
}

TEST_CASE("o-information of independent white noise is near zero") {
    rng::CounterStream seeds(60);
    EstimatorConfig cfg;
    cfg.estimator = Estimator::RenyiExact;
    cfg.alpha = 2.0;
    for (int trial = 0; trial < 3; ++trial) {
        const auto data = standardize(oracles::sample_gaussian(
            Eigen::MatrixXd::Identity(3, 3), 256, seeds.bits(trial)));
        const double o = renyi::o_information(data, TupleIndex({0, 1, 2}), cfg);
        CHECK(std::abs(o) <= 0.05);
    }
}

TEST_CASE("o-information is invariant to input tuple order") {
    const auto data =
        standardize(oracles::sample_gaussian(oracles::random_spd(4, 77), 128, 3));
    EstimatorConfig cfg;
    cfg.estimator = Estimator::RenyiRandomized;
    cfg.alpha = 2;
    cfg.probes = 16;
    // TupleIndex is canonical by construction; permuted query paths go
    // through canonical(), so both spellings hit the same seeds.
    const double a = renyi::o_information(data, TupleIndex::canonical({2, 0, 3}), cfg);
    const double b = renyi::o_information(data, TupleIndex::canonical({3, 2, 0}), cfg);
    CHECK(a == b);
}

TEST_CASE("pairwise mi is symmetric and nonnegative") {
    const auto data =
        standardize(oracles::sample_gaussian(oracles::random_spd(3, 21), 128, 9));
    EstimatorConfig cfg;
    cfg.estimator = Estimator::RenyiExact;
    cfg.alpha = 1.01;
    const double ij = renyi::pairwise_mi(data, 0, 2, cfg);
    const double ji = renyi::pairwise_mi(data, 2, 0, cfg);
    CHECK(ij == ji);
    CHECK(ij >= -1e-6);
    CHECK_THROWS_AS(renyi::pairwise_mi(data, 1, 1, cfg), Error);
}

TEST_CASE("pairwise mi of independent channels stays small") {
    rng::CounterStream seeds(61);
    EstimatorConfig cfg;
    cfg.estimator = Estimator::RenyiExact;
    cfg.alpha = 1.01;
    for (int trial = 0; trial < 3; ++trial) {
        const auto data = standardize(oracles::sample_gaussian(
            Eigen::MatrixXd::Identity(2, 2), 256, seeds.bits(100 + trial)));
        CHECK(renyi::pairwise_mi(data, 0, 1, cfg) <= 0.1);
    }
}

TEST_CASE("duplicate channel: mi is bounded by the self entropy") {
    // With the hadamard joint, H(X,X) >= H(X) (the joint sharpens the
    // kernel), so I = 2H - H_joint <= H; equality needs well-separated
    // samples. The dominance direction I >= H holds only in that regime.
    TimeSeriesMatrix::Matrix m(2, 48);
    rng::CounterStream stream(17);
    for (int j = 0; j < 48; ++j) m(0, j) = m(1, j) = stream.normal(j);
    const TimeSeriesMatrix dup(m);
    EstimatorConfig cfg;
    cfg.estimator = Estimator::RenyiExact;
    cfg.alpha = 2.0;

    const Eigen::MatrixXd samples = dup.values().row(0);
    const double h = renyi::entropy_exact(renyi::gram(samples, cfg.bandwidth), cfg.alpha);
    const double mi = renyi::pairwise_mi(dup, 0, 1, cfg);
    CHECK(mi >= -1e-9);
    CHECK(mi <= h + 1e-9);

    // well-separated regime: distances >> sigma, gram ~ I/n, I ~ H ~ log n
    TimeSeriesMatrix::Matrix sep(2, 32);
    for (int j = 0; j < 32; ++j) sep(0, j) = sep(1, j) = 10.0 * j;
    const TimeSeriesMatrix far(sep);
    EstimatorConfig tight = cfg;
    tight.bandwidth = Bandwidth::fixed(0.5);
    const double h_far = renyi::entropy_exact(
        renyi::gram(Eigen::MatrixXd(far.values().row(0)), tight.bandwidth), tight.alpha);
    const double mi_far = renyi::pairwise_mi(far, 0, 1, tight);
    CHECK(mi_far >= h_far - 1e-3);
}

TEST_CASE("joint entropy dominates both marginals") {
    EstimatorConfig cfg;
    cfg.alpha = 1.01;
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = renyi::kernel_matrix(random_samples(1, 40, 300 + trial),
                                            Bandwidth::median());
        const auto b = renyi::kernel_matrix(random_samples(2, 40, 400 + trial),
                                            Bandwidth::median());
        const double ha = renyi::entropy_exact(renyi::normalize(a), cfg.alpha);
        const double hb = renyi::entropy_exact(renyi::normalize(b), cfg.alpha);
        const double hj = renyi::entropy_exact(renyi::joint_gram({&a, &b}), cfg.alpha);
        CHECK(hj >= std::max(ha, hb) - 1e-6);
    }
}

TEST_CASE("batch entropy limits") {
    // identical latent vectors -> rank-one gram -> zero entropy
    Eigen::MatrixXd same = Eigen::MatrixXd::Ones(4, 8);
    EstimatorConfig cfg = EstimatorConfig::batch_entropy_defaults();
    CHECK(renyi::batch_entropy(same, cfg) == doctest::Approx(0.0).epsilon(1e-9));

    // mutually distant vectors -> log N_b
    Eigen::MatrixXd far = Eigen::MatrixXd::Zero(1, 8);
    for (int j = 0; j < 8; ++j) far(0, j) = 1000.0 * j;
    CHECK(renyi::batch_entropy(far, cfg) == doctest::Approx(std::log(8.0)).epsilon(1e-3));

    // definitional pass-through at alpha=1.01, sigma=5
    const Eigen::MatrixXd batch = random_samples(3, 8, 1001);
    const double direct = renyi::entropy_exact(renyi::gram(batch, cfg.bandwidth), cfg.alpha);
    CHECK(renyi::batch_entropy(batch, cfg) == direct);
}
