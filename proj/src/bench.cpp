#include "hoi/bench.hpp"

#include "hoi/rng.hpp"
#include "hoi/views.hpp"

#include <nlohmann/json.hpp>

#include <Eigen/Cholesky>

#include <chrono>
#include <cstdio>
#include <sstream>

namespace hoi::bench {

namespace {

using json = nlohmann::json;

TimeSeriesMatrix::Matrix white_noise(int channels, int timepoints, uint64_t seed) {
    rng::CounterStream stream(rng::combine(seed, 0x73796e7468ull));
    TimeSeriesMatrix::Matrix m(channels, timepoints);
    for (int i = 0; i < channels; ++i)
        for (int j = 0; j < timepoints; ++j)
            m(i, j) = stream.normal(static_cast<uint64_t>(i) * timepoints + j);
    return m;
}

}  // namespace

TimeSeriesMatrix synth_dataset(int channels, int timepoints, uint64_t seed,
                               const SynthSpec& spec) {
    if (channels < 2 || timepoints < 2) throw Error("need C >= 2 and T >= 2");
    switch (spec.structure) {
        case SynthStructure::White:
            return TimeSeriesMatrix(white_noise(channels, timepoints, seed));
        case SynthStructure::Ar1: {
            if (!(std::abs(spec.phi) < 1.0)) throw Error("ar1 needs |phi| < 1");
            TimeSeriesMatrix::Matrix e = white_noise(channels, timepoints, seed);
            // x_0 = e_0; phi = 0 reproduces the white matrix byte for byte.
            for (int i = 0; i < channels; ++i)
                for (int j = 1; j < timepoints; ++j)
                    e(i, j) = spec.phi * e(i, j - 1) + e(i, j);
            return TimeSeriesMatrix(std::move(e));
        }
        case SynthStructure::BlockCorr: {
            if (!(std::abs(spec.rho) < 1.0)) throw Error("blockcorr needs |rho| < 1");
            if (spec.block_size < 1) throw Error("blockcorr needs block_size >= 1");
            TimeSeriesMatrix::Matrix e = white_noise(channels, timepoints, seed);
            TimeSeriesMatrix::Matrix out(channels, timepoints);
            for (int b0 = 0; b0 < channels; b0 += spec.block_size) {
                const int bs = std::min(spec.block_size, channels - b0);
                Eigen::MatrixXd sigma =
                    Eigen::MatrixXd::Constant(bs, bs, spec.rho) +
                    Eigen::MatrixXd::Identity(bs, bs) * (1.0 - spec.rho);
                Eigen::LLT<Eigen::MatrixXd> llt(sigma);
                if (llt.info() != Eigen::Success)
                    throw Error("blockcorr covariance is not positive definite");
                const Eigen::MatrixXd l = llt.matrixL();
                for (int j = 0; j < timepoints; ++j) {
                    Eigen::VectorXd z(bs);
                    for (int i = 0; i < bs; ++i) z(i) = e(b0 + i, j);
                    const Eigen::VectorXd v = l * z;
                    for (int i = 0; i < bs; ++i) out(b0 + i, j) = v(i);
                }
            }
            return TimeSeriesMatrix(std::move(out));
        }
    }
    throw Error("unknown synthetic structure");
}

std::string BenchReport::to_json() const {
    json j;
    j["config"] = {{"channels", channels}, {"timepoints", timepoints}, {"order", order},
                   {"workers", workers},   {"seed", seed},             {"tuples", tuples}};
    j["per_estimator"] = json::array();
    for (const auto& e : per_estimator)
        j["per_estimator"].push_back({{"name", e.name},
                                      {"wall_seconds", e.wall_seconds},
                                      {"tuples_per_second", e.tuples_per_second}});
    j["ratios"] = json::object();
    for (const auto& [name, ratio] : ratios) j["ratios"][name] = ratio;
    return j.dump(2);
}

BenchReport BenchReport::from_json(const std::string& text) {
    json j = json::parse(text);
    BenchReport r;
    r.channels = j["config"]["channels"].get<int>();
    r.timepoints = j["config"]["timepoints"].get<int>();
    r.order = j["config"]["order"].get<int>();
    r.workers = j["config"]["workers"].get<int>();
    r.seed = j["config"]["seed"].get<uint64_t>();
    r.tuples = j["config"]["tuples"].get<uint64_t>();
    for (const auto& e : j["per_estimator"])
        r.per_estimator.push_back({e["name"].get<std::string>(),
                                   e["wall_seconds"].get<double>(),
                                   e["tuples_per_second"].get<double>()});
    for (const auto& [name, ratio] : j["ratios"].items())
        r.ratios.emplace_back(name, ratio.get<double>());
    return r;
}

std::string BenchReport::to_table() const {
    std::ostringstream out;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "C=%d T=%d K=%d workers=%d tuples=%llu\n", channels,
                  timepoints, order, workers, static_cast<unsigned long long>(tuples));
    out << buf;
    std::snprintf(buf, sizeof(buf), "%-18s %12s %16s %10s\n", "estimator", "wall [s]",
                  "tuples/s", "speedup");
    out << buf;
    for (const auto& e : per_estimator) {
        double ratio = 1.0;
        for (const auto& [name, r] : ratios)
            if (name == e.name) ratio = r;
        std::snprintf(buf, sizeof(buf), "%-18s %12.3f %16.1f %9.1fx\n", e.name.c_str(),
                      e.wall_seconds, e.tuples_per_second, ratio);
        out << buf;
    }
    return out.str();
}

BenchReport run_benchmark(int channels, int timepoints, int order,
                          const std::vector<Estimator>& estimators,
                          const EstimatorConfig& base_cfg, int workers, uint64_t data_seed) {
    if (estimators.empty()) throw Error("benchmark needs at least one estimator");

    const TimeSeriesMatrix data =
        synth_dataset(channels, timepoints, data_seed, SynthSpec{SynthStructure::White});

    BenchReport report;
    report.channels = channels;
    report.timepoints = timepoints;
    report.order = order;
    report.workers = workers;
    report.seed = data_seed;
    report.tuples = combinatorics::choose(static_cast<uint32_t>(channels),
                                          static_cast<uint32_t>(order));

    views::BuildOptions opts;
    opts.workers = workers;

    for (Estimator est : estimators) {
        EstimatorConfig cfg = base_cfg;
        cfg.estimator = est;
        cfg.validate();
        const auto t0 = std::chrono::steady_clock::now();
        views::OrderView view = views::build_order_view(data, order, cfg, opts);
        const auto t1 = std::chrono::steady_clock::now();
        const double wall = std::chrono::duration<double>(t1 - t0).count();
        report.per_estimator.push_back(
            {estimator_name(est), wall,
             wall > 0.0 ? static_cast<double>(report.tuples) / wall : 0.0});
        if (!view.defects.empty())
            throw Error("benchmark sweep had defects with " +
                        std::string(estimator_name(est)));
    }

    // Baseline for the speedup ratios: exact Renyi when it ran, else the
    // first estimator (a single estimator then reports 1.0 against itself).
    double baseline = report.per_estimator.front().wall_seconds;
    for (const auto& e : report.per_estimator)
        if (e.name == estimator_name(Estimator::RenyiExact)) baseline = e.wall_seconds;
    for (const auto& e : report.per_estimator)
        report.ratios.emplace_back(e.name, e.wall_seconds > 0.0 ? baseline / e.wall_seconds : 1.0);

    return report;
}

}  // namespace hoi::bench
