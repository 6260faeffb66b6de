#pragma once

#include "hoi/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hoi::bench {

enum class SynthStructure { White, Ar1, BlockCorr };

struct SynthSpec {
    SynthStructure structure = SynthStructure::White;
    double phi = 0.0;       // AR(1) coefficient, |phi| < 1
    double rho = 0.0;       // within-block correlation, |rho| < 1
    int block_size = 3;     // channels per equicorrelated block
};

/// Reproducible synthetic series: white = i.i.d. standard normal; ar1 = the
/// same normal stream passed through x_t = phi*x_{t-1} + e_t (phi = 0 is
/// byte-identical to white); blockcorr = consecutive equicorrelated blocks
/// (last block may be short), independent across blocks, with known
/// ground-truth O-information per block.
TimeSeriesMatrix synth_dataset(int channels, int timepoints, uint64_t seed,
                               const SynthSpec& spec);

struct EstimatorTiming {
    std::string name;
    double wall_seconds;
    double tuples_per_second;
};

struct BenchReport {
    int channels;
    int timepoints;
    int order;
    int workers;
    uint64_t seed;
    uint64_t tuples;
    std::vector<EstimatorTiming> per_estimator;
    /// Speedup of each estimator relative to the baseline (renyi-exact when
    /// present, otherwise the first estimator listed).
    std::vector<std::pair<std::string, double>> ratios;

    std::string to_json() const;
    static BenchReport from_json(const std::string& text);
    std::string to_table() const;
};

/// Full C-choose-K sweep per estimator on identical data. Timing wraps the
/// sweep only (data generation and I/O excluded).
BenchReport run_benchmark(int channels, int timepoints, int order,
                          const std::vector<Estimator>& estimators,
                          const EstimatorConfig& base_cfg, int workers = 1,
                          uint64_t data_seed = 42);

}  // namespace hoi::bench
