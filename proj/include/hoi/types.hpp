#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hoi {

/// Generic failure inside the library. Subtypes carry location info where the
/// operation has one (tuple, channel, file position).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One subject's channel-by-time matrix. Rows are channels, columns are time
/// points; per-channel slices are therefore contiguous in row-major storage.
/// Immutable after construction.
class TimeSeriesMatrix {
public:
    using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

    TimeSeriesMatrix(Matrix values, std::vector<std::string> labels = {});

    int channels() const { return static_cast<int>(values_.rows()); }
    int timepoints() const { return static_cast<int>(values_.cols()); }
    const Matrix& values() const { return values_; }
    const std::vector<std::string>& labels() const { return labels_; }
    bool has_labels() const { return !labels_.empty(); }

    /// Contiguous view of one channel.
    Eigen::Map<const Eigen::RowVectorXd> channel(int i) const {
        return Eigen::Map<const Eigen::RowVectorXd>(values_.row(i).data(), values_.cols());
    }

private:
    Matrix values_;
    std::vector<std::string> labels_;
};

/// Z-scores every channel: mean 0, variance 1 (1/(T-1) convention).
/// Throws Error naming the channel index if any channel has zero variance.
TimeSeriesMatrix standardize(const TimeSeriesMatrix& x);

/// Canonical sorted index of a K-tuple of channels, K in {2,3,4}.
/// Indices are strictly increasing; duplicates are rejected.
struct TupleIndex {
    static constexpr int kMaxOrder = 4;

    TupleIndex(std::initializer_list<uint32_t> idx);
    explicit TupleIndex(const std::vector<uint32_t>& idx);

    int order() const { return order_; }
    uint32_t operator[](int i) const { return indices_[i]; }
    const std::array<uint32_t, kMaxOrder>& raw() const { return indices_; }

    /// Sorts a (possibly permuted) index list into the canonical form.
    static TupleIndex canonical(std::vector<uint32_t> idx);

    bool operator==(const TupleIndex& o) const {
        return order_ == o.order_ && indices_ == o.indices_;
    }
    bool operator<(const TupleIndex& o) const;

    std::string to_string() const;

private:
    TupleIndex() = default;
    void validate() const;

    int order_ = 0;
    std::array<uint32_t, kMaxOrder> indices_{};  // unused tail is zero
};

enum class Estimator { Gaussian, RenyiExact, RenyiRandomized };

const char* estimator_name(Estimator e);

/// Kernel bandwidth policy: a fixed sigma, or the median of all pairwise
/// sample distances resolved per Gram matrix.
struct Bandwidth {
    static Bandwidth fixed(double sigma);
    static Bandwidth median() { return Bandwidth{}; }

    bool is_median() const { return !sigma.has_value(); }
    std::optional<double> sigma;
};

/// Everything needed to reproduce an estimate: estimator choice, Renyi order,
/// bandwidth policy, probe count, master seed and covariance ridge.
struct EstimatorConfig {
    Estimator estimator = Estimator::Gaussian;
    double alpha = 2.0;
    Bandwidth bandwidth = Bandwidth::median();
    int probes = 30;
    uint64_t master_seed = 42;
    double ridge = 1e-10;

    /// Throws Error on an invalid combination (alpha <= 0 or == 1, randomized
    /// with non-integer alpha or alpha < 2, probes < 1, ridge < 0).
    void validate() const;

    /// Provenance string recorded in tensor files, e.g.
    /// "renyi-randomized(alpha=2,sigma=median,probes=30,seed=42)".
    std::string tag() const;

    /// Defaults used for the latent-batch entropy regularizer: exact backend,
    /// alpha 1.01, fixed sigma 5.
    static EstimatorConfig batch_entropy_defaults();
};

/// A tuple whose estimate failed, with the reason. Sweeps collect these
/// instead of aborting.
struct Defect {
    TupleIndex tuple;
    std::string message;
};

}  // namespace hoi
