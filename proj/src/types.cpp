#include "hoi/types.hpp"

#include <algorithm>
#include <cstdio>

namespace hoi {

TimeSeriesMatrix::TimeSeriesMatrix(Matrix values, std::vector<std::string> labels)
    : values_(std::move(values)), labels_(std::move(labels)) {
    if (values_.rows() < 2 || values_.cols() < 2)
        throw Error("time series requires C >= 2 channels and T >= 2 time points, got " +
                    std::to_string(values_.rows()) + "x" + std::to_string(values_.cols()));
    for (Eigen::Index i = 0; i < values_.rows(); ++i)
        for (Eigen::Index j = 0; j < values_.cols(); ++j)
            if (!std::isfinite(values_(i, j)))
                throw Error("non-finite entry at (" + std::to_string(i + 1) + "," +
                            std::to_string(j + 1) + ")");
    if (!labels_.empty() && static_cast<Eigen::Index>(labels_.size()) != values_.rows())
        throw Error("label count " + std::to_string(labels_.size()) +
                    " does not match channel count " + std::to_string(values_.rows()));
}

TimeSeriesMatrix standardize(const TimeSeriesMatrix& x) {
    const int c = x.channels();
    const int t = x.timepoints();
    TimeSeriesMatrix::Matrix out(c, t);
    for (int i = 0; i < c; ++i) {
        double mean = 0.0;
        for (int j = 0; j < t; ++j) mean += x.values()(i, j);
        mean /= t;
        double ss = 0.0;
        for (int j = 0; j < t; ++j) {
            const double d = x.values()(i, j) - mean;
            ss += d * d;
        }
        const double var = ss / (t - 1);
        if (var <= 0.0)
            throw Error("channel " + std::to_string(i) + " has zero variance");
        const double inv_sd = 1.0 / std::sqrt(var);
        for (int j = 0; j < t; ++j) out(i, j) = (x.values()(i, j) - mean) * inv_sd;
    }
    return TimeSeriesMatrix(std::move(out), x.labels());
}

TupleIndex::TupleIndex(std::initializer_list<uint32_t> idx)
    : TupleIndex(std::vector<uint32_t>(idx)) {}

TupleIndex::TupleIndex(const std::vector<uint32_t>& idx) {
    if (idx.size() < 2 || idx.size() > kMaxOrder)
        throw Error("tuple order must be in {2,3,4}, got " + std::to_string(idx.size()));
    order_ = static_cast<int>(idx.size());
    std::copy(idx.begin(), idx.end(), indices_.begin());
    validate();
}

void TupleIndex::validate() const {
    for (int i = 1; i < order_; ++i)
        if (indices_[i] <= indices_[i - 1])
            throw Error("tuple indices must be strictly increasing: " + to_string());
}

TupleIndex TupleIndex::canonical(std::vector<uint32_t> idx) {
    std::sort(idx.begin(), idx.end());
    return TupleIndex(idx);
}

bool TupleIndex::operator<(const TupleIndex& o) const {
    if (order_ != o.order_) return order_ < o.order_;
    return std::lexicographical_compare(indices_.begin(), indices_.begin() + order_,
                                        o.indices_.begin(), o.indices_.begin() + o.order_);
}

std::string TupleIndex::to_string() const {
    std::string s = "(";
    for (int i = 0; i < order_; ++i) {
        if (i) s += ",";
        s += std::to_string(indices_[i]);
    }
    return s + ")";
}

const char* estimator_name(Estimator e) {
    switch (e) {
        case Estimator::Gaussian: return "gaussian";
        case Estimator::RenyiExact: return "renyi-exact";
        case Estimator::RenyiRandomized: return "renyi-randomized";
    }
    return "?";
}

Bandwidth Bandwidth::fixed(double s) {
    if (!(s > 0.0)) throw Error("fixed bandwidth must be positive");
    Bandwidth b;
    b.sigma = s;
    return b;
}

void EstimatorConfig::validate() const {
    if (!(alpha > 0.0) || alpha == 1.0)
        throw Error("alpha must be positive and != 1");
    if (estimator == Estimator::RenyiRandomized &&
        (alpha < 2.0 || alpha != std::floor(alpha)))
        throw Error("randomized estimator requires integer alpha >= 2");
    if (probes < 1) throw Error("probe count must be >= 1");
    if (ridge < 0.0) throw Error("ridge must be nonnegative");
    if (bandwidth.sigma && !(*bandwidth.sigma > 0.0))
        throw Error("fixed bandwidth must be positive");
}

std::string EstimatorConfig::tag() const {
    char buf[160];
    auto fmt_sigma = [&]() -> std::string {
        if (bandwidth.is_median()) return "median";
        char b[32];
        std::snprintf(b, sizeof(b), "%g", *bandwidth.sigma);
        return b;
    };
    switch (estimator) {
        case Estimator::Gaussian:
            std::snprintf(buf, sizeof(buf), "gaussian(ridge=%g)", ridge);
            break;
        case Estimator::RenyiExact:
            std::snprintf(buf, sizeof(buf), "renyi-exact(alpha=%g,sigma=%s)", alpha,
                          fmt_sigma().c_str());
            break;
        case Estimator::RenyiRandomized:
            std::snprintf(buf, sizeof(buf), "renyi-randomized(alpha=%g,sigma=%s,probes=%d,seed=%llu)",
                          alpha, fmt_sigma().c_str(), probes,
                          static_cast<unsigned long long>(master_seed));
            break;
    }
    return buf;
}

EstimatorConfig EstimatorConfig::batch_entropy_defaults() {
    EstimatorConfig cfg;
    cfg.estimator = Estimator::RenyiExact;
    cfg.alpha = 1.01;
    cfg.bandwidth = Bandwidth::fixed(5.0);
    return cfg;
}

}  // namespace hoi
