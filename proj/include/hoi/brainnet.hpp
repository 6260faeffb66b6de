#pragma once

#include "hoi/types.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace hoi::brainnet {

/// Dense M x C x C x C x C feature stack. A verification reference, not a
/// training engine: intended for C <= 16 (kMaxSize).
class FeatureTensor4D {
public:
    static constexpr int kMaxSize = 16;

    FeatureTensor4D(int channels, int size);

    int channels() const { return channels_; }
    int size() const { return size_; }

    double& at(int m, int i, int j, int k, int l) { return data_[index(m, i, j, k, l)]; }
    double at(int m, int i, int j, int k, int l) const { return data_[index(m, i, j, k, l)]; }

    /// In-range lookup with zero padding outside [0, C)^4.
    double padded(int m, int i, int j, int k, int l) const {
        if (unsigned(i) >= unsigned(size_) || unsigned(j) >= unsigned(size_) ||
            unsigned(k) >= unsigned(size_) || unsigned(l) >= unsigned(size_))
            return 0.0;
        return data_[index(m, i, j, k, l)];
    }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

private:
    size_t index(int m, int i, int j, int k, int l) const {
        return ((((size_t(m) * size_ + i) * size_ + j) * size_ + k) * size_) + l;
    }
    int channels_;
    int size_;
    std::vector<double> data_;
};

/// Cross-shaped kernel: per (input channel m, output channel n), one signed
/// weight for each of the 4 axes and each offset c in 1..K, i.e. exactly 8K
/// weights per channel pair and no center tap.
class CrossKernel4D {
public:
    CrossKernel4D(int in_channels, int out_channels, int radius);

    int in_channels() const { return in_; }
    int out_channels() const { return out_; }
    int radius() const { return radius_; }

    /// d in 0..3 (axis), positive: offset +c vs -c, c in 1..K.
    double& weight(int m, int n, int d, bool positive, int c) {
        return weights_[index(m, n, d, positive, c)];
    }
    double weight(int m, int n, int d, bool positive, int c) const {
        return weights_[index(m, n, d, positive, c)];
    }

    size_t parameter_count() const { return weights_.size(); }

    /// Deterministic random init for property tests and shape checks.
    static CrossKernel4D random(int in_channels, int out_channels, int radius, uint64_t seed);

private:
    size_t index(int m, int n, int d, bool positive, int c) const {
        return ((((size_t(m) * out_ + n) * 4 + d) * 2 + (positive ? 0 : 1)) * radius_) + (c - 1);
    }
    int in_, out_, radius_;
    std::vector<double> weights_;
};

/// Edge-to-node aggregation weights: per (m, n) one scalar for each of the
/// four tensor modes a region can occupy.
struct E2NWeights {
    int in_channels;
    int out_channels;
    std::vector<double> alpha, beta, gamma, delta;  // each in_channels * out_channels

    double& at(std::vector<double>& w, int m, int n) { return w[size_t(m) * out_channels + n]; }
    double get(const std::vector<double>& w, int m, int n) const {
        return w[size_t(m) * out_channels + n];
    }

    static E2NWeights random(int in_channels, int out_channels, uint64_t seed);
};

/// Cross-shaped 4D convolution: the eight-axis-offset sum per output position
/// with zero padding at the boundaries. Output has kernel.out_channels maps.
FeatureTensor4D e2e_forward(const FeatureTensor4D& input, const CrossKernel4D& kernel);

/// Aggregates every fourth-order interaction involving region i, weighting
/// the four modes i can occupy by (alpha, beta, gamma, delta). Output N x C.
Eigen::MatrixXd e2n_forward(const FeatureTensor4D& input, const E2NWeights& weights);

/// Global average pooling over node positions. Summation runs in sorted value
/// order, so node permutations give bit-identical output.
Eigen::VectorXd n2g_pool(const Eigen::MatrixXd& nodes);

}  // namespace hoi::brainnet
