#include "hoi/brainnet.hpp"

#include "hoi/rng.hpp"

#include <algorithm>

namespace hoi::brainnet {

FeatureTensor4D::FeatureTensor4D(int channels, int size) : channels_(channels), size_(size) {
    if (channels < 1 || size < 1) throw Error("feature tensor dimensions must be >= 1");
    if (size > kMaxSize)
        throw Error("dense 4D tensors are bounded at C <= " + std::to_string(kMaxSize));
    data_.assign(size_t(channels) * size * size * size * size, 0.0);
}

CrossKernel4D::CrossKernel4D(int in_channels, int out_channels, int radius)
    : in_(in_channels), out_(out_channels), radius_(radius) {
    if (in_channels < 1 || out_channels < 1 || radius < 1)
        throw Error("kernel dimensions must be >= 1");
    weights_.assign(size_t(in_) * out_ * 8 * radius_, 0.0);
}

CrossKernel4D CrossKernel4D::random(int in_channels, int out_channels, int radius,
                                    uint64_t seed) {
    CrossKernel4D k(in_channels, out_channels, radius);
    rng::CounterStream stream(rng::combine(seed, 0x4b65726eull));
    for (size_t i = 0; i < k.weights_.size(); ++i) k.weights_[i] = stream.normal(i);
    return k;
}

E2NWeights E2NWeights::random(int in_channels, int out_channels, uint64_t seed) {
    E2NWeights w;
    w.in_channels = in_channels;
    w.out_channels = out_channels;
    const size_t n = size_t(in_channels) * out_channels;
    w.alpha.resize(n);
    w.beta.resize(n);
    w.gamma.resize(n);
    w.delta.resize(n);
    rng::CounterStream stream(rng::combine(seed, 0x45324eull));
    for (size_t i = 0; i < n; ++i) {
        w.alpha[i] = stream.normal(4 * i);
        w.beta[i] = stream.normal(4 * i + 1);
        w.gamma[i] = stream.normal(4 * i + 2);
        w.delta[i] = stream.normal(4 * i + 3);
    }
    return w;
}

FeatureTensor4D e2e_forward(const FeatureTensor4D& input, const CrossKernel4D& kernel) {
    if (kernel.in_channels() != input.channels())
        throw Error("kernel input channels do not match the feature stack");
    const int c = input.size();
    const int radius = kernel.radius();
    if (radius >= c) throw Error("kernel radius must be smaller than the spatial size");

    FeatureTensor4D out(kernel.out_channels(), c);
#pragma omp parallel for collapse(2) schedule(static)
    for (int n = 0; n < kernel.out_channels(); ++n) {
        for (int i = 0; i < c; ++i) {
            for (int j = 0; j < c; ++j)
                for (int k = 0; k < c; ++k)
                    for (int l = 0; l < c; ++l) {
                        double acc = 0.0;
                        for (int m = 0; m < input.channels(); ++m)
                            for (int off = 1; off <= radius; ++off) {
                                acc += kernel.weight(m, n, 0, true, off) *
                                           input.padded(m, i + off, j, k, l) +
                                       kernel.weight(m, n, 0, false, off) *
                                           input.padded(m, i - off, j, k, l);
                                acc += kernel.weight(m, n, 1, true, off) *
                                           input.padded(m, i, j + off, k, l) +
                                       kernel.weight(m, n, 1, false, off) *
                                           input.padded(m, i, j - off, k, l);
                                acc += kernel.weight(m, n, 2, true, off) *
                                           input.padded(m, i, j, k + off, l) +
                                       kernel.weight(m, n, 2, false, off) *
                                           input.padded(m, i, j, k - off, l);
                                acc += kernel.weight(m, n, 3, true, off) *
                                           input.padded(m, i, j, k, l + off) +
                                       kernel.weight(m, n, 3, false, off) *
                                           input.padded(m, i, j, k, l - off);
                            }
                        out.at(n, i, j, k, l) = acc;
                    }
        }
    }
    return out;
}

Eigen::MatrixXd e2n_forward(const FeatureTensor4D& input, const E2NWeights& weights) {
    if (weights.in_channels != input.channels())
        throw Error("aggregation weights do not match the feature stack");
    const int c = input.size();
    const int n_out = weights.out_channels;

    Eigen::MatrixXd nodes = Eigen::MatrixXd::Zero(n_out, c);
#pragma omp parallel for collapse(2) schedule(static)
    for (int n = 0; n < n_out; ++n) {
        for (int i = 0; i < c; ++i) {
            double acc = 0.0;
            for (int m = 0; m < input.channels(); ++m) {
                const double wa = weights.get(weights.alpha, m, n);
                const double wb = weights.get(weights.beta, m, n);
                const double wc = weights.get(weights.gamma, m, n);
                const double wd = weights.get(weights.delta, m, n);
                for (int j = 0; j < c; ++j)
                    for (int k = 0; k < c; ++k)
                        for (int l = 0; l < c; ++l)
                            acc += wa * input.at(m, i, j, k, l) + wb * input.at(m, j, i, k, l) +
                                   wc * input.at(m, j, k, i, l) + wd * input.at(m, j, k, l, i);
            }
            nodes(n, i) = acc;
        }
    }
    return nodes;
}

Eigen::VectorXd n2g_pool(const Eigen::MatrixXd& nodes) {
    if (nodes.cols() < 1) throw Error("pooling needs at least one node");
    Eigen::VectorXd out(nodes.rows());
    std::vector<double> row(nodes.cols());
    for (Eigen::Index n = 0; n < nodes.rows(); ++n) {
        for (Eigen::Index i = 0; i < nodes.cols(); ++i) row[i] = nodes(n, i);
        // Summing in sorted order makes the mean independent of node order,
        // bit for bit.
        std::sort(row.begin(), row.end());
        double acc = 0.0;
        for (double v : row) acc += v;
        out(n) = acc / static_cast<double>(nodes.cols());
    }
    return out;
}

}  // namespace hoi::brainnet
