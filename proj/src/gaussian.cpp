#include "hoi/gaussian.hpp"

#include <numbers>

namespace hoi::gaussian {

namespace {

constexpr double kLog2PiE = 2.837877066409345483560659;  // log(2*pi*e)

/// Log-determinant via Cholesky pivots. Returns false if any pivot is not
/// strictly positive. In-place on a copy; K <= 4 so no blocking.
bool cholesky_logdet(Eigen::MatrixXd a, double& logdet) {
    const int n = static_cast<int>(a.rows());
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        double d = a(j, j);
        for (int k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
        if (!(d > 0.0) || !std::isfinite(d)) return false;
        const double l = std::sqrt(d);
        a(j, j) = l;
        acc += std::log(d);  // sum log pivots^2 = log det
        for (int i = j + 1; i < n; ++i) {
            double v = a(i, j);
            for (int k = 0; k < j; ++k) v -= a(i, k) * a(j, k);
            a(i, j) = v / l;
        }
    }
    logdet = acc;
    return true;
}

Eigen::MatrixXd minor_of(const Eigen::MatrixXd& m, int drop) {
    const int n = static_cast<int>(m.rows());
    Eigen::MatrixXd out(n - 1, n - 1);
    for (int i = 0, ii = 0; i < n; ++i) {
        if (i == drop) continue;
        for (int j = 0, jj = 0; j < n; ++j) {
            if (j == drop) continue;
            out(ii, jj++) = m(i, j);
        }
        ++ii;
    }
    return out;
}

struct LogDets {
    double joint;
    double diag_sum;                 // sum of log sigma_ii
    std::array<double, 4> minors{};  // first K entries used
    int k;
};

LogDets logdets(const CovarianceMatrix& sigma) {
    LogDets d{};
    d.k = sigma.dim();
    if (!cholesky_logdet(sigma.values, d.joint))
        throw SingularCovariance("covariance is not positive definite");
    d.diag_sum = 0.0;
    for (int i = 0; i < d.k; ++i) {
        const double v = sigma.values(i, i);
        if (!(v > 0.0)) throw SingularCovariance("nonpositive variance on the diagonal", i);
        d.diag_sum += std::log(v);
    }
    for (int i = 0; i < d.k; ++i) {
        if (d.k == 1) break;
        if (!cholesky_logdet(minor_of(sigma.values, i), d.minors[i]))
            throw SingularCovariance(
                "principal minor excluding index " + std::to_string(i) +
                " is not positive definite", i);
    }
    return d;
}

}  // namespace

CovarianceMatrix covariance(const TimeSeriesMatrix& x, const TupleIndex& tuple, double ridge) {
    const int k = tuple.order();
    const int t = x.timepoints();
    for (int i = 0; i < k; ++i)
        if (tuple[i] >= static_cast<uint32_t>(x.channels()))
            throw Error("tuple channel out of range: " + tuple.to_string());

    std::array<double, 4> mean{};
    for (int i = 0; i < k; ++i) {
        double m = 0.0;
        const auto row = x.channel(static_cast<int>(tuple[i]));
        for (int s = 0; s < t; ++s) m += row(s);
        mean[i] = m / t;
    }

    Eigen::MatrixXd cov(k, k);
    for (int i = 0; i < k; ++i) {
        const auto ri = x.channel(static_cast<int>(tuple[i]));
        for (int j = i; j < k; ++j) {
            const auto rj = x.channel(static_cast<int>(tuple[j]));
            double acc = 0.0;
            for (int s = 0; s < t; ++s) acc += (ri(s) - mean[i]) * (rj(s) - mean[j]);
            cov(i, j) = cov(j, i) = acc / (t - 1);
        }
    }
    if (ridge > 0.0) {
        const double bump = ridge * (cov.trace() / k);
        for (int i = 0; i < k; ++i) cov(i, i) += bump;
    }
    return CovarianceMatrix{std::move(cov)};
}

double entropy(const CovarianceMatrix& sigma) {
    double logdet;
    if (!cholesky_logdet(sigma.values, logdet))
        throw SingularCovariance("covariance is not positive definite");
    return 0.5 * (sigma.dim() * kLog2PiE + logdet);
}

double total_correlation(const CovarianceMatrix& sigma) {
    const LogDets d = logdets(sigma);
    return 0.5 * (d.diag_sum - d.joint);
}

double dual_total_correlation(const CovarianceMatrix& sigma) {
    const LogDets d = logdets(sigma);
    double minor_sum = 0.0;
    for (int i = 0; i < d.k; ++i) minor_sum += d.minors[i];
    return 0.5 * (minor_sum - (d.k - 1) * d.joint);
}

double o_information(const CovarianceMatrix& sigma) { return decompose(sigma).o_info; }

Decomposition decompose(const CovarianceMatrix& sigma) {
    const LogDets d = logdets(sigma);
    double minor_sum = 0.0;
    for (int i = 0; i < d.k; ++i) minor_sum += d.minors[i];
    // At K=2 the minors are the diagonal entries, so diag_sum == minor_sum
    // bitwise and tc - dtc cancels to exactly zero.
    const double tc = 0.5 * (d.diag_sum - d.joint);
    const double dtc = 0.5 * (minor_sum - (d.k - 1) * d.joint);
    return Decomposition{tc, dtc, tc - dtc};
}

double o_information(const TimeSeriesMatrix& x, const TupleIndex& tuple, double ridge) {
    try {
        return decompose(covariance(x, tuple, ridge)).o_info;
    } catch (const SingularCovariance& e) {
        throw SingularCovariance(std::string(e.what()) + " for tuple " + tuple.to_string(),
                                 e.excluded_index);
    }
}

}  // namespace hoi::gaussian
