#pragma once

#include "hoi/types.hpp"

#include <Eigen/Dense>

namespace hoi::gaussian {

/// Estimate failed because a covariance (or one of its principal minors) is
/// not positive definite. Carries the tuple and, for minors, the excluded
/// channel position.
class SingularCovariance : public Error {
public:
    SingularCovariance(const std::string& what, int excluded = -1)
        : Error(what), excluded_index(excluded) {}
    int excluded_index;
};

/// K x K covariance of a channel tuple. Symmetric; consumers read the upper
/// triangle. Positive semidefinite after ridge conditioning.
struct CovarianceMatrix {
    Eigen::MatrixXd values;
    int dim() const { return static_cast<int>(values.rows()); }
};

/// Sample covariance (1/(T-1)) over the selected channels, with
/// ridge * (trace/K) added to the diagonal.
CovarianceMatrix covariance(const TimeSeriesMatrix& x, const TupleIndex& tuple, double ridge);

/// Differential entropy of a Gaussian with covariance sigma:
/// 0.5 * log((2*pi*e)^K * det(sigma)), det via Cholesky log-pivots.
/// Throws SingularCovariance if the Cholesky fails.
double entropy(const CovarianceMatrix& sigma);

/// Total correlation 0.5 * log(det(diag(sigma)) / det(sigma)). Nonnegative up
/// to numerical slack.
double total_correlation(const CovarianceMatrix& sigma);

/// Dual total correlation: sum_i H(minor_i) - (K-1) * H(sigma), where
/// minor_i deletes row/column i. The (2*pi*e) factors cancel algebraically
/// and are never introduced.
double dual_total_correlation(const CovarianceMatrix& sigma);

/// O-information TC - DTC. Positive means redundancy-dominated, negative
/// synergy-dominated. Identically zero at K=2.
double o_information(const CovarianceMatrix& sigma);

/// All three measures from one Cholesky pass: the joint factorization and
/// every (K-1)-minor are computed once and shared, which makes the K=2
/// identity O = 0 exact and saves about 3x work in tuple sweeps.
struct Decomposition {
    double tc;
    double dtc;
    double o_info;
};
Decomposition decompose(const CovarianceMatrix& sigma);

/// Convenience: covariance + decompose for one tuple of a time series.
double o_information(const TimeSeriesMatrix& x, const TupleIndex& tuple, double ridge);

}  // namespace hoi::gaussian
