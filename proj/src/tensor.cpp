#include "hoi/tensor.hpp"

#include <algorithm>
#include <numeric>

namespace hoi {

InteractionTensor::InteractionTensor(int order, uint32_t num_channels, std::string estimator_tag)
    : order_(order), num_channels_(num_channels), estimator_tag_(std::move(estimator_tag)) {
    if (order < 2 || order > 4) throw Error("tensor order must be in {2,3,4}");
    if (num_channels < static_cast<uint32_t>(order))
        throw Error("tensor needs at least K channels");
    const uint64_t n = combinatorics::choose(num_channels, static_cast<uint32_t>(order));
    values_.assign(n, 0.0);
    present_.assign(n, 0);
}

uint64_t InteractionTensor::entry_count() const {
    return static_cast<uint64_t>(
        std::accumulate(present_.begin(), present_.end(), uint64_t{0}));
}

void InteractionTensor::set_by_rank(uint64_t rank, double value) {
    values_.at(rank) = value;
    present_.at(rank) = 1;
}

void InteractionTensor::set(const TupleIndex& t, double value) {
    if (t.order() != order_) throw Error("tuple order mismatch");
    set_by_rank(combinatorics::rank_of(num_channels_, t), value);
}

double InteractionTensor::value_by_rank(uint64_t rank) const {
    if (!present_.at(rank)) throw Error("tensor entry absent at rank " + std::to_string(rank));
    return values_[rank];
}

double InteractionTensor::value(std::vector<uint32_t> indices) const {
    return value(TupleIndex::canonical(std::move(indices)));
}

double InteractionTensor::value(const TupleIndex& t) const {
    if (t.order() != order_) throw Error("tuple order mismatch");
    return value_by_rank(combinatorics::rank_of(num_channels_, t));
}

bool InteractionTensor::operator==(const InteractionTensor& o) const {
    return order_ == o.order_ && num_channels_ == o.num_channels_ &&
           estimator_tag_ == o.estimator_tag_ && present_ == o.present_ &&
           values_ == o.values_;
}

PairwiseMatrix::PairwiseMatrix(uint32_t num_channels)
    : num_channels_(num_channels),
      values_(Eigen::MatrixXd::Zero(num_channels, num_channels)) {
    if (num_channels < 2) throw Error("pairwise matrix needs C >= 2");
}

PairwiseMatrix::PairwiseMatrix(uint32_t num_channels, Eigen::MatrixXd values)
    : num_channels_(num_channels), values_(std::move(values)) {
    if (num_channels < 2) throw Error("pairwise matrix needs C >= 2");
    if (values_.rows() != num_channels_ || values_.cols() != num_channels_)
        throw Error("pairwise matrix shape mismatch");
}

void PairwiseMatrix::set_pair(uint32_t i, uint32_t j, double v) {
    if (i == j) throw Error("pairwise diagonal is fixed to zero");
    values_(i, j) = v;
    values_(j, i) = v;
}

uint64_t PairwiseMatrix::finite_pair_count() const {
    uint64_t n = 0;
    for (uint32_t i = 0; i < num_channels_; ++i)
        for (uint32_t j = i + 1; j < num_channels_; ++j)
            if (std::isfinite(values_(i, j))) ++n;
    return n;
}

}  // namespace hoi
