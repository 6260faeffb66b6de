#pragma once

#include "hoi/combinatorics.hpp"
#include "hoi/types.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace hoi {

/// Order-K symmetric tensor of interaction values, stored as the C-choose-K
/// unique sorted combinations. Slots are addressed by lexicographic rank, so
/// parallel sweeps write disjoint entries without coordination. The dense
/// C^K tensor is a view materialized on demand (for_each_dense_entry).
class InteractionTensor {
public:
    InteractionTensor(int order, uint32_t num_channels, std::string estimator_tag);

    int order() const { return order_; }
    uint32_t num_channels() const { return num_channels_; }
    const std::string& estimator_tag() const { return estimator_tag_; }
    uint64_t capacity() const { return static_cast<uint64_t>(values_.size()); }

    /// Number of populated entries; equals capacity() when complete.
    uint64_t entry_count() const;
    bool complete() const { return entry_count() == capacity(); }

    void set_by_rank(uint64_t rank, double value);
    void set(const TupleIndex& t, double value);

    bool has_rank(uint64_t rank) const { return present_[rank] != 0; }
    double value_by_rank(uint64_t rank) const;

    /// Symmetric accessor: any permutation of a stored tuple resolves to the
    /// value under the sorted key. Throws if the entry is absent.
    double value(std::vector<uint32_t> indices) const;
    double value(const TupleIndex& t) const;

    /// Calls fn(TupleIndex, value) over populated entries in lexicographic order.
    template <typename Fn>
    void for_each(Fn&& fn) const {
        uint64_t r = 0;
        combinatorics::for_each_tuple(num_channels_, order_, [&](const TupleIndex& t) {
            if (present_[r]) fn(t, values_[r]);
            ++r;
        });
    }

    /// Streams the dense C^K view: fn(i,j,...,value) for every index tuple of
    /// distinct channels, resolving permutations through the symmetric
    /// accessor. Axes with repeated channels are outside the tensor's domain
    /// and are reported as 0. Never materializes the dense array.
    template <typename Fn>
    void for_each_dense_entry(Fn&& fn) const;

    bool operator==(const InteractionTensor& o) const;

private:
    int order_;
    uint32_t num_channels_;
    std::string estimator_tag_;
    std::vector<double> values_;
    std::vector<uint8_t> present_;
};

template <typename Fn>
void InteractionTensor::for_each_dense_entry(Fn&& fn) const {
    const uint32_t c = num_channels_;
    std::vector<uint32_t> idx(order_, 0);
    while (true) {
        bool distinct = true;
        for (int a = 0; a < order_ && distinct; ++a)
            for (int b = a + 1; b < order_; ++b)
                if (idx[a] == idx[b]) { distinct = false; break; }
        double v = 0.0;
        if (distinct) {
            const TupleIndex t = TupleIndex::canonical(idx);
            const uint64_t r = combinatorics::rank_of(c, t);
            v = present_[r] ? values_[r] : 0.0;
        }
        fn(static_cast<const std::vector<uint32_t>&>(idx), v);
        int d = order_ - 1;
        while (d >= 0 && ++idx[d] == c) idx[d--] = 0;
        if (d < 0) break;
    }
}

/// C x C symmetric matrix of pairwise mutual information, zero diagonal.
/// Failed pairs hold NaN and are excluded from thresholding.
class PairwiseMatrix {
public:
    explicit PairwiseMatrix(uint32_t num_channels);
    PairwiseMatrix(uint32_t num_channels, Eigen::MatrixXd values);

    uint32_t num_channels() const { return num_channels_; }
    const Eigen::MatrixXd& values() const { return values_; }

    double operator()(uint32_t i, uint32_t j) const { return values_(i, j); }
    void set_pair(uint32_t i, uint32_t j, double v);

    /// Finite unique off-diagonal pairs.
    uint64_t finite_pair_count() const;

private:
    uint32_t num_channels_;
    Eigen::MatrixXd values_;
};

}  // namespace hoi
