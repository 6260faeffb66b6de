#pragma once

#include "hoi/tensor.hpp"
#include "hoi/types.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace hoi::group {

/// One tuple's per-group statistics and their difference (one report row).
struct GroupDeltaRecord {
    TupleIndex tuple;
    double mean_a, sd_a;
    double mean_b, sd_b;
    double delta;  // mean_a - mean_b
    int n_a, n_b;
};

struct ContrastResult {
    std::vector<GroupDeltaRecord> records;  // lexicographic tuple order
    std::vector<TupleIndex> excluded;       // missing in at least one subject
    bool sd_warning = false;                // some group had n = 1
};

/// Per-tuple sample mean and SD (1/(n-1)) within each group, plus delta.
/// All tensors must share (order, C, estimator_tag); both groups nonempty.
/// Tuples absent in any subject are excluded and reported.
ContrastResult group_contrast(const std::vector<InteractionTensor>& tensors_a,
                              const std::vector<InteractionTensor>& tensors_b);

enum class RankMode { Abs, Positive, Negative };

/// Top k records by |delta|, delta, or -delta; ties broken by lexicographic
/// tuple. k larger than the input returns everything.
std::vector<GroupDeltaRecord> top_k_by_delta(const std::vector<GroupDeltaRecord>& records,
                                             int k, RankMode mode);

/// Semicolon-separated report, one row per record:
/// tuple_indices;mean_a;sd_a;mean_b;sd_b;delta;n_a;n_b
void write_contrast_csv(const std::filesystem::path& path,
                        const std::vector<GroupDeltaRecord>& records);

/// Human rendering of one row: "0.211 ± 0.161 | 0.149 ± 0.121 | +0.063".
std::string format_table_row(const GroupDeltaRecord& r);

}  // namespace hoi::group
