#include "hoi/group.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace hoi::group {

namespace {

struct Moments {
    double mean;
    double sd;
};

Moments moments(const std::vector<double>& v) {
    const int n = static_cast<int>(v.size());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    if (n == 1) return {mean, 0.0};
    double ss = 0.0;
    for (double x : v) {
        const double d = x - mean;
        ss += d * d;
    }
    return {mean, std::sqrt(ss / (n - 1))};
}

void check_group(const std::vector<InteractionTensor>& g, const InteractionTensor& ref,
                 const char* name) {
    if (g.empty()) throw Error(std::string("group ") + name + " is empty");
    for (const auto& t : g) {
        if (t.order() != ref.order() || t.num_channels() != ref.num_channels())
            throw Error(std::string("tensor shape mismatch in group ") + name);
        if (t.estimator_tag() != ref.estimator_tag())
            throw Error(std::string("estimator tag mismatch in group ") + name + ": '" +
                        t.estimator_tag() + "' vs '" + ref.estimator_tag() + "'");
    }
}

}  // namespace

ContrastResult group_contrast(const std::vector<InteractionTensor>& tensors_a,
                              const std::vector<InteractionTensor>& tensors_b) {
    if (tensors_a.empty() || tensors_b.empty()) throw Error("both groups must be nonempty");
    const InteractionTensor& ref = tensors_a.front();
    check_group(tensors_a, ref, "A");
    check_group(tensors_b, ref, "B");

    ContrastResult result;
    result.sd_warning = tensors_a.size() == 1 || tensors_b.size() == 1;

    const uint64_t capacity = ref.capacity();
    std::vector<double> va, vb;
    va.reserve(tensors_a.size());
    vb.reserve(tensors_b.size());

    for (uint64_t rank = 0; rank < capacity; ++rank) {
        bool missing = false;
        for (const auto& t : tensors_a)
            if (!t.has_rank(rank)) { missing = true; break; }
        if (!missing)
            for (const auto& t : tensors_b)
                if (!t.has_rank(rank)) { missing = true; break; }
        const TupleIndex tuple =
            combinatorics::unrank(ref.num_channels(), ref.order(), rank);
        if (missing) {
            result.excluded.push_back(tuple);
            continue;
        }
        va.clear();
        vb.clear();
        for (const auto& t : tensors_a) va.push_back(t.value_by_rank(rank));
        for (const auto& t : tensors_b) vb.push_back(t.value_by_rank(rank));
        const Moments ma = moments(va);
        const Moments mb = moments(vb);
        result.records.push_back(GroupDeltaRecord{tuple, ma.mean, ma.sd, mb.mean, mb.sd,
                                                  ma.mean - mb.mean,
                                                  static_cast<int>(va.size()),
                                                  static_cast<int>(vb.size())});
    }
    return result;
}

std::vector<GroupDeltaRecord> top_k_by_delta(const std::vector<GroupDeltaRecord>& records,
                                             int k, RankMode mode) {
    if (k < 1) throw Error("k must be >= 1");
    auto key = [mode](const GroupDeltaRecord& r) {
        switch (mode) {
            case RankMode::Abs: return std::abs(r.delta);
            case RankMode::Positive: return r.delta;
            case RankMode::Negative: return -r.delta;
        }
        return 0.0;
    };
    std::vector<GroupDeltaRecord> sorted = records;
    std::sort(sorted.begin(), sorted.end(),
              [&](const GroupDeltaRecord& a, const GroupDeltaRecord& b) {
                  const double ka = key(a), kb = key(b);
                  if (ka != kb) return ka > kb;
                  return a.tuple < b.tuple;
              });
    if (static_cast<size_t>(k) < sorted.size())
        sorted.erase(sorted.begin() + k, sorted.end());
    return sorted;
}

void write_contrast_csv(const std::filesystem::path& path,
                        const std::vector<GroupDeltaRecord>& records) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw Error("cannot write " + path.string());
    f << "tuple_indices;mean_a;sd_a;mean_b;sd_b;delta;n_a;n_b\n";
    char buf[40];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        f << ';' << buf;
    };
    for (const auto& r : records) {
        for (int i = 0; i < r.tuple.order(); ++i) {
            if (i) f << ',';
            f << r.tuple[i];
        }
        put(r.mean_a);
        put(r.sd_a);
        put(r.mean_b);
        put(r.sd_b);
        put(r.delta);
        f << ';' << r.n_a << ';' << r.n_b << '\n';
    }
    if (!f) throw Error("write failed for " + path.string());
}

std::string format_table_row(const GroupDeltaRecord& r) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.3f ± %.3f | %.3f ± %.3f | %+.3f", r.mean_a,
                  r.sd_a, r.mean_b, r.sd_b, r.delta);
    return buf;
}

}  // namespace hoi::group
