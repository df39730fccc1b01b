#ifndef CRAB_DATASET_HPP
#define CRAB_DATASET_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace crab {

using SignRow = std::vector<std::int8_t>;   // entries are -1 or +1
using SignMatrix = std::vector<SignRow>;
using ProbVector = std::vector<double>;

// Sparse feature vector; entries sorted by index, indices unique.
struct SparseVec {
    std::vector<std::pair<std::uint32_t, double>> entries;

    double dot(const std::vector<double>& dense) const {
        double s = 0.0;
        for (const auto& [i, v] : entries) s += dense[i] * v;
        return s;
    }
};

struct Instance {
    SparseVec features;
    SignRow labels; // length K
};

/// Immutable after load; safe to share across threads.
struct MultiLabelDataset {
    std::vector<Instance> instances;
    int num_labels = 0;       // K
    std::size_t feature_dim = 0;

    std::size_t size() const { return instances.size(); }

    const SignRow& labels_of(std::size_t i) const { return instances[i].labels; }

    SignMatrix label_matrix() const {
        SignMatrix m;
        m.reserve(instances.size());
        for (const auto& inst : instances) m.push_back(inst.labels);
        return m;
    }
};

// Text format: header "K=<int> D=<int>", then one instance per line:
// comma-separated positive-label indices (or "-" when none) followed by
// idx:val feature pairs. Labels are converted to {-1,+1} on load.
MultiLabelDataset load_dataset(const std::string& path);
MultiLabelDataset parse_dataset(const std::string& text);

void save_dataset(const MultiLabelDataset& ds, const std::string& path);
std::string serialize_dataset(const MultiLabelDataset& ds);

// Throws unless labels are all +-1, K >= 2, indices in range and at least one
// positive label exists somewhere.
void validate_dataset(const MultiLabelDataset& ds);

} // namespace crab

#endif
