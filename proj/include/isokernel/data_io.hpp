#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "isokernel/group_anomaly.hpp"
#include "isokernel/types.hpp"

namespace isokernel {

// Points with optional per-point labels (1 = anomaly) and group ids.
struct LabeledDataset {
  Matrix points;
  std::vector<std::uint8_t> labels;  // empty when absent
  std::vector<Index> group_ids;      // empty when absent

  bool has_labels() const { return !labels.empty(); }
  bool has_groups() const { return !group_ids.empty(); }
};

struct GroupedDataset {
  std::vector<Group> groups;
  std::vector<std::uint8_t> labels;  // per group, 1 = anomaly; empty when absent
};

// Reads a CSV of decimal features. label_column / group_column are raw file
// column indices; label values must be 0 or 1, group ids nonnegative integers.
// Parse failures report the offending row number.
LabeledDataset load_csv(const std::string& path,
                        std::optional<int> label_column = std::nullopt,
                        std::optional<int> group_column = std::nullopt,
                        bool has_header = false);

// Writes group id first (when present), then features, then the label column
// (when present). Doubles are printed with enough digits to round-trip.
void save_csv(const std::string& path, const LabeledDataset& ds,
              bool write_header = false);

// Per-attribute min-max scaling to [0, 1]; constant attributes map to 0.
LabeledDataset normalize_unit_interval(const LabeledDataset& ds);

// Groups rows by id, in first-appearance order. A group is labeled anomalous
// when any of its rows is.
GroupedDataset groups_from_dataset(const LabeledDataset& ds);

// One-dimensional benchmark set: three Gaussian clusters of normal points
// (means -2, 8, 18 with stds 1.5, 1.0, 0.6) plus a tight anomaly cluster at
// 25 +- 0.1, well to the right of all normal mass.
LabeledDataset gen_three_gaussians_1d(std::uint64_t seed, Index n_normal = 1500,
                                      Index n_anom = 20);

enum class GroupVariant { single, mixture, two_density };

// Groups of m points, each drawn around a group mean. Normal means come from
// the variant's mean distribution(s); anomalous means are drawn around a
// displaced centre and resampled until they fall outside the 99.9% ellipse of
// every normal-mean component. Requires n_anom <= n_normal / 20.
GroupedDataset gen_gaussian_groups(Index n_normal, Index n_anom, Index m, Index d,
                                   std::uint64_t seed, GroupVariant variant);

// Flattens groups back to a point dataset with group ids and labels.
LabeledDataset dataset_from_groups(const GroupedDataset& gd);

}  // namespace isokernel
