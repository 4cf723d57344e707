#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "isokernel/baselines.hpp"
#include "isokernel/distributional.hpp"

namespace isokernel {

// A named set of points; the unit of group-anomaly detection.
struct Group {
  Index id = 0;
  Matrix points;
};

// Pooled points of all groups, rows sorted lexicographically. Fitting on the
// sorted pool makes every level-1 model independent of group order, so
// permuting the input merely permutes the scores.
Matrix pool_points(std::span<const Group> groups);

// Level-1 embedding: fits one model on the pooled points and returns the mean
// map of each group as a row, in group order. n x (t * psi).
Matrix level1_mean_maps(std::span<const Group> groups, Index psi, Index t,
                        std::uint64_t seed, int threads = 1);

// Both stages of the two-level detector: the level-1 model over the pooled
// points, the mean map of each group as a row, and the level-2 model fitted
// over those rows treated as points.
struct Idk2Model {
  Matrix group_maps;  // n x (t * psi)
  IsolationModel level2;
};

Idk2Model fit_idk2(std::span<const Group> groups, Index psi, Index psi2, Index t,
                   std::uint64_t seed, int threads = 1);

// Two-level detector: level-1 mean maps become points, a second model is
// fitted over them (again order-invariantly), and each group is scored by the
// similarity of its mapped point against the set of all mapped points.
// Ascending ranking; item ids are group ids.
std::vector<ScoredItem> idk2_scores(std::span<const Group> groups, Index psi,
                                    Index psi2, Index t, std::uint64_t seed,
                                    int threads = 1);

// Comparator: level-1 as above, level-2 similarity by the exact Gaussian
// distributional kernel between each mapped point and the set of all of them.
std::vector<ScoredItem> idk_gdk_scores(std::span<const Group> groups, Index psi,
                                       Index t, double sigma2, std::uint64_t seed,
                                       int threads = 1);

// Comparator: Gaussian kernel at both levels with landmark-based approximate
// feature maps; s landmarks are used at each level (s <= pooled points and
// s <= number of groups).
std::vector<ScoredItem> gdk2_scores(std::span<const Group> groups, Index s,
                                    double sigma1, double sigma2,
                                    std::uint64_t seed, int threads = 1);

// min(psi, n/2) rounded down to a power of two, never below 2.
Index default_level2_psi(Index psi, Index n_groups);

}  // namespace isokernel
