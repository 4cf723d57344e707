#pragma once

#include <vector>

#include "isokernel/isolation.hpp"

namespace isokernel {

// Dense empirical mean of feature vectors over a point set, one block of psi
// entries per partitioning. Entry (i, j) is the fraction of the set assigned
// to hypersphere j of partitioning i, so every block sums to at most 1.
struct MeanMap {
  Vector values;  // length t * psi
  Index t = 0;
  Index psi = 0;
};

MeanMap mean_map(const IsolationModel& model, const Matrix& points,
                 int threads = 1);

// Mean map of the single-point distribution concentrated at x.
MeanMap dirac_map(const IsolationModel& model, PointRef x);

// Distributional similarity (1/t) <a, b> in [0, 1]; symmetric. The two maps
// must come from models with the same t and psi.
double idk(const MeanMap& a, const MeanMap& b);

// Similarity of a single point against a precomputed mean map; equal to
// idk(dirac_map(model, x), mean) but without materializing the dense vector.
double idk_to_mean(const IsolationModel& model, const MeanMap& mean, PointRef x);

Vector idk_to_mean_all(const IsolationModel& model, const MeanMap& mean,
                       const Matrix& points, int threads = 1);

// In-sample similarity of every point of `data` against the mean map of
// `data`; index i of the result scores row i.
Vector idk_point_similarities(const IsolationModel& model, const Matrix& data,
                              int threads = 1);

// Ranking form of the above: ascending similarity, ties by original index,
// so the most anomalous points come first.
std::vector<ScoredItem> idk_point_scores(const IsolationModel& model,
                                         const Matrix& data, int threads = 1);

// Shared ranking helper: items (i, similarities[i]) sorted ascending by
// similarity with ties broken by index.
std::vector<ScoredItem> rank_ascending(const Vector& similarities);

}  // namespace isokernel
