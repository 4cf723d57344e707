#pragma once

#include <cstdint>
#include <vector>

#include "isokernel/types.hpp"

namespace isokernel {

// One random partitioning: psi hyperspheres, each centred on a sampled point
// with radius equal to the distance from the centre to its nearest neighbour
// within the same subsample. The uncovered remainder of the space acts as an
// implicit extra partition.
struct Partitioning {
  Matrix centers;  // psi x dim
  Vector radii;    // psi; zero when a centre has a duplicate in its subsample
};

// t partitionings fitted on a reference dataset. Immutable after the fit;
// embedding and similarity queries are pure reads.
struct IsolationModel {
  Index psi = 0;
  Index t = 0;
  Index dim = 0;
  std::uint64_t seed = 0;
  std::vector<Partitioning> parts;
};

// Slot value for a point that falls outside every hypersphere of a partitioning.
inline constexpr std::int32_t kNoSlot = -1;

// Sparse binary image of a point: per partitioning, the index of the single
// hypersphere the point is assigned to, or kNoSlot.
struct FeatureVector {
  std::vector<std::int32_t> slots;

  Index active_count() const;
  double norm() const;  // sqrt(active_count)
};

// Fits t partitionings of psi hyperspheres each. Subsamples are drawn without
// replacement using one independent substream per partitioning, derived from
// (seed, partitioning index), so the fit is reproducible for any thread count.
IsolationModel fit_isolation_model(const Matrix& data, Index psi, Index t,
                                   std::uint64_t seed, int threads = 1);

// Hypersphere index x is assigned to within one partitioning, or kNoSlot.
// Containment uses an inclusive boundary; among the containing spheres the
// nearest centre wins, with exact distance ties broken by lowest index.
std::int32_t assign_slot(const Partitioning& part, PointRef x);

FeatureVector embed_point(const IsolationModel& model, PointRef x);

// Fraction of partitionings assigning x and y to the same hypersphere,
// computed from the feature vectors. Always an exact multiple of 1/t.
double ik_similarity(const IsolationModel& model, PointRef x, PointRef y);

// Same quantity evaluated by direct indicator counting over every hypersphere,
// without feature vectors. Kept as an independent cross-check of the map.
double ik_bruteforce(const IsolationModel& model, PointRef x, PointRef y);

// ||Phi(x)|| / sqrt(t) in [0, 1]; the norm-based point-anomaly baseline score.
double feature_norm(const IsolationModel& model, PointRef x);

Vector feature_norms(const IsolationModel& model, const Matrix& points,
                     int threads = 1);

}  // namespace isokernel
