#pragma once

#include <cstdint>
#include <vector>

#include "isokernel/types.hpp"

namespace isokernel {

struct GaussianParams {
  double sigma = 1.0;  // bandwidth, > 0
};

// exp(-||x - y||^2 / (2 sigma^2)) in (0, 1].
double gaussian_kernel(PointRef x, PointRef y, const GaussianParams& p);

// Mean of the full pairwise kernel matrix between S and T; O(|S||T|).
double gdk_exact(const Matrix& S, const Matrix& T, const GaussianParams& p);

// Finite-dimensional approximate Gaussian feature map built from s landmark
// points. The whitener is the pseudo-inverse square root of the landmark Gram
// matrix, with eigenvalues below the floor treated as zero.
struct NystromMap {
  Matrix landmarks;         // s x dim
  Eigen::MatrixXd whitener; // s x s, symmetric
  double sigma = 1.0;
};

NystromMap nystrom_fit(const Matrix& data, Index s, const GaussianParams& p,
                       std::uint64_t seed);

// phi(x) = whitener * k(x) with k(x)_i = kernel(landmark_i, x).
Vector nystrom_embed(const NystromMap& nm, PointRef x);

// Mean of phi over the rows of S; computed as whitener * mean of k-vectors.
Vector nystrom_mean_embed(const NystromMap& nm, const Matrix& S);

// <mean embed of S, mean embed of T>; converges to gdk_exact as s grows.
double gdk_nystrom(const NystromMap& nm, const Matrix& S, const Matrix& T);

enum class GdkMode { exact, nystrom };

// In-sample Gaussian distributional scores: similarity of each point of D,
// taken as a single-point distribution, against D itself. Ascending ranking.
std::vector<ScoredItem> gdk_point_scores(const Matrix& data, const GaussianParams& p,
                                         GdkMode mode, Index s = 0,
                                         std::uint64_t seed = 0);

// Unsorted per-point form of the above, indexed by row.
Vector gdk_point_similarities(const Matrix& data, const GaussianParams& p,
                              GdkMode mode, Index s = 0, std::uint64_t seed = 0);

// Unnormalized Gaussian kernel density (1/|D|) sum_y kernel(x, y); intended
// for plot data, so the missing normalizing constant is deliberate.
double kde_density(const Matrix& data, const GaussianParams& p, PointRef x);

}  // namespace isokernel
