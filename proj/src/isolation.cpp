#include "isokernel/isolation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "isokernel/parallel.hpp"
#include "isokernel/rng.hpp"

namespace isokernel {

namespace {

// Single containment predicate shared by every code path. Radii are stored as
// distances, so both sides compare in squared units.
inline bool sphere_contains(double dist_sq, double radius) {
  return dist_sq <= radius * radius;
}

void check_dim(const IsolationModel& model, PointRef x, const char* who) {
  if (x.size() != model.dim) {
    throw std::invalid_argument(std::string(who) + ": point dimension " +
                                std::to_string(x.size()) + " does not match model dimension " +
                                std::to_string(model.dim));
  }
}

}  // namespace

Index FeatureVector::active_count() const {
  Index n = 0;
  for (const auto s : slots) n += (s != kNoSlot);
  return n;
}

double FeatureVector::norm() const {
  return std::sqrt(static_cast<double>(active_count()));
}

IsolationModel fit_isolation_model(const Matrix& data, Index psi, Index t,
                                   std::uint64_t seed, int threads) {
  const Index n = data.rows();
  if (n == 0) throw std::invalid_argument("fit_isolation_model: empty dataset");
  if (psi < 2 || psi > n) {
    throw std::invalid_argument("fit_isolation_model: psi must satisfy 2 <= psi <= " +
                                std::to_string(n) + ", got " + std::to_string(psi));
  }
  if (t < 1) throw std::invalid_argument("fit_isolation_model: t must be >= 1");

  IsolationModel model;
  model.psi = psi;
  model.t = t;
  model.dim = data.cols();
  model.seed = seed;
  model.parts.resize(static_cast<std::size_t>(t));

  parallel_for_chunks(t, threads, [&](int, Index begin, Index end) {
    for (Index i = begin; i < end; ++i) {
      Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(i));
      const std::vector<Index> idx = sample_without_replacement(n, psi, rng);

      Partitioning part;
      part.centers.resize(psi, data.cols());
      for (Index j = 0; j < psi; ++j) {
        part.centers.row(j) = data.row(idx[static_cast<std::size_t>(j)]);
      }
      part.radii.resize(psi);
      for (Index j = 0; j < psi; ++j) {
        double min_sq = std::numeric_limits<double>::infinity();
        for (Index k = 0; k < psi; ++k) {
          if (k == j) continue;
          const double d2 = (part.centers.row(j) - part.centers.row(k)).squaredNorm();
          if (d2 < min_sq) min_sq = d2;
        }
        part.radii[j] = std::sqrt(min_sq);
      }
      model.parts[static_cast<std::size_t>(i)] = std::move(part);
    }
  });
  return model;
}

std::int32_t assign_slot(const Partitioning& part, PointRef x) {
  std::int32_t best = kNoSlot;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < part.centers.rows(); ++j) {
    const double d2 = (part.centers.row(j) - x).squaredNorm();
    if (sphere_contains(d2, part.radii[j]) && d2 < best_d2) {
      best = static_cast<std::int32_t>(j);
      best_d2 = d2;
    }
  }
  return best;
}

FeatureVector embed_point(const IsolationModel& model, PointRef x) {
  check_dim(model, x, "embed_point");
  FeatureVector fv;
  fv.slots.resize(model.parts.size());
  for (std::size_t i = 0; i < model.parts.size(); ++i) {
    fv.slots[i] = assign_slot(model.parts[i], x);
  }
  return fv;
}

double ik_similarity(const IsolationModel& model, PointRef x, PointRef y) {
  check_dim(model, x, "ik_similarity");
  check_dim(model, y, "ik_similarity");
  Index agree = 0;
  for (const auto& part : model.parts) {
    const std::int32_t sx = assign_slot(part, x);
    if (sx == kNoSlot) continue;
    agree += (sx == assign_slot(part, y));
  }
  return static_cast<double>(agree) / static_cast<double>(model.t);
}

double ik_bruteforce(const IsolationModel& model, PointRef x, PointRef y) {
  check_dim(model, x, "ik_bruteforce");
  check_dim(model, y, "ik_bruteforce");
  const Index psi = model.psi;
  Vector d2x(psi), d2y(psi);
  Index agree = 0;
  for (const auto& part : model.parts) {
    for (Index j = 0; j < psi; ++j) {
      d2x[j] = (part.centers.row(j) - x).squaredNorm();
      d2y[j] = (part.centers.row(j) - y).squaredNorm();
    }
    // Direct evaluation of the indicator pair for every hypersphere: a point
    // is in sphere j iff j contains it and no containing sphere k is closer
    // (or equally close with a lower index).
    for (Index j = 0; j < psi; ++j) {
      if (!sphere_contains(d2x[j], part.radii[j])) continue;
      if (!sphere_contains(d2y[j], part.radii[j])) continue;
      bool x_in_j = true;
      bool y_in_j = true;
      for (Index k = 0; k < psi; ++k) {
        if (k == j) continue;
        const bool closer_x = d2x[k] < d2x[j] || (d2x[k] == d2x[j] && k < j);
        const bool closer_y = d2y[k] < d2y[j] || (d2y[k] == d2y[j] && k < j);
        if (closer_x && sphere_contains(d2x[k], part.radii[k])) x_in_j = false;
        if (closer_y && sphere_contains(d2y[k], part.radii[k])) y_in_j = false;
      }
      agree += (x_in_j && y_in_j);
    }
  }
  return static_cast<double>(agree) / static_cast<double>(model.t);
}

double feature_norm(const IsolationModel& model, PointRef x) {
  check_dim(model, x, "feature_norm");
  Index active = 0;
  for (const auto& part : model.parts) {
    active += (assign_slot(part, x) != kNoSlot);
  }
  return std::sqrt(static_cast<double>(active)) / std::sqrt(static_cast<double>(model.t));
}

Vector feature_norms(const IsolationModel& model, const Matrix& points, int threads) {
  if (points.cols() != model.dim) {
    throw std::invalid_argument("feature_norms: dimension mismatch");
  }
  Vector out(points.rows());
  parallel_for_chunks(points.rows(), threads, [&](int, Index begin, Index end) {
    for (Index i = begin; i < end; ++i) {
      out[i] = feature_norm(model, points.row(i));
    }
  });
  return out;
}

}  // namespace isokernel
