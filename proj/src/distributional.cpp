#include "isokernel/distributional.hpp"

#include <algorithm>
#include <stdexcept>

#include "isokernel/parallel.hpp"

namespace isokernel {

MeanMap mean_map(const IsolationModel& model, const Matrix& points, int threads) {
  const Index n = points.rows();
  if (n == 0) throw std::invalid_argument("mean_map: empty point set");
  if (points.cols() != model.dim) {
    throw std::invalid_argument("mean_map: dimension mismatch");
  }
  const Index len = model.t * model.psi;
  const int nchunks = std::min<int>(resolve_threads(threads), static_cast<int>(n));
  std::vector<Vector> partial(static_cast<std::size_t>(std::max(nchunks, 1)),
                              Vector::Zero(len));
  parallel_for_chunks(n, threads, [&](int chunk, Index begin, Index end) {
    Vector& counts = partial[static_cast<std::size_t>(chunk)];
    for (Index r = begin; r < end; ++r) {
      const auto x = points.row(r);
      for (Index i = 0; i < model.t; ++i) {
        const std::int32_t slot = assign_slot(model.parts[static_cast<std::size_t>(i)], x);
        if (slot != kNoSlot) counts[i * model.psi + slot] += 1.0;
      }
    }
  });
  // Slot counts are integers stored in doubles, so combining chunks is exact
  // and the result is identical for any thread count.
  MeanMap mm;
  mm.t = model.t;
  mm.psi = model.psi;
  mm.values = Vector::Zero(len);
  for (const auto& counts : partial) mm.values += counts;
  mm.values /= static_cast<double>(n);
  return mm;
}

MeanMap dirac_map(const IsolationModel& model, PointRef x) {
  const FeatureVector fv = embed_point(model, x);
  MeanMap mm;
  mm.t = model.t;
  mm.psi = model.psi;
  mm.values = Vector::Zero(model.t * model.psi);
  for (Index i = 0; i < model.t; ++i) {
    const std::int32_t slot = fv.slots[static_cast<std::size_t>(i)];
    if (slot != kNoSlot) mm.values[i * model.psi + slot] = 1.0;
  }
  return mm;
}

double idk(const MeanMap& a, const MeanMap& b) {
  if (a.t != b.t || a.psi != b.psi || a.values.size() != b.values.size()) {
    throw std::invalid_argument("idk: mean maps come from different (t, psi) models");
  }
  if (a.t < 1) throw std::invalid_argument("idk: empty mean map");
  return a.values.dot(b.values) / static_cast<double>(a.t);
}

double idk_to_mean(const IsolationModel& model, const MeanMap& mean, PointRef x) {
  if (mean.t != model.t || mean.psi != model.psi) {
    throw std::invalid_argument("idk_to_mean: mean map does not match the model");
  }
  double sum = 0.0;
  for (Index i = 0; i < model.t; ++i) {
    const std::int32_t slot = assign_slot(model.parts[static_cast<std::size_t>(i)], x);
    if (slot != kNoSlot) sum += mean.values[i * model.psi + slot];
  }
  return sum / static_cast<double>(model.t);
}

Vector idk_to_mean_all(const IsolationModel& model, const MeanMap& mean,
                       const Matrix& points, int threads) {
  if (points.cols() != model.dim) {
    throw std::invalid_argument("idk_to_mean_all: dimension mismatch");
  }
  Vector out(points.rows());
  parallel_for_chunks(points.rows(), threads, [&](int, Index begin, Index end) {
    for (Index i = begin; i < end; ++i) {
      out[i] = idk_to_mean(model, mean, points.row(i));
    }
  });
  return out;
}

Vector idk_point_similarities(const IsolationModel& model, const Matrix& data,
                              int threads) {
  if (data.rows() < 2) {
    throw std::invalid_argument("idk_point_similarities: need at least 2 points");
  }
  const MeanMap mm = mean_map(model, data, threads);
  return idk_to_mean_all(model, mm, data, threads);
}

std::vector<ScoredItem> idk_point_scores(const IsolationModel& model,
                                         const Matrix& data, int threads) {
  return rank_ascending(idk_point_similarities(model, data, threads));
}

std::vector<ScoredItem> rank_ascending(const Vector& similarities) {
  std::vector<ScoredItem> items(static_cast<std::size_t>(similarities.size()));
  for (Index i = 0; i < similarities.size(); ++i) {
    items[static_cast<std::size_t>(i)] = {i, similarities[i]};
  }
  std::sort(items.begin(), items.end(), [](const ScoredItem& a, const ScoredItem& b) {
    if (a.similarity != b.similarity) return a.similarity < b.similarity;
    return a.id < b.id;
  });
  return items;
}

}  // namespace isokernel
