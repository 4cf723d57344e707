#include "isokernel/group_anomaly.hpp"

#include <algorithm>
#include <stdexcept>

#include "isokernel/parallel.hpp"
#include "isokernel/rng.hpp"

namespace isokernel {

namespace {

constexpr std::uint64_t kLevel2SeedTag = 0x1d2c3b4a59687766ull;

void check_groups(std::span<const Group> groups, const char* who) {
  if (groups.size() < 2) {
    throw std::invalid_argument(std::string(who) + ": need at least 2 groups");
  }
  const Index dim = groups.front().points.cols();
  for (const Group& g : groups) {
    if (g.points.rows() == 0) {
      throw std::invalid_argument(std::string(who) + ": group " +
                                  std::to_string(g.id) + " is empty");
    }
    if (g.points.cols() != dim) {
      throw std::invalid_argument(std::string(who) + ": group " +
                                  std::to_string(g.id) + " has mismatched dimension");
    }
  }
}

Matrix sorted_rows(const Matrix& m) {
  std::vector<Index> order(static_cast<std::size_t>(m.rows()));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (m(a, c) != m(b, c)) return m(a, c) < m(b, c);
    }
    return false;
  });
  Matrix out(m.rows(), m.cols());
  for (Index r = 0; r < m.rows(); ++r) out.row(r) = m.row(order[static_cast<std::size_t>(r)]);
  return out;
}

std::vector<ScoredItem> to_group_ids(std::vector<ScoredItem> items,
                                     std::span<const Group> groups) {
  for (ScoredItem& item : items) {
    item.id = groups[static_cast<std::size_t>(item.id)].id;
  }
  return items;
}

}  // namespace

Matrix pool_points(std::span<const Group> groups) {
  Index total = 0;
  for (const Group& g : groups) total += g.points.rows();
  Matrix pooled(total, groups.front().points.cols());
  Index row = 0;
  for (const Group& g : groups) {
    pooled.middleRows(row, g.points.rows()) = g.points;
    row += g.points.rows();
  }
  return sorted_rows(pooled);
}

Matrix level1_mean_maps(std::span<const Group> groups, Index psi, Index t,
                        std::uint64_t seed, int threads) {
  check_groups(groups, "level1_mean_maps");
  const Matrix pooled = pool_points(groups);
  const IsolationModel model = fit_isolation_model(pooled, psi, t, seed, threads);
  Matrix maps(static_cast<Index>(groups.size()), t * psi);
  parallel_for_chunks(static_cast<Index>(groups.size()), threads,
                      [&](int, Index begin, Index end) {
                        for (Index j = begin; j < end; ++j) {
                          maps.row(j) =
                              mean_map(model, groups[static_cast<std::size_t>(j)].points).values;
                        }
                      });
  return maps;
}

Idk2Model fit_idk2(std::span<const Group> groups, Index psi, Index psi2, Index t,
                   std::uint64_t seed, int threads) {
  check_groups(groups, "fit_idk2");
  if (psi2 > static_cast<Index>(groups.size())) {
    throw std::invalid_argument("fit_idk2: psi2 exceeds the number of groups");
  }
  Idk2Model model;
  model.group_maps = level1_mean_maps(groups, psi, t, seed, threads);
  model.level2 = fit_isolation_model(sorted_rows(model.group_maps), psi2, t,
                                     mix64(seed ^ kLevel2SeedTag), threads);
  return model;
}

std::vector<ScoredItem> idk2_scores(std::span<const Group> groups, Index psi,
                                    Index psi2, Index t, std::uint64_t seed,
                                    int threads) {
  const Idk2Model model = fit_idk2(groups, psi, psi2, t, seed, threads);
  // Group scoring is point scoring of the mapped points under the level-2
  // model: similarity of each row against the mean map of all rows.
  const Vector alphas =
      idk_to_mean_all(model.level2, mean_map(model.level2, model.group_maps, threads),
                      model.group_maps, threads);
  return to_group_ids(rank_ascending(alphas), groups);
}

std::vector<ScoredItem> idk_gdk_scores(std::span<const Group> groups, Index psi,
                                       Index t, double sigma2, std::uint64_t seed,
                                       int threads) {
  check_groups(groups, "idk_gdk_scores");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("idk_gdk_scores: sigma2 must be > 0");
  const Matrix maps = level1_mean_maps(groups, psi, t, seed, threads);
  const Index n = maps.rows();
  Vector alphas(n);
  const double scale = -1.0 / (2.0 * sigma2 * sigma2);
  parallel_for_chunks(n, threads, [&](int, Index begin, Index end) {
    for (Index j = begin; j < end; ++j) {
      alphas[j] = (((maps.rowwise() - maps.row(j)).rowwise().squaredNorm() * scale)
                       .array().exp()).mean();
    }
  });
  return to_group_ids(rank_ascending(alphas), groups);
}

std::vector<ScoredItem> gdk2_scores(std::span<const Group> groups, Index s,
                                    double sigma1, double sigma2,
                                    std::uint64_t seed, int threads) {
  check_groups(groups, "gdk2_scores");
  const Index n = static_cast<Index>(groups.size());
  const Matrix pooled = pool_points(groups);
  if (s < 1 || s > pooled.rows() || s > n) {
    throw std::invalid_argument("gdk2_scores: landmark count must satisfy 1 <= s <= min(pooled points, groups)");
  }
  const NystromMap level1 = nystrom_fit(pooled, s, GaussianParams{sigma1}, seed);
  Matrix embeds(n, s);
  parallel_for_chunks(n, threads, [&](int, Index begin, Index end) {
    for (Index j = begin; j < end; ++j) {
      embeds.row(j) = nystrom_mean_embed(level1, groups[static_cast<std::size_t>(j)].points);
    }
  });
  const NystromMap level2 = nystrom_fit(sorted_rows(embeds), s, GaussianParams{sigma2},
                                        mix64(seed ^ kLevel2SeedTag));
  Matrix level2_embeds(n, s);
  for (Index j = 0; j < n; ++j) {
    level2_embeds.row(j) = nystrom_embed(level2, embeds.row(j));
  }
  const Vector mean = level2_embeds.colwise().mean().transpose();
  Vector alphas = level2_embeds * mean;
  return to_group_ids(rank_ascending(alphas), groups);
}

Index default_level2_psi(Index psi, Index n_groups) {
  Index cap = std::max<Index>(n_groups / 2, 2);
  Index pow2 = 2;
  while (pow2 * 2 <= cap) pow2 *= 2;
  return std::max<Index>(2, std::min(psi, pow2));
}

}  // namespace isokernel
