#include "isokernel/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <stdexcept>

#include "isokernel/data_io.hpp"
#include "isokernel/distributional.hpp"
#include "isokernel/group_anomaly.hpp"
#include "isokernel/rng.hpp"

namespace isokernel {

namespace {

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

double auc(std::span<const double> similarities, std::span<const std::uint8_t> labels) {
  if (similarities.size() != labels.size()) {
    throw std::invalid_argument("auc: similarity and label lengths differ");
  }
  const std::size_t n = similarities.size();
  std::size_t n_anom = 0;
  for (const auto l : labels) n_anom += (l != 0);
  const std::size_t n_norm = n - n_anom;
  if (n_anom == 0 || n_norm == 0) {
    throw std::invalid_argument("auc: both labels must be present");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return similarities[a] < similarities[b];
  });
  // Midranks over tie groups; the normal-rank sum gives the probability that
  // a random anomaly sits strictly below a random normal, ties half-counted.
  double normal_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && similarities[order[j]] == similarities[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);  // 1-based
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 0) normal_rank_sum += midrank;
    }
    i = j;
  }
  const double nn = static_cast<double>(n_norm);
  const double na = static_cast<double>(n_anom);
  return (normal_rank_sum - nn * (nn + 1.0) / 2.0) / (na * nn);
}

nlohmann::json aggregate_runs(const std::vector<nlohmann::json>& runs) {
  std::map<std::string, std::vector<double>> values;
  for (const auto& run : runs) {
    for (const auto& [key, value] : run.items()) {
      if (value.is_number()) values[key].push_back(value.get<double>());
    }
  }
  nlohmann::json agg = nlohmann::json::object();
  for (const auto& [key, v] : values) {
    const double n = static_cast<double>(v.size());
    double mean = 0.0;
    for (const double x : v) mean += x;
    mean /= n;
    double var = 0.0;
    for (const double x : v) var += (x - mean) * (x - mean);
    const double stddev = v.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
    agg[key] = {{"mean", mean},
                {"std", stddev},
                {"min", *std::min_element(v.begin(), v.end())},
                {"max", *std::max_element(v.begin(), v.end())}};
  }
  return agg;
}

nlohmann::json report_to_json(const ExperimentReport& report) {
  return {{"name", report.name},
          {"parameters", report.parameters},
          {"runs", report.runs},
          {"aggregate", report.aggregate}};
}

ExperimentReport report_from_json(const nlohmann::json& j) {
  ExperimentReport report;
  report.name = j.at("name").get<std::string>();
  report.parameters = j.at("parameters");
  report.runs = j.at("runs").get<std::vector<nlohmann::json>>();
  report.aggregate = j.at("aggregate");
  return report;
}

ExperimentReport stability_report(const Matrix& data, std::span<const Index> t_values,
                                  std::span<const std::uint64_t> seeds, Index psi,
                                  int threads) {
  if (t_values.empty()) throw std::invalid_argument("stability_report: no t values");
  for (const Index t : t_values) {
    if (t < 1) throw std::invalid_argument("stability_report: t must be >= 1");
  }
  if (seeds.size() < 2) throw std::invalid_argument("stability_report: need at least 2 seeds");

  ExperimentReport report;
  report.name = "stability";
  report.parameters = {{"psi", psi},
                       {"n_points", data.rows()},
                       {"t_values", std::vector<Index>(t_values.begin(), t_values.end())},
                       {"seeds", std::vector<std::uint64_t>(seeds.begin(), seeds.end())}};
  const Index n = data.rows();
  for (const Index t : t_values) {
    Matrix scores(static_cast<Index>(seeds.size()), n);
    for (std::size_t si = 0; si < seeds.size(); ++si) {
      const IsolationModel model = fit_isolation_model(data, psi, t, seeds[si], threads);
      scores.row(static_cast<Index>(si)) =
          idk_point_similarities(model, data, threads).transpose();
    }
    double mean_std = 0.0;
    for (Index c = 0; c < n; ++c) {
      // Exactly equal scores across seeds have zero spread; skipping the
      // arithmetic avoids rounding residue from the mean.
      if (scores.col(c).maxCoeff() == scores.col(c).minCoeff()) continue;
      const double mean = scores.col(c).mean();
      const double var = (scores.col(c).array() - mean).square().sum() /
                         static_cast<double>(seeds.size() - 1);
      mean_std += std::sqrt(var);
    }
    mean_std /= static_cast<double>(n);
    report.runs.push_back({{"t", t}, {"mean_point_std", mean_std}});
  }
  report.aggregate = aggregate_runs(report.runs);
  return report;
}

ExperimentReport contamination_report(const Matrix& normal, const Matrix& anomalies,
                                      double base_ratio, std::span<const double> gammas,
                                      std::span<const std::uint64_t> seeds, Index psi,
                                      Index t, int threads) {
  if (normal.rows() < 2) throw std::invalid_argument("contamination_report: too few normal points");
  if (anomalies.rows() < 1) throw std::invalid_argument("contamination_report: no anomalies");
  if (normal.cols() != anomalies.cols()) {
    throw std::invalid_argument("contamination_report: dimension mismatch");
  }
  if (seeds.empty()) throw std::invalid_argument("contamination_report: no seeds");
  if (base_ratio < 0.0) {
    base_ratio = static_cast<double>(anomalies.rows()) / static_cast<double>(normal.rows());
  }
  std::vector<Index> train_counts;
  for (const double gamma : gammas) {
    if (gamma < 0.0) throw std::invalid_argument("contamination_report: gamma must be >= 0");
    const auto k = static_cast<Index>(
        std::llround(gamma * base_ratio * static_cast<double>(normal.rows())));
    if (k > anomalies.rows()) {
      throw std::invalid_argument("contamination_report: not enough anomalies to subsample " +
                                  std::to_string(k));
    }
    train_counts.push_back(k);
  }

  Matrix eval_points(normal.rows() + anomalies.rows(), normal.cols());
  eval_points.topRows(normal.rows()) = normal;
  eval_points.bottomRows(anomalies.rows()) = anomalies;
  std::vector<std::uint8_t> eval_labels(static_cast<std::size_t>(eval_points.rows()), 0);
  for (Index r = normal.rows(); r < eval_points.rows(); ++r) {
    eval_labels[static_cast<std::size_t>(r)] = 1;
  }

  ExperimentReport report;
  report.name = "contamination";
  report.parameters = {{"psi", psi},
                       {"t", t},
                       {"base_ratio", base_ratio},
                       {"n_normal", normal.rows()},
                       {"n_anomaly_pool", anomalies.rows()},
                       {"gammas", std::vector<double>(gammas.begin(), gammas.end())},
                       {"seeds", std::vector<std::uint64_t>(seeds.begin(), seeds.end())}};

  for (const std::uint64_t seed : seeds) {
    for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
      const Index k = train_counts[gi];
      Matrix train(normal.rows() + k, normal.cols());
      train.topRows(normal.rows()) = normal;
      Rng rng = Rng::substream(seed, gi);
      const std::vector<Index> picked = sample_without_replacement(anomalies.rows(), k, rng);
      for (Index r = 0; r < k; ++r) {
        train.row(normal.rows() + r) = anomalies.row(picked[static_cast<std::size_t>(r)]);
      }
      const IsolationModel model = fit_isolation_model(train, psi, t, seed, threads);
      const MeanMap mm = mean_map(model, train, threads);
      const Vector sim_idk = idk_to_mean_all(model, mm, eval_points, threads);
      const Vector sim_norm = feature_norms(model, eval_points, threads);
      report.runs.push_back(
          {{"gamma", gammas[gi]},
           {"seed", seed},
           {"train_anomalies", k},
           {"auc_idk", auc({sim_idk.data(), static_cast<std::size_t>(sim_idk.size())}, eval_labels)},
           {"auc_norm", auc({sim_norm.data(), static_cast<std::size_t>(sim_norm.size())}, eval_labels)}});
    }
  }
  report.aggregate = aggregate_runs(report.runs);
  return report;
}

std::string scaleup_detector_name(ScaleupDetector detector) {
  switch (detector) {
    case ScaleupDetector::idk2: return "idk2";
    case ScaleupDetector::gdk2: return "gdk2";
    case ScaleupDetector::gdk_exact_pairwise: return "gdk_exact_pairwise";
  }
  return "unknown";
}

ExperimentReport scaleup_bench(std::span<const Index> group_counts, Index m,
                               ScaleupDetector detector, const ScaleupOptions& opt) {
  if (group_counts.empty()) throw std::invalid_argument("scaleup_bench: no group counts");
  for (std::size_t i = 1; i < group_counts.size(); ++i) {
    if (group_counts[i] <= group_counts[i - 1]) {
      throw std::invalid_argument("scaleup_bench: group counts must be ascending");
    }
  }
  ExperimentReport report;
  report.name = "scaleup";
  report.parameters = {{"detector", scaleup_detector_name(detector)},
                       {"m", m},
                       {"d", opt.d},
                       {"psi", opt.psi},
                       {"psi2", opt.psi2},
                       {"t", opt.t},
                       {"sigma1", opt.sigma1},
                       {"sigma2", opt.sigma2},
                       {"seed", opt.seed},
                       {"repeats", opt.repeats},
                       {"group_counts", std::vector<Index>(group_counts.begin(), group_counts.end())}};

  double prev_median = 0.0;
  bool timed_out = false;
  for (const Index n : group_counts) {
    if (timed_out) {
      report.runs.push_back({{"n_groups", n}, {"timed_out", true}});
      continue;
    }
    const Index n_anom = std::max<Index>(1, n / 100);
    const GroupedDataset gd =
        gen_gaussian_groups(n - n_anom, n_anom, m, opt.d, opt.seed, GroupVariant::single);

    auto run_once = [&] {
      switch (detector) {
        case ScaleupDetector::idk2:
          idk2_scores(gd.groups, opt.psi, opt.psi2, opt.t, opt.seed, 1);
          break;
        case ScaleupDetector::gdk2: {
          Index s = opt.s;
          if (s <= 0) {
            s = static_cast<Index>(std::ceil(std::sqrt(static_cast<double>(n * m))));
          }
          s = std::min(s, n);
          gdk2_scores(gd.groups, s, opt.sigma1, opt.sigma2, opt.seed, 1);
          break;
        }
        case ScaleupDetector::gdk_exact_pairwise: {
          // Full n x n matrix of exact pairwise group similarities.
          const GaussianParams p{opt.sigma1};
          double checksum = 0.0;
          for (std::size_t a = 0; a < gd.groups.size(); ++a) {
            for (std::size_t b = 0; b < gd.groups.size(); ++b) {
              checksum += gdk_exact(gd.groups[a].points, gd.groups[b].points, p);
            }
          }
          (void)checksum;
          break;
        }
      }
    };

    const auto warm_start = std::chrono::steady_clock::now();
    run_once();  // warm-up
    const double warm_seconds = seconds_since(warm_start);
    if (opt.timeout_sec > 0.0 && warm_seconds > opt.timeout_sec) {
      report.runs.push_back(
          {{"n_groups", n}, {"timed_out", true}, {"warmup_seconds", warm_seconds}});
      timed_out = true;
      continue;
    }
    std::vector<double> times;
    for (int r = 0; r < std::max(1, opt.repeats); ++r) {
      const auto start = std::chrono::steady_clock::now();
      run_once();
      times.push_back(seconds_since(start));
    }
    const double median = median_of(times);
    nlohmann::json row = {{"n_groups", n}, {"median_seconds", median}};
    if (prev_median > 0.0) row["ratio_vs_prev"] = median / prev_median;
    prev_median = median;
    report.runs.push_back(std::move(row));
  }
  report.aggregate = aggregate_runs(report.runs);
  return report;
}

}  // namespace isokernel
