#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "isokernel/types.hpp"

namespace isokernel {

// Probability that a uniformly random anomaly has strictly lower similarity
// than a uniformly random normal point, ties counted 1/2 (rank-sum form).
// labels[i] == 1 marks an anomaly; both classes must be present.
double auc(std::span<const double> similarities,
           std::span<const std::uint8_t> labels);

// Generic experiment record: free-form parameters, one JSON object of numeric
// metrics per run, and per-metric aggregates recomputable from the runs.
struct ExperimentReport {
  std::string name;
  nlohmann::json parameters;
  std::vector<nlohmann::json> runs;
  nlohmann::json aggregate;
};

// Per numeric key appearing in the runs: {"mean", "std", "min", "max"}.
// std is the sample standard deviation (0 for a single value).
nlohmann::json aggregate_runs(const std::vector<nlohmann::json>& runs);

nlohmann::json report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const nlohmann::json& j);

// Score spread across seeds for each t: one run row per t with the mean over
// points of the per-point standard deviation of in-sample similarities.
ExperimentReport stability_report(const Matrix& data,
                                  std::span<const Index> t_values,
                                  std::span<const std::uint64_t> seeds,
                                  Index psi, int threads = 1);

// Trains on the normal points plus round(gamma * base_ratio * |normal|)
// anomalies subsampled from `anomalies`, then scores normal and anomalous
// points together (always the full set, so AUCs are comparable across gamma).
// One run row per (gamma, seed) with the AUC of the distributional detector
// and of the feature-norm baseline. base_ratio < 0 defaults to
// |anomalies| / |normal|.
ExperimentReport contamination_report(const Matrix& normal, const Matrix& anomalies,
                                      double base_ratio,
                                      std::span<const double> gammas,
                                      std::span<const std::uint64_t> seeds,
                                      Index psi, Index t, int threads = 1);

enum class ScaleupDetector { idk2, gdk2, gdk_exact_pairwise };

struct ScaleupOptions {
  Index psi = 16;
  Index psi2 = 8;
  Index t = 100;
  Index s = 0;  // gdk2 landmarks; 0 picks ceil(sqrt(pooled points)) capped by n
  double sigma1 = 1.0;
  double sigma2 = 1.0;
  Index d = 2;
  std::uint64_t seed = 1;
  int repeats = 3;          // timed runs per size; the median is reported
  double timeout_sec = 0.0; // abort larger sizes once a warm-up exceeds this; 0 = off
};

// Wall-clock growth over ascending group counts: per n, the median of
// `repeats` runs after one warm-up, plus the ratio to the previous size.
ExperimentReport scaleup_bench(std::span<const Index> group_counts, Index m,
                               ScaleupDetector detector,
                               const ScaleupOptions& options = {});

std::string scaleup_detector_name(ScaleupDetector detector);

}  // namespace isokernel
