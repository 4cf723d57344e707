#include "CLI11.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "isokernel/baselines.hpp"
#include "isokernel/data_io.hpp"
#include "isokernel/distributional.hpp"
#include "isokernel/eval.hpp"
#include "isokernel/group_anomaly.hpp"
#include "isokernel/model_io.hpp"

using namespace isokernel;
using nlohmann::json;

namespace {

int env_threads() {
  const char* v = std::getenv("ISOKERNEL_THREADS");
  if (v == nullptr) return 1;
  const int parsed = std::atoi(v);
  return parsed > 0 ? parsed : 1;
}

std::vector<Index> psi_grid(Index n) {
  std::vector<Index> grid;
  for (int m = 1; m <= 12; ++m) {
    const Index psi = Index{1} << m;
    if (psi <= n) grid.push_back(psi);
  }
  return grid;
}

std::vector<double> sigma_grid() {
  std::vector<double> grid;
  for (int m = -5; m <= 5; ++m) grid.push_back(std::pow(2.0, m));
  return grid;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

void write_json(const std::string& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_ranking_csv(const std::string& path, const std::vector<ScoredItem>& items,
                       const std::string& id_name, const std::string& value_name,
                       bool anomaly_score) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << id_name << ',' << (anomaly_score ? "anomaly_score" : value_name) << ",rank\n";
  for (std::size_t k = 0; k < items.size(); ++k) {
    const double value = anomaly_score ? 1.0 - items[k].similarity : items[k].similarity;
    out << items[k].id << ',' << format_double(value) << ',' << k + 1 << '\n';
  }
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

void write_runs_csv(const std::string& path, const std::vector<json>& runs) {
  std::set<std::string> keys;
  for (const auto& run : runs) {
    for (const auto& [key, value] : run.items()) {
      (void)value;
      keys.insert(key);
    }
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  std::string header;
  for (const auto& key : keys) {
    if (!header.empty()) header += ',';
    header += key;
  }
  out << header << '\n';
  for (const auto& run : runs) {
    std::string line;
    bool first = true;
    for (const auto& key : keys) {
      if (!first) line += ',';
      first = false;
      if (run.contains(key)) {
        const auto& v = run.at(key);
        line += v.is_number() ? format_double(v.get<double>()) : v.dump();
      }
    }
    out << line << '\n';
  }
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::vector<std::uint64_t> seed_range(std::uint64_t base, int count) {
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < count; ++i) seeds.push_back(base + static_cast<std::uint64_t>(i));
  return seeds;
}

json score_summary(const Vector& sims) {
  return {{"min_score", sims.minCoeff()},
          {"max_score", sims.maxCoeff()},
          {"mean_score", sims.mean()}};
}

std::span<const double> as_span(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

struct PointScoreConfig {
  std::string in;
  std::string out = "point_score";
  int label_col = -1;
  bool header = false;
  bool no_normalize = false;
  std::string detector = "idk";
  Index psi = 16;
  Index t = 100;
  std::uint64_t seed = 1;
  double sigma = 1.0;
  bool sigma_grid_flag = false;
  bool grid_psi = false;
  Index s = 0;
  bool anomaly_score = false;
  int threads = env_threads();
  std::string save_model_path;
  std::string model_path;

  json to_json() const {
    return {{"command", "point-score"}, {"in", in},         {"out", out},
            {"label_col", label_col},   {"header", header}, {"normalize", !no_normalize},
            {"detector", detector},     {"psi", psi},       {"t", t},
            {"seed", seed},             {"sigma", sigma},   {"sigma_grid", sigma_grid_flag},
            {"grid_psi", grid_psi},     {"s", s},           {"anomaly_score", anomaly_score},
            {"threads", threads},       {"save_model", save_model_path},
            {"model", model_path}};
  }
};

int run_point_score(const PointScoreConfig& cfg) {
  write_json(cfg.out + ".config.json", cfg.to_json());

  std::optional<int> label_col;
  if (cfg.label_col >= 0) label_col = cfg.label_col;
  LabeledDataset ds = load_csv(cfg.in, label_col, std::nullopt, cfg.header);
  if (!cfg.no_normalize) ds = normalize_unit_interval(ds);
  const Index n = ds.points.rows();

  json summary = {{"n", n}, {"detector", cfg.detector}, {"seed", cfg.seed}};
  Vector sims;

  if (cfg.detector == "idk" || cfg.detector == "norm") {
    Index psi = cfg.psi;
    if (cfg.grid_psi) {
      if (!ds.has_labels()) {
        throw std::runtime_error("--grid-psi needs a labeled input (--label-col)");
      }
      json grid_rows = json::array();
      double best_auc = -1.0;
      Index best_psi = psi;
      for (const Index candidate : psi_grid(n)) {
        const IsolationModel m = fit_isolation_model(ds.points, candidate, cfg.t, cfg.seed, cfg.threads);
        const Vector grid_sims = cfg.detector == "idk"
                                     ? idk_point_similarities(m, ds.points, cfg.threads)
                                     : feature_norms(m, ds.points, cfg.threads);
        const double a = auc(as_span(grid_sims), ds.labels);
        grid_rows.push_back({{"psi", candidate}, {"auc", a}});
        if (a > best_auc) {
          best_auc = a;
          best_psi = candidate;
        }
      }
      summary["psi_grid"] = std::move(grid_rows);
      summary["best_psi"] = best_psi;
      psi = best_psi;
    }
    IsolationModel model;
    if (!cfg.model_path.empty()) {
      model = load_model(cfg.model_path);
      if (model.dim != ds.points.cols()) {
        throw std::runtime_error("loaded model dimension does not match the input");
      }
    } else {
      model = fit_isolation_model(ds.points, psi, cfg.t, cfg.seed, cfg.threads);
    }
    if (!cfg.save_model_path.empty()) save_model(cfg.save_model_path, model);
    sims = cfg.detector == "idk" ? idk_point_similarities(model, ds.points, cfg.threads)
                                 : feature_norms(model, ds.points, cfg.threads);
    summary["psi"] = model.psi;
    summary["t"] = model.t;
  } else if (cfg.detector == "gdk" || cfg.detector == "gdk-nystrom") {
    const GdkMode mode = cfg.detector == "gdk" ? GdkMode::exact : GdkMode::nystrom;
    Index s = cfg.s;
    if (s <= 0) s = static_cast<Index>(std::ceil(std::sqrt(static_cast<double>(n))));
    double sigma = cfg.sigma;
    if (cfg.sigma_grid_flag) {
      if (!ds.has_labels()) {
        throw std::runtime_error("--sigma-grid needs a labeled input (--label-col)");
      }
      json grid_rows = json::array();
      double best_auc = -1.0;
      double best_sigma = sigma;
      for (const double candidate : sigma_grid()) {
        const Vector grid_sims =
            gdk_point_similarities(ds.points, GaussianParams{candidate}, mode, s, cfg.seed);
        const double a = auc(as_span(grid_sims), ds.labels);
        grid_rows.push_back({{"sigma", candidate}, {"auc", a}});
        if (a > best_auc) {
          best_auc = a;
          best_sigma = candidate;
        }
      }
      summary["sigma_grid"] = std::move(grid_rows);
      summary["best_sigma"] = best_sigma;
      sigma = best_sigma;
    }
    sims = gdk_point_similarities(ds.points, GaussianParams{sigma}, mode, s, cfg.seed);
    summary["sigma"] = sigma;
    summary["s"] = s;
    summary["t"] = cfg.t;
    summary["psi"] = cfg.psi;
  } else {
    throw std::runtime_error("unknown detector '" + cfg.detector +
                             "' (expected idk, norm, gdk, or gdk-nystrom)");
  }

  summary.update(score_summary(sims));
  if (ds.has_labels()) summary["auc"] = auc(as_span(sims), ds.labels);
  write_ranking_csv(cfg.out + ".scores.csv", rank_ascending(sims), "id", "similarity",
                    cfg.anomaly_score);
  write_json(cfg.out + ".summary.json", summary);
  return 0;
}

struct GroupScoreConfig {
  std::string in;
  std::string out = "group_score";
  int group_col = -1;
  int label_col = -1;
  bool header = false;
  bool no_normalize = false;
  std::string detector = "idk2";
  Index psi = 16;
  Index psi2 = 0;
  Index t = 100;
  double sigma1 = 1.0;
  double sigma2 = 1.0;
  Index s = 0;
  std::uint64_t seed = 1;
  bool anomaly_score = false;
  int threads = env_threads();

  json to_json() const {
    return {{"command", "group-score"}, {"in", in},           {"out", out},
            {"group_col", group_col},   {"label_col", label_col}, {"header", header},
            {"normalize", !no_normalize}, {"detector", detector}, {"psi", psi},
            {"psi2", psi2},             {"t", t},             {"sigma1", sigma1},
            {"sigma2", sigma2},         {"s", s},             {"seed", seed},
            {"anomaly_score", anomaly_score}, {"threads", threads}};
  }
};

int run_group_score(const GroupScoreConfig& cfg) {
  write_json(cfg.out + ".config.json", cfg.to_json());
  if (cfg.group_col < 0) {
    throw std::runtime_error("group-score needs --group-col to locate the group id column");
  }
  std::optional<int> label_col;
  if (cfg.label_col >= 0) label_col = cfg.label_col;
  LabeledDataset ds = load_csv(cfg.in, label_col, cfg.group_col, cfg.header);
  if (!cfg.no_normalize) ds = normalize_unit_interval(ds);
  const GroupedDataset gd = groups_from_dataset(ds);
  const Index n = static_cast<Index>(gd.groups.size());

  std::vector<ScoredItem> items;
  json summary = {{"n_groups", n}, {"detector", cfg.detector}, {"seed", cfg.seed}, {"t", cfg.t}};
  if (cfg.detector == "idk2") {
    const Index psi2 = cfg.psi2 > 0 ? cfg.psi2 : default_level2_psi(cfg.psi, n);
    items = idk2_scores(gd.groups, cfg.psi, psi2, cfg.t, cfg.seed, cfg.threads);
    summary["psi"] = cfg.psi;
    summary["psi2"] = psi2;
  } else if (cfg.detector == "idk-gdk") {
    items = idk_gdk_scores(gd.groups, cfg.psi, cfg.t, cfg.sigma2, cfg.seed, cfg.threads);
    summary["psi"] = cfg.psi;
    summary["sigma2"] = cfg.sigma2;
  } else if (cfg.detector == "gdk2") {
    Index pooled = 0;
    for (const Group& g : gd.groups) pooled += g.points.rows();
    Index s = cfg.s;
    if (s <= 0) s = static_cast<Index>(std::ceil(std::sqrt(static_cast<double>(pooled))));
    s = std::min(s, n);
    items = gdk2_scores(gd.groups, s, cfg.sigma1, cfg.sigma2, cfg.seed, cfg.threads);
    summary["s"] = s;
    summary["sigma1"] = cfg.sigma1;
    summary["sigma2"] = cfg.sigma2;
  } else {
    throw std::runtime_error("unknown detector '" + cfg.detector +
                             "' (expected idk2, gdk2, or idk-gdk)");
  }

  Vector alphas(n);
  for (Index j = 0; j < n; ++j) alphas[j] = items[static_cast<std::size_t>(j)].similarity;
  summary.update(score_summary(alphas));
  if (!gd.labels.empty()) {
    // Items are sorted by alpha; realign labels by ranked group order.
    std::map<Index, std::uint8_t> label_by_id;
    for (std::size_t j = 0; j < gd.groups.size(); ++j) {
      label_by_id[gd.groups[j].id] = gd.labels[j];
    }
    std::vector<std::uint8_t> ordered;
    ordered.reserve(items.size());
    for (const auto& item : items) ordered.push_back(label_by_id.at(item.id));
    summary["auc"] = auc(as_span(alphas), ordered);
  }
  write_ranking_csv(cfg.out + ".groups.csv", items, "group_id", "alpha", cfg.anomaly_score);
  write_json(cfg.out + ".summary.json", summary);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Isolation-kernel point and group anomaly detection"};
  app.require_subcommand(1);
  std::function<int()> action;

  // ---- point-score ----
  PointScoreConfig psc;
  CLI::App* point = app.add_subcommand("point-score", "Score points of a CSV dataset");
  point->add_option("--in", psc.in, "input CSV")->required();
  point->add_option("--out", psc.out, "output file prefix");
  point->add_option("--label-col", psc.label_col, "label column index (0/1 labels)");
  point->add_flag("--header", psc.header, "skip a header row");
  point->add_flag("--no-normalize", psc.no_normalize, "skip per-attribute min-max scaling");
  point->add_option("--detector", psc.detector, "idk | norm | gdk | gdk-nystrom");
  point->add_option("--psi", psc.psi, "hyperspheres per partitioning");
  point->add_option("--t", psc.t, "number of partitionings");
  point->add_option("--seed", psc.seed, "random seed");
  point->add_option("--sigma", psc.sigma, "Gaussian bandwidth");
  point->add_flag("--sigma-grid", psc.sigma_grid_flag, "search sigma over 2^-5..2^5 by AUC");
  point->add_flag("--grid-psi", psc.grid_psi, "search psi over 2^1..2^12 by AUC");
  point->add_option("--s", psc.s, "landmark count for gdk-nystrom (default ceil(sqrt(n)))");
  point->add_flag("--anomaly-score", psc.anomaly_score, "emit 1 - similarity");
  point->add_option("--threads", psc.threads, "worker threads (env ISOKERNEL_THREADS)");
  point->add_option("--save-model", psc.save_model_path, "write the fitted model as JSON");
  point->add_option("--model", psc.model_path, "load a fitted model instead of fitting");
  point->callback([&] { action = [&] { return run_point_score(psc); }; });

  // ---- group-score ----
  GroupScoreConfig gsc;
  CLI::App* group = app.add_subcommand("group-score", "Score groups of a grouped CSV dataset");
  group->add_option("--in", gsc.in, "input CSV with a group id column")->required();
  group->add_option("--out", gsc.out, "output file prefix");
  group->add_option("--group-col", gsc.group_col, "group id column index");
  group->add_option("--label-col", gsc.label_col, "label column index (0/1 labels)");
  group->add_flag("--header", gsc.header, "skip a header row");
  group->add_flag("--no-normalize", gsc.no_normalize, "skip per-attribute min-max scaling");
  group->add_option("--detector", gsc.detector, "idk2 | gdk2 | idk-gdk");
  group->add_option("--psi", gsc.psi, "level-1 hyperspheres per partitioning");
  group->add_option("--psi2", gsc.psi2, "level-2 sample size (default min(psi, n/2) power of 2)");
  group->add_option("--t", gsc.t, "number of partitionings (both levels)");
  group->add_option("--sigma1", gsc.sigma1, "level-1 Gaussian bandwidth");
  group->add_option("--sigma2", gsc.sigma2, "level-2 Gaussian bandwidth");
  group->add_option("--s", gsc.s, "landmarks per level for gdk2");
  group->add_option("--seed", gsc.seed, "random seed");
  group->add_flag("--anomaly-score", gsc.anomaly_score, "emit 1 - alpha");
  group->add_option("--threads", gsc.threads, "worker threads (env ISOKERNEL_THREADS)");
  group->callback([&] { action = [&] { return run_group_score(gsc); }; });

  // ---- synth ----
  CLI::App* synth = app.add_subcommand("synth", "Generate synthetic datasets");
  synth->require_subcommand(1);

  struct {
    std::uint64_t seed = 1;
    Index n_normal = 1500;
    Index n_anom = 20;
    std::string out = "three_gaussians.csv";
    bool header = false;
  } tg;
  CLI::App* three = synth->add_subcommand("three-gaussians",
                                          "1-d clusters with a far anomaly cluster");
  three->add_option("--seed", tg.seed, "random seed");
  three->add_option("--n-normal", tg.n_normal, "normal point count");
  three->add_option("--n-anom", tg.n_anom, "anomaly point count");
  three->add_option("--out", tg.out, "output CSV path")->required();
  three->add_flag("--header", tg.header, "write a header row");
  three->callback([&] {
    action = [&] {
      const LabeledDataset ds = gen_three_gaussians_1d(tg.seed, tg.n_normal, tg.n_anom);
      save_csv(tg.out, ds, tg.header);
      write_json(tg.out + ".config.json",
                 {{"command", "synth three-gaussians"}, {"seed", tg.seed},
                  {"n_normal", tg.n_normal}, {"n_anom", tg.n_anom}, {"out", tg.out},
                  {"header", tg.header}});
      return 0;
    };
  });

  struct {
    std::string variant = "single";
    Index n_normal = 300;
    Index n_anom = 3;
    Index m = 100;
    Index d = 2;
    std::uint64_t seed = 1;
    std::string out = "gaussian_groups.csv";
    bool header = false;
  } gg;
  CLI::App* ggroups = synth->add_subcommand("gaussian-groups",
                                            "groups of Gaussian point clouds");
  ggroups->add_option("--variant", gg.variant, "single | mixture | two-density");
  ggroups->add_option("--n-normal", gg.n_normal, "normal group count");
  ggroups->add_option("--n-anom", gg.n_anom, "anomalous group count");
  ggroups->add_option("--m", gg.m, "points per group");
  ggroups->add_option("--d", gg.d, "dimensions");
  ggroups->add_option("--seed", gg.seed, "random seed");
  ggroups->add_option("--out", gg.out, "output CSV path")->required();
  ggroups->add_flag("--header", gg.header, "write a header row");
  ggroups->callback([&] {
    action = [&] {
      GroupVariant variant;
      if (gg.variant == "single") variant = GroupVariant::single;
      else if (gg.variant == "mixture") variant = GroupVariant::mixture;
      else if (gg.variant == "two-density") variant = GroupVariant::two_density;
      else throw std::runtime_error("unknown variant '" + gg.variant + "'");
      const GroupedDataset gd =
          gen_gaussian_groups(gg.n_normal, gg.n_anom, gg.m, gg.d, gg.seed, variant);
      save_csv(gg.out, dataset_from_groups(gd), gg.header);
      write_json(gg.out + ".config.json",
                 {{"command", "synth gaussian-groups"}, {"variant", gg.variant},
                  {"n_normal", gg.n_normal}, {"n_anom", gg.n_anom}, {"m", gg.m},
                  {"d", gg.d}, {"seed", gg.seed}, {"out", gg.out}, {"header", gg.header}});
      return 0;
    };
  });

  // ---- eval ----
  CLI::App* eval_cmd = app.add_subcommand("eval", "Run evaluation experiments");
  eval_cmd->require_subcommand(1);

  struct {
    std::string in;
    std::string out = "stability";
    int label_col = -1;
    bool header = false;
    bool no_normalize = false;
    std::vector<Index> t_values = {100, 1000};
    int n_seeds = 10;
    std::uint64_t base_seed = 1;
    Index psi = 16;
    int threads = env_threads();
  } st;
  CLI::App* stab = eval_cmd->add_subcommand("stability", "score spread across seeds per t");
  stab->add_option("--in", st.in, "input CSV")->required();
  stab->add_option("--out", st.out, "output file prefix");
  stab->add_option("--label-col", st.label_col, "label column to strip");
  stab->add_flag("--header", st.header, "skip a header row");
  stab->add_flag("--no-normalize", st.no_normalize, "skip min-max scaling");
  stab->add_option("--t-values", st.t_values, "comma-separated t values")->delimiter(',');
  stab->add_option("--n-seeds", st.n_seeds, "number of seeds");
  stab->add_option("--base-seed", st.base_seed, "first seed");
  stab->add_option("--psi", st.psi, "hyperspheres per partitioning");
  stab->add_option("--threads", st.threads, "worker threads");
  stab->callback([&] {
    action = [&] {
      std::optional<int> label_col;
      if (st.label_col >= 0) label_col = st.label_col;
      LabeledDataset ds = load_csv(st.in, label_col, std::nullopt, st.header);
      if (!st.no_normalize) ds = normalize_unit_interval(ds);
      const auto seeds = seed_range(st.base_seed, st.n_seeds);
      const ExperimentReport report =
          stability_report(ds.points, st.t_values, seeds, st.psi, st.threads);
      write_json(st.out + ".report.json", report_to_json(report));
      write_runs_csv(st.out + ".runs.csv", report.runs);
      write_json(st.out + ".config.json",
                 {{"command", "eval stability"}, {"in", st.in}, {"out", st.out},
                  {"label_col", st.label_col}, {"header", st.header},
                  {"normalize", !st.no_normalize}, {"t_values", st.t_values},
                  {"n_seeds", st.n_seeds}, {"base_seed", st.base_seed},
                  {"psi", st.psi}, {"threads", st.threads}});
      return 0;
    };
  });

  struct {
    std::string in_normal;
    std::string in_anom;
    std::string out = "contamination";
    bool header = false;
    std::vector<double> gammas = {0.0, 1.0, 2.0, 4.0};
    int n_seeds = 10;
    std::uint64_t base_seed = 1;
    double base_ratio = -1.0;
    Index psi = 16;
    Index t = 100;
    int threads = env_threads();
  } ct;
  CLI::App* cont = eval_cmd->add_subcommand(
      "contamination", "AUC as anomalies leak into the training set");
  cont->add_option("--in-normal", ct.in_normal, "CSV of normal points")->required();
  cont->add_option("--in-anom", ct.in_anom, "CSV of anomaly pool")->required();
  cont->add_option("--out", ct.out, "output file prefix");
  cont->add_flag("--header", ct.header, "skip header rows");
  cont->add_option("--gammas", ct.gammas, "comma-separated gamma values")->delimiter(',');
  cont->add_option("--n-seeds", ct.n_seeds, "number of seeds");
  cont->add_option("--base-seed", ct.base_seed, "first seed");
  cont->add_option("--base-ratio", ct.base_ratio,
                   "anomaly ratio defining gamma=1 (default pool/normal)");
  cont->add_option("--psi", ct.psi, "hyperspheres per partitioning");
  cont->add_option("--t", ct.t, "number of partitionings");
  cont->add_option("--threads", ct.threads, "worker threads");
  cont->callback([&] {
    action = [&] {
      const LabeledDataset normal = load_csv(ct.in_normal, std::nullopt, std::nullopt, ct.header);
      const LabeledDataset anom = load_csv(ct.in_anom, std::nullopt, std::nullopt, ct.header);
      const auto seeds = seed_range(ct.base_seed, ct.n_seeds);
      const ExperimentReport report =
          contamination_report(normal.points, anom.points, ct.base_ratio, ct.gammas,
                               seeds, ct.psi, ct.t, ct.threads);
      write_json(ct.out + ".report.json", report_to_json(report));
      write_runs_csv(ct.out + ".runs.csv", report.runs);
      write_json(ct.out + ".config.json",
                 {{"command", "eval contamination"}, {"in_normal", ct.in_normal},
                  {"in_anom", ct.in_anom}, {"out", ct.out}, {"header", ct.header},
                  {"gammas", ct.gammas}, {"n_seeds", ct.n_seeds},
                  {"base_seed", ct.base_seed}, {"base_ratio", ct.base_ratio},
                  {"psi", ct.psi}, {"t", ct.t}, {"threads", ct.threads}});
      return 0;
    };
  });

  // ---- bench ----
  CLI::App* bench = app.add_subcommand("bench", "Runtime benchmarks");
  bench->require_subcommand(1);

  struct {
    std::vector<Index> groups = {250, 500, 1000};
    Index m = 16;
    std::string detector = "idk2";
    std::string out = "scaleup";
    ScaleupOptions opt;
  } sb;
  CLI::App* scale = bench->add_subcommand("scaleup", "wall-clock growth over group counts");
  scale->add_option("--groups", sb.groups, "comma-separated ascending group counts")->delimiter(',');
  scale->add_option("--m", sb.m, "points per group");
  scale->add_option("--detector", sb.detector, "idk2 | gdk2 | gdk-pairwise");
  scale->add_option("--out", sb.out, "output file prefix");
  scale->add_option("--psi", sb.opt.psi, "level-1 sample size");
  scale->add_option("--psi2", sb.opt.psi2, "level-2 sample size");
  scale->add_option("--t", sb.opt.t, "number of partitionings");
  scale->add_option("--s", sb.opt.s, "gdk2 landmark count");
  scale->add_option("--sigma1", sb.opt.sigma1, "level-1 bandwidth");
  scale->add_option("--sigma2", sb.opt.sigma2, "level-2 bandwidth");
  scale->add_option("--d", sb.opt.d, "dimensions");
  scale->add_option("--seed", sb.opt.seed, "random seed");
  scale->add_option("--repeats", sb.opt.repeats, "timed runs per size");
  scale->add_option("--timeout-sec", sb.opt.timeout_sec, "skip larger sizes past this warm-up time");
  scale->callback([&] {
    action = [&] {
      ScaleupDetector detector;
      if (sb.detector == "idk2") detector = ScaleupDetector::idk2;
      else if (sb.detector == "gdk2") detector = ScaleupDetector::gdk2;
      else if (sb.detector == "gdk-pairwise") detector = ScaleupDetector::gdk_exact_pairwise;
      else throw std::runtime_error("unknown detector '" + sb.detector + "'");
      const ExperimentReport report = scaleup_bench(sb.groups, sb.m, detector, sb.opt);
      write_json(sb.out + ".report.json", report_to_json(report));
      write_runs_csv(sb.out + ".runs.csv", report.runs);
      write_json(sb.out + ".config.json",
                 {{"command", "bench scaleup"}, {"groups", sb.groups}, {"m", sb.m},
                  {"detector", sb.detector}, {"out", sb.out}, {"psi", sb.opt.psi},
                  {"psi2", sb.opt.psi2}, {"t", sb.opt.t}, {"s", sb.opt.s},
                  {"sigma1", sb.opt.sigma1}, {"sigma2", sb.opt.sigma2},
                  {"d", sb.opt.d}, {"seed", sb.opt.seed}, {"repeats", sb.opt.repeats},
                  {"timeout_sec", sb.opt.timeout_sec}});
      return 0;
    };
  });

  CLI11_PARSE(app, argc, argv);
  try {
    return action ? action() : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
