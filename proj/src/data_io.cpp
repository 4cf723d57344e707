#include "isokernel/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "isokernel/rng.hpp"

namespace isokernel {

namespace {

std::string trimmed(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& field, const std::string& path, std::size_t row) {
  const std::string t = trimmed(field);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size()) {
    throw std::runtime_error(path + ":" + std::to_string(row) +
                             ": expected a number, got '" + field + "'");
  }
  return value;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string::size_type start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

void append_double(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

// 0.999 chi-square quantile, Wilson-Hilferty approximation.
double chi2_q999(Index d) {
  const double z = 3.090232306167814;
  const double k = static_cast<double>(d);
  const double c = 1.0 - 2.0 / (9.0 * k) + z * std::sqrt(2.0 / (9.0 * k));
  return k * c * c * c;
}

struct MeanComponent {
  RowVector center;
  double sigma = 1.0;
};

RowVector draw_around(const MeanComponent& comp, Rng& rng) {
  RowVector v(comp.center.size());
  for (Index c = 0; c < v.size(); ++c) v[c] = comp.center[c] + comp.sigma * rng.normal();
  return v;
}

// Resamples until the candidate lies outside the 99.9% ellipse of every
// normal-mean component (with a half-sigma margin on top).
RowVector draw_outside(const MeanComponent& anom,
                       const std::vector<MeanComponent>& normals, Rng& rng) {
  const double base = std::sqrt(chi2_q999(anom.center.size())) + 0.5;
  while (true) {
    RowVector cand = draw_around(anom, rng);
    bool outside_all = true;
    for (const MeanComponent& comp : normals) {
      const double dist = (cand - comp.center).norm();
      if (dist <= base * comp.sigma) {
        outside_all = false;
        break;
      }
    }
    if (outside_all) return cand;
  }
}

}  // namespace

LabeledDataset load_csv(const std::string& path, std::optional<int> label_column,
                        std::optional<int> group_column, bool has_header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_csv: cannot open '" + path + "'");

  std::vector<std::vector<double>> feature_rows;
  std::vector<std::uint8_t> labels;
  std::vector<Index> group_ids;
  std::size_t expected_fields = 0;

  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (row == 1 && has_header) continue;
    if (trimmed(line).empty()) continue;
    const std::vector<std::string> fields = split_fields(line);
    if (expected_fields == 0) {
      expected_fields = fields.size();
    } else if (fields.size() != expected_fields) {
      throw std::runtime_error(path + ":" + std::to_string(row) + ": expected " +
                               std::to_string(expected_fields) + " columns, got " +
                               std::to_string(fields.size()));
    }
    if (label_column && (*label_column < 0 || static_cast<std::size_t>(*label_column) >= fields.size())) {
      throw std::runtime_error(path + ":" + std::to_string(row) + ": label column out of range");
    }
    if (group_column && (*group_column < 0 || static_cast<std::size_t>(*group_column) >= fields.size())) {
      throw std::runtime_error(path + ":" + std::to_string(row) + ": group column out of range");
    }
    std::vector<double> features;
    features.reserve(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const double v = parse_double(fields[c], path, row);
      if (label_column && static_cast<int>(c) == *label_column) {
        if (v != 0.0 && v != 1.0) {
          throw std::runtime_error(path + ":" + std::to_string(row) +
                                   ": label must be 0 or 1, got '" + fields[c] + "'");
        }
        labels.push_back(static_cast<std::uint8_t>(v));
      } else if (group_column && static_cast<int>(c) == *group_column) {
        if (v < 0.0 || v != std::floor(v)) {
          throw std::runtime_error(path + ":" + std::to_string(row) +
                                   ": group id must be a nonnegative integer, got '" +
                                   fields[c] + "'");
        }
        group_ids.push_back(static_cast<Index>(v));
      } else {
        features.push_back(v);
      }
    }
    feature_rows.push_back(std::move(features));
  }
  if (feature_rows.empty()) throw std::runtime_error("load_csv: '" + path + "' holds no data rows");

  LabeledDataset ds;
  ds.points.resize(static_cast<Index>(feature_rows.size()),
                   static_cast<Index>(feature_rows.front().size()));
  for (std::size_t r = 0; r < feature_rows.size(); ++r) {
    for (std::size_t c = 0; c < feature_rows[r].size(); ++c) {
      ds.points(static_cast<Index>(r), static_cast<Index>(c)) = feature_rows[r][c];
    }
  }
  ds.labels = std::move(labels);
  ds.group_ids = std::move(group_ids);
  return ds;
}

void save_csv(const std::string& path, const LabeledDataset& ds, bool write_header) {
  if (ds.has_labels() && ds.labels.size() != static_cast<std::size_t>(ds.points.rows())) {
    throw std::invalid_argument("save_csv: label count does not match points");
  }
  if (ds.has_groups() && ds.group_ids.size() != static_cast<std::size_t>(ds.points.rows())) {
    throw std::invalid_argument("save_csv: group id count does not match points");
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_csv: cannot open '" + path + "' for writing");
  if (write_header) {
    std::string header;
    if (ds.has_groups()) header += "group,";
    for (Index c = 0; c < ds.points.cols(); ++c) {
      header += "x" + std::to_string(c) + ",";
    }
    if (ds.has_labels()) {
      header += "label";
    } else if (!header.empty()) {
      header.pop_back();
    }
    out << header << '\n';
  }
  std::string line;
  for (Index r = 0; r < ds.points.rows(); ++r) {
    line.clear();
    if (ds.has_groups()) {
      line += std::to_string(ds.group_ids[static_cast<std::size_t>(r)]);
      line += ',';
    }
    for (Index c = 0; c < ds.points.cols(); ++c) {
      append_double(line, ds.points(r, c));
      if (c + 1 < ds.points.cols()) line += ',';
    }
    if (ds.has_labels()) {
      line += ',';
      line += std::to_string(static_cast<int>(ds.labels[static_cast<std::size_t>(r)]));
    }
    out << line << '\n';
  }
  if (!out) throw std::runtime_error("save_csv: write to '" + path + "' failed");
}

LabeledDataset normalize_unit_interval(const LabeledDataset& ds) {
  if (ds.points.rows() == 0) {
    throw std::invalid_argument("normalize_unit_interval: empty dataset");
  }
  if (!ds.points.allFinite()) {
    throw std::invalid_argument("normalize_unit_interval: dataset holds NaN or Inf");
  }
  LabeledDataset out = ds;
  for (Index c = 0; c < out.points.cols(); ++c) {
    const double lo = out.points.col(c).minCoeff();
    const double hi = out.points.col(c).maxCoeff();
    if (hi == lo) {
      out.points.col(c).setZero();
    } else {
      out.points.col(c) = (out.points.col(c).array() - lo) / (hi - lo);
    }
  }
  return out;
}

GroupedDataset groups_from_dataset(const LabeledDataset& ds) {
  if (!ds.has_groups()) {
    throw std::invalid_argument("groups_from_dataset: dataset has no group ids");
  }
  std::vector<Index> order;           // group ids in first-appearance order
  std::map<Index, std::vector<Index>> rows_by_id;
  for (std::size_t r = 0; r < ds.group_ids.size(); ++r) {
    const Index id = ds.group_ids[r];
    auto [it, inserted] = rows_by_id.try_emplace(id);
    if (inserted) order.push_back(id);
    it->second.push_back(static_cast<Index>(r));
  }
  GroupedDataset gd;
  gd.groups.reserve(order.size());
  if (ds.has_labels()) gd.labels.reserve(order.size());
  for (const Index id : order) {
    const std::vector<Index>& rows = rows_by_id[id];
    Group g;
    g.id = id;
    g.points.resize(static_cast<Index>(rows.size()), ds.points.cols());
    std::uint8_t label = 0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      g.points.row(static_cast<Index>(k)) = ds.points.row(rows[k]);
      if (ds.has_labels()) label |= ds.labels[static_cast<std::size_t>(rows[k])];
    }
    gd.groups.push_back(std::move(g));
    if (ds.has_labels()) gd.labels.push_back(label);
  }
  return gd;
}

LabeledDataset gen_three_gaussians_1d(std::uint64_t seed, Index n_normal, Index n_anom) {
  if (n_normal < 3 || n_anom < 0) {
    throw std::invalid_argument("gen_three_gaussians_1d: invalid counts");
  }
  // Cluster widths fall left to right, so the left cluster is a broad
  // low-density mode whose fringe competes with the anomaly cluster.
  const double means[3] = {-2.0, 8.0, 18.0};
  const double stds[3] = {3.5, 1.0, 0.5};
  Index counts[3] = {n_normal / 3, n_normal / 3, n_normal / 3};
  for (Index r = 0; r < n_normal % 3; ++r) ++counts[r];

  Rng rng(seed);
  LabeledDataset ds;
  ds.points.resize(n_normal + n_anom, 1);
  ds.labels.assign(static_cast<std::size_t>(n_normal + n_anom), 0);
  Index row = 0;
  for (int c = 0; c < 3; ++c) {
    for (Index k = 0; k < counts[c]; ++k) {
      ds.points(row++, 0) = means[c] + stds[c] * rng.normal();
    }
  }
  for (Index k = 0; k < n_anom; ++k) {
    ds.points(row, 0) = rng.uniform(20.9, 21.1);
    ds.labels[static_cast<std::size_t>(row)] = 1;
    ++row;
  }
  return ds;
}

GroupedDataset gen_gaussian_groups(Index n_normal, Index n_anom, Index m, Index d,
                                   std::uint64_t seed, GroupVariant variant) {
  if (n_normal < 1 || n_anom < 1 || m < 1 || d < 1) {
    throw std::invalid_argument("gen_gaussian_groups: invalid counts");
  }
  if (n_anom * 20 > n_normal) {
    throw std::invalid_argument(
        "gen_gaussian_groups: anomalous groups must be at most 5% of normal groups");
  }

  auto axis_center = [d](double x0) {
    RowVector c = RowVector::Zero(d);
    c[0] = x0;
    return c;
  };

  std::vector<MeanComponent> normal_comps;
  MeanComponent anom_comp;
  switch (variant) {
    case GroupVariant::single:
      normal_comps = {{axis_center(0.0), 1.0}};
      anom_comp = {axis_center(8.0), 0.5};
      break;
    case GroupVariant::mixture:
      normal_comps = {{axis_center(0.0), 0.5}, {axis_center(10.0), 2.5}};
      anom_comp = {axis_center(-6.0), 0.4};
      break;
    case GroupVariant::two_density:
      // Anomalous means sit between the clusters: clearly outside the dense
      // component yet closer to it than typical sparse-cluster spacings, the
      // regime where a single global bandwidth cannot rank them.
      normal_comps = {{axis_center(0.0), 0.3}, {axis_center(14.0), 2.4}};
      anom_comp = {axis_center(1.8), 0.15};
      break;
  }

  const double sigma_point = 0.25;
  Rng rng(seed);
  GroupedDataset gd;
  gd.groups.reserve(static_cast<std::size_t>(n_normal + n_anom));
  gd.labels.reserve(static_cast<std::size_t>(n_normal + n_anom));

  auto make_group = [&](Index id, const RowVector& mean) {
    Group g;
    g.id = id;
    g.points.resize(m, d);
    for (Index r = 0; r < m; ++r) {
      for (Index c = 0; c < d; ++c) {
        g.points(r, c) = mean[c] + sigma_point * rng.normal();
      }
    }
    return g;
  };

  for (Index j = 0; j < n_normal; ++j) {
    // Components take equal halves (first half dense for the two-component
    // variants); the remainder goes to the first component.
    const std::size_t comp =
        normal_comps.size() == 1 ? 0 : (j < (n_normal + 1) / 2 ? 0 : 1);
    gd.groups.push_back(make_group(j, draw_around(normal_comps[comp], rng)));
    gd.labels.push_back(0);
  }
  for (Index j = 0; j < n_anom; ++j) {
    gd.groups.push_back(make_group(n_normal + j, draw_outside(anom_comp, normal_comps, rng)));
    gd.labels.push_back(1);
  }
  return gd;
}

LabeledDataset dataset_from_groups(const GroupedDataset& gd) {
  if (gd.groups.empty()) {
    throw std::invalid_argument("dataset_from_groups: no groups");
  }
  Index total = 0;
  for (const Group& g : gd.groups) total += g.points.rows();
  LabeledDataset ds;
  ds.points.resize(total, gd.groups.front().points.cols());
  ds.group_ids.reserve(static_cast<std::size_t>(total));
  const bool labeled = !gd.labels.empty();
  if (labeled) ds.labels.reserve(static_cast<std::size_t>(total));
  Index row = 0;
  for (std::size_t j = 0; j < gd.groups.size(); ++j) {
    const Group& g = gd.groups[j];
    ds.points.middleRows(row, g.points.rows()) = g.points;
    for (Index r = 0; r < g.points.rows(); ++r) {
      ds.group_ids.push_back(g.id);
      if (labeled) ds.labels.push_back(gd.labels[j]);
    }
    row += g.points.rows();
  }
  return ds;
}

}  // namespace isokernel
