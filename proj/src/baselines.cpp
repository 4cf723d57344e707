#include "isokernel/baselines.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

#include "isokernel/distributional.hpp"
#include "isokernel/rng.hpp"

namespace isokernel {

namespace {

constexpr double kEigenvalueFloor = 1e-10;

void check_sigma(const GaussianParams& p, const char* who) {
  if (!(p.sigma > 0.0)) {
    throw std::invalid_argument(std::string(who) + ": sigma must be > 0");
  }
}

// Column vector of kernel values between every landmark and x.
Vector kernel_column(const Matrix& landmarks, PointRef x, double sigma) {
  const double scale = -1.0 / (2.0 * sigma * sigma);
  return ((landmarks.rowwise() - x).rowwise().squaredNorm() * scale).array().exp();
}

}  // namespace

double gaussian_kernel(PointRef x, PointRef y, const GaussianParams& p) {
  check_sigma(p, "gaussian_kernel");
  if (x.size() != y.size()) {
    throw std::invalid_argument("gaussian_kernel: dimension mismatch");
  }
  return std::exp(-(x - y).squaredNorm() / (2.0 * p.sigma * p.sigma));
}

double gdk_exact(const Matrix& S, const Matrix& T, const GaussianParams& p) {
  check_sigma(p, "gdk_exact");
  if (S.rows() == 0 || T.rows() == 0) {
    throw std::invalid_argument("gdk_exact: empty point set");
  }
  if (S.cols() != T.cols()) {
    throw std::invalid_argument("gdk_exact: dimension mismatch");
  }
  const double scale = -1.0 / (2.0 * p.sigma * p.sigma);
  double sum = 0.0;
  for (Index i = 0; i < S.rows(); ++i) {
    sum += (((T.rowwise() - S.row(i)).rowwise().squaredNorm() * scale).array().exp()).sum();
  }
  return sum / (static_cast<double>(S.rows()) * static_cast<double>(T.rows()));
}

NystromMap nystrom_fit(const Matrix& data, Index s, const GaussianParams& p,
                       std::uint64_t seed) {
  check_sigma(p, "nystrom_fit");
  if (s < 1 || s > data.rows()) {
    throw std::invalid_argument("nystrom_fit: landmark count must satisfy 1 <= s <= " +
                                std::to_string(data.rows()));
  }
  NystromMap nm;
  nm.sigma = p.sigma;
  Rng rng(seed);
  const std::vector<Index> idx = sample_without_replacement(data.rows(), s, rng);
  nm.landmarks.resize(s, data.cols());
  for (Index j = 0; j < s; ++j) {
    nm.landmarks.row(j) = data.row(idx[static_cast<std::size_t>(j)]);
  }

  Eigen::MatrixXd gram(s, s);
  for (Index j = 0; j < s; ++j) {
    gram.col(j) = kernel_column(nm.landmarks, nm.landmarks.row(j), p.sigma);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  Vector inv_sqrt = eig.eigenvalues();
  for (Index j = 0; j < s; ++j) {
    inv_sqrt[j] = inv_sqrt[j] > kEigenvalueFloor ? 1.0 / std::sqrt(inv_sqrt[j]) : 0.0;
  }
  nm.whitener = eig.eigenvectors() * inv_sqrt.asDiagonal() * eig.eigenvectors().transpose();
  return nm;
}

Vector nystrom_embed(const NystromMap& nm, PointRef x) {
  if (x.size() != nm.landmarks.cols()) {
    throw std::invalid_argument("nystrom_embed: dimension mismatch");
  }
  return nm.whitener * kernel_column(nm.landmarks, x, nm.sigma);
}

Vector nystrom_mean_embed(const NystromMap& nm, const Matrix& S) {
  if (S.rows() == 0) throw std::invalid_argument("nystrom_mean_embed: empty point set");
  if (S.cols() != nm.landmarks.cols()) {
    throw std::invalid_argument("nystrom_mean_embed: dimension mismatch");
  }
  Vector mean_k = Vector::Zero(nm.landmarks.rows());
  for (Index i = 0; i < S.rows(); ++i) {
    mean_k += kernel_column(nm.landmarks, S.row(i), nm.sigma);
  }
  mean_k /= static_cast<double>(S.rows());
  return nm.whitener * mean_k;
}

double gdk_nystrom(const NystromMap& nm, const Matrix& S, const Matrix& T) {
  return nystrom_mean_embed(nm, S).dot(nystrom_mean_embed(nm, T));
}

Vector gdk_point_similarities(const Matrix& data, const GaussianParams& p,
                              GdkMode mode, Index s, std::uint64_t seed) {
  check_sigma(p, "gdk_point_similarities");
  const Index n = data.rows();
  if (n < 2) throw std::invalid_argument("gdk_point_similarities: need at least 2 points");
  Vector out(n);
  if (mode == GdkMode::exact) {
    const double scale = -1.0 / (2.0 * p.sigma * p.sigma);
    for (Index i = 0; i < n; ++i) {
      out[i] = (((data.rowwise() - data.row(i)).rowwise().squaredNorm() * scale)
                    .array().exp()).mean();
    }
    return out;
  }
  if (s <= 0) s = static_cast<Index>(std::ceil(std::sqrt(static_cast<double>(n))));
  const NystromMap nm = nystrom_fit(data, s, p, seed);
  const Vector mean = nystrom_mean_embed(nm, data);
  for (Index i = 0; i < n; ++i) {
    out[i] = nystrom_embed(nm, data.row(i)).dot(mean);
  }
  return out;
}

std::vector<ScoredItem> gdk_point_scores(const Matrix& data, const GaussianParams& p,
                                         GdkMode mode, Index s, std::uint64_t seed) {
  return rank_ascending(gdk_point_similarities(data, p, mode, s, seed));
}

double kde_density(const Matrix& data, const GaussianParams& p, PointRef x) {
  check_sigma(p, "kde_density");
  if (data.rows() == 0) throw std::invalid_argument("kde_density: empty point set");
  const double scale = -1.0 / (2.0 * p.sigma * p.sigma);
  return (((data.rowwise() - x).rowwise().squaredNorm() * scale).array().exp()).mean();
}

}  // namespace isokernel
