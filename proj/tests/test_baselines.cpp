#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "isokernel/baselines.hpp"
#include "isokernel/rng.hpp"

using namespace isokernel;

namespace {

Matrix uniform_points(Index n, Index d, std::uint64_t seed, double lo = 0.0, double hi = 1.0) {
  Rng rng(seed);
  Matrix m(n, d);
  for (Index r = 0; r < n; ++r) {
    for (Index c = 0; c < d; ++c) m(r, c) = rng.uniform(lo, hi);
  }
  return m;
}

RowVector point1(double x) {
  RowVector p(1);
  p << x;
  return p;
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v.size() % 2 == 1 ? v[v.size() / 2]
                           : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
}

}  // namespace

TEST_CASE("gaussian kernel closed forms") {
  const GaussianParams p{1.0};
  CHECK(gaussian_kernel(point1(0.3), point1(0.3), p) == 1.0);
  CHECK(gaussian_kernel(point1(0.0), point1(1.0), p) == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
  CHECK(gaussian_kernel(point1(0.0), point1(100.0), p) < 1e-300);
  CHECK_THROWS_AS(gaussian_kernel(point1(0.0), point1(1.0), GaussianParams{0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(gaussian_kernel(point1(0.0), point1(1.0), GaussianParams{-2.0}),
                  std::invalid_argument);
}

TEST_CASE("exact distributional kernel matches the full matrix mean") {
  const GaussianParams p{0.7};
  Matrix single(1, 2);
  single << 0.4, 0.6;
  CHECK(gdk_exact(single, single, p) == 1.0);

  const Matrix s = uniform_points(50, 3, 1);
  const Matrix t = uniform_points(50, 3, 2);
  double oracle = 0.0;
  for (Index i = 0; i < s.rows(); ++i) {
    for (Index j = 0; j < t.rows(); ++j) {
      oracle += gaussian_kernel(s.row(i), t.row(j), p);
    }
  }
  oracle /= static_cast<double>(s.rows() * t.rows());
  CHECK(gdk_exact(s, t, p) == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(gdk_exact(s, t, p) == doctest::Approx(gdk_exact(t, s, p)).epsilon(1e-12));
  CHECK(gdk_exact(s, t, p) > 0.0);
  CHECK(gdk_exact(s, t, p) <= 1.0);
  CHECK_THROWS_AS(gdk_exact(Matrix(0, 3), t, p), std::invalid_argument);
}

TEST_CASE("landmark embeddings reproduce the landmark kernel rows") {
  const Matrix data = uniform_points(80, 4, 3);
  const GaussianParams p{0.5};
  const NystromMap nm = nystrom_fit(data, 40, p, 7);
  CHECK(nm.whitener.isApprox(nm.whitener.transpose(), 1e-12));
  for (Index i = 0; i < 8; ++i) {
    const Vector fi = nystrom_embed(nm, nm.landmarks.row(i));
    for (Index j = 0; j < nm.landmarks.rows(); ++j) {
      const Vector fj = nystrom_embed(nm, nm.landmarks.row(j));
      const double expected = gaussian_kernel(nm.landmarks.row(i), nm.landmarks.row(j), p);
      CHECK(fi.dot(fj) == doctest::Approx(expected).epsilon(1e-6));
    }
  }
}

TEST_CASE("full landmark set recovers the exact kernel") {
  const Matrix data = uniform_points(200, 5, 11);
  const GaussianParams p{0.25};  // well-conditioned Gram at this bandwidth
  const NystromMap nm = nystrom_fit(data, data.rows(), p, 5);
  const Matrix s = data.topRows(100);
  const Matrix t = data.bottomRows(100);
  CHECK(std::abs(gdk_nystrom(nm, s, t) - gdk_exact(s, t, p)) <= 1e-6);
  CHECK(gdk_nystrom(nm, s, s) >= 0.0);
}

TEST_CASE("landmark count errors are rejected") {
  const Matrix data = uniform_points(30, 2, 4);
  CHECK_THROWS_AS(nystrom_fit(data, 0, GaussianParams{1.0}, 1), std::invalid_argument);
  CHECK_THROWS_AS(nystrom_fit(data, 31, GaussianParams{1.0}, 1), std::invalid_argument);
}

TEST_CASE("approximation error shrinks as landmarks grow") {
  const Matrix data = uniform_points(400, 3, 21);
  const Matrix s = data.topRows(200);
  const Matrix t = data.bottomRows(200);
  const GaussianParams p{0.5};
  const double exact = gdk_exact(s, t, p);

  const Index sqrt_n = static_cast<Index>(std::ceil(std::sqrt(400.0)));
  std::vector<double> err_small, err_mid, err_full;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    err_small.push_back(std::abs(gdk_nystrom(nystrom_fit(data, sqrt_n, p, seed), s, t) - exact));
    err_mid.push_back(std::abs(gdk_nystrom(nystrom_fit(data, 200, p, seed), s, t) - exact));
    err_full.push_back(std::abs(gdk_nystrom(nystrom_fit(data, 400, p, seed), s, t) - exact));
  }
  const double med_small = median_of(err_small);
  const double med_mid = median_of(err_mid);
  const double med_full = median_of(err_full);
  CHECK(med_small >= med_mid);
  CHECK(med_mid >= med_full);
  CHECK(med_small / std::abs(exact) <= 0.1);
}

TEST_CASE("gaussian point scores isolate a far point under a small bandwidth") {
  Matrix data = uniform_points(100, 2, 31);
  data.row(0) << 50.0, 50.0;
  const auto items = gdk_point_scores(data, GaussianParams{0.1}, GdkMode::exact);
  CHECK(items.front().id == 0);

  // The landmark approximation needs a bandwidth wide enough to cover the
  // square before the far point separates cleanly.
  const auto ny = gdk_point_scores(data, GaussianParams{1.0}, GdkMode::nystrom, 0, 3);
  CHECK(ny.front().id == 0);
}

TEST_CASE("identical points all get the same gaussian score") {
  Matrix data(20, 2);
  for (Index r = 0; r < 20; ++r) data.row(r) << 0.5, 0.5;
  const auto items = gdk_point_scores(data, GaussianParams{1.0}, GdkMode::exact);
  for (const auto& item : items) CHECK(item.similarity == items.front().similarity);
}

TEST_CASE("kernel density peaks at a singleton and vanishes far away") {
  Matrix data(1, 1);
  data << 2.0;
  const GaussianParams p{0.5};
  const double at_point = kde_density(data, p, point1(2.0));
  CHECK(at_point == 1.0);
  CHECK(kde_density(data, p, point1(2.5)) < at_point);
  CHECK(kde_density(data, p, point1(100.0)) < 1e-300);
  CHECK_THROWS_AS(kde_density(Matrix(0, 1), p, point1(0.0)), std::invalid_argument);
}
