#include "permwig/spectra.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "permwig/entry_dist.hpp"
#include "permwig/rng.hpp"

namespace {

using permwig::Complex;
using permwig::EntrySpec;
using permwig::Matrix;

// Literal transcription of the density: sqrt(3)/(2 pi |x|) times the
// difference of the cube-root bracket, with a signed real cube root. Used as
// an oracle for the algebraically stabilized implementation.
double literal_density(double x) {
  const double s = permwig::nu_sp_support();
  if (std::abs(x) > s || x == 0.0) return 0.0;
  const double t = x * x;
  const double u = (18.0 * t + 1.0) / 27.0 - std::sqrt(t * (1.0 + 11.0 * t - t * t) / 27.0);
  const double c = std::cbrt(u);
  return std::numbers::sqrt3 / (2.0 * std::numbers::pi * std::abs(x)) *
         ((3.0 * t + 1.0) / (9.0 * c) - c);
}

Matrix random_hermitian(int n, std::uint64_t seed) {
  permwig::Rng rng = permwig::make_rng(seed);
  std::normal_distribution<double> normal;
  Matrix m(n, n);
  for (int j = 0; j < n; ++j) {
    m(j, j) = Complex(normal(rng), 0.0);
    for (int k = j + 1; k < n; ++k) {
      Complex z(normal(rng), normal(rng));
      m(j, k) = z;
      m(k, j) = std::conj(z);
    }
  }
  return m;
}

TEST_CASE("anticommutator basics") {
  Matrix b = random_hermitian(20, 3);
  Matrix id = Matrix::Identity(20, 20);
  CHECK((permwig::anticommutator(id, b) - 2.0 * b).cwiseAbs().maxCoeff() < 1e-14);
  Matrix a = random_hermitian(20, 4);
  CHECK((permwig::anticommutator(a, a) - 2.0 * a * a).cwiseAbs().maxCoeff() < 1e-12);
  Matrix h = permwig::anticommutator(a, b);
  CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  Matrix wrong(3, 4);
  CHECK_THROWS_AS(permwig::anticommutator(a, wrong), std::invalid_argument);
}

TEST_CASE("hermitian eigenvalues: closed-form cases") {
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = 3.0;
  d(1, 1) = -1.0;
  d(2, 2) = 2.0;
  auto evs = permwig::eigenvalues_hermitian(d);
  REQUIRE(evs.size() == 3);
  CHECK(evs[0] == -1.0);
  CHECK(evs[1] == 2.0);
  CHECK(evs[2] == 3.0);

  Matrix flip(2, 2);
  flip << Complex(0, 0), Complex(1, 0), Complex(1, 0), Complex(0, 0);
  auto pm = permwig::eigenvalues_hermitian(flip);
  CHECK(std::abs(pm[0] + 1.0) < 1e-14);
  CHECK(std::abs(pm[1] - 1.0) < 1e-14);

  Matrix skew(2, 2);
  skew << Complex(0, 0), Complex(0, 1), Complex(0, 1), Complex(0, 0);
  CHECK_THROWS_AS(permwig::eigenvalues_hermitian(skew), std::invalid_argument);
}

TEST_CASE("hermitian eigenvalues: trace preservation and residuals") {
  for (int n : {10, 50, 100}) {
    Matrix m = random_hermitian(n, 100 + static_cast<unsigned>(n));
    auto evs = permwig::eigenvalues_hermitian(m);
    double sum = 0.0;
    for (double ev : evs) sum += ev;
    CHECK(std::abs(sum - m.trace().real()) < 1e-9 * std::max(1.0, std::abs(m.trace().real())));

    // residual oracle ||Mv - lambda v|| <= 1e-8 ||M||
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    const double norm = m.norm();
    for (int i = 0; i < n; ++i) {
      double resid =
          (m * solver.eigenvectors().col(i) - solver.eigenvalues()(i) * solver.eigenvectors().col(i))
              .norm();
      CHECK(resid <= 1e-8 * norm);
    }
    // and the solver eigenvalues agree with ours
    for (int i = 0; i < n; ++i) CHECK(std::abs(solver.eigenvalues()(i) - evs[i]) < 1e-10);
  }
}

TEST_CASE("limit density support endpoint") {
  const double s = permwig::nu_sp_support();
  CHECK(std::abs(s - std::sqrt((11.0 + 5.0 * std::sqrt(5.0)) / 2.0)) < 1e-12);
  CHECK(std::abs(s - 3.3301906767855614) < 1e-12);
  CHECK(permwig::nu_sp_density(s + 1e-12) == 0.0);
  CHECK(permwig::nu_sp_density(-s - 1.0) == 0.0);
  // density is continuous to 0 at the endpoint
  CHECK(permwig::nu_sp_density(s - 1e-9) < 1e-3);
}

TEST_CASE("stable density matches the literal formula away from zero") {
  const double s = permwig::nu_sp_support();
  for (int i = 1; i <= 2000; ++i) {
    double x = 1e-3 + (s - 2e-3) * i / 2000.0;
    INFO("x=" << x);
    CHECK(std::abs(permwig::nu_sp_density(x) - literal_density(x)) <
          1e-10 * std::max(1.0, literal_density(x)));
    CHECK(std::abs(permwig::nu_sp_density(-x) - permwig::nu_sp_density(x)) < 1e-15);
  }
}

TEST_CASE("density is nonnegative and finite near zero") {
  const double s = permwig::nu_sp_support();
  for (int i = 0; i <= 10000; ++i) {
    double x = -s + 2 * s * i / 10000.0;
    double d = permwig::nu_sp_density(x);
    CHECK(d >= 0.0);
    CHECK(std::isfinite(d));
  }
  // no divergence at the origin: the stable form has a finite limit there
  CHECK(std::abs(permwig::nu_sp_density(1e-8) - permwig::nu_sp_density(1e-7)) < 1e-6);
  CHECK(permwig::nu_sp_density(0.0) > 0.0);
}

TEST_CASE("density integrates to one and the cdf is a cdf") {
  const double s = permwig::nu_sp_support();
  double total = permwig::detail::integrate(permwig::nu_sp_density, -s, s, 1e-10);
  CHECK(std::abs(total - 1.0) < 1e-6);
  CHECK(permwig::nu_sp_cdf(-s) == 0.0);
  CHECK(permwig::nu_sp_cdf(s) == 1.0);
  CHECK(std::abs(permwig::nu_sp_cdf(0.0) - 0.5) < 1e-9);
  double prev = 0.0;
  for (int i = 0; i <= 100; ++i) {
    double x = -s + 2 * s * i / 100.0;
    double f = permwig::nu_sp_cdf(x);
    CHECK(f >= prev - 1e-12);
    prev = f;
  }
  CHECK(std::abs(permwig::nu_sp_cdf(s - 1e-9) - 1.0) < 1e-6);
}

TEST_CASE("ks distance trivial cases") {
  std::vector<double> median = {0.0};  // cdf(0) = 1/2
  CHECK(std::abs(permwig::ks_distance(median, permwig::nu_sp_cdf) - 0.5) < 1e-9);
  std::vector<double> shifted;
  permwig::Rng rng = permwig::make_rng(6);
  std::normal_distribution<double> normal;
  for (int i = 0; i < 100; ++i) shifted.push_back(10.0 + std::abs(normal(rng)));
  std::sort(shifted.begin(), shifted.end());
  CHECK(permwig::ks_distance(shifted, permwig::nu_sp_cdf) >= 0.99);
  std::vector<double> empty;
  CHECK_THROWS_AS(permwig::ks_distance(empty, permwig::nu_sp_cdf), std::invalid_argument);
}

TEST_CASE("inverse-cdf samples have small ks distance") {
  // build a cumulative table on a fine grid, sample by interpolation
  const double s = permwig::nu_sp_support();
  const int grid = 20000;
  std::vector<double> xs(grid + 1), cdf(grid + 1);
  for (int i = 0; i <= grid; ++i) xs[i] = -s + 2 * s * i / grid;
  cdf[0] = 0.0;
  for (int i = 1; i <= grid; ++i) {
    double a = xs[i - 1], b = xs[i];
    cdf[i] = cdf[i - 1] + 0.5 * (permwig::nu_sp_density(a) + permwig::nu_sp_density(b)) * (b - a);
  }
  for (double& c : cdf) c /= cdf[grid];

  permwig::Rng rng = permwig::make_rng(31337);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> sample(10000);
  for (double& v : sample) {
    double u = unif(rng);
    auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), grid);
    std::size_t lo = hi == 0 ? 0 : hi - 1;
    double w = (cdf[hi] == cdf[lo]) ? 0.0 : (u - cdf[lo]) / (cdf[hi] - cdf[lo]);
    v = xs[lo] + w * (xs[hi] - xs[lo]);
  }
  std::sort(sample.begin(), sample.end());
  CHECK(permwig::ks_distance(sample, permwig::nu_sp_cdf) <= 0.03);
}

TEST_CASE("histogram normalization and edge cases") {
  std::vector<double> uniform;
  permwig::Rng rng = permwig::make_rng(9);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < 200000; ++i) uniform.push_back(unif(rng));
  auto h = permwig::histogram(uniform, 20, 0.0, 1.0);
  REQUIRE(h.density.size() == 20);
  double integral = 0.0;
  for (double d : h.density) {
    integral += d * 0.05;
    CHECK(std::abs(d - 1.0) < 0.05);  // flat within sampling noise
  }
  CHECK(std::abs(integral - 1.0) < 1e-12);

  std::vector<double> single = {0.35};
  auto hs = permwig::histogram(single, 10, 0.0, 1.0);
  double mass = 0.0;
  int full_bins = 0;
  for (double d : hs.density) {
    mass += d * 0.1;
    if (d != 0.0) {
      ++full_bins;
      CHECK(d == 10.0);  // everything in one bin
    }
  }
  CHECK(std::abs(mass - 1.0) < 1e-12);
  CHECK(full_bins == 1);

  CHECK_THROWS_AS(permwig::histogram(single, 0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(permwig::histogram(single, 5, 1.0, 1.0), std::invalid_argument);
  std::vector<double> empty;
  CHECK_THROWS_AS(permwig::histogram(empty, 5, 0.0, 1.0), std::invalid_argument);
}

}  // namespace
