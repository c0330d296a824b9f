#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "permwig/common.hpp"
#include "permwig/wigner.hpp"

namespace permwig {

/// AB + BA. Hermitian whenever A and B are.
inline Matrix anticommutator(const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw std::invalid_argument("anticommutator: dimension mismatch");
  return a * b + b * a;
}

/// Eigenvalues of a Hermitian matrix, sorted ascending. Rejects input whose
/// Hermitian defect exceeds the tolerance.
inline std::vector<double> eigenvalues_hermitian(const Matrix& m, double herm_tol = 1e-10) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eigenvalues_hermitian: square input required");
  double defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (defect > herm_tol)
    throw std::invalid_argument("eigenvalues_hermitian: input is not Hermitian (defect " +
                                std::to_string(defect) + ")");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigenvalues_hermitian: eigensolver failed");
  std::vector<double> evs(solver.eigenvalues().data(),
                          solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(evs.begin(), evs.end());
  return evs;
}

/// Sorted spectrum with the sampling metadata needed to reproduce it.
struct SpectrumSample {
  std::vector<double> eigenvalues;  // ascending
  int n = 0;
  Complex beta;
  std::string permutation;
  std::uint64_t seed = 0;
};

// ---------------------------------------------------------------------------
// The limiting anticommutator law of two free standard semicirculars.
//
// With t = x^2, A = (18t+1)/27 and B = sqrt(t(1+11t-t^2)/27), the density is
//   sqrt(3)/(2 pi |x|) * ((3t+1)/(9 cbrt(A-B)) - cbrt(A-B))
// on |x| <= sqrt((11+5 sqrt 5)/2). Since (A-B)(A+B) = ((3t+1)/9)^3, the
// bracket equals cbrt(A+B) - cbrt(A-B) = 2B / (a^2+ab+b^2) with a,b the two
// cube roots, and the |x| factor cancels:
//   density = sqrt(1+11t-t^2) / (3 pi (a^2+ab+b^2)).
// That form is numerically stable on the whole support, including x -> 0
// where the limit is finite.
// ---------------------------------------------------------------------------

inline double nu_sp_support() { return std::sqrt((11.0 + 5.0 * std::sqrt(5.0)) / 2.0); }

inline double nu_sp_density(double x) {
  const double t = x * x;
  const double rad = 1.0 + 11.0 * t - t * t;
  if (rad <= 0.0) return 0.0;  // outside the support (its endpoint is a root)
  const double a3 = (18.0 * t + 1.0) / 27.0;
  const double b3 = std::sqrt(t * rad / 27.0);
  const double a = std::cbrt(a3 + b3);
  const double b = std::cbrt(a3 - b3);
  const double denom = a * a + a * b + b * b;
  return std::sqrt(rad) / (3.0 * std::numbers::pi * denom);
}

namespace detail {

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double fa, double fm, double fb, double whole, double tol,
                               int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace detail

/// CDF of the limiting law by adaptive quadrature, using the symmetry of the
/// density about 0.
inline double nu_sp_cdf(double x) {
  const double s = nu_sp_support();
  if (x <= -s) return 0.0;
  if (x >= s) return 1.0;
  const double half = detail::integrate(nu_sp_density, 0.0, std::min(std::abs(x), s));
  return x >= 0.0 ? 0.5 + half : 0.5 - half;
}

/// sup_x |F_empirical(x) - F(x)| for a sorted sample.
inline double ks_distance(std::span<const double> sorted_sample,
                          const std::function<double(double)>& cdf) {
  if (sorted_sample.empty()) throw std::invalid_argument("ks_distance: empty sample");
  const double n = static_cast<double>(sorted_sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted_sample.size(); ++i) {
    const double f = cdf(sorted_sample[i]);
    d = std::max(d, std::max(f - static_cast<double>(i) / n,
                             static_cast<double>(i + 1) / n - f));
  }
  return d;
}

inline double ks_distance(const SpectrumSample& sample,
                          const std::function<double(double)>& cdf) {
  return ks_distance(std::span<const double>(sample.eigenvalues), cdf);
}

/// Equal-width histogram normalized to integrate to 1 over [lo, hi]; samples
/// outside the range are dropped (and reduce the integral accordingly).
struct Histogram {
  std::vector<double> edges;    // bin_count + 1 ascending
  std::vector<double> density;  // bin_count values
};

inline Histogram histogram(std::span<const double> sample, int bin_count, double lo, double hi) {
  if (bin_count < 1) throw std::invalid_argument("histogram: bin count must be >= 1");
  if (!(hi > lo)) throw std::invalid_argument("histogram: empty range");
  if (sample.empty()) throw std::invalid_argument("histogram: empty sample");
  Histogram h;
  const double width = (hi - lo) / bin_count;
  h.edges.resize(static_cast<std::size_t>(bin_count) + 1);
  for (int i = 0; i <= bin_count; ++i) h.edges[static_cast<std::size_t>(i)] = lo + i * width;
  h.density.assign(static_cast<std::size_t>(bin_count), 0.0);
  for (double x : sample) {
    if (x < lo || x > hi) continue;
    int bin = std::min(static_cast<int>((x - lo) / width), bin_count - 1);
    h.density[static_cast<std::size_t>(bin)] += 1.0;
  }
  const double norm = static_cast<double>(sample.size()) * width;
  for (double& d : h.density) d /= norm;
  return h;
}

}  // namespace permwig
