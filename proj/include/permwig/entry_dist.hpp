#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "permwig/common.hpp"
#include "permwig/rng.hpp"

namespace permwig {

enum class EntryKind { gaussian, rademacher_real, rademacher_complex_xix, table };
enum class DiagKind { gaussian_real, rademacher_real };

/// Finite-support off-diagonal law: atoms x_i with probabilities w_i.
/// Must be centered with unit second absolute moment; the pseudovariance
/// is whatever the support implies.
struct TableLaw {
  std::vector<Complex> support;
  std::vector<double> weight;
};

/// The law of a single matrix entry: off-diagonal entries are complex,
/// centered, with E|X|^2 = 1 and pseudovariance E[X^2] = beta; diagonal
/// entries are real with configurable variance. Mixed moments
/// E[X^p conj(X)^q] are available in closed form up to a configured order.
class EntrySpec {
 public:
  static EntrySpec gaussian(Complex beta, int max_order = kDefaultOrder) {
    if (std::abs(beta) > 1.0 + 1e-12)
      throw std::invalid_argument("EntrySpec: |beta| must be <= 1 for a unit-variance law");
    return EntrySpec(EntryKind::gaussian, beta, max_order);
  }

  static EntrySpec rademacher_real(int max_order = kDefaultOrder) {
    return EntrySpec(EntryKind::rademacher_real, Complex(1.0, 0.0), max_order);
  }

  /// Entries s*(1+i)/sqrt(2) with s = +-1: real and imaginary parts are the
  /// identical sign variable, so beta = E[X^2] = i.
  static EntrySpec rademacher_complex_xix(int max_order = kDefaultOrder) {
    return EntrySpec(EntryKind::rademacher_complex_xix, Complex(0.0, 1.0), max_order);
  }

  static EntrySpec table(TableLaw law, int max_order = kDefaultOrder) {
    if (law.support.empty() || law.support.size() != law.weight.size())
      throw std::invalid_argument("EntrySpec: table law needs matching support/weight lists");
    double wsum = 0.0;
    Complex mean(0.0, 0.0);
    double var = 0.0;
    Complex pseudo(0.0, 0.0);
    for (std::size_t i = 0; i < law.support.size(); ++i) {
      if (law.weight[i] < 0.0)
        throw std::invalid_argument("EntrySpec: table law weights must be nonnegative");
      wsum += law.weight[i];
      mean += law.weight[i] * law.support[i];
      var += law.weight[i] * std::norm(law.support[i]);
      pseudo += law.weight[i] * law.support[i] * law.support[i];
    }
    if (std::abs(wsum - 1.0) > 1e-12)
      throw std::invalid_argument("EntrySpec: table law weights must sum to 1");
    if (std::abs(mean) > 1e-12)
      throw std::invalid_argument("EntrySpec: table law must be centered");
    if (std::abs(var - 1.0) > 1e-12)
      throw std::invalid_argument("EntrySpec: table law must have E|X|^2 = 1");
    EntrySpec spec(EntryKind::table, pseudo, max_order);
    spec.table_ = std::move(law);
    spec.rebuild_tables();
    return spec;
  }

  EntrySpec& with_diag(DiagKind kind, double variance) {
    if (variance < 0.0) throw std::invalid_argument("EntrySpec: diagonal variance must be >= 0");
    diag_kind_ = kind;
    diag_variance_ = variance;
    rebuild_tables();
    return *this;
  }

  EntryKind kind() const { return kind_; }
  Complex beta() const { return beta_; }
  DiagKind diag_kind() const { return diag_kind_; }
  double diag_variance() const { return diag_variance_; }
  int max_moment_order() const { return max_order_; }

  /// Uniform bound m_ell with |E[X^p conj(X)^q]| <= m_ell for p+q = ell.
  double moment_bound(int ell) const {
    if (ell < 0 || ell > max_order_)
      throw budget_error("moment_bound: order " + std::to_string(ell) + " exceeds cap " +
                         std::to_string(max_order_));
    return bounds_[static_cast<std::size_t>(ell)];
  }

  /// E[X^p conj(X)^q], exact.
  Complex mixed_moment(int p, int q) const {
    if (p < 0 || q < 0) throw std::invalid_argument("mixed_moment: negative power");
    if (p + q > max_order_)
      throw budget_error("mixed_moment: order p+q=" + std::to_string(p + q) +
                         " exceeds cap " + std::to_string(max_order_));
    return moments_[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)];
  }

  /// E[D^m] for the (real) diagonal law.
  double diag_moment(int m) const {
    if (m < 0) throw std::invalid_argument("diag_moment: negative power");
    if (m > max_order_)
      throw budget_error("diag_moment: order " + std::to_string(m) + " exceeds cap " +
                         std::to_string(max_order_));
    return diag_moments_[static_cast<std::size_t>(m)];
  }

  Complex sample(Rng& rng) const {
    switch (kind_) {
      case EntryKind::gaussian: {
        std::normal_distribution<double> normal(0.0, 1.0);
        double g1 = normal(rng);
        double g2 = normal(rng);
        return rot_ * Complex(amp_re_ * g1, amp_im_ * g2);
      }
      case EntryKind::rademacher_real:
        return Complex(sign(rng), 0.0);
      case EntryKind::rademacher_complex_xix: {
        double s = sign(rng);
        constexpr double inv_sqrt2 = std::numbers::sqrt2 / 2.0;
        return Complex(s * inv_sqrt2, s * inv_sqrt2);
      }
      case EntryKind::table: {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        double u = unif(rng);
        auto it = std::upper_bound(table_cdf_.begin(), table_cdf_.end(), u);
        std::size_t idx = static_cast<std::size_t>(it - table_cdf_.begin());
        if (idx >= table_.support.size()) idx = table_.support.size() - 1;
        return table_.support[idx];
      }
    }
    return Complex(0.0, 0.0);
  }

  double sample_diag(Rng& rng) const {
    double s = std::sqrt(diag_variance_);
    if (diag_kind_ == DiagKind::gaussian_real) {
      std::normal_distribution<double> normal(0.0, 1.0);
      return s * normal(rng);
    }
    return s * sign(rng);
  }

 private:
  static constexpr int kDefaultOrder = 8;

  EntrySpec(EntryKind kind, Complex beta, int max_order)
      : kind_(kind), beta_(beta), max_order_(max_order) {
    if (max_order_ < 2) throw std::invalid_argument("EntrySpec: moment order cap must be >= 2");
    double r = std::abs(beta_);
    r = std::min(r, 1.0);
    // X = e^{i arg(beta)/2} (sqrt((1+|beta|)/2) G1 + i sqrt((1-|beta|)/2) G2)
    // realizes variance 1 and pseudovariance beta exactly.
    double theta = (r == 0.0) ? 0.0 : std::arg(beta_);
    amp_re_ = std::sqrt((1.0 + r) / 2.0);
    amp_im_ = std::sqrt((1.0 - r) / 2.0);
    rot_ = std::polar(1.0, theta / 2.0);
    rebuild_tables();
  }

  static double sign(Rng& rng) {
    return (rng() & 1ull) ? 1.0 : -1.0;
  }

  void rebuild_tables() {
    std::size_t m = static_cast<std::size_t>(max_order_);
    moments_.assign(m + 1, std::vector<Complex>(m + 1, Complex(0.0, 0.0)));
    for (int p = 0; p <= max_order_; ++p)
      for (int q = 0; p + q <= max_order_; ++q)
        moments_[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)] = compute_moment(p, q);

    diag_moments_.assign(m + 1, 0.0);
    diag_moments_[0] = 1.0;
    for (int k = 2; k <= max_order_; k += 2) {
      double v = std::pow(diag_variance_, k / 2.0);
      if (diag_kind_ == DiagKind::gaussian_real) v *= double_factorial(k - 1);
      diag_moments_[static_cast<std::size_t>(k)] = v;
    }

    // Default m_ell = 2^{ell/2} Gamma(ell/2 + 1): dominates E|X|^ell for every
    // law here with E|X|^2 <= 1. A table law can exceed it, so take the max
    // with the law's own absolute moments.
    bounds_.assign(m + 1, 0.0);
    for (int ell = 0; ell <= max_order_; ++ell) {
      double b = std::pow(2.0, ell / 2.0) * std::tgamma(ell / 2.0 + 1.0);
      if (kind_ == EntryKind::table) {
        double abs_moment = 0.0;
        for (std::size_t i = 0; i < table_.support.size(); ++i)
          abs_moment += table_.weight[i] * std::pow(std::abs(table_.support[i]), ell);
        b = std::max(b, abs_moment);
      }
      bounds_[static_cast<std::size_t>(ell)] = b;
    }

    table_cdf_.clear();
    double acc = 0.0;
    for (double w : table_.weight) {
      acc += w;
      table_cdf_.push_back(acc);
    }
  }

  Complex compute_moment(int p, int q) const {
    switch (kind_) {
      case EntryKind::gaussian: {
        if ((p + q) % 2 != 0) return Complex(0.0, 0.0);
        std::vector<int> sym;
        sym.reserve(static_cast<std::size_t>(p + q));
        for (int i = 0; i < p; ++i) sym.push_back(0);
        for (int i = 0; i < q; ++i) sym.push_back(1);
        std::vector<bool> used(sym.size(), false);
        return wick(sym, used);
      }
      case EntryKind::rademacher_real:
        return ((p + q) % 2 == 0) ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
      case EntryKind::rademacher_complex_xix: {
        // X = s e^{i pi/4}, s = +-1: E[X^p conj(X)^q] = e^{i pi (p-q)/4} for p+q even.
        if ((p + q) % 2 != 0) return Complex(0.0, 0.0);
        return std::polar(1.0, std::numbers::pi * (p - q) / 4.0);
      }
      case EntryKind::table: {
        Complex acc(0.0, 0.0);
        for (std::size_t i = 0; i < table_.support.size(); ++i) {
          Complex x = table_.support[i];
          Complex term(table_.weight[i], 0.0);
          for (int a = 0; a < p; ++a) term *= x;
          for (int a = 0; a < q; ++a) term *= std::conj(x);
          acc += term;
        }
        return acc;
      }
    }
    return Complex(0.0, 0.0);
  }

  // Isserlis sum over perfect matchings; pair values E[XX] = beta,
  // E[conj(X)conj(X)] = conj(beta), E[X conj(X)] = 1.
  Complex wick(const std::vector<int>& sym, std::vector<bool>& used) const {
    std::size_t i = 0;
    while (i < used.size() && used[i]) ++i;
    if (i == used.size()) return Complex(1.0, 0.0);
    used[i] = true;
    Complex acc(0.0, 0.0);
    for (std::size_t j = i + 1; j < used.size(); ++j) {
      if (used[j]) continue;
      used[j] = true;
      Complex pair;
      if (sym[i] == 0 && sym[j] == 0)
        pair = beta_;
      else if (sym[i] == 1 && sym[j] == 1)
        pair = std::conj(beta_);
      else
        pair = Complex(1.0, 0.0);
      acc += pair * wick(sym, used);
      used[j] = false;
    }
    used[i] = false;
    return acc;
  }

  static double double_factorial(int k) {
    double v = 1.0;
    for (int i = k; i > 1; i -= 2) v *= i;
    return v;
  }

  EntryKind kind_;
  Complex beta_;
  int max_order_;
  DiagKind diag_kind_ = DiagKind::gaussian_real;
  double diag_variance_ = 1.0;

  double amp_re_ = 1.0, amp_im_ = 0.0;
  Complex rot_{1.0, 0.0};

  TableLaw table_;
  std::vector<double> table_cdf_;

  std::vector<std::vector<Complex>> moments_;
  std::vector<double> diag_moments_;
  std::vector<double> bounds_;
};

}  // namespace permwig
