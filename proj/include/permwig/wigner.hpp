#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "permwig/common.hpp"
#include "permwig/entry_dist.hpp"
#include "permwig/permutation.hpp"
#include "permwig/rng.hpp"

namespace permwig {

using Matrix = Eigen::MatrixXcd;

/// A word is a sequence of 1-based indices into a family of permutations;
/// the k-th letter selects which permuted copy sits at position k of the
/// matrix product.
using Word = std::vector<int>;

inline constexpr int kMaxWignerDim = 16384;
inline constexpr double kDefaultMapBudget = 1e7;

inline void check_word(const Word& word, std::size_t family_size) {
  if (word.empty()) throw std::invalid_argument("word must be nonempty");
  for (int letter : word)
    if (letter < 1 || static_cast<std::size_t>(letter) > family_size)
      throw std::invalid_argument("word letter " + std::to_string(letter) +
                                  " does not index the permutation family");
}

/// N x N Hermitian matrix with entries X(j,k)/sqrt(N): i.i.d. upper triangle
/// per spec, real diagonal per the diagonal law, Hermitian completion.
inline Matrix sample_wigner(const EntrySpec& spec, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_wigner: N must be >= 1");
  if (n > kMaxWignerDim)
    throw budget_error("sample_wigner: N=" + std::to_string(n) + " exceeds cap " +
                       std::to_string(kMaxWignerDim));
  Rng rng = make_rng(seed);
  Matrix w(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int j = 0; j < n; ++j) {
    w(j, j) = Complex(spec.sample_diag(rng) * scale, 0.0);
    for (int k = j + 1; k < n; ++k) {
      Complex z = spec.sample(rng) * scale;
      w(j, k) = z;
      w(k, j) = std::conj(z);
    }
  }
  return w;
}

/// result(j,k) = W(sigma(j,k)). Rejects asymmetric permutations, which would
/// break Hermiticity.
inline Matrix permute_entries(const Matrix& w, const EntryPermutation& sigma) {
  const int n = static_cast<int>(w.rows());
  if (w.cols() != n) throw std::invalid_argument("permute_entries: matrix must be square");
  if (sigma.dim() != n)
    throw std::invalid_argument("permute_entries: dimension mismatch (matrix " +
                                std::to_string(n) + ", permutation " +
                                std::to_string(sigma.dim()) + ")");
  Matrix out(n, n);
  for (int j = 1; j <= n; ++j) {
    auto [dj, dk] = sigma.apply(j, j);
    if (dj != dk)
      throw std::invalid_argument("permute_entries: permutation is not symmetric (diagonal)");
    out(j - 1, j - 1) = w(dj - 1, dk - 1);
    for (int k = j + 1; k <= n; ++k) {
      auto [u, v] = sigma.apply(j, k);
      auto [ut, vt] = sigma.apply(k, j);
      if (ut != v || vt != u)
        throw std::invalid_argument("permute_entries: permutation is not symmetric at (" +
                                    std::to_string(j) + "," + std::to_string(k) + ")");
      out(j - 1, k - 1) = w(u - 1, v - 1);
      out(k - 1, j - 1) = w(ut - 1, vt - 1);
    }
  }
  return out;
}

/// Normalized trace of the word product, evaluated left to right. The last
/// factor is folded in entrywise, so a word of length L costs L-2 products.
inline Complex word_trace(const std::vector<Matrix>& copies, const Word& word) {
  const auto& first = copies[static_cast<std::size_t>(word.front() - 1)];
  const int n = static_cast<int>(first.rows());
  if (word.size() == 1) return first.trace() / static_cast<double>(n);
  Matrix acc = first;
  for (std::size_t i = 1; i + 1 < word.size(); ++i)
    acc = acc * copies[static_cast<std::size_t>(word[i] - 1)];
  const auto& last = copies[static_cast<std::size_t>(word.back() - 1)];
  return acc.cwiseProduct(last.transpose()).sum() / static_cast<double>(n);
}

struct McMoment {
  Complex estimate;
  double std_error = 0.0;
  int trials = 0;
  int n = 0;
};

/// Monte-Carlo estimate of E[tr(prod_k W^{sigma_{word(k)}})]. All copies in a
/// word come from the same sampled W per trial (the copies are dependent by
/// construction); trial t uses the child seed derive_seed(seed, t).
inline McMoment trace_moment_mc(const EntrySpec& spec,
                                const std::vector<EntryPermutation>& perms, const Word& word,
                                int n, int trials, std::uint64_t seed) {
  check_word(word, perms.size());
  if (trials < 2) throw std::invalid_argument("trace_moment_mc: trials must be >= 2");
  for (const auto& p : perms)
    if (p.dim() != n) throw std::invalid_argument("trace_moment_mc: permutation dim mismatch");

  std::vector<bool> used(perms.size(), false);
  for (int letter : word) used[static_cast<std::size_t>(letter - 1)] = true;

  std::vector<Complex> values(static_cast<std::size_t>(trials));
  std::vector<Matrix> copies(perms.size());
  for (int t = 0; t < trials; ++t) {
    Matrix w = sample_wigner(spec, n, derive_seed(seed, static_cast<std::uint64_t>(t)));
    for (std::size_t i = 0; i < perms.size(); ++i)
      if (used[i]) copies[i] = permute_entries(w, perms[i]);
    values[static_cast<std::size_t>(t)] = word_trace(copies, word);
  }

  McMoment out;
  out.trials = trials;
  out.n = n;
  Complex mean(0.0, 0.0);
  for (Complex z : values) mean += z;
  mean /= static_cast<double>(trials);
  out.estimate = mean;
  double ss = 0.0;
  for (Complex z : values) ss += std::norm(z - mean);
  out.std_error = std::sqrt(ss / (static_cast<double>(trials) * (trials - 1.0)));
  return out;
}

/// E[prod_i X(points[i])] for the entry field behind a Wigner matrix:
/// occurrences group by the unordered entry class {(a,b),(b,a)}; classes are
/// independent, a point (a,b) with a<b counts as X and (b,a) as conj(X), and
/// diagonal classes use the real diagonal law.
inline Complex expected_entry_product(const EntrySpec& spec,
                                      std::span<const std::pair<int, int>> points) {
  struct Cls {
    int a, b;  // a <= b
    int p = 0, q = 0;
  };
  std::vector<Cls> classes;
  classes.reserve(points.size());
  for (auto [x, y] : points) {
    int a = std::min(x, y), b = std::max(x, y);
    Cls* cls = nullptr;
    for (auto& c : classes)
      if (c.a == a && c.b == b) {
        cls = &c;
        break;
      }
    if (!cls) {
      classes.push_back({a, b, 0, 0});
      cls = &classes.back();
    }
    if (x <= y)
      ++cls->p;
    else
      ++cls->q;
  }
  Complex prod(1.0, 0.0);
  for (const auto& c : classes) {
    Complex m = (c.a == c.b) ? Complex(spec.diag_moment(c.p + c.q), 0.0)
                             : spec.mixed_moment(c.p, c.q);
    if (m == Complex(0.0, 0.0)) return m;
    prod *= m;
  }
  return prod;
}

/// Exact finite-N value of E[tr(prod_k W^{sigma_{word(k)}})], by summation
/// over all index maps phi:[len] -> [N] with per-class exact moments. Cost is
/// N^len expectation evaluations; guarded by the map budget.
inline Complex trace_moment_exact(const EntrySpec& spec,
                                  const std::vector<EntryPermutation>& perms, const Word& word,
                                  int n, double map_budget = kDefaultMapBudget) {
  check_word(word, perms.size());
  for (const auto& p : perms)
    if (p.dim() != n) throw std::invalid_argument("trace_moment_exact: permutation dim mismatch");
  const int len = static_cast<int>(word.size());
  const double maps = std::pow(static_cast<double>(n), len);
  if (maps > map_budget)
    throw budget_error("trace_moment_exact: N^len = " + std::to_string(maps) +
                       " exceeds map budget " + std::to_string(map_budget));

  std::vector<int> phi(static_cast<std::size_t>(len), 1);
  std::vector<std::pair<int, int>> points(static_cast<std::size_t>(len));
  Complex acc(0.0, 0.0);
  while (true) {
    for (int k = 0; k < len; ++k) {
      int a = phi[static_cast<std::size_t>(k)];
      int b = phi[static_cast<std::size_t>((k + 1) % len)];
      points[static_cast<std::size_t>(k)] =
          perms[static_cast<std::size_t>(word[static_cast<std::size_t>(k)] - 1)].apply(a, b);
    }
    acc += expected_entry_product(spec, points);
    int k = 0;
    while (k < len && phi[static_cast<std::size_t>(k)] == n) {
      phi[static_cast<std::size_t>(k)] = 1;
      ++k;
    }
    if (k == len) break;
    ++phi[static_cast<std::size_t>(k)];
  }
  return acc / std::pow(static_cast<double>(n), 1.0 + len / 2.0);
}

}  // namespace permwig
