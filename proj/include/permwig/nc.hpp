#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "permwig/common.hpp"

namespace permwig {

/// Partition of [n] into disjoint blocks, each block sorted ascending and
/// blocks ordered by their least element.
struct NCPartition {
  std::vector<std::vector<int>> blocks;
};

/// No a < b < c < d with {a,c} and {b,d} in different blocks.
inline bool is_noncrossing(const NCPartition& part, int n) {
  std::vector<int> block_of(static_cast<std::size_t>(n) + 1, -1);
  for (std::size_t b = 0; b < part.blocks.size(); ++b)
    for (int e : part.blocks[b]) {
      if (e < 1 || e > n || block_of[static_cast<std::size_t>(e)] != -1) return false;
      block_of[static_cast<std::size_t>(e)] = static_cast<int>(b);
    }
  for (int e = 1; e <= n; ++e)
    if (block_of[static_cast<std::size_t>(e)] == -1) return false;
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b)
      for (int c = b + 1; c <= n; ++c)
        for (int d = c + 1; d <= n; ++d)
          if (block_of[a] == block_of[c] && block_of[b] == block_of[d] &&
              block_of[a] != block_of[b])
            return false;
  return true;
}

inline long long catalan(int n) {
  long long c = 1;
  for (int i = 0; i < n; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
  return c;
}

namespace detail {

// Stack-discipline enumeration: element i either opens a new block or joins a
// block on the stack after everything above it is closed for good. Each
// noncrossing partition arises from exactly one choice sequence.
inline void nc_rec(int i, int n, std::vector<std::vector<int>>& stack,
                   std::vector<std::vector<int>>& closed, std::vector<NCPartition>& out) {
  if (i > n) {
    NCPartition p;
    p.blocks = closed;
    for (const auto& b : stack) p.blocks.push_back(b);
    std::sort(p.blocks.begin(), p.blocks.end(),
              [](const auto& x, const auto& y) { return x.front() < y.front(); });
    out.push_back(std::move(p));
    return;
  }
  stack.push_back({i});
  nc_rec(i + 1, n, stack, closed, out);
  stack.pop_back();
  for (std::size_t depth = stack.size(); depth-- > 0;) {
    std::vector<std::vector<int>> popped(stack.begin() + static_cast<std::ptrdiff_t>(depth) + 1,
                                         stack.end());
    stack.resize(depth + 1);
    for (auto& b : popped) closed.push_back(std::move(b));
    stack[depth].push_back(i);
    nc_rec(i + 1, n, stack, closed, out);
    stack[depth].pop_back();
    for (std::size_t r = 0; r < popped.size(); ++r) {
      stack.push_back(std::move(closed.back()));
      closed.pop_back();
    }
    std::reverse(stack.begin() + static_cast<std::ptrdiff_t>(depth) + 1, stack.end());
  }
}

// Worklist of index ranges still to be paired up; pairing the front of a
// range with a partner at odd offset splits it into an inside and an outside
// range, which is exactly the noncrossing recursion.
inline void nc2_rec(std::vector<std::pair<int, int>> ranges,
                    std::vector<std::pair<int, int>>& current,
                    std::vector<std::vector<std::pair<int, int>>>& out) {
  while (!ranges.empty() && ranges.back().first > ranges.back().second) ranges.pop_back();
  if (ranges.empty()) {
    auto pairs = current;
    std::sort(pairs.begin(), pairs.end());
    out.push_back(std::move(pairs));
    return;
  }
  auto [lo, hi] = ranges.back();
  ranges.pop_back();
  for (int m = lo + 1; m <= hi; m += 2) {
    current.emplace_back(lo, m);
    auto child = ranges;
    child.emplace_back(m + 1, hi);
    child.emplace_back(lo + 1, m - 1);
    nc2_rec(std::move(child), current, out);
    current.pop_back();
  }
}

}  // namespace detail

/// All noncrossing partitions of [n]; |NC(n)| = Catalan(n).
inline std::vector<NCPartition> enumerate_nc(int n) {
  if (n < 0 || n > 12)
    throw budget_error("enumerate_nc: n=" + std::to_string(n) + " outside budget [0,12]");
  std::vector<NCPartition> out;
  if (n == 0) {
    out.push_back({});
    return out;
  }
  std::vector<std::vector<int>> stack, closed;
  detail::nc_rec(1, n, stack, closed, out);
  return out;
}

/// All noncrossing pair partitions of [n]; empty for odd n,
/// |NC2(2m)| = Catalan(m).
inline std::vector<std::vector<std::pair<int, int>>> enumerate_nc2(int n) {
  if (n < 0 || n > 16)
    throw budget_error("enumerate_nc2: n=" + std::to_string(n) + " outside budget [0,16]");
  std::vector<std::vector<std::pair<int, int>>> out;
  if (n % 2 != 0) return out;
  if (n == 0) {
    out.push_back({});
    return out;
  }
  std::vector<std::pair<int, int>> ranges{{1, n}};
  std::vector<std::pair<int, int>> current;
  detail::nc2_rec(std::move(ranges), current, out);
  return out;
}

/// Moments of a semicircular family: sum over noncrossing pair partitions of
/// products of covariance entries K(i(j), i(k)). Labels are 1-based rows of K.
/// Well-defined for any symmetric K; a semicircular family additionally needs
/// K positive semidefinite, which callers can check separately.
inline double semicircular_moment(const std::vector<int>& word, const Eigen::MatrixXd& cov) {
  const int n = static_cast<int>(word.size());
  for (int label : word)
    if (label < 1 || label > cov.rows() || cov.rows() != cov.cols())
      throw std::invalid_argument("semicircular_moment: label outside covariance index set");
  double acc = 0.0;
  for (const auto& pairing : enumerate_nc2(n)) {
    double term = 1.0;
    for (auto [j, k] : pairing)
      term *= cov(word[static_cast<std::size_t>(j - 1)] - 1,
                  word[static_cast<std::size_t>(k - 1)] - 1);
    acc += term;
  }
  return acc;
}

/// Covariance / pseudocovariance data for a semicircular traffic family.
struct CovarianceSpec {
  Eigen::MatrixXd K;
  Eigen::MatrixXd J;

  bool k_symmetric(double tol = 1e-12) const { return (K - K.transpose()).cwiseAbs().maxCoeff() <= tol; }
  bool j_symmetric(double tol = 1e-12) const { return (J - J.transpose()).cwiseAbs().maxCoeff() <= tol; }
  bool k_positive_semidefinite(double tol = 1e-10) const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol;
  }
};

/// A letter of a *-family: a label plus a star flag.
struct StarLetter {
  int label = 1;  // 1-based
  bool star = false;
};

/// Second cumulants of a *-family whose higher free cumulants all vanish.
class StarCovariance {
 public:
  explicit StarCovariance(int labels) : labels_(labels), v_(idx(labels, true, labels, true) + 1) {}

  void set(StarLetter x, StarLetter y, Complex value) {
    v_[idx(x.label, x.star, y.label, y.star)] = value;
  }
  Complex get(StarLetter x, StarLetter y) const {
    return v_[idx(x.label, x.star, y.label, y.star)];
  }
  int labels() const { return labels_; }

  /// kappa2[x,y] = conj(kappa2[y*,x*]) must hold for a *-family.
  bool check_conjugate_symmetry(double tol = 1e-12) const {
    for (int a = 1; a <= labels_; ++a)
      for (int sa = 0; sa < 2; ++sa)
        for (int b = 1; b <= labels_; ++b)
          for (int sb = 0; sb < 2; ++sb) {
            Complex lhs = get({a, sa == 1}, {b, sb == 1});
            Complex rhs = std::conj(get({b, sb == 0}, {a, sa == 0}));
            if (std::abs(lhs - rhs) > tol) return false;
          }
    return true;
  }

  /// One standard semicircular element s: kappa2(s,s) = 1 in every star
  /// combination.
  static StarCovariance standard_semicircular() {
    StarCovariance c(1);
    for (int sa = 0; sa < 2; ++sa)
      for (int sb = 0; sb < 2; ++sb) c.set({1, sa == 1}, {1, sb == 1}, Complex(1.0, 0.0));
    return c;
  }

  /// One standard circular element c: kappa2(c,c*) = kappa2(c*,c) = 1.
  static StarCovariance standard_circular() {
    StarCovariance c(1);
    c.set({1, false}, {1, true}, Complex(1.0, 0.0));
    c.set({1, true}, {1, false}, Complex(1.0, 0.0));
    return c;
  }

 private:
  static std::size_t idx(int la, bool sa, int lb, bool sb) {
    std::size_t a = static_cast<std::size_t>(la - 1) * 2 + (sa ? 1 : 0);
    std::size_t b = static_cast<std::size_t>(lb - 1) * 2 + (sb ? 1 : 0);
    return a * 64 + b;  // labels capped well below 32 in practice
  }

  int labels_;
  std::vector<Complex> v_;
};

/// Moment of a *-family with only second cumulants: sum over noncrossing pair
/// partitions of products of kappa2 entries, letters taken in position order.
inline Complex star_nc2_moment(const std::vector<StarLetter>& word, const StarCovariance& cov) {
  const int n = static_cast<int>(word.size());
  Complex acc(0.0, 0.0);
  for (const auto& pairing : enumerate_nc2(n)) {
    Complex term(1.0, 0.0);
    for (auto [j, k] : pairing) {
      term *= cov.get(word[static_cast<std::size_t>(j - 1)], word[static_cast<std::size_t>(k - 1)]);
      if (term == Complex(0.0, 0.0)) break;
    }
    acc += term;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// The pair of 3x3 operator matrices over a free family
// {s1,s2,s3 semicircular; c1,c2,c3 circular} whose mixed fourth moment
// exceeds the semicircular prediction. Entries carry a 1/sqrt(3) factor and
// (tr (x) phi) is evaluated by expanding the matrix trace over index tuples.
// ---------------------------------------------------------------------------

namespace detail {

struct Atom {
  int id;     // 0..2 = s1..s3 (self-adjoint), 3..5 = c1..c3
  bool star;  // meaningful for circular atoms only
};

inline Complex atom_kappa2(const Atom& x, const Atom& y) {
  if (x.id != y.id) return Complex(0.0, 0.0);
  if (x.id < 3) return Complex(1.0, 0.0);                    // semicircular
  return (x.star != y.star) ? Complex(1.0, 0.0) : Complex(0.0, 0.0);  // circular
}

inline Complex atom_word_moment(const std::vector<Atom>& word) {
  const int n = static_cast<int>(word.size());
  Complex acc(0.0, 0.0);
  for (const auto& pairing : enumerate_nc2(n)) {
    Complex term(1.0, 0.0);
    for (auto [j, k] : pairing) {
      term *= atom_kappa2(word[static_cast<std::size_t>(j - 1)],
                          word[static_cast<std::size_t>(k - 1)]);
      if (term == Complex(0.0, 0.0)) break;
    }
    acc += term;
  }
  return acc;
}

inline const Atom& op_matrix_entry(int which, int row, int col) {
  // 0-based row/col; which = 1 or 2.
  static constexpr Atom a1[3][3] = {{{0, false}, {3, false}, {4, false}},
                                    {{3, true}, {1, false}, {5, false}},
                                    {{4, true}, {5, true}, {2, false}}};
  static constexpr Atom a2[3][3] = {{{2, false}, {5, false}, {3, false}},
                                    {{5, true}, {0, false}, {4, false}},
                                    {{3, true}, {4, true}, {1, false}}};
  return which == 1 ? a1[row][col] : a2[row][col];
}

}  // namespace detail

/// (tr (x) phi) of a word in the two 3x3 operator matrices; word letters are
/// 1 or 2. Exact rational value returned as double.
inline double a1a2_example_moment(const std::vector<int>& word) {
  const int n = static_cast<int>(word.size());
  if (n < 1 || n > 8)
    throw budget_error("a1a2_example_moment: word length " + std::to_string(n) +
                       " outside budget [1,8]");
  for (int w : word)
    if (w != 1 && w != 2)
      throw std::invalid_argument("a1a2_example_moment: letters must be 1 or 2");

  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  std::vector<detail::Atom> atoms(static_cast<std::size_t>(n));
  Complex acc(0.0, 0.0);
  while (true) {
    for (int k = 0; k < n; ++k)
      atoms[static_cast<std::size_t>(k)] = detail::op_matrix_entry(
          word[static_cast<std::size_t>(k)], idx[static_cast<std::size_t>(k)],
          idx[static_cast<std::size_t>((k + 1) % n)]);
    acc += detail::atom_word_moment(atoms);
    int k = 0;
    while (k < n && idx[static_cast<std::size_t>(k)] == 2) {
      idx[static_cast<std::size_t>(k)] = 0;
      ++k;
    }
    if (k == n) break;
    ++idx[static_cast<std::size_t>(k)];
  }
  acc /= std::pow(3.0, 1.0 + n / 2.0);
  return acc.real();
}

// ---------------------------------------------------------------------------
// Free cumulants by recursive inversion of the moment-cumulant relation
// phi_pi = sum_{sigma <= pi} kappa_sigma, specialized to pi = 1_n.
// ---------------------------------------------------------------------------

using MomentFunctional = std::function<Complex(const std::vector<int>&)>;

class CumulantTable {
 public:
  Complex kappa(const std::vector<int>& word) const {
    auto it = values_.find(word);
    if (it == values_.end())
      throw std::invalid_argument("CumulantTable: word not tabulated");
    return it->second;
  }
  void set(const std::vector<int>& word, Complex v) { values_[word] = v; }
  const std::map<std::vector<int>, Complex>& all() const { return values_; }

 private:
  std::map<std::vector<int>, Complex> values_;
};

/// Mixed moment from a cumulant functional: sum over noncrossing partitions
/// of products of block cumulants.
inline Complex nc_moment_from_cumulants(
    const std::function<Complex(const std::vector<int>&)>& kappa, const std::vector<int>& word) {
  const int n = static_cast<int>(word.size());
  Complex acc(0.0, 0.0);
  for (const auto& part : enumerate_nc(n)) {
    Complex term(1.0, 0.0);
    for (const auto& block : part.blocks) {
      std::vector<int> sub;
      sub.reserve(block.size());
      for (int e : block) sub.push_back(word[static_cast<std::size_t>(e - 1)]);
      term *= kappa(sub);
      if (term == Complex(0.0, 0.0)) break;
    }
    acc += term;
  }
  return acc;
}

/// All mixed free cumulants of words over {1..alphabet} up to max_order,
/// recovered from the moment functional. Exact for exactly-represented
/// moments.
inline CumulantTable free_cumulants_from_moments(const MomentFunctional& phi, int alphabet,
                                                 int max_order) {
  if (alphabet < 1) throw std::invalid_argument("free_cumulants_from_moments: empty alphabet");
  if (max_order < 1 || max_order > 8)
    throw budget_error("free_cumulants_from_moments: order " + std::to_string(max_order) +
                       " outside budget [1,8]");
  CumulantTable table;
  std::vector<std::vector<NCPartition>> nc_by_len(static_cast<std::size_t>(max_order) + 1);
  for (int m = 1; m <= max_order; ++m) nc_by_len[static_cast<std::size_t>(m)] = enumerate_nc(m);

  std::vector<int> word;
  std::function<void(int)> fill = [&](int len) {
    if (static_cast<int>(word.size()) == len) {
      // kappa_n[w] = phi(w) - sum over proper noncrossing partitions of
      // products of shorter cumulants.
      Complex v = phi(word);
      for (const auto& part : nc_by_len[static_cast<std::size_t>(len)]) {
        if (part.blocks.size() == 1) continue;
        Complex term(1.0, 0.0);
        for (const auto& block : part.blocks) {
          std::vector<int> sub;
          sub.reserve(block.size());
          for (int e : block) sub.push_back(word[static_cast<std::size_t>(e - 1)]);
          term *= table.kappa(sub);
          if (term == Complex(0.0, 0.0)) break;
        }
        v -= term;
      }
      table.set(word, v);
      return;
    }
    for (int a = 1; a <= alphabet; ++a) {
      word.push_back(a);
      fill(len);
      word.pop_back();
    }
  };
  for (int len = 1; len <= max_order; ++len) fill(len);
  return table;
}

}  // namespace permwig
