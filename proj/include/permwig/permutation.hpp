#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <memory>
#include <numeric>
#include <ostream>
#include <sstream>
#include <vector>

#include "permwig/common.hpp"
#include "permwig/rng.hpp"

namespace permwig {

// A symmetric permutation of the index set [N]^2, i.e. a bijection that
// commutes with the transpose (j,k) -> (k,j). Closed-form families are kept
// as O(1) rules so N = 10^4 costs no storage; explicit tables are capped.
//
// Families (all 1-based indices):
//   identity        (j,k) -> (j,k)
//   transpose       (j,k) -> (k,j)
//   anti_transpose  (j,k) -> (N+1-k, N+1-j)
//   rho             fixes (j,k) when max(j,k) is odd, transposes it when even
//   zeta(m)         fixes (j,k) when j+k = 0 mod m, transposes it otherwise
//   eta             hook-wise cyclic shifts; no fixed or transposed points
class EntryPermutation {
 public:
  static constexpr int kMaxTableDim = 2048;

  static EntryPermutation identity(int n) { return named(Family::identity, n); }
  static EntryPermutation transpose(int n) { return named(Family::transpose, n); }
  static EntryPermutation anti_transpose(int n) { return named(Family::anti_transpose, n); }
  static EntryPermutation rho(int n) { return named(Family::rho, n); }
  static EntryPermutation eta(int n) { return named(Family::eta, n); }

  static EntryPermutation zeta(int n, int mod) {
    if (mod < 1) throw std::invalid_argument("zeta: modulus must be >= 1");
    EntryPermutation p = named(Family::zeta, n);
    p.chain_[0].param = mod;
    return p;
  }

  /// image[(j-1)*n + (k-1)] = sigma(j,k), 1-based pairs. Validates that the
  /// map is a bijection of [n]^2 commuting with the transpose.
  static EntryPermutation from_table(int n, const std::vector<std::pair<int, int>>& image,
                                     int max_dim = kMaxTableDim) {
    check_dim(n);
    if (n > max_dim)
      throw budget_error("from_table: N=" + std::to_string(n) + " exceeds table cap " +
                         std::to_string(max_dim));
    if (image.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
      throw std::invalid_argument("from_table: expected N^2 image pairs");
    auto fwd = std::make_shared<std::vector<std::uint32_t>>(image.size());
    auto inv = std::make_shared<std::vector<std::uint32_t>>(image.size(), kUnset);
    for (int j = 1; j <= n; ++j) {
      for (int k = 1; k <= n; ++k) {
        auto [u, v] = image[code(n, j, k)];
        if (u < 1 || u > n || v < 1 || v > n)
          throw std::invalid_argument("from_table: image out of range at (" +
                                      std::to_string(j) + "," + std::to_string(k) + ")");
        (*fwd)[code(n, j, k)] = static_cast<std::uint32_t>(code(n, u, v));
        if ((*inv)[code(n, u, v)] != kUnset)
          throw std::invalid_argument("from_table: not a bijection, value (" +
                                      std::to_string(u) + "," + std::to_string(v) +
                                      ") repeats");
        (*inv)[code(n, u, v)] = static_cast<std::uint32_t>(code(n, j, k));
      }
    }
    // Symmetry: sigma(k,j) must be the transpose of sigma(j,k).
    for (int j = 1; j <= n; ++j) {
      for (int k = j; k <= n; ++k) {
        auto [u, v] = decode(n, (*fwd)[code(n, j, k)]);
        auto [u2, v2] = decode(n, (*fwd)[code(n, k, j)]);
        if (u2 != v || v2 != u)
          throw std::invalid_argument("from_table: map does not commute with the transpose at (" +
                                      std::to_string(j) + "," + std::to_string(k) + ")");
      }
    }
    EntryPermutation p(n);
    Atom a;
    a.family = Family::table;
    a.fwd = std::move(fwd);
    a.inv = std::move(inv);
    p.chain_.push_back(std::move(a));
    return p;
  }

  /// Uniformly random symmetric permutation (for property tests and oracle
  /// cross-checks): permutes the diagonal, permutes the unordered off-diagonal
  /// pairs, and flips each pair's orientation with probability 1/2.
  static EntryPermutation random_symmetric(int n, std::uint64_t seed,
                                           int max_dim = kMaxTableDim) {
    check_dim(n);
    if (n > max_dim)
      throw budget_error("random_symmetric: N=" + std::to_string(n) + " exceeds table cap " +
                         std::to_string(max_dim));
    Rng rng = make_rng(derive_seed(seed, 0x7065726dull));
    std::vector<int> diag(static_cast<std::size_t>(n));
    std::iota(diag.begin(), diag.end(), 1);
    std::shuffle(diag.begin(), diag.end(), rng);

    std::vector<std::pair<int, int>> orbits;
    for (int j = 1; j <= n; ++j)
      for (int k = j + 1; k <= n; ++k) orbits.emplace_back(j, k);
    std::vector<std::size_t> target(orbits.size());
    std::iota(target.begin(), target.end(), std::size_t{0});
    std::shuffle(target.begin(), target.end(), rng);

    std::vector<std::pair<int, int>> image(static_cast<std::size_t>(n) *
                                           static_cast<std::size_t>(n));
    for (int j = 1; j <= n; ++j) image[code(n, j, j)] = {diag[j - 1], diag[j - 1]};
    for (std::size_t i = 0; i < orbits.size(); ++i) {
      auto [j, k] = orbits[i];
      auto [u, v] = orbits[target[i]];
      if (rng() & 1ull) std::swap(u, v);
      image[code(n, j, k)] = {u, v};
      image[code(n, k, j)] = {v, u};
    }
    return from_table(n, image, max_dim);
  }

  int dim() const { return n_; }

  /// sigma(j,k), 1-based.
  std::pair<int, int> apply(int j, int k) const {
    for (const Atom& a : chain_) {
      auto p = apply_atom(a, j, k);
      j = p.first;
      k = p.second;
    }
    return {j, k};
  }

  EntryPermutation inverse() const {
    EntryPermutation out(n_);
    out.chain_.reserve(chain_.size());
    for (auto it = chain_.rbegin(); it != chain_.rend(); ++it) {
      Atom a = *it;
      switch (a.family) {
        case Family::eta:
          a.inverted = !a.inverted;
          break;
        case Family::table:
          std::swap(a.fwd, a.inv);
          break;
        default:
          break;  // the other named families are involutions
      }
      out.chain_.push_back(std::move(a));
    }
    return out;
  }

  /// outer(inner(x)).
  friend EntryPermutation compose(const EntryPermutation& outer, const EntryPermutation& inner) {
    if (outer.n_ != inner.n_)
      throw std::invalid_argument("compose: dimension mismatch (" + std::to_string(outer.n_) +
                                  " vs " + std::to_string(inner.n_) + ")");
    EntryPermutation out(inner.n_);
    out.chain_ = inner.chain_;
    out.chain_.insert(out.chain_.end(), outer.chain_.begin(), outer.chain_.end());
    return out;
  }

  bool is_bijective_exhaustive() const {
    std::vector<bool> seen(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_), false);
    for (int j = 1; j <= n_; ++j) {
      for (int k = 1; k <= n_; ++k) {
        auto [u, v] = apply(j, k);
        if (u < 1 || u > n_ || v < 1 || v > n_) return false;
        std::size_t c = code(n_, u, v);
        if (seen[c]) return false;
        seen[c] = true;
      }
    }
    return true;
  }

  bool is_symmetric_exhaustive() const {
    for (int j = 1; j <= n_; ++j) {
      for (int k = j; k <= n_; ++k) {
        auto [u, v] = apply(j, k);
        auto [ut, vt] = apply(k, j);
        if (ut != v || vt != u) return false;
      }
    }
    return true;
  }

 private:
  enum class Family { identity, transpose, anti_transpose, rho, eta, zeta, table };

  struct Atom {
    Family family = Family::identity;
    int param = 0;          // zeta modulus
    bool inverted = false;  // eta only
    std::shared_ptr<const std::vector<std::uint32_t>> fwd, inv;
  };

  explicit EntryPermutation(int n) : n_(n) {}

  static EntryPermutation named(Family f, int n) {
    check_dim(n);
    EntryPermutation p(n);
    Atom a;
    a.family = f;
    p.chain_.push_back(a);
    return p;
  }

  static void check_dim(int n) {
    if (n < 1) throw std::invalid_argument("EntryPermutation: N must be >= 1");
  }

  static constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();

  static std::size_t code(int n, int j, int k) {
    return static_cast<std::size_t>(j - 1) * static_cast<std::size_t>(n) +
           static_cast<std::size_t>(k - 1);
  }
  static std::pair<int, int> decode(int n, std::uint32_t c) {
    return {static_cast<int>(c / static_cast<std::uint32_t>(n)) + 1,
            static_cast<int>(c % static_cast<std::uint32_t>(n)) + 1};
  }

  std::pair<int, int> apply_atom(const Atom& a, int j, int k) const {
    switch (a.family) {
      case Family::identity:
        return {j, k};
      case Family::transpose:
        return {k, j};
      case Family::anti_transpose:
        return {n_ + 1 - k, n_ + 1 - j};
      case Family::rho:
        return (std::max(j, k) % 2 == 0) ? std::pair<int, int>{k, j}
                                         : std::pair<int, int>{j, k};
      case Family::zeta:
        return ((j + k) % a.param == 0) ? std::pair<int, int>{j, k}
                                        : std::pair<int, int>{k, j};
      case Family::eta:
        return a.inverted ? eta_inv(n_, j, k) : eta_fwd(n_, j, k);
      case Family::table:
        return decode(n_, (*a.fwd)[code(n_, j, k)]);
    }
    return {j, k};
  }

  // eta moves every off-diagonal entry within its hook {(j,k),(k,j) : j < k}
  // union row/column max(j,k), by a cyclic shift whose direction depends on
  // the parity of the hook index; the diagonal is shifted cyclically. Hooks
  // 2 and 3 are fused into a single transpose-equivariant 6-cycle so that no
  // entry is fixed or sent to its transpose (the k=2 hook alone is too small
  // to avoid that).
  static std::pair<int, int> eta_fwd(int n, int j, int k) {
    if (j == k) return {j % n + 1, j % n + 1};
    if (n >= 3 && j <= 3 && k <= 3) return eta_patch(j, k, /*inverse=*/false);
    if (j < k) {
      int m;
      if (k % 2 == 1)
        m = (j < k - 1) ? j + 1 : 1;
      else
        m = (j > 1) ? j - 1 : k - 1;
      return {k, m};
    }
    auto [u, v] = eta_fwd(n, k, j);
    return {v, u};
  }

  static std::pair<int, int> eta_inv(int n, int j, int k) {
    if (j == k) return {(j + n - 2) % n + 1, (j + n - 2) % n + 1};
    if (n >= 3 && j <= 3 && k <= 3) return eta_patch(j, k, /*inverse=*/true);
    if (j > k) {
      int m;
      if (j % 2 == 1)
        m = (k >= 2) ? k - 1 : j - 1;
      else
        m = (k <= j - 2) ? k + 1 : 1;
      return {m, j};
    }
    auto [u, v] = eta_inv(n, k, j);
    return {v, u};
  }

  static std::pair<int, int> eta_patch(int j, int k, bool inverse) {
    // 6-cycle (1,2)->(1,3)->(2,3)->(2,1)->(3,1)->(3,2)->(1,2)
    static constexpr int cyc[6][2] = {{1, 2}, {1, 3}, {2, 3}, {2, 1}, {3, 1}, {3, 2}};
    for (int i = 0; i < 6; ++i) {
      if (cyc[i][0] == j && cyc[i][1] == k) {
        int t = inverse ? (i + 5) % 6 : (i + 1) % 6;
        return {cyc[t][0], cyc[t][1]};
      }
    }
    return {j, k};  // unreachable for valid input
  }

  int n_;
  std::vector<Atom> chain_;
};

/// Exact scan statistics of a symmetric permutation. Gamma/chi count the
/// injective triples (j,k,l) with sigma(j,k) = (l,k) resp. (k,l), solved
/// per entry rather than by cubic enumeration.
struct PermStats {
  std::int64_t fp_count = 0;
  std::int64_t tp_count = 0;
  std::int64_t grid_count = 0;
  std::int64_t fp_row_min = 0, fp_row_max = 0;
  std::int64_t tp_row_min = 0, tp_row_max = 0;
  std::int64_t gamma_count = 0;
  std::int64_t chi_count = 0;
};

struct RowCounts {
  std::vector<std::int64_t> fp, tp;  // indexed by row j-1
};

inline PermStats stats(const EntryPermutation& sigma, RowCounts* rows = nullptr) {
  const int n = sigma.dim();
  PermStats s;
  std::vector<std::int64_t> fp_row(static_cast<std::size_t>(n), 0);
  std::vector<std::int64_t> tp_row(static_cast<std::size_t>(n), 0);
  for (int j = 1; j <= n; ++j) {
    for (int k = 1; k <= n; ++k) {
      auto [u, v] = sigma.apply(j, k);
      const bool fp = (u == j && v == k);
      const bool tp = (u == k && v == j);
      if (fp) {
        ++s.fp_count;
        ++fp_row[static_cast<std::size_t>(j - 1)];
      }
      if (tp) {
        ++s.tp_count;
        ++tp_row[static_cast<std::size_t>(j - 1)];
      }
      if (!fp && !tp && (u == j || u == k || v == j || v == k)) ++s.grid_count;
      if (j != k) {
        if (v == k && u != j && u != k) ++s.gamma_count;
        if (u == k && v != j && v != k) ++s.chi_count;
      }
    }
  }
  s.fp_row_min = *std::min_element(fp_row.begin(), fp_row.end());
  s.fp_row_max = *std::max_element(fp_row.begin(), fp_row.end());
  s.tp_row_min = *std::min_element(tp_row.begin(), tp_row.end());
  s.tp_row_max = *std::max_element(tp_row.begin(), tp_row.end());
  if (rows) {
    rows->fp = std::move(fp_row);
    rows->tp = std::move(tp_row);
  }
  return s;
}

/// sigma_{i'}^{-1} o sigma_i, the permutation whose FP/TP/Grid statistics
/// control the pair (i, i') limits.
inline EntryPermutation relative(const EntryPermutation& sigma_i,
                                 const EntryPermutation& sigma_iprime) {
  return compose(sigma_iprime.inverse(), sigma_i);
}

// ---------------------------------------------------------------------------
// Named construction for configs, and table import/export.
// ---------------------------------------------------------------------------

/// A dimension-free description of a permutation: instantiate with build(n).
struct PermutationSpec {
  std::string family;       // identity | transpose | anti_transpose | rho | eta |
                            // zeta | table | random
  int param = 0;            // zeta modulus
  std::uint64_t seed = 0;   // random
  std::string path;         // table file

  EntryPermutation build(int n) const;
};

EntryPermutation import_table(std::istream& in, int max_dim = EntryPermutation::kMaxTableDim);

inline void export_table(std::ostream& out, const EntryPermutation& sigma) {
  const int n = sigma.dim();
  out << n << "\n";
  for (int j = 1; j <= n; ++j) {
    for (int k = 1; k <= n; ++k) {
      auto [u, v] = sigma.apply(j, k);
      out << j << " " << k << " → " << u << " " << v << "\n";
    }
  }
}

inline EntryPermutation import_table(std::istream& in, int max_dim) {
  std::string line;
  if (!std::getline(in, line)) throw config_error("table import: empty input");
  int n = 0;
  try {
    n = std::stoi(line);
  } catch (const std::exception&) {
    throw config_error("table import: first line must be N");
  }
  if (n < 1) throw config_error("table import: N must be >= 1");
  std::vector<std::pair<int, int>> image(static_cast<std::size_t>(n) *
                                         static_cast<std::size_t>(n));
  std::vector<bool> filled(image.size(), false);
  std::size_t count = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    // accept "j k → j' k'" and "j k -> j' k'"
    std::string cleaned;
    cleaned.reserve(line.size());
    for (std::size_t i = 0; i < line.size();) {
      if (line.compare(i, 3, "→") == 0) {
        cleaned += ' ';
        i += 3;
      } else if (line.compare(i, 2, "->") == 0) {
        cleaned += ' ';
        i += 2;
      } else {
        cleaned += line[i];
        ++i;
      }
    }
    std::istringstream ls(cleaned);
    int j, k, u, v;
    if (!(ls >> j >> k >> u >> v)) throw config_error("table import: bad line: " + line);
    if (j < 1 || j > n || k < 1 || k > n)
      throw config_error("table import: source index out of range: " + line);
    std::size_t c = static_cast<std::size_t>(j - 1) * static_cast<std::size_t>(n) +
                    static_cast<std::size_t>(k - 1);
    if (filled[c]) throw config_error("table import: duplicate source: " + line);
    filled[c] = true;
    image[c] = {u, v};
    ++count;
  }
  if (count != image.size())
    throw config_error("table import: expected N^2 lines, got " + std::to_string(count));
  return EntryPermutation::from_table(n, image, max_dim);
}

// ---------------------------------------------------------------------------
// Condition report: the diagnostics behind the covariance limits.
// ---------------------------------------------------------------------------

/// One (i, i', N) diagnostic row for the relative permutation
/// sigma_{i'}^{-1} o sigma_i.
struct ConditionRow {
  int i = 0, i_prime = 0;
  int n = 0;
  double a = 0.0;              // #FP / N^2
  double b = 0.0;              // #TP / N^2
  double fp_row_gap = 0.0;     // (max_j - min_j) #FP(.,j) / N
  double tp_row_gap = 0.0;
  double grid_fraction = 0.0;  // #Grid / N^2
  Complex combined_mean;       // mean_j (#FP(.,j) + beta #TP(.,j)) / N
  double combined_gap = 0.0;   // max_j | . - mean |
  double gamma_minus_chi = 0.0;  // (#Gamma - #chi) / N^2
};

/// Per-pair trend flags over the N list. Heuristic thresholds: a quantity is
/// judged vanishing/homogeneous when its last value is <= 0.1 and it did not
/// grow from the first N to the last.
struct PairTrend {
  int i = 0, i_prime = 0;
  bool homogeneous_rows = false;
  bool combined_homogeneous = false;
  bool off_grid = false;
};

struct ConditionReport {
  Complex beta;
  std::vector<int> n_list;
  std::vector<ConditionRow> rows;
  std::vector<PairTrend> trends;
};

inline ConditionReport condition_report(const std::vector<PermutationSpec>& family,
                                        Complex beta, const std::vector<int>& n_list) {
  if (family.empty()) throw std::invalid_argument("condition_report: empty family");
  if (n_list.empty()) throw std::invalid_argument("condition_report: empty N list");
  ConditionReport report;
  report.beta = beta;
  report.n_list = n_list;

  const int m = static_cast<int>(family.size());
  for (int n : n_list) {
    std::vector<EntryPermutation> perms;
    perms.reserve(family.size());
    for (const auto& spec : family) {
      EntryPermutation p = spec.build(n);
      if (n <= 256 && !p.is_symmetric_exhaustive())
        throw std::invalid_argument("condition_report: permutation " + spec.family +
                                    " is not symmetric");
      perms.push_back(std::move(p));
    }
    for (int i = 0; i < m; ++i) {
      for (int ip = 0; ip < m; ++ip) {
        EntryPermutation rel = relative(perms[static_cast<std::size_t>(i)],
                                        perms[static_cast<std::size_t>(ip)]);
        RowCounts rows;
        PermStats st = stats(rel, &rows);
        ConditionRow row;
        row.i = i + 1;
        row.i_prime = ip + 1;
        row.n = n;
        const double n2 = static_cast<double>(n) * static_cast<double>(n);
        row.a = static_cast<double>(st.fp_count) / n2;
        row.b = static_cast<double>(st.tp_count) / n2;
        row.fp_row_gap = static_cast<double>(st.fp_row_max - st.fp_row_min) / n;
        row.tp_row_gap = static_cast<double>(st.tp_row_max - st.tp_row_min) / n;
        row.grid_fraction = static_cast<double>(st.grid_count) / n2;
        Complex mean(0.0, 0.0);
        for (int j = 0; j < n; ++j)
          mean += (Complex(static_cast<double>(rows.fp[static_cast<std::size_t>(j)]), 0.0) +
                   beta * static_cast<double>(rows.tp[static_cast<std::size_t>(j)])) /
                  static_cast<double>(n);
        mean /= static_cast<double>(n);
        row.combined_mean = mean;
        double gap = 0.0;
        for (int j = 0; j < n; ++j) {
          Complex v = (Complex(static_cast<double>(rows.fp[static_cast<std::size_t>(j)]), 0.0) +
                       beta * static_cast<double>(rows.tp[static_cast<std::size_t>(j)])) /
                      static_cast<double>(n);
          gap = std::max(gap, std::abs(v - mean));
        }
        row.combined_gap = gap;
        row.gamma_minus_chi = static_cast<double>(st.gamma_count - st.chi_count) / n2;
        report.rows.push_back(row);
      }
    }
  }

  for (int i = 1; i <= m; ++i) {
    for (int ip = 1; ip <= m; ++ip) {
      std::vector<const ConditionRow*> pair_rows;
      for (const auto& r : report.rows)
        if (r.i == i && r.i_prime == ip) pair_rows.push_back(&r);
      PairTrend t;
      t.i = i;
      t.i_prime = ip;
      auto vanishing = [&](auto get) {
        double first = get(*pair_rows.front());
        double last = get(*pair_rows.back());
        return last <= 0.1 && last <= first + 1e-12;
      };
      t.homogeneous_rows = vanishing([](const ConditionRow& r) { return r.fp_row_gap; }) &&
                           vanishing([](const ConditionRow& r) { return r.tp_row_gap; });
      t.combined_homogeneous = vanishing([](const ConditionRow& r) { return r.combined_gap; });
      t.off_grid = vanishing([](const ConditionRow& r) { return r.grid_fraction; });
      report.trends.push_back(t);
    }
  }
  return report;
}

inline EntryPermutation PermutationSpec::build(int n) const {
  if (family == "identity") return EntryPermutation::identity(n);
  if (family == "transpose") return EntryPermutation::transpose(n);
  if (family == "anti_transpose") return EntryPermutation::anti_transpose(n);
  if (family == "rho") return EntryPermutation::rho(n);
  if (family == "eta") return EntryPermutation::eta(n);
  if (family == "zeta") return EntryPermutation::zeta(n, param);
  if (family == "random") return EntryPermutation::random_symmetric(n, seed);
  if (family == "table") {
    std::ifstream in(path);
    if (!in) throw config_error("permutation table file not found: " + path);
    EntryPermutation p = import_table(in);
    if (p.dim() != n)
      throw config_error("permutation table at " + path + " has N=" +
                         std::to_string(p.dim()) + ", expected " + std::to_string(n));
    return p;
  }
  throw config_error("unknown permutation family: " + family);
}

}  // namespace permwig
