#pragma once

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include "permwig/common.hpp"
#include "permwig/nc.hpp"
#include "permwig/wigner.hpp"

namespace permwig {

/// Finite connected edge-labeled multidigraph. Vertices are 1..vertex_count,
/// labels are 1-based indices into whatever matrix/permutation family the
/// graph is evaluated against. An edge contributes the matrix entry
/// (row, col) = (phi(tar), phi(src)).
struct TestGraph {
  struct Edge {
    int src = 1, tar = 1, label = 1;
  };
  int vertex_count = 0;
  std::vector<Edge> edges;
};

inline bool is_connected(const TestGraph& g) {
  if (g.vertex_count < 1) return false;
  std::vector<int> parent(static_cast<std::size_t>(g.vertex_count));
  for (int v = 0; v < g.vertex_count; ++v) parent[static_cast<std::size_t>(v)] = v;
  std::function<int(int)> find = [&](int v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
      v = parent[static_cast<std::size_t>(v)];
    }
    return v;
  };
  for (const auto& e : g.edges) parent[static_cast<std::size_t>(find(e.src - 1))] = find(e.tar - 1);
  int root = find(0);
  for (int v = 1; v < g.vertex_count; ++v)
    if (find(v) != root) return false;
  return true;
}

inline void validate_test_graph(const TestGraph& g) {
  if (g.vertex_count < 1) throw std::invalid_argument("test graph: needs at least one vertex");
  for (const auto& e : g.edges) {
    if (e.src < 1 || e.src > g.vertex_count || e.tar < 1 || e.tar > g.vertex_count)
      throw std::invalid_argument("test graph: edge endpoint out of range");
    if (e.label < 1) throw std::invalid_argument("test graph: labels are 1-based");
  }
  if (!is_connected(g)) throw std::invalid_argument("test graph: must be connected");
}

/// Directed cycle whose trace evaluates the word product: edge k runs from
/// vertex k+1 back to vertex k (entry convention (row, col) = (tar, src)),
/// carrying the word's k-th label. A length-1 word gives a single loop.
inline TestGraph make_cycle_graph(const Word& word) {
  if (word.empty()) throw std::invalid_argument("make_cycle_graph: empty word");
  TestGraph g;
  const int n = static_cast<int>(word.size());
  g.vertex_count = n;
  for (int k = 0; k < n; ++k)
    g.edges.push_back({(k + 1) % n + 1, k + 1, word[static_cast<std::size_t>(k)]});
  return g;
}

// ---------------------------------------------------------------------------
// Vertex partitions, quotients, and the partition-lattice Moebius function.
// ---------------------------------------------------------------------------

/// Partition of the vertex set in restricted-growth form: block_of[v] is the
/// 0-based block id of vertex v+1, with block ids first appearing in order.
struct VertexPartition {
  std::vector<int> block_of;
  int blocks = 0;
};

inline VertexPartition singleton_partition(int v) {
  VertexPartition p;
  p.block_of.resize(static_cast<std::size_t>(v));
  for (int i = 0; i < v; ++i) p.block_of[static_cast<std::size_t>(i)] = i;
  p.blocks = v;
  return p;
}

/// All partitions of a v-element set (Bell(v) of them) via restricted-growth
/// strings.
inline std::vector<VertexPartition> enumerate_partitions(int v) {
  if (v < 1 || v > 12)
    throw budget_error("enumerate_partitions: v=" + std::to_string(v) + " outside budget [1,12]");
  std::vector<VertexPartition> out;
  std::vector<int> rgs(static_cast<std::size_t>(v), 0);
  std::function<void(int, int)> rec = [&](int i, int maxid) {
    if (i == v) {
      VertexPartition p;
      p.block_of = rgs;
      p.blocks = maxid + 1;
      out.push_back(std::move(p));
      return;
    }
    for (int b = 0; b <= maxid + 1; ++b) {
      rgs[static_cast<std::size_t>(i)] = b;
      rec(i + 1, std::max(maxid, b));
    }
  };
  rgs[0] = 0;
  rec(1, 0);
  return out;
}

/// mu_P(0_V, pi) = prod_{B in pi} (-1)^{|B|-1} (|B|-1)!.
inline long long partition_mobius(const VertexPartition& pi) {
  std::vector<int> size(static_cast<std::size_t>(pi.blocks), 0);
  for (int b : pi.block_of) ++size[static_cast<std::size_t>(b)];
  long long mu = 1;
  for (int s : size) {
    long long f = 1;
    for (int i = 2; i < s; ++i) f *= i;
    mu *= (s % 2 == 0) ? -f : f;
  }
  return mu;
}

/// Quotient test graph: vertices become blocks, the edge multiset is carried
/// over through the block map, labels unchanged.
inline TestGraph quotient(const TestGraph& g, const VertexPartition& pi) {
  if (static_cast<int>(pi.block_of.size()) != g.vertex_count)
    throw std::invalid_argument("quotient: partition does not match vertex set");
  TestGraph q;
  q.vertex_count = pi.blocks;
  q.edges.reserve(g.edges.size());
  for (const auto& e : g.edges)
    q.edges.push_back({pi.block_of[static_cast<std::size_t>(e.src - 1)] + 1,
                       pi.block_of[static_cast<std::size_t>(e.tar - 1)] + 1, e.label});
  return q;
}

// ---------------------------------------------------------------------------
// Traffic states on explicit matrices and on random permuted Wigner families.
// ---------------------------------------------------------------------------

namespace detail {

inline void check_graph_budget(const TestGraph& g, int n, double budget) {
  const double maps = std::pow(static_cast<double>(n), g.vertex_count);
  if (maps > budget)
    throw budget_error("traffic state: N^|V| = " + std::to_string(maps) +
                       " exceeds map budget " + std::to_string(budget));
}

inline void check_graph_matrices(const TestGraph& g, const std::vector<const Matrix*>& mats,
                                 int n) {
  for (const auto& e : g.edges) {
    if (e.label < 1 || static_cast<std::size_t>(e.label) > mats.size())
      throw std::invalid_argument("traffic state: edge label outside matrix family");
    const Matrix* m = mats[static_cast<std::size_t>(e.label - 1)];
    if (m->rows() != n || m->cols() != n)
      throw std::invalid_argument("traffic state: matrix dimension mismatch");
  }
}

template <typename Visit>
void for_all_maps(int vertices, int n, bool injective, Visit&& visit) {
  std::vector<int> phi(static_cast<std::size_t>(vertices), 0);  // values 0..n-1
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  std::function<void(int)> rec = [&](int v) {
    if (v == vertices) {
      visit(phi);
      return;
    }
    for (int x = 0; x < n; ++x) {
      if (injective && used[static_cast<std::size_t>(x)]) continue;
      phi[static_cast<std::size_t>(v)] = x;
      used[static_cast<std::size_t>(x)] = true;
      rec(v + 1);
      used[static_cast<std::size_t>(x)] = false;
    }
  };
  rec(0);
}

}  // namespace detail

/// tau_N[T] = (1/N) sum over ALL maps phi: V -> [N] of prod_e M_{label(e)}(phi(tar), phi(src)).
inline Complex traffic_state(const TestGraph& g, const std::vector<const Matrix*>& mats, int n,
                             double map_budget = kDefaultMapBudget) {
  validate_test_graph(g);
  detail::check_graph_matrices(g, mats, n);
  detail::check_graph_budget(g, n, map_budget);
  Complex acc(0.0, 0.0);
  detail::for_all_maps(g.vertex_count, n, /*injective=*/false, [&](const std::vector<int>& phi) {
    Complex term(1.0, 0.0);
    for (const auto& e : g.edges)
      term *= (*mats[static_cast<std::size_t>(e.label - 1)])(
          phi[static_cast<std::size_t>(e.tar - 1)], phi[static_cast<std::size_t>(e.src - 1)]);
    acc += term;
  });
  return acc / static_cast<double>(n);
}

/// tau0_N[T]: same as traffic_state but over injective maps only.
inline Complex injective_traffic_state(const TestGraph& g, const std::vector<const Matrix*>& mats,
                                       int n, double map_budget = kDefaultMapBudget) {
  validate_test_graph(g);
  detail::check_graph_matrices(g, mats, n);
  detail::check_graph_budget(g, n, map_budget);
  Complex acc(0.0, 0.0);
  detail::for_all_maps(g.vertex_count, n, /*injective=*/true, [&](const std::vector<int>& phi) {
    Complex term(1.0, 0.0);
    for (const auto& e : g.edges)
      term *= (*mats[static_cast<std::size_t>(e.label - 1)])(
          phi[static_cast<std::size_t>(e.tar - 1)], phi[static_cast<std::size_t>(e.src - 1)]);
    acc += term;
  });
  return acc / static_cast<double>(n);
}

/// E[tau0_N[T]] for the family of permuted copies W^{sigma_i} of one Wigner
/// matrix: exact, via per-entry-class moments instead of sampling.
inline Complex expected_injective_traffic(const TestGraph& g, const EntrySpec& spec,
                                          const std::vector<EntryPermutation>& perms, int n,
                                          double map_budget = kDefaultMapBudget) {
  validate_test_graph(g);
  for (const auto& e : g.edges)
    if (e.label < 1 || static_cast<std::size_t>(e.label) > perms.size())
      throw std::invalid_argument("expected_injective_traffic: edge label outside family");
  for (const auto& p : perms)
    if (p.dim() != n)
      throw std::invalid_argument("expected_injective_traffic: permutation dim mismatch");
  detail::check_graph_budget(g, n, map_budget);

  std::vector<std::pair<int, int>> points(g.edges.size());
  Complex acc(0.0, 0.0);
  detail::for_all_maps(g.vertex_count, n, /*injective=*/true, [&](const std::vector<int>& phi) {
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      const auto& e = g.edges[i];
      points[i] = perms[static_cast<std::size_t>(e.label - 1)].apply(
          phi[static_cast<std::size_t>(e.tar - 1)] + 1, phi[static_cast<std::size_t>(e.src - 1)] + 1);
    }
    acc += expected_entry_product(spec, points);
  });
  const double edges = static_cast<double>(g.edges.size());
  return acc / std::pow(static_cast<double>(n), 1.0 + edges / 2.0);
}

// ---------------------------------------------------------------------------
// Double trees and the predicted injective limits.
// ---------------------------------------------------------------------------

struct TwinClass {
  int edge1 = 0, edge2 = 0;  // indices into TestGraph::edges
  bool opposing = false;     // antiparallel pair; otherwise congruent (parallel)
  int label1 = 0, label2 = 0;
};

struct DoubleTreeReport {
  bool is_double_tree = false;
  std::vector<TwinClass> twins;
};

/// A double tree has no loops, every undirected edge class of multiplicity
/// exactly 2, and tree-many classes.
inline DoubleTreeReport classify_double_tree(const TestGraph& g) {
  validate_test_graph(g);
  DoubleTreeReport report;
  std::map<std::pair<int, int>, std::vector<int>> classes;
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    if (e.src == e.tar) return report;  // loop
    classes[{std::min(e.src, e.tar), std::max(e.src, e.tar)}].push_back(static_cast<int>(i));
  }
  for (const auto& [key, members] : classes)
    if (members.size() != 2) return report;
  if (static_cast<int>(classes.size()) != g.vertex_count - 1) return report;  // not a tree
  report.is_double_tree = true;
  for (const auto& [key, members] : classes) {
    const auto& e1 = g.edges[static_cast<std::size_t>(members[0])];
    const auto& e2 = g.edges[static_cast<std::size_t>(members[1])];
    TwinClass tc;
    tc.edge1 = members[0];
    tc.edge2 = members[1];
    tc.opposing = (e1.src == e2.tar && e1.tar == e2.src);
    tc.label1 = e1.label;
    tc.label2 = e2.label;
    report.twins.push_back(tc);
  }
  return report;
}

/// Predicted limit of the injective traffic state of a semicircular traffic
/// family: zero off double trees, and on a double tree the product of
/// K(label,label') over opposing twins and J(label,label') over congruent
/// twins.
inline double predicted_injective(const TestGraph& g, const CovarianceSpec& cov) {
  DoubleTreeReport report = classify_double_tree(g);
  if (!report.is_double_tree) return 0.0;
  double prod = 1.0;
  for (const auto& tc : report.twins) {
    const auto& m = tc.opposing ? cov.K : cov.J;
    if (tc.label1 > m.rows() || tc.label2 > m.cols())
      throw std::invalid_argument("predicted_injective: label outside covariance index set");
    prod *= m(tc.label1 - 1, tc.label2 - 1);
  }
  return prod;
}

/// All vertex-partition quotients of the directed n-cycle (edge k labeled k)
/// that are double trees. Every such quotient has only opposing twin edges.
inline std::vector<TestGraph> cycle_quotient_double_trees(int n) {
  if (n < 1 || n > 10)
    throw budget_error("cycle_quotient_double_trees: n=" + std::to_string(n) +
                       " outside budget [1,10]");
  Word word(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) word[static_cast<std::size_t>(k)] = k + 1;
  TestGraph cycle = make_cycle_graph(word);
  std::vector<TestGraph> out;
  for (const auto& pi : enumerate_partitions(n)) {
    TestGraph q = quotient(cycle, pi);
    if (classify_double_tree(q).is_double_tree) out.push_back(std::move(q));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text format: first line "V <count>", then one line "src tgt label" per edge.
// ---------------------------------------------------------------------------

inline void write_test_graph(std::ostream& out, const TestGraph& g) {
  out << "V " << g.vertex_count << "\n";
  for (const auto& e : g.edges) out << e.src << " " << e.tar << " " << e.label << "\n";
}

inline TestGraph read_test_graph(std::istream& in) {
  TestGraph g;
  std::string tag;
  if (!(in >> tag) || tag != "V") throw config_error("test graph: expected header 'V <count>'");
  if (!(in >> g.vertex_count)) throw config_error("test graph: bad vertex count");
  TestGraph::Edge e;
  while (in >> e.src >> e.tar >> e.label) g.edges.push_back(e);
  validate_test_graph(g);
  return g;
}

}  // namespace permwig
