#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "permwig/common.hpp"
#include "permwig/entry_dist.hpp"
#include "permwig/permutation.hpp"
#include "permwig/traffic.hpp"
#include "permwig/wigner.hpp"

namespace permwig {

using Json = nlohmann::json;

enum class ExperimentKind {
  perm_stats,
  condition_report,
  moment_mc,
  moment_exact,
  traffic_check,
  spectrum,
  nc_moment,
};

inline std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::perm_stats: return "perm_stats";
    case ExperimentKind::condition_report: return "condition_report";
    case ExperimentKind::moment_mc: return "moment_mc";
    case ExperimentKind::moment_exact: return "moment_exact";
    case ExperimentKind::traffic_check: return "traffic_check";
    case ExperimentKind::spectrum: return "spectrum";
    case ExperimentKind::nc_moment: return "nc_moment";
  }
  return "?";
}

inline ExperimentKind experiment_kind_from_string(const std::string& s) {
  for (ExperimentKind k :
       {ExperimentKind::perm_stats, ExperimentKind::condition_report, ExperimentKind::moment_mc,
        ExperimentKind::moment_exact, ExperimentKind::traffic_check, ExperimentKind::spectrum,
        ExperimentKind::nc_moment})
    if (to_string(k) == s) return k;
  throw config_error("unknown experiment kind: " + s);
}

/// Entry-law section of a config; build() produces the validated EntrySpec.
struct EntryConfig {
  std::string kind = "gaussian";  // gaussian | rademacher_real | rademacher_complex_xix | table
  Complex beta{0.0, 0.0};
  std::string diag_kind = "gaussian_real";  // gaussian_real | rademacher_real
  double diag_variance = 1.0;
  TableLaw table;

  EntrySpec build() const {
    EntrySpec spec = [&] {
      if (kind == "gaussian") return EntrySpec::gaussian(beta);
      if (kind == "rademacher_real") return EntrySpec::rademacher_real();
      if (kind == "rademacher_complex_xix") return EntrySpec::rademacher_complex_xix();
      if (kind == "table") return EntrySpec::table(table);
      throw config_error("unknown entry kind: " + kind);
    }();
    DiagKind dk;
    if (diag_kind == "gaussian_real")
      dk = DiagKind::gaussian_real;
    else if (diag_kind == "rademacher_real")
      dk = DiagKind::rademacher_real;
    else
      throw config_error("unknown diagonal kind: " + diag_kind);
    spec.with_diag(dk, diag_variance);
    return spec;
  }
};

/// A full experiment description. One experiment per process invocation;
/// a seed is mandatory so every run is reproducible.
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::perm_stats;
  EntryConfig entry;
  std::vector<PermutationSpec> permutations;
  Word word;
  int n = 0;
  std::vector<int> n_list;
  int trials = 50;
  std::uint64_t seed = 0;
  std::string out;
  std::optional<TestGraph> graph;
  std::optional<Complex> target;
  std::optional<double> tolerance;
  bool trend = false;        // traffic_check: require |value| nonincreasing over n_list
  std::string nc_op;         // nc_moment: "a1a2" | "semicircular"
  std::vector<double> cov_k; // nc_moment semicircular: row-major square matrix
  int bins = 61;             // spectrum histogram resolution

  std::vector<int> dims() const {
    if (!n_list.empty()) return n_list;
    return {n};
  }
};

inline TestGraph named_graph(const std::string& name) {
  TestGraph g;
  if (name == "opposing_pair") {
    g.vertex_count = 2;
    g.edges = {{1, 2, 1}, {2, 1, 2}};
  } else if (name == "congruent_pair") {
    g.vertex_count = 2;
    g.edges = {{1, 2, 1}, {1, 2, 2}};
  } else if (name == "path3") {
    g.vertex_count = 3;
    g.edges = {{2, 1, 1}, {3, 2, 2}};
  } else if (name == "star5") {
    // center 1; single edges in both orientations and both labels
    g.vertex_count = 5;
    g.edges = {{1, 2, 1}, {3, 1, 2}, {4, 1, 2}, {1, 5, 1}};
  } else {
    throw config_error("unknown named graph: " + name);
  }
  return g;
}

// ---------------------------------------------------------------------------
// JSON (de)serialization. Stable key order and value formatting make record
// files byte-identical across runs of the same config.
// ---------------------------------------------------------------------------

inline Json to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2)
    return Complex(j.at(0).get<double>(), j.at(1).get<double>());
  throw config_error("expected a number or [re, im] pair");
}

inline Json to_json(const EntryConfig& e) {
  Json j;
  j["kind"] = e.kind;
  j["beta"] = to_json(e.beta);
  j["diag_kind"] = e.diag_kind;
  j["diag_variance"] = e.diag_variance;
  if (e.kind == "table") {
    Json support = Json::array(), weight = Json::array();
    for (const auto& x : e.table.support) support.push_back(to_json(x));
    for (double w : e.table.weight) weight.push_back(w);
    j["support"] = support;
    j["weight"] = weight;
  }
  return j;
}

inline EntryConfig entry_config_from_json(const Json& j) {
  EntryConfig e;
  e.kind = j.value("kind", std::string("gaussian"));
  if (j.contains("beta")) e.beta = complex_from_json(j.at("beta"));
  if (e.kind == "rademacher_real") e.beta = Complex(1.0, 0.0);
  if (e.kind == "rademacher_complex_xix") e.beta = Complex(0.0, 1.0);
  e.diag_kind = j.value("diag_kind", std::string("gaussian_real"));
  e.diag_variance = j.value("diag_variance", 1.0);
  if (j.contains("support")) {
    for (const auto& x : j.at("support")) e.table.support.push_back(complex_from_json(x));
    for (const auto& w : j.at("weight")) e.table.weight.push_back(w.get<double>());
  }
  return e;
}

inline Json to_json(const PermutationSpec& p) {
  Json j;
  j["family"] = p.family;
  if (p.family == "zeta") j["param"] = p.param;
  if (p.family == "random") j["seed"] = p.seed;
  if (p.family == "table") j["path"] = p.path;
  return j;
}

inline PermutationSpec permutation_spec_from_json(const Json& j) {
  PermutationSpec p;
  if (j.is_string()) {
    p.family = j.get<std::string>();
    return p;
  }
  p.family = j.at("family").get<std::string>();
  p.param = j.value("param", 0);
  p.seed = j.value("seed", std::uint64_t{0});
  p.path = j.value("path", std::string());
  return p;
}

inline Json to_json(const TestGraph& g) {
  Json edges = Json::array();
  for (const auto& e : g.edges) edges.push_back(Json::array({e.src, e.tar, e.label}));
  Json j;
  j["vertices"] = g.vertex_count;
  j["edges"] = edges;
  return j;
}

inline TestGraph graph_from_json(const Json& j) {
  if (j.is_string()) return named_graph(j.get<std::string>());
  TestGraph g;
  if (j.contains("file")) {
    std::ifstream in(j.at("file").get<std::string>());
    if (!in) throw config_error("graph file not found: " + j.at("file").get<std::string>());
    return read_test_graph(in);
  }
  g.vertex_count = j.at("vertices").get<int>();
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 3) throw config_error("graph edge must be [src, tgt, label]");
    g.edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int>()});
  }
  validate_test_graph(g);
  return g;
}

inline Json to_json(const ExperimentConfig& c) {
  Json j;
  j["experiment"] = to_string(c.experiment);
  j["entry"] = to_json(c.entry);
  Json perms = Json::array();
  for (const auto& p : c.permutations) perms.push_back(to_json(p));
  j["permutations"] = perms;
  if (!c.word.empty()) j["word"] = c.word;
  if (c.n > 0) j["n"] = c.n;
  if (!c.n_list.empty()) j["n_list"] = c.n_list;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  if (!c.out.empty()) j["out"] = c.out;
  if (c.graph) j["graph"] = to_json(*c.graph);
  if (c.target) j["target"] = to_json(*c.target);
  if (c.tolerance) j["tolerance"] = *c.tolerance;
  if (c.trend) j["trend"] = true;
  if (!c.nc_op.empty()) j["nc_op"] = c.nc_op;
  if (!c.cov_k.empty()) j["cov_k"] = c.cov_k;
  if (c.experiment == ExperimentKind::spectrum) j["bins"] = c.bins;
  return j;
}

inline ExperimentConfig experiment_config_from_json(const Json& j) {
  ExperimentConfig c;
  try {
    c.experiment = experiment_kind_from_string(j.at("experiment").get<std::string>());
    if (j.contains("entry")) c.entry = entry_config_from_json(j.at("entry"));
    if (j.contains("permutations"))
      for (const auto& p : j.at("permutations")) c.permutations.push_back(permutation_spec_from_json(p));
    if (j.contains("word")) c.word = j.at("word").get<Word>();
    c.n = j.value("n", 0);
    if (j.contains("n_list")) c.n_list = j.at("n_list").get<std::vector<int>>();
    c.trials = j.value("trials", 50);
    if (!j.contains("seed")) throw config_error("config requires a seed (reproducibility)");
    c.seed = j.at("seed").get<std::uint64_t>();
    c.out = j.value("out", std::string());
    if (j.contains("graph")) c.graph = graph_from_json(j.at("graph"));
    if (j.contains("target")) c.target = complex_from_json(j.at("target"));
    if (j.contains("tolerance")) c.tolerance = j.at("tolerance").get<double>();
    c.trend = j.value("trend", false);
    c.nc_op = j.value("nc_op", std::string());
    if (j.contains("cov_k")) c.cov_k = j.at("cov_k").get<std::vector<double>>();
    c.bins = j.value("bins", 61);
  } catch (const Json::exception& e) {
    throw config_error(std::string("config parse error: ") + e.what());
  }
  return c;
}

inline ExperimentConfig parse_config(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw config_error(std::string("config is not valid JSON: ") + e.what());
  }
  return experiment_config_from_json(j);
}

/// Structural checks that do not run anything: referenced names resolvable,
/// dimensions within module caps, the experiment's required sections present.
inline void validate(const ExperimentConfig& c) {
  if (c.experiment != ExperimentKind::nc_moment) {
    for (int n : c.dims())
      if (n < 1) throw config_error("config requires n or n_list with positive dimensions");
    if (c.n > kMaxWignerDim) throw config_error("n exceeds the matrix dimension cap");
  }
  static const std::vector<std::string> known_families = {
      "identity", "transpose", "anti_transpose", "rho", "eta", "zeta", "table", "random"};
  for (const auto& p : c.permutations) {
    bool ok = false;
    for (const auto& f : known_families) ok = ok || p.family == f;
    if (!ok) throw config_error("unknown permutation family: " + p.family);
    if (p.family == "zeta" && p.param < 1) throw config_error("zeta requires param >= 1");
  }
  switch (c.experiment) {
    case ExperimentKind::perm_stats:
    case ExperimentKind::condition_report:
      if (c.permutations.empty()) throw config_error("experiment requires permutations");
      break;
    case ExperimentKind::moment_mc:
      if (c.trials < 2) throw config_error("moment_mc requires trials >= 2");
      [[fallthrough]];
    case ExperimentKind::moment_exact:
      if (c.word.empty()) throw config_error("moment experiments require a word");
      if (c.permutations.empty()) throw config_error("moment experiments require permutations");
      for (int letter : c.word)
        if (letter < 1 || static_cast<std::size_t>(letter) > c.permutations.size())
          throw config_error("word letter outside the permutation family");
      break;
    case ExperimentKind::traffic_check: {
      if (!c.graph) throw config_error("traffic_check requires a graph");
      if (c.permutations.empty()) throw config_error("traffic_check requires permutations");
      for (const auto& e : c.graph->edges)
        if (static_cast<std::size_t>(e.label) > c.permutations.size())
          throw config_error("graph label outside the permutation family");
      break;
    }
    case ExperimentKind::spectrum:
      if (c.permutations.size() != 1)
        throw config_error("spectrum takes exactly one permutation (the pair is W, W^sigma)");
      if (c.bins < 1) throw config_error("spectrum requires bins >= 1");
      break;
    case ExperimentKind::nc_moment:
      if (c.nc_op != "a1a2" && c.nc_op != "semicircular")
        throw config_error("nc_moment requires nc_op = a1a2 | semicircular");
      if (c.word.empty()) throw config_error("nc_moment requires a word");
      if (c.nc_op == "semicircular") {
        std::size_t dim = 0;
        while (dim * dim < c.cov_k.size()) ++dim;
        if (dim * dim != c.cov_k.size() || c.cov_k.empty())
          throw config_error("cov_k must be a square row-major matrix");
      }
      break;
  }
  c.entry.build();  // throws on inconsistent entry law
}

}  // namespace permwig
