#include "permwig/config.hpp"

#include <filesystem>
#include <set>
#include <fstream>
#include <sstream>

#include <catch2/catch_amalgamated.hpp>

#include "permwig/recipes.hpp"
#include "permwig/runner.hpp"

namespace {

using permwig::Complex;
using permwig::ExperimentConfig;
using permwig::ExperimentKind;

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

TEST_CASE("recipe catalog is nonempty and structurally valid") {
  const auto& catalog = permwig::recipes();
  REQUIRE(!catalog.empty());
  std::set<std::string> names;
  for (const auto& rec : catalog) {
    INFO(rec.name);
    CHECK(!rec.description.empty());
    CHECK(names.insert(rec.name).second);  // unique names
    CHECK_NOTHROW(permwig::validate(rec.config));
  }
}

TEST_CASE("recipes round-trip through config serialization") {
  for (const auto& rec : permwig::recipes()) {
    INFO(rec.name);
    std::string printed = permwig::to_json(rec.config).dump(2);
    ExperimentConfig reparsed = permwig::parse_config(printed);
    CHECK(permwig::to_json(reparsed).dump(2) == printed);
  }
}

TEST_CASE("unknown recipe name errors") {
  CHECK_THROWS_AS(permwig::find_recipe("no-such-recipe"), permwig::config_error);
}

TEST_CASE("config parse errors") {
  CHECK_THROWS_AS(permwig::parse_config("not json"), permwig::config_error);
  CHECK_THROWS_AS(permwig::parse_config("{}"), permwig::config_error);
  // seed is mandatory
  CHECK_THROWS_AS(permwig::parse_config(R"({"experiment":"perm_stats",
      "permutations":[{"family":"identity"}], "n": 8})"),
                  permwig::config_error);
  // unknown experiment
  CHECK_THROWS_AS(permwig::parse_config(R"({"experiment":"nope","seed":1})"),
                  permwig::config_error);
  // unknown family surfaces in validate
  ExperimentConfig c = permwig::parse_config(R"({"experiment":"perm_stats",
      "permutations":[{"family":"bogus"}], "n": 8, "seed": 1})");
  CHECK_THROWS_AS(permwig::validate(c), permwig::config_error);
  // word letter outside family
  ExperimentConfig w = permwig::parse_config(R"({"experiment":"moment_exact",
      "permutations":[{"family":"identity"}], "word":[1,2], "n": 4, "seed": 1})");
  CHECK_THROWS_AS(permwig::validate(w), permwig::config_error);
}

TEST_CASE("graph configs: named, inline, invalid") {
  ExperimentConfig c = permwig::parse_config(R"({
      "experiment":"traffic_check", "seed": 3, "n": 10,
      "entry": {"kind":"gaussian", "beta":[0.5,0]},
      "permutations":[{"family":"identity"},{"family":"zeta","param":2}],
      "graph": "opposing_pair"})");
  REQUIRE(c.graph.has_value());
  CHECK(c.graph->vertex_count == 2);
  ExperimentConfig inl = permwig::parse_config(R"({
      "experiment":"traffic_check", "seed": 3, "n": 10,
      "permutations":[{"family":"identity"}],
      "graph": {"vertices": 2, "edges": [[1,2,1],[2,1,1]]}})");
  CHECK(inl.graph->edges.size() == 2);
  CHECK_THROWS_AS(permwig::parse_config(R"({
      "experiment":"traffic_check", "seed": 3, "n": 10,
      "permutations":[{"family":"identity"}],
      "graph": "no_such_graph"})"),
                  permwig::config_error);
}

TEST_CASE("identical config and seed give byte-identical records") {
  ExperimentConfig c;
  c.experiment = ExperimentKind::moment_mc;
  c.entry.kind = "gaussian";
  c.entry.beta = Complex(0.5, 0);
  c.permutations = {{.family = "identity"}, {.family = "transpose"}};
  c.word = {1, 2};
  c.n = 16;
  c.trials = 20;
  c.seed = 777;
  permwig::RunResult a = permwig::run(c);
  permwig::RunResult b = permwig::run(c);
  CHECK(a.record.dump() == b.record.dump());

  auto tmp = std::filesystem::temp_directory_path() / "permwig_test_records";
  std::filesystem::remove_all(tmp);
  c.out = (tmp / "one").string();
  permwig::run_to_files(c);
  std::string first = slurp(std::filesystem::path(c.out) / "record.json");
  c.out = (tmp / "two").string();
  permwig::run_to_files(c);
  std::string second = slurp(std::filesystem::path(c.out) / "record.json");
  // records echo the config including the output path; strip it for the
  // byte-for-byte comparison of everything else
  permwig::Json ja = permwig::Json::parse(first);
  permwig::Json jb = permwig::Json::parse(second);
  ja["config"].erase("out");
  jb["config"].erase("out");
  CHECK(ja.dump() == jb.dump());
  std::filesystem::remove_all(tmp);
}

TEST_CASE("tolerance failures set exit code 1") {
  ExperimentConfig c;
  c.experiment = ExperimentKind::nc_moment;
  c.nc_op = "a1a2";
  c.word = {1, 1, 2, 2};
  c.seed = 1;
  c.target = Complex(1.0, 0.0);  // true value is 29/27
  c.tolerance = 1e-6;
  permwig::RunResult r = permwig::run(c);
  CHECK(r.exit_code == 1);
  CHECK_FALSE(r.record["pass"].get<bool>());
  c.target = Complex(29.0 / 27.0, 0.0);
  CHECK(permwig::run(c).exit_code == 0);
}

TEST_CASE("moment experiment writes the delimited record") {
  ExperimentConfig c;
  c.experiment = ExperimentKind::moment_exact;
  c.entry.kind = "gaussian";
  c.entry.beta = Complex(0.5, 0);
  c.permutations = {{.family = "identity"}, {.family = "transpose"}};
  c.word = {1, 2};
  c.n = 3;
  c.seed = 5;
  auto tmp = std::filesystem::temp_directory_path() / "permwig_test_moment";
  std::filesystem::remove_all(tmp);
  c.out = tmp.string();
  permwig::run_to_files(c);
  std::string tsv = slurp(tmp / "moments.tsv");
  CHECK(tsv.find("word\tn\ttrials\testimate_re\testimate_im\tstderr\tseed") == 0);
  CHECK(tsv.find("1,2\t3\t0\t") != std::string::npos);
  std::filesystem::remove_all(tmp);
}

TEST_CASE("spectrum experiment writes spectrum, histogram and density files") {
  ExperimentConfig c;
  c.experiment = ExperimentKind::spectrum;
  c.entry.kind = "gaussian";
  c.entry.beta = Complex(-1.0, 0);
  c.permutations = {{.family = "zeta", .param = 2}};
  c.n = 80;
  c.seed = 11;
  c.tolerance = 0.5;  // smoke run at tiny N; the acceptance suite pins 0.04 at N=2000
  c.bins = 11;
  auto tmp = std::filesystem::temp_directory_path() / "permwig_test_spectrum";
  std::filesystem::remove_all(tmp);
  c.out = tmp.string();
  permwig::RunResult r = permwig::run_to_files(c);
  CHECK(r.exit_code == 0);
  for (const char* name : {"record.json", "spectrum.csv", "histogram.csv", "density.csv"})
    CHECK(std::filesystem::exists(tmp / name));
  std::string spectrum = slurp(tmp / "spectrum.csv");
  CHECK(spectrum.find("eigenvalue,empirical_cdf") == 0);
  // eigenvalue count matches n
  int lines = 0;
  for (char ch : spectrum)
    if (ch == '\n') ++lines;
  CHECK(lines == c.n + 1);
  std::filesystem::remove_all(tmp);
}

TEST_CASE("perm_stats and condition_report run and serialize") {
  ExperimentConfig c;
  c.experiment = ExperimentKind::perm_stats;
  c.permutations = {{.family = "eta"}, {.family = "rho"}};
  c.n = 64;
  c.seed = 1;
  permwig::RunResult r = permwig::run(c);
  CHECK(r.exit_code == 0);
  REQUIRE(r.record["outputs"]["rows"].size() == 2);
  CHECK(r.record["outputs"]["rows"][0]["fp_count"].get<long long>() == 0);

  ExperimentConfig cr;
  cr.experiment = ExperimentKind::condition_report;
  cr.entry.beta = Complex(0, 0);
  cr.permutations = {{.family = "identity"}, {.family = "rho"}};
  cr.n_list = {32, 64};
  cr.seed = 1;
  permwig::RunResult rr = permwig::run(cr);
  CHECK(rr.exit_code == 0);
  bool wait_flag = false;
  for (const auto& t : rr.record["outputs"]["trends"])
    if (t["wait_flag"].get<bool>()) wait_flag = true;
  CHECK(wait_flag);
}

}  // namespace
