#pragma once

#include <string>
#include <vector>

#include "permwig/config.hpp"

namespace permwig {

/// A named, fully pinned experiment: entry law, permutations, sizes, seed,
/// target and tolerance. Running a recipe reproduces one headline value of
/// the permuted-entry model.
struct Recipe {
  std::string name;
  std::string description;
  ExperimentConfig config;
};

inline const std::vector<Recipe>& recipes() {
  static const std::vector<Recipe> catalog = [] {
    std::vector<Recipe> r;

    auto gaussian = [](double re, double im = 0.0) {
      EntryConfig e;
      e.kind = "gaussian";
      e.beta = Complex(re, im);
      return e;
    };

    {
      Recipe rec;
      rec.name = "rho-fourth-moment";
      rec.description =
          "Mixed fourth moment of (W, W^rho) where rho fixes entries with odd max-index and "
          "transposes the rest: the limit 2(beta^2+beta+1)/3 (= 2 at beta = 1) differs from the "
          "value 2((1+beta)/2)^2 that row-homogeneous fixed/transposed fractions would give.";
      rec.config.experiment = ExperimentKind::moment_mc;
      rec.config.entry = gaussian(1.0);
      rec.config.permutations = {{.family = "identity"}, {.family = "rho"}};
      rec.config.word = {1, 2, 1, 2};
      rec.config.n = 1000;
      rec.config.trials = 50;
      rec.config.seed = 20240801;
      rec.config.target = Complex(2.0, 0.0);
      rec.config.tolerance = 0.03;
      r.push_back(rec);
    }
    {
      Recipe rec;
      rec.name = "eta-second-moment";
      rec.description =
          "Second mixed moment of (W, W^eta): eta has no fixed or transposed points, so "
          "E tr(W W^eta) -> 0.";
      rec.config.experiment = ExperimentKind::moment_mc;
      rec.config.entry = gaussian(1.0);
      rec.config.permutations = {{.family = "identity"}, {.family = "eta"}};
      rec.config.word = {1, 2};
      rec.config.n = 1000;
      rec.config.trials = 50;
      rec.config.seed = 20240802;
      rec.config.target = Complex(0.0, 0.0);
      rec.config.tolerance = 0.02;
      r.push_back(rec);
    }
    {
      Recipe rec;
      rec.name = "eta-fourth-moment";
      rec.description =
          "Fourth mixed moment of (W, W^eta) at beta = 1: eta moves every entry within its grid, "
          "and the limit beta^2/3 is nonzero even though no entry is fixed or transposed - "
          "vanishing fixed/transposed counts alone do not give a semicircular pair.";
      rec.config.experiment = ExperimentKind::moment_mc;
      rec.config.entry = gaussian(1.0);
      rec.config.permutations = {{.family = "identity"}, {.family = "eta"}};
      rec.config.word = {1, 2, 1, 2};
      rec.config.n = 1000;
      rec.config.trials = 50;
      rec.config.seed = 20240803;
      rec.config.target = Complex(1.0 / 3.0, 0.0);
      rec.config.tolerance = 0.02;
      r.push_back(rec);
    }
    {
      Recipe rec;
      rec.name = "transpose-second-moment-complex";
      rec.description =
          "E tr(W W^T) -> Re(beta) for the complex two-point law with beta = i (entries "
          "s(1+i)/sqrt 2), so the target is 0.";
      rec.config.experiment = ExperimentKind::moment_mc;
      rec.config.entry.kind = "rademacher_complex_xix";
      rec.config.entry.beta = Complex(0.0, 1.0);
      rec.config.permutations = {{.family = "identity"}, {.family = "transpose"}};
      rec.config.word = {1, 2};
      rec.config.n = 1000;
      rec.config.trials = 50;
      rec.config.seed = 20240804;
      rec.config.target = Complex(0.0, 0.0);
      rec.config.tolerance = 0.03;
      r.push_back(rec);
    }
    {
      Recipe rec;
      rec.name = "transpose-fourth-moment-complex";
      rec.description =
          "E tr(W W W^T W^T) -> 1 + (2/3)|beta|^2 + (beta^2 + conj(beta)^2)/6 = 4/3 at beta = i; "
          "a semicircular pair would force 1 + Re(beta)^2 = 1, so strictly complex "
          "pseudovariance obstructs the semicircular limit when transposed entries persist.";
      rec.config.experiment = ExperimentKind::moment_mc;
      rec.config.entry.kind = "rademacher_complex_xix";
      rec.config.entry.beta = Complex(0.0, 1.0);
      rec.config.permutations = {{.family = "identity"}, {.family = "transpose"}};
      rec.config.word = {1, 1, 2, 2};
      rec.config.n = 1000;
      rec.config.trials = 50;
      rec.config.seed = 20240805;
      rec.config.target = Complex(4.0 / 3.0, 0.0);
      rec.config.tolerance = 0.03;
      r.push_back(rec);
    }
    {
      Recipe rec;
      rec.name = "a1a2-orthogonality";
      rec.description =
          "(tr x phi)(A1 A2) = 0 for the 3x3 operator matrices over a free "
          "semicircular/circular family: the pair is orthogonal in second moments.";
      rec.config.experiment = ExperimentKind::nc_moment;
      rec.config.nc_op = "a1a2";
      rec.config.word = {1, 2};
      rec.config.seed = 1;
      rec.config.target = Complex(0.0, 0.0);
      rec.config.tolerance = 1e-12;
      r.push_back(rec);
    }
    {
      Recipe rec;
      rec.name = "a1a2-fourth-moment";
      rec.description =
          "(tr x phi)(A1 A1 A2 A2) = 29/27 != 1: entries meeting inside a grid overcount via "
          "phi(c c* c c*) = 2, so orthogonal second moments do not imply freeness.";
      rec.config.experiment = ExperimentKind::nc_moment;
      rec.config.nc_op = "a1a2";
      rec.config.word = {1, 1, 2, 2};
      rec.config.seed = 1;
      rec.config.target = Complex(29.0 / 27.0, 0.0);
      rec.config.tolerance = 1e-12;
      r.push_back(rec);
    }
    {
      Recipe rec;
      rec.name = "covariance-zeta2-opposing";
      rec.description =
          "Expected injective traffic state of the opposing two-vertex double tree for "
          "(W, W^zeta2) at beta = 1/2: the limit is the covariance a + b beta = 3/4 with "
          "(a, b) = (1/2, 1/2).";
      rec.config.experiment = ExperimentKind::traffic_check;
      rec.config.entry = gaussian(0.5);
      rec.config.permutations = {{.family = "identity"}, {.family = "zeta", .param = 2}};
      rec.config.graph = named_graph("opposing_pair");
      rec.config.n = 500;
      rec.config.seed = 20240806;
      rec.config.target = Complex(0.75, 0.0);
      rec.config.tolerance = 0.05;
      r.push_back(rec);
    }
    {
      Recipe rec;
      rec.name = "covariance-zeta2-congruent";
      rec.description =
          "Expected injective traffic state of the congruent two-vertex double tree for "
          "(W, W^zeta2) at beta = 1/2: the limit is the pseudocovariance a beta + b = 3/4.";
      rec.config.experiment = ExperimentKind::traffic_check;
      rec.config.entry = gaussian(0.5);
      rec.config.permutations = {{.family = "identity"}, {.family = "zeta", .param = 2}};
      rec.config.graph = named_graph("congruent_pair");
      rec.config.n = 500;
      rec.config.seed = 20240807;
      rec.config.target = Complex(0.75, 0.0);
      rec.config.tolerance = 0.05;
      r.push_back(rec);
    }
    {
      Recipe rec;
      rec.name = "offgrid-decay";
      rec.description =
          "Expected injective traffic state of the three-vertex single-edge path for the "
          "anti-transpose pair: not a double tree, so the value decays to 0 as N grows "
          "(odd N makes the 1/N rate visible; even N vanishes exactly).";
      rec.config.experiment = ExperimentKind::traffic_check;
      rec.config.entry = gaussian(1.0);
      rec.config.permutations = {{.family = "identity"}, {.family = "anti_transpose"}};
      rec.config.graph = named_graph("path3");
      rec.config.n_list = {21, 41, 81};
      rec.config.seed = 20240808;
      rec.config.trend = true;
      rec.config.tolerance = 0.1;
      r.push_back(rec);
    }
    auto spectrum_recipe = [](const std::string& name, const std::string& description,
                              EntryConfig entry, PermutationSpec perm, std::uint64_t seed) {
      Recipe rec;
      rec.name = name;
      rec.description = description;
      rec.config.experiment = ExperimentKind::spectrum;
      rec.config.entry = std::move(entry);
      rec.config.permutations = {std::move(perm)};
      rec.config.n = 2000;
      rec.config.seed = seed;
      rec.config.tolerance = 0.04;
      return rec;
    };
    r.push_back(spectrum_recipe(
        "spectrum-zeta2",
        "Anticommutator spectrum of (W, W^zeta2) with Gaussian entries at beta = -1: "
        "1/2 + (1/2)beta = 0 makes the pair asymptotically free, so the empirical spectral "
        "distribution approaches the anticommutator law of two free standard semicirculars.",
        gaussian(-1.0), {.family = "zeta", .param = 2}, 20240811));
    r.push_back(spectrum_recipe(
        "spectrum-zeta3",
        "Anticommutator spectrum of (W, W^zeta3) with Gaussian entries at beta = -1/2: "
        "1/3 + (2/3)beta = 0 cancels the dependence exactly as in the zeta2 case.",
        gaussian(-0.5), {.family = "zeta", .param = 3}, 20240812));
    {
      EntryConfig e;
      e.kind = "rademacher_real";
      e.beta = Complex(1.0, 0.0);
      r.push_back(spectrum_recipe(
          "spectrum-anti-transpose",
          "Anticommutator spectrum of (W, W^sigma) for the anti-diagonal transpose with real "
          "Rademacher entries (beta = 1): fixed, transposed and grid points are all o(N^2), so "
          "the pair is asymptotically free for any admissible entry law.",
          e, {.family = "anti_transpose"}, 20240813));
    }
    {
      EntryConfig e;
      e.kind = "rademacher_complex_xix";
      e.beta = Complex(0.0, 1.0);
      r.push_back(spectrum_recipe(
          "spectrum-anti-transpose-complex",
          "Same anti-diagonal transpose with the complex two-point law (beta = i): freeness "
          "holds for strictly complex pseudovariance because the transposed-point count "
          "vanishes.",
          e, {.family = "anti_transpose"}, 20240814));
    }
    {
      Recipe rec;
      rec.name = "eta-stats";
      rec.description =
          "Scan statistics of eta: no fixed points, no transposed points, and ~N^2 entries "
          "moved within their own grid.";
      rec.config.experiment = ExperimentKind::perm_stats;
      rec.config.permutations = {{.family = "eta"}};
      rec.config.n = 1000;
      rec.config.seed = 1;
      r.push_back(rec);
    }
    {
      Recipe rec;
      rec.name = "homogeneity-rho-report";
      rec.description =
          "Condition diagnostics for (identity, rho): the fixed/transposed fractions converge "
          "to 1/2 but the per-row fractions oscillate between 0 and 1, raising the wait flag "
          "for the homogeneity hypotheses.";
      rec.config.experiment = ExperimentKind::condition_report;
      rec.config.entry.beta = Complex(0.0, 0.0);
      rec.config.permutations = {{.family = "identity"}, {.family = "rho"}};
      rec.config.n_list = {100, 200, 400};
      rec.config.seed = 1;
      r.push_back(rec);
    }
    return r;
  }();
  return catalog;
}

inline const Recipe& find_recipe(const std::string& name) {
  for (const auto& rec : recipes())
    if (rec.name == name) return rec;
  throw config_error("unknown recipe: " + name);
}

}  // namespace permwig
