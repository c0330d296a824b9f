#include "permwig/wigner.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "permwig/entry_dist.hpp"
#include "permwig/permutation.hpp"

namespace {

using permwig::Complex;
using permwig::DiagKind;
using permwig::EntryPermutation;
using permwig::EntrySpec;
using permwig::Matrix;
using permwig::McMoment;
using permwig::Word;

double herm_defect(const Matrix& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

TEST_CASE("sampled wigner matrices are Hermitian with the right scale") {
  EntrySpec spec = EntrySpec::rademacher_real().with_diag(DiagKind::rademacher_real, 1.0);
  Matrix w = permwig::sample_wigner(spec, 2, 123);
  const double c = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      CHECK(std::abs(std::abs(w(j, k).real()) - c) < 1e-15);
      CHECK(w(j, k).imag() == 0.0);
    }
  CHECK(herm_defect(w) == 0.0);

  Matrix g = permwig::sample_wigner(EntrySpec::gaussian(Complex(0.3, 0.4)), 50, 7);
  CHECK(herm_defect(g) == 0.0);
  for (int j = 0; j < 50; ++j) CHECK(g(j, j).imag() == 0.0);
}

TEST_CASE("sampling is reproducible and seed-sensitive") {
  EntrySpec spec = EntrySpec::gaussian(Complex(0, 0));
  Matrix a = permwig::sample_wigner(spec, 16, 5);
  Matrix b = permwig::sample_wigner(spec, 16, 5);
  Matrix c = permwig::sample_wigner(spec, 16, 6);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a - c).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("empirical normalized trace moments of a single matrix") {
  EntrySpec spec = EntrySpec::gaussian(Complex(0.5, 0));
  const int n = 200, trials = 200;
  Complex tr1(0, 0);
  double tr2 = 0.0;
  for (int t = 0; t < trials; ++t) {
    Matrix w = permwig::sample_wigner(spec, n, 100 + t);
    tr1 += w.trace() / static_cast<double>(n);
    tr2 += (w * w).trace().real() / static_cast<double>(n);
  }
  tr1 /= trials;
  tr2 /= trials;
  CHECK(std::abs(tr1) < 0.02);       // centered entries
  CHECK(std::abs(tr2 - 1.0) < 0.02); // E tr W^2 = 1 + O(1/N)
}

TEST_CASE("permute_entries trivial cases and Hermiticity") {
  EntrySpec spec = EntrySpec::gaussian(Complex(0.5, 0));
  Matrix w = permwig::sample_wigner(spec, 16, 9);
  Matrix wid = permwig::permute_entries(w, EntryPermutation::identity(16));
  CHECK((wid - w).cwiseAbs().maxCoeff() == 0.0);
  Matrix wt = permwig::permute_entries(w, EntryPermutation::transpose(16));
  CHECK((wt - w.transpose()).cwiseAbs().maxCoeff() == 0.0);
  for (const char* name : {"rho", "eta", "anti_transpose"}) {
    permwig::PermutationSpec ps;
    ps.family = name;
    Matrix wp = permwig::permute_entries(w, ps.build(16));
    INFO(name);
    CHECK(herm_defect(wp) == 0.0);
  }
  Matrix wr = permwig::permute_entries(w, EntryPermutation::random_symmetric(16, 4));
  CHECK(herm_defect(wr) == 0.0);
}

TEST_CASE("permuting twice composes the permutations") {
  EntrySpec spec = EntrySpec::gaussian(Complex(0.2, 0));
  Matrix w = permwig::sample_wigner(spec, 8, 11);
  EntryPermutation sigma = EntryPermutation::rho(8);
  EntryPermutation rho = EntryPermutation::zeta(8, 3);
  Matrix lhs = permwig::permute_entries(permwig::permute_entries(w, sigma), rho);
  Matrix rhs = permwig::permute_entries(w, compose(sigma, rho));
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("permute_entries rejects bad input") {
  EntrySpec spec = EntrySpec::gaussian(Complex(0, 0));
  Matrix w = permwig::sample_wigner(spec, 8, 1);
  CHECK_THROWS_AS(permwig::permute_entries(w, EntryPermutation::identity(9)),
                  std::invalid_argument);
}

TEST_CASE("exact second moment matches the hand expansion") {
  // word (1,1), identity: E tr W^2 = ((N^2 - N) + N v) / N^2
  for (double v : {1.0, 2.5, 0.0}) {
    EntrySpec spec = EntrySpec::gaussian(Complex(0.5, 0)).with_diag(DiagKind::gaussian_real, v);
    const int n = 3;
    std::vector<EntryPermutation> perms = {EntryPermutation::identity(n)};
    Complex got = permwig::trace_moment_exact(spec, perms, Word{1, 1}, n);
    double expected = ((n * n - n) * 1.0 + n * v) / (n * n);
    INFO("v=" << v);
    CHECK(std::abs(got - Complex(expected, 0)) < 1e-13);
  }
}

TEST_CASE("exact transposed second moment matches the hand expansion") {
  // word (1,2) with sigma_2 = transpose: ((N^2-N) beta + N v) / N^2
  const int n = 3;
  const double v = 1.0;
  for (double beta : {0.5, -0.25, 1.0}) {
    EntrySpec spec = EntrySpec::gaussian(Complex(beta, 0)).with_diag(DiagKind::gaussian_real, v);
    std::vector<EntryPermutation> perms = {EntryPermutation::identity(n),
                                           EntryPermutation::transpose(n)};
    Complex got = permwig::trace_moment_exact(spec, perms, Word{1, 2}, n);
    double expected = ((n * n - n) * beta + n * v) / (n * n);
    INFO("beta=" << beta);
    CHECK(std::abs(got - Complex(expected, 0)) < 1e-13);
  }
}

TEST_CASE("mc single-letter words are centered") {
  EntrySpec spec = EntrySpec::gaussian(Complex(0, 0));
  std::vector<EntryPermutation> perms = {EntryPermutation::identity(64)};
  McMoment m = permwig::trace_moment_mc(spec, perms, Word{1}, 64, 400, 17);
  CHECK(std::abs(m.estimate) <= 3.0 * m.std_error + 1e-12);
}

TEST_CASE("mc transpose second moment approaches the pseudovariance") {
  const int n = 300;
  const Complex beta(0.7, 0);
  EntrySpec spec = EntrySpec::gaussian(beta);
  std::vector<EntryPermutation> perms = {EntryPermutation::identity(n),
                                         EntryPermutation::transpose(n)};
  McMoment m = permwig::trace_moment_mc(spec, perms, Word{1, 2}, n, 100, 4242);
  CHECK(std::abs(m.estimate - Complex(beta.real(), 0)) <=
        std::max(3.0 * m.std_error, 5.0 / n));
}

TEST_CASE("mc agrees with the exact oracle on random configurations") {
  // random symmetric tables, random words of length <= 4, N in {3,4}
  permwig::Rng rng = permwig::make_rng(20240809);
  for (int n : {3, 4}) {
    std::vector<EntryPermutation> perms = {
        EntryPermutation::random_symmetric(n, 101 + static_cast<unsigned>(n)),
        EntryPermutation::random_symmetric(n, 202 + static_cast<unsigned>(n))};
    for (Complex beta : {Complex(0, 0), Complex(0.5, 0)}) {
      EntrySpec spec = EntrySpec::gaussian(beta);
      for (int rep = 0; rep < 5; ++rep) {
        int len = 1 + static_cast<int>(rng() % 4);
        Word word(static_cast<std::size_t>(len));
        for (int k = 0; k < len; ++k) word[static_cast<std::size_t>(k)] = 1 + static_cast<int>(rng() % 2);
        Complex exact = permwig::trace_moment_exact(spec, perms, word, n);
        McMoment mc = permwig::trace_moment_mc(spec, perms, word, n, 800,
                                               permwig::derive_seed(7, static_cast<unsigned>(rep)));
        INFO("n=" << n << " len=" << len);
        CHECK(std::abs(mc.estimate - exact) <= 4.0 * mc.std_error + 1e-10);
      }
    }
  }
}

TEST_CASE("exact moments are conjugated by word reversal") {
  const int n = 4;
  EntrySpec spec = EntrySpec::gaussian(Complex(0.3, 0.4));
  std::vector<EntryPermutation> perms = {EntryPermutation::random_symmetric(n, 31),
                                         EntryPermutation::random_symmetric(n, 32)};
  std::vector<Word> words = {{1}, {1, 2}, {2, 1, 1}, {1, 2, 1, 2}, {2, 2, 1}};
  for (const Word& w : words) {
    Word rev(w.rbegin(), w.rend());
    Complex a = permwig::trace_moment_exact(spec, perms, w, n);
    Complex b = permwig::trace_moment_exact(spec, perms, rev, n);
    CHECK(std::abs(a - std::conj(b)) < 1e-12);
  }
}

TEST_CASE("mc and exact validate their inputs") {
  EntrySpec spec = EntrySpec::gaussian(Complex(0, 0));
  std::vector<EntryPermutation> perms = {EntryPermutation::identity(8)};
  CHECK_THROWS_AS(permwig::trace_moment_mc(spec, perms, Word{}, 8, 10, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(permwig::trace_moment_mc(spec, perms, Word{2}, 8, 10, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(permwig::trace_moment_mc(spec, perms, Word{1}, 8, 1, 1),
                  std::invalid_argument);
  // budget: 60^4 > 1e7
  std::vector<EntryPermutation> big = {EntryPermutation::identity(60)};
  CHECK_THROWS_AS(permwig::trace_moment_exact(spec, big, Word{1, 1, 1, 1}, 60),
                  permwig::budget_error);
  CHECK_THROWS_AS(permwig::sample_wigner(spec, 20000, 1), permwig::budget_error);
}

}  // namespace
