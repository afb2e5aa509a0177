#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <numbers>

#include "spinbath/bath.hpp"
#include "spinbath/errors.hpp"
#include "spinbath/kernels.hpp"
#include "test_support.hpp"

using namespace spinbath;
using namespace spinbath::testing;

namespace {

// (m, s) class sizes by direct enumeration.
std::map<std::pair<int, int>, std::uint64_t> enumerate_classes(int n, Boundary b) {
  const auto spec = uniform_bath(n, 1.0, 1.0, 1.0, 1.0, b);
  std::map<std::pair<int, int>, std::uint64_t> out;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    const auto c = evaluate_config(spec, bits);
    ++out[{c.m, c.s}];
  }
  return out;
}

std::map<std::tuple<double, double, double>, double> grouped(const BathEnsemble& ens) {
  std::map<std::tuple<double, double, double>, double> g;
  for (const auto& t : ens.terms) g[{t.e, t.eps, t.lam}] += std::exp(t.log_mult);
  return g;
}

double log_count(const BathEnsemble& ens) {
  std::vector<double> l;
  for (const auto& t : ens.terms) l.push_back(t.log_mult);
  return logsumexp(l);
}

}  // namespace

TEST_CASE("brute force: single spin and the all-up pair") {
  BathSpec one = uniform_bath(1, 0.3, 1.0, 0.0, 1.0, Boundary::open);
  const auto ens = enumerate_bruteforce(one);
  REQUIRE(ens.terms.size() == 2);
  CHECK(ens.terms[0].e == 0.3);
  CHECK(ens.terms[0].eps == 1.0);
  CHECK(ens.terms[0].lam == 0.0);
  CHECK(ens.terms[1].e == -0.3);
  CHECK(ens.terms[1].eps == -1.0);
  CHECK(ens.terms[1].lam == 0.0);

  BathSpec two;
  two.n_spins = 2;
  two.couplings = {0.2, 0.7};
  two.splittings = {1.1, 0.4};
  two.ising = {0.3, 0.05};
  const auto pair = enumerate_bruteforce(two);
  CHECK(pair.terms[0].e == doctest::Approx(0.9));
  CHECK(pair.terms[0].eps == doctest::Approx(1.5));
  CHECK(pair.terms[0].lam == doctest::Approx(0.35));
  for (const auto& t : pair.terms) CHECK(t.log_mult == 0.0);
}

TEST_CASE("brute force: N = 4 ring multiplicities") {
  const auto ens = enumerate_bruteforce(uniform_bath(4, 1.0, 1.0, 1.0, 1.0));
  CHECK(ens.terms.size() == 16);
  std::map<std::pair<double, double>, int> count;
  for (const auto& t : ens.terms) ++count[{t.e, t.lam}];
  CHECK(count[{0.0, 0.0}] == 4);
  CHECK(count[{0.0, -4.0}] == 2);
}

TEST_CASE("brute force cap") {
  CHECK_THROWS_AS(enumerate_bruteforce(uniform_bath(25, 0.1, 1.0, 0.0, 1.0)), CapExceeded);
  CHECK_THROWS_AS(enumerate_bruteforce(uniform_bath(9, 0.1, 1.0, 0.0, 1.0), 8), CapExceeded);
  CHECK_NOTHROW(enumerate_bruteforce(uniform_bath(8, 0.1, 1.0, 0.0, 1.0), 8));
}

TEST_CASE("validation of bath specs") {
  auto s = uniform_bath(3, 0.1, 1.0, 0.2, 1.0);
  s.couplings.pop_back();
  CHECK_THROWS_WITH_AS(validate(s), doctest::Contains("bath.couplings"), ValidationError);
  s = uniform_bath(3, 0.1, 1.0, 0.2, 0.0);
  CHECK_THROWS_AS(validate(s), ValidationError);
  s.beta = INFINITY;
  CHECK_THROWS_AS(validate(s), ValidationError);
  s = uniform_bath(3, 0.1, 1.0, 0.2, 1.0, Boundary::open);
  const auto notes = validate(s);
  REQUIRE(notes.size() == 1);
  CHECK(notes[0].find("bath.ising[2]") != std::string::npos);
  s.ising[2] = 0.0;
  CHECK(validate(s).empty());
}

TEST_CASE("free collapse: binomial classes") {
  const auto ens = collapse_uniform_free(uniform_bath(3, 0.1, 1.0, 0.0, 1.0));
  CHECK(ens.source == EnsembleSource::uniform_free);
  const auto g = grouped(ens);
  CHECK(g.size() == 4);
  CHECK(g.at({0.1 * 3, 3.0, 0.0}) == doctest::Approx(1.0));
  CHECK(g.at({0.1 * 1, 1.0, 0.0}) == doctest::Approx(3.0));
  CHECK(g.at({0.1 * -1, -1.0, 0.0}) == doctest::Approx(3.0));
  CHECK(g.at({0.1 * -3, -3.0, 0.0}) == doctest::Approx(1.0));

  const auto two = collapse_uniform_free(uniform_bath(2, 1.0, 1.0, 0.0, 1.0));
  std::map<double, double> by_e;
  for (const auto& t : two.terms) by_e[t.e] = t.log_mult;
  CHECK(by_e.at(2.0) == doctest::Approx(0.0));
  CHECK(by_e.at(0.0) == doctest::Approx(std::numbers::ln2));
  CHECK(by_e.at(-2.0) == doctest::Approx(0.0));

  CHECK_THROWS_AS(collapse_uniform_free(uniform_bath(3, 0.1, 1.0, 0.2, 1.0)), NotUniform);
  auto hetero = uniform_bath(3, 0.1, 1.0, 0.0, 1.0);
  hetero.couplings[1] = 0.2;
  CHECK_THROWS_AS(collapse_uniform_free(hetero), NotUniform);
}

TEST_CASE("free collapse matches brute force at N = 20") {
  const auto spec = uniform_bath(20, 0.13, 0.9, 0.0, 0.7);
  const auto brute = enumerate_bruteforce(spec);
  const auto collapsed = collapse_uniform_free(spec);
  const auto fs = {
      +[](double, double, double) { return 1.0; },
      +[](double e, double, double) { return e; },
      +[](double e, double, double) { return e * e; },
      +[](double e, double, double) { return std::cos(1.7 * e); },
      +[](double e, double eps, double) { return std::sin(e) * eps; },
  };
  for (auto f : fs) CHECK(std::abs(ensemble_average(brute, f) - ensemble_average(collapsed, f)) <= 1e-10);
}

TEST_CASE("Ising collapse: small rings") {
  const auto ring4 = collapse_uniform_ising(uniform_bath(4, 1.0, 1.0, 1.0, 1.0));
  CHECK(ring4.source == EnsembleSource::uniform_ising);
  const auto g = grouped(ring4);
  CHECK(g.at({0.0, 0.0, 0.0}) == doctest::Approx(4.0));
  CHECK(g.at({0.0, 0.0, -4.0}) == doctest::Approx(2.0));

  const auto ring2 = collapse_uniform_ising(uniform_bath(2, 1.0, 1.0, 1.0, 1.0));
  CHECK(grouped(ring2).at({0.0, 0.0, -2.0}) == doctest::Approx(2.0));

  CHECK_THROWS_AS(collapse_uniform_ising(uniform_bath(4, 1.0, 1.0, 0.0, 1.0)), NotUniform);
}

TEST_CASE("exact DP class counts equal enumeration for N <= 16") {
  for (auto b : {Boundary::periodic, Boundary::open})
    for (int n = 1; n <= 16; ++n) {
      const auto expected = enumerate_classes(n, b);
      const auto dp = ising_class_counts_exact(n, b);
      REQUIRE(dp.size() == expected.size());
      for (const auto& [key, count] : expected) CHECK(dp.at(key) == count);
    }
}

TEST_CASE("log-space DP beyond the exact range conserves the configuration count") {
  for (auto b : {Boundary::periodic, Boundary::open}) {
    const auto logs = ising_class_log_counts(250, b);
    std::vector<double> l;
    for (const auto& [key, v] : logs) l.push_back(v);
    CHECK(logsumexp(l) == doctest::Approx(250 * std::numbers::ln2).epsilon(1e-12));
    // The all-aligned classes each hold one configuration.
    const int bonds = b == Boundary::periodic ? 250 : 249;
    CHECK(std::abs(logs.at({250, bonds})) <= 1e-9);
    CHECK(std::abs(logs.at({-250, bonds})) <= 1e-9);
  }
  // Continuity across the exact / float switch: N = 65 periodic vs a
  // closed form, C(N, 1) configurations with one down spin, all with s = N - 4.
  const auto logs65 = ising_class_log_counts(65, Boundary::periodic);
  CHECK(logs65.at({63, 61}) == doctest::Approx(std::log(65.0)).epsilon(1e-13));
}

TEST_CASE("Ising collapse matches brute force at N = 12 and N = 14") {
  for (auto b : {Boundary::periodic, Boundary::open})
    for (int n : {12, 14}) {
      const auto spec = uniform_bath(n, 0.21, 0.8, 0.3, 1.3, b);
      const auto brute = enumerate_bruteforce(spec);
      const auto collapsed = collapse_uniform_ising(spec);
      for (double t : {0.0, 0.5, 3.0}) {
        const auto f = [t](double e, double, double lam) { return std::cos(e * t) + lam * e; };
        CHECK(std::abs(ensemble_average(brute, f) - ensemble_average(collapsed, f)) <= 1e-10);
      }
      CHECK(std::abs(ensemble_average(brute, [](double e, double, double) { return e * e; }) -
                     ensemble_average(collapsed, [](double e, double, double) { return e * e; })) <= 1e-10);
    }
}

TEST_CASE("configuration count is conserved for every source") {
  const double tol = 1e-9;
  CHECK(log_count(enumerate_bruteforce(uniform_bath(10, 0.1, 1.0, 0.2, 1.0))) ==
        doctest::Approx(10 * std::numbers::ln2).epsilon(tol));
  for (int n : {1, 2, 7, 50, 250}) {
    const auto free = collapse_uniform_free(uniform_bath(n, 0.1, 1.0, 0.0, 1.0));
    CHECK(std::abs(log_count(free) - n * std::numbers::ln2) <= tol);
    CHECK(free.total_log_count == doctest::Approx(n * std::numbers::ln2));
    const auto ising = collapse_uniform_ising(uniform_bath(n, 0.1, 1.0, 0.2, 1.0));
    CHECK(std::abs(log_count(ising) - n * std::numbers::ln2) <= tol);
    for (const auto& t : ising.terms) CHECK(t.log_mult >= 0.0);
  }
}

TEST_CASE("collapsed triples are pairwise distinct, even when g = eps = 0") {
  const auto ens = collapse_uniform_free(uniform_bath(6, 0.0, 0.0, 0.0, 1.0));
  CHECK(ens.terms.size() == 1);
  CHECK(ens.terms[0].log_mult == doctest::Approx(6 * std::numbers::ln2));
  const auto ising = collapse_uniform_ising(uniform_bath(8, 0.0, 0.0, 0.4, 1.0));
  CHECK(grouped(ising).size() == ising.terms.size());
}

TEST_CASE("e -> -e symmetry without splittings or bonds") {
  const auto ens = collapse_uniform_free(uniform_bath(9, 0.3, 0.0, 0.0, 2.0));
  std::map<double, double> w;
  for (const auto& t : ens.terms) w[t.e] = log_weight(t, ens.beta);
  for (const auto& [e, lw] : w) CHECK(w.at(-e) == doctest::Approx(lw));
}

TEST_CASE("boundary: flipping the first spin of the all-up chain") {
  for (int n : {3, 5, 8}) {
    auto open = uniform_bath(n, 0.0, 0.0, 1.0, 1.0, Boundary::open);
    CHECK(evaluate_config(open, 1).s - evaluate_config(open, 0).s == -2);
    const auto open_ens = enumerate_bruteforce(open);
    CHECK(open_ens.terms[1].lam - open_ens.terms[0].lam == doctest::Approx(-2.0));
    auto ring = uniform_bath(n, 0.0, 0.0, 1.0, 1.0, Boundary::periodic);
    const auto ring_ens = enumerate_bruteforce(ring);
    CHECK(ring_ens.terms[1].lam - ring_ens.terms[0].lam == doctest::Approx(-4.0));
  }
}

TEST_CASE("log_weight and partition function") {
  CHECK(log_weight({0.7, 0.0, 0.0, 0.0}, 3.0) == 0.0);
  CHECK(log_weight({0.1, 2.0, 0.5, 0.0}, 1.0) == doctest::Approx(-1.5));

  const auto ens = collapse_uniform_free(uniform_bath(10, 0.2, 1.0, 0.0, 1.0));
  std::vector<double> lw;
  for (const auto& t : ens.terms) lw.push_back(log_weight(t, ens.beta));
  CHECK(logsumexp(lw) == doctest::Approx(10 * std::log(2 * std::cosh(0.5))).epsilon(1e-13));

  const auto brute = enumerate_bruteforce(uniform_bath(10, 0.2, 1.0, 0.0, 1.0));
  std::vector<double> lb;
  for (const auto& t : brute.terms) lb.push_back(log_weight(t, brute.beta));
  CHECK(logsumexp(lb) == doctest::Approx(10 * std::log(2 * std::cosh(0.5))).epsilon(1e-13));
}

TEST_CASE("random uniform specs: collapsed and brute-force weighted sums agree") {
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(uniform(0, 12.999));
    const double g = uniform(-1, 1), eps = uniform(0, 2), beta = uniform(0.1, 3);
    const bool ising = trial % 2 == 1;
    const auto b = trial % 4 < 2 ? Boundary::periodic : Boundary::open;
    const auto spec = uniform_bath(n, g, eps, ising ? uniform(0.05, 0.5) : 0.0, beta, b);
    const auto brute = enumerate_bruteforce(spec);
    const auto coll = build_ensemble(spec, Engine::collapsed);
    CHECK(coll.source == (ising ? EnsembleSource::uniform_ising : EnsembleSource::uniform_free));
    const double t = uniform(0, 10);
    // A full Bloch propagator element as f: R_11 of the rotation with bias 2 + e.
    const auto r11 = [t](double e, double, double) { return rotation_matrix(2.0 + e, 1.0, t)[0]; };
    const auto r13 = [t](double e, double, double) { return rotation_matrix(2.0 + e, 1.0, t)[2]; };
    for (auto f : {+[](double, double, double) { return 1.0; }, +[](double e, double, double) { return e; },
                   +[](double e, double, double) { return e * e; }}) {
      const double a = ensemble_average(brute, f), c = ensemble_average(coll, f);
      CHECK(std::abs(a - c) <= 1e-10 * std::max(1.0, std::abs(a)));
    }
    CHECK(std::abs(ensemble_average(brute, r11) - ensemble_average(coll, r11)) <= 1e-10);
    CHECK(std::abs(ensemble_average(brute, r13) - ensemble_average(coll, r13)) <= 1e-10);
    CHECK(std::abs(brute_average(spec, r11) - ensemble_average(coll, r11)) <= 1e-10);
  }
}

TEST_CASE("engine selection") {
  CHECK(build_ensemble(uniform_bath(30, 0.1, 1.0, 0.0, 1.0), Engine::automatic).source ==
        EnsembleSource::uniform_free);
  CHECK(build_ensemble(uniform_bath(30, 0.1, 1.0, 0.2, 1.0), Engine::automatic).source ==
        EnsembleSource::uniform_ising);
  auto hetero = uniform_bath(6, 0.1, 1.0, 0.0, 1.0);
  hetero.couplings[2] = 0.3;
  CHECK(build_ensemble(hetero, Engine::automatic).source == EnsembleSource::bruteforce);
  CHECK_THROWS_AS(build_ensemble(hetero, Engine::collapsed), NotUniform);
  auto big = uniform_bath(30, 0.1, 1.0, 0.0, 1.0);
  big.couplings[0] = 0.2;
  CHECK_THROWS_AS(build_ensemble(big, Engine::automatic), CapExceeded);
  // The unused last bond of an open chain does not spoil uniformity.
  auto open = uniform_bath(6, 0.1, 1.0, 0.2, 1.0, Boundary::open);
  open.ising[5] = 9.0;
  CHECK(is_uniform_ising(open));
}
