#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "spinbath/errors.hpp"
#include "spinbath/single_spin.hpp"
#include "test_support.hpp"

using namespace spinbath;
using namespace spinbath::testing;

namespace {

constexpr cplx I{0.0, 1.0};

double max_gap(const TimeSeries& a, const std::string& ca, const TimeSeries& b, const std::string& cb) {
  return max_abs_diff(a.channel(ca), b.channel(cb));
}

double correlation_gap(const SystemSpec& sys, const BathSpec& bath) {
  const auto ens = build_ensemble(bath, Engine::automatic);
  const auto grid = uniform_grid(10.0, 1000);
  return max_gap(evolve_wc(sys, ens, grid), "px_wc", evolve_woc(sys, ens, grid), "px_woc");
}

}  // namespace

TEST_CASE("shifted Hamiltonians") {
  const SystemSpec sys{4.0, 2.0, 1.0};
  const auto bare = shifted_hamiltonians(sys, BathTerm{});
  CHECK(bare.evolve == qubit_hamiltonian(2.0, 1.0));
  CHECK(bare.prep == qubit_hamiltonian(4.0, 1.0));

  const auto shifted = shifted_hamiltonians(sys, BathTerm{1.0, 0.0, 0.0, 0.0});
  CHECK(shifted.prep(0, 0).real() == doctest::Approx(2.5));  // eps0_n = 5

  const BathTerm term{0.37, 0.0, 0.0, 0.0};
  const auto es = herm_eig(shifted_hamiltonians(sys, term).evolve);
  const double dt = 0.5 * std::sqrt((sys.eps + term.e) * (sys.eps + term.e) + sys.delta0 * sys.delta0);
  CHECK(es.values[0] == doctest::Approx(-dt).epsilon(1e-14));
  CHECK(es.values[1] == doctest::Approx(dt).epsilon(1e-14));
}

TEST_CASE("preparation pulse: unitarity, axis convention, composition") {
  const auto r = prep_pulse_R();
  CHECK(max_abs(r * adjoint(r) - CMat2::identity()) <= 1e-15);
  // Convention fixed here: spin down along z becomes spin up along x.
  CMat2 down;
  down(1, 1) = 1.0;
  const auto p = bloch_from_rho(conjugate_by(r, down));
  CHECK(p.x == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(p.y) <= 1e-15);
  CHECK(std::abs(p.z) <= 1e-15);
  // R R = exp(i pi/2 sigma_y) = i sigma_y
  CHECK(max_abs(r * r - I * pauli_y()) <= 1e-15);
  CHECK(max_abs(r * r - exp_unitary(pauli_y(), -std::numbers::pi / 2)) <= 1e-15);
}

TEST_CASE("uncorrelated initial Bloch vector") {
  const SystemSpec sys{4.0, 2.0, 1.0};
  const auto p = initial_bloch_woc(sys, 1.0);
  const double root = std::sqrt(17.0);
  CHECK(p.x == doctest::Approx(4.0 / root * std::tanh(root / 2)).epsilon(1e-15));
  CHECK(p.x == doctest::Approx(0.93922).epsilon(1e-5));
  CHECK(p.y == 0.0);
  CHECK(p.z == doctest::Approx(-1.0 / root * std::tanh(root / 2)).epsilon(1e-15));
  CHECK(p.z == doctest::Approx(-0.2348).epsilon(1e-3));

  const auto op = prepared_bloch_operator(4.0, 1.0, 1.0);
  CHECK(std::abs(op.x - p.x) <= 1e-12);
  CHECK(std::abs(op.y - p.y) <= 1e-12);
  CHECK(std::abs(op.z - p.z) <= 1e-12);

  // beta eps0 >> 1 with small tunneling: close to +x.
  const auto cold = initial_bloch_woc(SystemSpec{40.0, 2.0, 0.01}, 10.0);
  CHECK(cold.x == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(cold.z) <= 1e-3);
  // Infinite temperature limit.
  CHECK(initial_bloch_woc(sys, 1e-8).norm() <= 1e-7);
  // Degenerate gap: eps0 = delta0 = 0.
  CHECK(initial_bloch_woc(SystemSpec{0.0, 1.0, 0.0}, 2.0).norm() == 0.0);
}

TEST_CASE("correlated initial Bloch vector") {
  const SystemSpec sys{4.0, 2.0, 1.0};
  const auto uncoupled = build_ensemble(uniform_bath(12, 0.0, 1.0, 0.0, 1.0), Engine::automatic);
  const auto wc = initial_bloch_wc(sys, uncoupled);
  const auto woc = initial_bloch_woc(sys, 1.0);
  CHECK(std::abs(wc.x - woc.x) <= 1e-15);
  CHECK(std::abs(wc.z - woc.z) <= 1e-15);

  const auto weak = build_ensemble(uniform_bath(50, 0.01, 1.0, 0.0, 1.0), Engine::automatic);
  const auto pw = initial_bloch_wc(sys, weak);
  // Reference values from a separate binomial-sum evaluation.
  CHECK(pw.x - woc.x == doctest::Approx(-0.01103366).epsilon(1e-6));
  CHECK(pw.z - woc.z == doctest::Approx(-0.01140172).epsilon(1e-6));

  // One bath spin, g = 10: two terms written out by hand.
  BathSpec one = uniform_bath(1, 10.0, 1.0, 0.0, 1.0);
  const auto ens = enumerate_bruteforce(one);
  double num_x = 0.0, num_z = 0.0, z = 0.0;
  for (int s : {1, -1}) {
    const double e0n = 4.0 + 10.0 * s;
    const double d = 0.5 * std::sqrt(e0n * e0n + 1.0);
    const double kn = std::exp(-0.5 * s);
    const double an = 2 * std::cosh(d);
    num_x += kn * std::sinh(d) / d * e0n;
    num_z += kn * std::sinh(d) / d * -1.0;
    z += an * kn;
  }
  const auto p1 = initial_bloch_wc(sys, ens);
  CHECK(p1.x == doctest::Approx(num_x / z).epsilon(1e-13));
  CHECK(p1.z == doctest::Approx(num_z / z).epsilon(1e-13));
  // The eps0 + 10 sector dominates.
  CHECK(p1.x == doctest::Approx(0.90124774).epsilon(1e-8));
  CHECK(p1.z == doctest::Approx(-0.07573833).epsilon(1e-7));

  CHECK_THROWS_AS(initial_bloch_wc(sys, BathEnsemble{}), EmptyEnsemble);
}

TEST_CASE("propagators: identity at t = 0 and element structure") {
  const SystemSpec sys{4.0, 2.0, 1.0};
  const auto ens = build_ensemble(random_bath(8, 1.0, Boundary::periodic), Engine::bruteforce);
  for (const auto& m : {propagator_woc(sys, ens, 0.0), propagator_wc(sys, ens, 0.0)})
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(std::abs(m(i, j) - (i == j ? 1.0 : 0.0)) <= 1e-10);

  for (double t : {0.3, 2.0, 7.5})
    for (const auto& m : {propagator_woc(sys, ens, t), propagator_wc(sys, ens, t)}) {
      CHECK(m(0, 1) == -m(1, 0));
      CHECK(m(1, 2) == -m(2, 1));
      CHECK(m(0, 2) == m(2, 0));
      for (double v : m.m) CHECK(std::abs(v) <= 1.0 + 1e-12);
    }

  std::vector<double> lw;
  for (const auto& t : ens.terms) lw.push_back(log_weight(t, ens.beta));
  CHECK(propagator_woc(sys, ens, 1.0).log_z == doctest::Approx(logsumexp(lw)));
}

TEST_CASE("propagator of an uncoupled bath is the bare rotation") {
  const SystemSpec sys{4.0, 2.0, 1.0};
  const auto ens = enumerate_bruteforce(uniform_bath(1, 0.0, 1.0, 0.0, 1.0));
  const auto p0 = BlochVector{0.3, -0.2, 0.5};
  for (double t : {0.0, 0.4, 1.9, 6.0}) {
    const auto m = propagator_woc(sys, ens, t);
    const auto u = exp_unitary(qubit_hamiltonian(sys.eps, sys.delta0), t);
    const auto expected = bloch_from_rho(conjugate_by(u, rho_from_bloch(p0)));
    const auto got = m.apply(p0);
    CHECK(std::abs(got.x - expected.x) <= 1e-12);
    CHECK(std::abs(got.y - expected.y) <= 1e-12);
    CHECK(std::abs(got.z - expected.z) <= 1e-12);
  }
}

TEST_CASE("pure dephasing conserves p_z") {
  const SystemSpec sys{4.0, 2.0, 0.0};
  const auto ens = build_ensemble(uniform_bath(20, 0.3, 1.0, 0.0, 1.0), Engine::automatic);
  const auto grid = uniform_grid(10.0, 400);
  const auto woc = evolve_woc(sys, ens, grid);
  const auto wc = evolve_wc(sys, ens, grid);
  for (const auto* ch : {&woc.channel("pz_woc"), &wc.channel("pz_wc")})
    for (double v : *ch) CHECK(std::abs(v - ch->front()) <= 1e-12);
}

TEST_CASE("a single bath class evolves periodically") {
  const SystemSpec sys{4.0, 2.0, 1.0};
  BathEnsemble ens;
  ens.terms = {{0.4, 0.0, 0.0, 0.0}};
  const double dt = 0.5 * std::sqrt(2.4 * 2.4 + 1.0);
  const double period = std::numbers::pi / dt;
  const std::vector<double> grid{0.3, 0.3 + period, 0.3 + 2 * period};
  const auto ts = evolve_woc(sys, ens, grid);
  for (const char* c : {"px_woc", "py_woc", "pz_woc"}) {
    CHECK(ts.channel(c)[1] == doctest::Approx(ts.channel(c)[0]).epsilon(1e-12).scale(1.0));
    CHECK(ts.channel(c)[2] == doctest::Approx(ts.channel(c)[0]).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("analytic paths equal the operator oracle on heterogeneous baths") {
  const SystemSpec sys{4.0, 2.0, 1.0};
  const auto grid = uniform_grid(10.0, 60);
  for (auto b : {Boundary::periodic, Boundary::open}) {
    const auto spec = random_bath(10, 1.0, b);
    const auto ens = enumerate_bruteforce(spec);
    const auto woc = evolve_woc(sys, ens, grid);
    const auto wc = evolve_wc(sys, ens, grid);
    const auto ref_woc = evolve_oracle(sys, spec, grid, false);
    const auto ref_wc = evolve_oracle(sys, spec, grid, true);
    for (const char* c : {"px", "py", "pz"}) {
      CHECK(max_gap(woc, std::string(c) + "_woc", ref_woc, c) <= 1e-10);
      CHECK(max_gap(wc, std::string(c) + "_wc", ref_wc, c) <= 1e-10);
    }
  }
}

TEST_CASE("oracle: t = 0 value, purity bound, cap") {
  const SystemSpec sys{4.0, 2.0, 1.0};
  const auto spec = random_bath(7, 3.0, Boundary::open);
  const auto grid = uniform_grid(5.0, 40);
  const auto woc = evolve_oracle(sys, spec, grid, false);
  const auto wc = evolve_oracle(sys, spec, grid, true);
  const auto p0 = initial_bloch_woc(sys, spec.beta);
  CHECK(std::abs(woc.channel("px")[0] - p0.x) <= 1e-12);
  CHECK(std::abs(woc.channel("pz")[0] - p0.z) <= 1e-12);
  const auto pwc = initial_bloch_wc(sys, enumerate_bruteforce(spec));
  CHECK(std::abs(wc.channel("px")[0] - pwc.x) <= 1e-12);
  CHECK(std::abs(wc.channel("pz")[0] - pwc.z) <= 1e-12);
  for (const auto* ts : {&woc, &wc})
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double x = ts->channel("px")[k], y = ts->channel("py")[k], z = ts->channel("pz")[k];
      CHECK(x * x + y * y + z * z <= 1.0 + 1e-9);
    }
  CHECK_THROWS_AS(evolve_oracle(sys, random_bath(17, 1.0, Boundary::open), grid, false), CapExceeded);
}

TEST_CASE("correlated and uncorrelated series coincide without coupling") {
  const SystemSpec sys{4.0, 2.0, 1.0};
  const auto grid = uniform_grid(10.0, 300);
  double previous = INFINITY;
  for (double g : {0.05, 0.01, 0.001, 0.0}) {
    const auto ens = build_ensemble(uniform_bath(50, g, 1.0, 0.0, 1.0), Engine::automatic);
    const double gap = max_gap(evolve_wc(sys, ens, grid), "px_wc", evolve_woc(sys, ens, grid), "px_woc");
    CHECK(gap < previous);
    previous = gap;
  }
  CHECK(previous <= 1e-12);
}

TEST_CASE("compact correlated channel agrees at t = 0 and is reported separately") {
  const SystemSpec sys{4.0, 2.0, 1.0};
  const auto ens = enumerate_bruteforce(uniform_bath(1, 10.0, 1.0, 0.0, 1.0));
  const auto ts = evolve_wc(sys, ens, uniform_grid(10.0, 200));
  CHECK(ts.channel("px_wc_compact")[0] == doctest::Approx(ts.channel("px_wc")[0]).epsilon(1e-12));
  CHECK(max_gap(ts, "px_wc_compact", ts, "px_wc") > 1e-3);
}

TEST_CASE("correlation effect grows with coupling and shrinks with temperature") {
  const SystemSpec sys{4.0, 2.0, 1.0};
  const double d1 = correlation_gap(sys, uniform_bath(50, 0.01, 1.0, 0.0, 1.0));
  const double d2 = correlation_gap(sys, uniform_bath(50, 0.05, 1.0, 0.0, 1.0));
  const double d3 = correlation_gap(sys, uniform_bath(50, 0.1, 1.0, 0.0, 1.0));
  CHECK(d1 < d2);
  CHECK(d2 < d3);
  const double hot = correlation_gap(sys, uniform_bath(50, 0.05, 1.0, 0.0, 0.1));
  CHECK(hot < d2);
}

TEST_CASE("grid helpers") {
  const auto g = uniform_grid(10.0, 1000);
  CHECK(g.size() == 1000);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 10.0);
  CHECK_THROWS_AS(uniform_grid(10.0, 1), ValidationError);
  CHECK_THROWS_AS(uniform_grid(0.0, 10), ValidationError);
  const SystemSpec sys;
  const auto ens = build_ensemble(uniform_bath(3, 0.1, 1.0, 0.0, 1.0), Engine::automatic);
  const std::vector<double> bad{0.0, 1.0, 1.0};
  CHECK_THROWS_AS(evolve_woc(sys, ens, bad), ValidationError);
  CHECK_THROWS_AS(validate(SystemSpec{1.0, 1.0, -0.5}), ValidationError);
}
