#include "spinbath/single_spin.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>

#include "spinbath/errors.hpp"

namespace spinbath {

namespace {

constexpr cplx I{0.0, 1.0};

double half_gap(double bias, double delta) { return 0.5 * std::sqrt(bias * bias + delta * delta); }

// ln(2 cosh x), stable for large |x|.
double log_2cosh(double x) {
  const double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a));
}

std::vector<double> woc_log_weights(const BathEnsemble& ens) {
  std::vector<double> lw;
  lw.reserve(ens.terms.size());
  for (const auto& t : ens.terms) lw.push_back(log_weight(t, ens.beta));
  return lw;
}

// k_n A_n with A_n = Tr exp(-beta H_S0,n) = 2 cosh(beta d_n).
std::vector<double> wc_log_weights(const SystemSpec& sys, const BathEnsemble& ens) {
  std::vector<double> lw;
  lw.reserve(ens.terms.size());
  for (const auto& t : ens.terms)
    lw.push_back(log_weight(t, ens.beta) + log_2cosh(ens.beta * half_gap(sys.eps0 + t.e, sys.delta0)));
  return lw;
}

void require_nonempty(const BathEnsemble& ens) {
  if (ens.terms.empty()) throw EmptyEnsemble("bath ensemble has no terms");
}

std::vector<RotationTerm> rotation_terms(const SystemSpec& sys, const BathEnsemble& ens,
                                         const std::vector<double>& weights) {
  std::vector<RotationTerm> terms(ens.terms.size());
  for (std::size_t n = 0; n < terms.size(); ++n)
    terms[n] = {weights[n], sys.eps + ens.terms[n].e, sys.delta0, {}};
  return terms;
}

PropagatorMatrix propagator_from(const SystemSpec& sys, const BathEnsemble& ens, const std::vector<double>& lw,
                                 double t) {
  const auto terms = rotation_terms(sys, ens, normalized_weights(lw));
  const double grid[1] = {t};
  PropagatorMatrix pm;
  pm.m = propagator_series(terms, grid, Exec::serial)[0];
  pm.log_z = logsumexp(lw);
  return pm;
}

void split_bloch(const std::vector<BlochVector>& ps, TimeSeries& ts, const std::string& suffix) {
  std::vector<double> x(ps.size()), y(ps.size()), z(ps.size());
  for (std::size_t k = 0; k < ps.size(); ++k) {
    x[k] = ps[k].x;
    y[k] = ps[k].y;
    z[k] = ps[k].z;
  }
  ts.add("px" + suffix, std::move(x));
  ts.add("py" + suffix, std::move(y));
  ts.add("pz" + suffix, std::move(z));
}

void require_grid(std::span<const double> grid) {
  if (grid.empty()) throw ValidationError("grid", "time grid is empty");
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (!(grid[k] > grid[k - 1])) throw ValidationError("grid", "time grid must be strictly increasing");
}

}  // namespace

void validate(const SystemSpec& sys) {
  if (!std::isfinite(sys.eps0)) throw ValidationError("system.eps0", "must be finite");
  if (!std::isfinite(sys.eps)) throw ValidationError("system.eps", "must be finite");
  if (!std::isfinite(sys.delta0) || sys.delta0 < 0.0)
    throw ValidationError("system.delta0", "must be finite and nonnegative");
}

CMat2 qubit_hamiltonian(double bias, double delta) {
  return (0.5 * bias) * pauli_z() + (0.5 * delta) * pauli_x();
}

ShiftedHamiltonians shifted_hamiltonians(const SystemSpec& sys, const BathTerm& term) {
  return {qubit_hamiltonian(sys.eps0 + term.e, sys.delta0), qubit_hamiltonian(sys.eps + term.e, sys.delta0)};
}

CMat2 prep_pulse_R() {
  const double c = std::cos(std::numbers::pi / 4.0);
  const double s = std::sin(std::numbers::pi / 4.0);
  return c * CMat2::identity() + (I * s) * pauli_y();
}

BlochVector prepared_bloch_operator(double bias, double delta, double beta) {
  const auto g = gibbs_state(qubit_hamiltonian(bias, delta), beta);
  return bloch_from_rho(conjugate_by(prep_pulse_R(), g.rho));
}

BlochVector prepared_bloch_closed_form(double bias, double delta, double beta) {
  const double d = half_gap(bias, delta);
  // sinh(beta d) / (Z d) with Z = 2 cosh(beta d); tends to beta/2 as d -> 0.
  const double f = d > 0.0 ? std::tanh(beta * d) / (2.0 * d) : 0.5 * beta;
  return {f * bias, 0.0, -f * delta};
}

BlochVector initial_bloch_woc(const SystemSpec& sys, double beta) {
  return prepared_bloch_closed_form(sys.eps0, sys.delta0, beta);
}

BlochVector initial_bloch_wc(const SystemSpec& sys, const BathEnsemble& ens) {
  require_nonempty(ens);
  const auto w = normalized_weights(wc_log_weights(sys, ens));
  BlochVector p;
  for (std::size_t n = 0; n < w.size(); ++n) {
    const auto pn = prepared_bloch_closed_form(sys.eps0 + ens.terms[n].e, sys.delta0, ens.beta);
    p.x += w[n] * pn.x;
    p.y += w[n] * pn.y;
    p.z += w[n] * pn.z;
  }
  return p;
}

BlochVector PropagatorMatrix::apply(const BlochVector& p) const {
  return {m[0] * p.x + m[1] * p.y + m[2] * p.z, m[3] * p.x + m[4] * p.y + m[5] * p.z,
          m[6] * p.x + m[7] * p.y + m[8] * p.z};
}

PropagatorMatrix propagator_woc(const SystemSpec& sys, const BathEnsemble& ens, double t) {
  require_nonempty(ens);
  return propagator_from(sys, ens, woc_log_weights(ens), t);
}

PropagatorMatrix propagator_wc(const SystemSpec& sys, const BathEnsemble& ens, double t) {
  require_nonempty(ens);
  return propagator_from(sys, ens, wc_log_weights(sys, ens), t);
}

const std::vector<double>& TimeSeries::channel(const std::string& name) const {
  for (const auto& c : channels)
    if (c.name == name) return c.values;
  throw Error("no channel named " + name);
}

void TimeSeries::add(std::string name, std::vector<double> values) {
  if (values.size() != grid.size()) throw Error("channel " + name + " does not match the grid length");
  channels.push_back({std::move(name), std::move(values)});
}

std::vector<double> uniform_grid(double t_max, int points) {
  if (points < 2) throw ValidationError("grid.points", "must be at least 2");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ValidationError("grid.t_max", "must be positive and finite");
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) g[k] = t_max * k / (points - 1);
  return g;
}

TimeSeries evolve_woc(const SystemSpec& sys, const BathEnsemble& ens, std::span<const double> grid, Exec exec) {
  require_nonempty(ens);
  require_grid(grid);
  const auto lw = woc_log_weights(ens);
  const auto terms = rotation_terms(sys, ens, normalized_weights(lw));
  const auto p0 = initial_bloch_woc(sys, ens.beta);

  const auto props = propagator_series(terms, grid, exec);
  std::vector<BlochVector> ps(props.size());
  for (std::size_t k = 0; k < props.size(); ++k) ps[k] = PropagatorMatrix{props[k], 0.0}.apply(p0);

  TimeSeries ts;
  ts.grid.assign(grid.begin(), grid.end());
  split_bloch(ps, ts, "_woc");
  ts.meta["log_z_e"] = logsumexp(lw);
  return ts;
}

TimeSeries evolve_wc(const SystemSpec& sys, const BathEnsemble& ens, std::span<const double> grid, Exec exec) {
  require_nonempty(ens);
  require_grid(grid);
  const auto lw = wc_log_weights(sys, ens);
  auto terms = rotation_terms(sys, ens, normalized_weights(lw));
  for (std::size_t n = 0; n < terms.size(); ++n)
    terms[n].p0 = prepared_bloch_closed_form(sys.eps0 + ens.terms[n].e, sys.delta0, ens.beta);

  TimeSeries ts;
  ts.grid.assign(grid.begin(), grid.end());
  split_bloch(bloch_series(terms, grid, exec), ts, "_wc");

  // Summed propagator applied to the summed initial vector.
  const auto p_wc = initial_bloch_wc(sys, ens);
  const auto props = propagator_series(terms, grid, exec);
  std::vector<BlochVector> compact(props.size());
  for (std::size_t k = 0; k < props.size(); ++k) compact[k] = PropagatorMatrix{props[k], 0.0}.apply(p_wc);
  split_bloch(compact, ts, "_wc_compact");
  ts.meta["log_z_tot"] = logsumexp(lw);
  return ts;
}

TimeSeries evolve_oracle(const SystemSpec& sys, const BathSpec& spec, std::span<const double> grid, bool correlated,
                         int cap) {
  validate(spec);
  require_grid(grid);
  const int n = spec.n_spins;
  if (n > cap) throw CapExceeded("operator reference path is limited to " + std::to_string(cap) + " bath spins");
  const int bonds = spec.boundary == Boundary::periodic ? n : n - 1;
  const std::uint64_t count = std::uint64_t{1} << n;
  const CMat2 r = prep_pulse_R();
  const CMat2 rho_woc = conjugate_by(r, gibbs_state(qubit_hamiltonian(sys.eps0, sys.delta0), spec.beta).rho);

  std::vector<double> log_w(count);
  std::vector<CMat2> rho0(count);
  std::vector<EigenSystem<2>> evolve(count);
  for (std::uint64_t bits = 0; bits < count; ++bits) {
    double e = 0.0, eps = 0.0, lam = 0.0;
    for (int i = 0; i < n; ++i) {
      const double s = ((bits >> i) & 1u) ? -1.0 : 1.0;
      e += s * spec.couplings[i];
      eps += s * spec.splittings[i];
    }
    for (int i = 0; i < bonds; ++i) {
      const double si = ((bits >> i) & 1u) ? -1.0 : 1.0;
      const double sj = ((bits >> ((i + 1) % n)) & 1u) ? -1.0 : 1.0;
      lam += spec.ising[i] * si * sj;
    }
    log_w[bits] = -spec.beta * (0.5 * eps + lam);
    if (correlated) {
      const auto g = gibbs_state(qubit_hamiltonian(sys.eps0 + e, sys.delta0), spec.beta);
      rho0[bits] = conjugate_by(r, g.rho);
      log_w[bits] += g.log_z;
    } else {
      rho0[bits] = rho_woc;
    }
    evolve[bits] = herm_eig(qubit_hamiltonian(sys.eps + e, sys.delta0));
  }
  const auto w = normalized_weights(log_w);

  std::vector<double> px(grid.size()), py(grid.size()), pz(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = grid[k];
    CMat2 rho;
    for (std::uint64_t bits = 0; bits < count; ++bits) {
      const auto u = spectral_apply(evolve[bits], [t](double en) { return std::exp(-I * (en * t)); });
      rho += w[bits] * conjugate_by(u, rho0[bits]);
    }
    const auto p = bloch_from_rho(rho);
    px[k] = p.x;
    py[k] = p.y;
    pz[k] = p.z;
  }
  TimeSeries ts;
  ts.grid.assign(grid.begin(), grid.end());
  ts.add("px", std::move(px));
  ts.add("py", std::move(py));
  ts.add("pz", std::move(pz));
  return ts;
}

}  // namespace spinbath
