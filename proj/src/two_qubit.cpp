#include "spinbath/two_qubit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "spinbath/errors.hpp"
#include "spinbath/single_spin.hpp"

namespace spinbath {

namespace {

constexpr double kStateTol = 1e-10;
constexpr double kClipWarn = 1e-11;

CMat4 two_qubit_hamiltonian(const TwoQubitSpec& spec, double bias_1, double bias_2) {
  const CMat2 one = CMat2::identity();
  return kron(qubit_hamiltonian(bias_1, spec.delta0_1), one) + kron(one, qubit_hamiltonian(bias_2, spec.delta0_2)) +
         spec.kappa * kron(pauli_z(), pauli_z());
}

}  // namespace

void validate(const TwoQubitSpec& spec) {
  const auto finite = [](double v, const char* path) {
    if (!std::isfinite(v)) throw ValidationError(path, "must be finite");
  };
  finite(spec.eps0_1, "system.eps0[0]");
  finite(spec.eps0_2, "system.eps0[1]");
  finite(spec.eps_1, "system.eps[0]");
  finite(spec.eps_2, "system.eps[1]");
  finite(spec.kappa, "system.kappa");
  finite(spec.coupling_scale_1, "system.coupling_scale[0]");
  finite(spec.coupling_scale_2, "system.coupling_scale[1]");
  if (!std::isfinite(spec.delta0_1) || spec.delta0_1 < 0.0)
    throw ValidationError("system.delta0[0]", "must be finite and nonnegative");
  if (!std::isfinite(spec.delta0_2) || spec.delta0_2 < 0.0)
    throw ValidationError("system.delta0[1]", "must be finite and nonnegative");
}

CMat4 cz_pulse() {
  const CMat2 one = CMat2::identity();
  const CMat2 sx = pauli_x();
  const CMat4 exponent = (std::numbers::pi / 4.0) * (kron(sx, one) + kron(one, sx) - kron(sx, sx));
  // exp(-i G t) at t = -1 gives exp(+i G).
  return exp_unitary(exponent, -1.0);
}

CMat4 prep_hamiltonian_2q(const TwoQubitSpec& spec, double e) {
  return two_qubit_hamiltonian(spec, spec.eps0_1 + spec.coupling_scale_1 * e, spec.eps0_2 + spec.coupling_scale_2 * e);
}

CMat4 evolve_hamiltonian_2q(const TwoQubitSpec& spec, double e) {
  return two_qubit_hamiltonian(spec, spec.eps_1 + spec.coupling_scale_1 * e, spec.eps_2 + spec.coupling_scale_2 * e);
}

PreparedStates initial_state_2q(const TwoQubitSpec& spec, const BathEnsemble& ens, bool correlated) {
  if (ens.terms.empty()) throw EmptyEnsemble("bath ensemble has no terms");
  const CMat4 cz = cz_pulse();
  PreparedStates out;
  out.states.reserve(ens.terms.size());
  out.log_weights.reserve(ens.terms.size());

  const CMat4 product_state = conjugate_by(cz, gibbs_state(prep_hamiltonian_2q(spec, 0.0), ens.beta).rho);
  for (const auto& term : ens.terms) {
    double lw = log_weight(term, ens.beta);
    if (correlated) {
      const auto g = gibbs_state(prep_hamiltonian_2q(spec, term.e), ens.beta);
      out.states.push_back(conjugate_by(cz, g.rho));
      lw += g.log_z;
    } else {
      out.states.push_back(product_state);
    }
    out.log_weights.push_back(lw);
  }
  return out;
}

std::vector<CMat4> evolve_2q(const TwoQubitSpec& spec, const BathEnsemble& ens, std::span<const double> grid,
                             bool correlated, Exec exec, EvolutionPath path) {
  if (grid.empty()) throw ValidationError("grid", "time grid is empty");
  if (path == EvolutionPath::factorized && spec.kappa != 0.0)
    throw ValidationError("system.kappa", "factorized evolution requires kappa = 0");
  const auto prepared = initial_state_2q(spec, ens, correlated);
  const auto w = normalized_weights(prepared.log_weights);

  const bool factorized = path == EvolutionPath::factorized || (path == EvolutionPath::automatic && spec.kappa == 0.0);
  if (factorized) {
    std::vector<FactorizedTerm> terms(ens.terms.size());
    for (std::size_t n = 0; n < terms.size(); ++n) {
      const double e = ens.terms[n].e;
      terms[n] = {w[n], qubit_hamiltonian(spec.eps_1 + spec.coupling_scale_1 * e, spec.delta0_1),
                  qubit_hamiltonian(spec.eps_2 + spec.coupling_scale_2 * e, spec.delta0_2), prepared.states[n]};
    }
    return density_series_factorized(terms, grid, exec);
  }

  std::vector<DensityTerm> terms;
  terms.reserve(ens.terms.size());
  for (std::size_t n = 0; n < ens.terms.size(); ++n)
    terms.push_back(make_density_term(w[n], evolve_hamiltonian_2q(spec, ens.terms[n].e), prepared.states[n]));
  return density_series(terms, grid, exec);
}

double min_eigenvalue(const CMat4& rho) { return herm_eig(hermitian_part(rho), kStateTol).values[0]; }

double concurrence(const CMat4& rho_in) {
  if (hermiticity_defect(rho_in) > kStateTol) throw NotAState("two-qubit state is not Hermitian");
  if (std::abs(trace(rho_in) - 1.0) > kStateTol)
    throw NotAState("two-qubit state has trace " + std::to_string(trace(rho_in).real()));
  const CMat4 rho = hermitian_part(rho_in);
  const auto es = herm_eig(rho);
  if (es.values[0] < -kStateTol)
    throw NotAState("two-qubit state has eigenvalue " + std::to_string(es.values[0]));

  const CMat4 sqrt_rho = spectral_apply(es, [](double v) { return cplx(std::sqrt(std::max(v, 0.0))); });
  const CMat4 yy = kron(pauli_y(), pauli_y());
  const CMat4 flipped = yy * conjugate(rho) * yy;
  const auto r = herm_eig(hermitian_part(sqrt_rho * flipped * sqrt_rho), 1e-9);

  std::array<double, 4> s;
  for (std::size_t k = 0; k < 4; ++k) s[k] = std::sqrt(std::max(r.values[k], 0.0));
  std::sort(s.begin(), s.end(), std::greater<>());
  return std::clamp(s[0] - s[1] - s[2] - s[3], 0.0, 1.0);
}

ConcurrenceSeries concurrence_series(std::span<const double> grid, std::span<const CMat4> states, double esd_tol) {
  if (grid.size() != states.size()) throw Error("grid and state series differ in length");
  ConcurrenceSeries cs;
  cs.grid.assign(grid.begin(), grid.end());
  cs.c.reserve(states.size());
  for (const auto& rho : states) {
    const double lo = min_eigenvalue(rho);
    if (lo < -kClipWarn && lo >= -kStateTol) ++cs.clipped;
    cs.c.push_back(concurrence(rho));
  }
  cs.esd_intervals = esd_scan(cs.grid, cs.c, esd_tol);
  return cs;
}

std::vector<Interval> esd_scan(std::span<const double> grid, std::span<const double> c, double tol) {
  if (grid.size() != c.size()) throw Error("grid and concurrence series differ in length");
  if (!(tol > 0.0)) throw ValidationError("esd_tol", "must be positive");
  std::vector<Interval> out;
  std::size_t k = 0;
  while (k < c.size()) {
    if (c[k] > tol) {
      ++k;
      continue;
    }
    const std::size_t start = k;
    while (k + 1 < c.size() && c[k + 1] <= tol) ++k;
    out.emplace_back(grid[start], grid[k]);
    ++k;
  }
  return out;
}

}  // namespace spinbath
