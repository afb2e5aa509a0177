#pragma once

// Two central qubits sharing one Ising bath: entangling preparation, exact
// per-class evolution and concurrence.

#include <span>
#include <utility>
#include <vector>

#include "spinbath/bath.hpp"
#include "spinbath/kernels.hpp"
#include "spinbath/qmatrix.hpp"

namespace spinbath {

struct TwoQubitSpec {
  double eps0_1 = 5.0, eps0_2 = 5.0;
  double eps_1 = 2.0, eps_2 = 2.0;
  double delta0_1 = 1.0, delta0_2 = 1.0;
  double kappa = 0.0;
  // Multiplies e_n in each qubit's bias. Both default to the shared coupling.
  double coupling_scale_1 = 1.0, coupling_scale_2 = 1.0;

  friend bool operator==(const TwoQubitSpec&, const TwoQubitSpec&) = default;
};

void validate(const TwoQubitSpec& spec);

// exp(i pi/4 (sx (x) 1 + 1 (x) sx - sx (x) sx))
CMat4 cz_pulse();

// H^(1) + H^(2) + kappa sz (x) sz with each bias shifted by its scaled e.
CMat4 prep_hamiltonian_2q(const TwoQubitSpec& spec, double e);
CMat4 evolve_hamiltonian_2q(const TwoQubitSpec& spec, double e);

// Unit-trace prepared states per bath class with their log-weights. For the
// uncorrelated preparation every state is the same product-Gibbs factor.
struct PreparedStates {
  std::vector<CMat4> states;
  std::vector<double> log_weights;
};

PreparedStates initial_state_2q(const TwoQubitSpec& spec, const BathEnsemble& ens, bool correlated);

enum class EvolutionPath { automatic, general, factorized };

// Normalised two-qubit density matrix at each grid point. `factorized`
// requires kappa == 0; `automatic` uses it whenever kappa == 0.
std::vector<CMat4> evolve_2q(const TwoQubitSpec& spec, const BathEnsemble& ens, std::span<const double> grid,
                             bool correlated, Exec exec = Exec::parallel,
                             EvolutionPath path = EvolutionPath::automatic);

// Wootters concurrence via the Hermitian form sqrt(rho) Y rho* Y sqrt(rho).
// Throws NotAState for non-Hermitian, non-unit-trace, or clearly non-positive
// input (an eigenvalue below -1e-10).
double concurrence(const CMat4& rho);

double min_eigenvalue(const CMat4& rho);

using Interval = std::pair<double, double>;

struct ConcurrenceSeries {
  std::vector<double> grid;
  std::vector<double> c;
  std::vector<Interval> esd_intervals;
  // States whose smallest eigenvalue sat in [-1e-10, -1e-11) and was clipped.
  int clipped = 0;
};

inline constexpr double kEsdTolerance = 1e-9;

ConcurrenceSeries concurrence_series(std::span<const double> grid, std::span<const CMat4> states,
                                     double esd_tol = kEsdTolerance);

// Maximal runs of consecutive grid points with c <= tol, as (first, last)
// grid times.
std::vector<Interval> esd_scan(std::span<const double> grid, std::span<const double> c, double tol = kEsdTolerance);

}  // namespace spinbath
