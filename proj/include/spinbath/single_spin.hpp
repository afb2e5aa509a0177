#pragma once

// One central qubit in an Ising spin bath: state preparation with and
// without initial system-bath correlations, the analytic Bloch propagators,
// and an operator-level reference path.

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "spinbath/bath.hpp"
#include "spinbath/kernels.hpp"
#include "spinbath/qmatrix.hpp"

namespace spinbath {

struct SystemSpec {
  double eps0 = 4.0;    // bias before preparation
  double eps = 2.0;     // bias after preparation
  double delta0 = 1.0;  // tunneling amplitude, unchanged by preparation

  friend bool operator==(const SystemSpec&, const SystemSpec&) = default;
};

void validate(const SystemSpec& sys);

// (bias/2) sigma_z + (delta/2) sigma_x
CMat2 qubit_hamiltonian(double bias, double delta);

struct ShiftedHamiltonians {
  CMat2 prep;    // H_S0,n: bias eps0 + e_n
  CMat2 evolve;  // H_S,n: bias eps + e_n
};

ShiftedHamiltonians shifted_hamiltonians(const SystemSpec& sys, const BathTerm& term);

// exp(+i pi/4 sigma_y); maps spin-down along z to spin-up along x.
CMat2 prep_pulse_R();

// Bloch vector of R exp(-beta H) R^dagger / Z for H = qubit_hamiltonian(bias, delta),
// built by explicit matrix conjugation.
BlochVector prepared_bloch_operator(double bias, double delta, double beta);

// Closed form of the same state: tanh(beta d)/(2 d) * (bias, 0, -delta)
// with d = sqrt(bias^2 + delta^2) / 2.
BlochVector prepared_bloch_closed_form(double bias, double delta, double beta);

BlochVector initial_bloch_woc(const SystemSpec& sys, double beta);
BlochVector initial_bloch_wc(const SystemSpec& sys, const BathEnsemble& ens);

// 3x3 Bloch propagator normalised by its partition function: entries are
// M_ij / Z, and log_z = ln Z (Z_E for woc, Z_tot for wc).
struct PropagatorMatrix {
  Mat3 m{};
  double log_z = 0.0;

  double operator()(std::size_t i, std::size_t j) const { return m[3 * i + j]; }
  BlochVector apply(const BlochVector& p) const;
};

PropagatorMatrix propagator_woc(const SystemSpec& sys, const BathEnsemble& ens, double t);
PropagatorMatrix propagator_wc(const SystemSpec& sys, const BathEnsemble& ens, double t);

struct Channel {
  std::string name;
  std::vector<double> values;
};

struct TimeSeries {
  std::vector<double> grid;
  std::vector<Channel> channels;
  std::map<std::string, double> meta;

  const std::vector<double>& channel(const std::string& name) const;
  void add(std::string name, std::vector<double> values);
};

// t_k = t_max * k / (points - 1)
std::vector<double> uniform_grid(double t_max, int points);

// Channels px_woc, py_woc, pz_woc.
TimeSeries evolve_woc(const SystemSpec& sys, const BathEnsemble& ens, std::span<const double> grid,
                      Exec exec = Exec::parallel);

// Channels px_wc, py_wc, pz_wc from the per-class evolution, plus
// px_wc_compact, py_wc_compact, pz_wc_compact from M^wc(t) p^wc / Z_tot.
TimeSeries evolve_wc(const SystemSpec& sys, const BathEnsemble& ens, std::span<const double> grid,
                     Exec exec = Exec::parallel);

// Reference evolution by explicit per-configuration operators. Enumerates
// all 2^N configurations itself. Channels px, py, pz.
TimeSeries evolve_oracle(const SystemSpec& sys, const BathSpec& spec, std::span<const double> grid, bool correlated,
                         int cap = 16);

}  // namespace spinbath
