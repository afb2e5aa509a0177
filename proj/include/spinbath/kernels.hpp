#pragma once

// Hot loops over (bath class x time point).
//
// Every kernel comes in two flavours: a serial reference that walks the
// bath classes in the outer loop, and an OpenMP kernel that parallelises over
// time points. Both add the class contributions for a given time point in
// the same order, so the parallel result does not depend on the number of
// threads.

#include <array>
#include <span>
#include <vector>

#include "spinbath/qmatrix.hpp"

namespace spinbath {

enum class Exec { serial, parallel };

// Reads SPINBATH_THREADS once; 0 means "leave the OpenMP default".
int configured_threads();
void set_threads(int n);

// One bath class as seen by the single-qubit Bloch rotation
//   H = (bias/2) sigma_z + (delta/2) sigma_x.
struct RotationTerm {
  double weight = 0.0;  // normalised probability of the class
  double bias = 0.0;    // epsilon_n = e_n + epsilon
  double delta = 0.0;   // tunneling amplitude
  BlochVector p0;       // Bloch vector the class starts from
};

using Mat3 = std::array<double, 9>;  // row-major

// Bloch-space rotation generated by H over time t, written out element by
// element (axis (delta, 0, bias), angle 2 * delta_tilde * t).
Mat3 rotation_matrix(double bias, double delta, double t);

// sum_n weight_n R_n(t) for every t in the grid.
std::vector<Mat3> propagator_series(std::span<const RotationTerm> terms, std::span<const double> grid, Exec exec);

// sum_n weight_n R_n(t) p0_n for every t in the grid.
std::vector<BlochVector> bloch_series(std::span<const RotationTerm> terms, std::span<const double> grid,
                                      Exec exec);

// One bath class of the two-qubit problem, pre-rotated into the eigenbasis of
// its evolution Hamiltonian.
struct DensityTerm {
  double weight = 0.0;
  EigenSystem<4> eig;  // of H_S,n^(1) + H_S,n^(2) + H_12
  CMat4 rho_eig;       // V^dagger rho_n V
};

DensityTerm make_density_term(double weight, const CMat4& hamiltonian, const CMat4& rho);

std::vector<CMat4> density_series(std::span<const DensityTerm> terms, std::span<const double> grid, Exec exec);

// kappa = 0 variant: the evolution factorises into U1(t) (x) U2(t).
struct FactorizedTerm {
  double weight = 0.0;
  CMat2 h1;
  CMat2 h2;
  CMat4 rho;
};

std::vector<CMat4> density_series_factorized(std::span<const FactorizedTerm> terms, std::span<const double> grid,
                                             Exec exec);

}  // namespace spinbath
