#include "spinbath/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace spinbath {

namespace {

constexpr cplx I{0.0, 1.0};

// Precomputed per-class constants of rotation_matrix.
struct RotationCoeffs {
  double freq = 0.0;  // delta_tilde
  double bias = 0.0;
  double delta = 0.0;
  double inv_4dt2 = 0.0;
  double inv_2dt = 0.0;
  double inv_2dt2 = 0.0;
};

RotationCoeffs coeffs_of(double bias, double delta) {
  RotationCoeffs c;
  const double dt2 = 0.25 * (bias * bias + delta * delta);
  c.freq = std::sqrt(dt2);
  c.bias = bias;
  c.delta = delta;
  if (dt2 > 0.0) {
    c.inv_4dt2 = 1.0 / (4.0 * dt2);
    c.inv_2dt = 1.0 / (2.0 * c.freq);
    c.inv_2dt2 = 1.0 / (2.0 * dt2);
  }
  return c;
}

inline Mat3 rotation_from(const RotationCoeffs& c, double t) {
  if (c.freq == 0.0) return {1, 0, 0, 0, 1, 0, 0, 0, 1};
  const double cos2 = std::cos(2.0 * c.freq * t);
  const double sin2 = std::sin(2.0 * c.freq * t);
  const double s1 = std::sin(c.freq * t);
  const double sinsq = s1 * s1;
  const double d = c.delta;
  const double e = c.bias;
  return {
      c.inv_4dt2 * (d * d + e * e * cos2), -e * c.inv_2dt * sin2, d * e * c.inv_2dt2 * sinsq,
      e * c.inv_2dt * sin2,                cos2,                   -d * c.inv_2dt * sin2,
      d * e * c.inv_2dt2 * sinsq,          d * c.inv_2dt * sin2,   c.inv_4dt2 * (e * e + d * d * cos2),
  };
}

inline void axpy(Mat3& acc, double w, const Mat3& r) {
  for (std::size_t k = 0; k < 9; ++k) acc[k] += w * r[k];
}

inline void apply_add(BlochVector& acc, double w, const Mat3& r, const BlochVector& p) {
  acc.x += w * (r[0] * p.x + r[1] * p.y + r[2] * p.z);
  acc.y += w * (r[3] * p.x + r[4] * p.y + r[5] * p.z);
  acc.z += w * (r[6] * p.x + r[7] * p.y + r[8] * p.z);
}

std::vector<RotationCoeffs> coeffs_of(std::span<const RotationTerm> terms) {
  std::vector<RotationCoeffs> out;
  out.reserve(terms.size());
  for (const auto& t : terms) out.push_back(coeffs_of(t.bias, t.delta));
  return out;
}

// rho(t) = V [rho_eig_jk exp(-i (w_j - w_k) t)] V^dagger
inline CMat4 evolve_in_eigenbasis(const DensityTerm& term, double t) {
  std::array<cplx, 4> phase;
  for (std::size_t j = 0; j < 4; ++j) phase[j] = std::exp(-I * (term.eig.values[j] * t));
  CMat4 r;
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t k = 0; k < 4; ++k) r(j, k) = term.rho_eig(j, k) * phase[j] * std::conj(phase[k]);
  return conjugate_by(term.eig.vectors, r);
}

inline void add_scaled(CMat4& acc, double w, const CMat4& x) {
  for (std::size_t k = 0; k < 16; ++k) acc.a[k] += w * x.a[k];
}

struct FactorizedPrepared {
  double weight;
  EigenSystem<2> e1;
  EigenSystem<2> e2;
  CMat4 rho;
};

inline CMat4 evolve_factorized(const FactorizedPrepared& term, double t) {
  const auto u1 = spectral_apply(term.e1, [t](double w) { return std::exp(-I * (w * t)); });
  const auto u2 = spectral_apply(term.e2, [t](double w) { return std::exp(-I * (w * t)); });
  return conjugate_by(kron(u1, u2), term.rho);
}

std::vector<FactorizedPrepared> prepare(std::span<const FactorizedTerm> terms) {
  std::vector<FactorizedPrepared> out;
  out.reserve(terms.size());
  for (const auto& t : terms) out.push_back({t.weight, herm_eig(t.h1), herm_eig(t.h2), t.rho});
  return out;
}

}  // namespace

int configured_threads() {
  static const int n = [] {
    const char* env = std::getenv("SPINBATH_THREADS");
    if (env == nullptr || *env == '\0') return 0;
    try {
      return std::max(0, std::stoi(env));
    } catch (...) {
      return 0;
    }
  }();
  return n;
}

void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

Mat3 rotation_matrix(double bias, double delta, double t) { return rotation_from(coeffs_of(bias, delta), t); }

std::vector<Mat3> propagator_series(std::span<const RotationTerm> terms, std::span<const double> grid, Exec exec) {
  const auto coeffs = coeffs_of(terms);
  const auto n_t = static_cast<std::ptrdiff_t>(grid.size());
  std::vector<Mat3> out(grid.size(), Mat3{});

  if (exec == Exec::serial) {
    for (std::size_t n = 0; n < terms.size(); ++n)
      for (std::ptrdiff_t k = 0; k < n_t; ++k) axpy(out[k], terms[n].weight, rotation_from(coeffs[n], grid[k]));
    return out;
  }

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n_t; ++k) {
    Mat3 acc{};
    for (std::size_t n = 0; n < terms.size(); ++n) axpy(acc, terms[n].weight, rotation_from(coeffs[n], grid[k]));
    out[k] = acc;
  }
  return out;
}

std::vector<BlochVector> bloch_series(std::span<const RotationTerm> terms, std::span<const double> grid,
                                      Exec exec) {
  const auto coeffs = coeffs_of(terms);
  const auto n_t = static_cast<std::ptrdiff_t>(grid.size());
  std::vector<BlochVector> out(grid.size());

  if (exec == Exec::serial) {
    for (std::size_t n = 0; n < terms.size(); ++n)
      for (std::ptrdiff_t k = 0; k < n_t; ++k)
        apply_add(out[k], terms[n].weight, rotation_from(coeffs[n], grid[k]), terms[n].p0);
    return out;
  }

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n_t; ++k) {
    BlochVector acc;
    for (std::size_t n = 0; n < terms.size(); ++n)
      apply_add(acc, terms[n].weight, rotation_from(coeffs[n], grid[k]), terms[n].p0);
    out[k] = acc;
  }
  return out;
}

DensityTerm make_density_term(double weight, const CMat4& hamiltonian, const CMat4& rho) {
  DensityTerm t;
  t.weight = weight;
  t.eig = herm_eig(hamiltonian);
  t.rho_eig = adjoint(t.eig.vectors) * rho * t.eig.vectors;
  return t;
}

std::vector<CMat4> density_series(std::span<const DensityTerm> terms, std::span<const double> grid, Exec exec) {
  const auto n_t = static_cast<std::ptrdiff_t>(grid.size());
  std::vector<CMat4> out(grid.size());

  if (exec == Exec::serial) {
    for (const auto& term : terms)
      for (std::ptrdiff_t k = 0; k < n_t; ++k) add_scaled(out[k], term.weight, evolve_in_eigenbasis(term, grid[k]));
    return out;
  }

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n_t; ++k) {
    CMat4 acc;
    for (const auto& term : terms) add_scaled(acc, term.weight, evolve_in_eigenbasis(term, grid[k]));
    out[k] = acc;
  }
  return out;
}

std::vector<CMat4> density_series_factorized(std::span<const FactorizedTerm> terms, std::span<const double> grid,
                                             Exec exec) {
  const auto prepared = prepare(terms);
  const auto n_t = static_cast<std::ptrdiff_t>(grid.size());
  std::vector<CMat4> out(grid.size());

  if (exec == Exec::serial) {
    for (const auto& term : prepared)
      for (std::ptrdiff_t k = 0; k < n_t; ++k) add_scaled(out[k], term.weight, evolve_factorized(term, grid[k]));
    return out;
  }

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n_t; ++k) {
    CMat4 acc;
    for (const auto& term : prepared) add_scaled(acc, term.weight, evolve_factorized(term, grid[k]));
    out[k] = acc;
  }
  return out;
}

}  // namespace spinbath
