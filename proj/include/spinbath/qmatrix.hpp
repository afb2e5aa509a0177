#pragma once

// Fixed-size dense complex matrices for one and two qubits.
//
// Basis ordering: index 0 is spin up along z (sigma_z = +1). For two qubits
// the composite index is 2*i1 + i2, i.e. kron(A, B) places qubit 1 first.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

namespace spinbath {

using cplx = std::complex<double>;

template <std::size_t N>
struct Mat {
  std::array<cplx, N * N> a{};

  static constexpr std::size_t dim = N;

  cplx& operator()(std::size_t i, std::size_t j) { return a[i * N + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return a[i * N + j]; }

  static Mat zero() { return Mat{}; }
  static Mat identity() {
    Mat m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }

  Mat& operator+=(const Mat& o) {
    for (std::size_t k = 0; k < N * N; ++k) a[k] += o.a[k];
    return *this;
  }
  Mat& operator-=(const Mat& o) {
    for (std::size_t k = 0; k < N * N; ++k) a[k] -= o.a[k];
    return *this;
  }
  Mat& operator*=(cplx s) {
    for (auto& x : a) x *= s;
    return *this;
  }

  friend bool operator==(const Mat&, const Mat&) = default;
};

using CMat2 = Mat<2>;
using CMat4 = Mat<4>;

template <std::size_t N>
Mat<N> operator+(Mat<N> x, const Mat<N>& y) { return x += y; }
template <std::size_t N>
Mat<N> operator-(Mat<N> x, const Mat<N>& y) { return x -= y; }
template <std::size_t N>
Mat<N> operator*(cplx s, Mat<N> x) { return x *= s; }
template <std::size_t N>
Mat<N> operator*(Mat<N> x, cplx s) { return x *= s; }

template <std::size_t N>
Mat<N> operator*(const Mat<N>& x, const Mat<N>& y) {
  Mat<N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t k = 0; k < N; ++k) {
      const cplx xik = x(i, k);
      for (std::size_t j = 0; j < N; ++j) r(i, j) += xik * y(k, j);
    }
  return r;
}

template <std::size_t N>
Mat<N> adjoint(const Mat<N>& x) {
  Mat<N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) r(i, j) = std::conj(x(j, i));
  return r;
}

template <std::size_t N>
Mat<N> conjugate(const Mat<N>& x) {
  Mat<N> r;
  for (std::size_t k = 0; k < N * N; ++k) r.a[k] = std::conj(x.a[k]);
  return r;
}

template <std::size_t N>
cplx trace(const Mat<N>& x) {
  cplx t = 0.0;
  for (std::size_t i = 0; i < N; ++i) t += x(i, i);
  return t;
}

// Largest entry modulus.
template <std::size_t N>
double max_abs(const Mat<N>& x) {
  double m = 0.0;
  for (const auto& v : x.a) m = std::max(m, std::abs(v));
  return m;
}

template <std::size_t N>
double hermiticity_defect(const Mat<N>& x) {
  return max_abs(x - adjoint(x));
}

// (X + X^dagger) / 2
template <std::size_t N>
Mat<N> hermitian_part(const Mat<N>& x) {
  return 0.5 * (x + adjoint(x));
}

// U X U^dagger
template <std::size_t N>
Mat<N> conjugate_by(const Mat<N>& u, const Mat<N>& x) {
  return u * x * adjoint(u);
}

inline constexpr double kHermitianTol = 1e-12;

CMat2 pauli_x();
CMat2 pauli_y();
CMat2 pauli_z();

template <std::size_t N>
struct EigenSystem {
  std::array<double, N> values{};  // ascending
  Mat<N> vectors;                  // column k is the eigenvector of values[k]
};

// Throws NotHermitian when the max-entry defect exceeds tol.
EigenSystem<2> herm_eig(const CMat2& h, double tol = kHermitianTol);
EigenSystem<4> herm_eig(const CMat4& h, double tol = kHermitianTol);

// exp(-i H t)
CMat2 exp_unitary(const CMat2& h, double t);
CMat4 exp_unitary(const CMat4& h, double t);

// Unnormalized exp(-beta H).
CMat2 exp_gibbs(const CMat2& h, double beta);
CMat4 exp_gibbs(const CMat4& h, double beta);

// exp(-beta H) split into a unit-trace state and log of its trace, so that
// large beta*H never overflows.
template <std::size_t N>
struct GibbsState {
  Mat<N> rho;
  double log_z = 0.0;
};

GibbsState<2> gibbs_state(const CMat2& h, double beta);
GibbsState<4> gibbs_state(const CMat4& h, double beta);

// f(H) = V diag(f(w)) V^dagger for a precomputed eigensystem.
template <std::size_t N, class F>
Mat<N> spectral_apply(const EigenSystem<N>& es, F&& f) {
  std::array<cplx, N> fw;
  for (std::size_t k = 0; k < N; ++k) fw[k] = f(es.values[k]);
  Mat<N> r;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      cplx s = 0.0;
      for (std::size_t k = 0; k < N; ++k) s += es.vectors(i, k) * fw[k] * std::conj(es.vectors(j, k));
      r(i, j) = s;
    }
  return r;
}

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  friend bool operator==(const BlochVector&, const BlochVector&) = default;
};

// Requires unit trace within 1e-10 (BadTrace otherwise).
BlochVector bloch_from_rho(const CMat2& rho);
CMat2 rho_from_bloch(const BlochVector& p);

CMat4 kron(const CMat2& a, const CMat2& b);

enum class Qubit { first, second };

// Reduced state of the qubit that is kept after tracing out `traced`.
CMat2 ptrace(const CMat4& rho, Qubit traced);

}  // namespace spinbath
