#include "spinbath/qmatrix.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "spinbath/errors.hpp"

namespace spinbath {

namespace {

constexpr cplx I{0.0, 1.0};

template <std::size_t N>
void require_hermitian(const Mat<N>& h, double tol) {
  const double d = hermiticity_defect(h);
  if (!(d <= tol)) throw NotHermitian("matrix is not Hermitian (defect " + std::to_string(d) + ")");
}

template <std::size_t N>
void sort_ascending(EigenSystem<N>& es) {
  std::array<std::size_t, N> order;
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) { return es.values[l] < es.values[r]; });
  EigenSystem<N> sorted;
  for (std::size_t k = 0; k < N; ++k) {
    sorted.values[k] = es.values[order[k]];
    for (std::size_t i = 0; i < N; ++i) sorted.vectors(i, k) = es.vectors(i, order[k]);
  }
  es = sorted;
}

// Cyclic complex Jacobi. Each rotation first removes the phase of the pivot
// with a diagonal unitary, then applies a real Givens rotation.
template <std::size_t N>
EigenSystem<N> jacobi_eig(const Mat<N>& h) {
  Mat<N> a = hermitian_part(h);
  Mat<N> v = Mat<N>::identity();

  double scale = 0.0;
  for (const auto& x : a.a) scale += std::norm(x);
  scale = std::sqrt(scale);

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < N; ++p)
      for (std::size_t q = p + 1; q < N; ++q) off += std::norm(a(p, q));
    if (off <= 1e-34 * scale * scale || off == 0.0) break;

    for (std::size_t p = 0; p < N; ++p) {
      for (std::size_t q = p + 1; q < N; ++q) {
        const double r = std::abs(a(p, q));
        if (r == 0.0) continue;
        const cplx phase = a(p, q) / r;  // e^{i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * r);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // W = D G with D = diag(1, conj(phase)) on (p, q).
        const cplx wpp = c;
        const cplx wpq = s;
        const cplx wqp = -s * std::conj(phase);
        const cplx wqq = c * std::conj(phase);

        // a <- a W
        for (std::size_t i = 0; i < N; ++i) {
          const cplx aip = a(i, p);
          const cplx aiq = a(i, q);
          a(i, p) = aip * wpp + aiq * wqp;
          a(i, q) = aip * wpq + aiq * wqq;
        }
        // a <- W^dagger a
        for (std::size_t j = 0; j < N; ++j) {
          const cplx apj = a(p, j);
          const cplx aqj = a(q, j);
          a(p, j) = std::conj(wpp) * apj + std::conj(wqp) * aqj;
          a(q, j) = std::conj(wpq) * apj + std::conj(wqq) * aqj;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        // v <- v W
        for (std::size_t i = 0; i < N; ++i) {
          const cplx vip = v(i, p);
          const cplx viq = v(i, q);
          v(i, p) = vip * wpp + viq * wqp;
          v(i, q) = vip * wpq + viq * wqq;
        }
      }
    }
  }

  EigenSystem<N> es;
  for (std::size_t k = 0; k < N; ++k) es.values[k] = a(k, k).real();
  es.vectors = v;
  sort_ascending(es);
  return es;
}

template <std::size_t N>
GibbsState<N> gibbs_from_eig(const EigenSystem<N>& es, double beta) {
  // Shift by the ground energy; values are ascending.
  const double w0 = es.values[0];
  double z = 0.0;
  for (double w : es.values) z += std::exp(-beta * (w - w0));
  GibbsState<N> g;
  g.rho = spectral_apply(es, [&](double w) { return cplx(std::exp(-beta * (w - w0)) / z); });
  g.log_z = -beta * w0 + std::log(z);
  return g;
}

}  // namespace

CMat2 pauli_x() {
  CMat2 m;
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

CMat2 pauli_y() {
  CMat2 m;
  m(0, 1) = -I;
  m(1, 0) = I;
  return m;
}

CMat2 pauli_z() {
  CMat2 m;
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

EigenSystem<2> herm_eig(const CMat2& h, double tol) {
  require_hermitian(h, tol);
  // H = a0 I + hx sx + hy sy + hz sz
  const double a0 = 0.5 * (h(0, 0).real() + h(1, 1).real());
  const double hz = 0.5 * (h(0, 0).real() - h(1, 1).real());
  const cplx off = 0.5 * (h(1, 0) + std::conj(h(0, 1)));  // hx + i hy
  const double hx = off.real();
  const double hy = off.imag();
  const double r = std::sqrt(hx * hx + hy * hy + hz * hz);

  EigenSystem<2> es;
  es.values = {a0 - r, a0 + r};
  if (r == 0.0) {
    es.vectors = CMat2::identity();
    return es;
  }
  // Upper-state vector, choosing the branch without cancellation.
  cplx u0, u1;
  if (hz >= 0.0) {
    u0 = r + hz;
    u1 = cplx(hx, hy);
  } else {
    u0 = cplx(hx, -hy);
    u1 = r - hz;
  }
  const double nrm = std::sqrt(std::norm(u0) + std::norm(u1));
  u0 /= nrm;
  u1 /= nrm;
  es.vectors(0, 1) = u0;
  es.vectors(1, 1) = u1;
  es.vectors(0, 0) = -std::conj(u1);
  es.vectors(1, 0) = std::conj(u0);
  return es;
}

EigenSystem<4> herm_eig(const CMat4& h, double tol) {
  require_hermitian(h, tol);
  return jacobi_eig(h);
}

CMat2 exp_unitary(const CMat2& h, double t) {
  return spectral_apply(herm_eig(h), [t](double w) { return std::exp(-I * (w * t)); });
}

CMat4 exp_unitary(const CMat4& h, double t) {
  return spectral_apply(herm_eig(h), [t](double w) { return std::exp(-I * (w * t)); });
}

CMat2 exp_gibbs(const CMat2& h, double beta) {
  return spectral_apply(herm_eig(h), [beta](double w) { return cplx(std::exp(-beta * w)); });
}

CMat4 exp_gibbs(const CMat4& h, double beta) {
  return spectral_apply(herm_eig(h), [beta](double w) { return cplx(std::exp(-beta * w)); });
}

GibbsState<2> gibbs_state(const CMat2& h, double beta) { return gibbs_from_eig(herm_eig(h), beta); }

GibbsState<4> gibbs_state(const CMat4& h, double beta) { return gibbs_from_eig(herm_eig(h), beta); }

BlochVector bloch_from_rho(const CMat2& rho) {
  const cplx tr = trace(rho);
  if (std::abs(tr - 1.0) > 1e-10) throw BadTrace("density matrix trace is " + std::to_string(tr.real()));
  // Tr(sx rho) = 2 Re rho10, Tr(sy rho) = 2 Im rho10, Tr(sz rho) = rho00 - rho11
  const cplx lower = 0.5 * (rho(1, 0) + std::conj(rho(0, 1)));
  return {2.0 * lower.real(), 2.0 * lower.imag(), rho(0, 0).real() - rho(1, 1).real()};
}

CMat2 rho_from_bloch(const BlochVector& p) {
  CMat2 r;
  r(0, 0) = 0.5 * (1.0 + p.z);
  r(1, 1) = 0.5 * (1.0 - p.z);
  r(0, 1) = 0.5 * cplx(p.x, -p.y);
  r(1, 0) = 0.5 * cplx(p.x, p.y);
  return r;
}

CMat4 kron(const CMat2& a, const CMat2& b) {
  CMat4 r;
  for (std::size_t i1 = 0; i1 < 2; ++i1)
    for (std::size_t j1 = 0; j1 < 2; ++j1)
      for (std::size_t i2 = 0; i2 < 2; ++i2)
        for (std::size_t j2 = 0; j2 < 2; ++j2) r(2 * i1 + i2, 2 * j1 + j2) = a(i1, j1) * b(i2, j2);
  return r;
}

CMat2 ptrace(const CMat4& rho, Qubit traced) {
  const cplx tr = trace(rho);
  if (std::abs(tr - 1.0) > 1e-10) throw BadTrace("density matrix trace is " + std::to_string(tr.real()));
  CMat2 r;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k) {
        if (traced == Qubit::second)
          r(i, j) += rho(2 * i + k, 2 * j + k);
        else
          r(i, j) += rho(2 * k + i, 2 * k + j);
      }
  return r;
}

}  // namespace spinbath
