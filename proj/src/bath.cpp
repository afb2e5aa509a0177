#include "spinbath/bath.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <tuple>

#include "spinbath/errors.hpp"

namespace spinbath {

namespace {

bool all_equal(const std::vector<double>& v, std::size_t count) {
  for (std::size_t i = 1; i < count; ++i)
    if (v[i] != v[0]) return false;
  return true;
}

std::size_t used_bonds(const BathSpec& spec) { return static_cast<std::size_t>(bond_count(spec)); }

bool uniform_fields(const BathSpec& spec) {
  const auto n = static_cast<std::size_t>(spec.n_spins);
  return all_equal(spec.couplings, n) && all_equal(spec.splittings, n) &&
         all_equal(spec.ising, used_bonds(spec));
}

double used_alpha(const BathSpec& spec) { return used_bonds(spec) == 0 ? 0.0 : spec.ising[0]; }

// Collapsed sources promise distinct (e, eps, lam) triples; fold any that
// coincide (e.g. g = eps = 0).
std::vector<BathTerm> merge_duplicates(const std::vector<BathTerm>& in) {
  std::map<std::tuple<double, double, double>, std::vector<double>> groups;
  for (const auto& t : in) groups[{t.e, t.eps, t.lam}].push_back(t.log_mult);
  std::vector<BathTerm> out;
  out.reserve(groups.size());
  for (const auto& [key, logs] : groups) {
    const auto& [e, eps, lam] = key;
    out.push_back({e, eps, lam, logs.size() == 1 ? logs[0] : logsumexp(logs)});
  }
  return out;
}

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Transfer-matrix count over (first spin, current spin, down count, walls).
// Counter is either an exact integer or a float rescaled every step.
template <class Counter>
struct ChainDp {
  int n;
  std::vector<Counter> cur, next;

  explicit ChainDp(int n_spins) : n(n_spins) {
    const std::size_t size = 4 * static_cast<std::size_t>(n + 1) * static_cast<std::size_t>(n + 1);
    cur.assign(size, Counter{});
    next.assign(size, Counter{});
  }

  std::size_t idx(int first, int current, int downs, int walls) const {
    return ((static_cast<std::size_t>(first) * 2 + current) * (n + 1) + downs) * (n + 1) + walls;
  }
};

template <class Counter, class Rescale>
void run_chain_dp(ChainDp<Counter>& dp, Rescale&& rescale) {
  const int n = dp.n;
  dp.cur[dp.idx(0, 0, 0, 0)] = Counter{1};
  dp.cur[dp.idx(1, 1, 1, 0)] = Counter{1};
  for (int i = 1; i < n; ++i) {
    std::fill(dp.next.begin(), dp.next.end(), Counter{});
    for (int f = 0; f < 2; ++f)
      for (int c = 0; c < 2; ++c)
        for (int k = 0; k <= i; ++k)
          for (int w = 0; w < i; ++w) {
            const Counter v = dp.cur[dp.idx(f, c, k, w)];
            if (v == Counter{}) continue;
            for (int x = 0; x < 2; ++x) dp.next[dp.idx(f, x, k + x, w + (x != c))] += v;
          }
    std::swap(dp.cur, dp.next);
    rescale(dp.cur);
  }
}

template <class Counter, class Emit>
void emit_classes(const ChainDp<Counter>& dp, Boundary boundary, Emit&& emit) {
  const int n = dp.n;
  const int bonds = boundary == Boundary::periodic ? n : n - 1;
  for (int f = 0; f < 2; ++f)
    for (int c = 0; c < 2; ++c)
      for (int k = 0; k <= n; ++k)
        for (int w = 0; w < std::max(n, 1); ++w) {
          const Counter v = dp.cur[dp.idx(f, c, k, w)];
          if (v == Counter{}) continue;
          const int walls = w + (boundary == Boundary::periodic && f != c ? 1 : 0);
          emit(n - 2 * k, bonds - 2 * walls, v);
        }
}

}  // namespace

int bond_count(const BathSpec& spec) {
  if (spec.n_spins <= 0) return 0;
  return spec.boundary == Boundary::periodic ? spec.n_spins : spec.n_spins - 1;
}

std::vector<std::string> validate(const BathSpec& spec) {
  if (spec.n_spins < 1) throw ValidationError("bath.n_spins", "must be a positive integer");
  const auto n = static_cast<std::size_t>(spec.n_spins);
  const auto check_list = [n](const std::vector<double>& v, const char* path) {
    if (v.size() != n)
      throw ValidationError(path, "expected " + std::to_string(n) + " entries, got " + std::to_string(v.size()));
    for (double x : v)
      if (!std::isfinite(x)) throw ValidationError(path, "entries must be finite");
  };
  check_list(spec.couplings, "bath.couplings");
  check_list(spec.splittings, "bath.splittings");
  check_list(spec.ising, "bath.ising");
  if (!(spec.beta > 0.0) || !std::isfinite(spec.beta))
    throw ValidationError("bath.beta", "must be positive and finite");

  std::vector<std::string> notes;
  if (spec.boundary == Boundary::open && spec.ising.back() != 0.0)
    notes.push_back("bath.ising[" + std::to_string(n - 1) + "] = " + std::to_string(spec.ising.back()) +
                    " is ignored: an open chain has no bond after the last spin");
  return notes;
}

bool is_uniform_free(const BathSpec& spec) {
  return uniform_fields(spec) && used_alpha(spec) == 0.0;
}

bool is_uniform_ising(const BathSpec& spec) {
  return uniform_fields(spec) && used_alpha(spec) != 0.0;
}

BathEnsemble enumerate_bruteforce(const BathSpec& spec, int cap) {
  validate(spec);
  const int n = spec.n_spins;
  if (n > cap)
    throw CapExceeded("brute-force enumeration of " + std::to_string(n) + " bath spins exceeds the cap of " +
                      std::to_string(cap) + "; use a collapsed engine");
  const int bonds = bond_count(spec);
  const std::uint64_t count = std::uint64_t{1} << n;

  BathEnsemble ens;
  ens.source = EnsembleSource::bruteforce;
  ens.total_log_count = n * std::numbers::ln2;
  ens.beta = spec.beta;
  ens.terms.resize(count);
  for (std::uint64_t bits = 0; bits < count; ++bits) {
    BathTerm t;
    // Bit i set means spin i is down.
    for (int i = 0; i < n; ++i) {
      const double si = (bits >> i) & 1u ? -1.0 : 1.0;
      t.e += si * spec.couplings[i];
      t.eps += si * spec.splittings[i];
    }
    for (int i = 0; i < bonds; ++i) {
      const int j = (i + 1) % n;
      const double si = (bits >> i) & 1u ? -1.0 : 1.0;
      const double sj = (bits >> j) & 1u ? -1.0 : 1.0;
      t.lam += spec.ising[i] * si * sj;
    }
    ens.terms[bits] = t;
  }
  return ens;
}

BathEnsemble collapse_uniform_free(const BathSpec& spec) {
  validate(spec);
  if (!is_uniform_free(spec))
    throw NotUniform("free collapse needs equal couplings, equal splittings and no Ising bonds");
  const int n = spec.n_spins;
  const double g = spec.couplings[0];
  const double eps = spec.splittings[0];

  std::vector<BathTerm> terms;
  terms.reserve(n + 1);
  for (int k = 0; k <= n; ++k) {
    const int m = n - 2 * k;
    terms.push_back({g * m, eps * m, 0.0, log_binomial(n, k)});
  }
  BathEnsemble ens;
  ens.source = EnsembleSource::uniform_free;
  ens.total_log_count = n * std::numbers::ln2;
  ens.beta = spec.beta;
  ens.terms = merge_duplicates(terms);
  return ens;
}

ClassCounts ising_class_counts_exact(int n_spins, Boundary boundary) {
  if (n_spins < 1 || n_spins > 64) throw ValidationError("bath.n_spins", "exact class counting supports 1..64 spins");
  ChainDp<std::uint64_t> dp(n_spins);
  run_chain_dp(dp, [](auto&) {});
  ClassCounts out;
  emit_classes(dp, boundary, [&](int m, int s, std::uint64_t v) { out[{m, s}] += v; });
  return out;
}

std::map<std::pair<int, int>, double> ising_class_log_counts(int n_spins, Boundary boundary) {
  if (n_spins < 1) throw ValidationError("bath.n_spins", "must be a positive integer");
  std::map<std::pair<int, int>, double> out;
  if (n_spins <= 64) {
    for (const auto& [key, v] : ising_class_counts_exact(n_spins, boundary))
      out[key] = std::log(static_cast<double>(v));
    return out;
  }
  // Floats with a running power-of-two scale; all additions are of
  // nonnegative values so relative accuracy stays near machine epsilon.
  ChainDp<double> dp(n_spins);
  double log_scale = 0.0;
  run_chain_dp(dp, [&](std::vector<double>& layer) {
    const double peak = *std::max_element(layer.begin(), layer.end());
    int exponent = 0;
    std::frexp(peak, &exponent);
    for (double& v : layer) v = std::ldexp(v, -exponent);
    log_scale += exponent * std::numbers::ln2;
  });
  std::map<std::pair<int, int>, std::vector<double>> parts;
  emit_classes(dp, boundary, [&](int m, int s, double v) { parts[{m, s}].push_back(std::log(v) + log_scale); });
  for (const auto& [key, logs] : parts) out[key] = logsumexp(logs);
  return out;
}

BathEnsemble collapse_uniform_ising(const BathSpec& spec) {
  validate(spec);
  if (!is_uniform_ising(spec))
    throw NotUniform("Ising collapse needs equal couplings, equal splittings and equal nonzero bond strengths");
  const double g = spec.couplings[0];
  const double eps = spec.splittings[0];
  const double alpha = used_alpha(spec);

  std::vector<BathTerm> terms;
  for (const auto& [key, log_count] : ising_class_log_counts(spec.n_spins, spec.boundary)) {
    const auto [m, s] = key;
    terms.push_back({g * m, eps * m, alpha * s, log_count});
  }
  BathEnsemble ens;
  ens.source = EnsembleSource::uniform_ising;
  ens.total_log_count = spec.n_spins * std::numbers::ln2;
  ens.beta = spec.beta;
  ens.terms = merge_duplicates(terms);
  return ens;
}

BathEnsemble build_ensemble(const BathSpec& spec, Engine engine, int cap) {
  switch (engine) {
    case Engine::bruteforce:
      return enumerate_bruteforce(spec, cap);
    case Engine::collapsed:
      validate(spec);
      if (is_uniform_free(spec)) return collapse_uniform_free(spec);
      if (is_uniform_ising(spec)) return collapse_uniform_ising(spec);
      throw NotUniform("collapsed engine requires a uniform bath (equal g_i, epsilon_i and alpha_i)");
    case Engine::automatic:
      validate(spec);
      if (is_uniform_free(spec)) return collapse_uniform_free(spec);
      if (is_uniform_ising(spec)) return collapse_uniform_ising(spec);
      return enumerate_bruteforce(spec, cap);
  }
  return enumerate_bruteforce(spec, cap);
}

double log_weight(const BathTerm& term, double beta) {
  return term.log_mult - beta * (0.5 * term.eps + term.lam);
}

double logsumexp(std::span<const double> xs) {
  if (xs.empty()) return -std::numeric_limits<double>::infinity();
  const double peak = *std::max_element(xs.begin(), xs.end());
  if (!std::isfinite(peak)) return peak;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - peak);
  return peak + std::log(s);
}

std::vector<double> normalized_weights(std::span<const double> log_w) {
  const double lz = logsumexp(log_w);
  std::vector<double> w(log_w.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(log_w[i] - lz);
  return w;
}

}  // namespace spinbath
