#pragma once

// Ising spin bath: configuration enumeration, degeneracy collapse, and
// log-space Boltzmann weights.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace spinbath {

enum class Boundary { periodic, open };

struct BathSpec {
  int n_spins = 0;
  std::vector<double> couplings;   // g_i
  std::vector<double> splittings;  // epsilon_i
  std::vector<double> ising;       // alpha_i, bond (i, i+1)
  Boundary boundary = Boundary::periodic;
  double beta = 1.0;

  friend bool operator==(const BathSpec&, const BathSpec&) = default;
};

// Throws ValidationError on broken invariants. Returns human-readable notes
// for accepted-but-noteworthy input (the unused last bond of an open chain).
std::vector<std::string> validate(const BathSpec& spec);

// Number of Ising bonds actually present for this boundary.
int bond_count(const BathSpec& spec);

// One equivalence class of bath configurations.
struct BathTerm {
  double e = 0.0;    // sum_i (-1)^{n_i} g_i
  double eps = 0.0;  // sum_i (-1)^{n_i} epsilon_i
  double lam = 0.0;  // sum_i alpha_i (-1)^{n_i} (-1)^{n_{i+1}}
  double log_mult = 0.0;
};

enum class EnsembleSource { bruteforce, uniform_free, uniform_ising };

struct BathEnsemble {
  std::vector<BathTerm> terms;
  EnsembleSource source = EnsembleSource::bruteforce;
  double total_log_count = 0.0;  // N ln 2
  double beta = 1.0;             // inverse temperature the weights refer to
};

inline constexpr int kDefaultBruteforceCap = 24;

BathEnsemble enumerate_bruteforce(const BathSpec& spec, int cap = kDefaultBruteforceCap);
BathEnsemble collapse_uniform_free(const BathSpec& spec);
BathEnsemble collapse_uniform_ising(const BathSpec& spec);

enum class Engine { automatic, bruteforce, collapsed };

// Picks the ensemble construction for an engine request. `automatic` prefers
// a collapse when the spec is uniform and falls back to enumeration.
BathEnsemble build_ensemble(const BathSpec& spec, Engine engine, int cap = kDefaultBruteforceCap);

bool is_uniform_free(const BathSpec& spec);
bool is_uniform_ising(const BathSpec& spec);

// log_mult - beta (eps/2 + lam)
double log_weight(const BathTerm& term, double beta);

double logsumexp(std::span<const double> xs);

// Shifts and exponentiates log-weights so that they sum to one.
std::vector<double> normalized_weights(std::span<const double> log_w);

// Exact class counts of the uniform Ising chain, keyed by (m, s) with
// m = sum (-1)^{n_i} and s = sum (-1)^{n_i}(-1)^{n_{i+1}}. Requires N <= 64.
using ClassCounts = std::map<std::pair<int, int>, std::uint64_t>;
ClassCounts ising_class_counts_exact(int n_spins, Boundary boundary);

// Same classes with log-multiplicities, any N.
std::map<std::pair<int, int>, double> ising_class_log_counts(int n_spins, Boundary boundary);

}  // namespace spinbath
