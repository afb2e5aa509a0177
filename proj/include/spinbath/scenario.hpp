#pragma once

// Scenario configuration: JSON parsing and validation, figure presets, and
// execution to CSV / metadata / plot-script artifacts.

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "spinbath/bath.hpp"
#include "spinbath/kernels.hpp"
#include "spinbath/single_spin.hpp"
#include "spinbath/two_qubit.hpp"

namespace spinbath {

enum class Mode { single, two_qubit };
enum class Variants { woc, wc, both };

struct GridSpec {
  double t_max = 10.0;
  int points = 1000;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct Scenario {
  std::string name = "custom";
  std::variant<SystemSpec, TwoQubitSpec> system = SystemSpec{};
  BathSpec bath;
  Variants variants = Variants::both;
  GridSpec grid;
  std::string output = "spinbath_out";
  Engine engine = Engine::automatic;
  int bruteforce_cap = kDefaultBruteforceCap;

  Mode mode() const { return std::holds_alternative<SystemSpec>(system) ? Mode::single : Mode::two_qubit; }
  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Throws ValidationError naming the offending field. Returns notes from the
// bath validation.
std::vector<std::string> validate(const Scenario& s);

// Throws ParseError (byte offset) for malformed JSON and ValidationError
// (field path) for unknown keys, wrong types and violated constraints.
Scenario parse_config(std::string_view text);

// Fully expanded JSON; parse_config(serialize(s)) == s.
std::string serialize(const Scenario& s);

// Field-by-field description of the config format with defaults.
std::string schema_json();

std::vector<std::string> preset_names();
Scenario preset(std::string_view name);  // UnknownPreset

std::string_view to_string(Engine e);
std::string_view to_string(EnsembleSource s);
std::string_view to_string(Variants v);
std::string_view to_string(Boundary b);
Engine parse_engine(std::string_view text);  // ValidationError

// Numbers only, no files. Single-qubit channels are px/py/pz with suffixes
// _woc, _wc and _wc_compact; two-qubit channels are c_woc and c_wc.
struct Computation {
  TimeSeries series;
  EnsembleSource source = EnsembleSource::bruteforce;
  std::size_t n_terms = 0;
  std::vector<std::string> notes;
  std::vector<std::pair<std::string, std::vector<Interval>>> esd;  // two-qubit only
  std::vector<std::pair<std::string, int>> clipped;                 // two-qubit only
};

Computation compute(const Scenario& s, Exec exec = Exec::parallel);

// 17 significant digits, LF line endings, header "t,<channels...>".
std::string format_csv(const TimeSeries& ts);

struct RunResult {
  Computation computation;
  std::string csv_path;
  std::string meta_path;
  std::string plot_path;
  double seconds = 0.0;
};

// Writes <output>.csv, <output>.meta.json and <output>.gp. IoError on
// filesystem failures.
RunResult run(const Scenario& s, Exec exec = Exec::parallel);

std::string_view code_version();

}  // namespace spinbath
