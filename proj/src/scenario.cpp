#include "spinbath/scenario.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <set>

#include <json.hpp>

#include "scenario_json.hpp"
#include "spinbath/errors.hpp"

namespace spinbath {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void check_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : j.items())
    if (!allowed.contains(key)) throw ValidationError(join(path, key), "unknown key");
}

const json& require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ValidationError(path.empty() ? "<root>" : path, "expected an object");
  return j;
}

double read_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ValidationError(path, "expected a number");
  return j.get<double>();
}

int read_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ValidationError(path, "expected an integer");
  const auto v = j.get<long long>();
  if (v < -1'000'000'000LL || v > 1'000'000'000LL) throw ValidationError(path, "integer out of range");
  return static_cast<int>(v);
}

std::string read_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ValidationError(path, "expected a string");
  return j.get<std::string>();
}

// A scalar is broadcast to every spin; a list is taken as given and its
// length checked by bath validation.
std::vector<double> read_spin_list(const json& j, const std::string& path, int n) {
  if (j.is_number()) return std::vector<double>(static_cast<std::size_t>(std::max(n, 0)), j.get<double>());
  if (!j.is_array()) throw ValidationError(path, "expected a number or a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::pair<double, double> read_pair(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), j.get<double>()};
  if (!j.is_array() || j.size() != 2) throw ValidationError(path, "expected a number or a list of two numbers");
  return {read_number(j[0], path + "[0]"), read_number(j[1], path + "[1]")};
}

template <class E>
E read_enum(const json& j, const std::string& path, const std::map<std::string, E>& names) {
  const auto s = read_string(j, path);
  const auto it = names.find(s);
  if (it == names.end()) {
    std::string allowed;
    for (const auto& [k, v] : names) allowed += (allowed.empty() ? "" : ", ") + k;
    throw ValidationError(path, "unknown value '" + s + "' (allowed: " + allowed + ")");
  }
  return it->second;
}

const std::map<std::string, Mode> kModes{{"single", Mode::single}, {"two_qubit", Mode::two_qubit}};
const std::map<std::string, Boundary> kBoundaries{{"periodic", Boundary::periodic}, {"open", Boundary::open}};
const std::map<std::string, Variants> kVariants{{"woc", Variants::woc}, {"wc", Variants::wc}, {"both", Variants::both}};
const std::map<std::string, Engine> kEngines{
    {"auto", Engine::automatic}, {"bruteforce", Engine::bruteforce}, {"collapsed", Engine::collapsed}};

SystemSpec parse_single_system(const json& j) {
  require_object(j, "system");
  check_keys(j, "system", {"eps0", "eps", "delta0"});
  SystemSpec s;
  if (j.contains("eps0")) s.eps0 = read_number(j["eps0"], "system.eps0");
  if (j.contains("eps")) s.eps = read_number(j["eps"], "system.eps");
  if (j.contains("delta0")) s.delta0 = read_number(j["delta0"], "system.delta0");
  return s;
}

TwoQubitSpec parse_two_qubit_system(const json& j) {
  require_object(j, "system");
  check_keys(j, "system", {"eps0", "eps", "delta0", "kappa", "coupling_scale"});
  TwoQubitSpec s;
  if (j.contains("eps0")) std::tie(s.eps0_1, s.eps0_2) = read_pair(j["eps0"], "system.eps0");
  if (j.contains("eps")) std::tie(s.eps_1, s.eps_2) = read_pair(j["eps"], "system.eps");
  if (j.contains("delta0")) std::tie(s.delta0_1, s.delta0_2) = read_pair(j["delta0"], "system.delta0");
  if (j.contains("kappa")) s.kappa = read_number(j["kappa"], "system.kappa");
  if (j.contains("coupling_scale"))
    std::tie(s.coupling_scale_1, s.coupling_scale_2) = read_pair(j["coupling_scale"], "system.coupling_scale");
  return s;
}

BathSpec parse_bath(const json& j) {
  require_object(j, "bath");
  check_keys(j, "bath", {"n_spins", "couplings", "splittings", "ising", "boundary", "beta"});
  for (const char* key : {"n_spins", "couplings", "beta"})
    if (!j.contains(key)) throw ValidationError(std::string("bath.") + key, "required field is missing");
  BathSpec b;
  b.n_spins = read_int(j["n_spins"], "bath.n_spins");
  if (b.n_spins < 1) throw ValidationError("bath.n_spins", "must be a positive integer");
  b.couplings = read_spin_list(j["couplings"], "bath.couplings", b.n_spins);
  b.splittings = j.contains("splittings") ? read_spin_list(j["splittings"], "bath.splittings", b.n_spins)
                                          : std::vector<double>(b.n_spins, 1.0);
  b.ising = j.contains("ising") ? read_spin_list(j["ising"], "bath.ising", b.n_spins)
                                : std::vector<double>(b.n_spins, 0.0);
  if (j.contains("boundary")) b.boundary = read_enum(j["boundary"], "bath.boundary", kBoundaries);
  b.beta = read_number(j["beta"], "bath.beta");
  return b;
}

template <class E>
std::string name_of(E value, const std::map<std::string, E>& names) {
  for (const auto& [k, v] : names)
    if (v == value) return k;
  return "?";
}

Scenario fig1() {
  Scenario s;
  s.name = "fig1";
  s.system = SystemSpec{4.0, 2.0, 1.0};
  s.bath.n_spins = 50;
  s.bath.couplings.assign(50, 0.01);
  s.bath.splittings.assign(50, 1.0);
  s.bath.ising.assign(50, 0.0);
  s.bath.beta = 1.0;
  s.output = "fig1";
  return s;
}

Scenario fig11() {
  Scenario s = fig1();
  s.name = "fig11";
  s.system = TwoQubitSpec{};  // eps0 = 5, eps = 2, delta0 = 1, kappa = 0
  s.bath.couplings.assign(50, 0.05);
  s.output = "fig11";
  return s;
}

void set_uniform(std::vector<double>& v, double x) { std::fill(v.begin(), v.end(), x); }

void resize_bath(BathSpec& b, int n) {
  b.n_spins = n;
  b.couplings.resize(n, b.couplings.empty() ? 0.0 : b.couplings[0]);
  b.splittings.resize(n, b.splittings.empty() ? 0.0 : b.splittings[0]);
  b.ising.resize(n, b.ising.empty() ? 0.0 : b.ising[0]);
}

using PresetBuilder = std::function<Scenario()>;

const std::vector<std::pair<std::string, PresetBuilder>>& preset_table() {
  static const std::vector<std::pair<std::string, PresetBuilder>> table = [] {
    std::vector<std::pair<std::string, PresetBuilder>> t;
    auto single = [&t](std::string name, std::function<void(Scenario&)> edit) {
      t.emplace_back(name, [name, edit] {
        Scenario s = fig1();
        s.name = name;
        s.output = name;
        edit(s);
        return s;
      });
    };
    single("fig1", [](Scenario&) {});
    single("fig2", [](Scenario& s) { set_uniform(s.bath.couplings, 0.05); });
    single("fig3", [](Scenario& s) { set_uniform(s.bath.couplings, 0.1); });
    single("fig4", [](Scenario& s) {
      set_uniform(s.bath.couplings, 0.05);
      s.bath.beta = 0.1;
    });
    single("fig5", [](Scenario& s) {
      set_uniform(s.bath.couplings, 1.0);
      s.bath.beta = 10.0;
    });
    single("fig6", [](Scenario& s) {
      resize_bath(s.bath, 250);
      s.engine = Engine::collapsed;
    });
    single("fig7", [](Scenario& s) {
      std::get<SystemSpec>(s.system).delta0 = 10.0;
      set_uniform(s.bath.couplings, 0.05);
    });
    single("fig8", [](Scenario& s) {
      std::get<SystemSpec>(s.system).delta0 = 10.0;
      set_uniform(s.bath.couplings, 1.0);
    });
    single("fig9", [](Scenario& s) {
      s.bath.beta = 10.0;
      set_uniform(s.bath.couplings, 1.0);
      set_uniform(s.bath.splittings, 0.01);
    });
    single("fig10", [](Scenario& s) {
      s.system = SystemSpec{5.0, 2.0, 1.0};
      resize_bath(s.bath, 10);
      set_uniform(s.bath.couplings, 0.5);
      set_uniform(s.bath.ising, 0.1);
    });
    t.emplace_back("fig11", [] { return fig11(); });
    t.emplace_back("fig12", [] {
      Scenario s = fig11();
      s.name = s.output = "fig12";
      s.bath.beta = 3.0;
      set_uniform(s.bath.couplings, 0.5);
      return s;
    });
    t.emplace_back("fig13", [] {
      Scenario s = fig11();
      s.name = s.output = "fig13";
      std::get<TwoQubitSpec>(s.system).kappa = 0.5;
      return s;
    });
    return t;
  }();
  return table;
}

}  // namespace

std::vector<std::string> validate(const Scenario& s) {
  std::visit([](const auto& sys) { validate(sys); }, s.system);
  auto notes = validate(s.bath);
  if (s.grid.points < 2) throw ValidationError("grid.points", "must be at least 2");
  if (!(s.grid.t_max > 0.0) || !std::isfinite(s.grid.t_max))
    throw ValidationError("grid.t_max", "must be positive and finite");
  if (s.output.empty()) throw ValidationError("output", "must be a nonempty path prefix");
  if (s.bruteforce_cap < 1 || s.bruteforce_cap > 30) throw ValidationError("bruteforce_cap", "must be in 1..30");
  if (s.engine == Engine::collapsed && !is_uniform_free(s.bath) && !is_uniform_ising(s.bath))
    throw ValidationError("engine", "collapsed engine requires equal g_i, equal epsilon_i and equal alpha_i");
  return notes;
}

Scenario parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(e.byte, e.what());
  }
  require_object(j, "");
  check_keys(j, "", {"name", "mode", "system", "bath", "variants", "grid", "output", "engine", "bruteforce_cap"});
  if (!j.contains("bath")) throw ValidationError("bath", "required field is missing");

  Scenario s;
  if (j.contains("name")) s.name = read_string(j["name"], "name");
  const Mode mode = j.contains("mode") ? read_enum(j["mode"], "mode", kModes) : Mode::single;
  const json system = j.contains("system") ? j["system"] : json::object();
  if (mode == Mode::single)
    s.system = parse_single_system(system);
  else
    s.system = parse_two_qubit_system(system);
  s.bath = parse_bath(j["bath"]);
  if (j.contains("variants")) s.variants = read_enum(j["variants"], "variants", kVariants);
  if (j.contains("grid")) {
    const auto& g = require_object(j["grid"], "grid");
    check_keys(g, "grid", {"t_max", "points"});
    if (g.contains("t_max")) s.grid.t_max = read_number(g["t_max"], "grid.t_max");
    if (g.contains("points")) s.grid.points = read_int(g["points"], "grid.points");
  }
  if (j.contains("output")) s.output = read_string(j["output"], "output");
  if (j.contains("engine")) s.engine = read_enum(j["engine"], "engine", kEngines);
  if (j.contains("bruteforce_cap")) s.bruteforce_cap = read_int(j["bruteforce_cap"], "bruteforce_cap");
  validate(s);
  return s;
}

namespace {

json to_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["mode"] = name_of(s.mode(), kModes);
  if (const auto* sys = std::get_if<SystemSpec>(&s.system)) {
    j["system"] = {{"eps0", sys->eps0}, {"eps", sys->eps}, {"delta0", sys->delta0}};
  } else {
    const auto& q = std::get<TwoQubitSpec>(s.system);
    j["system"] = {{"eps0", {q.eps0_1, q.eps0_2}},
                   {"eps", {q.eps_1, q.eps_2}},
                   {"delta0", {q.delta0_1, q.delta0_2}},
                   {"kappa", q.kappa},
                   {"coupling_scale", {q.coupling_scale_1, q.coupling_scale_2}}};
  }
  j["bath"] = {{"n_spins", s.bath.n_spins},           {"couplings", s.bath.couplings},
               {"splittings", s.bath.splittings},     {"ising", s.bath.ising},
               {"boundary", name_of(s.bath.boundary, kBoundaries)}, {"beta", s.bath.beta}};
  j["variants"] = name_of(s.variants, kVariants);
  j["grid"] = {{"t_max", s.grid.t_max}, {"points", s.grid.points}};
  j["output"] = s.output;
  j["engine"] = name_of(s.engine, kEngines);
  j["bruteforce_cap"] = s.bruteforce_cap;
  return j;
}

}  // namespace

std::string serialize(const Scenario& s) { return to_json(s).dump(2); }

json scenario_json(const Scenario& s) { return to_json(s); }

std::string schema_json() {
  const json field = {
      {"name", {{"type", "string"}, {"default", "custom"}}},
      {"mode", {{"type", "string"}, {"enum", {"single", "two_qubit"}}, {"default", "single"}}},
      {"system",
       {{"single",
         {{"eps0", {{"type", "number"}, {"default", 4.0}, {"meaning", "qubit bias before preparation"}}},
          {"eps", {{"type", "number"}, {"default", 2.0}, {"meaning", "qubit bias after preparation"}}},
          {"delta0", {{"type", "number"}, {"default", 1.0}, {"constraint", ">= 0"}, {"meaning", "tunneling"}}}}},
        {"two_qubit",
         {{"eps0", {{"type", "number | [number, number]"}, {"default", {5.0, 5.0}}}},
          {"eps", {{"type", "number | [number, number]"}, {"default", {2.0, 2.0}}}},
          {"delta0", {{"type", "number | [number, number]"}, {"default", {1.0, 1.0}}, {"constraint", ">= 0"}}},
          {"kappa", {{"type", "number"}, {"default", 0.0}, {"meaning", "qubit-qubit sz sz coupling"}}},
          {"coupling_scale",
           {{"type", "number | [number, number]"},
            {"default", {1.0, 1.0}},
            {"meaning", "per-qubit multiplier of the shared bath coupling"}}}}}}},
      {"bath",
       {{"n_spins", {{"type", "integer"}, {"required", true}, {"constraint", ">= 1"}}},
        {"couplings", {{"type", "number | [number x n_spins]"}, {"required", true}, {"meaning", "g_i"}}},
        {"splittings", {{"type", "number | [number x n_spins]"}, {"default", 1.0}, {"meaning", "epsilon_i"}}},
        {"ising",
         {{"type", "number | [number x n_spins]"},
          {"default", 0.0},
          {"meaning", "alpha_i on bond (i, i+1); last entry unused for an open chain"}}},
        {"boundary", {{"type", "string"}, {"enum", {"periodic", "open"}}, {"default", "periodic"}}},
        {"beta", {{"type", "number"}, {"required", true}, {"constraint", "> 0, finite"}}}}},
      {"variants", {{"type", "string"}, {"enum", {"woc", "wc", "both"}}, {"default", "both"}}},
      {"grid",
       {{"t_max", {{"type", "number"}, {"default", 10.0}, {"constraint", "> 0"}}},
        {"points", {{"type", "integer"}, {"default", 1000}, {"constraint", ">= 2"}}}}},
      {"output", {{"type", "string"}, {"default", "spinbath_out"}, {"meaning", "path prefix of the artifacts"}}},
      {"engine",
       {{"type", "string"},
        {"enum", {"auto", "bruteforce", "collapsed"}},
        {"default", "auto"},
        {"meaning", "auto collapses uniform baths and enumerates the rest"}}},
      {"bruteforce_cap", {{"type", "integer"}, {"default", kDefaultBruteforceCap}, {"constraint", "1..30"}}},
  };
  return json{{"unknown_keys", "rejected"}, {"fields", field}}.dump(2);
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, build] : preset_table()) names.push_back(name);
  return names;
}

Scenario preset(std::string_view name) {
  for (const auto& [n, build] : preset_table())
    if (n == name) return build();
  throw UnknownPreset("unknown preset '" + std::string(name) + "'");
}

std::string_view to_string(Engine e) {
  switch (e) {
    case Engine::automatic: return "auto";
    case Engine::bruteforce: return "bruteforce";
    case Engine::collapsed: return "collapsed";
  }
  return "?";
}

std::string_view to_string(EnsembleSource s) {
  switch (s) {
    case EnsembleSource::bruteforce: return "bruteforce";
    case EnsembleSource::uniform_free: return "uniform_free";
    case EnsembleSource::uniform_ising: return "uniform_ising";
  }
  return "?";
}

std::string_view to_string(Variants v) {
  switch (v) {
    case Variants::woc: return "woc";
    case Variants::wc: return "wc";
    case Variants::both: return "both";
  }
  return "?";
}

std::string_view to_string(Boundary b) { return b == Boundary::periodic ? "periodic" : "open"; }

Engine parse_engine(std::string_view text) { return read_enum(json(std::string(text)), "engine", kEngines); }

}  // namespace spinbath
