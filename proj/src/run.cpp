#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "scenario_json.hpp"
#include "spinbath/errors.hpp"
#include "spinbath/scenario.hpp"

#ifndef SPINBATH_VERSION
#define SPINBATH_VERSION "0.0.0-dev"
#endif

namespace spinbath {

using nlohmann::json;

namespace {

bool wants_woc(Variants v) { return v != Variants::wc; }
bool wants_wc(Variants v) { return v != Variants::woc; }

void append_number(std::string& out, double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  out.append(buf, res.ptr);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  f.close();
  if (!f) throw IoError("failed writing " + path);
}

std::string plot_script(const Scenario& s, const Computation& c, const std::string& csv_name) {
  const bool single = s.mode() == Mode::single;
  std::string out;
  out += "# Columns of " + csv_name + ":";
  out += " t";
  for (const auto& ch : c.series.channels) out += " " + ch.name;
  out += "\n";
  out += "set datafile separator ','\n";
  out += "set xlabel 't'\n";
  out += single ? "set ylabel 'Bloch component'\n" : "set ylabel 'concurrence'\n";
  out += "set xrange [0:";
  append_number(out, s.grid.t_max);
  out += "]\n";
  out += single ? "set yrange [-1:1]\n" : "set yrange [0:1]\n";
  out += "set key outside\n";
  out += "plot for [i=2:" + std::to_string(c.series.channels.size() + 1) + "] '" + csv_name +
         "' using 1:i with lines title columnheader(i)\n";
  return out;
}

}  // namespace

std::string_view code_version() { return SPINBATH_VERSION; }

Computation compute(const Scenario& s, Exec exec) {
  Computation c;
  c.notes = validate(s);
  const auto ens = build_ensemble(s.bath, s.engine, s.bruteforce_cap);
  c.source = ens.source;
  c.n_terms = ens.terms.size();
  const auto grid = uniform_grid(s.grid.t_max, s.grid.points);
  c.series.grid = grid;
  c.series.meta["beta"] = s.bath.beta;
  c.series.meta["n_spins"] = s.bath.n_spins;

  if (const auto* sys = std::get_if<SystemSpec>(&s.system)) {
    const auto take = [&c](TimeSeries part) {
      for (auto& ch : part.channels) c.series.add(std::move(ch.name), std::move(ch.values));
      for (const auto& [k, v] : part.meta) c.series.meta[k] = v;
    };
    if (wants_woc(s.variants)) take(evolve_woc(*sys, ens, grid, exec));
    if (wants_wc(s.variants)) take(evolve_wc(*sys, ens, grid, exec));
    return c;
  }

  const auto& q = std::get<TwoQubitSpec>(s.system);
  const auto add = [&](bool correlated, const std::string& label) {
    const auto states = evolve_2q(q, ens, grid, correlated, exec);
    auto cs = concurrence_series(grid, states);
    c.esd.emplace_back(label, cs.esd_intervals);
    c.clipped.emplace_back(label, cs.clipped);
    c.series.add(label, std::move(cs.c));
  };
  if (wants_woc(s.variants)) add(false, "c_woc");
  if (wants_wc(s.variants)) add(true, "c_wc");
  return c;
}

std::string format_csv(const TimeSeries& ts) {
  std::string out = "t";
  for (const auto& ch : ts.channels) out += "," + ch.name;
  out += "\n";
  out.reserve(out.size() + ts.grid.size() * (ts.channels.size() + 1) * 24);
  for (std::size_t k = 0; k < ts.grid.size(); ++k) {
    append_number(out, ts.grid[k]);
    for (const auto& ch : ts.channels) {
      out += ',';
      append_number(out, ch.values[k]);
    }
    out += '\n';
  }
  return out;
}

RunResult run(const Scenario& s, Exec exec) {
  const auto start = std::chrono::steady_clock::now();
  RunResult r;
  r.computation = compute(s, exec);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const std::filesystem::path prefix(s.output);
  if (prefix.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(prefix.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + prefix.parent_path().string() + ": " + ec.message());
  }
  r.csv_path = s.output + ".csv";
  r.meta_path = s.output + ".meta.json";
  r.plot_path = s.output + ".gp";

  const auto& c = r.computation;
  json meta;
  meta["scenario"] = scenario_json(s);
  meta["engine"] = {{"requested", to_string(s.engine)},
                    {"ensemble_source", to_string(c.source)},
                    {"bath_classes", c.n_terms}};
  meta["notes"] = c.notes;
  meta["timing_seconds"] = r.seconds;
  meta["code_version"] = code_version();
#ifdef _OPENMP
  meta["threads"] = omp_get_max_threads();
#else
  meta["threads"] = 1;
#endif
  meta["time_axis"] = "uniform grid on [0, t_max]; the default t_max = 10 is a display choice";
  json channels = json::array();
  for (const auto& ch : c.series.channels) channels.push_back(ch.name);
  meta["channels"] = channels;
  meta["series_meta"] = c.series.meta;
  if (s.mode() == Mode::two_qubit) {
    json esd = json::object();
    for (const auto& [label, intervals] : c.esd) {
      json list = json::array();
      for (const auto& [a, b] : intervals) list.push_back({a, b});
      esd[label] = list;
    }
    meta["esd_intervals"] = esd;
    json clipped = json::object();
    for (const auto& [label, n] : c.clipped) clipped[label] = n;
    meta["clipped_states"] = clipped;
  }

  write_file(r.csv_path, format_csv(c.series));
  write_file(r.meta_path, meta.dump(2) + "\n");
  write_file(r.plot_path, plot_script(s, c, prefix.filename().string() + ".csv"));
  return r;
}

}  // namespace spinbath
