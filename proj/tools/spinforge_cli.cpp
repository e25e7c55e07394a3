// Copyright 2026 The Spinforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spinforge/spinforge.h"

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitValidation = 2;

struct Failure {
  int code;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitRuntime, "cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{kExitRuntime, "cannot write " + path.string()};
  out << text;
}

json parse_file(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw Failure{kExitValidation, path + ": " + e.what()};
  }
}

std::string take(char* owned) {
  std::string s = owned == nullptr ? std::string() : std::string(owned);
  sf_string_free(owned);
  return s;
}

void check(sf_status status, const std::string& what) {
  if (status == SF_OK) return;
  std::string message = what + ": " + sf_last_error_message();
  if (status == SF_ERROR_PARSE) {
    int line = 0;
    int column = 0;
    sf_last_error_location(&line, &column);
    if (line > 0 && message.find("line ") == std::string::npos) {
      message += " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")";
    }
  }
  const bool validation = status == SF_ERROR_VALIDATION || status == SF_ERROR_PARSE ||
                          status == SF_ERROR_NULL_ARGUMENT;
  throw Failure{validation ? kExitValidation : kExitRuntime, message};
}

/// Prints to stdout, or writes `name` under --out when one is given.
void emit(const std::optional<std::string>& out_dir, const std::string& name,
          const std::string& text) {
  if (out_dir) {
    const auto path = std::filesystem::path(*out_dir) / name;
    write_file(path, text.back() == '\n' ? text : text + "\n");
    std::cout << path.string() << "\n";
  } else {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
  }
}

struct Globals {
  std::uint64_t seed = 1;
  std::optional<std::string> out;
  std::string format = "json";
  std::optional<std::string> system;
};

struct RunArgs {
  std::string program;
  std::optional<std::string> state;
};

int cmd_run(const Globals& g, const RunArgs& a) {
  const std::string program = read_file(a.program);
  std::optional<std::string> system;
  if (g.system) system = read_file(*g.system);
  std::optional<std::string> state;
  if (a.state) state = read_file(*a.state);
  const std::string base = std::filesystem::path(a.program).parent_path().string();
  char* report = nullptr;
  check(sf_run_program(program.c_str(), system ? system->c_str() : nullptr,
                       state ? state->c_str() : nullptr, base.empty() ? "." : base.c_str(),
                       g.out ? g.out->c_str() : nullptr, &report),
        a.program);
  const std::string text = take(report);
  emit(g.out, "report.json", text);
  const json parsed = json::parse(text);
  if (!parsed.value("passed", true)) {
    for (const auto& c : parsed["checks"]) {
      if (!c.value("passed", true)) {
        std::cerr << "check failed: " << c.value("name", std::string()) << " (max error "
                  << c.value("max_error", 0.0) << ")\n";
      }
    }
    return kExitRuntime;
  }
  return kExitOk;
}

struct GrapeArgs {
  std::string target = "x90";
  std::optional<int> segments;
  std::optional<double> dt;
  std::optional<int> max_iters;
  std::optional<double> tol;
  std::optional<int> starts;
  std::optional<double> amplitude_hz;
  bool robust = false;
};

int cmd_grape(const Globals& g, const GrapeArgs& a) {
  json req{{"target", a.target}};
  if (g.system) req["system"] = parse_file(*g.system);
  if (a.segments) req["segments"] = *a.segments;
  if (a.dt) req["dt_s"] = *a.dt;
  if (a.max_iters) req["max_iters"] = *a.max_iters;
  if (a.tol) req["tol"] = *a.tol;
  if (a.starts) req["starts"] = *a.starts;
  if (a.amplitude_hz) req["amplitude_hz"] = *a.amplitude_hz;
  if (a.robust) req["robust"] = true;
  char* out = nullptr;
  check(sf_run_grape(req.dump().c_str(), g.seed, &out), "grape");
  const std::string text = take(out);
  if (g.format == "csv") {
    const json parsed = json::parse(text);
    std::ostringstream csv;
    csv.precision(17);
    csv << "iteration,fidelity\n";
    int k = 0;
    for (const auto& f : parsed["trace"]) csv << k++ << ',' << f.get<double>() << '\n';
    emit(g.out, "trace.csv", csv.str());
  } else {
    emit(g.out, "pulse.json", text);
  }
  return kExitOk;
}

struct AlgoArgs {
  std::string name;
  std::optional<int> n;
  std::vector<std::string> mark;
  std::optional<std::string> table;
  std::optional<std::string> f;
  std::optional<std::string> form;
  std::optional<int> iterations;
  std::optional<int> repetitions;
  std::optional<long long> big_n;
  std::optional<long long> l;
  std::optional<int> m;
  std::optional<double> tol;
  std::optional<int> k;
  std::optional<double> t180;
  std::optional<std::string> message;
  std::optional<double> theta;
  std::optional<double> phi;
  std::optional<std::string> corrections;
  std::optional<int> error_spin;
  std::optional<double> q;
  std::optional<double> step_time;
};

int cmd_algo(const Globals& g, const AlgoArgs& a) {
  json req{{"name", a.name}};
  if (a.n) req["n"] = *a.n;
  if (!a.mark.empty()) req["mark"] = a.mark;
  if (a.table) req["table"] = *a.table;
  if (a.f) req["f"] = *a.f;
  if (a.form) req["form"] = *a.form;
  if (a.iterations) req["iterations"] = *a.iterations;
  if (a.repetitions) req["repetitions"] = *a.repetitions;
  if (a.big_n) req["N"] = *a.big_n;
  if (a.l) req["l"] = *a.l;
  if (a.m) req["M"] = *a.m;
  if (a.tol) req["tol"] = *a.tol;
  if (a.k) req["k"] = *a.k;
  if (a.t180) req["t180_s"] = *a.t180;
  if (a.message) req["message"] = *a.message;
  if (a.theta) req["theta_deg"] = *a.theta;
  if (a.phi) req["phi_deg"] = *a.phi;
  if (a.corrections) req["corrections"] = *a.corrections;
  if (a.error_spin) req["error_spin"] = *a.error_spin;
  if (a.q) req["q"] = *a.q;
  if (g.system) req["relaxation"] = parse_file(*g.system);
  if (a.step_time) req["step_time_s"] = *a.step_time;
  char* out = nullptr;
  check(sf_run_algorithm(req.dump().c_str(), &out), "algo " + a.name);
  emit(g.out, "algorithm.json", take(out));
  return kExitOk;
}

struct StateArgs {
  std::string state;
  std::string plan = "nine";
  std::optional<int> points;
  std::optional<double> dwell;
  std::optional<double> t2_star;
  bool lines = false;
};

json system_and_state(const Globals& g, const StateArgs& a) {
  if (!g.system) throw Failure{kExitValidation, "--system is required"};
  return json{{"system", parse_file(*g.system)}, {"state", parse_file(a.state)}};
}

int cmd_tomo(const Globals& g, const StateArgs& a) {
  json req = system_and_state(g, a);
  req["plan"] = a.plan;
  char* out = nullptr;
  check(sf_run_tomography(req.dump().c_str(), &out), "tomo");
  emit(g.out, "tomography.json", take(out));
  return kExitOk;
}

int cmd_spectrum(const Globals& g, const StateArgs& a) {
  json req = system_and_state(g, a);
  if (a.points) req["points"] = *a.points;
  if (a.dwell) req["dwell_s"] = *a.dwell;
  if (a.t2_star) req["t2_star_s"] = *a.t2_star;
  if (a.lines) req["lines"] = true;
  char* out = nullptr;
  check(sf_spectrum(req.dump().c_str(), &out), "spectrum");
  emit(g.out, a.lines ? "lines.csv" : "spectrum.csv", take(out));
  return kExitOk;
}

int cmd_bounds(const Globals& g, int n, double x) {
  char* out = nullptr;
  check(sf_bounds(n, x, g.format == "csv" ? 1 : 0, &out), "bounds");
  emit(g.out, g.format == "csv" ? "bounds.csv" : "bounds.json", take(out));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spinforge: liquid-state NMR quantum information simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sf_version()));

  Globals g;
  auto add_globals = [&](CLI::App* sub) {
    sub->add_option("--seed", g.seed, "Seed for every random choice")->capture_default_str();
    sub->add_option("--out", g.out, "Write outputs into this directory");
    sub->add_option("--format", g.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    sub->add_option("--system", g.system, "Spin system JSON file");
  };

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run a pulse program");
  run_cmd->add_option("--program", run.program, "Pulse program JSON")->required();
  run_cmd->add_option("--state", run.state, "Initial state JSON (overrides the program)");
  add_globals(run_cmd);

  GrapeArgs grape;
  auto* grape_cmd = app.add_subcommand("grape", "Optimise a pulse for a target gate");
  grape_cmd->add_option("--target", grape.target, "x90, y90, x180, y180, cnot or cz")
      ->capture_default_str();
  grape_cmd->add_option("--segments", grape.segments);
  grape_cmd->add_option("--dt", grape.dt, "Segment length in seconds");
  grape_cmd->add_option("--max-iters", grape.max_iters);
  grape_cmd->add_option("--tol", grape.tol, "Stop when 1 - F is below this");
  grape_cmd->add_option("--starts", grape.starts, "Random restarts");
  grape_cmd->add_option("--amplitude-hz", grape.amplitude_hz, "Initial RF amplitude");
  grape_cmd->add_flag("--robust", grape.robust, "Optimise over RF scalings 0.95, 1, 1.05");
  add_globals(grape_cmd);

  AlgoArgs algo;
  auto* algo_cmd = app.add_subcommand(
      "algo", "Run an algorithm: deutsch, dj, grover, counting, gauss, zeno, dense, teleport, qec");
  algo_cmd->add_option("name", algo.name, "Algorithm name")->required();
  algo_cmd->add_option("--n", algo.n, "Input bits");
  algo_cmd->add_option("--mark", algo.mark, "Marked inputs as bit strings");
  algo_cmd->add_option("--table", algo.table, "Truth table, 2^n characters");
  algo_cmd->add_option("--f", algo.f, "Deutsch function f00, f01, f10 or f11");
  algo_cmd->add_option("--form", algo.form, "ancilla or refined");
  algo_cmd->add_option("--iterations", algo.iterations);
  algo_cmd->add_option("--repetitions", algo.repetitions);
  algo_cmd->add_option("--N", algo.big_n, "Number to test");
  algo_cmd->add_option("--l", algo.l, "Trial factor");
  algo_cmd->add_option("--M", algo.m, "Gauss sum length");
  algo_cmd->add_option("--tol", algo.tol);
  algo_cmd->add_option("--k", algo.k, "Zeno measurement count");
  algo_cmd->add_option("--t180", algo.t180, "Zeno 180 degree time in seconds");
  algo_cmd->add_option("--message", algo.message, "Two bits for dense coding");
  algo_cmd->add_option("--theta", algo.theta, "Input state polar angle, degrees");
  algo_cmd->add_option("--phi", algo.phi, "Input state azimuth, degrees");
  algo_cmd->add_option("--corrections", algo.corrections, "coherent or post_processed");
  algo_cmd->add_option("--error-spin", algo.error_spin, "Spin hit by a Z error");
  algo_cmd->add_option("--q", algo.q, "Per-spin phase-flip probability");
  algo_cmd->add_option("--step-time", algo.step_time, "Relaxation time per step (with --system)");
  add_globals(algo_cmd);

  StateArgs tomo;
  auto* tomo_cmd = app.add_subcommand("tomo", "Reconstruct a state from simulated readout");
  tomo_cmd->add_option("--state", tomo.state, "State JSON")->required();
  tomo_cmd->add_option("--plan", tomo.plan, "nine or four")->capture_default_str();
  add_globals(tomo_cmd);

  int bounds_n = 2;
  double bounds_x = 1e-5;
  auto* bounds_cmd = app.add_subcommand("bounds", "Warren and entanglement bounds");
  bounds_cmd->add_option("--n", bounds_n, "Largest spin count")->capture_default_str();
  bounds_cmd->add_option("--x", bounds_x, "Polarisation parameter")->capture_default_str();
  add_globals(bounds_cmd);

  StateArgs spec;
  auto* spectrum_cmd = app.add_subcommand("spectrum", "Spectrum CSV of a state");
  spectrum_cmd->add_option("--state", spec.state, "State JSON")->required();
  spectrum_cmd->add_option("--points", spec.points);
  spectrum_cmd->add_option("--dwell", spec.dwell, "Dwell time in seconds");
  spectrum_cmd->add_option("--t2star", spec.t2_star, "Line decay time in seconds");
  spectrum_cmd->add_flag("--lines", spec.lines, "List lines instead of the spectrum");
  add_globals(spectrum_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*run_cmd) return cmd_run(g, run);
    if (*grape_cmd) return cmd_grape(g, grape);
    if (*algo_cmd) return cmd_algo(g, algo);
    if (*tomo_cmd) return cmd_tomo(g, tomo);
    if (*bounds_cmd) return cmd_bounds(g, bounds_n, bounds_x);
    if (*spectrum_cmd) return cmd_spectrum(g, spec);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitRuntime;
}
