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

#include "spinforge/io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "spinforge/composite_pulses.hpp"
#include "spinforge/errors.hpp"
#include "spinforge/evolution.hpp"
#include "spinforge/product_operators.hpp"
#include "spinforge/state_prep.hpp"

namespace spinforge {

using json = nlohmann::ordered_json;

namespace {

constexpr double kDeg = kPi / 180.0;

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    int line = 1;
    int column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string what = e.what();
    const auto pos = what.find(": ", what.find("parse error"));
    if (pos != std::string::npos) what = what.substr(pos + 2);
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + what,
                     line, column);
  }
}

void require_object(const json& j, const std::string& ctx) {
  if (!j.is_object()) throw ValidationError(ctx + ": expected a JSON object");
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                    const std::string& ctx) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || item.key() == a;
    if (!ok) throw ValidationError(ctx + ": unknown field '" + item.key() + "'");
  }
}

double number(const json& j, const char* key, const std::string& ctx,
              std::optional<double> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    throw ValidationError(ctx + ": missing field '" + key + "'");
  }
  if (!j[key].is_number()) throw ValidationError(ctx + ": field '" + key + "' must be a number");
  return j[key].get<double>();
}

long long integer(const json& j, const char* key, const std::string& ctx,
                  std::optional<long long> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    throw ValidationError(ctx + ": missing field '" + key + "'");
  }
  if (!j[key].is_number_integer()) {
    throw ValidationError(ctx + ": field '" + key + "' must be an integer");
  }
  return j[key].get<long long>();
}

bool boolean(const json& j, const char* key, const std::string& ctx, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_boolean()) throw ValidationError(ctx + ": field '" + key + "' must be true or false");
  return j[key].get<bool>();
}

std::string string_field(const json& j, const char* key, const std::string& ctx,
                         std::optional<std::string> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    throw ValidationError(ctx + ": missing field '" + key + "'");
  }
  if (!j[key].is_string()) throw ValidationError(ctx + ": field '" + key + "' must be a string");
  return j[key].get<std::string>();
}

std::vector<int> int_list(const json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key)) return {};
  if (!j[key].is_array()) throw ValidationError(ctx + ": field '" + key + "' must be an array");
  std::vector<int> out;
  for (const auto& v : j[key]) {
    if (!v.is_number_integer()) throw ValidationError(ctx + ": '" + key + "' entries must be integers");
    out.push_back(v.get<int>());
  }
  return out;
}

cplx complex_value(const json& v, const std::string& ctx) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw ValidationError(ctx + ": complex entries are [re, im] pairs");
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const Matrix& m) {
  json data = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(complex_json(m(r, c)));
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Matrix matrix_from(const json& j, const std::string& ctx) {
  require_object(j, ctx);
  const auto rows = integer(j, "rows", ctx);
  const auto cols = integer(j, "cols", ctx);
  if (rows < 1 || cols < 1) throw ValidationError(ctx + ": rows and cols must be positive");
  if (!j.contains("data") || !j["data"].is_array() ||
      j["data"].size() != static_cast<std::size_t>(rows * cols)) {
    throw ValidationError(ctx + ": 'data' must hold rows*cols entries");
  }
  Matrix m(rows, cols);
  for (long long k = 0; k < rows * cols; ++k) {
    m(k / cols, k % cols) = complex_value(j["data"][static_cast<std::size_t>(k)], ctx);
  }
  return m;
}

json system_json(const SpinSystem& sys) {
  json spins = json::array();
  for (const Spin& s : sys.spins()) {
    spins.push_back({{"label", s.label},
                     {"species", s.species},
                     {"shift_hz", s.shift_hz},
                     {"polarisation", s.polarisation},
                     {"t1_s", s.t1_s},
                     {"t2_s", s.t2_s}});
  }
  json j = json::array();
  for (int a = 0; a < sys.size(); ++a) {
    json row = json::array();
    for (int b = 0; b < sys.size(); ++b) row.push_back(sys.j_hz(a, b));
    j.push_back(row);
  }
  return json{{"spins", spins}, {"j_hz", j}};
}

SpinSystem system_from(const json& j) {
  const std::string ctx = "system";
  require_object(j, ctx);
  reject_unknown(j, {"schema", "spins", "j_hz"}, ctx);
  if (!j.contains("spins") || !j["spins"].is_array() || j["spins"].empty()) {
    throw ValidationError("system: 'spins' must be a non-empty array");
  }
  std::vector<Spin> spins;
  for (std::size_t i = 0; i < j["spins"].size(); ++i) {
    const json& s = j["spins"][i];
    const std::string sc = "system spin " + std::to_string(i);
    require_object(s, sc);
    reject_unknown(s, {"label", "species", "shift_hz", "polarisation", "t1_s", "t2_s"}, sc);
    Spin spin;
    spin.label = string_field(s, "label", sc, std::string());
    spin.species = string_field(s, "species", sc, spin.species);
    spin.shift_hz = number(s, "shift_hz", sc, spin.shift_hz);
    spin.polarisation = number(s, "polarisation", sc, spin.polarisation);
    spin.t1_s = number(s, "t1_s", sc, spin.t1_s);
    spin.t2_s = number(s, "t2_s", sc, spin.t2_s);
    spins.push_back(spin);
  }
  const auto n = static_cast<Eigen::Index>(spins.size());
  RealMatrix couplings = RealMatrix::Zero(n, n);
  if (j.contains("j_hz")) {
    const json& m = j["j_hz"];
    if (!m.is_array() || m.size() != spins.size()) {
      throw ValidationError("system: 'j_hz' must be an n x n array");
    }
    for (Eigen::Index a = 0; a < n; ++a) {
      const json& row = m[static_cast<std::size_t>(a)];
      if (!row.is_array() || row.size() != spins.size()) {
        throw ValidationError("system: 'j_hz' must be an n x n array");
      }
      for (Eigen::Index b = 0; b < n; ++b) {
        const json& v = row[static_cast<std::size_t>(b)];
        if (!v.is_number()) throw ValidationError("system: 'j_hz' entries must be numbers");
        couplings(a, b) = v.get<double>();
      }
    }
  }
  return SpinSystem(spins, couplings);
}

std::uint64_t bits_index(const std::string& bits, int n, const std::string& ctx) {
  if (static_cast<int>(bits.size()) != n) {
    throw ValidationError(ctx + ": bit string '" + bits + "' must have " + std::to_string(n) +
                          " bits");
  }
  std::uint64_t v = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw ValidationError(ctx + ": bit strings use 0 and 1");
    v = (v << 1) | static_cast<std::uint64_t>(c - '0');
  }
  return v;
}

DensityMatrix state_from(const json& j, const SpinSystem& sys) {
  const std::string ctx = "state";
  require_object(j, ctx);
  const std::string type = string_field(j, "type", ctx);
  const int n = sys.size();
  if (type == "thermal") {
    reject_unknown(j, {"type"}, ctx);
    return thermal_state_linear(sys);
  }
  if (type == "thermal_exact") {
    reject_unknown(j, {"type"}, ctx);
    return thermal_state(sys);
  }
  if (type == "pseudo_pure") {
    reject_unknown(j, {"type", "epsilon", "target"}, ctx);
    const double eps = number(j, "epsilon", ctx);
    const std::string target = string_field(j, "target", ctx, std::string(n, '0'));
    return pseudo_pure({eps, Ket::basis(n, bits_index(target, n, ctx))});
  }
  if (type == "ket") {
    reject_unknown(j, {"type", "amplitudes"}, ctx);
    if (!j.contains("amplitudes") || !j["amplitudes"].is_array()) {
      throw ValidationError("state: 'amplitudes' must be an array");
    }
    const json& a = j["amplitudes"];
    if (a.size() != (std::size_t{1} << n)) {
      throw ValidationError("state: ket needs 2^n amplitudes");
    }
    Vector v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) {
      v(static_cast<Eigen::Index>(i)) = complex_value(a[i], ctx);
    }
    return density_from_ket(Ket(v));
  }
  if (type == "density") {
    reject_unknown(j, {"type", "matrix"}, ctx);
    if (!j.contains("matrix") || !j["matrix"].is_array()) {
      throw ValidationError("state: 'matrix' must be an array of rows");
    }
    const json& rows = j["matrix"];
    const std::size_t d = std::size_t{1} << n;
    if (rows.size() != d) throw ValidationError("state: density matrix must be 2^n x 2^n");
    Matrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t r = 0; r < d; ++r) {
      if (!rows[r].is_array() || rows[r].size() != d) {
        throw ValidationError("state: density matrix must be 2^n x 2^n");
      }
      for (std::size_t c = 0; c < d; ++c) {
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            complex_value(rows[r][c], ctx);
      }
    }
    return DensityMatrix::from_matrix(m);
  }
  if (type == "product_operator") {
    reject_unknown(j, {"type", "terms", "scale"}, ctx);
    if (!j.contains("terms") || !j["terms"].is_object()) {
      throw ValidationError("state: 'terms' must map labels to coefficients");
    }
    const double scale = number(j, "scale", ctx, thermal_scale(sys));
    const Eigen::Index d = dimension_for(n);
    Matrix m = Matrix::Identity(d, d) / static_cast<double>(d);
    for (const auto& item : j["terms"].items()) {
      if (!item.value().is_number()) throw ValidationError("state: term coefficients must be numbers");
      m += scale * item.value().get<double>() * basis_operator(item.key(), n);
    }
    return DensityMatrix::from_matrix(m);
  }
  throw ValidationError("state: unknown type '" + type + "'");
}

std::vector<GateSpec> gates_from(const json& j, const std::string& ctx) {
  if (!j.is_array()) throw ValidationError(ctx + ": gate network must be an array");
  std::vector<GateSpec> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string gc = ctx + " gate " + std::to_string(i);
    require_object(j[i], gc);
    reject_unknown(j[i], {"name", "targets", "control_state"}, gc);
    GateSpec g;
    g.name = parse_gate_name(string_field(j[i], "name", gc));
    g.targets = int_list(j[i], "targets", gc);
    g.control_state = static_cast<int>(integer(j[i], "control_state", gc, 1));
    if (static_cast<int>(g.targets.size()) != gate_arity(g.name)) {
      throw ValidationError(gc + ": " + gate_name_string(g.name) + " takes " +
                            std::to_string(gate_arity(g.name)) + " targets");
    }
    out.push_back(g);
  }
  return out;
}

json gates_json(const std::vector<GateSpec>& gates) {
  json out = json::array();
  for (const GateSpec& g : gates) {
    json e{{"name", gate_name_string(g.name)}, {"targets", g.targets}};
    if (g.control_state != 1) e["control_state"] = g.control_state;
    out.push_back(e);
  }
  return out;
}

json event_json(const Event& e, bool allow_echo) {
  return std::visit(
      [&](const auto& op) -> json {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, PulseOp>) {
          return {{"type", "pulse"},
                  {"spins", op.spins},
                  {"angle_deg", op.angle / kDeg},
                  {"phase_deg", op.phase / kDeg},
                  {"duration_s", op.duration}};
        } else if constexpr (std::is_same_v<T, DelayOp>) {
          return {{"type", "delay"}, {"t_s", op.t}};
        } else if constexpr (std::is_same_v<T, FrameZOp>) {
          return {{"type", "frame_z"}, {"spin", op.spin}, {"angle_deg", op.angle / kDeg}};
        } else if constexpr (std::is_same_v<T, CrushOp>) {
          json c{{"type", "crush"},
                 {"preserve_zero_quantum", op.preserve_zero_quantum},
                 {"area", op.area}};
          if (allow_echo) c["allow_echo"] = true;
          return c;
        } else {
          return {{"type", "measure"}, {"spins", op.spins}};
        }
      },
      e);
}

Event event_from(const json& j, std::size_t index, bool& allow_echo) {
  std::string ctx = "event " + std::to_string(index);
  require_object(j, ctx);
  const std::string type = string_field(j, "type", ctx);
  ctx += " (" + type + ")";
  allow_echo = false;
  if (type == "pulse") {
    reject_unknown(j, {"type", "spins", "angle_deg", "phase_deg", "duration_s"}, ctx);
    PulseOp p;
    p.spins = int_list(j, "spins", ctx);
    if (p.spins.empty()) throw ValidationError(ctx + ": 'spins' must list at least one spin");
    p.angle = number(j, "angle_deg", ctx) * kDeg;
    p.phase = number(j, "phase_deg", ctx, 0.0) * kDeg;
    p.duration = number(j, "duration_s", ctx, 0.0);
    return p;
  }
  if (type == "delay") {
    reject_unknown(j, {"type", "t_s"}, ctx);
    return DelayOp{number(j, "t_s", ctx)};
  }
  if (type == "frame_z") {
    reject_unknown(j, {"type", "spin", "angle_deg"}, ctx);
    return FrameZOp{static_cast<int>(integer(j, "spin", ctx)), number(j, "angle_deg", ctx) * kDeg};
  }
  if (type == "crush") {
    reject_unknown(j, {"type", "preserve_zero_quantum", "area", "allow_echo"}, ctx);
    CrushOp c;
    c.preserve_zero_quantum = boolean(j, "preserve_zero_quantum", ctx, false);
    c.area = number(j, "area", ctx, 1.0);
    allow_echo = boolean(j, "allow_echo", ctx, false);
    return c;
  }
  if (type == "measure") {
    reject_unknown(j, {"type", "spins"}, ctx);
    return MeasureOp{int_list(j, "spins", ctx)};
  }
  throw ValidationError("event " + std::to_string(index) + ": unknown type '" + type + "'");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json expansion_json(const Matrix& m, double threshold) {
  const ProductOperatorExpansion e = pauli_expand(m);
  json out = json::object();
  for (const std::string& label : basis_labels(e.qubits)) {
    const double c = e.coefficient(label);
    if (std::abs(c) > threshold) out[label] = c;
  }
  return out;
}

json tomography_json(const TomographyResult& r) {
  json coeffs = json::object();
  for (const std::string& label : basis_labels(r.coefficients.qubits)) {
    if (label == basis_labels(r.coefficients.qubits).front()) continue;
    coeffs[label] = r.coefficients.coefficient(label);
  }
  return json{{"coefficients", coeffs}, {"residual", r.residual}, {"rank", r.rank}};
}

TomographyResult tomography_of(const DensityMatrix& rho, const SpinSystem& sys,
                               const std::string& plan_name) {
  std::vector<Vector> data;
  if (sys.size() == 1) {
    for (const auto& e : one_spin_plan().experiments) {
      data.push_back(simulate_experiment(rho.matrix(), sys, e));
    }
    return tomography_1spin(sys, data, thermal_reference(sys));
  }
  if (sys.size() != 2) throw ValidationError("tomography supports one or two spins");
  TomographyPlan plan;
  if (plan_name == "nine") {
    plan = nine_experiment_plan();
  } else if (plan_name == "four") {
    plan = four_experiment_plan();
  } else {
    throw ValidationError("tomography plan must be 'nine' or 'four'");
  }
  for (const auto& e : plan.experiments) data.push_back(simulate_experiment(rho.matrix(), sys, e));
  return tomography_2spin(sys, plan, data, thermal_reference(sys));
}

double auto_dwell(const SpinSystem& sys) {
  double top = 1.0;
  for (int i = 0; i < sys.size(); ++i) {
    double f = std::abs(sys.spin(i).shift_hz);
    for (int k = 0; k < sys.size(); ++k) f += std::abs(sys.j_hz(i, k)) / 2.0;
    top = std::max(top, f);
  }
  return 1.0 / (4.0 * top);
}

json prepared_state_json(const DensityMatrix& rho, double scale) {
  const HermitianEigen eig = hermitian_eigen(rho.matrix());
  json values = json::array();
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) values.push_back(eig.values(i));
  const auto eps = epsilon_of(rho);
  return json{{"epsilon", eps ? json(*eps) : json(nullptr)},
              {"eigenvalues", values},
              {"pauli_expansion", expansion_json(deviation(rho, scale).matrix, 1e-10)}};
}

}  // namespace

SpinSystem system_from_json(const std::string& text) { return system_from(parse_text(text)); }

std::string system_to_json(const SpinSystem& sys) {
  json j{{"schema", kSchema}};
  j.update(system_json(sys));
  return j.dump(2);
}

DensityMatrix state_from_json(const std::string& text, const SpinSystem& sys) {
  return state_from(parse_text(text), sys);
}

KrausChannel channel_from_json(const std::string& text) {
  const json j = parse_text(text);
  require_object(j, "channel");
  reject_unknown(j, {"schema", "operators"}, "channel");
  if (!j.contains("operators") || !j["operators"].is_array() || j["operators"].empty()) {
    throw ValidationError("channel: 'operators' must be a non-empty array");
  }
  KrausChannel k;
  for (std::size_t i = 0; i < j["operators"].size(); ++i) {
    k.operators.push_back(matrix_from(j["operators"][i], "channel operator " + std::to_string(i)));
  }
  return k;
}

std::string channel_to_json(const KrausChannel& channel) {
  json ops = json::array();
  for (const Matrix& m : channel.operators) ops.push_back(matrix_json(m));
  return json{{"schema", kSchema}, {"operators", ops}}.dump(2);
}

std::vector<GateSpec> gates_from_json(const std::string& text) {
  return gates_from(parse_text(text), "network");
}

std::string gates_to_json(const std::vector<GateSpec>& gates) { return gates_json(gates).dump(2); }

std::string events_to_json(const EventList& events) {
  json out = json::array();
  for (const Event& e : events) out.push_back(event_json(e, false));
  return out.dump(2);
}

EventList events_from_json(const std::string& text) {
  const json j = parse_text(text);
  if (!j.is_array()) throw ValidationError("events: expected a JSON array");
  EventList out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    bool echo = false;
    out.push_back(event_from(j[i], i, echo));
  }
  return out;
}

PulseProgram parse_program(const std::string& text) {
  const json j = parse_text(text);
  require_object(j, "program");
  reject_unknown(j, {"schema", "description", "system", "system_file", "initial_state",
                     "options", "events", "expect"},
                 "program");
  const std::string schema = string_field(j, "schema", "program");
  if (schema != kSchema) {
    throw ValidationError("program: unsupported schema '" + schema + "'");
  }
  PulseProgram p;
  if (j.contains("system")) p.system = system_from(j["system"]);
  p.system_file = string_field(j, "system_file", "program", std::string());
  if (j.contains("initial_state")) {
    require_object(j["initial_state"], "initial_state");
    p.initial_state = j["initial_state"].dump();
  }
  if (j.contains("options")) {
    const json& o = j["options"];
    const std::string ctx = "options";
    require_object(o, ctx);
    reject_unknown(o, {"relaxation", "crush_model", "ensemble_samples", "gradient_echo_guard",
                       "tomography", "spectrum"},
                   ctx);
    p.run.relaxation = boolean(o, "relaxation", ctx, false);
    const std::string model = string_field(o, "crush_model", ctx, std::string("analytic"));
    if (model == "analytic") {
      p.run.crush_model = CrushModel::kAnalytic;
    } else if (model == "ensemble") {
      p.run.crush_model = CrushModel::kEnsemble;
    } else {
      throw ValidationError("options: crush_model must be 'analytic' or 'ensemble'");
    }
    p.run.ensemble_samples = static_cast<int>(integer(o, "ensemble_samples", ctx, 64));
    p.gradient_echo_guard = boolean(o, "gradient_echo_guard", ctx, true);
    p.tomography = boolean(o, "tomography", ctx, false);
    if (o.contains("spectrum")) {
      const json& s = o["spectrum"];
      require_object(s, "options.spectrum");
      reject_unknown(s, {"points", "dwell_s", "t2_star_s"}, "options.spectrum");
      p.spectrum.points = static_cast<int>(integer(s, "points", "options.spectrum", 4096));
      p.spectrum.dwell_s = number(s, "dwell_s", "options.spectrum", 0.0);
      p.spectrum.t2_star_s = number(s, "t2_star_s", "options.spectrum", 0.1);
    }
  }
  if (!j.contains("events") || !j["events"].is_array()) {
    throw ValidationError("program: 'events' must be an array");
  }
  for (std::size_t i = 0; i < j["events"].size(); ++i) {
    bool echo = false;
    p.events.push_back(event_from(j["events"][i], i, echo));
    p.allow_echo.push_back(echo);
  }
  if (j.contains("expect")) {
    const json& e = j["expect"];
    const std::string ctx = "expect";
    require_object(e, ctx);
    reject_unknown(e, {"deviation", "deviation_tolerance", "propagator", "propagator_tolerance"},
                   ctx);
    if (e.contains("deviation")) {
      require_object(e["deviation"], "expect.deviation");
      std::map<std::string, double> terms;
      for (const auto& item : e["deviation"].items()) {
        if (!item.value().is_number()) {
          throw ValidationError("expect.deviation: coefficients must be numbers");
        }
        terms[item.key()] = item.value().get<double>();
      }
      p.expect.deviation = terms;
    }
    p.expect.deviation_tolerance = number(e, "deviation_tolerance", ctx, 1e-8);
    if (e.contains("propagator")) p.expect.propagator = gates_from(e["propagator"], "expect.propagator");
    p.expect.propagator_tolerance = number(e, "propagator_tolerance", ctx, 1e-8);
  }
  if (p.gradient_echo_guard) check_gradient_echoes(p);
  return p;
}

void check_gradient_echoes(const PulseProgram& program) {
  std::vector<std::pair<std::size_t, double>> seen;
  for (std::size_t i = 0; i < program.events.size(); ++i) {
    const auto* c = std::get_if<CrushOp>(&program.events[i]);
    if (c == nullptr) continue;
    const bool allowed = i < program.allow_echo.size() && program.allow_echo[i];
    for (const auto& [k, area] : seen) {
      if (!allowed && std::abs(std::abs(c->area) - std::abs(area)) <=
                          1e-12 * std::max(1.0, std::abs(area))) {
        throw ValidationError("event " + std::to_string(i) +
                              " (crush): gradient echo hazard, |area| equals crush event " +
                              std::to_string(k) + "; use a distinct area or set allow_echo");
      }
    }
    seen.push_back({i, c->area});
  }
}

std::string run_program(const std::string& program_text, const RunRequest& request) {
  const PulseProgram program = parse_program(program_text);
  std::optional<SpinSystem> sys;
  if (request.system_json) {
    sys = system_from_json(*request.system_json);
  } else if (program.system) {
    sys = program.system;
  } else if (!program.system_file.empty()) {
    std::filesystem::path path(program.system_file);
    if (path.is_relative()) path = std::filesystem::path(request.base_dir) / path;
    sys = system_from_json(read_file(path));
  } else {
    throw ValidationError("program: no system given (system, system_file or --system)");
  }
  validate_events(*sys, program.events);

  DensityMatrix start = thermal_state_linear(*sys);
  std::string state_name = "thermal";
  const std::string state_text =
      request.state_json ? *request.state_json : program.initial_state;
  if (!state_text.empty()) {
    const json sj = parse_text(state_text);
    start = state_from(sj, *sys);
    if (sj.is_object() && sj.contains("type") && sj["type"].is_string()) {
      state_name = sj["type"].get<std::string>();
    }
  }
  const DensityMatrix final_state = run_events(start, *sys, program.events, program.run);
  const double scale = thermal_scale(*sys);
  const Matrix dev = deviation(final_state, scale).matrix;

  json checks = json::array();
  bool passed = true;
  if (program.expect.deviation) {
    const ProductOperatorExpansion e = pauli_expand(dev);
    double worst = 0.0;
    std::string worst_label;
    std::set<std::string> valid;
    for (const std::string& label : basis_labels(sys->size())) valid.insert(label);
    for (const auto& [label, v] : *program.expect.deviation) {
      if (!valid.count(label)) {
        throw ValidationError("expect.deviation: unknown label '" + label + "'");
      }
    }
    for (const std::string& label : basis_labels(sys->size())) {
      const auto it = program.expect.deviation->find(label);
      const double want = it == program.expect.deviation->end() ? 0.0 : it->second;
      const double err = std::abs(e.coefficient(label) - want);
      if (err > worst) {
        worst = err;
        worst_label = label;
      }
    }
    const bool ok = worst <= program.expect.deviation_tolerance;
    passed = passed && ok;
    checks.push_back({{"name", "deviation"},
                      {"passed", ok},
                      {"max_error", worst},
                      {"worst_label", worst_label},
                      {"tolerance", program.expect.deviation_tolerance}});
  }
  if (program.expect.propagator) {
    const Matrix actual = sequence_propagator(*sys, program.events);
    const Matrix target = network_unitary(*program.expect.propagator, sys->size());
    const PhaseEquivalence eq =
        equal_up_to_global_phase(target, actual, program.expect.propagator_tolerance);
    const double err = max_abs(actual - std::exp(kI * eq.phase) * target);
    passed = passed && eq.equal;
    checks.push_back({{"name", "propagator"},
                      {"passed", eq.equal},
                      {"max_error", err},
                      {"global_phase", eq.phase},
                      {"tolerance", program.expect.propagator_tolerance}});
  }

  json report{{"schema", kSchema},
              {"qubits", sys->size()},
              {"initial_state", state_name},
              {"events", program.events.size()},
              {"scale", scale},
              {"deviation", expansion_json(dev, 1e-10)},
              {"prepared_state", prepared_state_json(final_state, scale)},
              {"checks", checks},
              {"passed", passed}};
  if (program.tomography) report["tomography"] = tomography_json(tomography_of(final_state, *sys, "nine"));
  if (request.out_dir) {
    const double dwell = program.spectrum.dwell_s > 0.0 ? program.spectrum.dwell_s : auto_dwell(*sys);
    const auto fid = synthesize_fid(final_state, *sys, program.spectrum.t2_star_s,
                                    program.spectrum.points, dwell);
    const std::filesystem::path out = std::filesystem::path(*request.out_dir) / "spectrum.csv";
    std::filesystem::create_directories(*request.out_dir);
    std::ofstream f(out, std::ios::binary);
    if (!f) throw Error("cannot write " + out.string());
    f << spectrum_csv(fid_spectrum(fid, dwell));
    report["spectrum_csv"] = out.string();
  } else {
    report["spectrum_csv"] = nullptr;
  }
  return report.dump(2);
}

std::string tomography_report_json(const TomographyResult& result) {
  json j{{"schema", kSchema}};
  j.update(tomography_json(result));
  return j.dump(2);
}

std::string run_tomography(const std::string& request_json) {
  const json j = parse_text(request_json);
  require_object(j, "tomography request");
  reject_unknown(j, {"schema", "system", "state", "plan"}, "tomography request");
  if (!j.contains("system") || !j.contains("state")) {
    throw ValidationError("tomography request: needs 'system' and 'state'");
  }
  const SpinSystem sys = system_from(j["system"]);
  const DensityMatrix rho = state_from(j["state"], sys);
  const std::string plan = string_field(j, "plan", "tomography request", std::string("nine"));
  return tomography_report_json(tomography_of(rho, sys, plan));
}

std::string algorithm_report_json(const AlgorithmReport& r) {
  json values = json::object();
  for (const auto& [k, v] : r.values) values[k] = v;
  return json{{"schema", kSchema},
              {"algorithm", r.algorithm},
              {"answer", r.answer},
              {"measured", r.measured},
              {"probabilities", r.probabilities},
              {"oracle_calls", r.oracle_calls},
              {"flags", r.flags},
              {"values", values},
              {"step_fidelity", r.step_fidelity}}
      .dump(2);
}

namespace {

BooleanOracle oracle_from(const json& j, const std::string& ctx) {
  const int n = static_cast<int>(integer(j, "n", ctx, 1));
  if (j.contains("table")) {
    const std::string t = string_field(j, "table", ctx);
    if (t.size() != (std::size_t{1} << std::clamp(n, 0, 20))) {
      throw ValidationError(ctx + ": 'table' needs 2^n characters");
    }
    std::vector<int> table;
    for (char c : t) {
      if (c != '0' && c != '1') throw ValidationError(ctx + ": 'table' uses 0 and 1");
      table.push_back(c - '0');
    }
    return BooleanOracle(n, table);
  }
  std::vector<std::uint64_t> marked;
  if (j.contains("mark")) {
    if (!j["mark"].is_array()) throw ValidationError(ctx + ": 'mark' must be an array of bit strings");
    for (const auto& m : j["mark"]) {
      if (!m.is_string()) throw ValidationError(ctx + ": 'mark' entries are bit strings");
      marked.push_back(bits_index(m.get<std::string>(), n, ctx));
    }
  }
  return BooleanOracle::marking(n, marked);
}

OracleForm form_from(const json& j, const std::string& ctx) {
  const std::string f = string_field(j, "form", ctx, std::string("ancilla"));
  if (f == "ancilla") return OracleForm::kAncilla;
  if (f == "refined") return OracleForm::kRefined;
  throw ValidationError(ctx + ": form must be 'ancilla' or 'refined'");
}

Ket input_ket(const json& j, const std::string& ctx) {
  return ket_from_angles(number(j, "theta_deg", ctx, 0.0) * kDeg,
                         number(j, "phi_deg", ctx, 0.0) * kDeg);
}

std::string fixed(double v) {
  std::ostringstream ss;
  ss.precision(12);
  ss << v;
  return ss.str();
}

}  // namespace

std::string run_algorithm(const std::string& request_json) {
  const json j = parse_text(request_json);
  const std::string ctx = "algorithm request";
  require_object(j, ctx);
  const std::string name = string_field(j, "name", ctx);
  AlgorithmOptions options;
  if (j.contains("relaxation")) options.relaxation = system_from(j["relaxation"]);
  options.step_time = number(j, "step_time_s", ctx, 0.0);

  if (name == "deutsch") {
    reject_unknown(j, {"name", "f", "form", "relaxation", "step_time_s"}, ctx);
    return algorithm_report_json(deutsch(string_field(j, "f", ctx), form_from(j, ctx), options));
  }
  if (name == "deutsch_jozsa" || name == "dj") {
    reject_unknown(j, {"name", "n", "table", "mark", "form", "relaxation", "step_time_s"}, ctx);
    return algorithm_report_json(deutsch_jozsa(oracle_from(j, ctx), form_from(j, ctx), options));
  }
  if (name == "grover") {
    reject_unknown(j, {"name", "n", "table", "mark", "iterations", "relaxation", "step_time_s"},
                   ctx);
    std::optional<int> iterations;
    if (j.contains("iterations") && !j["iterations"].is_null()) {
      iterations = static_cast<int>(integer(j, "iterations", ctx));
    }
    return algorithm_report_json(grover(oracle_from(j, ctx), iterations, options));
  }
  AlgorithmReport r;
  r.algorithm = name;
  if (name == "counting") {
    reject_unknown(j, {"name", "n", "table", "mark", "repetitions"}, ctx);
    const BooleanOracle f = oracle_from(j, ctx);
    const CountingResult c =
        quantum_counting(f, static_cast<int>(integer(j, "repetitions", ctx, 16)));
    r.oracle_calls = static_cast<int>(c.signal.size()) - 1;
    r.answer = std::to_string(c.estimated_k);
    r.values = {{"frequency", c.frequency}, {"estimated_k", c.estimated_k}};
    r.step_fidelity.clear();
    for (double s : c.signal) r.probabilities.push_back(s);
    r.flags.push_back("probabilities hold the control-spin signal per repetition");
  } else if (name == "gauss") {
    reject_unknown(j, {"name", "N", "l", "M", "tol"}, ctx);
    const long long nn = integer(j, "N", ctx);
    const long long l = integer(j, "l", ctx);
    const int m = static_cast<int>(integer(j, "M", ctx));
    const double tol = number(j, "tol", ctx, 1e-9);
    const cplx a = gauss_sum(nn, l, m);
    r.answer = factor_check(nn, l, m, tol) ? "factor" : "not a factor";
    r.values = {{"abs_A", std::abs(a)}, {"re_A", a.real()}, {"im_A", a.imag()}};
  } else if (name == "zeno") {
    reject_unknown(j, {"name", "t180_s", "k"}, ctx);
    const double p = zeno_run(number(j, "t180_s", ctx, 1e-3), static_cast<int>(integer(j, "k", ctx)));
    r.answer = fixed(p);
    r.values = {{"survival", p}};
  } else if (name == "dense_coding" || name == "dense") {
    reject_unknown(j, {"name", "message"}, ctx);
    const DenseCodingResult d = dense_coding(string_field(j, "message", ctx));
    r.answer = d.decoded;
    r.flags.push_back("bell_state=" + d.bell_state);
    r.values = {{"round_trip", d.decoded == d.transmitted ? 1.0 : 0.0}};
  } else if (name == "teleport") {
    reject_unknown(j, {"name", "theta_deg", "phi_deg", "corrections"}, ctx);
    const std::string mode = string_field(j, "corrections", ctx, std::string("coherent"));
    TeleportCorrection c = TeleportCorrection::kCoherent;
    if (mode == "post_processed") {
      c = TeleportCorrection::kPostProcessed;
    } else if (mode != "coherent") {
      throw ValidationError(ctx + ": corrections must be 'coherent' or 'post_processed'");
    }
    const TeleportResult t = teleport(input_ket(j, ctx), c);
    r.answer = fixed(t.fidelity);
    r.values = {{"fidelity", t.fidelity}, {"alice_purity", purity(t.alice)}};
  } else if (name == "qec") {
    reject_unknown(j, {"name", "theta_deg", "phi_deg", "error_spin", "q"}, ctx);
    if (j.contains("q") && j.contains("error_spin")) {
      throw ValidationError(ctx + ": give either 'q' or 'error_spin'");
    }
    QecResult q;
    if (j.contains("q")) {
      q = phase_flip_qec_channel(input_ket(j, ctx), number(j, "q", ctx));
    } else {
      std::optional<int> spin;
      if (j.contains("error_spin")) spin = static_cast<int>(integer(j, "error_spin", ctx));
      q = phase_flip_qec_round(input_ket(j, ctx), spin);
    }
    r.answer = fixed(q.fidelity);
    r.values = {{"fidelity", q.fidelity}, {"logical_error", 1.0 - q.fidelity}};
  } else {
    throw ValidationError(ctx + ": unknown algorithm '" + name + "'");
  }
  return algorithm_report_json(r);
}

std::string control_sequence_to_json(const ControlSequence& c) {
  json scalings = json::array();
  for (const auto& [w, s] : c.rf_scalings) scalings.push_back(json::array({w, s}));
  return json{{"schema", kSchema}, {"dt_s", c.dt}, {"segments", c.segments}, {"rf_scalings", scalings}}
      .dump(2);
}

ControlSequence control_sequence_from_json(const std::string& text) {
  const json j = parse_text(text);
  const std::string ctx = "control sequence";
  require_object(j, ctx);
  reject_unknown(j, {"schema", "dt_s", "segments", "rf_scalings", "fidelity", "iterations",
                     "converged", "target", "trace"},
                 ctx);
  ControlSequence c;
  c.dt = number(j, "dt_s", ctx);
  if (!j.contains("segments") || !j["segments"].is_array()) {
    throw ValidationError(ctx + ": 'segments' must be an array");
  }
  for (const auto& seg : j["segments"]) {
    if (!seg.is_array()) throw ValidationError(ctx + ": each segment is an array of amplitudes");
    std::vector<double> row;
    for (const auto& v : seg) {
      if (!v.is_number()) throw ValidationError(ctx + ": amplitudes must be numbers");
      row.push_back(v.get<double>());
    }
    c.segments.push_back(row);
  }
  if (j.contains("rf_scalings")) {
    for (const auto& p : j["rf_scalings"]) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
        throw ValidationError(ctx + ": rf_scalings are [weight, scale] pairs");
      }
      c.rf_scalings.push_back({p[0].get<double>(), p[1].get<double>()});
    }
  }
  return c;
}

std::string run_grape(const std::string& request_json, std::uint64_t seed) {
  const json j = parse_text(request_json);
  const std::string ctx = "grape request";
  require_object(j, ctx);
  reject_unknown(j, {"schema", "target", "system", "segments", "dt_s", "max_iters", "tol",
                     "starts", "amplitude_hz", "robust"},
                 ctx);
  const std::string target_name = string_field(j, "target", ctx, std::string("x90"));
  struct Named {
    const char* name;
    int qubits;
  };
  static const Named kTargets[] = {{"x90", 1}, {"y90", 1}, {"x180", 1}, {"y180", 1},
                                   {"cnot", 2}, {"cz", 2}};
  int qubits = 0;
  for (const auto& t : kTargets) {
    if (target_name == t.name) qubits = t.qubits;
  }
  if (qubits == 0) {
    throw ValidationError(ctx + ": target must be x90, y90, x180, y180, cnot or cz");
  }
  SpinSystem sys = qubits == 1 ? SpinSystem({Spin{}}, RealMatrix::Zero(1, 1))
                               : SpinSystem::homonuclear(2, 10.0);
  if (j.contains("system")) sys = system_from(j["system"]);
  if (sys.size() != qubits) throw ValidationError(ctx + ": system size does not match the target");

  Matrix target;
  if (target_name == "x90") target = pulse_propagator({kPi / 2, 0.0});
  if (target_name == "y90") target = pulse_propagator({kPi / 2, kPi / 2});
  if (target_name == "x180") target = pulse_propagator({kPi, 0.0});
  if (target_name == "y180") target = pulse_propagator({kPi, kPi / 2});
  if (target_name == "cnot") target = standard_gate(cnot(0, 1), 2);
  if (target_name == "cz") target = standard_gate(GateSpec{GateName::CZ, {0, 1}}, 2);

  const Matrix drift = coupling_hamiltonian(sys);
  const ControlSystem controls = qubits == 1 ? collective_controls(drift) : selective_controls(drift);

  double max_j = 0.0;
  for (int a = 0; a < sys.size(); ++a) {
    for (int b = 0; b < sys.size(); ++b) max_j = std::max(max_j, std::abs(sys.j_hz(a, b)));
  }
  const int segments = static_cast<int>(integer(j, "segments", ctx, qubits == 1 ? 10 : 50));
  if (segments < 1) throw ValidationError(ctx + ": segments must be >= 1");
  double default_dt = 1e-5;
  if (qubits == 2) {
    if (max_j <= 0.0) throw ValidationError(ctx + ": two-qubit targets need a coupling");
    default_dt = 1.5 / (2.0 * max_j) / segments;
  }
  const double dt = number(j, "dt_s", ctx, default_dt);
  if (!(dt > 0.0)) throw ValidationError(ctx + ": dt_s must be positive");
  OptimizeOptions opt;
  opt.max_iters = static_cast<int>(integer(j, "max_iters", ctx, qubits == 1 ? 200 : 300));
  opt.tol = number(j, "tol", ctx, qubits == 1 ? 1e-4 : 1e-3);
  opt.robust = boolean(j, "robust", ctx, false);
  const int starts = static_cast<int>(integer(j, "starts", ctx, 4));
  const double amp = 2.0 * kPi * number(j, "amplitude_hz", ctx, qubits == 1 ? 1000.0 : 20.0);

  OptimizeResult r;
  if (opt.robust) {
    ControlSequence c0 = initial_controls(segments, dt, static_cast<int>(controls.channels.size()),
                                          amp, seed);
    c0.rf_scalings = default_rf_scalings();
    r = optimize(c0, controls, target, opt);
  } else {
    r = optimize_multistart(segments, dt, controls, target, opt, amp, seed, starts);
  }
  json out = json::parse(control_sequence_to_json(r.controls));
  out["target"] = target_name;
  out["fidelity"] = r.fidelity;
  out["iterations"] = r.iterations;
  out["converged"] = r.converged;
  out["trace"] = r.trace;
  return out.dump(2);
}

std::string bounds_report(int n, double x, bool csv) {
  if (n < 1 || n > 64) throw ValidationError("bounds: n must be between 1 and 64");
  std::ostringstream ss;
  ss.precision(17);
  json rows = json::array();
  if (csv) ss << "n,warren_exact,warren_approx,entanglement_lower,entanglement_upper\n";
  for (int m = 1; m <= n; ++m) {
    const WarrenBound w = warren_bound(m, x);
    json row{{"n", m}, {"warren_exact", w.exact}, {"warren_approx", w.approx}};
    double lower = 0.0;
    double upper = 0.0;
    bool has_ent = m >= 2;
    if (has_ent) {
      const EntanglementBounds e = entanglement_bounds(m);
      lower = e.lower;
      upper = e.upper;
      row["entanglement_lower"] = lower;
      row["entanglement_upper"] = upper;
    } else {
      row["entanglement_lower"] = nullptr;
      row["entanglement_upper"] = nullptr;
    }
    rows.push_back(row);
    if (csv) {
      ss << m << ',' << w.exact << ',' << w.approx << ',';
      if (has_ent) ss << lower << ',' << upper;
      else ss << ',';
      ss << '\n';
    }
  }
  if (csv) return ss.str();
  json out{{"schema", kSchema}, {"x", x}, {"rows", rows}, {"peres", peres_threshold()}};
  if (n >= 2) {
    const EntanglementBounds e = entanglement_bounds(n);
    out["lower"] = e.lower;
    out["upper"] = e.upper;
  }
  return out.dump(2);
}

std::string spectrum_report(const std::string& request_json) {
  const json j = parse_text(request_json);
  const std::string ctx = "spectrum request";
  require_object(j, ctx);
  reject_unknown(j, {"schema", "system", "state", "points", "dwell_s", "t2_star_s", "lines"}, ctx);
  if (!j.contains("system") || !j.contains("state")) {
    throw ValidationError(ctx + ": needs 'system' and 'state'");
  }
  const SpinSystem sys = system_from(j["system"]);
  const DensityMatrix rho = state_from(j["state"], sys);
  if (boolean(j, "lines", ctx, false)) {
    const auto lines = observable_lines(rho.matrix(), sys);
    return lines_csv(lines);
  }
  const int points = static_cast<int>(integer(j, "points", ctx, 4096));
  double dwell = number(j, "dwell_s", ctx, 0.0);
  if (dwell <= 0.0) dwell = auto_dwell(sys);
  const auto fid = synthesize_fid(rho, sys, number(j, "t2_star_s", ctx, 0.1), points, dwell);
  return spectrum_csv(fid_spectrum(fid, dwell));
}

}  // namespace spinforge
