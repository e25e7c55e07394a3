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

#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"
#include "spinforge/errors.hpp"
#include "spinforge/io.hpp"
#include "spinforge/product_operators.hpp"

namespace spinforge {
namespace {

using json = nlohmann::json;

const std::string kData = SPINFORGE_DATA_DIR;

std::string pair_json() {
  return R"({"spins":[{"label":"I","shift_hz":0},{"label":"S","shift_hz":0}],
             "j_hz":[[0,200],[200,0]]})";
}

std::string program(const std::string& events, const std::string& extra = "") {
  return R"({"schema":"spinforge/1","system":)" + pair_json() + extra +
         R"(,"events":)" + events + "}";
}

TEST(SystemJson, RoundTrip) {
  const SpinSystem sys = system_from_json(pair_json());
  ASSERT_EQ(sys.size(), 2);
  EXPECT_EQ(sys.j_hz(0, 1), 200.0);
  EXPECT_EQ(sys.spin(1).label, "S");
  EXPECT_EQ(sys.spin(0).polarisation, Spin{}.polarisation);
  const SpinSystem again = system_from_json(system_to_json(sys));
  EXPECT_EQ(system_to_json(again), system_to_json(sys));
}

TEST(SystemJson, RejectsUnknownFieldsAndBadShapes) {
  EXPECT_THROW(system_from_json(R"({"spins":[{"shfit_hz":1}]})"), ValidationError);
  EXPECT_THROW(system_from_json(R"({"spins":[{},{}],"j_hz":[[0,1]]})"), ValidationError);
  EXPECT_THROW(system_from_json(R"({"spins":[]})"), ValidationError);
}

TEST(ProgramParse, SyntaxErrorsCarryLineAndColumn) {
  const std::string text = "{\"schema\":\"spinforge/1\",\n  \"events\": [ {\"type\" 1} ]}";
  try {
    parse_program(text);
    FAIL() << "no error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 23);
  }
}

TEST(ProgramParse, ValidationErrorsNameTheEvent) {
  try {
    parse_program(program(R"([{"type":"delay","t_s":1},{"type":"pulse","spins":[0],"angel_deg":90}])"));
    FAIL() << "no error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("event 1 (pulse)"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("angel_deg"), std::string::npos);
  }
  EXPECT_THROW(parse_program(R"({"schema":"spinforge/2","events":[]})"), ValidationError);
  try {
    run_program(program(R"([{"type":"delay","t_s":-1}])"), {});
    FAIL() << "no error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("event 0"), std::string::npos) << e.what();
  }
}

TEST(ProgramParse, AnglesAreDegrees) {
  const PulseProgram p = parse_program(
      program(R"([{"type":"pulse","spins":[0,1],"angle_deg":90,"phase_deg":-90}])"));
  const auto& pulse = std::get<PulseOp>(p.events[0]);
  EXPECT_NEAR(pulse.angle, kPi / 2, 1e-15);
  EXPECT_NEAR(pulse.phase, -kPi / 2, 1e-15);
  const EventList back = events_from_json(events_to_json(p.events));
  EXPECT_NEAR(std::get<PulseOp>(back[0]).angle, pulse.angle, 1e-15);
}

TEST(GradientEchoGuard, EqualAreasNeedExplicitConsent) {
  const std::string echo =
      R"([{"type":"crush","area":1},{"type":"pulse","spins":[0],"angle_deg":180},
          {"type":"crush","area":-1}])";
  EXPECT_THROW(parse_program(program(echo)), ValidationError);
  const std::string allowed =
      R"([{"type":"crush","area":1},{"type":"pulse","spins":[0],"angle_deg":180},
          {"type":"crush","area":-1,"allow_echo":true}])";
  EXPECT_NO_THROW(parse_program(program(allowed)));
  EXPECT_NO_THROW(parse_program(program(echo, R"(,"options":{"gradient_echo_guard":false})")));
  EXPECT_NO_THROW(parse_program(program(R"([{"type":"crush","area":1},{"type":"crush","area":2}])")));
}

TEST(GradientEchoGuard, EnsembleModelShowsTheEchoTheGuardPrevents) {
  // 90x, crush(+1), 180x, crush(-1 with consent): the ensemble refocuses the
  // transverse term that the analytic model destroys.
  const std::string events =
      R"([{"type":"pulse","spins":[0],"angle_deg":90},{"type":"crush","area":1},
          {"type":"pulse","spins":[0],"angle_deg":180},
          {"type":"crush","area":1,"allow_echo":true}])";
  const json ens = json::parse(run_program(
      program(events, R"(,"options":{"crush_model":"ensemble"})"), {}));
  const json ana = json::parse(run_program(program(events), {}));
  EXPECT_NEAR(std::abs(ens["deviation"].value("Iy", 0.0)), 1.0, 1e-9);
  EXPECT_EQ(ana["deviation"].count("Iy"), 0u);
}

TEST(Run, EmptyProgramReportsThermalExpansion) {
  const SpinSystem sys = system_from_json(pair_json());
  const json r = json::parse(run_program(program("[]"), {}));
  const ProductOperatorExpansion e =
      pauli_expand(deviation(thermal_state_linear(sys), thermal_scale(sys)).matrix);
  for (const auto& [label, v] : r["deviation"].items()) {
    EXPECT_NEAR(v.get<double>(), e.coefficient(label), 1e-15) << label;
  }
  EXPECT_NEAR(r["deviation"]["Iz"].get<double>(), 1.0, 1e-9);
  EXPECT_EQ(r["passed"], true);
}

TEST(Run, ReportsAreByteIdentical) {
  RunRequest req;
  req.base_dir = kData + "/programs";
  const std::string text = R"({"schema":"spinforge/1","system_file":"../systems/homonuclear_pair.json",
      "options":{"tomography":true},
      "events":[{"type":"pulse","spins":[0],"angle_deg":90,"phase_deg":0}]})";
  EXPECT_EQ(run_program(text, req), run_program(text, req));
}

TEST(Run, ExpectationFailureIsReportedNotThrown) {
  const json r = json::parse(run_program(
      program("[]", R"(,"expect":{"deviation":{"Iz":0.5}})"), {}));
  EXPECT_EQ(r["passed"], false);
  EXPECT_EQ(r["checks"][0]["passed"], false);
}

TEST(Run, TomographyOfFinalStateMatchesItsExpansion) {
  const json r = json::parse(run_program(
      program(R"([{"type":"pulse","spins":[0],"angle_deg":90,"phase_deg":90}])",
              R"(,"options":{"tomography":true})"),
      {}));
  for (const auto& [label, v] : r["tomography"]["coefficients"].items()) {
    EXPECT_NEAR(v.get<double>(), r["deviation"].value(label, 0.0), 1e-8) << label;
  }
}

TEST(StateJson, AllKinds) {
  const SpinSystem sys = system_from_json(pair_json());
  const DensityMatrix bell = state_from_json(
      R"({"type":"ket","amplitudes":[[0.7071067811865476,0],0,0,[0.7071067811865476,0]]})", sys);
  EXPECT_NEAR(bell.matrix()(0, 3).real(), 0.5, 1e-15);
  const DensityMatrix pp = state_from_json(R"({"type":"pseudo_pure","epsilon":0.25,"target":"10"})", sys);
  EXPECT_NEAR(pp.matrix()(2, 2).real(), 0.75 / 4 + 0.25, 1e-15);
  const DensityMatrix po =
      state_from_json(R"({"type":"product_operator","terms":{"Ix":1},"scale":0.1})", sys);
  EXPECT_LT(max_abs(po.matrix() - (Matrix::Identity(4, 4) / 4.0 + 0.1 * basis_operator("Ix", 2))),
            1e-15);
  EXPECT_THROW(state_from_json(R"({"type":"ket","amplitudes":[1,0]})", sys), ValidationError);
  EXPECT_THROW(state_from_json(R"({"type":"pseudo_pure","epsilon":0.1,"target":"2"})", sys),
               ValidationError);
}

TEST(ChannelJson, RoundTripIsExact) {
  const KrausChannel k = generalized_amplitude_damping(0.3, 1.0, 0.2);
  const KrausChannel back = channel_from_json(channel_to_json(k));
  ASSERT_EQ(back.operators.size(), k.operators.size());
  for (std::size_t i = 0; i < k.operators.size(); ++i) {
    EXPECT_EQ(max_abs(back.operators[i] - k.operators[i]), 0.0);
  }
  EXPECT_THROW(channel_from_json(R"({"operators":[{"rows":2,"cols":2,"data":[1,0,0]}]})"),
               ValidationError);
}

TEST(GatesJson, RoundTrip) {
  const std::vector<GateSpec> net = {cnot(0, 1, 0), GateSpec{GateName::H, {1}}};
  const auto back = gates_from_json(gates_to_json(net));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].control_state, 0);
  EXPECT_EQ(back[1].name, GateName::H);
  EXPECT_THROW(gates_from_json(R"([{"name":"CNOT","targets":[0]}])"), ValidationError);
}

TEST(Reports, Bounds) {
  const json b = json::parse(bounds_report(2, 1e-5, false));
  EXPECT_NEAR(b["lower"].get<double>(), 1.0 / 9.0, 1e-15);
  EXPECT_NEAR(b["upper"].get<double>(), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(b["peres"].get<double>(), 1.0 / 3.0, 1e-15);
  const std::string csv = bounds_report(3, 1e-5, true);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "n,warren_exact,warren_approx,entanglement_lower,entanglement_upper");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

TEST(Reports, AlgorithmRequests) {
  const json g = json::parse(run_algorithm(R"({"name":"grover","n":2,"mark":["11"]})"));
  EXPECT_EQ(g["answer"], "11");
  EXPECT_NEAR(g["probabilities"][3].get<double>(), 1.0, 1e-12);
  const json s = json::parse(run_algorithm(R"({"name":"gauss","N":15,"l":3,"M":5})"));
  EXPECT_NEAR(s["values"]["abs_A"].get<double>(), 1.0, 1e-12);
  EXPECT_THROW(run_algorithm(R"({"name":"shor"})"), ValidationError);
  EXPECT_THROW(run_algorithm(R"({"name":"grover","n":2,"mark":["111"]})"), ValidationError);
}

TEST(Reports, GrapeFileRoundTrip) {
  const json out = json::parse(run_grape(R"({"target":"x90"})", 1));
  EXPECT_GE(out["fidelity"].get<double>(), 0.999);
  const ControlSequence c = control_sequence_from_json(out.dump());
  EXPECT_EQ(c.segments.size(), 10u);
  EXPECT_EQ(run_grape(R"({"target":"x90"})", 1), run_grape(R"({"target":"x90"})", 1));
}

TEST(Reports, SpectrumCsvHeader) {
  const std::string csv = spectrum_report(
      R"({"system":{"spins":[{"shift_hz":100}]},"state":{"type":"product_operator","terms":{"Ix":1}},"points":256})");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "frequency_hz,real,imag");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 257);
}

}  // namespace
}  // namespace spinforge
