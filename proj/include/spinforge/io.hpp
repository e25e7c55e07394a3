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

#ifndef SPINFORGE_IO_HPP
#define SPINFORGE_IO_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spinforge/algorithms.hpp"
#include "spinforge/channels.hpp"
#include "spinforge/events.hpp"
#include "spinforge/gates.hpp"
#include "spinforge/grape.hpp"
#include "spinforge/readout.hpp"
#include "spinforge/spin_system.hpp"
#include "spinforge/states.hpp"

namespace spinforge {

/// Version tag carried by every document.
inline constexpr const char* kSchema = "spinforge/1";

/// {"spins":[{"label","species","shift_hz","polarisation","t1_s","t2_s"}],
///  "j_hz":[[...]]}. Missing spin fields take the Spin defaults.
SpinSystem system_from_json(const std::string& text);
std::string system_to_json(const SpinSystem& sys);

/// State description shared by programs, tomography and spectra:
///   {"type":"thermal"} (first-order), {"type":"thermal_exact"},
///   {"type":"pseudo_pure","epsilon":e,"target":"01"},
///   {"type":"ket","amplitudes":[[re,im],...]},
///   {"type":"density","matrix":[[[re,im],...],...]},
///   {"type":"product_operator","terms":{"Iz":1},"scale":s}
/// The product-operator form is E/2^n + scale * sum c B_label, with scale
/// defaulting to thermal_scale.
DensityMatrix state_from_json(const std::string& text, const SpinSystem& sys);

/// Row-major complex pairs: {"operators":[{"rows":r,"cols":c,"data":[[re,im],...]}]}.
KrausChannel channel_from_json(const std::string& text);
std::string channel_to_json(const KrausChannel& channel);

/// [{"name":"CNOT","targets":[0,1],"control_state":1}, ...]
std::vector<GateSpec> gates_from_json(const std::string& text);
std::string gates_to_json(const std::vector<GateSpec>& gates);

/// Event records, angles in degrees:
///   {"type":"pulse","spins":[0],"angle_deg":90,"phase_deg":0,"duration_s":0}
///   {"type":"delay","t_s":0.0025}
///   {"type":"frame_z","spin":0,"angle_deg":-90}
///   {"type":"crush","preserve_zero_quantum":true,"area":1,"allow_echo":false}
///   {"type":"measure","spins":[0]}
std::string events_to_json(const EventList& events);
EventList events_from_json(const std::string& text);

struct ProgramExpectation {
  /// Deviation coefficients in units of thermal_scale; absent labels are 0.
  std::optional<std::map<std::string, double>> deviation;
  double deviation_tolerance = 1e-8;
  /// The whole program must implement this network up to a global phase.
  std::optional<std::vector<GateSpec>> propagator;
  double propagator_tolerance = 1e-8;
};

struct SpectrumOptions {
  int points = 4096;
  /// Zero picks a dwell that places every line well inside the band.
  double dwell_s = 0.0;
  double t2_star_s = 0.1;
};

struct PulseProgram {
  std::optional<SpinSystem> system;
  std::string system_file;
  /// State description JSON; thermal when empty.
  std::string initial_state;
  EventList events;
  /// Crush events allowed to share a gradient area with an earlier one.
  std::vector<bool> allow_echo;
  bool gradient_echo_guard = true;
  RunOptions run;
  bool tomography = false;
  SpectrumOptions spectrum;
  ProgramExpectation expect;
};

/// Throws ParseError (with line and column) for malformed JSON and
/// ValidationError naming the offending event or field otherwise.
PulseProgram parse_program(const std::string& text);

/// Rejects crush pairs with equal |area| unless the later one allows an
/// echo: a pulse between them can reverse coherence order and refocus.
void check_gradient_echoes(const PulseProgram& program);

struct RunRequest {
  /// Overrides the program's system.
  std::optional<std::string> system_json;
  /// Overrides the program's initial state.
  std::optional<std::string> state_json;
  /// Directory for a relative system_file.
  std::string base_dir = ".";
  /// When set, the spectrum CSV is written here.
  std::optional<std::string> out_dir;
};

/// Runs a program and returns the JSON report:
///   {"schema","qubits","scale","deviation":{label:c},"prepared_state":
///    {"epsilon","eigenvalues","pauli_expansion"},"checks":[...],"passed",
///    "spectrum_csv","tomography"}
std::string run_program(const std::string& program_text, const RunRequest& request);

/// {"coefficients":{label:value},"residual":r,"rank":k}
std::string tomography_report_json(const TomographyResult& result);
/// Request {"system":{...},"state":{...},"plan":"nine"|"four"}; one-spin
/// systems use the two-experiment plan.
std::string run_tomography(const std::string& request_json);

std::string algorithm_report_json(const AlgorithmReport& report);
/// Request {"name":..., parameters...}; see the CLI help for the fields.
std::string run_algorithm(const std::string& request_json);

std::string control_sequence_to_json(const ControlSequence& c);
ControlSequence control_sequence_from_json(const std::string& text);
/// Request {"target","system","segments","dt_s","max_iters","tol","starts",
/// "amplitude_hz","robust"}; returns the optimised control file with its
/// fidelity and iteration trace.
std::string run_grape(const std::string& request_json, std::uint64_t seed);

/// Warren and entanglement bounds for m = 1..n as JSON or CSV.
std::string bounds_report(int n, double x, bool csv);

/// Request {"system":{...},"state":{...},"points","dwell_s","t2_star_s",
/// "lines":bool}; returns the spectrum CSV (or the line list CSV).
std::string spectrum_report(const std::string& request_json);

}  // namespace spinforge

#endif  // SPINFORGE_IO_HPP
