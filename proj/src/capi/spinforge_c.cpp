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

#include "spinforge/spinforge.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <optional>
#include <string>

#include "spinforge/channels.hpp"
#include "spinforge/errors.hpp"
#include "spinforge/io.hpp"
#include "spinforge/product_operators.hpp"
#include "spinforge/states.hpp"

struct sf_system {
  spinforge::SpinSystem value;
};

struct sf_state {
  spinforge::DensityMatrix value;
};

namespace {

thread_local std::string g_message;
thread_local int g_line = 0;
thread_local int g_column = 0;

void clear_error() {
  g_message.clear();
  g_line = 0;
  g_column = 0;
}

template <typename F>
sf_status guarded(F&& body) {
  clear_error();
  try {
    body();
    return SF_OK;
  } catch (const spinforge::ParseError& e) {
    g_message = e.what();
    g_line = e.line();
    g_column = e.column();
    return SF_ERROR_PARSE;
  } catch (const spinforge::ValidationError& e) {
    g_message = e.what();
    return SF_ERROR_VALIDATION;
  } catch (const spinforge::NumericalError& e) {
    g_message = e.what();
    return SF_ERROR_NUMERICAL;
  } catch (const std::bad_alloc&) {
    g_message = "out of memory";
    return SF_ERROR_RUNTIME;
  } catch (const std::exception& e) {
    g_message = e.what();
    return SF_ERROR_RUNTIME;
  }
}

sf_status null_argument(const char* name) {
  clear_error();
  g_message = std::string("null argument: ") + name;
  return SF_ERROR_NULL_ARGUMENT;
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* sf_version(void) { return "1.0.0"; }

const char* sf_last_error_message(void) { return g_message.c_str(); }

void sf_last_error_location(int* line, int* column) {
  if (line != nullptr) *line = g_line;
  if (column != nullptr) *column = g_column;
}

void sf_string_free(char* text) { std::free(text); }

sf_status sf_system_from_json(const char* json, sf_system** out) {
  if (json == nullptr) return null_argument("json");
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = new sf_system{spinforge::system_from_json(json)}; });
}

sf_status sf_system_homonuclear(int n, double j_hz, sf_system** out) {
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = new sf_system{spinforge::SpinSystem::homonuclear(n, j_hz)}; });
}

sf_status sf_system_to_json(const sf_system* sys, char** out) {
  if (sys == nullptr) return null_argument("sys");
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = duplicate(spinforge::system_to_json(sys->value)); });
}

int sf_system_size(const sf_system* sys) { return sys == nullptr ? 0 : sys->value.size(); }

void sf_system_free(sf_system* sys) { delete sys; }

sf_status sf_state_thermal(const sf_system* sys, sf_state** out) {
  if (sys == nullptr) return null_argument("sys");
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = new sf_state{spinforge::thermal_state_linear(sys->value)}; });
}

sf_status sf_state_from_json(const sf_system* sys, const char* json, sf_state** out) {
  if (sys == nullptr) return null_argument("sys");
  if (json == nullptr) return null_argument("json");
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = new sf_state{spinforge::state_from_json(json, sys->value)}; });
}

sf_status sf_state_run_events(sf_state* state, const sf_system* sys, const char* events_json,
                              int relaxation) {
  if (state == nullptr) return null_argument("state");
  if (sys == nullptr) return null_argument("sys");
  if (events_json == nullptr) return null_argument("events_json");
  return guarded([&] {
    if (state->value.qubits() != sys->value.size()) {
      throw spinforge::ValidationError("state and system sizes differ");
    }
    const spinforge::EventList events = spinforge::events_from_json(events_json);
    spinforge::validate_events(sys->value, events);
    spinforge::RunOptions options;
    options.relaxation = relaxation != 0;
    state->value = spinforge::run_events(state->value, sys->value, events, options);
  });
}

sf_status sf_state_deviation_json(const sf_state* state, const sf_system* sys, char** out) {
  if (state == nullptr) return null_argument("state");
  if (sys == nullptr) return null_argument("sys");
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    const auto dev = spinforge::deviation(state->value, spinforge::thermal_scale(sys->value));
    const auto e = spinforge::pauli_expand(dev.matrix);
    std::string text = "{";
    bool first = true;
    for (const std::string& label : spinforge::basis_labels(e.qubits)) {
      const double c = e.coefficient(label);
      if (std::abs(c) <= 1e-10) continue;
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", c);
      text += (first ? "\"" : ", \"") + label + "\": " + buf;
      first = false;
    }
    *out = duplicate(text + "}");
  });
}

sf_status sf_state_populations(const sf_state* state, double* out, size_t capacity,
                               size_t* count) {
  if (state == nullptr) return null_argument("state");
  return guarded([&] {
    const auto p = spinforge::populations(state->value);
    if (count != nullptr) *count = p.size();
    if (out != nullptr) {
      for (size_t i = 0; i < p.size() && i < capacity; ++i) out[i] = p[i];
    }
  });
}

void sf_state_free(sf_state* state) { delete state; }

sf_status sf_run_program(const char* program_json, const char* system_json,
                         const char* state_json, const char* base_dir, const char* out_dir,
                         char** report) {
  if (program_json == nullptr) return null_argument("program_json");
  if (report == nullptr) return null_argument("report");
  return guarded([&] {
    spinforge::RunRequest request;
    if (system_json != nullptr) request.system_json = system_json;
    if (state_json != nullptr) request.state_json = state_json;
    if (base_dir != nullptr) request.base_dir = base_dir;
    if (out_dir != nullptr) request.out_dir = out_dir;
    *report = duplicate(spinforge::run_program(program_json, request));
  });
}

sf_status sf_run_algorithm(const char* request_json, char** report) {
  if (request_json == nullptr) return null_argument("request_json");
  if (report == nullptr) return null_argument("report");
  return guarded([&] { *report = duplicate(spinforge::run_algorithm(request_json)); });
}

sf_status sf_run_grape(const char* request_json, uint64_t seed, char** out) {
  if (request_json == nullptr) return null_argument("request_json");
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = duplicate(spinforge::run_grape(request_json, seed)); });
}

sf_status sf_run_tomography(const char* request_json, char** report) {
  if (request_json == nullptr) return null_argument("request_json");
  if (report == nullptr) return null_argument("report");
  return guarded([&] { *report = duplicate(spinforge::run_tomography(request_json)); });
}

sf_status sf_bounds(int n, double x, int csv, char** out) {
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = duplicate(spinforge::bounds_report(n, x, csv != 0)); });
}

sf_status sf_spectrum(const char* request_json, char** out) {
  if (request_json == nullptr) return null_argument("request_json");
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = duplicate(spinforge::spectrum_report(request_json)); });
}

}  // extern "C"
