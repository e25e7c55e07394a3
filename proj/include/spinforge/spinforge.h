/*
 * Copyright 2026 The Spinforge Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SPINFORGE_SPINFORGE_H
#define SPINFORGE_SPINFORGE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SF_API __declspec(dllexport)
#else
#define SF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sf_status {
  SF_OK = 0,
  SF_ERROR_VALIDATION = 1,
  SF_ERROR_PARSE = 2,
  SF_ERROR_NUMERICAL = 3,
  SF_ERROR_RUNTIME = 4,
  SF_ERROR_NULL_ARGUMENT = 5
} sf_status;

typedef struct sf_system sf_system;
typedef struct sf_state sf_state;

SF_API const char* sf_version(void);

/* Message of the last failed call on this thread ("" after success). */
SF_API const char* sf_last_error_message(void);
/* 1-based line and column of the last parse error, 0 when unknown. */
SF_API void sf_last_error_location(int* line, int* column);

/* Strings returned through char** are owned by the caller. */
SF_API void sf_string_free(char* text);

SF_API sf_status sf_system_from_json(const char* json, sf_system** out);
SF_API sf_status sf_system_homonuclear(int n, double j_hz, sf_system** out);
SF_API sf_status sf_system_to_json(const sf_system* sys, char** out);
SF_API int sf_system_size(const sf_system* sys);
SF_API void sf_system_free(sf_system* sys);

SF_API sf_status sf_state_thermal(const sf_system* sys, sf_state** out);
SF_API sf_status sf_state_from_json(const sf_system* sys, const char* json,
                                    sf_state** out);
/* Runs a JSON event array in place. */
SF_API sf_status sf_state_run_events(sf_state* state, const sf_system* sys,
                                     const char* events_json, int relaxation);
/* Deviation coefficients in units of thermal_scale as a JSON object. */
SF_API sf_status sf_state_deviation_json(const sf_state* state,
                                         const sf_system* sys, char** out);
/* Writes up to `capacity` diagonal entries; *count receives 2^n. */
SF_API sf_status sf_state_populations(const sf_state* state, double* out,
                                      size_t capacity, size_t* count);
SF_API void sf_state_free(sf_state* state);

/* system_json and state_json override the program; every argument except
   program_json and report may be NULL. */
SF_API sf_status sf_run_program(const char* program_json,
                                const char* system_json,
                                const char* state_json, const char* base_dir,
                                const char* out_dir, char** report);
SF_API sf_status sf_run_algorithm(const char* request_json, char** report);
SF_API sf_status sf_run_grape(const char* request_json, uint64_t seed,
                              char** out);
SF_API sf_status sf_run_tomography(const char* request_json, char** report);
SF_API sf_status sf_bounds(int n, double x, int csv, char** out);
SF_API sf_status sf_spectrum(const char* request_json, char** out);

#ifdef __cplusplus
}
#endif

#endif /* SPINFORGE_SPINFORGE_H */
