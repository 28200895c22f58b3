// Copyright 2026 The mpxcount Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <vector>

#include "mpx/hilbert.hpp"

namespace mpx {

enum class EnvelopeKind { gaussian, square, comb };

struct Tone {
  double offset = 0.0;  // MHz
  double phase = 0.0;   // rad
  bool operator==(const Tone&) const = default;
};

// Times in us, frequencies in MHz.
struct Envelope {
  EnvelopeKind kind = EnvelopeKind::gaussian;
  EnvelopeKind base = EnvelopeKind::gaussian;  // window shape when kind == comb
  double duration = 0.1;
  double width = 0.025;
  double amplitude = 1.0;
  double delay = 0.0;
  double phase = 0.0;
  std::vector<Tone> tones;
  bool operator==(const Envelope&) const = default;

  double start() const { return delay; }
  double end() const { return delay + duration; }
  double center() const { return delay + 0.5 * duration; }
};

Envelope gaussian_pulse(double duration, double width, double delay = 0.0, double amplitude = 1.0);
Envelope square_pulse(double duration, double delay = 0.0, double amplitude = 1.0);

// Tones at {0, -spacing, ..., -(n-1) spacing} on top of base; phases default to zero.
Envelope make_comb(int n_tones, double spacing, const Envelope& base, const std::vector<double>& phases = {});

// Real window without the comb factor.
double window(const Envelope& env, double t);
// Unwindowed oscillating factor sum_k exp(2 pi i df_k t + i phi_k).
cplx comb_factor(const Envelope& env, double t);
cplx evaluate(const Envelope& env, double t);

// Trapezoid integral of the window over its support.
double window_area(const Envelope& env, int samples = 20001);
double energy(const Envelope& env, int samples = 20001);

enum class DriveForm { lowering_raising, quadrature };

struct DriveSpec {
  std::string target;
  DriveForm form = DriveForm::lowering_raising;
  double strength = 0.0;  // MHz
  Envelope envelope;
  double detuning = 0.0;  // MHz, bookkeeping only
};

void validate(const DriveSpec& d);

}  // namespace mpx
