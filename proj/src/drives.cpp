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

#include "mpx/drives.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "mpx/errors.hpp"

namespace mpx {

Envelope gaussian_pulse(double duration, double width, double delay, double amplitude) {
  if (duration <= 0 || width <= 0) throw ConfigError("gaussian pulse needs positive duration and width");
  Envelope e;
  e.kind = e.base = EnvelopeKind::gaussian;
  e.duration = duration;
  e.width = width;
  e.delay = delay;
  e.amplitude = amplitude;
  return e;
}

Envelope square_pulse(double duration, double delay, double amplitude) {
  if (duration <= 0) throw ConfigError("square pulse needs positive duration");
  Envelope e;
  e.kind = e.base = EnvelopeKind::square;
  e.duration = duration;
  e.width = 0.0;
  e.delay = delay;
  e.amplitude = amplitude;
  return e;
}

Envelope make_comb(int n_tones, double spacing, const Envelope& base, const std::vector<double>& phases) {
  if (n_tones < 1) throw ConfigError(fmt::format("comb needs at least one tone, got {}", n_tones));
  if (!phases.empty() && static_cast<int>(phases.size()) != n_tones)
    throw ConfigError("comb phase list length must match tone count");
  Envelope e = base;
  if (base.kind == EnvelopeKind::comb) throw ConfigError("comb base must be gaussian or square");
  e.base = base.kind;
  e.kind = EnvelopeKind::comb;
  e.tones.clear();
  for (int k = 0; k < n_tones; ++k) e.tones.push_back({-spacing * k, phases.empty() ? 0.0 : phases[k]});
  return e;
}

double window(const Envelope& env, double t) {
  if (t < env.start() || t > env.end()) return 0.0;
  EnvelopeKind shape = env.kind == EnvelopeKind::comb ? env.base : env.kind;
  if (shape == EnvelopeKind::square) return env.amplitude;
  double u = (t - env.center()) / env.width;
  return env.amplitude * std::exp(-0.5 * u * u);
}

cplx comb_factor(const Envelope& env, double t) {
  if (env.kind != EnvelopeKind::comb) return 1.0;
  cplx s = 0.0;
  for (const auto& tone : env.tones) s += std::polar(1.0, 2.0 * std::numbers::pi * tone.offset * t + tone.phase);
  return s;
}

cplx evaluate(const Envelope& env, double t) {
  double w = window(env, t);
  if (w == 0.0) return 0.0;
  cplx v = w * comb_factor(env, t);
  if (env.phase != 0.0) v *= std::polar(1.0, env.phase);
  return v;
}

double window_area(const Envelope& env, int samples) {
  double h = env.duration / (samples - 1);
  double s = 0.0;
  for (int i = 0; i < samples; ++i) {
    double w = window(env, env.start() + i * h);
    s += (i == 0 || i == samples - 1) ? 0.5 * w : w;
  }
  return s * h;
}

double energy(const Envelope& env, int samples) {
  double h = env.duration / (samples - 1);
  double s = 0.0;
  for (int i = 0; i < samples; ++i) {
    double w = std::norm(evaluate(env, env.start() + i * h));
    s += (i == 0 || i == samples - 1) ? 0.5 * w : w;
  }
  return s * h;
}

void validate(const DriveSpec& d) {
  if (d.strength < 0) throw ConfigError(fmt::format("drive on '{}' has negative strength", d.target));
}

}  // namespace mpx
