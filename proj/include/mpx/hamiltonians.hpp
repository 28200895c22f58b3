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

#include <vector>

#include "mpx/drives.hpp"
#include "mpx/dynamics.hpp"
#include "mpx/params.hpp"

namespace mpx {

// Mode labels used by every model.
inline constexpr const char* kStorage = "s";
inline constexpr const char* kYesNo = "yn";
inline constexpr const char* kMultiplex = "mp";

// Lab-frame Hamiltonian over (storage, yes-no, multiplexing), MHz. Readout mode excluded.
Operator build_full_hamiltonian(const SystemParams& p, int storage_dim = 6, int yn_dim = 2, int mp_dim = 2);

struct PulseTiming {
  double displacement_delay = 0.0;
  double displacement_duration = 0.1;
  double displacement_width = 0.025;
  // Negative means: start when the displacement ends.
  double probe_delay = -1.0;
  double probe_duration = 2.0;
  double probe_width = 0.25;

  double probe_start() const { return probe_delay < 0 ? displacement_delay + displacement_duration : probe_delay; }
  double probe_end() const { return probe_start() + probe_duration; }
  Envelope displacement() const;
  Envelope probe() const;
  bool operator==(const PulseTiming&) const = default;
};

PulseTiming yes_no_timing();   // 1.9 us / 475 ns pi pulse
PulseTiming probe_timing();    // 2 us / 250 ns probe

struct ModelOptions {
  int storage_dim = 25;
  // Remove the undriven qubit, which stays in |g>, and fold its dispersive shift into the storage.
  bool eliminate_spectator = false;
  // Drop the 1/(2 pi) on the displacement drive.
  bool linear_displacement = false;
  bool thermal = true;
  bool storage_loss = true;
  bool storage_dephasing = true;
  int comb_tones = 9;
  std::vector<double> comb_phases;
  // Multiplies Gamma_1_mp; pure dephasing is kept as in params.
  double gamma_1_mp_scale = 1.0;
  bool operator==(const ModelOptions&) const = default;
};

MasterEquation build_h1_yesno(const SystemParams& p, double delta_f_yn, double eps_max, const PulseTiming& timing,
                              const ModelOptions& opt = {}, bool pi_pulse = true);
MasterEquation build_h2_single_tone(const SystemParams& p, double delta_f_mp, double Omega, double eps_max,
                                    const PulseTiming& timing, const ModelOptions& opt = {});
MasterEquation build_h3_comb(const SystemParams& p, double Omega, double eps_max, const PulseTiming& timing,
                             const ModelOptions& opt = {});

enum class WindowShape { gaussian, square };

// Storage and multiplexing qubit only. Comb window is gaussian(duration, duration/4) or square.
MasterEquation build_h4_mid(const SystemParams& p, double Omega, double delta_f_s0, double duration,
                            const ModelOptions& opt = {}, WindowShape shape = WindowShape::gaussian);
// Same two-mode system probed by one tone at f_mp - delta_mp for the whole duration.
MasterEquation build_single_drive(const SystemParams& p, double Omega, double delta_mp, double delta_f_s0,
                                  double duration, const ModelOptions& opt = {});

// Area of the pi-pulse window: the amplitude that gives a pi rotation is 1/(4 * area).
double pi_pulse_amplitude(const Envelope& env);

// Initial states: thermal (or coherent) storage with all qubits in |g>.
DensityMatrix ground_state(const HilbertSpace& space, const Mat& storage_rho);

}  // namespace mpx
