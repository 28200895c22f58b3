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

#include "mpx/hamiltonians.hpp"

#include <cmath>
#include <numbers>

#include "mpx/errors.hpp"

namespace mpx {

namespace {

constexpr double kPi = std::numbers::pi;

struct Ops {
  HilbertSpace space;
  Mat a, n, n2, id;
  bool has_yn = false, has_mp = false;
  Mat sz_yn, sm_yn, sx_yn, sz_mp, sm_mp, sx_mp;
};

Ops make_ops(int storage_dim, bool yn, bool mp) {
  std::vector<Mode> modes{{kStorage, storage_dim}};
  if (yn) modes.push_back({kYesNo, 2});
  if (mp) modes.push_back({kMultiplex, 2});
  Ops o;
  o.space = HilbertSpace(modes);
  o.has_yn = yn;
  o.has_mp = mp;
  o.a = embed(annihilation(storage_dim), kStorage, o.space).matrix();
  o.n = embed(number(storage_dim), kStorage, o.space).matrix();
  o.id = Mat::Identity(o.space.dim(), o.space.dim());
  o.n2 = o.n * (o.n - o.id);
  if (yn) {
    o.sz_yn = embed(pauli_z(), kYesNo, o.space).matrix();
    o.sm_yn = embed(sigma_minus(), kYesNo, o.space).matrix();
    o.sx_yn = embed(pauli_x(), kYesNo, o.space).matrix();
  }
  if (mp) {
    o.sz_mp = embed(pauli_z(), kMultiplex, o.space).matrix();
    o.sm_mp = embed(sigma_minus(), kMultiplex, o.space).matrix();
    o.sx_mp = embed(pauli_x(), kMultiplex, o.space).matrix();
  }
  return o;
}

// Dispersive part shared by the photocounting models. A removed qubit sits in |g>, where sigma_z = -1.
Mat counting_static(const SystemParams& p, const Ops& o) {
  Mat h = -p.chi_s_s * o.n2;
  if (o.has_yn)
    h += -p.chi_s_yn * o.n * o.sz_yn / 2.0 - p.chi_s_s_yn * o.n2 * o.sz_yn / 2.0;
  else
    h += p.chi_s_yn * o.n / 2.0 + p.chi_s_s_yn * o.n2 / 2.0;
  if (o.has_mp)
    h += -p.chi_s_mp * o.n * o.sz_mp / 2.0 - p.chi_s_s_mp * o.n2 * o.sz_mp / 2.0;
  else
    h += p.chi_s_mp * o.n / 2.0 + p.chi_s_s_mp * o.n2 / 2.0;
  return h;
}

std::vector<Dissipator> counting_dissipators(const SystemParams& p, const Ops& o, const ModelOptions& opt) {
  std::vector<Dissipator> d;
  double nth = opt.thermal ? p.n_th_s : 0.0;
  if (opt.storage_dephasing) d.push_back({"dephasing_s", o.n, 2.0 * p.Gamma_phi_s()});
  if (opt.storage_loss) {
    d.push_back({"loss_s", o.a, (1.0 + nth) * p.Gamma_1_s});
    if (nth > 0) d.push_back({"thermal_s", o.a.adjoint(), nth * p.Gamma_1_s});
  }
  if (o.has_yn) {
    d.push_back({"dephasing_yn", o.sz_yn, 0.5 * p.Gamma_phi_yn()});
    d.push_back({"relax_yn", o.sm_yn, p.Gamma_1_yn});
  }
  if (o.has_mp) {
    d.push_back({"dephasing_mp", o.sz_mp, 0.5 * p.Gamma_phi_mp()});
    d.push_back({"relax_mp", o.sm_mp, opt.gamma_1_mp_scale * p.Gamma_1_mp});
  }
  return d;
}

DriveTerm displacement_term(const SystemParams& p, double eps_max, const PulseTiming& timing,
                            const ModelOptions& opt, const Mat& a) {
  Envelope lam = timing.displacement();
  double pref = opt.linear_displacement ? 1.0 : 1.0 / (2.0 * kPi);
  double rot = kPi * (p.chi_s_mp + p.chi_s_yn);
  return {"displacement", a, [lam, eps_max, pref, rot](double t) {
            double w = window(lam, t);
            if (w == 0.0) return cplx(0.0);
            return pref * w * eps_max * std::polar(1.0, rot * t);
          }};
}

void check_storage(const ModelOptions& opt) {
  if (opt.storage_dim < 2) throw ConfigError("storage truncation must be at least 2");
}

}  // namespace

Envelope PulseTiming::displacement() const {
  return gaussian_pulse(displacement_duration, displacement_width, displacement_delay);
}

Envelope PulseTiming::probe() const { return gaussian_pulse(probe_duration, probe_width, probe_start()); }

PulseTiming yes_no_timing() {
  PulseTiming t;
  t.probe_duration = 1.9;
  t.probe_width = 0.475;
  return t;
}

PulseTiming probe_timing() { return PulseTiming{}; }

double pi_pulse_amplitude(const Envelope& env) { return 1.0 / (4.0 * window_area(env)); }

Operator build_full_hamiltonian(const SystemParams& p, int storage_dim, int yn_dim, int mp_dim) {
  HilbertSpace space({{kStorage, storage_dim}, {kYesNo, yn_dim}, {kMultiplex, mp_dim}});
  Mat ns = embed(number(storage_dim), kStorage, space).matrix();
  Mat ny = embed(number(yn_dim), kYesNo, space).matrix();
  Mat nm = embed(number(mp_dim), kMultiplex, space).matrix();
  Mat id = Mat::Identity(space.dim(), space.dim());
  Mat h = 1e3 * (p.f_s * ns + p.f_yn * ny + p.f_mp * nm) - p.chi_s_yn * ns * ny - p.chi_s_mp * ns * nm -
          p.chi_yn_yn * ny * (ny - id) - p.chi_mp_mp * nm * (nm - id);
  return {space, h};
}

MasterEquation build_h1_yesno(const SystemParams& p, double delta_f_yn, double eps_max, const PulseTiming& timing,
                              const ModelOptions& opt, bool pi_pulse) {
  check_storage(opt);
  Ops o = make_ops(opt.storage_dim, true, !opt.eliminate_spectator);
  MasterEquation m;
  m.space = o.space;
  m.h0 = delta_f_yn * o.sz_yn / 2.0 + counting_static(p, o);
  m.drives.push_back(displacement_term(p, eps_max, timing, opt, o.a));
  if (pi_pulse) {
    Envelope env = timing.probe();
    double amp = pi_pulse_amplitude(env);
    m.drives.push_back({"pi_pulse", o.sx_yn / 2.0, [env, amp](double t) { return cplx(amp * window(env, t)); }});
  }
  m.dissipators = counting_dissipators(p, o, opt);
  m.breakpoints = {timing.displacement().start(), timing.displacement().end(), timing.probe_start(),
                   timing.probe_end()};
  return m;
}

MasterEquation build_h2_single_tone(const SystemParams& p, double delta_f_mp, double Omega, double eps_max,
                                    const PulseTiming& timing, const ModelOptions& opt) {
  check_storage(opt);
  Ops o = make_ops(opt.storage_dim, !opt.eliminate_spectator, true);
  MasterEquation m;
  m.space = o.space;
  m.h0 = delta_f_mp * o.sz_mp / 2.0 + counting_static(p, o);
  m.drives.push_back(displacement_term(p, eps_max, timing, opt, o.a));
  Envelope env = timing.probe();
  m.drives.push_back({"rabi_mp", o.sx_mp / 2.0, [env, Omega](double t) { return cplx(0.5 * Omega * window(env, t)); }});
  m.dissipators = counting_dissipators(p, o, opt);
  m.breakpoints = {timing.displacement().start(), timing.displacement().end(), timing.probe_start(),
                   timing.probe_end()};
  return m;
}

MasterEquation build_h3_comb(const SystemParams& p, double Omega, double eps_max, const PulseTiming& timing,
                             const ModelOptions& opt) {
  check_storage(opt);
  Ops o = make_ops(opt.storage_dim, !opt.eliminate_spectator, true);
  MasterEquation m;
  m.space = o.space;
  m.h0 = counting_static(p, o);
  m.drives.push_back(displacement_term(p, eps_max, timing, opt, o.a));
  Envelope comb = make_comb(opt.comb_tones, p.chi_s_mp, timing.probe(), opt.comb_phases);
  // Descending tone offsets: the sigma_+ coefficient carries exp(+2 pi i k chi t).
  m.drives.push_back({"comb_mp", o.sm_mp, [comb, Omega](double t) { return 0.5 * Omega * evaluate(comb, t); }});
  m.dissipators = counting_dissipators(p, o, opt);
  m.breakpoints = {timing.displacement().start(), timing.displacement().end(), timing.probe_start(),
                   timing.probe_end()};
  return m;
}

namespace {

MasterEquation mid_system(const SystemParams& p, double delta_f_s0, const ModelOptions& opt, Ops& o) {
  check_storage(opt);
  o = make_ops(opt.storage_dim, false, true);
  MasterEquation m;
  m.space = o.space;
  Mat proj_e = (o.sz_mp + o.id) / 2.0;
  m.h0 = -p.chi_s_mp * proj_e * o.n - delta_f_s0 * o.n - p.chi_s_s_mp * o.n2 * proj_e;
  if (opt.storage_dephasing) m.dissipators.push_back({"dephasing_s", o.n, 2.0 * p.Gamma_phi_s()});
  if (opt.storage_loss) m.dissipators.push_back({"loss_s", o.a, p.Gamma_1_s});
  m.dissipators.push_back({"dephasing_mp", o.sz_mp, 0.5 * p.Gamma_phi_mp()});
  m.dissipators.push_back({"relax_mp", o.sm_mp, opt.gamma_1_mp_scale * p.Gamma_1_mp});
  return m;
}

}  // namespace

MasterEquation build_h4_mid(const SystemParams& p, double Omega, double delta_f_s0, double duration,
                            const ModelOptions& opt, WindowShape shape) {
  Ops o;
  MasterEquation m = mid_system(p, delta_f_s0, opt, o);
  Envelope base = shape == WindowShape::gaussian ? gaussian_pulse(duration, duration / 4.0) : square_pulse(duration);
  Envelope comb = make_comb(opt.comb_tones, p.chi_s_mp, base, opt.comb_phases);
  if (Omega != 0.0)
    m.drives.push_back({"comb_mp", o.sm_mp, [comb, Omega](double t) { return 0.5 * Omega * evaluate(comb, t); }});
  m.breakpoints = {0.0, duration};
  return m;
}

MasterEquation build_single_drive(const SystemParams& p, double Omega, double delta_mp, double delta_f_s0,
                                  double duration, const ModelOptions& opt) {
  Ops o;
  MasterEquation m = mid_system(p, delta_f_s0, opt, o);
  Envelope tone = square_pulse(duration);
  tone.kind = EnvelopeKind::comb;
  tone.base = EnvelopeKind::square;
  tone.tones = {{-delta_mp, 0.0}};
  if (Omega != 0.0)
    m.drives.push_back({"tone_mp", o.sm_mp, [tone, Omega](double t) { return 0.5 * Omega * evaluate(tone, t); }});
  m.breakpoints = {0.0, duration};
  return m;
}

DensityMatrix ground_state(const HilbertSpace& space, const Mat& storage_rho) {
  std::vector<Mat> factors;
  for (const auto& mode : space.modes()) {
    if (mode.label == kStorage) {
      factors.push_back(storage_rho);
    } else {
      Mat g = Mat::Zero(mode.dim, mode.dim);
      g(0, 0) = 1.0;
      factors.push_back(g);
    }
  }
  return tensor(space, factors);
}

}  // namespace mpx
