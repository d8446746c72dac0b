#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "spinfilt/filters.hpp"
#include "spinfilt/parallel.hpp"
#include "spinfilt/propagator.hpp"
#include "spinfilt/pulse_seq.hpp"
#include "spinfilt/sensing.hpp"
#include "spinfilt/spin_core.hpp"
#include "spinfilt/validate.hpp"

using namespace spinfilt;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitBadInput = 2;
constexpr double kPointsPerDecade = 2000.0;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  double omega = 1.0;
  double A = 0.06;
  std::string control = "half";
  int N = 20;
  std::optional<double> tau;
  int slices = 10;
  int per_slice = 2;
  double c = 0.0;
  int k = 0;
  std::string grid;
  std::string out;
  std::string suite;
  std::string regime = "weak";
  std::string sequence = "cpmg";
  std::string state = "down-plus";
  std::optional<double> theta;
  double phi = 0.0;
  int budget = 200;
  bool second_order = false;
  bool mutate = false;
  unsigned threads = 0;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Canonical parameter text; identical configurations give identical text.
std::string canonical(const std::string& command, const Options& o) {
  std::map<std::string, std::string> kv{
      {"omega", fmt(o.omega)},       {"A", fmt(o.A)},
      {"control", o.control},        {"N", std::to_string(o.N)},
      {"tau", o.tau ? fmt(*o.tau) : "auto"},
      {"slices", std::to_string(o.slices)},
      {"per-slice", std::to_string(o.per_slice)},
      {"c", fmt(o.c)},               {"k", std::to_string(o.k)},
      {"grid", o.grid},              {"regime", o.regime},
      {"sequence", o.sequence},      {"state", o.state},
      {"theta", o.theta ? fmt(*o.theta) : "auto"},
      {"phi", fmt(o.phi)},           {"budget", std::to_string(o.budget)},
      {"second-order", o.second_order ? "1" : "0"},
  };
  std::string text = command;
  for (const auto& [key, value] : kv) text += ";" + key + "=" + value;
  return text;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string trailer(const std::string& command, const Options& o) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canonical(command, o))));
  return std::string("# spinfilt ") + kVersion + " " + command + " " + buf + "\n";
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open output file '" + path + "'");
  f << text;
  f.close();
  if (!f) throw IoError("failed writing output file '" + path + "'");
}

// Summary lines go to stdout unless stdout carries the CSV.
std::ostream& summary_stream(const Options& o) { return (o.out.empty() || o.out == "-") ? std::cerr : std::cout; }

struct Grid {
  double start;
  double stop;
  int points;

  double at(int i) const { return points == 1 ? start : start + (stop - start) * i / (points - 1); }
};

Grid parse_grid(const std::string& text, double default_start, double default_stop) {
  std::vector<std::string> parts;
  if (!text.empty()) {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() < 2 || parts.size() > 3) throw InvalidInput("--grid expects start:stop[:points]");
  }
  Grid g{default_start, default_stop, 0};
  try {
    if (!parts.empty()) {
      g.start = std::stod(parts[0]);
      g.stop = std::stod(parts[1]);
    }
    if (parts.size() == 3) {
      std::size_t used = 0;
      g.points = std::stoi(parts[2], &used);
      if (used != parts[2].size()) throw InvalidInput("--grid: points must be an integer");
    }
  } catch (const std::logic_error&) {
    throw InvalidInput("--grid: malformed number in '" + text + "'");
  }
  if (!std::isfinite(g.start) || !std::isfinite(g.stop) || g.start < 0.0 || g.stop < g.start) {
    throw InvalidInput("--grid: need 0 <= start <= stop");
  }
  if (g.points == 0) {
    const double decades = g.start > 0.0 ? std::log10(g.stop / g.start) : 1.0;
    g.points = std::max(2, static_cast<int>(std::ceil(kPointsPerDecade * decades)) + 1);
  }
  if (g.points < 2) throw InvalidInput("--grid: at least 2 points are required");
  return g;
}

SpinSystem make_system(const Options& o) {
  SpinSystem sys{o.omega, o.A, parse_control_kind(o.control)};
  sys.validate();
  return sys;
}

Regime parse_regime(const std::string& name) {
  if (name == "weak") return Regime::Weak;
  if (name == "strong") return Regime::Strong;
  throw InvalidInput("--regime must be weak or strong here");
}

std::string join(const std::vector<double>& values) {
  std::string row;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) row += ",";
    row += fmt(values[i]);
  }
  return row + "\n";
}

// --- filter-scan ---

std::vector<double> weak_row(const Options& o, double x) {
  const int n = o.N;
  const int k = std::max(0, static_cast<int>(std::lround(x / kPi - 0.5)));
  const double c = (x - (2 * k + 1) * kPi / 2.0) * 2.0 * n / kPi;
  const double universal = filter_weak_universal(c, k);
  std::vector<double> row{x, 0.0, 0.0, 1.0, universal};
  const double tau = x / o.omega;
  if (x > 0.0) {
    const FilterResult fr = filter_weak(o.omega, n, tau);
    row[1] = fr.magnitude;
    row[2] = fr.phi;
    row[3] = fr.axis_sign;
  }
  if (o.second_order) row.push_back(x > 0.0 ? second_order_filter(o.omega, cpmg(n, tau)) : 0.0);
  return row;
}

std::vector<double> strong_row(const Options& o, int sign, double x) {
  const int n = o.N;
  const int kc = std::max(0, static_cast<int>(std::lround((x / kPi - 1.0) / 2.0)));
  const double cc = (x - (2 * kc + 1) * kPi) * n / kPi;
  const int ku = static_cast<int>(std::lround(x / (2.0 * kPi)));
  const double cu = (x - 2 * ku * kPi) * n / kPi;
  std::vector<double> row{x, 0.0, 1.0, 0.0, 0.0, std::abs(filter_strong_universal(cc)),
                          std::abs(filter_strong_universal(cu))};
  if (x > 0.0) {
    const StrongFilterResult fr = filters_strong(o.A, n, x / o.A, sign);
    row[1] = fr.F_c;
    row[2] = fr.F_u;
    row[3] = fr.phi_c;
    row[4] = fr.phi_u;
  }
  return row;
}

std::vector<double> strong_half_row(const Options& o, double x) {
  if (x <= 0.0) return {x, 0.0, 1.0};
  const HalfFilterResult fr = filters_strong_half(o.A, o.N, x / o.A);
  return {x, fr.F_c, fr.F_u};
}

int cmd_filter_scan(const Options& o) {
  if (o.N < 1) throw InvalidInput("--N must be >= 1");
  const ControlKind kind = parse_control_kind(o.control);
  std::string header;
  std::function<std::vector<double>(double)> row;
  if (o.regime == "weak") {
    if (!(o.omega > 0.0)) throw InvalidInput("--omega must be positive");
    header = std::string("omega_tau,F,phi,axis_sign,F_universal") + (o.second_order ? ",F2" : "");
    row = [&](double x) { return weak_row(o, x); };
  } else if (o.regime == "strong") {
    if (kind == ControlKind::SpinHalf) {
      throw InvalidInput("strong-coupling filters need --control one+ or one-; use --regime strong-half for spin-1/2");
    }
    if (!(o.A > 0.0)) throw InvalidInput("--A must be positive");
    const int sign = kind == ControlKind::SpinOnePlus ? 1 : -1;
    header = "A_tau,F_c,F_u,phi_c,phi_u,F_universal_c,F_universal_u";
    row = [&, sign](double x) { return strong_row(o, sign, x); };
  } else if (o.regime == "strong-half") {
    if (!(o.A > 0.0)) throw InvalidInput("--A must be positive");
    header = "A_tau,F_c,F_u";
    row = [&](double x) { return strong_half_row(o, x); };
  } else {
    throw InvalidInput("--regime must be weak, strong or strong-half");
  }
  const Grid grid = parse_grid(o.grid, o.regime == "weak" ? 0.05 : 0.1, 3.0 * kPi);
  const auto rows = parallel_map<std::vector<double>>(
      static_cast<std::size_t>(grid.points), [&](std::size_t i) { return row(grid.at(static_cast<int>(i))); },
      o.threads);
  std::string text = header + "\n";
  for (const auto& r : rows) text += join(r);
  emit(o.out, text + trailer("filter-scan", o));
  return kExitOk;
}

// --- gate-sim ---

State4 initial_state(const std::string& name) {
  const double r = 1.0 / std::sqrt(2.0);
  if (name == "down-plus") return down_plus_state();
  if (name == "up-plus") return {r, r, 0.0, 0.0};
  if (name == "down-up") return {0.0, 0.0, 1.0, 0.0};
  if (name == "up-up") return {1.0, 0.0, 0.0, 0.0};
  throw InvalidInput("--state must be one of down-plus, up-plus, down-up, up-up");
}

struct GatePlan {
  PulseSequence seq;
  Frame frame;
  Vec3 conditional;    // predicted generators, exp(-i (g_u +/- g_c).sigma)
  Vec3 unconditional;
  double predicted_theta;
};

double default_tau(const Options& o, Regime regime, int pulses, double c) {
  if (o.tau) return *o.tau;
  if (regime == Regime::Weak) return resonance_tau_weak(o.omega, {o.k, c, pulses});
  return resonance_tau_strong(o.A, {o.k, c, pulses}, StrongBranch::Conditional);
}

GatePlan plan_gate(const Options& o, const SpinSystem& sys) {
  const Regime regime = parse_regime(o.regime);
  if (regime == Regime::Strong && !sys.spin_one()) {
    throw InvalidInput("--regime strong needs a spin-1 control (--control one+ or one-)");
  }
  const Frame frame = regime == Regime::Weak ? Frame::Weak : Frame::Strong;
  if (o.sequence == "cpmg") {
    if (o.N < 1) throw InvalidInput("--N must be >= 1");
    const double tau = default_tau(o, regime, o.N, o.c);
    if (regime == Regime::Weak) {
      const PredictedGate p = predict_weak(sys, o.N, tau);
      return {cpmg(o.N, tau), frame, (0.5 * p.prediction.theta) * p.prediction.axis.axis, {}, p.prediction.theta};
    }
    const PredictedGate p = predict_strong(sys, o.N, tau);
    const AxisAngle& u = *p.prediction.unconditional_axis;
    return {cpmg(o.N, tau), frame, (0.5 * p.prediction.theta) * p.prediction.axis.axis, (0.5 * u.angle) * u.axis,
            p.prediction.theta};
  }
  if (o.sequence != "sliced") throw InvalidInput("--sequence must be cpmg or sliced");
  const double tau0 = o.tau ? *o.tau
                            : (regime == Regime::Weak ? (2 * o.k + 1) * kPi / (2.0 * o.omega)
                                                      : (2 * o.k + 1) * kPi / o.A);
  if (!(tau0 > 0.0) || !std::isfinite(tau0)) throw InvalidInput("slice center tau0 must be positive");
  const SliceSpec spec = SliceSpec::from_resonance(o.slices, o.per_slice, tau0, o.k, o.c);
  const SlicedPrediction p = sliced_evolution_predict(sys, spec, frame);
  return {sliced_alternating(spec), frame, (0.5 * p.theta_eff) * p.axis, {}, p.theta_eff};
}

int cmd_gate_sim(const Options& o) {
  const SpinSystem sys = make_system(o);
  GatePlan plan = plan_gate(o, sys);
  if (o.theta) {
    if (!std::isfinite(*o.theta)) throw InvalidInput("--theta must be finite");
    const double norm = plan.conditional.norm();
    const Vec3 axis = norm > 0.0 ? (1.0 / norm) * plan.conditional : Vec3{1.0, 0.0, 0.0};
    plan.conditional = (0.5 * *o.theta) * axis;
    plan.unconditional = {};
  }
  const State4 psi0 = initial_state(o.state);
  const double t_f = plan.seq.total_time();
  const cplx coh0 = [&] {
    cplx acc = 0.0;
    for (int t = 0; t < 2; ++t) acc += std::conj(psi0[2 * t]) * psi0[2 * t + 1];
    return acc;
  }();

  std::string text = "time,re_coh,im_coh,pop_down,fid_vs_target,sx,sy,sz\n";
  auto sample = [&](double t, const ConditionalUnitary& lab) {
    const ConditionalUnitary u = to_rotating_frame(sys, lab, t, plan.frame);
    const State4 psi = u.apply(psi0);
    const double f = t / t_f;
    const ConditionalUnitary target{exp_neg_i(f * (plan.unconditional + plan.conditional)),
                                    exp_neg_i(f * (plan.unconditional - plan.conditional))};
    const double fid = state_fidelity(psi, target.apply(psi0));
    // control coherence <s_+> and target Bloch vector
    cplx coh = std::conj(psi[0]) * psi[1] + std::conj(psi[2]) * psi[3];
    cplx sxy = 0.0;
    double sz = 0.0;
    for (int c = 0; c < 2; ++c) {
      sxy += std::conj(psi[c]) * psi[2 + c];
      sz += std::norm(psi[c]) - std::norm(psi[2 + c]);
    }
    if (std::abs(coh0) > 0.0) coh /= coh0;
    const double pop_down = std::norm(psi[2]) + std::norm(psi[3]);
    text += join({t, coh.real(), coh.imag(), pop_down, fid, 2.0 * sxy.real(), 2.0 * sxy.imag(), sz});
    return fid;
  };

  constexpr int kInterior = 20;
  ConditionalUnitary lab;
  double fidelity = sample(0.0, lab);
  for (const Segment& s : plan.seq.segments()) {
    for (int j = 1; j <= kInterior; ++j) {
      const double dt = s.length() * j / (kInterior + 1);
      const ConditionalUnitary part = segment_propagator(sys, s.sign, dt);
      sample(s.start + dt, {part.plus * lab.plus, part.minus * lab.minus});
    }
    const ConditionalUnitary step = segment_propagator(sys, s.sign, s.length());
    lab = {step.plus * lab.plus, step.minus * lab.minus};
    fidelity = sample(s.end, lab);
  }
  emit(o.out, text + trailer("gate-sim", o));
  std::ostream& os = summary_stream(o);
  os << "theta_pred=" << fmt(plan.predicted_theta) << "\n";
  os << "fidelity=" << fmt(fidelity) << "\n";
  return kExitOk;
}

// --- sense-scan ---

int cmd_sense_scan(const Options& o) {
  const SpinSystem sys = make_system(o);
  if (!(sys.omega > 0.0)) throw InvalidInput("--omega must be positive");
  SequenceDescriptor descriptor;
  if (o.sequence == "cpmg") {
    if (o.N < 1) throw InvalidInput("--N must be >= 1");
    descriptor = CpmgDescriptor{o.N};
  } else if (o.sequence == "sliced") {
    descriptor = AlternatingDescriptor{o.slices, o.per_slice, o.k, o.c};
  } else {
    throw InvalidInput("--sequence must be cpmg or sliced");
  }
  const Grid grid = parse_grid(o.grid, 0.5, 5.0);
  if (!(grid.start > 0.0)) throw InvalidInput("--grid: sensing scans need omega tau0 > 0");
  std::vector<double> xs;
  for (int i = 0; i < grid.points; ++i) xs.push_back(grid.at(i));
  const SensingScan scan = sensing_scan(sys, descriptor, xs, o.threads);
  emit(o.out, to_csv(scan) + trailer("sense-scan", o));
  return kExitOk;
}

// --- design-gate ---

struct Design {
  std::optional<SliceSpec> spec;  // empty for plain CPMG
  int pulses = 0;
  double tau = 0.0;
  double theta_eff = 0.0;
  double slice_angle = 0.0;  // per-slice (or per-pulse) granularity
  double fidelity = 0.0;
  double unitary_fid = 0.0;
  Vec3 axis;
  PulseSequence seq = PulseSequence::free_evolution(1.0);
};

void score(const SpinSystem& sys, Frame frame, double theta, Design& d) {
  const ConditionalUnitary exact =
      to_rotating_frame(sys, evolve_exact(sys, d.seq), d.seq.total_time(), frame);
  const ConditionalUnitary target = conditional_rotation(d.axis, theta);
  d.fidelity = gate_fidelity_report(exact, target, down_plus_state());
  d.unitary_fid = gate_fidelity_report(exact, target);
}

int cmd_design_gate(const Options& o) {
  const SpinSystem sys = make_system(o);
  if (!o.theta) throw InvalidInput("--theta is required");
  const double theta = *o.theta;
  if (!(theta > 0.0 && theta < 2.0 * kPi)) throw InvalidInput("--theta must lie in (0, 2 pi)");
  if (!(std::abs(o.phi) <= kPi)) throw InvalidInput("--phi must lie in [-pi, pi]");
  if (o.budget < 1) throw InvalidInput("--budget must be >= 1");
  if (!(sys.A > 0.0)) throw InvalidInput("--A must be positive");
  const Regime regime = parse_regime(o.regime);
  if (regime == Regime::Strong && !sys.spin_one()) {
    throw InvalidInput("--regime strong needs a spin-1 control (--control one+ or one-)");
  }
  if (regime == Regime::Weak && !(sys.omega > 0.0)) throw InvalidInput("--omega must be positive");
  const Frame frame = regime == Regime::Weak ? Frame::Weak : Frame::Strong;

  double c = 2.0 * o.phi / kPi;
  int k = 0;
  if (std::abs(c) >= 2.0) {
    // axis -sigma_x: the k = 1 resonance at c = 0
    c = 0.0;
    k = 1;
  }
  std::optional<Design> best;
  double max_theta = 0.0;

  if (c == 0.0) {
    const double tau = regime == Regime::Weak ? resonance_tau_weak(sys.omega, {k, 0.0, 1})
                                              : resonance_tau_strong(sys.A, {k, 0.0, 1}, StrongBranch::Conditional);
    auto predicted = [&](int n) {
      return regime == Regime::Weak ? predict_weak(sys, n, tau) : predict_strong(sys, n, tau);
    };
    const double per_pulse = predicted(1).prediction.theta;
    max_theta = per_pulse * o.budget;
    const int n = std::clamp(static_cast<int>(std::lround(theta / per_pulse)), 1, o.budget);
    const PredictedGate p = predicted(n);
    Design d;
    d.pulses = n;
    d.tau = tau;
    d.theta_eff = p.prediction.theta;
    d.slice_angle = per_pulse;
    d.axis = p.prediction.axis.axis;
    d.seq = cpmg(n, tau);
    score(sys, frame, theta, d);
    best = d;
  } else {
    const double tau0 = regime == Regime::Weak ? (2 * k + 1) * kPi / (2.0 * sys.omega) : (2 * k + 1) * kPi / sys.A;
    for (int n = 1; 2 * n <= o.budget; ++n) {
      // candidates whose tau_-c collapses are rejected by the sequence builders
      try {
        const SliceSpec pair = SliceSpec::from_resonance(2, n, tau0, k, c);
        const double pair_theta = sliced_evolution_predict(sys, pair, frame).theta_eff;
        if (!(pair_theta > 0.0)) continue;
        const int max_pairs = o.budget / (2 * n);
        max_theta = std::max(max_theta, pair_theta * max_pairs);
        const int pairs = std::clamp(static_cast<int>(std::lround(theta / pair_theta)), 1, max_pairs);
        const SliceSpec spec = SliceSpec::from_resonance(2 * pairs, n, tau0, k, c);
        const SlicedPrediction pred = sliced_evolution_predict(sys, spec, frame);
        Design d;
        d.spec = spec;
        d.pulses = spec.total_pulses();
        d.tau = tau0;
        d.theta_eff = pred.theta_eff;
        d.slice_angle = pred.theta_eff / spec.slices;
        d.axis = pred.axis;
        d.seq = sliced_alternating(spec);
        if (std::abs(d.theta_eff - theta) > d.slice_angle) continue;
        score(sys, frame, theta, d);
        if (!best || d.fidelity > best->fidelity) best = d;
      } catch (const InvalidInput&) {
        continue;
      }
    }
  }

  std::ostream& os = std::cout;
  if (!best || std::abs(best->theta_eff - theta) > best->slice_angle) {
    std::cerr << "error: theta=" << fmt_short(theta) << " is not reachable within " << o.budget
              << " pulses; max theta_eff=" << fmt(max_theta) << "\n";
    os << "max_theta_eff=" << fmt(max_theta) << "\n";
    return kExitFailed;
  }
  const Design& d = *best;
  if (d.spec) {
    os << "sequence=sliced\n"
       << "c=" << fmt(c) << "\nk=" << k << "\nslices=" << d.spec->slices
       << "\nper_slice=" << d.spec->pulses_per_slice << "\ntau_plus=" << fmt(d.spec->tau_plus)
       << "\ntau_minus=" << fmt(d.spec->tau_minus) << "\n";
  } else {
    os << "sequence=cpmg\nc=0\nk=" << k << "\nN=" << d.pulses << "\ntau=" << fmt(d.tau) << "\n";
  }
  os << "pulses=" << d.pulses << "\ntotal_time=" << fmt(d.seq.total_time()) << "\ntheta_eff=" << fmt(d.theta_eff)
     << "\naxis=" << fmt(d.axis.x) << "," << fmt(d.axis.y) << "," << fmt(d.axis.z) << "\nfidelity=" << fmt(d.fidelity)
     << "\nunitary_fidelity=" << fmt(d.unitary_fid) << "\n";
  const MagnusValidity mv = magnus_validity(d.slice_angle);
  if (d.slice_angle > 0.1) {
    std::cerr << "warning: per-slice angle " << fmt_short(d.slice_angle) << " rad exceeds 0.1; second-order error ~"
              << fmt_short(mv.error_estimate) << (mv.tier == MagnusTier::Invalid ? " (invalid)" : " (marginal)")
              << "\n";
  }
  if (!o.out.empty() && o.out != "-") emit(o.out, to_csv(d.seq) + trailer("design-gate", o));
  return kExitOk;
}

// --- validate ---

int cmd_validate(const Options& o) {
  std::vector<std::string> names = suite_names();
  if (!o.suite.empty()) {
    if (std::find(names.begin(), names.end(), o.suite) == names.end()) {
      throw InvalidInput("unknown suite '" + o.suite + "'");
    }
    names = {o.suite};
  }
  bool ok = true;
  ValidateOptions vo;
  vo.mutate = o.mutate;
  for (const auto& name : names) {
    const SuiteResult r = run_suite(name, vo);
    std::cout << name << ": " << (r.passed() ? "PASS" : "FAIL") << " (" << r.checks << " checks)\n";
    for (const auto& f : r.failures) std::cout << "  - " << f << "\n";
    ok = ok && r.passed();
  }
  return ok ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spinfilt: filter functions, exact propagation and sensing scans for pulsed conditional spin gates"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1, 1);
  app.set_config("--config", "", "key=value configuration file; command-line flags take precedence");
  bool show_config = false;
  app.add_flag("--show-config", show_config, "Print the effective configuration and exit")->configurable(false);

  Options o;
  app.add_option("--omega", o.omega, "Target splitting omega (rad/s)")->capture_default_str();
  app.add_option("--A", o.A, "Hyperfine coupling A (rad/s)")->capture_default_str();
  app.add_option("--control", o.control, "Control spin: half, one+ or one-")->capture_default_str();
  app.add_option("--N", o.N, "Pulse count")->capture_default_str();
  app.add_option("--tau", o.tau, "Half pulse spacing tau (s); default: resonance value");
  app.add_option("--slices", o.slices, "Slice count s of an alternating sequence")->capture_default_str();
  app.add_option("--per-slice", o.per_slice, "Pulses per slice n")->capture_default_str();
  app.add_option("--c", o.c, "Resonance parameter c")->capture_default_str();
  app.add_option("--k", o.k, "Resonance order k")->capture_default_str();
  app.add_option("--grid", o.grid, "Scan grid start:stop[:points] (default 2000 points per decade)");
  app.add_option("--out", o.out, "Output path (default stdout)");
  app.add_option("--suite", o.suite, "Validation suite name");
  app.add_option("--regime", o.regime, "weak, strong or strong-half")->capture_default_str();
  app.add_option("--sequence", o.sequence, "cpmg or sliced")->capture_default_str();
  app.add_option("--state", o.state, "Initial state: down-plus, up-plus, down-up, up-up")->capture_default_str();
  app.add_option("--theta", o.theta, "Target conditional angle (rad)");
  app.add_option("--phi", o.phi, "Target axis angle (rad)")->capture_default_str();
  app.add_option("--budget", o.budget, "Maximum pulse count for design-gate")->capture_default_str();
  app.add_flag("--second-order", o.second_order, "Add the second-order filter column to weak filter scans");
  app.add_flag("--mutate", o.mutate, "Fault injection for the validation suites");
  app.add_option("--threads", o.threads, "Worker threads for scans (0 = all cores)")->capture_default_str();

  std::string command;
  for (const char* name : {"filter-scan", "gate-sim", "sense-scan", "design-gate", "validate"}) {
    app.add_subcommand(name)->fallthrough()->callback([&command, name] { command = name; });
  }
  app.get_subcommand("filter-scan")->description("Filter function scan over omega tau or A tau");
  app.get_subcommand("gate-sim")->description("Exact gate simulation with observable time series");
  app.get_subcommand("sense-scan")->description("Control coherence scan over omega tau0");
  app.get_subcommand("design-gate")->description("Alternating-sequence design for a target axis and angle");
  app.get_subcommand("validate")->description("Run the invariant suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    if (show_config && dynamic_cast<const CLI::RequiredError*>(&e) != nullptr) {
      std::cout << app.config_to_str(true, false);
      return kExitOk;
    }
    app.exit(e);
    return kExitBadInput;
  }
  if (show_config) {
    std::cout << app.config_to_str(true, false);
    return kExitOk;
  }
  try {
    if (command == "filter-scan") return cmd_filter_scan(o);
    if (command == "gate-sim") return cmd_gate_sim(o);
    if (command == "sense-scan") return cmd_sense_scan(o);
    if (command == "design-gate") return cmd_design_gate(o);
    return cmd_validate(o);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
}
