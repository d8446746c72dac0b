#include "spinfilt/pulse_seq.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "spinfilt/spin_core.hpp"

namespace spinfilt {

namespace {

// Pulse-coincidence tolerance relative to the total time.
constexpr double kTimeTol = 1e-12;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

PulseSequence::PulseSequence(std::vector<double> pulse_times, double total_time)
    : pulses_(std::move(pulse_times)), total_time_(total_time) {
  if (!(total_time_ > 0.0) || !std::isfinite(total_time_)) {
    throw InvalidInput("pulse sequence: total time must be positive and finite");
  }
  const double min_gap = 1e-15 * total_time_;
  double prev = 0.0;
  for (double t : pulses_) {
    if (!std::isfinite(t) || !(t - prev >= min_gap) || t <= 0.0) {
      throw InvalidInput("pulse sequence: pulse times must be positive and strictly increasing");
    }
    prev = t;
  }
  if (!pulses_.empty() && !(total_time_ - pulses_.back() >= min_gap)) {
    throw InvalidInput("pulse sequence: last pulse must precede the total time");
  }
}

PulseSequence PulseSequence::free_evolution(double total_time) { return {{}, total_time}; }

void PulseSequence::check_time(double t, const char* what) const {
  const double tol = kTimeTol * total_time_;
  if (!(t >= -tol && t <= total_time_ + tol)) {
    throw InvalidInput(std::string(what) + ": time outside [0, t_f]");
  }
}

int PulseSequence::step(double t) const {
  check_time(t, "step_function");
  const double tol = kTimeTol * total_time_;
  const auto flips = std::upper_bound(pulses_.begin(), pulses_.end(), t + tol) - pulses_.begin();
  return flips % 2 == 0 ? 1 : -1;
}

double PulseSequence::integrated_step(double t) const {
  check_time(t, "integrated_step");
  t = std::clamp(t, 0.0, total_time_);
  // s_F(t) = 2 (t_1 - t_2 + ... +/- t_m) -/+ t over the m pulses before t, summed with
  // Neumaier compensation. Results below the rounding bound of the stored times are
  // indistinguishable from zero and are returned as zero.
  double sum = 0.0;
  double comp = 0.0;
  auto add = [&](double v) {
    const double next = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - next) + v : (v - next) + sum;
    sum = next;
  };
  double sign = 1.0;
  std::size_t used = 0;
  for (double p : pulses_) {
    if (p >= t) break;
    add(2.0 * sign * p);
    sign = -sign;
    ++used;
  }
  add(sign * t);
  const double result = sum + comp;
  const double bound = static_cast<double>(used + 1) * std::numeric_limits<double>::epsilon() * t;
  return std::abs(result) <= bound ? 0.0 : result;
}

std::vector<Segment> PulseSequence::segments() const {
  std::vector<Segment> out;
  out.reserve(pulses_.size() + 1);
  double start = 0.0;
  double s_f = 0.0;
  int sign = 1;
  for (double p : pulses_) {
    out.push_back({start, p, sign, s_f});
    s_f += sign * (p - start);
    start = p;
    sign = -sign;
  }
  out.push_back({start, total_time_, sign, s_f});
  return out;
}

std::vector<Segment> PulseSequence::segments(double from, double to) const {
  check_time(from, "segments");
  check_time(to, "segments");
  if (from > to) throw InvalidInput("segments: interval is reversed");
  std::vector<Segment> out;
  for (const Segment& s : segments()) {
    const double a = std::max(s.start, from);
    const double b = std::min(s.end, to);
    if (b <= a) continue;
    out.push_back({a, b, s.sign, s.s_f_start + s.sign * (a - s.start)});
  }
  return out;
}

PulseSequence cpmg(int pulses, double tau) {
  if (!(tau > 0.0)) throw InvalidInput("cpmg: tau must be positive");
  if (pulses < 0) throw InvalidInput("cpmg: pulse count must be non-negative");
  // N = 0 has no natural duration; callers use free_evolution with an explicit length.
  if (pulses == 0) throw InvalidInput("cpmg: use PulseSequence::free_evolution for N = 0");
  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(pulses));
  for (int k = 1; k <= pulses; ++k) times.push_back((2 * k - 1) * tau);
  return {std::move(times), 2.0 * pulses * tau};
}

SliceSpec SliceSpec::from_resonance(int slices, int pulses_per_slice, double tau0, int k,
                                    double c) {
  if (pulses_per_slice < 1 || k < 0) {
    throw InvalidInput("slice spec: pulses per slice must be >= 1 and k >= 0");
  }
  const double shift = c * tau0 / ((2 * k + 1) * pulses_per_slice);
  SliceSpec spec{slices, pulses_per_slice, tau0 + shift, tau0 - shift, k, c};
  spec.validate();
  return spec;
}

void SliceSpec::validate() const {
  if (slices < 1 || pulses_per_slice < 1) {
    throw InvalidInput("slice spec: slices and pulses per slice must be positive");
  }
  if (resonance_order < 0) throw InvalidInput("slice spec: resonance order must be >= 0");
  if (!(resonance_param > -2.0 && resonance_param < 2.0)) {
    throw InvalidInput("slice spec: resonance parameter c must lie in (-2, 2)");
  }
  if (!(tau_plus > 0.0) || !(tau_minus > 0.0)) {
    throw InvalidInput("slice spec: tau_plus and tau_minus must be positive");
  }
  const double t0 = tau0();
  const double expected = resonance_param * t0 / ((2 * resonance_order + 1) * pulses_per_slice);
  if (std::abs((tau_plus - t0) - expected) > 1e-12 * t0) {
    throw InvalidInput("slice spec: tau_plus - tau0 does not match c tau0 / ((2k+1) n)");
  }
}

PulseSequence sliced_alternating(const SliceSpec& spec) {
  spec.validate();
  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(spec.total_pulses()));
  double block_start = 0.0;
  for (int j = 0; j < spec.slices; ++j) {
    const double tau = spec.slice_tau(j);
    for (int k = 1; k <= spec.pulses_per_slice; ++k) times.push_back(block_start + (2 * k - 1) * tau);
    block_start += 2.0 * spec.pulses_per_slice * tau;
  }
  return {std::move(times), block_start};
}

void ResonancePoint::validate() const {
  if (k < 0) throw InvalidInput("resonance point: k must be >= 0");
  if (pulses < 1) throw InvalidInput("resonance point: N must be >= 1");
  if (!(c > -2.0 && c < 2.0)) throw InvalidInput("resonance point: c must lie in (-2, 2)");
}

double resonance_tau_weak(double omega, const ResonancePoint& p) {
  p.validate();
  if (!(omega > 0.0)) throw InvalidInput("resonance_tau_weak: omega must be positive");
  if (p.pulses == 1 && p.k == 0 && std::abs(p.c) >= 1.0) {
    throw InvalidInput("resonance_tau_weak: N = 1, k = 0 requires c in (-1, 1)");
  }
  const double tau = ((2 * p.k + 1) * kPi / 2.0 + p.c * kPi / (2.0 * p.pulses)) / omega;
  if (!(tau > 0.0)) throw InvalidInput("resonance_tau_weak: non-positive tau");
  return tau;
}

double resonance_tau_strong(double hyperfine, const ResonancePoint& p, StrongBranch branch) {
  p.validate();
  if (!(hyperfine > 0.0)) throw InvalidInput("resonance_tau_strong: A must be positive");
  const double base = branch == StrongBranch::Conditional ? (2 * p.k + 1) * kPi : 2 * p.k * kPi;
  const double tau = (base + p.c * kPi / p.pulses) / hyperfine;
  if (!(tau > 0.0)) throw InvalidInput("resonance_tau_strong: non-positive tau");
  return tau;
}

std::string to_csv(const PulseSequence& seq) {
  std::string out = "index,pulse_time_seconds\n";
  std::size_t i = 1;
  for (double t : seq.pulse_times()) out += std::to_string(i++) + "," + format_double(t) + "\n";
  out += "total," + format_double(seq.total_time()) + "\n";
  return out;
}

PulseSequence sequence_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "index,pulse_time_seconds") {
    throw InvalidInput("sequence csv: missing header 'index,pulse_time_seconds'");
  }
  std::vector<double> times;
  std::size_t expected_index = 1;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw InvalidInput("sequence csv: malformed row '" + line + "'");
    const std::string key = line.substr(0, comma);
    double value = 0.0;
    try {
      value = std::stod(line.substr(comma + 1));
    } catch (const std::exception&) {
      throw InvalidInput("sequence csv: bad number in row '" + line + "'");
    }
    if (key == "total") return {std::move(times), value};
    if (key != std::to_string(expected_index++)) {
      throw InvalidInput("sequence csv: unexpected index in row '" + line + "'");
    }
    times.push_back(value);
  }
  throw InvalidInput("sequence csv: missing trailing 'total' row");
}

}  // namespace spinfilt
