#include "spinfilt/validate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

#include "spinfilt/filters.hpp"
#include "spinfilt/propagator.hpp"
#include "spinfilt/pulse_seq.hpp"
#include "spinfilt/sensing.hpp"
#include "spinfilt/spin_core.hpp"

namespace spinfilt {

namespace {

class Recorder {
 public:
  explicit Recorder(SuiteResult& r) : r_(r) {}

  void check(bool ok, const std::string& what) {
    ++r_.checks;
    if (!ok && r_.failures.size() < 20) r_.failures.push_back(what);
  }

  void close(double a, double b, double tol, const std::string& what) {
    const bool ok = std::abs(a - b) <= tol;
    if (ok) {
      ++r_.checks;
      return;
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, " (%.12g vs %.12g)", a, b);
    check(false, what + buf);
  }

 private:
  SuiteResult& r_;
};

// Filters are O(1) at their peaks; below this magnitude relative comparisons use it as the scale.
constexpr double kRelFloor = 1e-4;

double rel_diff(double a, double b, double floor) { return std::abs(a - b) / std::max(std::abs(b), floor); }

Vec3 random_axis(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return Vec3{g(rng), g(rng), g(rng)}.normalized();
}

PulseSequence random_sequence(std::mt19937_64& rng, int max_pulses) {
  std::uniform_int_distribution<int> count(0, max_pulses);
  std::uniform_real_distribution<double> gap(0.05, 1.0);
  const int n = count(rng);
  std::vector<double> times;
  double t = 0.0;
  for (int i = 0; i < n; ++i) times.push_back(t += gap(rng));
  return {times, t + gap(rng)};
}

// Truncated exponential series of -i (theta/2) n.sigma.
Mat2 series_exp(const Vec3& n, double theta) {
  const Mat2 x = cplx(0.0, -0.5 * theta) * Mat2::pauli(n);
  Mat2 term = Mat2::identity();
  Mat2 sum = term;
  for (int k = 1; k < 30; ++k) {
    term = (1.0 / k) * (term * x);
    sum = sum + term;
  }
  return sum;
}

void spin_core_suite(Recorder& rec) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> angle(-2.0 * kPi, 2.0 * kPi);
  for (int i = 0; i < 200; ++i) {
    const Vec3 n = random_axis(rng);
    const double a = angle(rng);
    const double b = angle(rng);
    const Mat2 ua = pauli_exp({n, a});
    rec.check(((ua * pauli_exp({n, b})) - pauli_exp({n, a + b})).max_abs() <= 1e-11, "pauli_exp composition");
    rec.check(std::abs(ua.det() - 1.0) <= 1e-11, "pauli_exp determinant");
    rec.check((ua - series_exp(n, a)).max_abs() <= 1e-12, "pauli_exp vs power series");
    const Mat2 ub = pauli_exp({random_axis(rng), b});
    rec.check(unitary_fidelity(ua, ub) == unitary_fidelity(ub, ua), "unitary_fidelity symmetry");
  }
}

void pulse_seq_suite(Recorder& rec) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 100; ++i) {
    const PulseSequence seq = random_sequence(rng, 12);
    int expected = 1;
    for (const Segment& s : seq.segments()) {
      const double probe = s.start + 0.5 * s.length();
      rec.check(seq.step(probe) == expected, "step sign between pulses");
      rec.check(seq.step(s.start + 0.01 * s.length()) == expected, "step constant within a segment");
      rec.check(seq.step(s.end - 0.01 * s.length()) == expected, "step constant within a segment");
      const double sf = seq.integrated_step(probe);
      rec.check(std::abs(sf) <= probe + 1e-12, "|s_F(t)| <= t");
      rec.close(seq.integrated_step(s.end) - seq.integrated_step(probe), expected * (s.end - probe), 1e-12,
                "s_F slope +-1");
      expected = -expected;
    }
    const PulseSequence back = sequence_from_csv(to_csv(seq));
    bool same = back.total_time() == seq.total_time() && back.pulse_count() == seq.pulse_count();
    for (std::size_t k = 0; same && k < seq.pulse_count(); ++k) same = back.pulse_times()[k] == seq.pulse_times()[k];
    rec.check(same, "csv round trip");
  }
  for (int n = 2; n <= 40; n += 2) {
    const PulseSequence seq = cpmg(n, 0.37);
    rec.close(seq.integrated_step(seq.total_time()), 0.0, 1e-13 * seq.total_time(), "even-N s_F(t_f) = 0");
  }
}

void filters_suite(Recorder& rec, const ValidateOptions& opt) {
  const double prefactor = opt.mutate ? 2.0 * (1.0 + 1e-6) : 2.0;
  const int points = 2000;
  for (int n = 1; n <= 12; ++n) {
    for (int i = 0; i < points; ++i) {
      const double x = 0.05 + (3.0 * kPi - 0.05) * i / (points - 1);
      if (std::abs(std::cos(x)) < detail::kGuardBand) continue;
      const PulseSequence seq = cpmg(n, x);
      const double oracle = std::abs(chi_weak_oracle(1.0, seq)) / seq.total_time();
      const double closed = detail::filter_weak_closed(x, n, prefactor);
      rec.check(rel_diff(closed, oracle, kRelFloor) <= 1e-10, "weak closed form vs oracle, N=" + std::to_string(n));
    }
  }
  for (int n = 1; n <= 12; ++n) {
    for (int sign : {1, -1}) {
      for (int i = 0; i < 300; ++i) {
        const double x = 0.1 + (3.0 * kPi - 0.1) * i / 299.0;
        if (std::abs(std::cos(0.5 * x)) < detail::kGuardBand || std::abs(std::sin(0.5 * x)) < detail::kGuardBand) {
          continue;
        }
        const StrongFilterResult fr = filters_strong(1.0, n, x, sign);
        const StrongChi oracle = chi_strong_oracle(1.0, cpmg(n, x), sign);
        const double t = 2.0 * n * x;
        rec.check(rel_diff(fr.F_c, std::abs(oracle.conditional) / t, kRelFloor) <= 1e-10, "strong F_c vs oracle");
        rec.check(rel_diff(fr.F_u, std::abs(oracle.unconditional) / t, kRelFloor) <= 1e-10, "strong F_u vs oracle");
      }
    }
  }
  for (int n = 1; n <= 8; ++n) {
    for (double c : {0.3, 0.7, 1.0, 1.5}) {
      const double tp = resonance_tau_strong(1.0, {1, c, n}, StrongBranch::Conditional);
      const double tm = resonance_tau_strong(1.0, {1, -c, n}, StrongBranch::Conditional);
      const double fp = std::abs(chi_strong_oracle(1.0, cpmg(n, tp), 1).conditional) / (2.0 * n * tp);
      const double fm = std::abs(chi_strong_oracle(1.0, cpmg(n, tm), 1).conditional) / (2.0 * n * tm);
      rec.close(fp, fm, 1e-12, "strong F_c even in c");
    }
  }
  for (int n : {4, 8, 12}) {
    rec.close(filter_weak(1.0, n, resonance_tau_weak(1.0, {0, 0.0, n})).magnitude, 2.0 / kPi, 1e-12,
              "weak k=0 resonance constant");
    rec.close(filter_weak(1.0, n, resonance_tau_weak(1.0, {1, 0.0, n})).magnitude, 2.0 / (3.0 * kPi), 1e-12,
              "weak k=1 resonance constant");
    rec.close(filters_strong(1.0, n, kPi, 1).F_c, 0.5, 1e-12, "strong c=0 resonance constant");
  }
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> half_blocks(1, 12);
  std::uniform_int_distribution<int> per_slice(1, 6);
  std::uniform_real_distribution<double> cdist(-1.9, 1.9);
  std::uniform_real_distribution<double> xdist(0.1, 3.0 * kPi);
  for (int i = 0; i < 50; ++i) {
    const int n = per_slice(rng);
    double c = cdist(rng);
    if (n == 1) c *= 0.5;
    const SliceSpec spec = SliceSpec::from_resonance(2 * half_blocks(rng), n, xdist(rng), 0, c);
    const GratingDecomposition g = grating_block_decompose(1.0, spec);
    rec.check(rel_diff(g.total_filter_sq, g.sequence_filter_sq, 1e-14) <= 1e-10, "grating identity");
  }
}

void propagator_suite(Recorder& rec) {
  {
    const SpinSystem sys{1.0, 0.01, ControlKind::SpinOneMinus};
    const ConditionalUnitary u = evolve_exact(sys, cpmg(10000, 1.3));
    rec.check(u.is_unitary(1e-12), "unitarity over 1e4 pulses");
  }
  std::mt19937_64 rng(4);
  for (int i = 0; i < 20; ++i) {
    const SpinSystem sys{1.0, 0.3, i % 2 == 0 ? ControlKind::SpinHalf : ControlKind::SpinOnePlus};
    const PulseSequence seq = random_sequence(rng, 10);
    const auto segs = seq.segments();
    const Segment& mid = segs[segs.size() / 2];
    const double split = mid.start + 0.5 * mid.length();
    const ConditionalUnitary a = evolve_exact(sys, seq, 0.0, split);
    const ConditionalUnitary b = evolve_exact(sys, seq, split, seq.total_time());
    const ConditionalUnitary whole = evolve_exact(sys, seq);
    const ConditionalUnitary joined{b.plus * a.plus, b.minus * a.minus};
    rec.check(joined.max_distance(whole) <= 1e-11, "composition at a split point");
  }
  {
    const SpinSystem sys{1.0, 0.02, ControlKind::SpinHalf};
    const double tau = resonance_tau_weak(1.0, {0, 0.0, 1});
    for (int n = 4; n <= 64; n *= 2) {
      auto angle = [&](int pulses) {
        const PulseSequence seq = cpmg(pulses, tau);
        return split_generators(to_rotating_frame(sys, evolve_exact(sys, seq), seq.total_time(), Frame::Weak))
            .conditional_angle();
      };
      const double a1 = angle(n);
      if (2.0 * a1 > kPi) break;
      const double a2 = angle(2 * n);
      rec.check(rel_diff(a2, 2.0 * a1, 1e-300) <= 1e-4, "c=0 additivity");
    }
  }
  {
    const SpinSystem sys{1.0, 0.06, ControlKind::SpinHalf};
    const SliceSpec spec = SliceSpec::from_resonance(10, 2, kPi / 2.0, 0, 1.0);
    const PulseSequence seq = sliced_alternating(spec);
    const SlicedPrediction pred = sliced_evolution_predict(sys, spec);
    const ConditionalUnitary exact =
        to_rotating_frame(sys, evolve_exact(sys, seq), seq.total_time(), Frame::Weak);
    const double f = gate_fidelity_report(exact, conditional_rotation(pred.axis, kPi / 2.0), down_plus_state());
    rec.check(f >= 0.99 && f <= 1.0, "sliced gate fidelity in [0.99, 1]");
    const double tau = resonance_tau_weak(1.0, {0, 1.0, 20});
    const PulseSequence plain = cpmg(20, tau);
    const ConditionalUnitary ep = to_rotating_frame(sys, evolve_exact(sys, plain), plain.total_time(), Frame::Weak);
    const double fp = gate_fidelity_report(
        ep, conditional_rotation(predict_weak(sys, 20, tau).prediction.axis.axis, kPi / 2.0), down_plus_state());
    rec.check(fp >= 0.85 && fp <= 0.95, "CPMG gate fidelity in [0.85, 0.95]");
  }
  {
    // error scaling in the deep weak regime
    const SpinSystem sys{1.0, 0.001, ControlKind::SpinHalf};
    std::vector<double> lx;
    std::vector<double> ly;
    for (int n : {16, 32, 63, 126}) {
      const double t = resonance_tau_weak(1.0, {0, 1.0, n});
      const PulseSequence seq = cpmg(n, t);
      const PredictedGate p = predict_weak(sys, n, t);
      const ConditionalUnitary ex = to_rotating_frame(sys, evolve_exact(sys, seq), seq.total_time(), Frame::Weak);
      lx.push_back(std::log(p.prediction.theta));
      ly.push_back(std::log(ex.max_distance(p.unitary)));
    }
    const double mx = (lx[0] + lx[1] + lx[2] + lx[3]) / 4.0;
    const double my = (ly[0] + ly[1] + ly[2] + ly[3]) / 4.0;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    rec.close(sxy / sxx, 2.0, 0.15, "prediction error slope at A/omega=0.001");
  }
}

void sensing_suite(Recorder& rec) {
  const double omega = 1.0;
  const double tau = resonance_tau_weak(omega, {0, 0.0, 1});
  const SpinSystem sys{omega, 0.05, ControlKind::SpinHalf};
  for (int n = 1; n <= 31; ++n) {
    const double exact = coherence_exact(sys, cpmg(n, tau));
    rec.check(std::abs(exact) <= 1.0 + 1e-10, "|coherence| <= 1");
    rec.close(exact, coherence_filter(sys.A, omega, n, tau), 0.02, "c=0 coherence vs filter");
  }
  rec.close(coherence_exact(sys, cpmg(1, 1e-9)), 1.0, 1e-12, "coherence at t -> 0");
  for (int i = 1; i <= 50; ++i) {
    const double x = 0.5 * i / 50.0;
    // exp(-x^2/2) - cos x = x^4/12 - O(x^6)
    rec.check(std::abs(std::exp(-0.5 * x * x) - std::cos(x)) <= std::pow(x, 4) / 12.0, "gaussian vs cos bound");
  }
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    const SpinSystem s{1.0, 0.4, i % 2 == 0 ? ControlKind::SpinHalf : ControlKind::SpinOneMinus};
    const PulseSequence seq = random_sequence(rng, 16);
    const Vec3 n = random_axis(rng);
    const Mat2 rho = 0.5 * (Mat2::identity() + cplx(0.9) * Mat2::pauli(n));
    rec.check(std::abs(coherence_exact_complex(s, seq, rho)) <= 1.0 + 1e-10, "|coherence| <= 1 for mixed states");
  }
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"spin-core", "pulse-seq", "filters", "propagator", "sensing"};
  return names;
}

SuiteResult run_suite(std::string_view name, const ValidateOptions& options) {
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw InvalidInput("unknown suite '" + std::string(name) + "'");
  }
  SuiteResult result;
  result.name = std::string(name);
  Recorder rec(result);
  try {
    if (name == "spin-core") {
      spin_core_suite(rec);
    } else if (name == "pulse-seq") {
      pulse_seq_suite(rec);
    } else if (name == "filters") {
      filters_suite(rec, options);
    } else if (name == "propagator") {
      propagator_suite(rec);
    } else {
      sensing_suite(rec);
    }
  } catch (const std::exception& e) {
    rec.check(false, std::string("exception: ") + e.what());
  }
  return result;
}

}  // namespace spinfilt
