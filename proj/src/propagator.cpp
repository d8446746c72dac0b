#include "spinfilt/propagator.hpp"

#include <cmath>
#include <string>

namespace spinfilt {

namespace {

Mat2 frame_rotation(const SpinSystem& sys, double t, Frame frame) {
  if (frame == Frame::Weak) return exp_neg_i({0.0, 0.0, -0.5 * sys.omega * t});
  if (!sys.spin_one()) {
    throw InvalidInput("rotating frame: the strong-coupling frame requires a spin-1 control");
  }
  return exp_neg_i({-sys.spin_one_sign() * 0.25 * sys.A * t, 0.0, 0.0});
}

Vec3 unit_or_z(const Vec3& v) {
  const double n = v.norm();
  return n > 0.0 ? (1.0 / n) * v : Vec3{0.0, 0.0, 1.0};
}

ConditionalUnitary from_generators(const Vec3& conditional, const Vec3& unconditional) {
  return {exp_neg_i(unconditional + conditional), exp_neg_i(unconditional - conditional)};
}

// Rotating-frame generators (conditional, unconditional) of one CPMG block.
struct BlockGenerators {
  Vec3 conditional;
  Vec3 unconditional;
  double filter;  // conditional filter magnitude
  Vec3 axis;
};

BlockGenerators weak_block(const SpinSystem& sys, int pulses, double tau) {
  const FilterResult fr = filter_weak(sys.omega, pulses, tau);
  const double theta = sys.effective_coupling() * 2.0 * pulses * tau * fr.magnitude;
  const Vec3 axis = fr.axis();
  return {(0.5 * theta) * axis, {}, fr.magnitude, axis};
}

BlockGenerators strong_block(const SpinSystem& sys, int pulses, double tau) {
  if (!sys.spin_one()) {
    throw InvalidInput(
        "predict_strong: a spin-1/2 control gives no scalable conditional evolution; "
        "use filters_strong_half for its filters");
  }
  const StrongFilterResult fr = filters_strong(sys.A, pulses, tau, sys.spin_one_sign());
  const double h = 0.5 * sys.omega;
  const Vec3 cond{0.0, h * fr.chi_c.imag(), h * fr.chi_c.real()};
  const Vec3 uncond{0.0, h * fr.chi_u.imag(), h * fr.chi_u.real()};
  return {cond, uncond, fr.F_c, unit_or_z(cond)};
}

}  // namespace

ControlKind parse_control_kind(std::string_view name) {
  if (name == "half") return ControlKind::SpinHalf;
  if (name == "one+") return ControlKind::SpinOnePlus;
  if (name == "one-") return ControlKind::SpinOneMinus;
  throw InvalidInput("unknown control kind '" + std::string(name) + "' (expected half, one+ or one-)");
}

std::string_view to_string(ControlKind kind) {
  switch (kind) {
    case ControlKind::SpinHalf: return "half";
    case ControlKind::SpinOnePlus: return "one+";
    case ControlKind::SpinOneMinus: return "one-";
  }
  return "half";
}

int SpinSystem::spin_one_sign() const {
  switch (control) {
    case ControlKind::SpinOnePlus: return 1;
    case ControlKind::SpinOneMinus: return -1;
    case ControlKind::SpinHalf: break;
  }
  return 0;
}

void SpinSystem::validate() const {
  if (!(omega >= 0.0) || !std::isfinite(omega)) throw InvalidInput("spin system: omega must be >= 0");
  if (!std::isfinite(A)) throw InvalidInput("spin system: A must be finite");
}

State4 ConditionalUnitary::apply(const State4& psi) const {
  State4 out{};
  for (int c = 0; c < 2; ++c) {
    const Mat2& u = c == 0 ? plus : minus;
    const cplx up = psi[static_cast<std::size_t>(c)];
    const cplx down = psi[static_cast<std::size_t>(2 + c)];
    out[static_cast<std::size_t>(c)] = u(0, 0) * up + u(0, 1) * down;
    out[static_cast<std::size_t>(2 + c)] = u(1, 0) * up + u(1, 1) * down;
  }
  return out;
}

double ConditionalUnitary::max_distance(const ConditionalUnitary& other) const {
  return std::max((plus - other.plus).max_abs(), (minus - other.minus).max_abs());
}

GeneratorSplit split_generators(const ConditionalUnitary& u, const GeneratorSplit* hint) {
  Vec3 g_plus;
  Vec3 g_minus;
  if (hint != nullptr) {
    const Vec3 hp = hint->unconditional + hint->conditional;
    const Vec3 hm = hint->unconditional - hint->conditional;
    g_plus = rotation_generator(u.plus, &hp);
    g_minus = rotation_generator(u.minus, &hm);
  } else {
    g_plus = rotation_generator(u.plus);
    g_minus = rotation_generator(u.minus);
  }
  return {0.5 * (g_plus - g_minus), 0.5 * (g_plus + g_minus)};
}

ConditionalUnitary segment_propagator(const SpinSystem& sys, int sign, double dt) {
  const int offset = sys.spin_one_sign();
  auto branch = [&](int b) {
    const double coupling = sys.spin_one() ? 0.5 * (b * sign + offset) : b * sign;
    return exp_neg_i({0.5 * sys.A * coupling * dt, 0.0, 0.5 * sys.omega * dt});
  };
  return {branch(1), branch(-1)};
}

ConditionalUnitary evolve_exact(const SpinSystem& sys, const PulseSequence& seq) {
  return evolve_exact(sys, seq, 0.0, seq.total_time());
}

ConditionalUnitary evolve_exact(const SpinSystem& sys, const PulseSequence& seq, double from, double to) {
  sys.validate();
  ConditionalUnitary u;
  for (const Segment& s : seq.segments(from, to)) {
    const ConditionalUnitary step = segment_propagator(sys, s.sign, s.length());
    u = {step.plus * u.plus, step.minus * u.minus};
  }
  return u;
}

ConditionalUnitary to_rotating_frame(const SpinSystem& sys, const ConditionalUnitary& u, double t, Frame frame) {
  const Mat2 r = frame_rotation(sys, t, frame);
  return {r * u.plus, r * u.minus};
}

ConditionalUnitary from_rotating_frame(const SpinSystem& sys, const ConditionalUnitary& u, double t, Frame frame) {
  const Mat2 r = frame_rotation(sys, t, frame).adjoint();
  return {r * u.plus, r * u.minus};
}

ConditionalUnitary conditional_rotation(const Vec3& axis, double theta) {
  return from_generators((0.5 * theta) * axis, {});
}

PredictedGate predict_weak(const SpinSystem& sys, int pulses, double tau) {
  sys.validate();
  const BlockGenerators g = weak_block(sys, pulses, tau);
  const double theta = 2.0 * g.conditional.norm();
  GatePrediction p{theta, {g.axis, theta}, std::nullopt, Regime::Weak};
  return {p, from_generators(g.conditional, g.unconditional)};
}

PredictedGate predict_strong(const SpinSystem& sys, int pulses, double tau) {
  sys.validate();
  const BlockGenerators g = strong_block(sys, pulses, tau);
  const double t = 2.0 * pulses * tau;
  const double theta = sys.omega * t * g.filter;
  const double uncond_angle = 2.0 * g.unconditional.norm();
  GatePrediction p{theta, {g.axis, theta}, AxisAngle{unit_or_z(g.unconditional), uncond_angle}, Regime::Strong};
  return {p, from_generators(g.conditional, g.unconditional)};
}

SlicedPrediction sliced_evolution_predict(const SpinSystem& sys, const SliceSpec& spec, Frame frame) {
  sys.validate();
  spec.validate();
  if (spec.slices % 2 != 0) throw InvalidInput("sliced_evolution_predict: the slice count must be even");
  const int n = spec.pulses_per_slice;
  ConditionalUnitary total;
  double start = 0.0;
  double weighted_filter = 0.0;
  Vec3 first_axis;
  for (int j = 0; j < spec.slices; ++j) {
    const double tau = spec.slice_tau(j);
    BlockGenerators g = frame == Frame::Weak ? weak_block(sys, n, tau) : strong_block(sys, n, tau);
    if (j == 0) first_axis = g.axis;
    // an odd number of preceding pulses swaps the control branches
    if ((j * n) % 2 != 0) g.conditional = -g.conditional;
    const ConditionalUnitary local = from_generators(g.conditional, g.unconditional);
    const Mat2 r = frame_rotation(sys, start, frame);
    const Mat2 r_dag = r.adjoint();
    total = {r * local.plus * r_dag * total.plus, r * local.minus * r_dag * total.minus};
    const double dt = 2.0 * n * tau;
    weighted_filter += dt * g.filter;
    start += dt;
  }
  const double filter_eff = weighted_filter / start;
  const double rate = frame == Frame::Weak ? sys.effective_coupling() : sys.omega;
  return {total, rate * start * filter_eff, filter_eff, first_axis};
}

double coordinate_rotation_angle(int pulses, double omega, double tau, bool reduce) {
  if (pulses < 1) throw InvalidInput("coordinate_rotation_angle: n must be >= 1");
  const double angle = 2.0 * pulses * omega * tau;
  if (!reduce) return angle;
  const double r = std::fmod(angle, 2.0 * kPi);
  return r < 0.0 ? r + 2.0 * kPi : r;
}

MagnusValidity magnus_validity(double theta) {
  if (!(theta >= 0.0)) throw InvalidInput("magnus_validity: theta must be >= 0");
  const double err = 0.25 * theta * theta;
  const MagnusTier tier = err < 0.01 ? MagnusTier::Ok : (err < 0.1 ? MagnusTier::Marginal : MagnusTier::Invalid);
  return {err, tier};
}

double gate_fidelity_report(const ConditionalUnitary& actual, const ConditionalUnitary& predicted,
                            const std::optional<State4>& initial_state) {
  if (initial_state) {
    return state_fidelity(actual.apply(*initial_state), predicted.apply(*initial_state));
  }
  return 0.5 * (unitary_fidelity(actual.plus, predicted.plus) + unitary_fidelity(actual.minus, predicted.minus));
}

}  // namespace spinfilt
