#ifndef SPINFILT_PROPAGATOR_HPP_
#define SPINFILT_PROPAGATOR_HPP_

#include <optional>
#include <string_view>

#include "spinfilt/filters.hpp"
#include "spinfilt/pulse_seq.hpp"
#include "spinfilt/spin_core.hpp"

namespace spinfilt {

/// Control-spin configuration. SpinHalf has S_z = s_z s(t); the spin-1 variants have
/// S_z = (s_z s(t) +/- 1)/2.
enum class ControlKind { SpinHalf, SpinOnePlus, SpinOneMinus };

ControlKind parse_control_kind(std::string_view name);  // half | one+ | one-
std::string_view to_string(ControlKind kind);

/// H = (omega/2) sigma_z + (A/2) sigma_x (x) S_z(t), target (x) control.
struct SpinSystem {
  double omega = 0.0;  // target splitting, rad/s
  double A = 0.0;      // hyperfine coupling, rad/s
  ControlKind control = ControlKind::SpinHalf;

  bool spin_one() const { return control != ControlKind::SpinHalf; }
  // +1 / -1 for the spin-1 variants, 0 for spin-1/2
  int spin_one_sign() const;
  // A for spin-1/2, A/2 for spin-1 (weak-coupling conditional strength)
  double effective_coupling() const { return spin_one() ? 0.5 * A : A; }
  void validate() const;
};

/// Target evolution for each control branch, s_z = +1 and s_z = -1.
struct ConditionalUnitary {
  Mat2 plus = Mat2::identity();
  Mat2 minus = Mat2::identity();

  const Mat2& branch(int s_z) const { return s_z > 0 ? plus : minus; }
  // Apply to a target (x) control state.
  State4 apply(const State4& psi) const;
  double max_distance(const ConditionalUnitary& other) const;
  bool is_unitary(double tol = 1e-12) const { return plus.is_unitary(tol) && minus.is_unitary(tol); }
};

/// Branch-symmetric split of the branch generators g_b (U_b = exp(-i g_b.sigma)):
/// conditional = (g_+ - g_-)/2, unconditional = (g_+ + g_-)/2.
struct GeneratorSplit {
  Vec3 conditional;
  Vec3 unconditional;

  double conditional_angle() const { return 2.0 * conditional.norm(); }
};

GeneratorSplit split_generators(const ConditionalUnitary& u, const GeneratorSplit* hint = nullptr);

enum class Frame { Weak, Strong };
enum class Regime { Weak, Strong };

struct GatePrediction {
  double theta = 0.0;  // conditional rotation angle
  AxisAngle axis;      // conditional axis; angle == theta
  std::optional<AxisAngle> unconditional_axis;
  Regime source = Regime::Weak;
};

struct PredictedGate {
  GatePrediction prediction;
  ConditionalUnitary unitary;  // rotating frame
};

struct SlicedPrediction {
  ConditionalUnitary unitary;  // rotating frame
  double theta_eff = 0.0;
  double filter_eff = 0.0;
  Vec3 axis;  // axis of the first slice, the globally fixed one for alternating sequences
};

enum class MagnusTier { Ok, Marginal, Invalid };

struct MagnusValidity {
  double error_estimate;
  MagnusTier tier;
};

/// Exact propagator of one constant-sign interval of length dt, s(t) = sign.
ConditionalUnitary segment_propagator(const SpinSystem& sys, int sign, double dt);

/// Exact ordered product of segment exponentials, latest segment leftmost.
ConditionalUnitary evolve_exact(const SpinSystem& sys, const PulseSequence& seq);

/// Same, restricted to [from, to] (the s(t) pattern of the full sequence is kept).
ConditionalUnitary evolve_exact(const SpinSystem& sys, const PulseSequence& seq, double from, double to);

/// U_int = exp(+i H0 t) U with H0 = (omega/2) sigma_z (weak) or +/-(A/4) sigma_x (strong,
/// spin-1 only).
ConditionalUnitary to_rotating_frame(const SpinSystem& sys, const ConditionalUnitary& u, double t, Frame frame);
ConditionalUnitary from_rotating_frame(const SpinSystem& sys, const ConditionalUnitary& u, double t, Frame frame);

/// First-order filter prediction exp(-i (theta/2) sigma_phi (x) s_z), theta = A_eff t F_w.
PredictedGate predict_weak(const SpinSystem& sys, int pulses, double tau);

/// exp(-i (omega/2) t [F_c sigma^c (x) s_z + F_u sigma^u (x) 1]) for a spin-1 control.
PredictedGate predict_strong(const SpinSystem& sys, int pulses, double tau);

/// Slice-by-slice filter prediction of an alternating sequence, with the interleaved
/// frame rotations and the s_z -> -s_z substitution after an odd number of pulses.
SlicedPrediction sliced_evolution_predict(const SpinSystem& sys, const SliceSpec& spec,
                                          Frame frame = Frame::Weak);

/// 2 n omega tau, optionally reduced into [0, 2 pi).
double coordinate_rotation_angle(int pulses, double omega, double tau, bool reduce = false);

/// Relative second-order error estimate (theta/2)^2 with tiers ok < 0.01 <= marginal < 0.1.
MagnusValidity magnus_validity(double theta);

/// State fidelity of the two evolved states when a state is given, otherwise the
/// mean branchwise unitary fidelity.
double gate_fidelity_report(const ConditionalUnitary& actual, const ConditionalUnitary& predicted,
                            const std::optional<State4>& initial_state = std::nullopt);

/// Ideal conditional rotation exp(-i (theta/2) s_z n.sigma).
ConditionalUnitary conditional_rotation(const Vec3& axis, double theta);

}  // namespace spinfilt

#endif  // SPINFILT_PROPAGATOR_HPP_
