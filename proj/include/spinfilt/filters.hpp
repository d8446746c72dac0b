#ifndef SPINFILT_FILTERS_HPP_
#define SPINFILT_FILTERS_HPP_

#include "spinfilt/pulse_seq.hpp"
#include "spinfilt/spin_core.hpp"

namespace spinfilt {

/// Weak-coupling filter at one (sequence, frequency) point.
///
/// The conditional rotation axis is axis_sign * (cos(phi) sigma_x - sin(phi) sigma_y),
/// with axis_sign = (-1)^k for the nearest resonance order k = floor(omega tau / pi)
/// and phi in (-pi, pi]. On a resonance point phi equals c pi / 2.
struct FilterResult {
  cplx chi;          // integral of exp(i omega t) s(t) over [0, t_f], seconds
  double magnitude;  // |chi| / t_f
  double phi;
  int axis_sign;

  Vec3 axis() const;
};

/// Spin-1 strong-coupling filters for one sign branch of S_z = (s_z s(t) +/- 1)/2.
///
/// Axes are reported in the convention
///   conditional:   -/+ (cos(phi_c) sigma_z +/- sin(phi_c) sigma_y)
///   unconditional:      cos(phi_u) sigma_z +/- sin(phi_u) sigma_y
/// (upper signs for sign_branch = +1), so that phi = c pi / 2 on a resonance.
struct StrongFilterResult {
  cplx chi_c;
  cplx chi_u;
  double F_c;
  double F_u;
  double phi_c;
  double phi_u;
  int sign_branch;
};

struct StrongChi {
  cplx conditional;
  cplx unconditional;
};

struct HalfFilterResult {
  double F_c;  // conditional, sigma_y axis
  double F_u;  // unconditional, sigma_z axis
};

struct GratingDecomposition {
  int M;                     // block repetitions
  int m;                     // pulses per block
  double grating;            // dimensionless
  double block_filter;       // seconds
  double total_filter_sq;    // G F_block^2 / t^2
  double sequence_filter_sq; // (|chi| / t)^2 of the full sequence, segment-sum evaluated
};

// --- segment-sum oracles (regular at every frequency) ---

/// Integral of exp(i omega t) s(t) over the whole sequence.
cplx chi_weak_oracle(double omega, const PulseSequence& seq);

/// chi_c and chi_u for the spin-1 sign branch `sign`:
///   chi_c = i Int sin(A s_F/2) exp(+/- i A t/2),  chi_u = Int cos(A s_F/2) exp(+/- i A t/2).
StrongChi chi_strong_oracle(double hyperfine, const PulseSequence& seq, int sign);

/// Integral of exp(i A s_F(t)) (spin-1/2 control, strong coupling).
cplx zeta_half_oracle(double hyperfine, const PulseSequence& seq);

// --- closed forms for CPMG sequences ---

FilterResult filter_weak(double omega, int pulses, double tau);

/// Resonance envelope (4/pi^2) |sin(c pi/2)| / (|c| (2k+1)).
double filter_weak_universal(double c, int k);

StrongFilterResult filters_strong(double hyperfine, int pulses, double tau, int sign);

/// sin(c pi/2) / (c pi), equal to 1/2 at c = 0.
double filter_strong_universal(double c);

HalfFilterResult filters_strong_half(double hyperfine, int pulses, double tau);

/// Second-order (Magnus) filter (1/t^2) |Int_{t2 < t1} sin(omega (t1 - t2)) s(t1) s(t2)|.
double second_order_filter(double omega, const PulseSequence& seq);

/// Signed version of the double integral divided by t^2.
double second_order_filter_signed(double omega, const PulseSequence& seq);

/// Grating of M repetitions of an m-pulse block at phase omega t.
double grating(double omega_t, int M, int m);

/// Grating / block-filter factorization of an alternating sequence with an even number
/// of slices (M = s/2 blocks of m = 2n pulses).
GratingDecomposition grating_block_decompose(double omega, const SliceSpec& spec);

/// Conversion of a weak-coupling chi into a FilterResult; omega_tau selects k.
FilterResult weak_filter_from_chi(cplx chi, double total_time, double omega_tau);

namespace detail {

// Guard-band half-width around removable singularities of the closed forms.
inline constexpr double kGuardBand = 1e-6;

// Closed form magnitude of the weak filter as a function of x = omega tau. The
// prefactor is 2; other values exist for fault injection in the validation suite.
double filter_weak_closed(double x, int pulses, double prefactor = 2.0);

// Integral of exp(i (phase_mid + rate (t - mid))) over a segment of the given length.
cplx segment_exp_integral(double phase_mid, double rate, double length);

}  // namespace detail

}  // namespace spinfilt

#endif  // SPINFILT_FILTERS_HPP_
