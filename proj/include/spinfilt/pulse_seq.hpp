#ifndef SPINFILT_PULSE_SEQ_HPP_
#define SPINFILT_PULSE_SEQ_HPP_

#include <span>
#include <string>
#include <vector>

#include "spinfilt/spin_core.hpp"

namespace spinfilt {

/// Constant-sign stretch of a pulse sequence: s(t) = sign on [start, end), and the
/// integrated step s_F takes the value s_f_start at `start`.
struct Segment {
  double start;
  double end;
  int sign;
  double s_f_start;

  double length() const { return end - start; }
};

/// Ideal instantaneous pi-pulses at strictly increasing times inside (0, total_time).
class PulseSequence {
 public:
  PulseSequence(std::vector<double> pulse_times, double total_time);

  static PulseSequence free_evolution(double total_time);

  std::span<const double> pulse_times() const { return pulses_; }
  double total_time() const { return total_time_; }
  std::size_t pulse_count() const { return pulses_.size(); }

  // Sign changes after each pulse, s(0) = +1.
  int step(double t) const;
  // Exact integral of step() over [0, t].
  double integrated_step(double t) const;

  std::vector<Segment> segments() const;
  // Segments clipped to [from, to]; s_f_start refers to the full sequence.
  std::vector<Segment> segments(double from, double to) const;

 private:
  void check_time(double t, const char* what) const;

  std::vector<double> pulses_;
  double total_time_;
};

/// Equidistant train: pulses at tau, 3 tau, ..., (2N-1) tau; total time 2 N tau.
PulseSequence cpmg(int pulses, double tau);

/// Plan for an alternating +c / -c sliced sequence. Each slice is a CPMG block of
/// `pulses_per_slice` pulses; even slices use tau_plus, odd slices tau_minus.
struct SliceSpec {
  int slices = 0;
  int pulses_per_slice = 0;
  double tau_plus = 0.0;
  double tau_minus = 0.0;
  int resonance_order = 0;
  double resonance_param = 0.0;

  /// tau_(+/-) = tau0 (1 +/- c / ((2k+1) n)).
  static SliceSpec from_resonance(int slices, int pulses_per_slice, double tau0, int k, double c);

  double tau0() const { return 0.5 * (tau_plus + tau_minus); }
  int total_pulses() const { return slices * pulses_per_slice; }
  double slice_tau(int j) const { return j % 2 == 0 ? tau_plus : tau_minus; }
  // Throws InvalidInput when an invariant is violated.
  void validate() const;
};

PulseSequence sliced_alternating(const SliceSpec& spec);

/// Resonance order k, detuning c and pulse count N.
struct ResonancePoint {
  int k = 0;
  double c = 0.0;
  int pulses = 1;

  void validate() const;
};

/// omega tau = (2k+1) pi/2 + c pi/(2N).
double resonance_tau_weak(double omega, const ResonancePoint& p);

enum class StrongBranch { Conditional, Unconditional };

/// (A tau)_c = (2k+1) pi + c pi/N, (A tau)_u = 2 k pi + c pi/N.
double resonance_tau_strong(double hyperfine, const ResonancePoint& p, StrongBranch branch);

/// CSV with header `index,pulse_time_seconds`, one row per pulse (index from 1), and a
/// trailing `total,<t_f>` row.
std::string to_csv(const PulseSequence& seq);
PulseSequence sequence_from_csv(const std::string& text);

}  // namespace spinfilt

#endif  // SPINFILT_PULSE_SEQ_HPP_
