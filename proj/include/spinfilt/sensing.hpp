#ifndef SPINFILT_SENSING_HPP_
#define SPINFILT_SENSING_HPP_

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "spinfilt/filters.hpp"
#include "spinfilt/propagator.hpp"
#include "spinfilt/pulse_seq.hpp"
#include "spinfilt/spin_core.hpp"

namespace spinfilt {

Mat2 maximally_mixed();
Mat2 pure_density(cplx up, cplx down);

/// Throws InvalidInput unless rho is Hermitian, unit trace and positive semidefinite.
void validate_density(const Mat2& rho, double tol = 1e-10);

/// tr[U_+^dagger U_- rho], the control coherence normalized to its t = 0 value.
cplx coherence_exact_complex(const SpinSystem& sys, const PulseSequence& seq, const Mat2& rho = maximally_mixed());

/// Real part of coherence_exact_complex.
double coherence_exact(const SpinSystem& sys, const PulseSequence& seq, const Mat2& rho = maximally_mixed());

/// cos(A_eff t F_w) for an N-pulse CPMG with spacing 2 tau.
double coherence_filter(double A, double omega, int pulses, double tau, ControlKind control = ControlKind::SpinHalf);

/// exp(-(A_eff t F_w)^2 / 2).
double coherence_gaussian(double A, double omega, int pulses, double tau,
                          ControlKind control = ControlKind::SpinHalf);

/// cos(A_eff t |chi| / t) for an arbitrary sequence.
double coherence_filter(const SpinSystem& sys, const PulseSequence& seq);
double coherence_gaussian(const SpinSystem& sys, const PulseSequence& seq);

enum class CoherenceMethod { Exact, Filter, Gaussian };

struct CoherenceCurve {
  std::vector<double> times;
  std::vector<double> coherence;
  CoherenceMethod method;
};

/// Coherence after N = 0..max_pulses CPMG pulses at fixed spacing 2 tau (t = 2 N tau).
CoherenceCurve coherence_curve(const SpinSystem& sys, double tau, int max_pulses, CoherenceMethod method);

struct CpmgDescriptor {
  int pulses;
};

struct AlternatingDescriptor {
  int slices;
  int pulses_per_slice;
  int k;
  double c;
};

using SequenceDescriptor = std::variant<CpmgDescriptor, AlternatingDescriptor>;

int total_pulses(const SequenceDescriptor& d);

struct ScanRow {
  double omega_tau0;
  double coh_exact;
  double coh_filter;
  double coh_gaussian;
  std::optional<double> grating;
  std::optional<double> block_filter;
};

struct SensingScan {
  SequenceDescriptor descriptor;
  int pulses;
  std::vector<ScanRow> rows;
};

/// Coherence at every omega tau0 grid value. Points are evaluated on `threads` workers
/// (0 picks the hardware concurrency); rows keep grid order.
SensingScan sensing_scan(const SpinSystem& sys, const SequenceDescriptor& descriptor,
                         const std::vector<double>& omega_tau0_grid, unsigned threads = 0);

/// Header plus one row per grid point, columns omega_tau0,coh_exact,coh_filter,coh_gaussian[,G,F_block].
std::string to_csv(const SensingScan& scan);

}  // namespace spinfilt

#endif  // SPINFILT_SENSING_HPP_
