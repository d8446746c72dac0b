#include "spinfilt/sensing.hpp"

#include <cmath>
#include <cstdio>

#include "spinfilt/parallel.hpp"

namespace spinfilt {

namespace {

double effective(double A, ControlKind control) { return control == ControlKind::SpinHalf ? A : 0.5 * A; }

// A_eff t F for a CPMG block.
double cpmg_phase(double A, double omega, int pulses, double tau, ControlKind control) {
  const FilterResult fr = filter_weak(omega, pulses, tau);
  return effective(A, control) * 2.0 * pulses * tau * fr.magnitude;
}

double sequence_phase(const SpinSystem& sys, const PulseSequence& seq) {
  return sys.effective_coupling() * std::abs(chi_weak_oracle(sys.omega, seq));
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Mat2 maximally_mixed() { return 0.5 * Mat2::identity(); }

Mat2 pure_density(cplx up, cplx down) {
  const double norm = std::norm(up) + std::norm(down);
  if (!(norm > 0.0)) throw InvalidInput("pure_density: zero state vector");
  const double s = 1.0 / norm;
  Mat2 rho;
  rho(0, 0) = s * up * std::conj(up);
  rho(0, 1) = s * up * std::conj(down);
  rho(1, 0) = s * down * std::conj(up);
  rho(1, 1) = s * down * std::conj(down);
  return rho;
}

void validate_density(const Mat2& rho, double tol) {
  if ((rho - rho.adjoint()).max_abs() > tol) throw InvalidInput("density matrix: not Hermitian");
  const cplx tr = rho.trace();
  if (std::abs(tr - 1.0) > tol) throw InvalidInput("density matrix: trace is not 1");
  // Hermitian 2x2 with unit trace is PSD iff det >= 0.
  if (rho.det().real() < -tol) throw InvalidInput("density matrix: not positive semidefinite");
}

cplx coherence_exact_complex(const SpinSystem& sys, const PulseSequence& seq, const Mat2& rho) {
  validate_density(rho);
  const ConditionalUnitary u = evolve_exact(sys, seq);
  return (u.plus.adjoint() * u.minus * rho).trace();
}

double coherence_exact(const SpinSystem& sys, const PulseSequence& seq, const Mat2& rho) {
  return coherence_exact_complex(sys, seq, rho).real();
}

double coherence_filter(double A, double omega, int pulses, double tau, ControlKind control) {
  return std::cos(cpmg_phase(A, omega, pulses, tau, control));
}

double coherence_gaussian(double A, double omega, int pulses, double tau, ControlKind control) {
  const double x = cpmg_phase(A, omega, pulses, tau, control);
  return std::exp(-0.5 * x * x);
}

double coherence_filter(const SpinSystem& sys, const PulseSequence& seq) {
  return std::cos(sequence_phase(sys, seq));
}

double coherence_gaussian(const SpinSystem& sys, const PulseSequence& seq) {
  const double x = sequence_phase(sys, seq);
  return std::exp(-0.5 * x * x);
}

CoherenceCurve coherence_curve(const SpinSystem& sys, double tau, int max_pulses, CoherenceMethod method) {
  if (max_pulses < 0) throw InvalidInput("coherence_curve: max_pulses must be >= 0");
  if (!(tau > 0.0)) throw InvalidInput("coherence_curve: tau must be positive");
  CoherenceCurve curve{{0.0}, {1.0}, method};
  for (int n = 1; n <= max_pulses; ++n) {
    double value = 1.0;
    switch (method) {
      case CoherenceMethod::Exact: value = coherence_exact(sys, cpmg(n, tau)); break;
      case CoherenceMethod::Filter: value = coherence_filter(sys.A, sys.omega, n, tau, sys.control); break;
      case CoherenceMethod::Gaussian: value = coherence_gaussian(sys.A, sys.omega, n, tau, sys.control); break;
    }
    curve.times.push_back(2.0 * n * tau);
    curve.coherence.push_back(value);
  }
  return curve;
}

int total_pulses(const SequenceDescriptor& d) {
  if (const auto* c = std::get_if<CpmgDescriptor>(&d)) return c->pulses;
  const auto& a = std::get<AlternatingDescriptor>(d);
  return a.slices * a.pulses_per_slice;
}

SensingScan sensing_scan(const SpinSystem& sys, const SequenceDescriptor& descriptor,
                         const std::vector<double>& omega_tau0_grid, unsigned threads) {
  sys.validate();
  if (!(sys.omega > 0.0)) throw InvalidInput("sensing_scan: omega must be positive");
  if (total_pulses(descriptor) < 1) throw InvalidInput("sensing_scan: the sequence needs at least one pulse");
  for (double x : omega_tau0_grid) {
    if (!(x > 0.0) || !std::isfinite(x)) throw InvalidInput("sensing_scan: grid values must be positive");
  }
  const bool alternating = std::holds_alternative<AlternatingDescriptor>(descriptor);
  if (alternating) {
    const auto& a = std::get<AlternatingDescriptor>(descriptor);
    // reject bad slice plans before fanning out
    SliceSpec::from_resonance(a.slices, a.pulses_per_slice, 1.0, a.k, a.c);
    if (a.slices % 2 != 0) throw InvalidInput("sensing_scan: alternating scans need an even slice count");
  }
  auto rows = parallel_map<ScanRow>(
      omega_tau0_grid.size(),
      [&](std::size_t i) {
        const double x = omega_tau0_grid[i];
        const double tau0 = x / sys.omega;
        ScanRow row{x, 0.0, 0.0, 0.0, std::nullopt, std::nullopt};
        if (!alternating) {
          const int n = std::get<CpmgDescriptor>(descriptor).pulses;
          const PulseSequence seq = cpmg(n, tau0);
          row.coh_exact = coherence_exact(sys, seq);
          row.coh_filter = coherence_filter(sys.A, sys.omega, n, tau0, sys.control);
          row.coh_gaussian = coherence_gaussian(sys.A, sys.omega, n, tau0, sys.control);
          return row;
        }
        const auto& a = std::get<AlternatingDescriptor>(descriptor);
        const SliceSpec spec = SliceSpec::from_resonance(a.slices, a.pulses_per_slice, tau0, a.k, a.c);
        const PulseSequence seq = sliced_alternating(spec);
        row.coh_exact = coherence_exact(sys, seq);
        row.coh_filter = coherence_filter(sys, seq);
        row.coh_gaussian = coherence_gaussian(sys, seq);
        const GratingDecomposition g = grating_block_decompose(sys.omega, spec);
        row.grating = g.grating;
        row.block_filter = g.block_filter;
        return row;
      },
      threads);
  return {descriptor, total_pulses(descriptor), std::move(rows)};
}

std::string to_csv(const SensingScan& scan) {
  const bool overlay = std::holds_alternative<AlternatingDescriptor>(scan.descriptor);
  std::string out = overlay ? "omega_tau0,coh_exact,coh_filter,coh_gaussian,G,F_block\n"
                            : "omega_tau0,coh_exact,coh_filter,coh_gaussian\n";
  for (const ScanRow& r : scan.rows) {
    out += format_double(r.omega_tau0) + "," + format_double(r.coh_exact) + "," + format_double(r.coh_filter) +
           "," + format_double(r.coh_gaussian);
    if (overlay) out += "," + format_double(r.grating.value_or(0.0)) + "," + format_double(r.block_filter.value_or(0.0));
    out += "\n";
  }
  return out;
}

}  // namespace spinfilt
