#include "spinfilt/filters.hpp"

#include <cmath>

namespace spinfilt {

namespace {

constexpr cplx kI{0.0, 1.0};

double wrap_pi(double a) {
  // into (-pi, pi]
  a = std::remainder(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

void require_cpmg_args(int pulses, double tau, const char* what) {
  if (pulses < 1) throw InvalidInput(std::string(what) + ": N must be >= 1");
  if (!(tau > 0.0)) throw InvalidInput(std::string(what) + ": tau must be positive");
}

void require_sign(int sign) {
  if (sign != 1 && sign != -1) throw InvalidInput("spin-1 sign branch must be +1 or -1");
}

// Weak chi of an N-pulse CPMG in closed form (valid off the cos(omega tau) = 0 band).
cplx chi_weak_closed(double omega, int pulses, double tau) {
  const double x = omega * tau;
  const double total = 2.0 * pulses * tau;
  const bool even = pulses % 2 == 0;
  const double nx = pulses * x;
  const cplx bracket = even ? cplx(0.0, -std::sin(nx)) : cplx(std::cos(nx), 0.0);
  const double parity = even ? 1.0 : -1.0;
  return (kI / omega) *
         (1.0 - parity * std::exp(kI * (omega * total)) - 2.0 * std::exp(kI * nx) / std::cos(x) * bracket);
}

StrongChi chi_strong_closed(double hyperfine, int pulses, double tau, int sign, bool& cond_ok,
                            bool& uncond_ok) {
  const double h = 0.5 * hyperfine;
  const double s = sign;
  const double x = hyperfine * tau;
  cond_ok = std::abs(std::cos(0.5 * x)) >= detail::kGuardBand;
  uncond_ok = std::abs(std::sin(0.5 * x)) >= detail::kGuardBand;
  const bool even = pulses % 2 == 0;
  const double parity = even ? 1.0 : -1.0;
  const cplx full = std::exp(kI * (s * x * pulses));
  const cplx half = std::exp(kI * (s * h * pulses * tau));
  const cplx edge = std::exp(kI * (s * h * tau));
  StrongChi out{};
  if (cond_ok) {
    const cplx bracket = even ? kI * (s * std::sin(h * pulses * tau)) : cplx(-std::cos(h * pulses * tau));
    out.conditional = (1.0 - parity * full) * (kI / (2.0 * hyperfine) - s * tau / 2.0) +
                      half * (kI / hyperfine - s * tau / std::cos(h * tau) * edge) * bracket;
  }
  if (uncond_ok) {
    out.unconditional = (1.0 - full) * (kI * (s / (2.0 * hyperfine)) + tau / 2.0) +
                        half * (1.0 / hyperfine + tau / std::sin(h * tau) * edge) * std::sin(h * pulses * tau);
  }
  return out;
}

}  // namespace

Vec3 FilterResult::axis() const {
  return {axis_sign * std::cos(phi), -axis_sign * std::sin(phi), 0.0};
}

namespace detail {

cplx segment_exp_integral(double phase_mid, double rate, double length) {
  return length * std::exp(kI * phase_mid) * sinc(0.5 * rate * length);
}

double filter_weak_closed(double x, int pulses, double prefactor) {
  const double odd_shift = pulses % 2 == 0 ? 0.0 : kPi / 2.0;
  const double s2 = std::sin(0.5 * x);
  return prefactor / (pulses * x) * std::abs(s2 * s2 / std::cos(x) * std::sin(pulses * x + odd_shift));
}

}  // namespace detail

cplx chi_weak_oracle(double omega, const PulseSequence& seq) {
  cplx acc = 0.0;
  for (const Segment& s : seq.segments()) {
    const double mid = 0.5 * (s.start + s.end);
    acc += static_cast<double>(s.sign) * detail::segment_exp_integral(omega * mid, omega, s.length());
  }
  return acc;
}

StrongChi chi_strong_oracle(double hyperfine, const PulseSequence& seq, int sign) {
  require_sign(sign);
  const double h = 0.5 * hyperfine;
  cplx cond = 0.0;
  cplx uncond = 0.0;
  for (const Segment& s : seq.segments()) {
    const double mid = 0.5 * (s.start + s.end);
    const double sf_mid = s.s_f_start + s.sign * 0.5 * s.length();
    const cplx up = detail::segment_exp_integral(h * (sf_mid + sign * mid), h * (s.sign + sign), s.length());
    const cplx down = detail::segment_exp_integral(h * (-sf_mid + sign * mid), h * (sign - s.sign), s.length());
    cond += 0.5 * (up - down);
    uncond += 0.5 * (up + down);
  }
  return {cond, uncond};
}

cplx zeta_half_oracle(double hyperfine, const PulseSequence& seq) {
  cplx acc = 0.0;
  for (const Segment& s : seq.segments()) {
    const double sf_mid = s.s_f_start + s.sign * 0.5 * s.length();
    acc += detail::segment_exp_integral(hyperfine * sf_mid, hyperfine * s.sign, s.length());
  }
  return acc;
}

FilterResult weak_filter_from_chi(cplx chi, double total_time, double omega_tau) {
  const int k = omega_tau > 0.0 ? static_cast<int>(std::floor(omega_tau / kPi)) : 0;
  const int axis_sign = k % 2 == 0 ? 1 : -1;
  const double phi = std::abs(chi) > 0.0 ? wrap_pi(std::arg(chi) - k * kPi) : 0.0;
  return {chi, std::abs(chi) / total_time, phi, axis_sign};
}

FilterResult filter_weak(double omega, int pulses, double tau) {
  require_cpmg_args(pulses, tau, "filter_weak");
  if (!(omega >= 0.0)) throw InvalidInput("filter_weak: omega must be >= 0");
  const double x = omega * tau;
  const double total = 2.0 * pulses * tau;
  if (x < detail::kGuardBand || std::abs(std::cos(x)) < detail::kGuardBand) {
    return weak_filter_from_chi(chi_weak_oracle(omega, cpmg(pulses, tau)), total, x);
  }
  FilterResult r = weak_filter_from_chi(chi_weak_closed(omega, pulses, tau), total, x);
  r.magnitude = detail::filter_weak_closed(x, pulses);
  r.chi = std::polar(r.magnitude * total, std::arg(r.chi));
  return r;
}

double filter_weak_universal(double c, int k) {
  if (k < 0) throw InvalidInput("filter_weak_universal: k must be >= 0");
  if (c == 0.0) return 2.0 / (kPi * (2 * k + 1));
  return 4.0 / (kPi * kPi) * std::abs(std::sin(c * kPi / 2.0)) / (std::abs(c) * (2 * k + 1));
}

StrongFilterResult filters_strong(double hyperfine, int pulses, double tau, int sign) {
  require_cpmg_args(pulses, tau, "filters_strong");
  require_sign(sign);
  if (!(hyperfine > 0.0)) throw InvalidInput("filters_strong: A must be positive");
  const double x = hyperfine * tau;
  const double total = 2.0 * pulses * tau;
  bool cond_ok = false;
  bool uncond_ok = false;
  StrongChi chi = chi_strong_closed(hyperfine, pulses, tau, sign, cond_ok, uncond_ok);
  if (!cond_ok || !uncond_ok) {
    const StrongChi exact = chi_strong_oracle(hyperfine, cpmg(pulses, tau), sign);
    if (!cond_ok) chi.conditional = exact.conditional;
    if (!uncond_ok) chi.unconditional = exact.unconditional;
  }
  const double odd_shift = pulses % 2 == 0 ? 0.0 : kPi / 2.0;
  const double f_c = cond_ok ? std::abs(std::sin(pulses * x / 2.0 + odd_shift) * std::tan(x / 2.0)) / (2.0 * pulses)
                             : std::abs(chi.conditional) / total;
  const double f_u = uncond_ok
                         ? std::abs((2.0 / x + 1.0 / std::tan(x / 2.0)) * std::sin(pulses * x / 2.0)) / (2.0 * pulses)
                         : std::abs(chi.unconditional) / total;
  const double arg_c = std::arg(chi.conditional);
  const double phi_c = sign > 0 ? wrap_pi(arg_c + kPi) : wrap_pi(-arg_c);
  const double phi_u = wrap_pi(sign * std::arg(chi.unconditional));
  return {chi.conditional, chi.unconditional, f_c, f_u, phi_c, phi_u, sign};
}

double filter_strong_universal(double c) {
  if (c == 0.0) return 0.5;
  return std::sin(c * kPi / 2.0) / (c * kPi);
}

HalfFilterResult filters_strong_half(double hyperfine, int pulses, double tau) {
  require_cpmg_args(pulses, tau, "filters_strong_half");
  const double x = hyperfine * tau;
  if (!(x > 0.0)) throw InvalidInput("filters_strong_half: A tau must be positive");
  const double f_c = pulses % 2 == 0 ? 0.0 : (1.0 - std::cos(x)) / (pulses * x);
  return {f_c, std::sin(x) / x};
}

double second_order_filter_signed(double omega, const PulseSequence& seq) {
  // Same-segment triangles contribute Int_0^L (L - w) sin(omega w) dw; distinct
  // segment pairs factor into Im(X_i conj(X_j)) with X the segment exp integrals.
  double acc = 0.0;
  cplx earlier = 0.0;
  for (const Segment& s : seq.segments()) {
    const double len = s.length();
    const double x = omega * len;
    double triangle = 0.0;
    if (std::abs(x) < 0.1) {
      const double x2 = x * x;
      triangle = len * len * x * (1.0 / 6.0 - x2 / 120.0 + x2 * x2 / 5040.0 - x2 * x2 * x2 / 362880.0);
    } else {
      triangle = (x - std::sin(x)) / (omega * omega);
    }
    const double mid = 0.5 * (s.start + s.end);
    const cplx seg = static_cast<double>(s.sign) * detail::segment_exp_integral(omega * mid, omega, len);
    acc += triangle + (seg * earlier).imag();
    earlier += std::conj(seg);
  }
  const double t = seq.total_time();
  return acc / (t * t);
}

double second_order_filter(double omega, const PulseSequence& seq) {
  return std::abs(second_order_filter_signed(omega, seq));
}

double grating(double omega_t, int M, int m) {
  if (M < 1 || m < 1) throw InvalidInput("grating: M and m must be >= 1");
  const double y = omega_t / (2.0 * M);
  const bool m_even = m % 2 == 0;
  const double denom = m_even ? std::sin(y) : std::cos(y);
  if (std::abs(denom) < detail::kGuardBand) {
    // Removable point: evaluate the defining geometric sum directly.
    const double flip = m_even ? 1.0 : -1.0;
    cplx sum = 0.0;
    double sign = 1.0;
    for (int k = 0; k < M; ++k) {
      sum += sign * std::exp(kI * (k * omega_t / M));
      sign *= flip;
    }
    return std::norm(sum);
  }
  double num = 0.0;
  if (m_even || M % 2 == 0) {
    num = std::sin(omega_t / 2.0);
  } else {
    num = std::cos(omega_t / 2.0);
  }
  return num * num / (denom * denom);
}

GratingDecomposition grating_block_decompose(double omega, const SliceSpec& spec) {
  spec.validate();
  if (spec.slices % 2 != 0) {
    throw InvalidInput("grating_block_decompose: the slice count must be even");
  }
  const int n = spec.pulses_per_slice;
  const int M = spec.slices / 2;
  const int m = 2 * n;
  const cplx chi_plus = filter_weak(omega, n, spec.tau_plus).chi;
  const cplx chi_minus = filter_weak(omega, n, spec.tau_minus).chi;
  const double parity = n % 2 == 0 ? 1.0 : -1.0;
  const double block =
      std::abs(chi_plus + parity * std::exp(kI * (2.0 * n * omega * spec.tau_plus)) * chi_minus);
  const PulseSequence seq = sliced_alternating(spec);
  const double t = seq.total_time();
  const double g = grating(omega * t, M, m);
  const double full = std::abs(chi_weak_oracle(omega, seq)) / t;
  return {M, m, g, block, g * block * block / (t * t), full * full};
}

}  // namespace spinfilt
