#include "spinfilt/spin_core.hpp"

#include <algorithm>
#include <cmath>

namespace spinfilt {

double Vec3::norm() const { return std::sqrt(dot(*this)); }

Vec3 Vec3::normalized() const {
  const double n = norm();
  if (n == 0.0) throw InvalidInput("cannot normalize a zero vector");
  return (1.0 / n) * *this;
}

Mat2 Mat2::pauli(const Vec3& n) {
  return {n.z, cplx(n.x, -n.y), cplx(n.x, n.y), -n.z};
}

Mat2 Mat2::adjoint() const {
  return {std::conj(v_[0]), std::conj(v_[2]), std::conj(v_[1]), std::conj(v_[3])};
}

double Mat2::max_abs() const {
  double m = 0.0;
  for (const auto& e : v_) m = std::max(m, std::abs(e));
  return m;
}

bool Mat2::is_unitary(double tol) const {
  return ((adjoint() * *this) - identity()).max_abs() <= tol;
}

Mat2 operator*(const Mat2& a, const Mat2& b) {
  return {a.v_[0] * b.v_[0] + a.v_[1] * b.v_[2], a.v_[0] * b.v_[1] + a.v_[1] * b.v_[3],
          a.v_[2] * b.v_[0] + a.v_[3] * b.v_[2], a.v_[2] * b.v_[1] + a.v_[3] * b.v_[3]};
}

Mat2 operator+(const Mat2& a, const Mat2& b) {
  return {a.v_[0] + b.v_[0], a.v_[1] + b.v_[1], a.v_[2] + b.v_[2], a.v_[3] + b.v_[3]};
}

Mat2 operator-(const Mat2& a, const Mat2& b) {
  return {a.v_[0] - b.v_[0], a.v_[1] - b.v_[1], a.v_[2] - b.v_[2], a.v_[3] - b.v_[3]};
}

Mat2 operator*(cplx s, const Mat2& a) {
  return {s * a.v_[0], s * a.v_[1], s * a.v_[2], s * a.v_[3]};
}

Mat2 exp_neg_i(const Vec3& g) {
  const double half = g.norm();
  if (half == 0.0) return Mat2::identity();
  const double c = std::cos(half);
  const double s = std::sin(half) / half;
  // cos|g| I - i sin|g| (g/|g|).sigma
  return {cplx(c, -s * g.z), cplx(-s * g.y, -s * g.x), cplx(s * g.y, -s * g.x),
          cplx(c, s * g.z)};
}

Mat2 pauli_exp(const AxisAngle& a) {
  if (std::abs(a.axis.norm() - 1.0) > 1e-9) {
    throw InvalidInput("pauli_exp: rotation axis is not normalized");
  }
  return exp_neg_i((0.5 * a.angle) * a.axis);
}

namespace {

// U / sqrt(det U) = a0 I - i b.sigma with (a0, b) real up to rounding.
void su2_parts(const Mat2& u, double& a0, Vec3& b) {
  const cplx phase = std::sqrt(u.det());
  if (std::abs(phase) < 1e-300) throw InvalidInput("rotation extraction: singular matrix");
  const Mat2 w = (1.0 / phase) * u;
  a0 = 0.5 * (w(0, 0) + w(1, 1)).real();
  // -i b.sigma = [[-i bz, -i bx - by], [-i bx + by, i bz]]
  b.z = 0.5 * (w(1, 1) - w(0, 0)).imag();
  b.x = -0.5 * (w(0, 1) + w(1, 0)).imag();
  b.y = 0.5 * (w(1, 0) - w(0, 1)).real();
}

}  // namespace

Vec3 rotation_generator(const Mat2& u, const Vec3* hint) {
  double a0 = 0.0;
  Vec3 b;
  su2_parts(u, a0, b);
  if (a0 < 0.0) {
    a0 = -a0;
    b = -b;
  }
  const double bn = b.norm();
  if (bn == 0.0) return {};
  const double half_angle = std::atan2(bn, a0);  // in [0, pi/2]
  Vec3 g = (half_angle / bn) * b;
  if (hint != nullptr && a0 < 1e-6 && g.dot(*hint) < 0.0) g = -g;
  return g;
}

double rotation_angle(const Mat2& u) {
  double a0 = 0.0;
  Vec3 b;
  su2_parts(u, a0, b);
  return 2.0 * std::atan2(b.norm(), std::abs(a0));
}

double unitary_fidelity(const Mat2& u, const Mat2& v) {
  if (!u.is_unitary(1e-9) || !v.is_unitary(1e-9)) {
    throw InvalidInput("unitary_fidelity: argument is not unitary");
  }
  return std::min(1.0, 0.5 * std::abs((u.adjoint() * v).trace()));
}

double norm_squared(const State4& psi) {
  double n = 0.0;
  for (const auto& e : psi) n += std::norm(e);
  return n;
}

double state_fidelity(const State4& psi, const State4& phi) {
  if (std::abs(norm_squared(psi) - 1.0) > 1e-10 || std::abs(norm_squared(phi) - 1.0) > 1e-10) {
    throw InvalidInput("state_fidelity: state is not normalized");
  }
  cplx overlap = 0.0;
  for (std::size_t i = 0; i < 4; ++i) overlap += std::conj(psi[i]) * phi[i];
  return std::min(1.0, std::norm(overlap));
}

State4 down_plus_state() {
  const double r = 1.0 / std::sqrt(2.0);
  return {0.0, 0.0, r, r};
}

}  // namespace spinfilt
