#ifndef SPINFILT_SPIN_CORE_HPP_
#define SPINFILT_SPIN_CORE_HPP_

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

namespace spinfilt {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Raised for every rejected precondition in the library.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const;
  Vec3 normalized() const;
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
inline Vec3 operator*(const Vec3& a, double s) { return s * a; }

/// Rotation about a unit axis by `angle` radians, i.e. exp(-i (angle/2) n.sigma).
struct AxisAngle {
  Vec3 axis{0.0, 0.0, 1.0};
  double angle = 0.0;
};

/// Row-major complex 2x2 matrix.
class Mat2 {
 public:
  constexpr Mat2() = default;
  constexpr Mat2(cplx a00, cplx a01, cplx a10, cplx a11) : v_{a00, a01, a10, a11} {}

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static Mat2 zero() { return {}; }
  static Mat2 sigma_x() { return {0.0, 1.0, 1.0, 0.0}; }
  static Mat2 sigma_y() { return {0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0}; }
  static Mat2 sigma_z() { return {1.0, 0.0, 0.0, -1.0}; }
  // sigma_+ = |up><down| in the sigma_z basis
  static Mat2 sigma_plus() { return {0.0, 1.0, 0.0, 0.0}; }
  static Mat2 sigma_minus() { return {0.0, 0.0, 1.0, 0.0}; }
  // n.sigma
  static Mat2 pauli(const Vec3& n);

  cplx operator()(int r, int c) const { return v_[static_cast<std::size_t>(2 * r + c)]; }
  cplx& operator()(int r, int c) { return v_[static_cast<std::size_t>(2 * r + c)]; }

  Mat2 adjoint() const;
  cplx trace() const { return v_[0] + v_[3]; }
  cplx det() const { return v_[0] * v_[3] - v_[1] * v_[2]; }
  // largest entry modulus
  double max_abs() const;
  bool is_unitary(double tol = 1e-12) const;

  friend Mat2 operator*(const Mat2& a, const Mat2& b);
  friend Mat2 operator+(const Mat2& a, const Mat2& b);
  friend Mat2 operator-(const Mat2& a, const Mat2& b);
  friend Mat2 operator*(cplx s, const Mat2& a);

 private:
  std::array<cplx, 4> v_{};
};

/// exp(-i (theta/2) n.sigma) in closed form. Throws if |n| deviates from 1 by more than 1e-9.
Mat2 pauli_exp(const AxisAngle& a);

/// exp(-i g.sigma) for an arbitrary real vector g (closed form, regular at g = 0).
Mat2 exp_neg_i(const Vec3& g);

/// Generator g with U = exp(-i g.sigma) up to global phase, taking the branch with
/// rotation angle 2|g| in [0, pi]. At angle pi the sign of g is aligned with `hint`
/// when one is given.
Vec3 rotation_generator(const Mat2& u, const Vec3* hint = nullptr);

/// Rotation angle in [0, pi]: 2 arccos(|tr U| / 2) after removing the global phase.
double rotation_angle(const Mat2& u);

/// |tr(U^dagger V)| / 2. Rejects non-unitary arguments.
double unitary_fidelity(const Mat2& u, const Mat2& v);

// Two-spin state, target (x) control. Index = 2*target + control, where index 0 of
// either factor is spin up (sigma_z = +1) and control up is the s_z = +1 branch.
using State4 = std::array<cplx, 4>;

double norm_squared(const State4& psi);

/// |<psi|phi>|^2 for normalized states.
double state_fidelity(const State4& psi, const State4& phi);

/// |down>_target (x) (|down> + |up>)/sqrt(2).
State4 down_plus_state();

}  // namespace spinfilt

#endif  // SPINFILT_SPIN_CORE_HPP_
