#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "spinfilt/spin_core.hpp"

using namespace spinfilt;

namespace {

// Oracle: truncated power series of exp(-i (theta/2) n.sigma), 30 terms.
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

Vec3 random_axis(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return Vec3{g(rng), g(rng), g(rng)}.normalized();
}

bool close(const Mat2& a, const Mat2& b, double tol) { return (a - b).max_abs() <= tol; }

}  // namespace

TEST_CASE("pauli_exp at zero angle is the identity") {
  std::mt19937_64 rng(10);
  for (int i = 0; i < 5; ++i) CHECK(close(pauli_exp({random_axis(rng), 0.0}), Mat2::identity(), 0.0));
}

TEST_CASE("pauli_exp about z by pi is -i sigma_z") {
  const Mat2 u = pauli_exp({{0.0, 0.0, 1.0}, kPi});
  CHECK(close(u, Mat2(cplx(0.0, -1.0), 0.0, 0.0, cplx(0.0, 1.0)), 1e-15));
}

TEST_CASE("pauli_exp matches the power series") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> angle(-2.0 * kPi, 2.0 * kPi);
  for (int i = 0; i < 200; ++i) {
    const Vec3 n = random_axis(rng);
    const double theta = angle(rng);
    CHECK(close(pauli_exp({n, theta}), series_exp(n, theta), 1e-12));
  }
}

TEST_CASE("pauli_exp rejects a non-normalized axis") {
  CHECK_THROWS_AS(pauli_exp({{1.0, 1.0, 0.0}, 0.3}), InvalidInput);
  CHECK_NOTHROW(pauli_exp({{1.0 + 5e-10, 0.0, 0.0}, 0.3}));
}

TEST_CASE("pauli_exp composes along one axis and has unit determinant") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> angle(-10.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    const Vec3 n = random_axis(rng);
    const double a = angle(rng);
    const double b = angle(rng);
    const Mat2 ua = pauli_exp({n, a});
    CHECK(close(ua * pauli_exp({n, b}), pauli_exp({n, a + b}), 1e-11));
    CHECK(std::abs(ua.det() - 1.0) <= 1e-11);
    CHECK(ua.is_unitary());
  }
}

TEST_CASE("exp_neg_i agrees with pauli_exp and is regular at zero") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 50; ++i) {
    const Vec3 n = random_axis(rng);
    const double theta = 0.1 * i;
    CHECK(close(exp_neg_i((0.5 * theta) * n), pauli_exp({n, theta}), 1e-14));
  }
  CHECK(close(exp_neg_i({}), Mat2::identity(), 0.0));
  CHECK(close(exp_neg_i({1e-20, 0.0, 0.0}), Mat2::identity(), 1e-19));
}

TEST_CASE("rotation_generator inverts exp_neg_i up to global phase") {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> half(0.0, 0.5 * kPi - 1e-3);
  std::uniform_real_distribution<double> phase(-kPi, kPi);
  for (int i = 0; i < 100; ++i) {
    const Vec3 g = half(rng) * random_axis(rng);
    const Mat2 u = std::exp(cplx(0.0, phase(rng))) * exp_neg_i(g);
    const Vec3 back = rotation_generator(u);
    CHECK((back - g).norm() <= 1e-12);
    CHECK(rotation_angle(u) == doctest::Approx(2.0 * g.norm()).epsilon(1e-12));
  }
}

TEST_CASE("rotation_generator uses the hint at angle pi") {
  const Vec3 y{0.0, 1.0, 0.0};
  const Mat2 u = pauli_exp({y, kPi});
  const Vec3 minus_hint{0.0, -1.0, 0.0};
  CHECK(rotation_generator(u, &y).y == doctest::Approx(0.5 * kPi));
  CHECK(rotation_generator(u, &minus_hint).y == doctest::Approx(-0.5 * kPi));
}

TEST_CASE("unitary_fidelity examples") {
  std::mt19937_64 rng(15);
  const Mat2 u = pauli_exp({random_axis(rng), 1.1});
  CHECK(unitary_fidelity(u, u) == doctest::Approx(1.0).epsilon(1e-15));
  for (double alpha : {0.3, -2.0, kPi}) {
    CHECK(unitary_fidelity(u, std::exp(cplx(0.0, alpha)) * u) == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK(unitary_fidelity(Mat2::identity(), Mat2::sigma_x()) == 0.0);
  CHECK_THROWS_AS(unitary_fidelity(Mat2::identity(), 1.1 * Mat2::identity()), InvalidInput);
}

TEST_CASE("unitary_fidelity is exactly symmetric") {
  std::mt19937_64 rng(16);
  for (int i = 0; i < 200; ++i) {
    const Mat2 u = pauli_exp({random_axis(rng), 0.37 * i});
    const Mat2 v = pauli_exp({random_axis(rng), 0.11 * i + 0.2});
    CHECK(unitary_fidelity(u, v) == unitary_fidelity(v, u));
  }
}

TEST_CASE("state_fidelity examples") {
  const State4 psi = down_plus_state();
  CHECK(state_fidelity(psi, psi) == doctest::Approx(1.0).epsilon(1e-15));
  const State4 e0{1.0, 0.0, 0.0, 0.0};
  const State4 e2{0.0, 0.0, 1.0, 0.0};
  CHECK(state_fidelity(e0, e2) == 0.0);
  State4 rotated = psi;
  for (auto& a : rotated) a *= std::exp(cplx(0.0, 0.8));
  CHECK(state_fidelity(psi, rotated) == doctest::Approx(1.0).epsilon(1e-15));
  const State4 bad{1.0, 1.0, 0.0, 0.0};
  CHECK_THROWS_AS(state_fidelity(bad, psi), InvalidInput);
}

TEST_CASE("down-plus state layout") {
  const State4 psi = down_plus_state();
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(psi[0]) == 0.0);
  CHECK(std::abs(psi[1]) == 0.0);
  CHECK(psi[2].real() == doctest::Approx(r));
  CHECK(psi[3].real() == doctest::Approx(r));
  CHECK(norm_squared(psi) == doctest::Approx(1.0));
}

TEST_CASE("Pauli algebra") {
  const Mat2 x = Mat2::sigma_x();
  const Mat2 y = Mat2::sigma_y();
  const Mat2 z = Mat2::sigma_z();
  CHECK(close(x * y, cplx(0.0, 1.0) * z, 0.0));
  CHECK(close(x * x, Mat2::identity(), 0.0));
  CHECK(close(Mat2::sigma_plus() + Mat2::sigma_minus(), x, 0.0));
  CHECK(close(y.adjoint(), y, 0.0));
  CHECK(z.trace() == cplx(0.0));
}
