#include <doctest.h>

#include <Eigen/Dense>

#include "hpmc/frame.hpp"

using namespace hpmc;

namespace {

// Independent evaluation of the Ricci quadratic form from the Levi-Civita
// table of the orthonormal frame (X_1..X_n, Y_1..Y_n, eps*T):
//   ric(U) = sum_j g(D_{Z_j} D_U U - D_U D_{Z_j} U + D_{[U,Z_j]} U, Z_j)
// for a field with constant frame coefficients. All covariant derivatives
// and brackets reduce to the constant structure table, so the sum is exact
// arithmetic independent of the closed-form implementation.
struct FrameAlgebra {
  int n;
  double eps;
  int dim() const { return 2 * n + 1; }

  // cov(e_i, e_j) as a coefficient vector
  Eigen::VectorXd gamma(int i, int j) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(dim());
    const int t = 2 * n;
    auto isX = [&](int k) { return k < n; };
    auto isY = [&](int k) { return k >= n && k < 2 * n; };
    if (isX(i) && isY(j) && j - n == i) out[t] -= 1.0 / eps;
    if (isY(i) && isX(j) && i - n == j) out[t] += 1.0 / eps;
    if (isX(i) && j == t) out[n + i] += 1.0 / eps;
    if (isY(i) && j == t) out[i - n] -= 1.0 / eps;
    if (i == t && isX(j)) out[n + j] += 1.0 / eps;
    if (i == t && isY(j)) out[j - n] -= 1.0 / eps;
    return out;
  }

  Eigen::VectorXd lie(int i, int j) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(dim());
    const int t = 2 * n;
    if (i < n && j >= n && j < 2 * n && j - n == i) out[t] -= 2.0 / eps;
    if (j < n && i >= n && i < 2 * n && i - n == j) out[t] += 2.0 / eps;
    return out;
  }

  Eigen::VectorXd cov(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(dim());
    for (int i = 0; i < dim(); ++i)
      for (int j = 0; j < dim(); ++j)
        if (a[i] != 0.0 && b[j] != 0.0) out += a[i] * b[j] * gamma(i, j);
    return out;
  }

  double ricci(const Eigen::VectorXd& u) const {
    double sum = 0.0;
    const Eigen::VectorXd cuu = cov(u, u);
    for (int j = 0; j < dim(); ++j) {
      Eigen::VectorXd ej = Eigen::VectorXd::Zero(dim());
      ej[j] = 1.0;
      Eigen::VectorXd bracket = Eigen::VectorXd::Zero(dim());
      for (int k = 0; k < dim(); ++k)
        if (u[k] != 0.0) bracket += u[k] * lie(k, j);
      const Eigen::VectorXd term =
          cov(ej, cuu) - cov(u, cov(ej, u)) + cov(bracket, u);
      sum += term[j];
    }
    return sum;
  }
};

}  // namespace

TEST_CASE("rotational field X") {
  Eigen::Vector2d z;
  z << 0.0, 0.0;
  CHECK(vector_field_x(z).isZero(0.0));
  z << 1.0, 0.0;
  CHECK(vector_field_x(z)(0) == 0.0);
  CHECK(vector_field_x(z)(1) == 1.0);
  z << 2.0, 3.0;
  CHECK(vector_field_x(z)(0) == -3.0);
  CHECK(vector_field_x(z)(1) == 2.0);
  // orthogonal to the radial direction
  Eigen::Vector4d z4;
  z4 << 0.3, -1.2, 0.7, 2.5;
  CHECK(vector_field_x(z4).dot(z4) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("frame matrix") {
  Eigen::Vector2d z;
  z << 0.0, 0.0;
  Eigen::MatrixXd c = frame_matrix(z, 1.0);
  CHECK(c.isIdentity(1e-15));
  z << 1.0, 2.0;
  c = frame_matrix(z, 1.0);
  CHECK(c(2, 0) == 2.0);
  CHECK(c(2, 1) == -1.0);
  CHECK(c(2, 2) == 1.0);
  CHECK(c(0, 2) == 0.0);

  for (double eps : {1.0, 0.5, -0.25}) {
    CHECK(frame_matrix(z, eps).determinant() ==
          doctest::Approx(eps).epsilon(1e-14));
    Eigen::Vector4d z4;
    z4 << 0.1, -0.7, 1.3, 0.4;
    CHECK(frame_matrix(z4, eps).determinant() ==
          doctest::Approx(eps).epsilon(1e-14));
  }
  CHECK_THROWS_AS(frame_matrix(z, 0.0), std::invalid_argument);
}

TEST_CASE("J operator") {
  Eigen::Vector3d u;
  u << 1.0, 2.0, 3.0;
  const Eigen::VectorXd j = j_operator(u);
  CHECK(j(0) == -2.0);
  CHECK(j(1) == 1.0);
  CHECK(j(2) == 0.0);
}

TEST_CASE("ricci form pinned against the curvature sum") {
  // the inner product in the closed form is the full frame norm; the
  // direct sum over the Levi-Civita table decides between the readings
  Eigen::Vector3d vert;
  vert << 0.0, 0.0, 1.0;
  CHECK(ricci_form(vert, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
  Eigen::Vector3d horiz;
  horiz << 1.0, 0.0, 0.0;
  CHECK(ricci_form(horiz, 1.0) == doctest::Approx(-2.0).epsilon(1e-15));

  for (int n : {1, 2}) {
    for (double eps : {1.0, 0.5, -2.0}) {
      FrameAlgebra alg{n, eps};
      Eigen::VectorXd u(2 * n + 1);
      for (int k = 0; k < u.size(); ++k) u[k] = 0.3 * k - 0.7;
      CHECK(ricci_form(u, eps) ==
            doctest::Approx(alg.ricci(u)).epsilon(1e-12));
      // quadratic scaling
      CHECK(ricci_form((2.5 * u).eval(), eps) ==
            doctest::Approx(6.25 * ricci_form(u, eps)).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(ricci_form(vert, 0.0), std::invalid_argument);
}
