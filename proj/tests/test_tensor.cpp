#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "test_util.hpp"
#include "wml/tensor.hpp"

using namespace wml;
using testutil::random_matrix;

namespace {

// Independent oracle for mat_exp: plain Taylor summation, no scaling tricks.
// Adequate for the small-norm inputs it is used on.
Matrix exp_by_series(const Matrix& a, int terms) {
  Matrix sum = Matrix::Identity(a.rows(), a.cols());
  Matrix term = Matrix::Identity(a.rows(), a.cols());
  for (int k = 1; k <= terms; ++k) {
    term = (term * a) / static_cast<double>(k);
    sum += term;
  }
  return sum;
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

const Complex kI{0.0, 1.0};

}  // namespace

TEST_CASE("kron basics") {
  Matrix i2 = Matrix::Identity(2, 2);
  CHECK(max_abs(kron(i2, i2) - Matrix::Identity(4, 4)) == 0.0);

  Matrix d(2, 2);
  d << 1, 0, 0, 2;
  Matrix expect = Matrix::Zero(4, 4);
  expect(0, 0) = 1;
  expect(1, 1) = 1;
  expect(2, 2) = 2;
  expect(3, 3) = 2;
  CHECK(max_abs(kron(d, i2) - expect) == 0.0);

  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  Vector v00 = Vector::Zero(4);
  v00(0) = 1.0;
  Vector v11 = kron(x, x) * v00;
  CHECK(v11(3) == Complex(1.0));
  CHECK(v11.norm() == doctest::Approx(1.0));
}

TEST_CASE("kron associativity on random inputs") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix a = random_matrix(2, 2, rng);
    Matrix b = random_matrix(3, 3, rng);
    Matrix c = random_matrix(2, 2, rng);
    CHECK(max_abs(kron(kron(a, b), c) - kron(a, kron(b, c))) <= 1e-12);
  }
}

TEST_CASE("kron size guard") {
  Matrix big = Matrix::Zero(1 << 10, 1 << 10);
  CHECK_THROWS_AS(kron(big, Matrix::Zero(2, 2)), size_error);
}

TEST_CASE("partial_trace basics") {
  // Maximally entangled marginal.
  Vector phi = gamma_vector(2) / std::sqrt(2.0);
  Matrix phi_op = phi * phi.adjoint();
  Matrix marginal = partial_trace(phi_op, {2, 2}, {0});
  CHECK(max_abs(marginal - 0.5 * Matrix::Identity(2, 2)) <= 1e-14);

  std::mt19937_64 rng(12);
  Matrix rho = testutil::random_density(2, rng);
  Matrix sigma = random_matrix(3, 3, rng);
  CHECK(max_abs(partial_trace(kron(rho, sigma), {2, 3}, {0}) -
                rho * sigma.trace()) <= 1e-12);
  CHECK(max_abs(partial_trace(kron(rho, sigma), {2, 3}, {1}) -
                sigma * rho.trace()) <= 1e-12);

  Matrix m = random_matrix(6, 6, rng);
  Matrix full = partial_trace(m, {2, 3}, {});
  CHECK(full.rows() == 1);
  CHECK(std::abs(full(0, 0) - m.trace()) <= 1e-12);
}

TEST_CASE("partial_trace preserves trace and linearity") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix a = random_matrix(12, 12, rng);
    Matrix b = random_matrix(12, 12, rng);
    Matrix ta = partial_trace(a, {2, 3, 2}, {1});
    CHECK(std::abs(ta.trace() - a.trace()) <= 1e-12);
    Matrix lin = partial_trace(a + 2.0 * b, {2, 3, 2}, {1});
    CHECK(max_abs(lin - ta - 2.0 * partial_trace(b, {2, 3, 2}, {1})) <= 1e-12);
  }
}

TEST_CASE("partial_trace shape errors") {
  Matrix m = Matrix::Zero(5, 5);
  CHECK_THROWS_AS(partial_trace(m, {2, 3}, {2}), shape_error);
  CHECK_THROWS_AS(partial_trace(Matrix::Zero(4, 4), {2, 3}, {0}), shape_error);
}

TEST_CASE("permute_subsystems") {
  std::mt19937_64 rng(14);
  Matrix rho = random_matrix(2, 2, rng);
  Matrix sigma = random_matrix(2, 2, rng);
  Matrix both = kron(rho, sigma);

  CHECK(max_abs(permute_subsystems(both, {2, 2}, {0, 1}) - both) == 0.0);
  CHECK(max_abs(permute_subsystems(both, {2, 2}, {1, 0}) - kron(sigma, rho)) ==
        0.0);

  // Round trip and composition on a tripartite system with unequal dims.
  Matrix m = random_matrix(12, 12, rng);
  std::vector<int> dims{2, 3, 2};
  std::vector<int> p1{1, 2, 0};  // subsystem i moves to slot p1[i]
  std::vector<int> p2{2, 0, 1};
  std::vector<int> dims_after_p1(3);
  for (int i = 0; i < 3; ++i) dims_after_p1[p1[i]] = dims[i];
  Matrix step = permute_subsystems(permute_subsystems(m, dims, p1),
                                   dims_after_p1, p2);
  std::vector<int> composed(3);
  for (int i = 0; i < 3; ++i) composed[i] = p2[p1[i]];
  CHECK(max_abs(step - permute_subsystems(m, dims, composed)) == 0.0);

  std::vector<int> inv(3);
  for (int i = 0; i < 3; ++i) inv[p1[i]] = i;
  CHECK(max_abs(permute_subsystems(permute_subsystems(m, dims, p1),
                                   dims_after_p1, inv) -
                m) == 0.0);

  CHECK_THROWS_AS(permute_subsystems(m, dims, {0, 0, 1}), argument_error);
}

TEST_CASE("gamma_vector") {
  Vector g2 = gamma_vector(2);
  CHECK(g2(0) == Complex(1.0));
  CHECK(g2(1) == Complex(0.0));
  CHECK(g2(2) == Complex(0.0));
  CHECK(g2(3) == Complex(1.0));

  Vector g3 = gamma_vector(3);
  for (int i = 0; i < 9; ++i)
    CHECK(g3(i) == Complex(i % 4 == 0 ? 1.0 : 0.0));

  CHECK(gamma_vector(5).norm() == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("swap_operator") {
  Matrix s = swap_operator(2);
  Vector v01 = Vector::Zero(4);
  v01(1) = 1.0;  // |01>
  Vector v10 = s * v01;
  CHECK(v10(2) == Complex(1.0));  // |10>

  Matrix s3 = swap_operator(3);
  CHECK(max_abs(s3 * s3 - Matrix::Identity(9, 9)) == 0.0);
  CHECK(std::abs(swap_operator(4).trace() - Complex(4.0)) == 0.0);

  std::mt19937_64 rng(15);
  for (int d : {2, 3}) {
    Matrix sd = swap_operator(d);
    Matrix a = random_matrix(d, d, rng);
    Matrix b = random_matrix(d, d, rng);
    CHECK(max_abs(sd * kron(a, b) * sd - kron(b, a)) <= 1e-12);
  }
}

TEST_CASE("cycswap_operator") {
  Matrix c = cycswap_operator(2, 3);
  Vector in = Vector::Zero(8);
  in(3) = 1.0;  // |011>
  Vector out = c * in;
  CHECK(out(5) == Complex(1.0));  // |101>

  CHECK(max_abs(cycswap_operator(2, 2) - swap_operator(2)) == 0.0);
  CHECK(max_abs(c * c * c - Matrix::Identity(8, 8)) == 0.0);

  for (int parties : {2, 3, 4}) {
    Matrix u = cycswap_operator(2, parties);
    CHECK(max_abs(u.adjoint() * u - Matrix::Identity(u.rows(), u.rows())) <=
          1e-12);
    // Order divides `parties`, and equals it on a generic basis vector chain.
    Matrix acc = u;
    for (int k = 1; k < parties; ++k) acc = u * acc;
    CHECK(max_abs(acc - Matrix::Identity(u.rows(), u.rows())) <= 1e-12);
  }
}

TEST_CASE("mat_exp basics and series oracle") {
  CHECK(max_abs(mat_exp(Matrix::Zero(3, 3)) - Matrix::Identity(3, 3)) == 0.0);

  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = -2.0;
  Matrix ed = mat_exp(d);
  CHECK(std::abs(ed(0, 0) - std::exp(1.0)) <= 1e-13);
  CHECK(std::abs(ed(1, 1) - std::exp(-2.0)) <= 1e-13);
  CHECK(std::abs(ed(0, 1)) == 0.0);

  // SWAP^2 = I collapses the series to cos/sin; frozen closed form at pi/3.
  const double theta = M_PI / 3.0;
  Matrix s = swap_operator(2);
  Matrix expected = std::cos(theta) * Matrix::Identity(4, 4) -
                    kI * std::sin(theta) * s;
  CHECK(max_abs(mat_exp(-kI * theta * s) - expected) <= 1e-13);
  CHECK(max_abs(exp_by_series(-kI * theta * s, 40) - expected) <= 1e-13);

  // Non-Hermitian random input against the independent series oracle.
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 8; ++trial) {
    Matrix a = 0.4 * random_matrix(4, 4, rng);
    CHECK(max_abs(mat_exp(a) - exp_by_series(a, 40)) <= 1e-12);
  }

  CHECK_THROWS_AS(mat_exp(Matrix::Zero(2, 3)), shape_error);
}

TEST_CASE("mat_exp group property on random contractions") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 6; ++trial) {
    Matrix a = random_matrix(3, 3, rng);
    a /= (2.0 * a.cwiseAbs().colwise().sum().maxCoeff());
    const double s = unif(rng), t = unif(rng);
    Matrix lhs = mat_exp(a * (s + t));
    Matrix rhs = mat_exp(a * s) * mat_exp(a * t);
    CHECK(max_abs(lhs - rhs) <= 1e-11);
  }
}

TEST_CASE("schatten_norm") {
  CHECK(schatten_norm(Matrix::Identity(4, 4), 2) == doctest::Approx(2.0));

  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = -4.0;
  CHECK(schatten_norm(d, 1) == doctest::Approx(7.0));

  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  CHECK(schatten_norm(x / std::sqrt(2.0), 2) == doctest::Approx(1.0));

  CHECK_THROWS_AS(schatten_norm(x, 3), argument_error);
}

TEST_CASE("hs_inner") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 2.0;
  CHECK(hs_inner(d, d).real() == doctest::Approx(5.0));
  CHECK(std::abs(hs_inner(d, d).imag()) == 0.0);

  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  CHECK(std::abs(hs_inner(Matrix::Identity(2, 2), x)) == 0.0);

  std::mt19937_64 rng(18);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix a = random_matrix(3, 3, rng);
    Matrix b = random_matrix(3, 3, rng);
    CHECK(std::abs(hs_inner(a, b)) <=
          schatten_norm(a, 2) * schatten_norm(b, 2) + 1e-12);
  }
  CHECK_THROWS_AS(hs_inner(d, Matrix::Zero(3, 3)), shape_error);
}
