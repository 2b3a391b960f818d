#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "test_util.hpp"
#include "wml/channels.hpp"
#include "wml/tensor.hpp"

using namespace wml;
using testutil::random_density;
using testutil::random_matrix;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

Matrix pauli_x() {
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}

Matrix pauli_z() {
  Matrix z(2, 2);
  z << 1, 0, 0, -1;
  return z;
}

Matrix ket_bra(int d, int i, int j) {
  Matrix m = Matrix::Zero(d, d);
  m(i, j) = 1.0;
  return m;
}

// Amplitude damping: single jump |0><1|.
LindbladSpec damping_spec() {
  return LindbladSpec::checked(2, {}, {ket_bra(2, 0, 1)});
}

LindbladSpec random_spec(int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::vector<HamiltonianTerm> hams;
  hams.push_back({coeff(rng), random_density(d, rng)});
  std::vector<Matrix> jumps;
  jumps.push_back(random_matrix(d, d, rng));
  jumps.push_back(0.5 * random_matrix(d, d, rng));
  return LindbladSpec::checked(d, std::move(hams), std::move(jumps));
}

}  // namespace

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(LindbladSpec::checked(2, {{1.0, pauli_x()}}, {}), spec_error);
  CHECK_THROWS_AS(LindbladSpec::checked(2, {}, {Matrix::Zero(2, 2)}),
                  spec_error);
  CHECK_THROWS_AS(LindbladSpec::checked(2, {}, {Matrix::Zero(3, 3)}),
                  spec_error);
  // c = 0 terms are dropped, not fatal.
  LindbladSpec s = LindbladSpec::checked(
      2, {{0.0, 0.5 * Matrix::Identity(2, 2)}}, {ket_bra(2, 0, 1)});
  CHECK(s.hamiltonian_terms.empty());
  CHECK(s.jump_ops.size() == 1);
}

TEST_CASE("vectorize and devectorize") {
  Vector v = vectorize(ket_bra(2, 0, 1));
  for (int i = 0; i < 4; ++i) CHECK(v(i) == Complex(i == 2 ? 1.0 : 0.0));

  std::mt19937_64 rng(21);
  Matrix m = random_matrix(3, 3, rng);
  CHECK(max_abs(devectorize(vectorize(m)) - m) == 0.0);
  CHECK_THROWS_AS(devectorize(Vector::Zero(5)), shape_error);

  // vec(AXB) = (B^T kron A) vec(X), the convention everything else rests on.
  for (int trial = 0; trial < 10; ++trial) {
    Matrix a = random_matrix(2, 2, rng);
    Matrix x = random_matrix(2, 2, rng);
    Matrix b = random_matrix(2, 2, rng);
    Vector lhs = vectorize(a * x * b);
    Vector rhs = kron(b.transpose(), a) * vectorize(x);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("liouvillian matches the direct formula") {
  // Empty generator.
  LindbladSpec empty = LindbladSpec::checked(2, {}, {ket_bra(2, 0, 1)});
  empty.jump_ops.clear();
  CHECK(max_abs(liouvillian(empty).mat) == 0.0);

  // Pure commutator evolution: H = sigma_1 = (I + Z)/2 = |0><0|.
  Matrix sigma1 = 0.5 * (Matrix::Identity(2, 2) + pauli_z());
  LindbladSpec ham = LindbladSpec::checked(2, {{1.0, sigma1}}, {});
  Matrix plus = Matrix::Constant(2, 2, 0.5);
  Matrix expected = Complex(0, -1) * (sigma1 * plus - plus * sigma1);
  CHECK(max_abs(apply_superop_raw(liouvillian(ham), plus) - expected) <= 1e-14);

  // Amplitude damping on |1><1|.
  Matrix out = apply_superop_raw(liouvillian(damping_spec()), ket_bra(2, 1, 1));
  CHECK(max_abs(out - (ket_bra(2, 0, 0) - ket_bra(2, 1, 1))) <= 1e-14);

  // Random specs against lindblad_apply at d in {2, 3}.
  std::mt19937_64 rng(22);
  for (int d : {2, 3}) {
    for (int trial = 0; trial < 50; ++trial) {
      LindbladSpec spec = random_spec(d, rng);
      SuperOperator gen = liouvillian(spec);
      Matrix rho = random_density(d, rng);
      CHECK(schatten_norm(apply_superop_raw(gen, rho) -
                              lindblad_apply(spec, rho),
                          2) <= 1e-11);
    }
  }
}

TEST_CASE("exact_channel") {
  LindbladSpec spec = damping_spec();
  CHECK(max_abs(exact_channel(spec, 0.0).mat - Matrix::Identity(4, 4)) <=
        1e-15);

  // Closed form: excited population decays as e^{-t}.
  SuperOperator half = exact_channel(spec, std::log(2.0));
  Matrix rho = apply_superop_raw(half, ket_bra(2, 1, 1));
  CHECK(max_abs(rho - 0.5 * Matrix::Identity(2, 2)) <= 1e-12);

  // Semigroup property.
  std::mt19937_64 rng(23);
  LindbladSpec rand_spec = random_spec(2, rng);
  Matrix lhs = exact_channel(rand_spec, 0.7).mat * exact_channel(rand_spec, 0.4).mat;
  Matrix rhs = exact_channel(rand_spec, 1.1).mat;
  CHECK(max_abs(lhs - rhs) <= 1e-10);

  // CPTP for random specs.
  for (int d : {2, 3}) {
    for (int trial = 0; trial < 5; ++trial) {
      CptpReport rep = is_cptp(exact_channel(random_spec(d, rng), 0.8), 1e-9);
      CHECK(rep.pass);
    }
  }
}

TEST_CASE("apply_superop validates its output") {
  LindbladSpec spec = damping_spec();
  std::mt19937_64 seed_rng(24);
  DensityMatrix rho = DensityMatrix::checked(random_density(2, seed_rng));

  SuperOperator id{2, Matrix::Identity(4, 4)};
  CHECK(max_abs(apply_superop(id, rho).mat - rho.mat) == 0.0);

  // Long-time amplitude damping fixes |0><0|.
  DensityMatrix fixed = apply_superop(exact_channel(spec, 50.0), rho);
  CHECK(max_abs(fixed.mat - ket_bra(2, 0, 0)) <= 1e-10);

  // Linearity on mixtures.
  std::mt19937_64 rng(25);
  SuperOperator chan = exact_channel(spec, 0.3);
  Matrix r1 = random_density(2, rng), r2 = random_density(2, rng);
  const double p = 0.3;
  Matrix mix = apply_superop_raw(chan, p * r1 + (1 - p) * r2);
  CHECK(max_abs(mix - p * apply_superop_raw(chan, r1) -
                (1 - p) * apply_superop_raw(chan, r2)) <= 1e-13);

  // Trace-killing map trips the integrity check.
  SuperOperator bad{2, 0.5 * Matrix::Identity(4, 4)};
  CHECK_THROWS_AS(apply_superop(bad, rho), numerical_error);
}

TEST_CASE("apply_lindblad_action agrees with the dense path") {
  std::mt19937_64 rng(26);
  Matrix rho0 = random_density(3, rng);
  CHECK(max_abs(apply_lindblad_action(rho0, random_matrix(3, 3, rng), 0.0) -
                rho0) == 0.0);

  for (int trial = 0; trial < 5; ++trial) {
    const int dim = 8;
    Matrix m = random_matrix(dim, dim, rng);
    Matrix rho = random_density(dim, rng);
    const double dt = 0.1;
    // Dense oracle: exponential of the full superoperator.
    LindbladSpec jump_only = LindbladSpec::checked(dim, {}, {m});
    Matrix dense = apply_superop_raw(exact_channel(jump_only, dt), rho);
    Matrix action = apply_lindblad_action(rho, m, dt);
    CHECK(schatten_norm(dense - action, 2) <= 1e-9);
    CHECK(std::abs(action.trace().real() - 1.0) <= 1e-10);
    CHECK(std::abs(action.trace().imag()) <= 1e-12);
  }
}

TEST_CASE("apply_lindblad_action step-halving convergence") {
  std::mt19937_64 rng(27);
  Matrix m = random_matrix(4, 4, rng);
  Matrix rho = random_density(4, rng);
  const double dt = 0.05;
  const int order = 2;
  Matrix f1 = apply_lindblad_action(rho, m, dt, 4, order);
  Matrix f2 = apply_lindblad_action(rho, m, dt, 8, order);
  Matrix f3 = apply_lindblad_action(rho, m, dt, 16, order);
  const double e1 = schatten_norm(f2 - f1, 2);
  const double e2 = schatten_norm(f3 - f2, 2);
  CHECK(e2 <= e1 / std::pow(2.0, order) * 1.5);
}

TEST_CASE("apply_lindblad_action step-size guard") {
  std::mt19937_64 rng(28);
  Matrix m = 6.0 * random_matrix(6, 6, rng);
  Matrix rho = random_density(6, rng);
  CHECK_THROWS_AS(apply_lindblad_action(rho, m, 5.0, 1, 8), step_size_error);
}

TEST_CASE("choi_of basics") {
  // Identity channel: Choi = Phi.
  ChoiState id = choi_of([](const Matrix& x) { return x; }, 2);
  Vector gamma = gamma_vector(2);
  Matrix phi = gamma * gamma.adjoint() / 2.0;
  CHECK(max_abs(id.mat - phi) == 0.0);

  // Completely depolarizing channel.
  ChoiState depol = choi_of(
      [](const Matrix& x) -> Matrix {
        return Matrix::Identity(2, 2) * (x.trace() / 2.0);
      },
      2);
  CHECK(max_abs(depol.mat - Matrix::Identity(4, 4) / 4.0) == 0.0);

  // Replace-with-|0><0|.
  ChoiState replace = choi_of(
      [](const Matrix& x) -> Matrix { return ket_bra(2, 0, 0) * x.trace(); },
      2);
  Matrix expect = kron(0.5 * Matrix::Identity(2, 2), ket_bra(2, 0, 0));
  CHECK(max_abs(replace.mat - expect) == 0.0);
}

TEST_CASE("choi_trace_distance") {
  ChoiState id = choi_of([](const Matrix& x) { return x; }, 2);
  ChoiState depol = choi_of(
      [](const Matrix& x) -> Matrix {
        return Matrix::Identity(2, 2) * (x.trace() / 2.0);
      },
      2);
  CHECK(choi_trace_distance(id, id) == 0.0);
  // Eigenvalues of Phi - I/4 are {3/4, -1/4, -1/4, -1/4}: distance 3/4.
  CHECK(choi_trace_distance(id, depol) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(choi_trace_distance(depol, id) ==
        doctest::Approx(choi_trace_distance(id, depol)).epsilon(1e-14));
}

TEST_CASE("is_cptp diagnostics") {
  std::mt19937_64 rng(29);
  LindbladSpec spec = random_spec(2, rng);
  CHECK(is_cptp(exact_channel(spec, 1.0), 1e-9).pass);

  SuperOperator scaled{2, 1.1 * Matrix::Identity(4, 4)};
  CptpReport rep = is_cptp(scaled, 1e-9);
  CHECK_FALSE(rep.tp_pass);

  // Transpose map: CP failure with min Choi eigenvalue -1/2 (SWAP / 2).
  SuperOperator transpose{2, Matrix::Zero(4, 4)};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Matrix unit = ket_bra(2, i, j);
      transpose.mat.col(j * 2 + i) = vectorize(Matrix(unit.transpose()));
    }
  CptpReport trep = is_cptp(transpose, 1e-9);
  CHECK_FALSE(trep.cp_pass);
  CHECK(trep.min_choi_eig == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(trep.tp_pass);  // transpose preserves trace
}

TEST_CASE("choi_of of a superoperator matches the functional form") {
  std::mt19937_64 rng(30);
  SuperOperator chan = exact_channel(random_spec(2, rng), 0.6);
  ChoiState via_fn = choi_of(
      [&](const Matrix& x) { return apply_superop_raw(chan, x); }, 2);
  ChoiState via_mat = choi_of(chan);
  CHECK(max_abs(via_fn.mat - via_mat.mat) <= 1e-14);
  CHECK(via_mat.d_in == 2);
  CHECK(via_mat.d_out == 2);
  CHECK(std::abs(via_mat.mat.trace().real() - 1.0) <= 1e-12);
}
