#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "test_util.hpp"
#include "wml/engine.hpp"
#include "wml/lcu.hpp"
#include "wml/program_state.hpp"
#include "wml/tensor.hpp"

using namespace wml;

namespace {

Matrix ket_bra(int d, int i, int j) {
  Matrix m = Matrix::Zero(d, d);
  m(i, j) = 1.0;
  return m;
}

Vector basis(int dim, int i) {
  Vector v = Vector::Zero(dim);
  v(i) = 1.0;
  return v;
}

double max_abs(const Vector& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("complete_unitary maps anchor to target") {
  std::mt19937_64 rng(7);

  Vector zero2 = basis(2, 0);
  Vector plus = (basis(2, 0) + basis(2, 1)) / std::sqrt(2.0);
  Matrix u = complete_unitary(plus, zero2);
  CHECK(max_abs(Vector(u * zero2 - plus)) < 1e-12);

  CHECK(max_abs(Vector(complete_unitary(zero2, zero2) * zero2 - zero2)) <
        1e-14);

  // Global-phase target still lands exactly, with unit positive overlap.
  Vector phased = std::exp(Complex(0, 0.7)) * zero2;
  Matrix up = complete_unitary(phased, zero2);
  CHECK(max_abs(Vector(up * zero2 - phased)) < 1e-14);

  for (int trial = 0; trial < 10; ++trial) {
    Vector t = testutil::random_state(8, rng);
    Vector a = testutil::random_state(8, rng);
    Matrix v = complete_unitary(t, a);
    CHECK((v.adjoint() * v - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff() <
          1e-12);
    CHECK(max_abs(Vector(v * a - t)) < 1e-12);
    Complex overlap = t.dot(v * a);
    CHECK(std::abs(overlap - Complex(1, 0)) < 1e-12);
  }

  CHECK_THROWS_AS(complete_unitary(basis(2, 0), basis(3, 0)), shape_error);
  CHECK_THROWS_AS(complete_unitary(2.0 * basis(2, 0), basis(2, 0)),
                  argument_error);
}

TEST_CASE("linear preparation block identity and fidelity") {
  std::mt19937_64 rng(17);
  for (int d : {2, 3}) {
    for (int k = 1; k <= 3; ++k) {
      std::vector<LcuTerm> terms;
      Vector direct = Vector::Zero(d * d);
      Matrix op_sum = Matrix::Zero(d, d);
      double lambda = 0.0;
      std::uniform_real_distribution<double> unif(0.2, 2.0);
      for (int i = 0; i < k; ++i) {
        Matrix l = testutil::random_unit_operator(d, rng);
        const double c = unif(rng);
        terms.push_back({c, encode_operator(l)});
        direct += c * terms.back().psi.vec;
        op_sum += c * l;
        lambda += c;
      }
      LcuReport rep = lcu_prepare_linear(terms);

      // Block identity: prepared * sqrt(p) = (1/lambda) sum_k c_k psi_k.
      Vector block = std::sqrt(rep.success_prob) * rep.prepared.amps;
      CHECK(max_abs(Vector(block - direct / lambda)) < 1e-12);

      const double c_norm = direct.squaredNorm();
      CHECK(rep.success_prob ==
            doctest::Approx(c_norm / (lambda * lambda)).epsilon(1e-12));

      Complex fid = rep.prepared.amps.dot(Vector(direct / direct.norm()));
      CHECK(std::abs(fid) > 1.0 - 1e-10);

      // The prepared state decodes to the coefficient-weighted operator sum.
      Matrix decoded = decode_operator(
          ProgramState{d, rep.prepared.amps, std::nullopt});
      Matrix expected = op_sum / schatten_norm(op_sum, 2);
      CHECK((decoded - expected).cwiseAbs().maxCoeff() < 1e-10);

      CHECK(rep.queries == 2 + 4 * static_cast<long long>(rep.aa_rounds));
      CHECK(rep.tally.select_u == 1 + rep.aa_rounds);
      CHECK(rep.tally.select_u_dag == rep.aa_rounds);
      CHECK(rep.tally.u_a == 1 + rep.aa_rounds);
      CHECK(rep.tally.u_a_dag == rep.aa_rounds);

      // Amplification acts as an exact rotation by 2 theta per round.
      const double theta = std::asin(std::sqrt(rep.success_prob));
      const double predicted =
          std::pow(std::sin((2.0 * rep.aa_rounds + 1.0) * theta), 2);
      CHECK(rep.post_aa_success_prob ==
            doctest::Approx(predicted).epsilon(1e-12));
      CHECK(rep.post_aa_success_prob >= rep.success_prob - 1e-12);
      CHECK(rep.residual_infidelity ==
            doctest::Approx(1.0 - predicted).epsilon(1e-12));
    }
  }
}

TEST_CASE("identical-term and half-probability fixtures") {
  ProgramState psi = encode_operator(ket_bra(2, 0, 1));
  LcuReport same = lcu_prepare_linear({{1.0, psi}, {1.0, psi}});
  CHECK(same.success_prob == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(same.aa_rounds == 0);
  CHECK(same.queries == 2);
  CHECK(max_abs(Vector(same.prepared.amps - psi.vec)) < 1e-12);

  // c = ||L1 + L2||^2 = 2, lambda = 2: p = 1/2, one round, overshoot stays
  // at 1/2 because sin^2(3 pi / 4) = 1/2.
  LcuReport half = lcu_prepare_linear(
      {{1.0, encode_operator(ket_bra(2, 0, 1))},
       {1.0, encode_operator(ket_bra(2, 1, 0))}});
  CHECK(half.success_prob == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(half.aa_rounds == 1);
  CHECK(half.queries == 6);
  CHECK(half.post_aa_success_prob == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(half.residual_infidelity == doctest::Approx(0.5).epsilon(1e-12));

  // Scale invariance: doubling every coefficient changes nothing measurable.
  LcuReport doubled = lcu_prepare_linear(
      {{2.0, encode_operator(ket_bra(2, 0, 1))},
       {2.0, encode_operator(ket_bra(2, 1, 0))}});
  CHECK(doubled.success_prob ==
        doctest::Approx(half.success_prob).epsilon(1e-15));
  CHECK(doubled.aa_rounds == half.aa_rounds);
  CHECK(doubled.queries == half.queries);

  CHECK_THROWS_AS(lcu_prepare_linear({}), argument_error);
  CHECK_THROWS_AS(lcu_prepare_linear({{0.0, psi}}), argument_error);
  CHECK_THROWS_AS(lcu_prepare_linear({{-1.0, psi}}), argument_error);
  CHECK_THROWS_AS(
      lcu_prepare_linear(
          {{1.0, psi},
           {1.0, encode_operator(Matrix::Identity(3, 3))}}),
      shape_error);
}

TEST_CASE("polynomial preparation") {
  // A single length-one word reduces to the linear case with K = 1.
  Matrix op = ket_bra(2, 0, 1);
  PolySpec single = PolySpec::checked(2, {op}, {{"1", 1.0}});
  LcuReport rep1 = lcu_prepare_poly(single);
  CHECK(rep1.success_prob == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep1.aa_rounds == 0);
  CHECK(max_abs(Vector(rep1.prepared.amps - encode_operator(op).vec)) <
        1e-12);

  // Mixed word lengths: identity padding on the trailing Phi pair.
  PolySpec poly = PolySpec::checked(
      2, {ket_bra(2, 0, 1), ket_bra(2, 1, 0)}, {{"12", 1.0}, {"1", 1.0}});
  PolyState ps = poly_program_state(poly);
  LcuReport rep = lcu_prepare_poly(poly);
  CHECK(rep.success_prob == doctest::Approx(ps.c / 4.0).epsilon(1e-12));
  CHECK(max_abs(Vector(rep.prepared.amps - ps.vec)) < 1e-10);
  Complex fid = rep.prepared.amps.dot(ps.vec);
  CHECK(std::abs(fid) > 1.0 - 1e-10);
  CHECK(rep.prepared.dims == std::vector<int>{2, 2, 2, 2});
  CHECK(rep.queries == 2 + 4 * static_cast<long long>(rep.aa_rounds));

  Matrix unit3 = Matrix::Identity(3, 3) / std::sqrt(3.0);
  Matrix shift = Matrix::Zero(3, 3);
  shift(0, 1) = shift(1, 2) = shift(2, 0) = 1.0;
  shift /= std::sqrt(3.0);
  PolySpec big =
      PolySpec::checked(3, {unit3, shift}, {{"111", 1.0}, {"2", 1.0}});
  CHECK_THROWS_AS(lcu_prepare_poly(big), size_error);
}

TEST_CASE("state vector validation") {
  Vector good = basis(4, 0);
  StateVector sv = StateVector::checked({2, 2}, good);
  CHECK(sv.dims == std::vector<int>{2, 2});
  CHECK_THROWS_AS(StateVector::checked({2, 3}, good), shape_error);
  CHECK_THROWS_AS(StateVector::checked({2, 2}, Vector(2.0 * good)),
                  argument_error);
}
