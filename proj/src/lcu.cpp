#include "wml/lcu.hpp"

#include <cmath>

#include "wml/tensor.hpp"

namespace wml {
namespace {

Vector basis_zero(Eigen::Index dim) {
  Vector v = Vector::Zero(dim);
  v(0) = 1.0;
  return v;
}

// Common core: ancilla amplitudes sqrt(c_k / lambda), block unitaries u[k]
// on the system register, anchor the shared system start state. Runs the
// preparation, postselects, then simulates the amplification rounds.
LcuReport run_lcu(const std::vector<double>& coeffs,
                  const std::vector<Matrix>& u, const Vector& anchor,
                  std::vector<int> prepared_dims,
                  const std::vector<int>& block_perm) {
  const int k = static_cast<int>(coeffs.size());
  const Eigen::Index sys = anchor.size();
  double lambda = 0.0;
  for (double c : coeffs) {
    if (!(c > 0.0))
      throw argument_error("lcu_prepare: coefficients must be positive");
    lambda += c;
  }

  Vector a_state(k);
  for (int i = 0; i < k; ++i) a_state(i) = std::sqrt(coeffs[i] / lambda);
  Matrix u_a = complete_unitary(a_state, basis_zero(k));

  // (U_A (x) I)|0>|anchor>, then select-U blockwise, then (U_A^dag (x) I).
  // v is ancilla-major: entry (a, s) sits at a * sys + s.
  Matrix v = Matrix::Zero(k, sys);
  for (int a = 0; a < k; ++a) v.row(a) = u_a(a, 0) * anchor.transpose();
  for (int a = 0; a < k; ++a) v.row(a) = (u[a] * v.row(a).transpose()).transpose();
  v = u_a.adjoint() * v;

  QueryTally tally;
  tally.u_a += 1;
  tally.select_u += 1;

  Vector block = v.row(0).transpose();
  const double norm = block.norm();
  if (norm <= 1e-12)
    throw numerical_error("lcu_prepare: postselection block vanishes");
  const double p = std::min(norm * norm, 1.0);

  // The nudge keeps boundary cases (p = 1/2 lands exactly on round(0.5))
  // deterministic against one-ulp noise in asin.
  const double theta = std::asin(std::sqrt(p));
  const int rounds = static_cast<int>(
      std::max(0.0, std::round(M_PI / (4.0 * theta) - 0.5 + 1e-9)));
  tally.select_u += rounds;
  tally.select_u_dag += rounds;
  tally.u_a += rounds;
  tally.u_a_dag += rounds;

  // Exact reflections: flip the sign of the good (ancilla |0>) block, then
  // reflect about the initial state. Each pair rotates by 2 theta.
  Matrix vt = v.transpose();  // column-major (s, a): flatten as s + a * sys
  Vector full = Eigen::Map<const Vector>(vt.data(), k * sys);
  Vector cur = full;
  for (int r = 0; r < rounds; ++r) {
    cur.head(sys) = -cur.head(sys);
    cur = 2.0 * full * full.dot(cur) - cur;
  }
  const double post_p = std::min(cur.head(sys).squaredNorm(), 1.0);

  Vector prepared = block / norm;
  if (!block_perm.empty())
    prepared = permute_subsystems(prepared, prepared_dims, block_perm);

  LcuReport rep;
  rep.prepared = StateVector::checked(std::move(prepared_dims),
                                      std::move(prepared));
  rep.success_prob = p;
  rep.aa_rounds = rounds;
  rep.tally = tally;
  rep.queries = tally.total();
  rep.post_aa_success_prob = post_p;
  rep.residual_infidelity = 1.0 - post_p;
  return rep;
}

}  // namespace

StateVector StateVector::checked(std::vector<int> dims, Vector amps,
                                 double tol) {
  if (dims_total(dims) != static_cast<std::size_t>(amps.size()))
    throw shape_error("state vector: dims do not match amplitude count");
  if (std::abs(amps.norm() - 1.0) > tol)
    throw argument_error("state vector: amplitudes are not normalized");
  return StateVector{std::move(dims), std::move(amps)};
}

Matrix complete_unitary(const Vector& target, const Vector& anchor) {
  if (target.size() != anchor.size())
    throw shape_error("complete_unitary: dimension mismatch");
  if (std::abs(target.norm() - 1.0) > 1e-10 ||
      std::abs(anchor.norm() - 1.0) > 1e-10)
    throw argument_error("complete_unitary: inputs must be unit vectors");
  const Eigen::Index n = target.size();

  // Rotate the target phase so the overlap is real, send anchor there by a
  // Householder reflection, then restore the phase globally.
  const Complex g = anchor.dot(target);
  const Complex phase =
      std::abs(g) > 1e-14 ? g / std::abs(g) : Complex(1.0, 0.0);
  Vector t = target / phase;
  Vector w = t - anchor;
  const double wn2 = w.squaredNorm();
  Matrix h = Matrix::Identity(n, n);
  if (wn2 > 1e-28) h -= (2.0 / wn2) * (w * w.adjoint());
  return phase * h;
}

LcuReport lcu_prepare_linear(const std::vector<LcuTerm>& terms) {
  if (terms.empty())
    throw argument_error("lcu_prepare_linear: no terms");
  const int d = terms.front().psi.d;
  const Eigen::Index sys = static_cast<Eigen::Index>(d) * d;
  check_entry_limit(static_cast<std::size_t>(terms.size()) * sys,
                    static_cast<std::size_t>(terms.size()) * sys,
                    "lcu_prepare_linear");

  std::vector<double> coeffs;
  std::vector<Matrix> u;
  Vector anchor = basis_zero(sys);
  for (const LcuTerm& term : terms) {
    if (term.psi.d != d ||
        term.psi.vec.size() != sys)
      throw shape_error("lcu_prepare_linear: program-state dimensions differ");
    coeffs.push_back(term.c);
    u.push_back(complete_unitary(term.psi.vec, anchor));
  }
  return run_lcu(coeffs, u, anchor, {d, d}, {});
}

LcuReport lcu_prepare_poly(const PolySpec& poly) {
  const int d = poly.d;
  const int degree = poly.degree;
  Eigen::Index pair = static_cast<Eigen::Index>(d) * d;
  Eigen::Index sys = 1;
  for (int i = 0; i < degree; ++i) {
    sys *= pair;
    if (sys > static_cast<Eigen::Index>(kEntryLimit))
      throw size_error("lcu_prepare_poly: system dimension exceeds limits");
  }
  check_entry_limit(static_cast<std::size_t>(poly.terms.size()) * sys,
                    static_cast<std::size_t>(poly.terms.size()) * sys,
                    "lcu_prepare_poly");

  // Per-pair unitaries anchored at Phi; words shorter than the degree act as
  // the identity on the trailing Phi pairs.
  const Vector phi = encode_operator(Matrix::Identity(d, d)).vec;
  std::vector<Matrix> pair_u;
  for (const Matrix& op : poly.ops)
    pair_u.push_back(complete_unitary(encode_operator(op).vec, phi));

  std::vector<double> coeffs;
  std::vector<Matrix> u;
  Vector anchor(1);
  anchor(0) = 1.0;
  for (int l = 0; l < degree; ++l) {
    Vector next = kron(anchor, phi);
    anchor = std::move(next);
  }
  Matrix pair_id = Matrix::Identity(pair, pair);
  for (const PolyTerm& term : poly.terms) {
    coeffs.push_back(term.c);
    Matrix w(1, 1);
    w(0, 0) = 1.0;
    for (int l = 0; l < degree; ++l) {
      const Matrix& factor = l < static_cast<int>(term.s.size())
                                 ? pair_u[term.s[l] - '1']
                                 : pair_id;
      w = kron(w, factor);
    }
    u.push_back(std::move(w));
  }

  // The pairwise simulation is interleaved P^1 Q^1 ... P^D Q^D; report the
  // prepared state in canonical (P-block, Q-block) order.
  std::vector<int> perm(2 * degree);
  for (int k = 0; k < degree; ++k) {
    perm[2 * k] = k;
    perm[2 * k + 1] = degree + k;
  }
  std::vector<int> dims(2 * degree, d);
  return run_lcu(coeffs, u, anchor, std::move(dims), perm);
}

}  // namespace wml
