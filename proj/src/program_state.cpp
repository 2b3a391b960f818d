#include "wml/program_state.hpp"

#include <cmath>
#include <vector>

#include "wml/tensor.hpp"

namespace wml {

ProgramState encode_operator(const Matrix& l) {
  if (l.rows() != l.cols())
    throw shape_error("encode_operator: operator must be square");
  const int d = static_cast<int>(l.rows());
  if (d < 1) throw shape_error("encode_operator: empty operator");
  const double norm = schatten_norm(l, 2);
  if (norm <= 1e-12)
    throw argument_error(
        "encode_operator: operator has vanishing Hilbert-Schmidt norm");
  Vector vec(static_cast<Eigen::Index>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) vec(i * d + j) = l(i, j) / norm;
  return ProgramState{d, std::move(vec), l};
}

Matrix decode_operator(const ProgramState& psi) {
  const int d = psi.d;
  if (d < 1 || psi.vec.size() != static_cast<Eigen::Index>(d) * d)
    throw shape_error("decode_operator: vec length does not match d^2");
  Matrix l(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) l(i, j) = psi.vec(i * d + j);
  return l;
}

OmegaSample sample_omega(const LindbladSpec& spec, std::mt19937_64& rng) {
  std::vector<OmegaSample> categories;
  std::vector<double> weights;
  double c = 0.0;
  auto push = [&](int branch, int index, double w) {
    categories.push_back({branch, index});
    weights.push_back(w);
    c += w;
  };
  for (std::size_t j = 0; j < spec.hamiltonian_terms.size(); ++j) {
    const double cj = spec.hamiltonian_terms[j].c;
    if (cj > 0) push(0, static_cast<int>(j), cj);
  }
  for (std::size_t j = 0; j < spec.hamiltonian_terms.size(); ++j) {
    const double cj = spec.hamiltonian_terms[j].c;
    if (cj < 0) push(1, static_cast<int>(j), -cj);
  }
  for (std::size_t k = 0; k < spec.jump_ops.size(); ++k) {
    const double n = schatten_norm(spec.jump_ops[k], 2);
    push(2, static_cast<int>(k), n * n);
  }
  if (categories.empty() || c <= 0.0)
    throw spec_error("sample_omega: normalization constant c is zero");
  std::uniform_real_distribution<double> unif(0.0, c);
  const double u = unif(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < categories.size(); ++i) {
    acc += weights[i];
    if (u < acc) return categories[i];
  }
  return categories.back();
}

Matrix perturb_unit_operator(const Matrix& l, double delta,
                             std::mt19937_64& rng) {
  if (l.rows() != l.cols())
    throw shape_error("perturb_unit_operator: operator must be square");
  if (std::abs(schatten_norm(l, 2) - 1.0) > 1e-10)
    throw argument_error(
        "perturb_unit_operator: operator must have unit Hilbert-Schmidt norm");
  const double max_delta = std::sqrt(2.0);
  if (!(delta > 0.0) || delta > max_delta + 1e-12)
    throw argument_error(
        "perturb_unit_operator: delta must lie in (0, sqrt(2)]");
  const int d = static_cast<int>(l.rows());

  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(d, d);
  double g_norm = 0.0;
  do {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
    g -= hs_inner(l, g) * l;
    g_norm = schatten_norm(g, 2);
  } while (g_norm <= 1e-8);
  g /= g_norm;

  auto candidate = [&](double eta) -> Matrix {
    Matrix out = l + eta * g;
    out /= schatten_norm(out, 2);
    return out;
  };
  auto dist_at = [&](double eta) {
    return schatten_norm(candidate(eta) - l, 2);
  };

  // Distance grows monotonically from 0 toward sqrt(2) as eta increases, so
  // bracket then bisect against the direct norm evaluation.
  double lo = 0.0, hi = 1.0;
  while (dist_at(hi) < delta && hi < 1e9) hi *= 2.0;
  double eta = hi;
  for (int it = 0; it < 200; ++it) {
    eta = 0.5 * (lo + hi);
    const double f = dist_at(eta);
    if (std::abs(f - delta) <= delta * 1e-8) break;
    (f < delta ? lo : hi) = eta;
  }
  Matrix out = candidate(eta);
  if (std::abs(schatten_norm(out - l, 2) - delta) > delta * 1e-6)
    throw numerical_error(
        "perturb_unit_operator: bisection failed to reach requested distance");
  return out;
}

PsiDistance psi_distance(const Matrix& l, const Matrix& l_tilde) {
  if (l.rows() != l.cols() || l_tilde.rows() != l.rows() ||
      l_tilde.cols() != l.cols())
    throw shape_error(
        "psi_distance: operators must be square with matching dimension");
  if (std::abs(schatten_norm(l, 2) - 1.0) > 1e-8 ||
      std::abs(schatten_norm(l_tilde, 2) - 1.0) > 1e-8)
    throw argument_error(
        "psi_distance: operators must have unit Hilbert-Schmidt norm");
  const Vector psi = encode_operator(l).vec;
  const Vector psi_t = encode_operator(l_tilde).vec;
  PsiDistance out;
  out.trace_dist =
      0.5 * schatten_norm(psi_t * psi_t.adjoint() - psi * psi.adjoint(), 1);
  out.hs_dist = schatten_norm(l_tilde - l, 2);
  out.overlap = hs_inner(l_tilde, l);
  // Compare in squared form: sqrt(1 - |ov|^2) amplifies rounding noise when
  // the overlap is close to 1.
  const double squared_gap =
      out.trace_dist * out.trace_dist - (1.0 - std::norm(out.overlap));
  if (std::abs(squared_gap) > 1e-10)
    throw numerical_error(
        "psi_distance: trace distance disagrees with the overlap identity");
  if (out.trace_dist > out.hs_dist + 1e-12)
    throw numerical_error(
        "psi_distance: trace distance exceeds the Hilbert-Schmidt bound");
  return out;
}

}  // namespace wml
