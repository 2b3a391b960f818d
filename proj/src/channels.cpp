#include "wml/channels.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <iostream>

namespace wml {

namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) throw shape_error(std::string(what) + ": not square");
}

double hermiticity_gap(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian);
  return es.eigenvalues().minCoeff();
}

}  // namespace

LindbladSpec LindbladSpec::checked(int d, std::vector<HamiltonianTerm> hams,
                                   std::vector<Matrix> jumps, double tol) {
  if (d < 2) throw spec_error("LindbladSpec: d must be >= 2");
  std::vector<HamiltonianTerm> kept;
  for (const auto& term : hams) {
    if (term.sigma.rows() != d || term.sigma.cols() != d)
      throw spec_error("LindbladSpec: sigma term is not d x d");
    if (term.c == 0.0) {
      std::cerr << "wml: dropping Hamiltonian term with c = 0\n";
      continue;
    }
    if (hermiticity_gap(term.sigma) > tol)
      throw spec_error("LindbladSpec: sigma term is not Hermitian");
    if (std::abs(term.sigma.trace().real() - 1.0) > tol ||
        std::abs(term.sigma.trace().imag()) > tol)
      throw spec_error("LindbladSpec: sigma term does not have unit trace");
    if (min_eigenvalue(0.5 * (term.sigma + term.sigma.adjoint())) < -tol)
      throw spec_error("LindbladSpec: sigma term is not positive semidefinite");
    kept.push_back(term);
  }
  for (const auto& l : jumps) {
    if (l.rows() != d || l.cols() != d)
      throw spec_error("LindbladSpec: jump operator is not d x d");
    if (schatten_norm(l, 2) <= 1e-12)
      throw spec_error("LindbladSpec: jump operator has negligible norm");
  }
  return LindbladSpec{d, std::move(kept), std::move(jumps)};
}

ChoiState ChoiState::checked(int d_in, int d_out, Matrix mat, double tol) {
  require_square(mat, "ChoiState");
  if (mat.rows() != static_cast<Eigen::Index>(d_in) * d_out)
    throw shape_error("ChoiState: matrix does not match d_in * d_out");
  if (hermiticity_gap(mat) > tol)
    throw numerical_error("ChoiState: not Hermitian within tolerance");
  return ChoiState{d_in, d_out, std::move(mat)};
}

DensityMatrix DensityMatrix::checked(Matrix mat, double tol) {
  require_square(mat, "DensityMatrix");
  if (hermiticity_gap(mat) > tol)
    throw numerical_error("DensityMatrix: not Hermitian within tolerance");
  const Complex tr = mat.trace();
  if (std::abs(tr - Complex(1.0)) > tol)
    throw numerical_error("DensityMatrix: trace differs from 1");
  if (min_eigenvalue(0.5 * (mat + mat.adjoint())) < -tol)
    throw numerical_error("DensityMatrix: negative eigenvalue beyond tolerance");
  return DensityMatrix{static_cast<int>(mat.rows()), std::move(mat)};
}

Vector vectorize(const Matrix& a) {
  require_square(a, "vectorize");
  const Eigen::Index d = a.rows();
  Vector v(d * d);
  for (Eigen::Index j = 0; j < d; ++j) v.segment(j * d, d) = a.col(j);
  return v;
}

Matrix devectorize(const Vector& v) {
  const auto n = v.size();
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(double(n))));
  if (d * d != n) throw shape_error("devectorize: length is not a perfect square");
  Matrix a(d, d);
  for (Eigen::Index j = 0; j < d; ++j) a.col(j) = v.segment(j * d, d);
  return a;
}

Matrix lindblad_apply(const LindbladSpec& spec, const Matrix& rho) {
  const Complex i_unit(0.0, 1.0);
  Matrix h = Matrix::Zero(spec.d, spec.d);
  for (const auto& term : spec.hamiltonian_terms) h += term.c * term.sigma;
  Matrix out = -i_unit * (h * rho - rho * h);
  for (const auto& l : spec.jump_ops) {
    const Matrix ldl = l.adjoint() * l;
    out += l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl);
  }
  return out;
}

SuperOperator liouvillian(const LindbladSpec& spec) {
  const int d = spec.d;
  const Complex i_unit(0.0, 1.0);
  const Matrix id = Matrix::Identity(d, d);
  Matrix h = Matrix::Zero(d, d);
  for (const auto& term : spec.hamiltonian_terms) h += term.c * term.sigma;

  // vec(AXB) = (B^T (x) A) vec(X).
  Matrix mat = -i_unit * (kron(id, h) - kron(h.transpose(), id));
  for (const auto& l : spec.jump_ops) {
    const Matrix ldl = l.adjoint() * l;
    mat += kron(l.conjugate(), l);
    mat -= 0.5 * kron(id, ldl);
    mat -= 0.5 * kron(ldl.transpose(), id);
  }
  return SuperOperator{d, std::move(mat)};
}

SuperOperator exact_channel(const LindbladSpec& spec, double t, double tol) {
  if (t < 0.0) throw argument_error("exact_channel: t must be >= 0");
  SuperOperator gen = liouvillian(spec);
  return SuperOperator{spec.d, mat_exp(gen.mat * t, tol)};
}

Matrix apply_superop_raw(const SuperOperator& s, const Matrix& a) {
  if (a.rows() != s.d || a.cols() != s.d)
    throw shape_error("apply_superop: operand does not match superoperator dim");
  return devectorize(s.mat * vectorize(a));
}

DensityMatrix apply_superop(const SuperOperator& s, const DensityMatrix& rho,
                            double tol) {
  Matrix out = apply_superop_raw(s, rho.mat);
  try {
    return DensityMatrix::checked(std::move(out), tol);
  } catch (const numerical_error& e) {
    throw numerical_error(std::string("apply_superop: output invalid: ") +
                          e.what());
  }
}

Matrix apply_lindblad_action(const Matrix& rho, const Matrix& m, double dt,
                             int substeps, int order) {
  require_square(rho, "apply_lindblad_action");
  require_square(m, "apply_lindblad_action");
  if (rho.rows() != m.rows())
    throw shape_error("apply_lindblad_action: rho and M dimension mismatch");
  if (dt < 0.0) throw argument_error("apply_lindblad_action: dt must be >= 0");
  if (order < 1) throw argument_error("apply_lindblad_action: order must be >= 1");
  if (dt == 0.0) return rho;

  const double m_norm_sq = m.cwiseAbs2().sum();
  if (substeps <= 0)
    substeps = static_cast<int>(std::ceil(10.0 * dt * m_norm_sq)) + 1;
  const double h = dt / substeps;
  const Matrix mdm = m.adjoint() * m;

  auto generator = [&](const Matrix& x) -> Matrix {
    return m * x * m.adjoint() - 0.5 * (mdm * x + x * mdm);
  };

  Matrix state = rho;
  for (int step = 0; step < substeps; ++step) {
    Matrix sum = state;
    Matrix term = state;
    double prev_norm = term.cwiseAbs().maxCoeff();
    for (int k = 1; k <= order; ++k) {
      term = generator(term) * (h / static_cast<double>(k));
      sum += term;
      const double cur_norm = term.cwiseAbs().maxCoeff();
      if (k >= 2 && cur_norm > prev_norm && cur_norm > 1.0)
        throw step_size_error(
            "apply_lindblad_action: series terms growing; increase substeps");
      prev_norm = cur_norm;
    }
    state = std::move(sum);
  }
  return state;
}

ChoiState choi_of(const std::function<Matrix(const Matrix&)>& apply, int d) {
  if (d < 2) throw argument_error("choi_of: d must be >= 2");
  int d_out = 0;
  // Choi = (1/d) sum_{ij} |i><j| (x) apply(|i><j|), assembled by linearity.
  Matrix choi;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      Matrix unit = Matrix::Zero(d, d);
      unit(i, j) = 1.0;
      Matrix image = apply(unit);
      if (image.rows() != image.cols())
        throw shape_error("choi_of: channel output is not square");
      if (choi.size() == 0) {
        d_out = static_cast<int>(image.rows());
        choi = Matrix::Zero(static_cast<Eigen::Index>(d) * d_out,
                            static_cast<Eigen::Index>(d) * d_out);
      }
      choi.block(static_cast<Eigen::Index>(i) * d_out,
                 static_cast<Eigen::Index>(j) * d_out, d_out, d_out) +=
          image / static_cast<double>(d);
    }
  }
  return ChoiState{d, d_out, std::move(choi)};
}

ChoiState choi_of(const SuperOperator& s) {
  return choi_of([&](const Matrix& x) { return apply_superop_raw(s, x); }, s.d);
}

double choi_trace_distance(const ChoiState& a, const ChoiState& b) {
  if (a.d_in != b.d_in || a.d_out != b.d_out)
    throw shape_error("choi_trace_distance: dimension mismatch");
  return 0.5 * schatten_norm(a.mat - b.mat, 1);
}

CptpReport is_cptp(const SuperOperator& s, double tol) {
  ChoiState choi = choi_of(s);
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (choi.mat + choi.mat.adjoint()));
  CptpReport report;
  report.min_choi_eig = es.eigenvalues().minCoeff();
  // Trace preservation: tracing the output side of d * Choi returns I.
  Matrix marginal =
      partial_trace(choi.mat * static_cast<double>(s.d), {choi.d_in, choi.d_out},
                    {0});
  report.tp_deviation =
      schatten_norm(marginal - Matrix::Identity(s.d, s.d), 2);
  report.cp_pass = report.min_choi_eig >= -tol;
  report.tp_pass = report.tp_deviation <= tol;
  report.pass = report.cp_pass && report.tp_pass;
  return report;
}

}  // namespace wml
