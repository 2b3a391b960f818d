#pragma once

// Channel representations and the exact-evolution oracle.
//
// Superoperators act on column-stacked vectorizations: vec stacks columns,
// so vec(AXB) = (B^T (x) A) vec(X).  Choi states follow the normalized
// convention Choi(N) = (I (x) N)(Phi) with Phi = Gamma Gamma^dag / d; the
// reference system is the first tensor factor.

#include <functional>
#include <vector>

#include "wml/tensor.hpp"
#include "wml/types.hpp"

namespace wml {

struct HamiltonianTerm {
  double c = 0.0;  // real coefficient
  Matrix sigma;    // density matrix acting as a Hamiltonian fragment
};

// H = sum_j c_j sigma_j plus jump operators L_k; the generator is
// L(rho) = -i[H, rho] + sum_k (L_k rho L_k^dag - 1/2 {L_k^dag L_k, rho}).
struct LindbladSpec {
  int d = 0;
  std::vector<HamiltonianTerm> hamiltonian_terms;
  std::vector<Matrix> jump_ops;

  // Validates shapes and the density-matrix invariants of every sigma_j,
  // drops c_j = 0 terms with a warning on stderr, rejects jumps with
  // Hilbert-Schmidt norm below 1e-12.
  static LindbladSpec checked(int d, std::vector<HamiltonianTerm> hams,
                              std::vector<Matrix> jumps, double tol = 1e-10);
};

struct SuperOperator {
  int d = 0;    // acts on d x d operators
  Matrix mat;   // d^2 x d^2
};

struct ChoiState {
  int d_in = 0;
  int d_out = 0;
  Matrix mat;  // (d_in * d_out) square, Hermitian for any valid channel

  static ChoiState checked(int d_in, int d_out, Matrix mat, double tol = 1e-10);
};

struct DensityMatrix {
  int d = 0;
  Matrix mat;

  // Hermitian, unit trace, and min eigenvalue >= -tol.
  static DensityMatrix checked(Matrix mat, double tol = 1e-10);
};

// Column-stacking vectorization and its inverse.
Vector vectorize(const Matrix& a);
Matrix devectorize(const Vector& v);

// Direct evaluation of the generator on one operator (the formula oracle).
Matrix lindblad_apply(const LindbladSpec& spec, const Matrix& rho);

// Matrix of the generator: devectorize(L.mat * vec(rho)) = lindblad_apply.
SuperOperator liouvillian(const LindbladSpec& spec);

// e^{L t}, the exact channel every algorithm is measured against.
SuperOperator exact_channel(const LindbladSpec& spec, double t,
                            double tol = 1e-12);

// Linear action without state validation.
Matrix apply_superop_raw(const SuperOperator& s, const Matrix& a);

// Applies s and re-validates the density-matrix invariants at `tol`;
// violations raise numerical_error.
DensityMatrix apply_superop(const SuperOperator& s, const DensityMatrix& rho,
                            double tol = 1e-8);

// e^{M_Delta}(rho) for the jump-only generator M(X) = MXM^dag - 1/2{M^dag M, X},
// computed without forming the dim^4 superoperator: `substeps` short steps,
// each a truncated series of the map up to `order`.  substeps = 0 selects
// ceil(10 * dt * ||M||_2^2) + 1.
Matrix apply_lindblad_action(const Matrix& rho, const Matrix& m, double dt,
                             int substeps = 0, int order = 8);

// Choi state of a linear action on d x d operators.
ChoiState choi_of(const std::function<Matrix(const Matrix&)>& apply, int d);
ChoiState choi_of(const SuperOperator& s);

// 1/2 ||a - b||_1; a lower bound on the half-diamond distance (the maximally
// entangled input is one feasible point of the diamond optimization).
double choi_trace_distance(const ChoiState& a, const ChoiState& b);

struct CptpReport {
  double min_choi_eig = 0.0;
  double tp_deviation = 0.0;  // ||Tr_out[Choi * d] - I||_2
  bool cp_pass = false;
  bool tp_pass = false;
  bool pass = false;
};

// Complete positivity and trace preservation diagnostics at tolerance tol.
CptpReport is_cptp(const SuperOperator& s, double tol);

}  // namespace wml
