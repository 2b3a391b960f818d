#pragma once
// Statevector simulation of the linear-combination-of-unitaries preparation
// of combined program states, with amplitude-amplification round counting and
// query accounting.
//
// Preparation circuit: (U_A^dag (x) I) select-U (U_A (x) I) on |0>|0>, then
// postselect the ancilla on |0>. The ancilla-|0> block equals
// (1/lambda) sum_k c_k U_k|anchor>, lambda = sum_k c_k, so postselection
// succeeds with probability p = c / lambda^2, c = ||sum_k c_k psi_k||^2.
//
// Amplitude amplification is simulated by exact reflections about the good
// subspace and the initial state; each round rotates by 2 asin(sqrt(p)).
// Exact rotations reach probability 1 only at special angles, so the report
// carries the achieved probability and the residual infidelity.

#include <vector>

#include "wml/engine.hpp"
#include "wml/program_state.hpp"
#include "wml/types.hpp"

namespace wml {

struct StateVector {
  std::vector<int> dims;
  Vector amps;
  static StateVector checked(std::vector<int> dims, Vector amps,
                             double tol = 1e-10);
};

// Query accounting: one query is one application of select-U, select-U^dag,
// U_A, or U_A^dag. The initial preparation charges one U_A and one select-U;
// the closing U_A^dag is a basis change for the ancilla measurement and is
// not charged. Each amplification round charges one application of each of
// the four unitaries, so the total is 2 + 4 * aa_rounds.
struct QueryTally {
  long long select_u = 0;
  long long select_u_dag = 0;
  long long u_a = 0;
  long long u_a_dag = 0;
  long long total() const { return select_u + select_u_dag + u_a + u_a_dag; }
};

struct LcuReport {
  StateVector prepared;  // postselected and renormalized
  double success_prob = 0.0;  // c / lambda^2, from the measured block norm
  int aa_rounds = 0;  // max(0, round(pi / (4 asin sqrt(p)) - 1/2))
  long long queries = 0;
  QueryTally tally;
  // sin^2((2 aa_rounds + 1) theta), measured by the reflection simulation.
  double post_aa_success_prob = 0.0;
  double residual_infidelity = 0.0;  // 1 - post_aa_success_prob
};

struct LcuTerm {
  double c = 0.0;  // must be positive
  ProgramState psi;
};

// Unitary with U * anchor = target, built from a phase-adjusted Householder
// reflection; <target|U|anchor> = 1. Both inputs must be unit vectors.
Matrix complete_unitary(const Vector& target, const Vector& anchor);

// Prepared state (1/sqrt(c)) sum_k c_k psi_k on registers (P, Q); the U_k
// are anchored at |0>.
LcuReport lcu_prepare_linear(const std::vector<LcuTerm>& terms);

// Prepared state (1/sqrt(c)) sum_s c_s phi_s in canonical register order
// (P-block, Q-block); the per-pair U_k are anchored at Phi, and words
// shorter than the degree act as the identity on the trailing Phi pairs.
LcuReport lcu_prepare_poly(const PolySpec& poly);

}  // namespace wml
