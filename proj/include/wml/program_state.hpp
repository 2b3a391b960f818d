#pragma once
// Program states encode operators as pure states: |psi> = (L (x) I)|Gamma> / ||L||_2.
// The reshape is row-major, vec[i*d + j] = L(i,j) / ||L||_2, so encode/decode are
// plain reinterpretations of the entries and the encoding is an isometry:
// <encode(A), encode(B)> = Tr[A^dag B] / (||A||_2 ||B||_2).

#include <optional>
#include <random>

#include "wml/channels.hpp"
#include "wml/types.hpp"

namespace wml {

struct ProgramState {
  int d = 0;
  Vector vec;                    // length d*d, unit norm
  std::optional<Matrix> source;  // operator this state encodes, when known
};

// Branch drawn by sample_omega: 0 = positive Hamiltonian coefficient,
// 1 = negative Hamiltonian coefficient, 2 = jump term. index addresses the
// term within its own list (Hamiltonian terms for branches 0/1, jumps for 2).
struct OmegaSample {
  int branch = 0;
  int index = 0;
};

struct PsiDistance {
  double trace_dist = 0.0;  // (1/2) || psi~ psi~^dag - psi psi^dag ||_1
  double hs_dist = 0.0;     // || L~ - L ||_2
  Complex overlap;          // Tr[L~^dag L]
};

ProgramState encode_operator(const Matrix& l);

// Inverse reshape scaled to unit Hilbert-Schmidt norm; decode(encode(L))
// recovers L / ||L||_2.
Matrix decode_operator(const ProgramState& psi);

// Draws a branch with probability proportional to |c_j| (Hamiltonian terms,
// split by sign) or ||L_k||_2^2 (jumps). Deterministic given the generator
// state.
OmegaSample sample_omega(const LindbladSpec& spec, std::mt19937_64& rng);

// Returns a unit-norm L~ with ||L~ - L||_2 within relative 1e-6 of delta.
// The direction is Gaussian, orthogonalized against L, so the distance is
// monotone in the mixing weight and a bisection pins it.
Matrix perturb_unit_operator(const Matrix& l, double delta,
                             std::mt19937_64& rng);

// Distances between the encodings of two unit-norm operators. Also checks the
// exact identity trace_dist = sqrt(1 - |Tr[L~^dag L]|^2) and the bound
// trace_dist <= hs_dist, throwing numerical_error if either fails.
PsiDistance psi_distance(const Matrix& l, const Matrix& l_tilde);

}  // namespace wml
