#pragma once

// Dense multipartite linear algebra: Kronecker products, partial traces,
// subsystem permutations, the fixed entangling operators (Gamma, SWAP,
// cyclic SWAP) and a series-based matrix exponential.
//
// Conventions used everywhere in this library:
//   - subsystem index 0 is the leftmost tensor factor,
//   - a multi-index (a_0, ..., a_{m-1}) maps to the flat index
//     a_0 * d_1*...*d_{m-1} + a_1 * d_2*...*d_{m-1} + ... + a_{m-1}.

#include <cstddef>
#include <vector>

#include "wml/types.hpp"

namespace wml {

// Product of subsystem dimensions; every dim must be >= 1.
std::size_t dims_total(const std::vector<int>& dims);

// Kronecker product, entry ((ia,ib),(ja,jb)) = a(ia,ja) * b(ib,jb).
Matrix kron(const Matrix& a, const Matrix& b);
Vector kron(const Vector& a, const Vector& b);

// a tensored with itself `count` times; count = 0 gives the 1x1 identity.
Matrix kron_power(const Matrix& a, int count);

// Trace out every subsystem not listed in `keep`; kept subsystems stay in
// ascending index order.  `m` must be square with side dims_total(dims).
Matrix partial_trace(const Matrix& m, const std::vector<int>& dims,
                     const std::vector<int>& keep);

// Move subsystem i to slot perm[i]; result = U m U^dag for the corresponding
// permutation unitary.  perm must be a bijection on {0, ..., dims.size()-1}.
Matrix permute_subsystems(const Matrix& m, const std::vector<int>& dims,
                          const std::vector<int>& perm);
Vector permute_subsystems(const Vector& v, const std::vector<int>& dims,
                          const std::vector<int>& perm);

// Unnormalized maximally entangled vector sum_j |j>|j>, norm sqrt(d).
Vector gamma_vector(int d);

// SWAP = sum_{ij} |i><j| (x) |j><i| on d^2; Hermitian, unitary, involutive.
Matrix swap_operator(int d);

// Cyclic swap on `parties` d-dimensional systems:
// |a_1, a_2, ..., a_m> -> |a_m, a_1, ..., a_{m-1}>.
Matrix cycswap_operator(int d, int parties);

// e^a via scaling-and-squaring: 1-norm scaling, truncated Taylor series to
// relative tolerance tol.  Valid for arbitrary (non-Hermitian) square input.
Matrix mat_exp(const Matrix& a, double tol = 1e-12);

// Schatten p-norm, p in {1, 2}: trace norm (sum of singular values) or
// Hilbert-Schmidt norm sqrt(Tr[a^dag a]).
double schatten_norm(const Matrix& a, int p);

// Hilbert-Schmidt inner product Tr[a^dag b].
Complex hs_inner(const Matrix& a, const Matrix& b);

}  // namespace wml
