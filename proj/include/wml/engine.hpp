#pragma once
// Wave-matrix Lindbladization: simulate e^{Lt} for a Lindbladian
//   L(rho) = -i[H, rho] + sum_k (L_k rho L_k^dag - (1/2){L_k^dag L_k, rho}),
// H = sum_j c_j sigma_j, consuming program states that encode the sigma_j and
// L_k. Four protocols:
//   1. sampled mixture of partial-swap and jump evolutions,
//   2. deterministic per-term sweeps (forward or palindromic ordering),
//   3. a single combined program state for L = sum_k c_k L_k,
//   4. products: one jump L = sum_s c_s T_s with T_s = L_{s1} L_{s2} ...
//
// Register canon: (S, P^1..P^D, Q^1..Q^D). Program states built in the
// interleaved order P^1 Q^1 ... P^D Q^D must be permuted before use; see
// poly_program_state.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wml/channels.hpp"
#include "wml/types.hpp"

namespace wml {

enum class Mode { expectation, monte_carlo };
enum class Ordering { forward, palindromic };
// automatic: dense superoperator exponential when the joint dimension is at
// most 64, action-based series otherwise.
enum class ChannelMode { automatic, dense, action };

struct RunConfig {
  double t = 1.0;
  long long n = 1;
  Mode mode = Mode::expectation;
  std::uint64_t seed = 0;
  Ordering ordering = Ordering::palindromic;
  ChannelMode channel_mode = ChannelMode::automatic;
  int action_substeps = 0;  // 0 selects the step-count heuristic
  int action_order = 8;
};

struct RunReport {
  DensityMatrix final;
  // Copies consumed per program state, keyed "sigma_1".., "psi_1".., "phi".
  // Expectation mode records expected (fractional) counts; Monte-Carlo mode
  // records the realized draws.
  std::map<std::string, double> consumed;
  std::optional<double> error_vs_oracle;
  double wall_seconds = 0.0;
};

struct LinearCombTerm {
  double c = 0.0;  // must be positive
  Matrix op;       // unit Hilbert-Schmidt norm
};

struct PolyTerm {
  std::string s;  // word over '1'..'K', e.g. "12" means L_1 L_2
  double c = 0.0; // must be positive
};

struct PolySpec {
  int d = 0;
  int degree = 0;           // D = max |s|
  std::vector<Matrix> ops;  // L_1..L_K, each unit Hilbert-Schmidt norm
  std::vector<PolyTerm> terms;
  static PolySpec checked(int d, std::vector<Matrix> ops,
                          std::vector<PolyTerm> terms, double tol = 1e-10);
};

// M = (1/sqrt(d)) (I_S (x) Gamma Gamma^dag_{PQ}) (SWAP_{SP} (x) I_Q) on d^3.
Matrix build_M(int d);

// M = d^{-D/2} (I_S (x) prod_l Gamma Gamma^dag_{P^l Q^l}) (CYC (x) I_{Q-block})
// where CYC shifts register contents (S, P^1..P^D) one slot toward S. Register
// order (S, P^1..P^D, Q^1..Q^D); D = 1 reduces to build_M.
Matrix build_M_poly(int d, int degree);

// c = sum_j |c_j| + sum_k ||L_k||_2^2.
double normalization_c(const LindbladSpec& spec);

// max over {|c_j|} union {||L_k||_2^2}.
double lindblad_max_coeff(const LindbladSpec& spec);

// One averaged step: mixes the three branch evolutions with weights |c_j|/c
// and ||L_k||_2^2/c. Equals e^{(L/c) delta}(rho) + O(delta^2).
DensityMatrix alg1_step_expectation(const DensityMatrix& rho,
                                    const LindbladSpec& spec, double delta,
                                    ChannelMode channel_mode = ChannelMode::automatic);

RunReport alg1_run(const DensityMatrix& rho, const LindbladSpec& spec,
                   const RunConfig& cfg);

// Mean state over Monte-Carlo trajectories drawn from one generator stream
// seeded with cfg.seed; cfg.mode is ignored (this is the sampling path by
// construction). consumed holds totals across all trajectories.
RunReport alg1_run_average(const DensityMatrix& rho, const LindbladSpec& spec,
                           const RunConfig& cfg, long long trajectories);

// Deterministic sweeps. Forward ordering: jumps k = K..1 then Hamiltonian
// terms j = J..1, durations ||L_k||^2 t/n and |c_j| t/n. Palindromic replays
// the sweep in reverse with every duration halved, consuming each program
// state twice per sweep.
RunReport alg2_run(const DensityMatrix& rho, const LindbladSpec& spec,
                   const RunConfig& cfg);

// Single jump L = sum_k c_k L_k via the combined program state
// phi = (L (x) I)|Gamma> / sqrt(c), c = ||L||_2^2.
RunReport alg3_run(const DensityMatrix& rho,
                   const std::vector<LinearCombTerm>& lin_spec,
                   const RunConfig& cfg);

// Single jump L = sum_s c_s d^{(|s|-D)/2} T_s. The d-power arises from the
// |Phi> padding of words shorter than D; poly_effective_operator returns it.
RunReport alg4_run(const DensityMatrix& rho, const PolySpec& poly,
                   const RunConfig& cfg);

// Normalized program state sum_s c_s phi_s / sqrt(c) in canonical register
// order, with c = ||sum_s c_s phi_s||^2 returned alongside.
struct PolyState {
  Vector vec;
  double c = 0.0;
};
PolyState poly_program_state(const PolySpec& poly);

Matrix poly_effective_operator(const PolySpec& poly);

// Superoperator assembled by running the expectation-mode algorithm on the
// d^2 matrix units. Monte-Carlo configs are rejected with mode_error.
SuperOperator channel_of_algorithm(const LindbladSpec& spec,
                                   const RunConfig& cfg, int algorithm);
SuperOperator channel_of_algorithm(const std::vector<LinearCombTerm>& lin_spec,
                                   const RunConfig& cfg);
SuperOperator channel_of_algorithm(const PolySpec& poly, const RunConfig& cfg);

// ceil(c^2 t^2 / eps) with the O-constant fixed to 1.
long long copies_needed(double c, double t, double eps);

struct CopiesReport {
  long long n = 0;
  // Expected per-state consumption, keyed like RunReport::consumed; sums to n.
  std::map<std::string, double> per_state;
};
CopiesReport copies_needed(const LindbladSpec& spec, double t, double eps);

}  // namespace wml
