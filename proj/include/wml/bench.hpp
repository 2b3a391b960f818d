#pragma once
// Config ingestion, single runs, convergence sweeps, the tomography
// comparison, and preparation reports backing the command-line tool. Every
// emitted file is deterministic under a fixed seed: numbers are formatted
// locale-independently and wall-clock timing never enters the output.

#include <cstdint>
#include <string>
#include <vector>

#include "wml/channels.hpp"
#include "wml/engine.hpp"

namespace wml {

enum class SpecKind { lindblad, linear, poly };

struct SpecVariant {
  SpecKind kind = SpecKind::lindblad;
  int d = 0;
  LindbladSpec lindblad;
  std::vector<LinearCombTerm> linear;
  PolySpec poly;
};

struct ExperimentConfig {
  SpecVariant spec;
  int algorithm = 1;
  double t = 1.0;
  long long n = 1;                   // simulate
  std::vector<long long> n_values;   // sweep; strictly increasing, each >= 1
  Mode mode = Mode::expectation;
  Ordering ordering = Ordering::palindromic;
  ChannelMode channel_mode = ChannelMode::automatic;
  std::uint64_t seed = 0;
  Matrix rho;  // initial state; defaults to the maximally mixed state
  std::string output_path;
};

// Parses the JSON config text. Complex entries are [re, im] pairs, matrices
// row-major nested arrays; the spec is a tagged union under "spec" with
// "type" one of "lindblad" | "linear" | "poly". Malformed or inconsistent
// configs throw spec_error.
ExperimentConfig parse_config(const std::string& json_text);

// One run of the configured algorithm; returns the JSON report. Expectation
// mode reports the Choi-proxy error of the assembled channel against the
// exact oracle; Monte-Carlo mode reports the final-state distance instead.
std::string run_simulate(const ExperimentConfig& cfg, double tol);

// CSV with one row per (n, ordering) and fitted log-log slopes appended as
// comment metadata. Algorithm 2 emits both orderings; sweeps always run in
// expectation mode.
std::string run_sweep(const ExperimentConfig& cfg, double tol, int threads);

struct TomoRow {
  int d = 0;
  double tomography_lower_bound = 0.0;
  double wml_copies = 0.0;
  double ratio = 0.0;
};

// Tomography lower bound d^2 (1-delta)^2 / (delta^2 ln(d^2/delta)) with
// natural log and constant 1, against ceil(c^2 t^2 / eps) copies at c = 1,
// eps = delta * t. delta must lie in (0, 1).
std::vector<TomoRow> compare_tomography(const std::vector<int>& d_values,
                                        double delta, double t);
std::string compare_tomography_csv(const std::vector<int>& d_values,
                                   double delta, double t);

// LCU preparation report (linear and poly specs only): success probability,
// amplification rounds, query tally, and fidelity against the directly
// constructed combined state.
std::string run_prep_state(const ExperimentConfig& cfg);

// Runs both verification suites; returns the textual report and sets
// *all_pass. corrupt_m is the negative control on the product-lemma check.
std::string run_verify_lemmas(std::uint64_t seed, int trials, bool corrupt_m,
                              bool* all_pass);

}  // namespace wml
