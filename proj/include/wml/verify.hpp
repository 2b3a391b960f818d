#pragma once
// Self-check suites for the identities and statistical contracts the library
// rests on, shared by the test binaries and the CLI's verify command. Each
// check returns its largest observed residual so failures are diagnosable.

#include <cstdint>
#include <string>
#include <vector>

namespace wml {

struct CheckResult {
  std::string name;
  bool pass = false;
  double max_residual = 0.0;
  std::string note;
};

// Least-squares slope of log(y) against log(x). Inputs must be positive.
double fit_loglog_slope(const std::vector<double>& x,
                        const std::vector<double>& y);

// Upper critical value of the chi-squared distribution via the
// Wilson-Hilferty cube approximation (exact enough for the significance
// levels used here; df = 2, 1e-3 gives 14.13 vs the exact 13.816).
double chi_square_critical(int df, double significance);

// Randomized invariant suites. The seed feeds every generator, so a run is
// reproducible end to end; trials scales the randomized draws per identity
// family (the statistical checks keep their pinned sample sizes).
// corrupt_m drops the 1/sqrt(d) factor of M inside the product-lemma check,
// a negative control that must make that check fail.
std::vector<CheckResult> verify_program_state_suite(std::uint64_t seed,
                                                    int trials = 50);
std::vector<CheckResult> verify_engine_suite(std::uint64_t seed,
                                             int trials = 50,
                                             bool corrupt_m = false);

}  // namespace wml
