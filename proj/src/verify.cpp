#include "wml/verify.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "wml/channels.hpp"
#include "wml/engine.hpp"
#include "wml/program_state.hpp"
#include "wml/tensor.hpp"
#include "wml/types.hpp"

namespace wml {

double fit_loglog_slope(const std::vector<double>& x,
                        const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw argument_error("fit_loglog_slope: need at least two points");
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw argument_error("fit_loglog_slope: values must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double cov = 0.0, var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cov += (lx[i] - mx) * (ly[i] - my);
    var += (lx[i] - mx) * (lx[i] - mx);
  }
  if (var == 0.0) throw argument_error("fit_loglog_slope: degenerate x values");
  return cov / var;
}

namespace {

// Standard normal quantile by Newton iteration on Phi(z) = p; the cdf and
// density are exact, so this converges to machine precision.
double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw argument_error("normal_quantile: p must lie in (0, 1)");
  double z = 0.0;
  for (int it = 0; it < 80; ++it) {
    const double cdf = 0.5 * std::erfc(-z / std::sqrt(2.0));
    const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
    const double step = (cdf - p) / std::max(pdf, 1e-300);
    z -= step;
    if (std::abs(step) < 1e-13) break;
  }
  return z;
}

}  // namespace

double chi_square_critical(int df, double significance) {
  if (df < 1) throw argument_error("chi_square_critical: df must be >= 1");
  if (!(significance > 0.0 && significance < 0.5))
    throw argument_error(
        "chi_square_critical: significance must lie in (0, 0.5)");
  const double z = normal_quantile(1.0 - significance);
  const double h = 2.0 / (9.0 * static_cast<double>(df));
  const double u = 1.0 - h + z * std::sqrt(h);
  return static_cast<double>(df) * u * u * u;
}

namespace {

Matrix random_gaussian(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
  return m;
}

Matrix random_density_matrix(int d, std::mt19937_64& rng) {
  Matrix g = random_gaussian(d, d, rng);
  Matrix rho = g * g.adjoint();
  return rho / rho.trace();
}

Matrix random_unit(int d, std::mt19937_64& rng) {
  Matrix g = random_gaussian(d, d, rng);
  return g / schatten_norm(g, 2);
}

Matrix ket_bra(int d, int i, int j) {
  Matrix m = Matrix::Zero(d, d);
  m(i, j) = 1.0;
  return m;
}

// d = 2, one Hamiltonian term with negative coefficient, two jumps: c = 1.95.
LindbladSpec reference_spec() {
  return LindbladSpec::checked(2, {{-0.7, ket_bra(2, 0, 0)}},
                               {ket_bra(2, 0, 1), 0.5 * ket_bra(2, 1, 0)});
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

CheckResult make_result(std::string name, bool pass, double residual,
                        std::string note = {}) {
  return CheckResult{std::move(name), pass, residual, std::move(note)};
}

const double kSqrtTwo = 1.4142135623730951;

}  // namespace

std::vector<CheckResult> verify_program_state_suite(std::uint64_t seed,
                                                    int trials) {
  if (trials < 1)
    throw argument_error("verify_program_state_suite: trials must be >= 1");
  std::vector<CheckResult> out;
  std::mt19937_64 rng(seed);
  const int per_d = std::max(1, trials / 2);

  {  // Encoding isometry.
    double worst = 0.0;
    for (int d : {2, 3})
      for (int trial = 0; trial < per_d; ++trial) {
        Matrix a = random_gaussian(d, d, rng);
        Matrix b = random_gaussian(d, d, rng);
        Complex lhs = encode_operator(a).vec.dot(encode_operator(b).vec);
        Complex rhs =
            hs_inner(a, b) / (schatten_norm(a, 2) * schatten_norm(b, 2));
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    out.push_back(make_result("encoding-isometry", worst <= 1e-12, worst));
  }

  {  // Encoded-state distance: exact equality and the Hilbert-Schmidt bound.
    double worst_eq = 0.0, worst_bound = 0.0;
    for (int d : {2, 3})
      for (int trial = 0; trial < trials; ++trial) {
        Matrix l = random_unit(d, rng);
        Matrix lt = random_unit(d, rng);
        PsiDistance pd = psi_distance(l, lt);
        const double predicted = std::sqrt(1.0 - std::norm(pd.overlap));
        worst_eq = std::max(worst_eq, std::abs(pd.trace_dist - predicted));
        worst_bound = std::max(worst_bound, pd.trace_dist - pd.hs_dist);
      }
    out.push_back(
        make_result("state-distance-equality", worst_eq <= 1e-10, worst_eq));
    out.push_back(
        make_result("state-distance-bound", worst_bound <= 1e-12, worst_bound));
  }

  {  // Branch frequencies of the sampled mixture.
    LindbladSpec spec = reference_spec();
    const double c = normalization_c(spec);
    const std::vector<std::pair<std::pair<int, int>, double>> expected{
        {{1, 0}, 0.7 / c}, {{2, 0}, 1.0 / c}, {{2, 1}, 0.25 / c}};
    const int draws = 100000;
    std::map<std::pair<int, int>, long long> counts;
    for (int i = 0; i < draws; ++i) {
      OmegaSample s = sample_omega(spec, rng);
      ++counts[{s.branch, s.index}];
    }
    double chi2 = 0.0;
    for (const auto& [key, p] : expected) {
      const double observed = static_cast<double>(counts[key]);
      const double mean = p * draws;
      chi2 += (observed - mean) * (observed - mean) / mean;
    }
    const double critical =
        chi_square_critical(static_cast<int>(expected.size()) - 1, 1e-3);
    out.push_back(make_result("omega-branch-frequencies", chi2 <= critical,
                              chi2,
                              "chi2 " + fmt(chi2) + " vs " + fmt(critical)));
  }

  {  // Perturbation reaches the requested distance.
    double worst = 0.0;
    Matrix l = random_unit(2, rng);
    for (double delta : {1e-4, 0.1, 0.5, 1.0, kSqrtTwo}) {
      Matrix lt = perturb_unit_operator(l, delta, rng);
      worst = std::max(
          worst, std::abs(schatten_norm(lt - l, 2) - delta) / delta);
    }
    out.push_back(make_result("perturbation-distance", worst <= 1e-6, worst));
  }

  return out;
}

std::vector<CheckResult> verify_engine_suite(std::uint64_t seed, int trials,
                                             bool corrupt_m) {
  if (trials < 1)
    throw argument_error("verify_engine_suite: trials must be >= 1");
  std::vector<CheckResult> out;
  std::mt19937_64 rng(seed);
  const int per_d = std::max(1, trials / 2);

  {  // First-order generator identity on the single-jump reduction.
    double worst = 0.0;
    for (int d : {2, 3}) {
      Matrix m = build_M(d);
      Matrix mm = m.adjoint() * m;
      for (int trial = 0; trial < per_d; ++trial) {
        Matrix l = random_unit(d, rng);
        Matrix rho = random_density_matrix(d, rng);
        Vector psi = encode_operator(l).vec;
        Matrix x = kron(rho, Matrix(psi * psi.adjoint()));
        Matrix gen = m * x * m.adjoint() - 0.5 * (mm * x + x * mm);
        Matrix reduced = partial_trace(gen, {d, d * d}, {0});
        Matrix expected = l * rho * l.adjoint() -
                          0.5 * (l.adjoint() * l * rho + rho * l.adjoint() * l);
        worst = std::max(worst, schatten_norm(reduced - expected, 1));
      }
    }
    out.push_back(
        make_result("first-order-generator", worst <= 1e-10, worst));
  }

  {  // Hamiltonian partial-swap commutator reduction.
    double worst = 0.0;
    for (int d : {2, 3}) {
      Matrix s = swap_operator(d);
      for (int trial = 0; trial < per_d; ++trial) {
        Matrix sigma = random_density_matrix(d, rng);
        Matrix rho = random_density_matrix(d, rng);
        Matrix joint = kron(rho, sigma);
        Matrix lhs = partial_trace(
            Matrix(Complex(0, -1) * (s * joint - joint * s)), {d, d}, {0});
        Matrix rhs = Complex(0, -1) * (sigma * rho - rho * sigma);
        worst = std::max(worst, schatten_norm(lhs - rhs, 1));
      }
    }
    out.push_back(make_result("partial-swap-commutator", worst <= 1e-12, worst));
  }

  {  // Product lemma: all three reductions at (d, D) in {(2,2),(3,2),(2,3)}.
    double worst = 0.0;
    const int tuples = std::max(1, trials / 5);
    for (auto [d, degree] : std::vector<std::pair<int, int>>{
             {2, 2}, {3, 2}, {2, 3}}) {
      Matrix m = build_M_poly(d, degree);
      if (corrupt_m) m *= std::sqrt(static_cast<double>(d));
      Matrix mm = m.adjoint() * m;
      Vector gamma = gamma_vector(d);
      Matrix gg = gamma * gamma.adjoint();
      std::vector<int> dims(2 * degree, d);
      std::vector<int> perm(2 * degree);
      for (int k = 0; k < degree; ++k) {
        perm[2 * k] = k;
        perm[2 * k + 1] = degree + k;
      }
      for (int trial = 0; trial < tuples; ++trial) {
        std::vector<Matrix> ls, lps;
        Matrix interleaved(1, 1);
        interleaved(0, 0) = 1.0;
        Matrix id = Matrix::Identity(d, d);
        for (int l = 0; l < degree; ++l) {
          ls.push_back(random_gaussian(d, d, rng));
          lps.push_back(random_gaussian(d, d, rng));
          Matrix pair_op = kron(ls.back(), id) * gg * kron(lps.back(), id);
          interleaved = kron(interleaved, pair_op);
        }
        Matrix block = permute_subsystems(interleaved, dims, perm);
        Matrix rho = random_density_matrix(d, rng);
        Matrix x = kron(rho, block);

        Matrix left = Matrix::Identity(d, d);
        for (int l = 0; l < degree; ++l) left = left * ls[l];
        Matrix right = Matrix::Identity(d, d);
        for (int l = degree - 1; l >= 0; --l) right = right * lps[l];

        const int prog = static_cast<int>(x.rows()) / d;
        Matrix r1 = partial_trace(Matrix(m * x * m.adjoint()), {d, prog}, {0});
        Matrix r2 = partial_trace(Matrix(mm * x), {d, prog}, {0});
        Matrix r3 = partial_trace(Matrix(x * mm), {d, prog}, {0});
        worst = std::max(worst, schatten_norm(r1 - left * rho * right, 1));
        worst = std::max(worst, schatten_norm(r2 - right * left * rho, 1));
        worst = std::max(worst, schatten_norm(r3 - rho * right * left, 1));
      }
    }
    out.push_back(make_result("product-lemma", worst <= 1e-9, worst));
  }

  {  // Every expectation-mode algorithm assembles to a CPTP channel.
    LindbladSpec spec = reference_spec();
    double min_eig = 0.0, worst_tp = 0.0;
    bool pass = true;
    auto absorb = [&](const SuperOperator& s) {
      CptpReport rep = is_cptp(s, 1e-8);
      pass = pass && rep.pass;
      min_eig = std::min(min_eig, rep.min_choi_eig);
      worst_tp = std::max(worst_tp, rep.tp_deviation);
    };
    RunConfig cfg;
    cfg.t = 1.0;
    cfg.n = 16;
    absorb(channel_of_algorithm(spec, cfg, 1));
    cfg.ordering = Ordering::forward;
    absorb(channel_of_algorithm(spec, cfg, 2));
    cfg.ordering = Ordering::palindromic;
    absorb(channel_of_algorithm(spec, cfg, 2));
    std::vector<LinearCombTerm> lin{{1.0, ket_bra(2, 0, 1)},
                                    {1.0, ket_bra(2, 1, 0)}};
    absorb(channel_of_algorithm(lin, cfg));
    PolySpec poly = PolySpec::checked(
        2, {ket_bra(2, 0, 1), ket_bra(2, 1, 0)}, {{"12", 1.0}, {"1", 1.0}});
    RunConfig poly_cfg;
    poly_cfg.t = 0.5;
    poly_cfg.n = 8;
    poly_cfg.channel_mode = ChannelMode::action;
    absorb(channel_of_algorithm(poly, poly_cfg));
    out.push_back(make_result(
        "expectation-cptp", pass, std::max(-min_eig, worst_tp),
        "min Choi eig " + fmt(min_eig) + ", TP dev " + fmt(worst_tp)));
  }

  {  // Monte-Carlo mean converges to the expectation-mode state.
    LindbladSpec spec = reference_spec();
    Matrix plus = Matrix::Constant(2, 2, 0.5);
    DensityMatrix rho = DensityMatrix::checked(plus);
    RunConfig cfg;
    cfg.t = 1.0;
    cfg.n = 16;
    RunReport ref = alg1_run(rho, spec, cfg);
    const std::vector<double> ts{25, 100, 400, 1600};
    std::vector<double> dists;
    const int reps = 6;
    for (double traj : ts) {
      double acc = 0.0;
      for (int rep = 0; rep < reps; ++rep) {
        RunConfig mc = cfg;
        mc.mode = Mode::monte_carlo;
        mc.seed = seed + 7919 * static_cast<std::uint64_t>(rep) +
                  static_cast<std::uint64_t>(traj);
        RunReport avg = alg1_run_average(rho, spec, mc,
                                         static_cast<long long>(traj));
        acc += 0.5 * schatten_norm(avg.final.mat - ref.final.mat, 1);
      }
      dists.push_back(acc / reps);
    }
    const double slope = fit_loglog_slope(ts, dists);
    out.push_back(make_result("monte-carlo-consistency",
                              std::abs(slope + 0.5) <= 0.2, slope,
                              "slope " + fmt(slope)));
  }

  {  // Realized consumption matches the stated branch probabilities.
    LindbladSpec spec = reference_spec();
    const double c = normalization_c(spec);
    DensityMatrix rho =
        DensityMatrix::checked(0.5 * Matrix::Identity(2, 2));
    RunConfig cfg;
    cfg.t = 1.0;
    cfg.n = 100;
    cfg.mode = Mode::monte_carlo;
    cfg.seed = seed + 13;
    const long long traj = 1000;
    RunReport rep = alg1_run_average(rho, spec, cfg, traj);
    const double total = static_cast<double>(cfg.n) * traj;
    const std::vector<std::pair<std::string, double>> expected{
        {"sigma_1", 0.7 / c}, {"psi_1", 1.0 / c}, {"psi_2", 0.25 / c}};
    double worst_sigmas = 0.0;
    for (const auto& [label, p] : expected) {
      const double freq = rep.consumed.at(label) / total;
      const double sigma = std::sqrt(p * (1.0 - p) / total);
      worst_sigmas = std::max(worst_sigmas, std::abs(freq - p) / sigma);
    }
    out.push_back(make_result("resource-accounting", worst_sigmas <= 3.0,
                              worst_sigmas,
                              "worst deviation " + fmt(worst_sigmas) +
                                  " sigmas at 1e5 draws"));
  }

  return out;
}

}  // namespace wml
