#include "wml/engine.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <utility>

#include "wml/program_state.hpp"
#include "wml/tensor.hpp"

namespace wml {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_config(const RunConfig& cfg) {
  if (cfg.n < 1) throw argument_error("run config: n must be >= 1");
  if (!(cfg.t >= 0.0)) throw argument_error("run config: t must be >= 0");
  if (cfg.action_substeps < 0)
    throw argument_error("run config: action_substeps must be >= 0");
  if (cfg.action_order < 1 || cfg.action_order > 16)
    throw argument_error("run config: action_order must lie in [1, 16]");
}

bool use_dense(ChannelMode mode, Eigen::Index joint_dim) {
  switch (mode) {
    case ChannelMode::dense:
      return true;
    case ChannelMode::action:
      return false;
    case ChannelMode::automatic:
      break;
  }
  return joint_dim <= 64;
}

// Evolve rho (x) state under the single-jump generator of m for time dt, then
// trace back onto the system register.
struct JumpStep {
  Matrix state;           // pure program-state density on the program block
  std::vector<int> dims;  // {d, program block}
  Matrix m;
  double dt = 0.0;
  bool dense = true;
  SuperOperator exp_gen{0, {}};
  int substeps = 0;
  int order = 8;

  Matrix apply(const Matrix& rho) const {
    Matrix joint = kron(rho, state);
    Matrix evolved = dense
                         ? apply_superop_raw(exp_gen, joint)
                         : apply_lindblad_action(joint, m, dt, substeps, order);
    return partial_trace(evolved, dims, {0});
  }
};

JumpStep make_jump_step(Matrix m, const Matrix& state_density, int d,
                        double dt, const RunConfig& cfg) {
  JumpStep js;
  js.state = state_density;
  const int joint_dim = static_cast<int>(m.rows());
  js.dims = {d, joint_dim / d};
  js.dt = dt;
  js.dense = use_dense(cfg.channel_mode, joint_dim);
  if (js.dense) {
    LindbladSpec jump_only{joint_dim, {}, {m}};
    js.exp_gen =
        SuperOperator{joint_dim, mat_exp(liouvillian(jump_only).mat * dt)};
  } else {
    js.substeps = cfg.action_substeps;
    js.order = cfg.action_order;
  }
  js.m = std::move(m);
  return js;
}

// Conjugation by e^{-i sign SWAP dt} against a fresh copy of sigma, traced
// back onto the system register. Monte-Carlo mode pads with tau = I/d, the
// arbitrary third-register state; it is traced out untouched either way.
struct HamStep {
  int d = 0;
  Matrix sigma;
  Matrix u;   // on (S, P)
  Matrix u3;  // u (x) I, on (S, P, Q)

  Matrix apply(const Matrix& rho, bool with_tau) const {
    if (!with_tau) {
      Matrix joint = u * kron(rho, sigma) * u.adjoint();
      return partial_trace(joint, {d, d}, {0});
    }
    Matrix tau = Matrix::Identity(d, d) / static_cast<double>(d);
    Matrix joint = u3 * kron(kron(rho, sigma), tau) * u3.adjoint();
    return partial_trace(joint, {d, d, d}, {0});
  }
};

HamStep make_ham_step(const Matrix& sigma, double coeff_sign, double dt,
                      int d) {
  HamStep hs;
  hs.d = d;
  hs.sigma = sigma;
  const double sign = coeff_sign >= 0.0 ? 1.0 : -1.0;
  hs.u = mat_exp(Complex(0.0, -sign * dt) * swap_operator(d));
  hs.u3 = kron(hs.u, Matrix(Matrix::Identity(d, d)));
  return hs;
}

struct Alg1Branch {
  double weight = 0.0;
  std::string label;
  bool is_jump = false;
  std::pair<int, int> sample_key;  // (OmegaSample branch, index)
  HamStep ham;
  JumpStep jump;
};

struct Alg1Context {
  double c = 0.0;
  std::vector<Alg1Branch> branches;

  Matrix branch_apply(std::size_t b, const Matrix& rho, bool with_tau) const {
    const Alg1Branch& br = branches[b];
    return br.is_jump ? br.jump.apply(rho) : br.ham.apply(rho, with_tau);
  }

  Matrix step_expectation(const Matrix& rho) const {
    Matrix out = Matrix::Zero(rho.rows(), rho.cols());
    for (std::size_t b = 0; b < branches.size(); ++b)
      out += (branches[b].weight / c) * branch_apply(b, rho, false);
    return out;
  }
};

Alg1Context make_alg1_context(const LindbladSpec& spec, double delta,
                              const RunConfig& cfg) {
  const int d = spec.d;
  Alg1Context ctx;
  ctx.c = normalization_c(spec);

  for (std::size_t j = 0; j < spec.hamiltonian_terms.size(); ++j) {
    const auto& term = spec.hamiltonian_terms[j];
    Alg1Branch br;
    br.weight = std::abs(term.c);
    br.label = "sigma_" + std::to_string(j + 1);
    br.sample_key = {term.c > 0 ? 0 : 1, static_cast<int>(j)};
    br.ham = make_ham_step(term.sigma, term.c, delta, d);
    ctx.branches.push_back(std::move(br));
  }

  // All jump branches share M and the duration, hence one exponential.
  JumpStep shared;
  bool have_shared = false;
  for (std::size_t k = 0; k < spec.jump_ops.size(); ++k) {
    const double norm = schatten_norm(spec.jump_ops[k], 2);
    ProgramState psi = encode_operator(spec.jump_ops[k]);
    Matrix density = psi.vec * psi.vec.adjoint();
    Alg1Branch br;
    br.weight = norm * norm;
    br.label = "psi_" + std::to_string(k + 1);
    br.sample_key = {2, static_cast<int>(k)};
    br.is_jump = true;
    if (!have_shared) {
      shared = make_jump_step(build_M(d), density, d, delta, cfg);
      have_shared = true;
      br.jump = shared;
    } else {
      br.jump = shared;
      br.jump.state = density;
    }
    ctx.branches.push_back(std::move(br));
  }
  return ctx;
}

Matrix run_alg1_expectation(const Alg1Context& ctx, Matrix state,
                            long long n) {
  for (long long i = 0; i < n; ++i) state = ctx.step_expectation(state);
  return state;
}

struct Alg2Context {
  std::vector<JumpStep> jumps;
  std::vector<HamStep> hams;
  // Sweep sequence: indices into jumps (>= 0) and hams (encoded as -1 - j).
  std::vector<int> sequence;

  Matrix sweep(Matrix state) const {
    for (int idx : sequence)
      state = idx >= 0 ? jumps[idx].apply(state)
                       : hams[-1 - idx].apply(state, false);
    return state;
  }
};

Alg2Context make_alg2_context(const LindbladSpec& spec, const RunConfig& cfg) {
  const int d = spec.d;
  const double scale = cfg.ordering == Ordering::palindromic ? 0.5 : 1.0;
  const double t_over_n = cfg.t / static_cast<double>(cfg.n);
  Alg2Context ctx;

  Matrix m = build_M(d);
  for (const Matrix& l : spec.jump_ops) {
    const double norm = schatten_norm(l, 2);
    ProgramState psi = encode_operator(l);
    ctx.jumps.push_back(make_jump_step(m, psi.vec * psi.vec.adjoint(), d,
                                       scale * norm * norm * t_over_n, cfg));
  }
  for (const auto& term : spec.hamiltonian_terms)
    ctx.hams.push_back(make_ham_step(term.sigma, term.c,
                                     scale * std::abs(term.c) * t_over_n, d));

  const int kj = static_cast<int>(ctx.jumps.size());
  const int jh = static_cast<int>(ctx.hams.size());
  for (int k = kj - 1; k >= 0; --k) ctx.sequence.push_back(k);
  for (int j = jh - 1; j >= 0; --j) ctx.sequence.push_back(-1 - j);
  if (cfg.ordering == Ordering::palindromic) {
    for (int j = 0; j < jh; ++j) ctx.sequence.push_back(-1 - j);
    for (int k = 0; k < kj; ++k) ctx.sequence.push_back(k);
  }
  return ctx;
}

Matrix run_alg2(const Alg2Context& ctx, Matrix state, long long n) {
  for (long long i = 0; i < n; ++i) state = ctx.sweep(state);
  return state;
}

Matrix run_jump_iteration(const JumpStep& step, Matrix state, long long n) {
  for (long long i = 0; i < n; ++i) state = step.apply(state);
  return state;
}

JumpStep make_alg3_step(const std::vector<LinearCombTerm>& lin_spec,
                        const RunConfig& cfg, int* d_out, double* c_out) {
  if (lin_spec.empty())
    throw argument_error("alg3: linear combination must be nonempty");
  const int d = static_cast<int>(lin_spec.front().op.rows());
  Matrix l = Matrix::Zero(d, d);
  for (const auto& term : lin_spec) {
    if (!(term.c > 0.0))
      throw argument_error("alg3: coefficients must be positive");
    if (term.op.rows() != d || term.op.cols() != d)
      throw shape_error("alg3: operators must be square with equal dimension");
    if (std::abs(schatten_norm(term.op, 2) - 1.0) > 1e-8)
      throw argument_error(
          "alg3: operators must have unit Hilbert-Schmidt norm");
    l += term.c * term.op;
  }
  const double norm = schatten_norm(l, 2);
  if (norm <= 1e-12)
    throw argument_error("alg3: combined operator vanishes");
  const double c = norm * norm;
  ProgramState phi = encode_operator(l);
  const double delta = c * cfg.t / static_cast<double>(cfg.n);
  *d_out = d;
  *c_out = c;
  return make_jump_step(build_M(d), phi.vec * phi.vec.adjoint(), d, delta,
                        cfg);
}

JumpStep make_alg4_step(const PolySpec& poly, const RunConfig& cfg,
                        double* c_out) {
  PolyState ps = poly_program_state(poly);
  const double delta = ps.c * cfg.t / static_cast<double>(cfg.n);
  *c_out = ps.c;
  return make_jump_step(build_M_poly(poly.d, poly.degree),
                        ps.vec * ps.vec.adjoint(), poly.d, delta, cfg);
}

SuperOperator assemble_channel(
    int d, const std::function<Matrix(const Matrix&)>& evolve) {
  Matrix sup(static_cast<Eigen::Index>(d) * d, static_cast<Eigen::Index>(d) * d);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) {
      Matrix unit = Matrix::Zero(d, d);
      unit(i, j) = 1.0;
      sup.col(static_cast<Eigen::Index>(j) * d + i) = vectorize(evolve(unit));
    }
  }
  return SuperOperator{d, std::move(sup)};
}

void require_expectation(const RunConfig& cfg) {
  if (cfg.mode == Mode::monte_carlo)
    throw mode_error(
        "channel_of_algorithm: channel assembly requires expectation mode");
}

}  // namespace

Matrix build_M(int d) {
  if (d < 2) throw argument_error("build_M: d must be >= 2");
  const Eigen::Index dim = static_cast<Eigen::Index>(d) * d * d;
  check_entry_limit(dim, dim, "build_M");
  Vector gamma = gamma_vector(d);
  Matrix gg = gamma * gamma.adjoint();
  Matrix swap12 = kron(swap_operator(d), Matrix(Matrix::Identity(d, d)));
  Matrix proj = kron(Matrix(Matrix::Identity(d, d)), gg);
  return proj * swap12 / std::sqrt(static_cast<double>(d));
}

Matrix build_M_poly(int d, int degree) {
  if (d < 2) throw argument_error("build_M_poly: d must be >= 2");
  if (degree < 1) throw argument_error("build_M_poly: degree must be >= 1");
  double dim_check = std::pow(static_cast<double>(d), 2 * degree + 1);
  if (dim_check > static_cast<double>(1) * (1 << 30))
    throw size_error("build_M_poly: dimension exceeds limits");
  Eigen::Index dim = 1;
  for (int i = 0; i < 2 * degree + 1; ++i) dim *= d;
  check_entry_limit(dim, dim, "build_M_poly");

  Eigen::Index q_block = 1;
  for (int i = 0; i < degree; ++i) q_block *= d;

  // Contents shift one slot toward S: P^1 -> S, ..., S -> P^D. That is the
  // inverse of cycswap_operator's shift, hence the transpose.
  Matrix cyc = cycswap_operator(d, degree + 1).transpose();
  Matrix lhs = kron(cyc, Matrix(Matrix::Identity(q_block, q_block)));

  // prod_l Gamma Gamma^dag on pairs (P^l, Q^l): build in interleaved pair
  // order, then permute to the (P-block, Q-block) canon.
  Vector gamma = gamma_vector(d);
  Matrix gg = gamma * gamma.adjoint();
  Matrix interleaved = gg;
  for (int l = 1; l < degree; ++l) interleaved = kron(interleaved, gg);
  std::vector<int> dims(2 * degree, d);
  std::vector<int> perm(2 * degree);
  for (int k = 0; k < degree; ++k) {
    perm[2 * k] = k;
    perm[2 * k + 1] = degree + k;
  }
  Matrix proj_block = permute_subsystems(interleaved, dims, perm);
  Matrix proj = kron(Matrix(Matrix::Identity(d, d)), proj_block);

  const double scale = std::pow(static_cast<double>(d),
                                -0.5 * static_cast<double>(degree));
  return scale * (proj * lhs);
}

double normalization_c(const LindbladSpec& spec) {
  double c = 0.0;
  for (const auto& term : spec.hamiltonian_terms) c += std::abs(term.c);
  for (const auto& l : spec.jump_ops) {
    const double norm = schatten_norm(l, 2);
    c += norm * norm;
  }
  return c;
}

double lindblad_max_coeff(const LindbladSpec& spec) {
  double m = 0.0;
  for (const auto& term : spec.hamiltonian_terms)
    m = std::max(m, std::abs(term.c));
  for (const auto& l : spec.jump_ops) {
    const double norm = schatten_norm(l, 2);
    m = std::max(m, norm * norm);
  }
  return m;
}

DensityMatrix alg1_step_expectation(const DensityMatrix& rho,
                                    const LindbladSpec& spec, double delta,
                                    ChannelMode channel_mode) {
  if (!(delta >= 0.0))
    throw argument_error("alg1_step_expectation: delta must be >= 0");
  if (rho.d != spec.d)
    throw shape_error("alg1_step_expectation: state and spec dimensions differ");
  if (normalization_c(spec) <= 0.0)
    throw spec_error("alg1_step_expectation: normalization constant is zero");
  RunConfig cfg;
  cfg.channel_mode = channel_mode;
  Alg1Context ctx = make_alg1_context(spec, delta, cfg);
  return DensityMatrix::checked(ctx.step_expectation(rho.mat), 1e-8);
}

RunReport alg1_run(const DensityMatrix& rho, const LindbladSpec& spec,
                   const RunConfig& cfg) {
  const auto start = Clock::now();
  check_config(cfg);
  if (rho.d != spec.d)
    throw shape_error("alg1_run: state and spec dimensions differ");
  const double c = normalization_c(spec);
  if (c <= 0.0) throw spec_error("alg1_run: normalization constant is zero");
  const double delta = c * cfg.t / static_cast<double>(cfg.n);
  Alg1Context ctx = make_alg1_context(spec, delta, cfg);

  std::map<std::string, double> consumed;
  for (const auto& br : ctx.branches) consumed[br.label] = 0.0;

  Matrix state = rho.mat;
  if (cfg.mode == Mode::expectation) {
    state = run_alg1_expectation(ctx, std::move(state), cfg.n);
    for (const auto& br : ctx.branches)
      consumed[br.label] = static_cast<double>(cfg.n) * br.weight / ctx.c;
  } else {
    std::map<std::pair<int, int>, std::size_t> by_key;
    for (std::size_t b = 0; b < ctx.branches.size(); ++b)
      by_key[ctx.branches[b].sample_key] = b;
    std::mt19937_64 rng(cfg.seed);
    for (long long i = 0; i < cfg.n; ++i) {
      OmegaSample s = sample_omega(spec, rng);
      const std::size_t b = by_key.at({s.branch, s.index});
      state = ctx.branch_apply(b, state, true);
      consumed[ctx.branches[b].label] += 1.0;
    }
  }
  return RunReport{DensityMatrix::checked(std::move(state), 1e-8),
                   std::move(consumed), std::nullopt, seconds_since(start)};
}

RunReport alg1_run_average(const DensityMatrix& rho, const LindbladSpec& spec,
                           const RunConfig& cfg, long long trajectories) {
  const auto start = Clock::now();
  check_config(cfg);
  if (trajectories < 1)
    throw argument_error("alg1_run_average: trajectories must be >= 1");
  if (rho.d != spec.d)
    throw shape_error("alg1_run_average: state and spec dimensions differ");
  const double c = normalization_c(spec);
  if (c <= 0.0)
    throw spec_error("alg1_run_average: normalization constant is zero");
  const double delta = c * cfg.t / static_cast<double>(cfg.n);
  Alg1Context ctx = make_alg1_context(spec, delta, cfg);

  std::map<std::string, double> consumed;
  std::map<std::pair<int, int>, std::size_t> by_key;
  for (std::size_t b = 0; b < ctx.branches.size(); ++b) {
    consumed[ctx.branches[b].label] = 0.0;
    by_key[ctx.branches[b].sample_key] = b;
  }

  std::mt19937_64 rng(cfg.seed);
  Matrix sum = Matrix::Zero(rho.mat.rows(), rho.mat.cols());
  for (long long traj = 0; traj < trajectories; ++traj) {
    Matrix state = rho.mat;
    for (long long i = 0; i < cfg.n; ++i) {
      OmegaSample s = sample_omega(spec, rng);
      const std::size_t b = by_key.at({s.branch, s.index});
      state = ctx.branch_apply(b, state, true);
      consumed[ctx.branches[b].label] += 1.0;
    }
    sum += state;
  }
  sum /= static_cast<double>(trajectories);
  return RunReport{DensityMatrix::checked(std::move(sum), 1e-8),
                   std::move(consumed), std::nullopt, seconds_since(start)};
}

RunReport alg2_run(const DensityMatrix& rho, const LindbladSpec& spec,
                   const RunConfig& cfg) {
  const auto start = Clock::now();
  check_config(cfg);
  if (rho.d != spec.d)
    throw shape_error("alg2_run: state and spec dimensions differ");
  if (spec.hamiltonian_terms.empty() && spec.jump_ops.empty())
    throw spec_error("alg2_run: spec has no terms");
  Alg2Context ctx = make_alg2_context(spec, cfg);
  Matrix state = run_alg2(ctx, rho.mat, cfg.n);

  const double copies =
      cfg.ordering == Ordering::palindromic ? 2.0 : 1.0;
  std::map<std::string, double> consumed;
  for (std::size_t j = 0; j < spec.hamiltonian_terms.size(); ++j)
    consumed["sigma_" + std::to_string(j + 1)] =
        copies * static_cast<double>(cfg.n);
  for (std::size_t k = 0; k < spec.jump_ops.size(); ++k)
    consumed["psi_" + std::to_string(k + 1)] =
        copies * static_cast<double>(cfg.n);
  return RunReport{DensityMatrix::checked(std::move(state), 1e-8),
                   std::move(consumed), std::nullopt, seconds_since(start)};
}

RunReport alg3_run(const DensityMatrix& rho,
                   const std::vector<LinearCombTerm>& lin_spec,
                   const RunConfig& cfg) {
  const auto start = Clock::now();
  check_config(cfg);
  int d = 0;
  double c = 0.0;
  JumpStep step = make_alg3_step(lin_spec, cfg, &d, &c);
  if (rho.d != d)
    throw shape_error("alg3_run: state and spec dimensions differ");
  Matrix state = run_jump_iteration(step, rho.mat, cfg.n);
  std::map<std::string, double> consumed{
      {"phi", static_cast<double>(cfg.n)}};
  return RunReport{DensityMatrix::checked(std::move(state), 1e-8),
                   std::move(consumed), std::nullopt, seconds_since(start)};
}

RunReport alg4_run(const DensityMatrix& rho, const PolySpec& poly,
                   const RunConfig& cfg) {
  const auto start = Clock::now();
  check_config(cfg);
  if (rho.d != poly.d)
    throw shape_error("alg4_run: state and spec dimensions differ");
  double c = 0.0;
  JumpStep step = make_alg4_step(poly, cfg, &c);
  Matrix state = run_jump_iteration(step, rho.mat, cfg.n);
  std::map<std::string, double> consumed{
      {"phi", static_cast<double>(cfg.n)}};
  return RunReport{DensityMatrix::checked(std::move(state), 1e-8),
                   std::move(consumed), std::nullopt, seconds_since(start)};
}

PolySpec PolySpec::checked(int d, std::vector<Matrix> ops,
                           std::vector<PolyTerm> terms, double tol) {
  if (d < 2) throw spec_error("poly spec: d must be >= 2");
  if (ops.empty()) throw spec_error("poly spec: no operators");
  if (ops.size() > 9)
    throw spec_error("poly spec: alphabets beyond 9 operators not supported");
  for (const Matrix& op : ops) {
    if (op.rows() != d || op.cols() != d)
      throw shape_error("poly spec: operator dimension mismatch");
    if (std::abs(schatten_norm(op, 2) - 1.0) > tol)
      throw spec_error(
          "poly spec: operators must have unit Hilbert-Schmidt norm");
  }
  if (terms.empty()) throw spec_error("poly spec: empty string set");
  int degree = 0;
  for (const auto& term : terms) {
    if (!(term.c > 0.0))
      throw spec_error("poly spec: coefficients must be positive");
    if (term.s.empty()) throw spec_error("poly spec: empty string");
    for (char ch : term.s)
      if (ch < '1' || ch >= '1' + static_cast<int>(ops.size()))
        throw spec_error("poly spec: string character out of alphabet");
    degree = std::max(degree, static_cast<int>(term.s.size()));
  }
  return PolySpec{d, degree, std::move(ops), std::move(terms)};
}

PolyState poly_program_state(const PolySpec& poly) {
  const int d = poly.d;
  const int degree = poly.degree;
  const Vector phi_pad = encode_operator(Matrix::Identity(d, d)).vec;

  std::vector<int> dims(2 * degree, d);
  std::vector<int> perm(2 * degree);
  for (int k = 0; k < degree; ++k) {
    perm[2 * k] = k;
    perm[2 * k + 1] = degree + k;
  }

  Eigen::Index total = 1;
  for (int i = 0; i < 2 * degree; ++i) total *= d;
  Vector sum = Vector::Zero(total);
  for (const auto& term : poly.terms) {
    Vector phi_s(1);
    phi_s(0) = 1.0;
    for (int l = 0; l < degree; ++l) {
      const Vector& pair_vec =
          l < static_cast<int>(term.s.size())
              ? encode_operator(poly.ops[term.s[l] - '1']).vec
              : phi_pad;
      phi_s = kron(phi_s, pair_vec);
    }
    sum += term.c * permute_subsystems(phi_s, dims, perm);
  }
  const double norm = sum.norm();
  if (norm <= 1e-10)
    throw argument_error("poly_program_state: combined state vanishes");
  return PolyState{sum / norm, norm * norm};
}

Matrix poly_effective_operator(const PolySpec& poly) {
  const int d = poly.d;
  Matrix l = Matrix::Zero(d, d);
  for (const auto& term : poly.terms) {
    Matrix t = Matrix::Identity(d, d);
    for (char ch : term.s) t = t * poly.ops[ch - '1'];
    const double pad = std::pow(
        static_cast<double>(d),
        0.5 * (static_cast<double>(term.s.size()) - poly.degree));
    l += term.c * pad * t;
  }
  return l;
}

SuperOperator channel_of_algorithm(const LindbladSpec& spec,
                                   const RunConfig& cfg, int algorithm) {
  require_expectation(cfg);
  check_config(cfg);
  if (algorithm == 1) {
    const double c = normalization_c(spec);
    if (c <= 0.0)
      throw spec_error("channel_of_algorithm: normalization constant is zero");
    const double delta = c * cfg.t / static_cast<double>(cfg.n);
    Alg1Context ctx = make_alg1_context(spec, delta, cfg);
    return assemble_channel(spec.d, [&](const Matrix& unit) {
      return run_alg1_expectation(ctx, unit, cfg.n);
    });
  }
  if (algorithm == 2) {
    if (spec.hamiltonian_terms.empty() && spec.jump_ops.empty())
      throw spec_error("channel_of_algorithm: spec has no terms");
    Alg2Context ctx = make_alg2_context(spec, cfg);
    return assemble_channel(spec.d, [&](const Matrix& unit) {
      return run_alg2(ctx, unit, cfg.n);
    });
  }
  throw argument_error(
      "channel_of_algorithm: a Lindblad spec drives algorithm 1 or 2");
}

SuperOperator channel_of_algorithm(const std::vector<LinearCombTerm>& lin_spec,
                                   const RunConfig& cfg) {
  require_expectation(cfg);
  check_config(cfg);
  int d = 0;
  double c = 0.0;
  JumpStep step = make_alg3_step(lin_spec, cfg, &d, &c);
  return assemble_channel(d, [&](const Matrix& unit) {
    return run_jump_iteration(step, unit, cfg.n);
  });
}

SuperOperator channel_of_algorithm(const PolySpec& poly,
                                   const RunConfig& cfg) {
  require_expectation(cfg);
  check_config(cfg);
  double c = 0.0;
  JumpStep step = make_alg4_step(poly, cfg, &c);
  return assemble_channel(poly.d, [&](const Matrix& unit) {
    return run_jump_iteration(step, unit, cfg.n);
  });
}

long long copies_needed(double c, double t, double eps) {
  if (!(eps > 0.0 && eps < 1.0))
    throw argument_error("copies_needed: eps must lie in (0, 1)");
  if (!(c > 0.0) || !(t > 0.0))
    throw argument_error("copies_needed: c and t must be positive");
  const double x = c * c * t * t / eps;
  if (x > 9e18) throw argument_error("copies_needed: count overflows");
  return static_cast<long long>(std::ceil(x * (1.0 - 1e-12)));
}

CopiesReport copies_needed(const LindbladSpec& spec, double t, double eps) {
  const double c = normalization_c(spec);
  if (c <= 0.0) throw spec_error("copies_needed: spec has no terms");
  CopiesReport rep;
  rep.n = copies_needed(c, t, eps);
  const double n = static_cast<double>(rep.n);
  for (std::size_t j = 0; j < spec.hamiltonian_terms.size(); ++j)
    rep.per_state["sigma_" + std::to_string(j + 1)] =
        std::abs(spec.hamiltonian_terms[j].c) / c * n;
  for (std::size_t k = 0; k < spec.jump_ops.size(); ++k) {
    const double norm = schatten_norm(spec.jump_ops[k], 2);
    rep.per_state["psi_" + std::to_string(k + 1)] = norm * norm / c * n;
  }
  return rep;
}

}  // namespace wml
