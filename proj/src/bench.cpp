#include "wml/bench.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "wml/lcu.hpp"
#include "wml/program_state.hpp"
#include "wml/tensor.hpp"
#include "wml/verify.hpp"

namespace wml {
namespace {

using nlohmann::json;

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_e(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

Complex parse_complex(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw spec_error("config: complex entries must be [re, im] pairs");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

Matrix parse_matrix(const json& j) {
  if (!j.is_array() || j.empty())
    throw spec_error("config: matrices must be nonempty nested arrays");
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
  if (cols == 0) throw spec_error("config: matrix rows must be nonempty");
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<Eigen::Index>(j[r].size()) != cols)
      throw spec_error("config: matrix rows have unequal lengths");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = parse_complex(j[r][c]);
  }
  return m;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

SpecVariant parse_spec(const json& j) {
  SpecVariant out;
  const std::string type = j.at("type").get<std::string>();
  if (type == "lindblad") {
    out.kind = SpecKind::lindblad;
    const int d = j.at("d").get<int>();
    std::vector<HamiltonianTerm> hams;
    if (j.contains("hamiltonian"))
      for (const json& term : j.at("hamiltonian"))
        hams.push_back({term.at("c").get<double>(),
                        parse_matrix(term.at("sigma"))});
    std::vector<Matrix> jumps;
    if (j.contains("jumps"))
      for (const json& l : j.at("jumps")) jumps.push_back(parse_matrix(l));
    out.lindblad = LindbladSpec::checked(d, std::move(hams), std::move(jumps));
    out.d = d;
    return out;
  }
  if (type == "linear") {
    out.kind = SpecKind::linear;
    for (const json& term : j.at("terms")) {
      const double c = term.at("c").get<double>();
      Matrix op = parse_matrix(term.at("op"));
      if (!(c > 0.0))
        throw spec_error("config: linear coefficients must be positive");
      if (op.rows() != op.cols())
        throw spec_error("config: linear operators must be square");
      if (std::abs(schatten_norm(op, 2) - 1.0) > 1e-8)
        throw spec_error(
            "config: linear operators must have unit Hilbert-Schmidt norm");
      out.linear.push_back({c, std::move(op)});
    }
    if (out.linear.empty()) throw spec_error("config: no linear terms");
    out.d = static_cast<int>(out.linear.front().op.rows());
    for (const auto& term : out.linear)
      if (term.op.rows() != out.d)
        throw spec_error("config: linear operator dimensions differ");
    return out;
  }
  if (type == "poly") {
    out.kind = SpecKind::poly;
    const int d = j.at("d").get<int>();
    std::vector<Matrix> ops;
    for (const json& op : j.at("ops")) ops.push_back(parse_matrix(op));
    std::vector<PolyTerm> terms;
    for (const json& term : j.at("terms"))
      terms.push_back(
          {term.at("s").get<std::string>(), term.at("c").get<double>()});
    out.poly = PolySpec::checked(d, std::move(ops), std::move(terms));
    out.d = d;
    return out;
  }
  throw spec_error("config: spec type must be lindblad, linear, or poly");
}

int default_algorithm(SpecKind kind) {
  switch (kind) {
    case SpecKind::lindblad:
      return 1;
    case SpecKind::linear:
      return 3;
    case SpecKind::poly:
      return 4;
  }
  return 1;
}

ExperimentConfig parse_config_inner(const json& j) {
  ExperimentConfig cfg;
  cfg.spec = parse_spec(j.at("spec"));
  cfg.algorithm = j.contains("algorithm")
                      ? j.at("algorithm").get<int>()
                      : default_algorithm(cfg.spec.kind);
  const bool consistent =
      (cfg.spec.kind == SpecKind::lindblad &&
       (cfg.algorithm == 1 || cfg.algorithm == 2)) ||
      (cfg.spec.kind == SpecKind::linear && cfg.algorithm == 3) ||
      (cfg.spec.kind == SpecKind::poly && cfg.algorithm == 4);
  if (!consistent)
    throw spec_error(
        "config: algorithm does not match the spec type "
        "(lindblad: 1 or 2, linear: 3, poly: 4)");

  if (j.contains("t")) cfg.t = j.at("t").get<double>();
  if (!(cfg.t >= 0.0)) throw spec_error("config: t must be >= 0");
  if (j.contains("n")) cfg.n = j.at("n").get<long long>();
  if (j.contains("n_values")) {
    long long prev = 0;
    for (const json& v : j.at("n_values")) {
      const long long n = v.get<long long>();
      if (n < 1 || n <= prev)
        throw spec_error(
            "config: n_values must be strictly increasing and >= 1");
      cfg.n_values.push_back(n);
      prev = n;
    }
    if (!j.contains("n")) cfg.n = cfg.n_values.front();
  }
  if (cfg.n < 1) throw spec_error("config: n must be >= 1");

  if (j.contains("mode")) {
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "expectation")
      cfg.mode = Mode::expectation;
    else if (mode == "monte-carlo" || mode == "monte_carlo")
      cfg.mode = Mode::monte_carlo;
    else
      throw spec_error("config: mode must be expectation or monte-carlo");
  }
  if (j.contains("ordering")) {
    const std::string ord = j.at("ordering").get<std::string>();
    if (ord == "forward")
      cfg.ordering = Ordering::forward;
    else if (ord == "palindromic")
      cfg.ordering = Ordering::palindromic;
    else
      throw spec_error("config: ordering must be forward or palindromic");
  }
  if (j.contains("channel_mode")) {
    const std::string cm = j.at("channel_mode").get<std::string>();
    if (cm == "automatic")
      cfg.channel_mode = ChannelMode::automatic;
    else if (cm == "dense")
      cfg.channel_mode = ChannelMode::dense;
    else if (cm == "action")
      cfg.channel_mode = ChannelMode::action;
    else
      throw spec_error(
          "config: channel_mode must be automatic, dense, or action");
  }
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("output_path"))
    cfg.output_path = j.at("output_path").get<std::string>();

  if (j.contains("rho"))
    cfg.rho = DensityMatrix::checked(parse_matrix(j.at("rho"))).mat;
  else
    cfg.rho = Matrix::Identity(cfg.spec.d, cfg.spec.d) /
              static_cast<double>(cfg.spec.d);
  if (cfg.rho.rows() != cfg.spec.d)
    throw spec_error("config: rho dimension does not match the spec");
  return cfg;
}

const char* kind_name(SpecKind kind) {
  switch (kind) {
    case SpecKind::lindblad:
      return "lindblad";
    case SpecKind::linear:
      return "linear";
    case SpecKind::poly:
      return "poly";
  }
  return "lindblad";
}

const char* ordering_name(Ordering o) {
  return o == Ordering::forward ? "forward" : "palindromic";
}

RunConfig make_run_config(const ExperimentConfig& cfg, long long n,
                          Mode mode) {
  RunConfig rc;
  rc.t = cfg.t;
  rc.n = n;
  rc.mode = mode;
  rc.seed = cfg.seed;
  rc.ordering = cfg.ordering;
  rc.channel_mode = cfg.channel_mode;
  return rc;
}

RunReport run_algorithm(const ExperimentConfig& cfg, const RunConfig& rc) {
  DensityMatrix rho = DensityMatrix::checked(cfg.rho);
  switch (cfg.algorithm) {
    case 1:
      return alg1_run(rho, cfg.spec.lindblad, rc);
    case 2:
      return alg2_run(rho, cfg.spec.lindblad, rc);
    case 3:
      return alg3_run(rho, cfg.spec.linear, rc);
    default:
      return alg4_run(rho, cfg.spec.poly, rc);
  }
}

SuperOperator assembled_channel(const ExperimentConfig& cfg,
                                const RunConfig& rc) {
  switch (cfg.algorithm) {
    case 1:
    case 2:
      return channel_of_algorithm(cfg.spec.lindblad, rc, cfg.algorithm);
    case 3:
      return channel_of_algorithm(cfg.spec.linear, rc);
    default:
      return channel_of_algorithm(cfg.spec.poly, rc);
  }
}

// Exact e^{Lt} for the generator the configured algorithm targets: the spec
// itself, the combined jump sum c_k L_k, or the effective product operator.
SuperOperator oracle_channel(const ExperimentConfig& cfg, double tol) {
  switch (cfg.spec.kind) {
    case SpecKind::lindblad:
      return exact_channel(cfg.spec.lindblad, cfg.t, tol);
    case SpecKind::linear: {
      Matrix l = Matrix::Zero(cfg.spec.d, cfg.spec.d);
      for (const auto& term : cfg.spec.linear) l += term.c * term.op;
      return exact_channel(LindbladSpec::checked(cfg.spec.d, {}, {l}), cfg.t,
                           tol);
    }
    case SpecKind::poly: {
      Matrix l = poly_effective_operator(cfg.spec.poly);
      return exact_channel(LindbladSpec::checked(cfg.spec.d, {}, {l}), cfg.t,
                           tol);
    }
  }
  throw spec_error("config: unknown spec kind");
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  try {
    return parse_config_inner(json::parse(json_text));
  } catch (const error&) {
    throw;
  } catch (const std::exception& e) {
    throw spec_error(std::string("config: ") + e.what());
  }
}

std::string run_simulate(const ExperimentConfig& cfg, double tol) {
  RunConfig rc = make_run_config(cfg, cfg.n, cfg.mode);
  RunReport report = run_algorithm(cfg, rc);
  SuperOperator oracle = oracle_channel(cfg, tol);
  DensityMatrix rho = DensityMatrix::checked(cfg.rho);
  Matrix oracle_state = apply_superop(oracle, rho).mat;

  json j;
  j["algorithm"] = cfg.algorithm;
  j["spec_type"] = kind_name(cfg.spec.kind);
  j["d"] = cfg.spec.d;
  j["t"] = cfg.t;
  j["n"] = cfg.n;
  j["mode"] = cfg.mode == Mode::expectation ? "expectation" : "monte-carlo";
  j["ordering"] = ordering_name(cfg.ordering);
  j["seed"] = cfg.seed;
  j["consumed"] = report.consumed;
  if (cfg.mode == Mode::expectation) {
    RunConfig chan_rc = make_run_config(cfg, cfg.n, Mode::expectation);
    j["choi_proxy_error"] = choi_trace_distance(
        choi_of(assembled_channel(cfg, chan_rc)), choi_of(oracle));
  } else {
    j["choi_proxy_error"] = nullptr;
  }
  j["state_error_vs_oracle"] =
      0.5 * schatten_norm(report.final.mat - oracle_state, 1);
  j["final"] = matrix_to_json(report.final.mat);
  return j.dump(2) + "\n";
}

std::string run_sweep(const ExperimentConfig& cfg, double tol, int threads) {
  if (cfg.n_values.size() < 4)
    throw spec_error("sweep: need at least 4 n_values");
  std::vector<Ordering> orderings =
      cfg.algorithm == 2
          ? std::vector<Ordering>{Ordering::forward, Ordering::palindromic}
          : std::vector<Ordering>{cfg.ordering};

  struct Point {
    long long n = 0;
    Ordering ordering = Ordering::forward;
  };
  std::vector<Point> points;
  for (long long n : cfg.n_values)
    for (Ordering o : orderings) points.push_back({n, o});

  ChoiState oracle = choi_of(oracle_channel(cfg, tol));

  struct Row {
    double error = 0.0;
    double consumed_total = 0.0;
  };
  std::vector<Row> rows(points.size());
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t i = next.fetch_add(1); i < points.size();
         i = next.fetch_add(1)) {
      ExperimentConfig local = cfg;
      local.ordering = points[i].ordering;
      RunConfig rc = make_run_config(local, points[i].n, Mode::expectation);
      rows[i].error =
          choi_trace_distance(choi_of(assembled_channel(local, rc)), oracle);
      RunReport rep = run_algorithm(local, rc);
      for (const auto& [label, count] : rep.consumed)
        rows[i].consumed_total += count;
    }
  };
  const int workers =
      std::max(1, std::min<int>(threads, static_cast<int>(points.size())));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& th : pool) th.join();
  }

  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << "n,ordering,choi_proxy_error,consumed_total\n";
  for (std::size_t i = 0; i < points.size(); ++i)
    os << points[i].n << "," << ordering_name(points[i].ordering) << ","
       << fmt_e(rows[i].error) << "," << fmt_g(rows[i].consumed_total)
       << "\n";

  for (Ordering o : orderings) {
    std::vector<double> xs, ys;
    bool fittable = true;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (points[i].ordering != o) continue;
      xs.push_back(static_cast<double>(points[i].n));
      ys.push_back(rows[i].error);
      fittable = fittable && rows[i].error > 0.0;
    }
    os << "# slope," << ordering_name(o) << ","
       << (fittable ? fmt_e(fit_loglog_slope(xs, ys)) : "nan") << "\n";
  }
  return os.str();
}

std::vector<TomoRow> compare_tomography(const std::vector<int>& d_values,
                                        double delta, double t) {
  if (!(delta > 0.0 && delta < 1.0))
    throw argument_error("compare_tomography: delta must lie in (0, 1)");
  if (!(t > 0.0)) throw argument_error("compare_tomography: t must be > 0");
  if (d_values.empty())
    throw argument_error("compare_tomography: no dimensions given");
  std::vector<TomoRow> rows;
  const double wml = static_cast<double>(copies_needed(1.0, t, delta * t));
  for (int d : d_values) {
    if (d < 2) throw argument_error("compare_tomography: each d must be >= 2");
    const double dd = static_cast<double>(d) * d;
    const double bound =
        dd * (1.0 - delta) * (1.0 - delta) / (delta * delta * std::log(dd / delta));
    rows.push_back({d, bound, wml, bound / wml});
  }
  return rows;
}

std::string compare_tomography_csv(const std::vector<int>& d_values,
                                   double delta, double t) {
  std::vector<TomoRow> rows = compare_tomography(d_values, delta, t);
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << "# tomography lower bound d^2 (1-delta)^2 / (delta^2 ln(d^2/delta)), "
        "natural log, constant 1\n";
  os << "# wml copies ceil(c^2 t^2 / eps), c = 1, eps = delta * t\n";
  os << "# delta," << fmt_g(delta) << ",t," << fmt_g(t) << "\n";
  os << "d,tomography_lower_bound,wml_copies,ratio\n";
  for (const TomoRow& row : rows)
    os << row.d << "," << fmt_e(row.tomography_lower_bound) << ","
       << fmt_g(row.wml_copies) << "," << fmt_e(row.ratio) << "\n";
  return os.str();
}

std::string run_prep_state(const ExperimentConfig& cfg) {
  LcuReport rep;
  Vector direct;
  if (cfg.spec.kind == SpecKind::linear) {
    std::vector<LcuTerm> terms;
    direct = Vector::Zero(static_cast<Eigen::Index>(cfg.spec.d) * cfg.spec.d);
    for (const auto& term : cfg.spec.linear) {
      terms.push_back({term.c, encode_operator(term.op)});
      direct += term.c * terms.back().psi.vec;
    }
    rep = lcu_prepare_linear(terms);
  } else if (cfg.spec.kind == SpecKind::poly) {
    rep = lcu_prepare_poly(cfg.spec.poly);
    direct = poly_program_state(cfg.spec.poly).vec;
  } else {
    throw spec_error("prep-state: requires a linear or poly spec");
  }
  direct /= direct.norm();
  const double fidelity = std::abs(rep.prepared.amps.dot(direct));

  json j;
  j["spec_type"] = kind_name(cfg.spec.kind);
  j["d"] = cfg.spec.d;
  j["success_prob"] = rep.success_prob;
  j["aa_rounds"] = rep.aa_rounds;
  j["queries"] = rep.queries;
  j["tally"] = {{"select_u", rep.tally.select_u},
                {"select_u_dag", rep.tally.select_u_dag},
                {"u_a", rep.tally.u_a},
                {"u_a_dag", rep.tally.u_a_dag}};
  j["post_aa_success_prob"] = rep.post_aa_success_prob;
  j["residual_infidelity"] = rep.residual_infidelity;
  j["fidelity_vs_direct"] = fidelity;
  j["prepared_dims"] = rep.prepared.dims;
  json amps = json::array();
  for (Eigen::Index i = 0; i < rep.prepared.amps.size(); ++i)
    amps.push_back(json::array(
        {rep.prepared.amps(i).real(), rep.prepared.amps(i).imag()}));
  j["prepared"] = std::move(amps);
  return j.dump(2) + "\n";
}

std::string run_verify_lemmas(std::uint64_t seed, int trials, bool corrupt_m,
                              bool* all_pass) {
  bool ok = true;
  std::ostringstream os;
  os.imbue(std::locale::classic());
  auto emit = [&](const std::vector<CheckResult>& results) {
    for (const CheckResult& r : results) {
      ok = ok && r.pass;
      os << (r.pass ? "[PASS] " : "[FAIL] ") << r.name
         << " max_residual=" << fmt_e(r.max_residual);
      if (!r.note.empty()) os << " (" << r.note << ")";
      os << "\n";
    }
  };
  emit(verify_program_state_suite(seed, trials));
  emit(verify_engine_suite(seed, trials, corrupt_m));
  os << (ok ? "all checks passed\n" : "verification failures present\n");
  if (all_pass) *all_pass = ok;
  return os.str();
}

}  // namespace wml
