#include "vipclip/cli.hpp"

#include "vipclip/config.hpp"
#include "vipclip/experiments.hpp"
#include "vipclip/io.hpp"
#include "vipclip/tails.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>

namespace vipclip::cli {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kZooNames = {"strongly_monotone", "bilinear", "weak_minty",
                                            "star_cocoercive"};

struct ZooArgs {
  std::string name;
  std::int64_t d = -1;
  double mu = 1.0;
  double big_l = 2.0;
  double s = 1.0;
  double eps = 0.1;
  double ell = 1.0;
  double min_eig = 0.1;
  std::uint64_t seed = 0;
  bool canonical = false;
  bool json = false;
};

std::string constant_text(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string("none");
}

int cmd_zoo_list(std::ostream& out) {
  for (const auto& name : kZooNames) out << name << '\n';
  return exit_code::kPass;
}

int cmd_zoo_describe(const ZooArgs& a, std::ostream& out, std::ostream& err) {
  const Placement placement = a.canonical ? Placement::Canonical : Placement::Randomized;
  std::vector<std::pair<std::string, std::string>> params;
  std::optional<AffineProblem> problem;
  if (a.name == "strongly_monotone") {
    const std::int64_t d = a.d < 0 ? 2 : a.d;
    problem = make_strongly_monotone(d, a.mu, a.big_l, a.seed, placement);
    params = {{"d", std::to_string(d)}, {"mu", format_double(a.mu)},
              {"L", format_double(a.big_l)}, {"seed", std::to_string(a.seed)}};
  } else if (a.name == "bilinear") {
    const std::int64_t d = a.d < 0 ? 1 : a.d;
    problem = make_bilinear(d, a.s);
    params = {{"d", std::to_string(d)}, {"s", format_double(a.s)}};
  } else if (a.name == "weak_minty") {
    problem = make_weak_minty(a.eps);
    params = {{"eps", format_double(a.eps)}};
  } else if (a.name == "star_cocoercive") {
    const std::int64_t d = a.d < 0 ? 4 : a.d;
    problem = make_star_cocoercive(d, a.ell, a.min_eig, a.seed, placement);
    params = {{"d", std::to_string(d)}, {"ell", format_double(a.ell)},
              {"min_eig", format_double(a.min_eig)}, {"seed", std::to_string(a.seed)}};
  } else {
    err << "error: unknown zoo problem '" << a.name << "' (see 'zoo list')\n";
    return exit_code::kInvalidInput;
  }
  const Constants& k = problem->constants();
  if (a.json) {
    Json p = Json::object();
    for (const auto& [key, value] : params) p[key] = value;
    out << Json{{"name", a.name}, {"params", p}, {"problem", problem_to_json(*problem)}}.dump(2)
        << '\n';
    return exit_code::kPass;
  }
  out << "name = " << a.name << '\n';
  for (const auto& [key, value] : params) out << "param " << key << " = " << value << '\n';
  out << "dim = " << problem->dimension() << '\n';
  out << "L = " << format_double(k.lipschitz) << '\n';
  out << "mu = " << format_double(k.qsm_mu) << '\n';
  out << "ell = " << constant_text(k.sc_ell) << '\n';
  out << "rho = " << constant_text(k.snc_rho) << '\n';
  return exit_code::kPass;
}

fs::path output_dir(const RunConfig& cfg, const std::string& override_dir) {
  const fs::path dir = override_dir.empty() ? fs::path(cfg.output.dir) : fs::path(override_dir);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path.string() + "'");
  f << text;
}

template <class Writer>
void write_with(const fs::path& path, Writer writer) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path.string() + "'");
  writer(f);
}

void print_report(const ExperimentReport& r, std::ostream& out) {
  out << "method = " << to_string(r.method) << '\n';
  out << "case = " << to_string(schedule_case(r.schedule)) << '\n';
  out << "metric = " << to_string(r.metric) << '\n';
  out << "n_seeds = " << r.per_seed_metric.size() << '\n';
  out << "R = " << format_double(r.R) << '\n';
  out << "beta = " << format_double(r.beta) << '\n';
  if (r.bound) out << "bound = " << format_double(*r.bound) << '\n';
  if (r.success_fraction) out << "success_fraction = " << format_double(*r.success_fraction) << '\n';
  for (const auto& [q, v] : r.quantiles) {
    out << "quantile " << format_double(q) << " = " << format_double(v) << '\n';
  }
  out << "n_diverged = " << r.n_diverged << '\n';
  out << "oracle_calls_per_seed = " << r.planned_oracle_calls << '\n';
  if (r.gap_unconverged > 0) out << "gap_unconverged = " << r.gap_unconverged << '\n';
}

ExperimentReport run_and_write(const RunConfig& cfg, const std::string& out_override,
                               std::ostream& out) {
  const ExperimentSpec spec = build_experiment_spec(cfg);
  const ExperimentReport report = run_experiment(spec);
  const fs::path dir = output_dir(cfg, out_override);
  Json j = report_to_json(report);
  j["problem"] = problem_to_json(spec.problem);
  j["noise"] = noise_to_json(spec.noise);
  j["x0"] = vector_to_json(spec.x0);
  write_text(dir / "report.json", j.dump(2) + "\n");
  write_with(dir / "per_seed.csv", [&](std::ostream& f) { write_per_seed_csv(f, report); });
  if (cfg.output.emit_trajectory) {
    write_with(dir / "trajectory.csv", [&](std::ostream& f) { write_trajectory_csv(f, report); });
  }
  print_report(report, out);
  out << "output = " << dir.string() << '\n';
  return report;
}

int cmd_run(const std::string& path, const std::string& out_dir, std::ostream& out) {
  const RunConfig cfg = load_config(path);
  const ExperimentReport report = run_and_write(cfg, out_dir, out);
  if (report.n_diverged == static_cast<std::int64_t>(report.per_seed_metric.size())) {
    out << "all seeds diverged\n";
    return exit_code::kDiverged;
  }
  return exit_code::kPass;
}

int cmd_verify(const std::string& path, const std::string& out_dir, std::ostream& out,
               std::ostream& err) {
  const RunConfig cfg = load_config(path);
  const ExperimentReport report = run_and_write(cfg, out_dir, out);
  if (!report.success_fraction) {
    err << "error: the configured method and schedule carry no theoretical bound to verify\n";
    return exit_code::kInvalidInput;
  }
  const bool pass = meets_confidence(*report.success_fraction, report.beta);
  out << "verdict = " << (pass ? "PASS" : "FAIL") << " (success_fraction "
      << format_double(*report.success_fraction) << (pass ? " >= " : " < ") << "1 - beta = "
      << format_double(1.0 - report.beta) << ")\n";
  return pass ? exit_code::kPass : exit_code::kVerificationFailure;
}

Vector point_or_solution(const std::optional<std::vector<double>>& p, const AffineProblem& problem,
                         const char* what) {
  if (!p) return problem.solution();
  require_dim(static_cast<Eigen::Index>(p->size()), problem.dimension(), what);
  return Eigen::Map<const Vector>(p->data(), problem.dimension());
}

int cmd_tails(const std::string& path, const std::string& out_dir, std::ostream& out) {
  const RunConfig cfg = load_config(path);
  if (!cfg.tails) throw ConfigError("config: the tails command needs a 'tails' section");
  const TailsConfig& t = *cfg.tails;
  const AffineProblem problem = build_problem(cfg.problem, cfg.base_dir);
  const NoiseModel noise = build_noise(cfg.noise);
  const Vector x = point_or_solution(t.at, problem, "tails.at");
  const std::vector<double> samples = noise_norm_samples(problem, noise, x, t.n, t.m, t.seed);
  const TailReport report = tail_report(samples);
  const Histogram hist = histogram(samples, t.n_bins);
  const fs::path dir = output_dir(cfg, out_dir);
  Json j = tail_report_to_json(report);
  j["m"] = t.m;
  j["seed"] = t.seed;
  j["x"] = vector_to_json(x);
  j["noise"] = noise_to_json(noise);
  j["histogram"] = histogram_to_json(hist);
  write_text(dir / "tails.json", j.dump(2) + "\n");
  write_with(dir / "hist.csv", [&](std::ostream& f) { write_histogram_csv(f, hist); });
  out << "n = " << report.n << '\n';
  out << "q1 = " << format_double(report.q1) << '\n';
  out << "q2 = " << format_double(report.q2) << '\n';
  out << "q3 = " << format_double(report.q3) << '\n';
  out << "p_mr = " << format_double(report.p_mr) << '\n';
  out << "p_er = " << format_double(report.p_er) << '\n';
  out << "rho_mr = " << format_double(report.rho_mr) << '\n';
  out << "rho_er = " << format_double(report.rho_er) << '\n';
  out << "output = " << dir.string() << '\n';
  return exit_code::kPass;
}

int cmd_estimator_check(const std::string& path, const std::string& out_dir, std::ostream& out) {
  const RunConfig cfg = load_config(path);
  if (!cfg.estimator) throw ConfigError("config: estimator-check needs an 'estimator' section");
  const EstimatorConfig& e = *cfg.estimator;
  const AffineProblem problem = build_problem(cfg.problem, cfg.base_dir);
  const NoiseModel noise = build_noise(cfg.noise);
  const Vector x = point_or_solution(e.x, problem, "estimator.x");
  const EstimatorStats s = estimator_stats(problem, noise, x, e.m, e.lambda, e.n_trials, e.seed);

  const double dev_ceiling = 2.0 * e.lambda * (1.0 + 1e-9);
  const double bias_ceiling = 4.0 * s.sigma_eff_sq / e.lambda;
  const double bias_margin = 3.0 * s.bias_standard_error;
  const double second_ceiling = 18.0 * s.sigma_eff_sq;
  const bool dev_ok = s.max_dev <= dev_ceiling;
  const bool bias_ok = s.bias_norm <= bias_ceiling + bias_margin;
  const bool second_ok = s.second_moment <= second_ceiling;

  const fs::path dir = output_dir(cfg, out_dir);
  Json j = estimator_stats_to_json(s);
  j["m"] = e.m;
  j["x"] = vector_to_json(x);
  j["noise"] = noise_to_json(noise);
  j["checks"] = {
      {"max_dev", {{"value", s.max_dev}, {"ceiling", dev_ceiling}, {"pass", dev_ok}}},
      {"bias_norm",
       {{"value", s.bias_norm}, {"ceiling", bias_ceiling}, {"mc_margin", bias_margin}, {"pass", bias_ok}}},
      {"second_moment", {{"value", s.second_moment}, {"ceiling", second_ceiling}, {"pass", second_ok}}}};
  write_text(dir / "estimator.json", j.dump(2) + "\n");

  const auto line = [&](const char* name, double v, double ceiling, bool ok) {
    out << name << " = " << format_double(v) << " <= " << format_double(ceiling) << " : "
        << (ok ? "PASS" : "FAIL") << '\n';
  };
  line("max_dev", s.max_dev, dev_ceiling, dev_ok);
  line("bias_norm", s.bias_norm, bias_ceiling + bias_margin, bias_ok);
  line("second_moment", s.second_moment, second_ceiling, second_ok);
  return dev_ok && bias_ok && second_ok ? exit_code::kPass : exit_code::kVerificationFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Clipped stochastic extragradient / gradient descent-ascent experiments", "vipclip"};
  app.require_subcommand(1);

  auto* zoo = app.add_subcommand("zoo", "List or describe the synthetic problem zoo");
  zoo->require_subcommand(1);
  zoo->add_subcommand("list", "List the zoo constructors");
  auto* describe = zoo->add_subcommand("describe", "Print a zoo instance and its certified constants");
  ZooArgs zargs;
  describe->add_option("name", zargs.name, "Zoo constructor name")->required();
  describe->add_option("--d", zargs.d, "Dimension parameter");
  describe->add_option("--mu", zargs.mu, "Strong monotonicity (strongly_monotone)");
  describe->add_option("--L", zargs.big_l, "Lipschitz constant (strongly_monotone)");
  describe->add_option("--s", zargs.s, "Coupling strength (bilinear)");
  describe->add_option("--eps", zargs.eps, "Non-monotonicity (weak_minty)");
  describe->add_option("--ell", zargs.ell, "Largest eigenvalue (star_cocoercive)");
  describe->add_option("--min-eig", zargs.min_eig, "Smallest eigenvalue (star_cocoercive)");
  describe->add_option("--seed", zargs.seed, "Construction seed");
  describe->add_flag("--canonical", zargs.canonical, "No rotation and x* = 0");
  describe->add_flag("--json", zargs.json, "Print JSON");

  std::string config_path;
  std::string out_dir;
  const auto add_config_cmd = [&](const char* name, const char* help) {
    auto* cmd = app.add_subcommand(name, help);
    cmd->add_option("config", config_path, "Path to the YAML config")->required();
    cmd->add_option("--out", out_dir, "Output directory (overrides output.dir)");
    return cmd;
  };
  auto* run = add_config_cmd("run", "Run a Monte-Carlo experiment and write its artifacts");
  auto* verify = add_config_cmd("verify", "Run and check success_fraction >= 1 - beta");
  auto* tails = add_config_cmd("tails", "Noise-norm tail diagnostics and histogram");
  auto* estimator = add_config_cmd("estimator-check", "Check the clipped-estimator bounds");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_code::kPass;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return exit_code::kPass;
    }
    err << "error: " << e.what() << '\n';
    return exit_code::kInvalidInput;
  }

  try {
    if (zoo->parsed()) {
      if (describe->parsed()) return cmd_zoo_describe(zargs, out, err);
      return cmd_zoo_list(out);
    }
    if (run->parsed()) return cmd_run(config_path, out_dir, out);
    if (verify->parsed()) return cmd_verify(config_path, out_dir, out, err);
    if (tails->parsed()) return cmd_tails(config_path, out_dir, out);
    if (estimator->parsed()) return cmd_estimator_check(config_path, out_dir, out);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kInvalidInput;
  } catch (const MissingConstant& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kInvalidInput;
  } catch (const PreconditionViolation& e) {
    err << "error: precondition violated: " << e.what() << '\n';
    return exit_code::kInvalidInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kVerificationFailure;
  }
  return exit_code::kInvalidInput;
}

}  // namespace vipclip::cli
