#include "vipclip/config.hpp"

#include "vipclip/io.hpp"
#include "vipclip/random.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace vipclip {

bool RunConfig::operator==(const RunConfig& o) const {
  return problem == o.problem && noise == o.noise && method == o.method &&
         schedule == o.schedule && x0 == o.x0 && experiment == o.experiment &&
         output == o.output && tails == o.tails && estimator == o.estimator;
}

namespace {

std::string where(const YAML::Mark& mark) {
  if (mark.is_null()) return "config";
  return "config line " + std::to_string(mark.line + 1) + ", column " +
         std::to_string(mark.column + 1);
}

[[noreturn]] void fail(const YAML::Node& node, const std::string& path, const std::string& msg) {
  throw ConfigError(where(node.Mark()) + ": " + path + ": " + msg);
}

double parse_double(const YAML::Node& node, const std::string& path) {
  if (!node.IsScalar()) fail(node, path, "expected a number");
  const std::string s = node.Scalar();
  if (s == "inf" || s == ".inf" || s == "+inf" || s == "infinity" || s == ".Inf") {
    return std::numeric_limits<double>::infinity();
  }
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s[0] == '+') ++first;
  const auto res = std::from_chars(first, s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || std::isnan(v)) {
    fail(node, path, "expected a number, got '" + s + "'");
  }
  return v;
}

std::int64_t parse_int(const YAML::Node& node, const std::string& path) {
  if (!node.IsScalar()) fail(node, path, "expected an integer");
  const std::string s = node.Scalar();
  std::int64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    fail(node, path, "expected an integer, got '" + s + "'");
  }
  return v;
}

std::uint64_t parse_uint(const YAML::Node& node, const std::string& path) {
  if (!node.IsScalar()) fail(node, path, "expected a nonnegative integer");
  const std::string s = node.Scalar();
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    fail(node, path, "expected a nonnegative integer, got '" + s + "'");
  }
  return v;
}

bool parse_bool(const YAML::Node& node, const std::string& path) {
  if (!node.IsScalar()) fail(node, path, "expected true or false");
  const std::string s = node.Scalar();
  if (s == "true") return true;
  if (s == "false") return false;
  fail(node, path, "expected true or false, got '" + s + "'");
}

std::string parse_string(const YAML::Node& node, const std::string& path) {
  if (!node.IsScalar()) fail(node, path, "expected a string");
  return node.Scalar();
}

std::vector<double> parse_doubles(const YAML::Node& node, const std::string& path) {
  if (!node.IsSequence()) fail(node, path, "expected a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    out.push_back(parse_double(node[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

// A mapping whose keys are consumed one by one; leftovers are reported.
class Section {
 public:
  Section(const YAML::Node& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.IsMap()) fail(node_, path_, "expected a mapping");
  }

  bool has(const char* key) const { return static_cast<bool>(node_[key]); }

  YAML::Node get(const char* key) {
    seen_.insert(key);
    return node_[key];
  }

  std::string sub(const char* key) const { return path_ + "." + key; }

  YAML::Node require_key(const char* key) {
    if (!has(key)) fail(node_, path_, std::string("missing required key '") + key + "'");
    return get(key);
  }

  template <class T, class Parse>
  void optional(const char* key, std::optional<T>& out, Parse parse) {
    if (has(key)) out = parse(get(key), sub(key));
  }

  template <class T, class Parse>
  void value(const char* key, T& out, Parse parse) {
    if (has(key)) out = parse(get(key), sub(key));
  }

  template <class T, class Parse>
  void required(const char* key, T& out, Parse parse) {
    out = parse(require_key(key), sub(key));
  }

  void finish() const {
    for (const auto& kv : node_) {
      const std::string key = kv.first.Scalar();
      if (!seen_.count(key)) fail(kv.first, path_, "unknown key '" + key + "'");
    }
  }

  const YAML::Node& node() const { return node_; }

 private:
  YAML::Node node_;
  std::string path_;
  std::set<std::string> seen_;
};

ProblemConfig parse_problem(const YAML::Node& node) {
  Section s(node, "problem");
  ProblemConfig c;
  s.required("kind", c.kind, parse_string);
  s.optional("d", c.d, parse_int);
  s.optional("mu", c.mu, parse_double);
  s.optional("L", c.L, parse_double);
  s.optional("s", c.s, parse_double);
  s.optional("eps", c.eps, parse_double);
  s.optional("ell", c.ell, parse_double);
  s.optional("min_eig", c.min_eig, parse_double);
  s.optional("seed", c.seed, parse_uint);
  s.optional("placement", c.placement, parse_string);
  s.optional("path", c.path, parse_string);
  s.finish();
  const auto need = [&](bool present, const char* key) {
    if (!present) fail(node, "problem", "kind '" + c.kind + "' needs key '" + key + "'");
  };
  if (c.kind == "strongly_monotone") {
    need(c.d.has_value(), "d");
    need(c.mu.has_value(), "mu");
    need(c.L.has_value(), "L");
  } else if (c.kind == "bilinear") {
    need(c.d.has_value(), "d");
    need(c.s.has_value(), "s");
  } else if (c.kind == "weak_minty") {
    need(c.eps.has_value(), "eps");
  } else if (c.kind == "star_cocoercive") {
    need(c.d.has_value(), "d");
    need(c.ell.has_value(), "ell");
    need(c.min_eig.has_value(), "min_eig");
  } else if (c.kind == "file") {
    need(c.path.has_value(), "path");
  } else {
    fail(node["kind"], "problem.kind", "unknown problem kind '" + c.kind + "'");
  }
  if (c.placement && *c.placement != "randomized" && *c.placement != "canonical") {
    fail(node["placement"], "problem.placement", "expected 'randomized' or 'canonical'");
  }
  return c;
}

NoiseConfig parse_noise(const YAML::Node& node) {
  Section s(node, "noise");
  NoiseConfig c;
  s.required("kind", c.kind, parse_string);
  s.value("sigma", c.sigma, parse_double);
  s.optional("nu", c.nu, parse_double);
  s.optional("alpha", c.alpha, parse_double);
  s.optional("p_spike", c.p_spike, parse_double);
  s.finish();
  try {
    build_noise(c);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    fail(node, "noise", e.what());
  }
  return c;
}

ScheduleConfig parse_schedule(const YAML::Node& node) {
  Section s(node, "schedule");
  ScheduleConfig c;
  s.required("case", c.schedule_case, parse_string);
  s.value("regime", c.regime, parse_string);
  s.required("K", c.K, parse_int);
  s.value("beta", c.beta, parse_double);
  s.optional("L", c.L, parse_double);
  s.optional("mu", c.mu, parse_double);
  s.optional("rho", c.rho, parse_double);
  s.optional("ell", c.ell, parse_double);
  s.optional("sigma", c.sigma, parse_double);
  s.optional("R", c.R, parse_double);
  s.optional("gamma", c.gamma, parse_double);
  s.optional("gamma1", c.gamma1, parse_double);
  s.optional("gamma2", c.gamma2, parse_double);
  s.optional("lambda", c.lambda, parse_double);
  s.optional("lambda1", c.lambda1, parse_double);
  s.optional("lambda2", c.lambda2, parse_double);
  s.optional("m", c.m, parse_int);
  s.optional("m1", c.m1, parse_int);
  s.optional("m2", c.m2, parse_int);
  s.finish();
  try {
    case_from_string(c.schedule_case);
  } catch (const Error& e) {
    fail(node["case"], "schedule.case", e.what());
  }
  try {
    regime_from_string(c.regime);
  } catch (const Error& e) {
    fail(node["regime"], "schedule.regime", e.what());
  }
  if (c.K < 0) fail(node["K"], "schedule.K", "K must be nonnegative");
  if (!(c.beta > 0.0)) fail(node["beta"] ? node["beta"] : node, "schedule.beta", "beta must be positive");
  return c;
}

StartConfig parse_start(const YAML::Node& node) {
  Section s(node, "x0");
  StartConfig c;
  s.optional("point", c.point, parse_doubles);
  s.optional("distance", c.distance, parse_double);
  s.value("seed", c.seed, parse_uint);
  s.finish();
  if (c.point.has_value() == c.distance.has_value()) {
    fail(node, "x0", "give exactly one of 'point' or 'distance'");
  }
  if (c.distance && !(*c.distance >= 0.0 && std::isfinite(*c.distance))) {
    fail(node["distance"], "x0.distance", "distance must be finite and nonnegative");
  }
  return c;
}

ExperimentConfig parse_experiment(const YAML::Node& node) {
  Section s(node, "experiment");
  ExperimentConfig c;
  s.value("n_seeds", c.n_seeds, parse_int);
  s.value("base_seed", c.base_seed, parse_uint);
  s.optional("metric", c.metric, parse_string);
  s.finish();
  if (c.n_seeds < 1) fail(node["n_seeds"], "experiment.n_seeds", "n_seeds must be positive");
  if (c.metric) {
    try {
      metric_from_string(*c.metric);
    } catch (const Error& e) {
      fail(node["metric"], "experiment.metric", e.what());
    }
  }
  return c;
}

OutputConfig parse_output(const YAML::Node& node) {
  Section s(node, "output");
  OutputConfig c;
  s.value("dir", c.dir, parse_string);
  s.value("emit_trajectory", c.emit_trajectory, parse_bool);
  if (s.has("threads")) {
    const YAML::Node t = s.get("threads");
    if (!(t.IsScalar() && t.Scalar() == "auto")) {
      const std::int64_t n = parse_int(t, "output.threads");
      if (n < 1 || n > 4096) fail(t, "output.threads", "threads must be 'auto' or in [1, 4096]");
      c.threads = static_cast<int>(n);
    }
  }
  s.finish();
  return c;
}

TailsConfig parse_tails(const YAML::Node& node) {
  Section s(node, "tails");
  TailsConfig c;
  s.value("n", c.n, parse_int);
  s.value("m", c.m, parse_int);
  s.value("n_bins", c.n_bins, parse_int);
  s.value("seed", c.seed, parse_uint);
  s.optional("at", c.at, parse_doubles);
  s.finish();
  if (c.n < 100) fail(node, "tails.n", "n must be at least 100");
  if (c.m < 1) fail(node, "tails.m", "m must be positive");
  if (c.n_bins < 1) fail(node, "tails.n_bins", "n_bins must be positive");
  return c;
}

EstimatorConfig parse_estimator(const YAML::Node& node) {
  Section s(node, "estimator");
  EstimatorConfig c;
  s.value("m", c.m, parse_int);
  s.required("lambda", c.lambda, parse_double);
  s.value("n_trials", c.n_trials, parse_int);
  s.value("seed", c.seed, parse_uint);
  s.optional("x", c.x, parse_doubles);
  s.finish();
  if (c.m < 1) fail(node, "estimator.m", "m must be positive");
  if (!(c.lambda > 0.0 && std::isfinite(c.lambda))) {
    fail(node["lambda"], "estimator.lambda", "lambda must be finite and positive");
  }
  if (c.n_trials < 1000) fail(node, "estimator.n_trials", "n_trials must be at least 1000");
  return c;
}

// Doubles go out as their shortest round-trip decimal strings.
void emit_double(YAML::Emitter& out, const char* key, double v) {
  out << YAML::Key << key << YAML::Value << format_double(v);
}

template <class T>
void emit_opt(YAML::Emitter& out, const char* key, const std::optional<T>& v) {
  if (!v) return;
  if constexpr (std::is_same_v<T, double>) {
    emit_double(out, key, *v);
  } else if constexpr (std::is_same_v<T, std::vector<double>>) {
    out << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (double x : *v) out << format_double(x);
    out << YAML::EndSeq;
  } else {
    out << YAML::Key << key << YAML::Value << *v;
  }
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(where(e.mark) + ": " + e.msg);
  }
  if (!root.IsMap()) throw ConfigError("config: top level must be a mapping");
  Section s(root, "config");
  RunConfig c;
  c.base_dir = base_dir;
  c.problem = parse_problem(s.require_key("problem"));
  if (s.has("noise")) c.noise = parse_noise(s.get("noise"));
  if (s.has("method")) {
    const YAML::Node m = s.get("method");
    c.method = parse_string(m, "method");
    try {
      method_from_string(*c.method);
    } catch (const Error& e) {
      fail(m, "method", e.what());
    }
  }
  if (s.has("schedule")) c.schedule = parse_schedule(s.get("schedule"));
  if (s.has("x0")) c.x0 = parse_start(s.get("x0"));
  if (s.has("experiment")) c.experiment = parse_experiment(s.get("experiment"));
  if (s.has("output")) c.output = parse_output(s.get("output"));
  if (s.has("tails")) c.tails = parse_tails(s.get("tails"));
  if (s.has("estimator")) c.estimator = parse_estimator(s.get("estimator"));
  s.finish();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.parent_path());
}

std::string emit_config(const RunConfig& c) {
  YAML::Emitter out;
  out << YAML::BeginMap;

  out << YAML::Key << "problem" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << c.problem.kind;
  emit_opt(out, "d", c.problem.d);
  emit_opt(out, "mu", c.problem.mu);
  emit_opt(out, "L", c.problem.L);
  emit_opt(out, "s", c.problem.s);
  emit_opt(out, "eps", c.problem.eps);
  emit_opt(out, "ell", c.problem.ell);
  emit_opt(out, "min_eig", c.problem.min_eig);
  emit_opt(out, "seed", c.problem.seed);
  emit_opt(out, "placement", c.problem.placement);
  emit_opt(out, "path", c.problem.path);
  out << YAML::EndMap;

  out << YAML::Key << "noise" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << c.noise.kind;
  emit_double(out, "sigma", c.noise.sigma);
  emit_opt(out, "nu", c.noise.nu);
  emit_opt(out, "alpha", c.noise.alpha);
  emit_opt(out, "p_spike", c.noise.p_spike);
  out << YAML::EndMap;

  emit_opt(out, "method", c.method);

  if (c.schedule) {
    const ScheduleConfig& s = *c.schedule;
    out << YAML::Key << "schedule" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "case" << YAML::Value << s.schedule_case;
    out << YAML::Key << "regime" << YAML::Value << s.regime;
    out << YAML::Key << "K" << YAML::Value << s.K;
    emit_double(out, "beta", s.beta);
    emit_opt(out, "L", s.L);
    emit_opt(out, "mu", s.mu);
    emit_opt(out, "rho", s.rho);
    emit_opt(out, "ell", s.ell);
    emit_opt(out, "sigma", s.sigma);
    emit_opt(out, "R", s.R);
    emit_opt(out, "gamma", s.gamma);
    emit_opt(out, "gamma1", s.gamma1);
    emit_opt(out, "gamma2", s.gamma2);
    emit_opt(out, "lambda", s.lambda);
    emit_opt(out, "lambda1", s.lambda1);
    emit_opt(out, "lambda2", s.lambda2);
    emit_opt(out, "m", s.m);
    emit_opt(out, "m1", s.m1);
    emit_opt(out, "m2", s.m2);
    out << YAML::EndMap;
  }

  if (c.x0) {
    out << YAML::Key << "x0" << YAML::Value << YAML::BeginMap;
    emit_opt(out, "point", c.x0->point);
    emit_opt(out, "distance", c.x0->distance);
    out << YAML::Key << "seed" << YAML::Value << c.x0->seed;
    out << YAML::EndMap;
  }

  out << YAML::Key << "experiment" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "n_seeds" << YAML::Value << c.experiment.n_seeds;
  out << YAML::Key << "base_seed" << YAML::Value << c.experiment.base_seed;
  emit_opt(out, "metric", c.experiment.metric);
  out << YAML::EndMap;

  out << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "dir" << YAML::Value << c.output.dir;
  out << YAML::Key << "emit_trajectory" << YAML::Value << (c.output.emit_trajectory ? "true" : "false");
  out << YAML::Key << "threads" << YAML::Value;
  if (c.output.threads) {
    out << *c.output.threads;
  } else {
    out << "auto";
  }
  out << YAML::EndMap;

  if (c.tails) {
    out << YAML::Key << "tails" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "n" << YAML::Value << c.tails->n;
    out << YAML::Key << "m" << YAML::Value << c.tails->m;
    out << YAML::Key << "n_bins" << YAML::Value << c.tails->n_bins;
    out << YAML::Key << "seed" << YAML::Value << c.tails->seed;
    emit_opt(out, "at", c.tails->at);
    out << YAML::EndMap;
  }

  if (c.estimator) {
    out << YAML::Key << "estimator" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "m" << YAML::Value << c.estimator->m;
    emit_double(out, "lambda", c.estimator->lambda);
    out << YAML::Key << "n_trials" << YAML::Value << c.estimator->n_trials;
    out << YAML::Key << "seed" << YAML::Value << c.estimator->seed;
    emit_opt(out, "x", c.estimator->x);
    out << YAML::EndMap;
  }

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

AffineProblem build_problem(const ProblemConfig& c, const std::filesystem::path& base_dir) {
  const Placement placement =
      c.placement && *c.placement == "canonical" ? Placement::Canonical : Placement::Randomized;
  const std::uint64_t seed = c.seed.value_or(0);
  const auto need = [&](const auto& v, const char* key) {
    if (!v) throw ConfigError("problem kind '" + c.kind + "' needs key '" + key + "'");
    return *v;
  };
  if (c.kind == "strongly_monotone") {
    return make_strongly_monotone(need(c.d, "d"), need(c.mu, "mu"), need(c.L, "L"), seed, placement);
  }
  if (c.kind == "bilinear") return make_bilinear(need(c.d, "d"), need(c.s, "s"));
  if (c.kind == "weak_minty") return make_weak_minty(need(c.eps, "eps"));
  if (c.kind == "star_cocoercive") {
    return make_star_cocoercive(need(c.d, "d"), need(c.ell, "ell"), need(c.min_eig, "min_eig"),
                                seed, placement);
  }
  if (c.kind == "file") {
    std::filesystem::path path = need(c.path, "path");
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open problem file '" + path.string() + "'");
    Json j;
    try {
      in >> j;
    } catch (const Json::exception& e) {
      throw ConfigError("problem file '" + path.string() + "': " + e.what());
    }
    return problem_from_json(j);
  }
  throw ConfigError("unknown problem kind '" + c.kind + "'");
}

NoiseModel build_noise(const NoiseConfig& c) {
  const NoiseKind kind = noise_kind_from_string(c.kind);
  const auto need = [&](const std::optional<double>& v, const char* key) {
    if (!v) throw ConfigError("noise kind '" + c.kind + "' needs key '" + key + "'");
    return *v;
  };
  switch (kind) {
    case NoiseKind::None: return NoiseModel::none();
    case NoiseKind::Gaussian: return NoiseModel::gaussian(c.sigma);
    case NoiseKind::StudentT: return NoiseModel::student_t(c.sigma, need(c.nu, "nu"));
    case NoiseKind::SymmetricPareto:
      return NoiseModel::symmetric_pareto(c.sigma, need(c.alpha, "alpha"));
    case NoiseKind::BernoulliSpike:
      return NoiseModel::bernoulli_spike(c.sigma, need(c.p_spike, "p_spike"));
  }
  return NoiseModel::none();
}

Vector build_start(const StartConfig& c, const AffineProblem& problem) {
  const Eigen::Index d = problem.dimension();
  if (c.point) {
    require_dim(static_cast<Eigen::Index>(c.point->size()), d, "x0.point");
    return Eigen::Map<const Vector>(c.point->data(), d);
  }
  if (!c.distance) throw ConfigError("x0 needs 'point' or 'distance'");
  CounterEngine engine{c.seed, channel::kStartPoint};
  return problem.solution() + sample_on_sphere(d, *c.distance, engine);
}

int resolve_threads(const OutputConfig& c) {
  return c.threads ? *c.threads : default_thread_count();
}

namespace {

ClipLevel clip_from(std::optional<double> v) {
  if (!v) return ClipLevel::unbounded();
  return ClipLevel::constant(*v);
}

Schedule build_custom(Method method, const ScheduleConfig& s) {
  if (is_extragradient(method)) {
    const auto g1 = s.gamma1 ? s.gamma1 : s.gamma;
    const auto g2 = s.gamma2 ? s.gamma2 : s.gamma;
    if (!g1 || !g2) throw ConfigError("custom SEG schedule needs gamma (or gamma1 and gamma2)");
    return custom_seg_schedule(*g1, *g2, clip_from(s.lambda1 ? s.lambda1 : s.lambda),
                               clip_from(s.lambda2 ? s.lambda2 : s.lambda),
                               BatchSize::constant(s.m1.value_or(s.m.value_or(1))),
                               BatchSize::constant(s.m2.value_or(s.m.value_or(1))), s.K);
  }
  if (!s.gamma) throw ConfigError("custom SGDA schedule needs gamma");
  return custom_sgda_schedule(*s.gamma, clip_from(s.lambda), BatchSize::constant(s.m.value_or(1)),
                              s.K);
}

}  // namespace

ExperimentSpec build_experiment_spec(const RunConfig& c) {
  if (!c.method) throw ConfigError("config: missing required key 'method'");
  if (!c.schedule) throw ConfigError("config: missing required section 'schedule'");
  if (!c.x0) throw ConfigError("config: missing required section 'x0'");
  const AffineProblem problem = build_problem(c.problem, c.base_dir);
  const NoiseModel noise = build_noise(c.noise);
  const Method method = method_from_string(*c.method);
  const Vector x0 = build_start(*c.x0, problem);
  const ScheduleConfig& s = *c.schedule;
  const Case sc = case_from_string(s.schedule_case);

  Schedule schedule;
  double R = 0.0;
  Metric metric = Metric::DistSq;
  if (sc == Case::Custom) {
    schedule = build_custom(method, s);
    R = s.R.value_or((x0 - problem.solution()).norm());
    if (!c.experiment.metric) throw ConfigError("custom schedules need experiment.metric");
    metric = metric_from_string(*c.experiment.metric);
  } else {
    ScheduleRequest req;
    req.schedule_case = sc;
    req.regime = regime_from_string(s.regime);
    req.K = s.K;
    req.beta = s.beta;
    req.L = s.L;
    req.mu = s.mu;
    req.rho = s.rho;
    req.ell = s.ell;
    req.sigma = s.sigma;
    req.R = s.R;
    const ScheduleParams p = resolve_schedule_params(req, problem, noise, x0);
    schedule = build_schedule(method, sc, req.regime, p);
    R = p.R;
    metric = c.experiment.metric ? metric_from_string(*c.experiment.metric) : metric_for_case(sc);
  }
  ExperimentSpec spec{problem, noise, method, schedule, x0};
  spec.n_seeds = c.experiment.n_seeds;
  spec.base_seed = c.experiment.base_seed;
  spec.metric = metric;
  spec.R = R;
  spec.threads = resolve_threads(c.output);
  spec.record_trajectories = c.output.emit_trajectory;
  return spec;
}

}  // namespace vipclip
