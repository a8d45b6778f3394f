#include "vipclip/io.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace vipclip {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_double17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double get_double(const Json& j, const char* key) {
  if (!j.contains(key)) throw InvalidArgument(std::string("missing field '") + key + "'");
  const Json& v = j.at(key);
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    throw InvalidArgument(std::string("field '") + key + "' is not a number");
  }
  if (!v.is_number()) throw InvalidArgument(std::string("field '") + key + "' is not a number");
  return v.get<double>();
}

std::optional<double> get_optional_double(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return get_double(j, key);
}

std::int64_t get_int(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer()) {
    throw InvalidArgument(std::string("field '") + key + "' must be an integer");
  }
  return j.at(key).get<std::int64_t>();
}

std::string get_string(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_string()) {
    throw InvalidArgument(std::string("field '") + key + "' must be a string");
  }
  return j.at(key).get<std::string>();
}

Json params_to_json(const ScheduleParams& p) {
  return Json{{"L", p.L},         {"ell", p.ell}, {"mu", p.mu},
              {"rho", p.rho},     {"R", p.R},     {"sigma", p.sigma},
              {"K", p.K},         {"beta", p.beta}};
}

ScheduleParams params_from_json(const Json& j) {
  ScheduleParams p;
  p.L = get_double(j, "L");
  p.ell = get_double(j, "ell");
  p.mu = get_double(j, "mu");
  p.rho = get_double(j, "rho");
  p.R = get_double(j, "R");
  p.sigma = get_double(j, "sigma");
  p.K = get_int(j, "K");
  p.beta = get_double(j, "beta");
  return p;
}

}  // namespace

Json vector_to_json(const Vector& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vector vector_from_json(const Json& j, const char* what) {
  if (!j.is_array()) throw InvalidArgument(std::string(what) + " must be an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InvalidArgument(std::string(what) + " must be an array of numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

Json problem_to_json(const AffineProblem& problem) {
  const Eigen::Index d = problem.dimension();
  Json matrix = Json::array();
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) matrix.push_back(problem.matrix()(r, c));
  }
  const Constants& k = problem.constants();
  Json constants{{"L", k.lipschitz}, {"mu", k.qsm_mu}};
  constants["ell"] = k.sc_ell ? Json(*k.sc_ell) : Json(nullptr);
  constants["rho"] = k.snc_rho ? Json(*k.snc_rho) : Json(nullptr);
  return Json{{"dim", d},
              {"matrix", matrix},
              {"offset", vector_to_json(problem.offset())},
              {"solution", vector_to_json(problem.solution())},
              {"constants", constants},
              {"label", problem.label()}};
}

AffineProblem problem_from_json(const Json& j) {
  const std::int64_t d = get_int(j, "dim");
  require(d >= 1, "problem dim must be positive");
  const Vector flat = vector_from_json(j.at("matrix"), "matrix");
  require(flat.size() == d * d, "matrix must hold dim * dim entries (row-major)");
  Matrix a(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) a(r, c) = flat[r * d + c];
  }
  const Json& cj = j.at("constants");
  Constants k;
  k.lipschitz = get_double(cj, "L");
  k.qsm_mu = get_double(cj, "mu");
  k.sc_ell = get_optional_double(cj, "ell");
  k.snc_rho = get_optional_double(cj, "rho");
  const std::string label = j.contains("label") ? get_string(j, "label") : std::string{};
  AffineProblem p(a, vector_from_json(j.at("offset"), "offset"),
                  vector_from_json(j.at("solution"), "solution"), k, label);
  p.validate_constants();
  return p;
}

Json noise_to_json(const NoiseModel& model) {
  Json j{{"kind", std::string(to_string(model.kind()))}, {"sigma", model.sigma()}};
  switch (model.kind()) {
    case NoiseKind::StudentT: j["nu"] = model.nu(); break;
    case NoiseKind::SymmetricPareto: j["alpha"] = model.alpha(); break;
    case NoiseKind::BernoulliSpike: j["p_spike"] = model.p_spike(); break;
    default: break;
  }
  return j;
}

NoiseModel noise_from_json(const Json& j) {
  const NoiseKind kind = noise_kind_from_string(get_string(j, "kind"));
  if (kind == NoiseKind::None) return NoiseModel::none();
  const double sigma = get_double(j, "sigma");
  switch (kind) {
    case NoiseKind::Gaussian: return NoiseModel::gaussian(sigma);
    case NoiseKind::StudentT: return NoiseModel::student_t(sigma, get_double(j, "nu"));
    case NoiseKind::SymmetricPareto: return NoiseModel::symmetric_pareto(sigma, get_double(j, "alpha"));
    case NoiseKind::BernoulliSpike: return NoiseModel::bernoulli_spike(sigma, get_double(j, "p_spike"));
    default: break;
  }
  return NoiseModel::none();
}

Json clip_level_to_json(const ClipLevel& level) {
  switch (level.kind) {
    case ClipLevel::Kind::Constant: return Json{{"type", "constant"}, {"value", level.base}};
    case ClipLevel::Kind::ExpDecay:
      return Json{{"type", "exp_decay"}, {"base", level.base}, {"rate", level.rate}};
    case ClipLevel::Kind::Unbounded: break;
  }
  return Json{{"type", "unbounded"}};
}

ClipLevel clip_level_from_json(const Json& j) {
  const std::string type = get_string(j, "type");
  if (type == "constant") return ClipLevel::constant(get_double(j, "value"));
  if (type == "exp_decay") return ClipLevel::exp_decay(get_double(j, "base"), get_double(j, "rate"));
  if (type == "unbounded") return ClipLevel::unbounded();
  throw InvalidArgument("unknown clipping-level type '" + type + "'");
}

Json batch_size_to_json(const BatchSize& batch) {
  if (batch.kind == BatchSize::Kind::Constant) return Json{{"type", "constant"}, {"value", batch.value}};
  return Json{{"type", "exp_growth"}, {"coeff", batch.coeff}, {"rate", batch.rate}};
}

BatchSize batch_size_from_json(const Json& j) {
  const std::string type = get_string(j, "type");
  if (type == "constant") return BatchSize::constant(get_int(j, "value"));
  if (type == "exp_growth") return BatchSize::exp_growth(get_double(j, "coeff"), get_double(j, "rate"));
  throw InvalidArgument("unknown batch-size type '" + type + "'");
}

Json schedule_to_json(const Schedule& schedule) {
  if (const auto* s = std::get_if<SegSchedule>(&schedule)) {
    return Json{{"type", "seg"},
                {"case", std::string(to_string(s->schedule_case))},
                {"regime", std::string(to_string(s->regime))},
                {"gamma1", s->gamma1},
                {"gamma2", s->gamma2},
                {"lambda1", clip_level_to_json(s->lambda1)},
                {"lambda2", clip_level_to_json(s->lambda2)},
                {"m1", batch_size_to_json(s->m1)},
                {"m2", batch_size_to_json(s->m2)},
                {"K", s->K},
                {"log_factor", s->log_factor},
                {"params", params_to_json(s->params)}};
  }
  const auto& s = std::get<SgdaSchedule>(schedule);
  return Json{{"type", "sgda"},
              {"case", std::string(to_string(s.schedule_case))},
              {"regime", std::string(to_string(s.regime))},
              {"gamma", s.gamma},
              {"lambda", clip_level_to_json(s.lambda)},
              {"m", batch_size_to_json(s.m)},
              {"K", s.K},
              {"log_factor", s.log_factor},
              {"params", params_to_json(s.params)}};
}

Schedule schedule_from_json(const Json& j) {
  const std::string type = get_string(j, "type");
  if (type == "seg") {
    SegSchedule s;
    s.schedule_case = case_from_string(get_string(j, "case"));
    s.regime = regime_from_string(get_string(j, "regime"));
    s.gamma1 = get_double(j, "gamma1");
    s.gamma2 = get_double(j, "gamma2");
    s.lambda1 = clip_level_from_json(j.at("lambda1"));
    s.lambda2 = clip_level_from_json(j.at("lambda2"));
    s.m1 = batch_size_from_json(j.at("m1"));
    s.m2 = batch_size_from_json(j.at("m2"));
    s.K = get_int(j, "K");
    s.log_factor = get_double(j, "log_factor");
    s.params = params_from_json(j.at("params"));
    return s;
  }
  if (type == "sgda") {
    SgdaSchedule s;
    s.schedule_case = case_from_string(get_string(j, "case"));
    s.regime = regime_from_string(get_string(j, "regime"));
    s.gamma = get_double(j, "gamma");
    s.lambda = clip_level_from_json(j.at("lambda"));
    s.m = batch_size_from_json(j.at("m"));
    s.K = get_int(j, "K");
    s.log_factor = get_double(j, "log_factor");
    s.params = params_from_json(j.at("params"));
    return s;
  }
  throw InvalidArgument("unknown schedule type '" + type + "'");
}

Json tail_report_to_json(const TailReport& r) {
  return Json{{"n", r.n},         {"q1", r.q1},         {"q2", r.q2},
              {"q3", r.q3},       {"p_mr", r.p_mr},     {"p_er", r.p_er},
              {"rho_mr", r.rho_mr}, {"rho_er", r.rho_er}};
}

Json histogram_to_json(const Histogram& hist) {
  return Json{{"edges", hist.edges}, {"counts", hist.counts}};
}

Json estimator_stats_to_json(const EstimatorStats& s) {
  return Json{{"bias_norm", s.bias_norm},
              {"bias_standard_error", s.bias_standard_error},
              {"second_moment", s.second_moment},
              {"centered_second_moment", s.centered_second_moment},
              {"max_dev", s.max_dev},
              {"n_trials", s.n_trials},
              {"sigma_eff_sq", s.sigma_eff_sq},
              {"lambda", s.lambda},
              {"f_norm", s.f_norm}};
}

Json report_to_json(const ExperimentReport& report) {
  Json per_seed = Json::array();
  for (double v : report.per_seed_metric) per_seed.push_back(number_or_null(v));
  Json quantiles = Json::object();
  for (const auto& [q, v] : report.quantiles) quantiles[format_double(q)] = number_or_null(v);
  const auto n = static_cast<std::int64_t>(report.per_seed_metric.size());
  Json j{{"method", std::string(to_string(report.method))},
         {"case", std::string(to_string(schedule_case(report.schedule)))},
         {"metric", std::string(to_string(report.metric))},
         {"R", report.R},
         {"beta", report.beta},
         {"n_seeds", n},
         {"base_seed", report.base_seed},
         {"per_seed_metric", per_seed},
         {"quantiles", quantiles},
         {"n_diverged", report.n_diverged},
         {"oracle_calls_per_seed", report.planned_oracle_calls},
         {"gap_unconverged", report.gap_unconverged},
         {"wall_time", report.wall_time},
         {"schedule", schedule_to_json(report.schedule)}};
  j["bound"] = report.bound ? number_or_null(*report.bound) : Json(nullptr);
  j["success_fraction"] = report.success_fraction ? Json(*report.success_fraction) : Json(nullptr);
  return j;
}

void write_per_seed_csv(std::ostream& out, const ExperimentReport& report) {
  out << "seed,metric_value,diverged,oracle_calls\n";
  for (std::size_t i = 0; i < report.per_seed_metric.size(); ++i) {
    out << report.base_seed + i << ',' << format_double17(report.per_seed_metric[i]) << ','
        << (report.diverged[i] ? 1 : 0) << ',' << report.oracle_calls[i] << '\n';
  }
}

void write_trajectory_csv(std::ostream& out, const ExperimentReport& report) {
  out << "seed,k,metric_value\n";
  for (std::size_t i = 0; i < report.trajectories.size(); ++i) {
    const auto& curve = report.trajectories[i];
    for (std::size_t k = 0; k < curve.size(); ++k) {
      out << report.base_seed + i << ',' << k << ',' << format_double17(curve[k]) << '\n';
    }
  }
}

void write_histogram_csv(std::ostream& out, const Histogram& hist) {
  out << "bin_left,bin_right,count\n";
  for (std::size_t i = 0; i < hist.counts.size(); ++i) {
    out << format_double17(hist.edges[i]) << ',' << format_double17(hist.edges[i + 1]) << ','
        << hist.counts[i] << '\n';
  }
}

}  // namespace vipclip
