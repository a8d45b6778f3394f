#include "vipclip/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace vipclip {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::ClippedSEG: return "clipped_seg";
    case Method::ClippedSGDA: return "clipped_sgda";
    case Method::SEG: return "seg";
    case Method::SGDA: return "sgda";
  }
  return "unknown";
}

Method method_from_string(std::string_view name) {
  for (Method m : {Method::ClippedSEG, Method::ClippedSGDA, Method::SEG, Method::SGDA}) {
    if (to_string(m) == name) return m;
  }
  throw InvalidArgument("unknown method '" + std::string(name) + "'");
}

bool is_extragradient(Method method) {
  return method == Method::ClippedSEG || method == Method::SEG;
}

bool is_clipped(Method method) {
  return method == Method::ClippedSEG || method == Method::ClippedSGDA;
}

std::string_view to_string(Case c) {
  switch (c) {
    case Case::Monotone: return "monotone";
    case Case::WeakMinty: return "weak_minty";
    case Case::QSM: return "qsm";
    case Case::MonotoneSC: return "monotone_sc";
    case Case::SC: return "sc";
    case Case::QSM_SC: return "qsm_sc";
    case Case::Custom: return "custom";
  }
  return "unknown";
}

Case case_from_string(std::string_view name) {
  for (Case c : {Case::Monotone, Case::WeakMinty, Case::QSM, Case::MonotoneSC,
                 Case::SC, Case::QSM_SC, Case::Custom}) {
    if (to_string(c) == name) return c;
  }
  throw InvalidArgument("unknown schedule case '" + std::string(name) + "'");
}

bool is_seg_case(Case c) {
  return c == Case::Monotone || c == Case::WeakMinty || c == Case::QSM;
}

bool is_sgda_case(Case c) {
  return c == Case::MonotoneSC || c == Case::SC || c == Case::QSM_SC;
}

std::string_view to_string(Regime regime) {
  return regime == Regime::LargeStep ? "large_step" : "small_step";
}

Regime regime_from_string(std::string_view name) {
  if (name == "large_step") return Regime::LargeStep;
  if (name == "small_step") return Regime::SmallStep;
  throw InvalidArgument("unknown regime '" + std::string(name) + "'");
}

ClipLevel ClipLevel::constant(double value) {
  require(value > 0.0, "clipping level must be positive");
  if (std::isinf(value)) return unbounded();
  return ClipLevel{Kind::Constant, value, 0.0};
}

ClipLevel ClipLevel::exp_decay(double base, double rate) {
  require(base > 0.0 && std::isfinite(base), "clipping base must be finite and positive");
  require(rate >= 0.0 && std::isfinite(rate), "clipping decay rate must be finite and nonnegative");
  return ClipLevel{Kind::ExpDecay, base, rate};
}

ClipLevel ClipLevel::unbounded() { return ClipLevel{Kind::Unbounded, 0.0, 0.0}; }

double ClipLevel::at(std::int64_t k) const {
  switch (kind) {
    case Kind::Constant: return base;
    case Kind::ExpDecay: return base * std::exp(-rate * static_cast<double>(k));
    case Kind::Unbounded: return std::numeric_limits<double>::infinity();
  }
  return std::numeric_limits<double>::infinity();
}

BatchSize BatchSize::constant(std::int64_t m) {
  require(m >= 1, "batch size must be at least 1");
  return BatchSize{Kind::Constant, m, 0.0, 0.0};
}

BatchSize BatchSize::at_least(double x) {
  require(std::isfinite(x), "batch-size formula is not finite");
  if (x <= 1.0) return constant(1);
  require(x < 9.0e15, "batch size overflows");
  return constant(static_cast<std::int64_t>(std::ceil(x)));
}

BatchSize BatchSize::exp_growth(double coeff, double rate) {
  require(coeff >= 0.0 && std::isfinite(coeff), "batch coefficient must be finite and nonnegative");
  require(rate >= 0.0 && std::isfinite(rate), "batch growth rate must be finite and nonnegative");
  return BatchSize{Kind::ExpGrowth, 1, coeff, rate};
}

std::int64_t BatchSize::at(std::int64_t k) const {
  if (kind == Kind::Constant) return value;
  const double x = coeff / std::exp(-rate * static_cast<double>(k));
  if (!(x > 1.0)) return 1;
  require(x < 9.0e15, "batch size overflows");
  return static_cast<std::int64_t>(std::ceil(x));
}

Case schedule_case(const Schedule& schedule) {
  return std::visit([](const auto& s) { return s.schedule_case; }, schedule);
}

std::int64_t schedule_K(const Schedule& schedule) {
  return std::visit([](const auto& s) { return s.K; }, schedule);
}

double schedule_beta(const Schedule& schedule) {
  return std::visit([](const auto& s) { return s.params.beta; }, schedule);
}

double schedule_R(const Schedule& schedule) {
  return std::visit([](const auto& s) { return s.params.R; }, schedule);
}

double log_factor(double c, std::int64_t K, double beta) {
  require(K >= 0, "K must be nonnegative");
  require(beta > 0.0 && std::isfinite(beta), "beta must be finite and positive");
  const double a = std::log(c * static_cast<double>(K + 1) / beta);
  if (a < 1.0) {
    std::ostringstream msg;
    msg << "ln(" << c << "(K+1)/beta) = " << a
        << " < 1; the theorems require ln(" << c << "(K+1)/beta) >= 1";
    throw InvalidArgument(msg.str());
  }
  require(beta <= 1.0, "beta must lie in (0, 1]");
  return a;
}

namespace {

void check_common(const ScheduleParams& p) {
  require(p.K >= 0, "K must be nonnegative");
  require(p.R > 0.0 && std::isfinite(p.R), "R must be finite and positive");
  require(p.sigma >= 0.0 && std::isfinite(p.sigma), "sigma must be finite and nonnegative");
}

void check_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidArgument(std::string(what) + " must be finite and positive for this case");
  }
}

double kp1(const ScheduleParams& p) { return static_cast<double>(p.K + 1); }

}  // namespace

double solve_bk_fixed_point(double mu, double R, double sigma, std::int64_t K,
                            double beta, BkConstants constants) {
  require(sigma > 0.0, "B_K is only defined for sigma > 0");
  require(mu > 0.0 && R > 0.0, "B_K needs positive mu and R");
  const double a = log_factor(constants.log_arg, K, beta);
  const double target = static_cast<double>(K + 1) * mu * mu * R * R /
                        (constants.denom * sigma * sigma * a);
  const double ln2 = std::log(2.0);
  if (target <= 2.0 * ln2 * ln2) return 2.0;
  // B ln^2 B = target, written as y + 2 ln y = ln target with y = ln B.
  // The left side is increasing and concave, so Newton from y = ln 2 is monotone.
  const double log_target = std::log(target);
  double y = ln2;
  double b = 2.0;
  for (int it = 0; it < 100; ++it) {
    const double h = y + 2.0 * std::log(y) - log_target;
    const double y_next = y - h / (1.0 + 2.0 / y);
    const double b_next = std::exp(y_next);
    if (std::abs(b_next - b) <= 1e-9 * b) return std::max(2.0, b_next);
    y = y_next;
    b = b_next;
  }
  throw ConvergenceFailure("B_K fixed point did not converge in 100 iterations");
}

SegSchedule build_seg_schedule(Case c, Regime regime, const ScheduleParams& p) {
  require(is_seg_case(c), "case '" + std::string(to_string(c)) + "' is not a clipped-SEG case");
  check_common(p);
  check_positive(p.L, "L");
  SegSchedule s;
  s.schedule_case = c;
  s.regime = regime;
  s.K = p.K;
  s.params = p;
  const double a = log_factor(6.0, p.K, p.beta);
  s.log_factor = a;
  const double sig2 = p.sigma * p.sigma;
  const double r2 = p.R * p.R;

  switch (c) {
    case Case::Monotone: {
      double gamma = 1.0 / (160.0 * p.L * a);
      if (regime == Regime::SmallStep && p.sigma > 0.0) {
        gamma = std::min(gamma, p.R / (60.0 * p.sigma * std::sqrt(3.0 * kp1(p) * a)));
      }
      s.gamma1 = s.gamma2 = gamma;
      s.lambda1 = s.lambda2 = ClipLevel::constant(p.R / (20.0 * gamma * a));
      s.m1 = s.m2 = regime == Regime::SmallStep
                        ? BatchSize::constant(1)
                        : BatchSize::at_least(10800.0 * kp1(p) * gamma * gamma * sig2 * a / r2);
      break;
    }
    case Case::WeakMinty: {
      if (regime == Regime::SmallStep) {
        throw InvalidArgument(
            "weak_minty has no small-step schedule; only the large-batch regime is available");
      }
      require(p.rho >= 0.0 && std::isfinite(p.rho), "rho must be finite and nonnegative");
      const double rho_max = 1.0 / (640.0 * p.L * a);
      if (p.rho > rho_max) {
        std::ostringstream msg;
        msg << "rho = " << p.rho << " exceeds 1/(640 L ln(6(K+1)/beta)) = " << rho_max
            << "; the weak-Minty schedule requires rho below this ceiling";
        throw InvalidArgument(msg.str());
      }
      s.gamma1 = 1.0 / (160.0 * p.L * a);
      s.gamma2 = 0.5 * s.gamma1;
      s.lambda1 = ClipLevel::constant(p.R / (20.0 * s.gamma1 * a));
      s.lambda2 = ClipLevel::constant(p.R / (20.0 * s.gamma2 * a));
      s.m1 = s.m2 = BatchSize::at_least(81.0 * kp1(p) * sig2 / (640.0 * p.L * p.L * r2 * a));
      break;
    }
    case Case::QSM: {
      check_positive(p.mu, "mu");
      double gamma = 1.0 / (650.0 * p.L * a);
      if (regime == Regime::SmallStep && p.sigma > 0.0) {
        const double bk = solve_bk_fixed_point(p.mu, p.R, p.sigma, p.K, p.beta, kSegBk);
        gamma = std::min(gamma, std::log(bk) / (p.mu * kp1(p)));
      }
      s.gamma1 = s.gamma2 = gamma;
      s.lambda1 = s.lambda2 = ClipLevel::exp_decay(
          std::exp(-gamma * p.mu) * p.R / (120.0 * gamma * a), 0.5 * gamma * p.mu);
      s.m1 = s.m2 = regime == Regime::SmallStep
                        ? BatchSize::constant(1)
                        : BatchSize::exp_growth(
                              264600.0 * gamma * gamma * kp1(p) * sig2 * a / r2, gamma * p.mu);
      break;
    }
    default:
      break;
  }
  return s;
}

SgdaSchedule build_sgda_schedule(Case c, Regime regime, const ScheduleParams& p) {
  require(is_sgda_case(c), "case '" + std::string(to_string(c)) + "' is not a clipped-SGDA case");
  check_common(p);
  check_positive(p.ell, "ell");
  SgdaSchedule s;
  s.schedule_case = c;
  s.regime = regime;
  s.K = p.K;
  s.params = p;
  const double a = log_factor(c == Case::MonotoneSC ? 6.0 : 4.0, p.K, p.beta);
  s.log_factor = a;
  const double sig2 = p.sigma * p.sigma;
  const double r2 = p.R * p.R;

  if (c == Case::MonotoneSC || c == Case::SC) {
    double gamma = 1.0 / (170.0 * p.ell * a);
    if (regime == Regime::SmallStep && p.sigma > 0.0) {
      gamma = std::min(gamma, p.R / (180.0 * p.sigma * std::sqrt(3.0 * kp1(p) * a)));
    }
    s.gamma = gamma;
    s.lambda = ClipLevel::constant(p.R / (60.0 * gamma * a));
    s.m = regime == Regime::SmallStep
              ? BatchSize::constant(1)
              : BatchSize::at_least(97200.0 * kp1(p) * gamma * gamma * sig2 * a / r2);
  } else {
    check_positive(p.mu, "mu");
    double gamma = 1.0 / (400.0 * p.ell * a);
    if (regime == Regime::SmallStep && p.sigma > 0.0) {
      const double bk = solve_bk_fixed_point(p.mu, p.R, p.sigma, p.K, p.beta, kSgdaBk);
      gamma = std::min(gamma, std::log(bk) / (p.mu * kp1(p)));
    }
    s.gamma = gamma;
    s.lambda = ClipLevel::exp_decay(std::exp(-gamma * p.mu) * p.R / (120.0 * gamma * a),
                                    0.5 * gamma * p.mu);
    s.m = regime == Regime::SmallStep
              ? BatchSize::constant(1)
              : BatchSize::exp_growth(27000.0 * gamma * gamma * kp1(p) * sig2 * a / r2,
                                      gamma * p.mu);
  }
  return s;
}

Schedule build_schedule(Method method, Case c, Regime regime, const ScheduleParams& p) {
  if (is_extragradient(method)) {
    if (!is_seg_case(c)) {
      throw InvalidArgument("case '" + std::string(to_string(c)) +
                            "' does not belong to method '" + std::string(to_string(method)) + "'");
    }
    return build_seg_schedule(c, regime, p);
  }
  if (!is_sgda_case(c)) {
    throw InvalidArgument("case '" + std::string(to_string(c)) +
                          "' does not belong to method '" + std::string(to_string(method)) + "'");
  }
  return build_sgda_schedule(c, regime, p);
}

SegSchedule custom_seg_schedule(double gamma1, double gamma2, ClipLevel lambda1,
                                ClipLevel lambda2, BatchSize m1, BatchSize m2,
                                std::int64_t K) {
  require(gamma1 > 0.0 && std::isfinite(gamma1), "gamma1 must be finite and positive");
  require(gamma2 > 0.0 && std::isfinite(gamma2), "gamma2 must be finite and positive");
  require(K >= 0, "K must be nonnegative");
  SegSchedule s;
  s.schedule_case = Case::Custom;
  s.gamma1 = gamma1;
  s.gamma2 = gamma2;
  s.lambda1 = lambda1;
  s.lambda2 = lambda2;
  s.m1 = m1;
  s.m2 = m2;
  s.K = K;
  s.params.K = K;
  s.params.beta = 1.0;
  return s;
}

SgdaSchedule custom_sgda_schedule(double gamma, ClipLevel lambda, BatchSize m,
                                  std::int64_t K) {
  require(gamma > 0.0 && std::isfinite(gamma), "gamma must be finite and positive");
  require(K >= 0, "K must be nonnegative");
  SgdaSchedule s;
  s.schedule_case = Case::Custom;
  s.gamma = gamma;
  s.lambda = lambda;
  s.m = m;
  s.K = K;
  s.params.K = K;
  s.params.beta = 1.0;
  return s;
}

double theoretical_bound(Method method, const Schedule& schedule, double R) {
  require(R > 0.0, "R must be positive");
  const Case c = schedule_case(schedule);
  if (c == Case::Custom) throw InvalidArgument("custom schedules carry no theoretical bound");
  const bool seg = std::holds_alternative<SegSchedule>(schedule);
  if (seg != is_extragradient(method)) {
    throw InvalidArgument("schedule does not match method '" + std::string(to_string(method)) + "'");
  }
  const double k1 = static_cast<double>(schedule_K(schedule) + 1);
  const double r2 = R * R;
  if (seg) {
    const auto& s = std::get<SegSchedule>(schedule);
    switch (c) {
      case Case::Monotone: return 9.0 * r2 / (2.0 * s.gamma1 * k1);
      case Case::WeakMinty: return 36.0 * r2 / (s.gamma1 * s.gamma2 * k1);
      case Case::QSM: return 2.0 * std::exp(-s.gamma1 * s.params.mu * k1) * r2;
      default: break;
    }
  } else {
    const auto& s = std::get<SgdaSchedule>(schedule);
    switch (c) {
      case Case::MonotoneSC: return 9.0 * r2 / (2.0 * s.gamma * k1);
      case Case::SC: return 2.0 * s.params.ell * r2 / (s.gamma * k1);
      case Case::QSM_SC: return 2.0 * std::exp(-s.gamma * s.params.mu * k1) * r2;
      default: break;
    }
  }
  throw InvalidArgument("schedule case does not match its schedule type");
}

std::int64_t planned_oracle_calls(Method method, const Schedule& schedule) {
  if (std::holds_alternative<SegSchedule>(schedule) != is_extragradient(method)) {
    throw InvalidArgument("schedule does not match method '" + std::string(to_string(method)) + "'");
  }
  std::int64_t total = 0;
  if (const auto* s = std::get_if<SegSchedule>(&schedule)) {
    for (std::int64_t k = 0; k <= s->K; ++k) total += s->m1.at(k) + s->m2.at(k);
  } else {
    const auto& g = std::get<SgdaSchedule>(schedule);
    for (std::int64_t k = 0; k <= g.K; ++k) total += g.m.at(k);
  }
  return total;
}

}  // namespace vipclip
