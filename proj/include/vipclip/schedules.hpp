#pragma once

#include "vipclip/common.hpp"

#include <cstdint>
#include <string_view>
#include <variant>

namespace vipclip {

enum class Method { ClippedSEG, ClippedSGDA, SEG, SGDA };

std::string_view to_string(Method method);
Method method_from_string(std::string_view name);
bool is_extragradient(Method method);
bool is_clipped(Method method);

// Theorem cases. The first three belong to clipped-SEG, the next three to
// clipped-SGDA. Custom schedules carry no guarantee.
enum class Case { Monotone, WeakMinty, QSM, MonotoneSC, SC, QSM_SC, Custom };

std::string_view to_string(Case c);
Case case_from_string(std::string_view name);
bool is_seg_case(Case c);
bool is_sgda_case(Case c);

enum class Regime { LargeStep, SmallStep };

std::string_view to_string(Regime regime);
Regime regime_from_string(std::string_view name);

// lambda_k = base * exp(-rate * k); Unbounded means clipping is bypassed.
struct ClipLevel {
  enum class Kind { Constant, ExpDecay, Unbounded };
  Kind kind = Kind::Unbounded;
  double base = 0.0;
  double rate = 0.0;

  static ClipLevel constant(double value);
  static ClipLevel exp_decay(double base, double rate);
  static ClipLevel unbounded();

  double at(std::int64_t k) const;
  bool operator==(const ClipLevel&) const = default;
};

// Constant: m_k = value. ExpGrowth: m_k = max{1, ceil(coeff / exp(-rate k))}.
struct BatchSize {
  enum class Kind { Constant, ExpGrowth };
  Kind kind = Kind::Constant;
  std::int64_t value = 1;
  double coeff = 0.0;
  double rate = 0.0;

  static BatchSize constant(std::int64_t m);
  // max{1, ceil(x)} for a real-valued batch-size formula.
  static BatchSize at_least(double x);
  static BatchSize exp_growth(double coeff, double rate);

  std::int64_t at(std::int64_t k) const;
  bool operator==(const BatchSize&) const = default;
};

// Inputs to the schedule builders. Only the fields a case uses are read.
struct ScheduleParams {
  double L = 0.0;      // Lipschitz constant (SEG cases)
  double ell = 0.0;    // star-cocoercivity constant (SGDA cases)
  double mu = 0.0;
  double rho = 0.0;
  double R = 1.0;
  double sigma = 0.0;
  std::int64_t K = 0;  // last iteration index; K + 1 steps are taken
  double beta = 0.1;

  bool operator==(const ScheduleParams&) const = default;
};

struct SegSchedule {
  Case schedule_case = Case::Monotone;
  Regime regime = Regime::LargeStep;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  ClipLevel lambda1;
  ClipLevel lambda2;
  BatchSize m1;
  BatchSize m2;
  std::int64_t K = 0;
  double log_factor = 0.0;  // A
  ScheduleParams params;

  std::int64_t horizon() const { return K + 1; }
  bool operator==(const SegSchedule&) const = default;
};

struct SgdaSchedule {
  Case schedule_case = Case::MonotoneSC;
  Regime regime = Regime::LargeStep;
  double gamma = 0.0;
  ClipLevel lambda;
  BatchSize m;
  std::int64_t K = 0;
  double log_factor = 0.0;
  ScheduleParams params;

  std::int64_t horizon() const { return K + 1; }
  bool operator==(const SgdaSchedule&) const = default;
};

using Schedule = std::variant<SegSchedule, SgdaSchedule>;

Case schedule_case(const Schedule& schedule);
std::int64_t schedule_K(const Schedule& schedule);
double schedule_beta(const Schedule& schedule);
double schedule_R(const Schedule& schedule);

// ln(c (K + 1) / beta); throws unless beta in (0, 1] and the result is >= 1.
double log_factor(double c, std::int64_t K, double beta);

SegSchedule build_seg_schedule(Case c, Regime regime, const ScheduleParams& p);
SgdaSchedule build_sgda_schedule(Case c, Regime regime, const ScheduleParams& p);
Schedule build_schedule(Method method, Case c, Regime regime,
                        const ScheduleParams& p);

// Hand-specified constant schedules (Case::Custom); no guarantee attached.
SegSchedule custom_seg_schedule(double gamma1, double gamma2, ClipLevel lambda1,
                                ClipLevel lambda2, BatchSize m1, BatchSize m2,
                                std::int64_t K);
SgdaSchedule custom_sgda_schedule(double gamma, ClipLevel lambda, BatchSize m,
                                  std::int64_t K);

// Fixed-point constants of the small-stepsize strongly monotone corollaries.
struct BkConstants {
  double log_arg = 6.0;     // c in ln(c (K + 1) / beta)
  double denom = 264600.0;  // D in (K + 1) mu^2 R^2 / (D sigma^2 A ln^2 B)
};
inline constexpr BkConstants kSegBk{6.0, 264600.0};
inline constexpr BkConstants kSgdaBk{4.0, 27000.0};

// B = max{2, (K + 1) mu^2 R^2 / (D sigma^2 A ln^2 B)}.
double solve_bk_fixed_point(double mu, double R, double sigma, std::int64_t K,
                            double beta, BkConstants constants);

// Right-hand side of the high-probability guarantee for the schedule's case.
double theoretical_bound(Method method, const Schedule& schedule, double R);

// Sum over k of the per-iteration oracle calls the schedule prescribes.
std::int64_t planned_oracle_calls(Method method, const Schedule& schedule);

}  // namespace vipclip
