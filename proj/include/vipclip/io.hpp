#pragma once

#include "vipclip/experiments.hpp"
#include "vipclip/oracle.hpp"
#include "vipclip/problems.hpp"
#include "vipclip/schedules.hpp"
#include "vipclip/tails.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace vipclip {

using Json = nlohmann::json;

// Shortest decimal string that parses back to the same double.
std::string format_double(double v);
// Fixed 17 significant digits, '.' decimal point, locale independent.
std::string format_double17(double v);

Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j, const char* what);

Json problem_to_json(const AffineProblem& problem);
// Rebuilds the problem and re-validates its certified constants.
AffineProblem problem_from_json(const Json& j);

Json noise_to_json(const NoiseModel& model);
NoiseModel noise_from_json(const Json& j);

Json clip_level_to_json(const ClipLevel& level);
ClipLevel clip_level_from_json(const Json& j);
Json batch_size_to_json(const BatchSize& batch);
BatchSize batch_size_from_json(const Json& j);
Json schedule_to_json(const Schedule& schedule);
Schedule schedule_from_json(const Json& j);

Json tail_report_to_json(const TailReport& report);
Json histogram_to_json(const Histogram& hist);
Json estimator_stats_to_json(const EstimatorStats& stats);
Json report_to_json(const ExperimentReport& report);

void write_per_seed_csv(std::ostream& out, const ExperimentReport& report);
void write_trajectory_csv(std::ostream& out, const ExperimentReport& report);
void write_histogram_csv(std::ostream& out, const Histogram& hist);

}  // namespace vipclip
