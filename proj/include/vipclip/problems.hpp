#pragma once

#include "vipclip/common.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace vipclip {

// Structural constants certified for an operator on every ball around x*.
struct Constants {
  double lipschitz = 0.0;             // L
  double qsm_mu = 0.0;                // quasi-strong monotonicity, 0 if none
  std::optional<double> sc_ell;       // star-cocoercivity
  std::optional<double> snc_rho;      // star-negative comonotonicity

  bool operator==(const Constants&) const = default;
};

// F(z) = A z + b with known solution x* (A x* + b = 0).
class AffineProblem {
 public:
  // Checks the solution residual; constants are taken as certified.
  AffineProblem(Matrix matrix, Vector offset, Vector solution,
                Constants constants, std::string label = {});

  const Matrix& matrix() const { return matrix_; }
  const Vector& offset() const { return offset_; }
  const Vector& solution() const { return solution_; }
  const Constants& constants() const { return constants_; }
  const std::string& label() const { return label_; }
  Eigen::Index dimension() const { return offset_.size(); }

  double lipschitz() const { return constants_.lipschitz; }
  double qsm_mu() const { return constants_.qsm_mu; }
  std::optional<double> sc_ell() const { return constants_.sc_ell; }
  std::optional<double> snc_rho() const { return constants_.snc_rho; }

  // Numerically verifies the invariants a deserialized problem must satisfy:
  // L matches the spectral norm, the QSM and SC constants are valid.
  void validate_constants(double tol = 1e-8) const;

  bool operator==(const AffineProblem&) const;

 private:
  Matrix matrix_;
  Vector offset_;
  Vector solution_;
  Constants constants_;
  std::string label_;
};

// Randomized: seeded rotation and x* in the unit ball. Canonical: no rotation,
// x* = 0 (exposes the block structure, used in hand-checked examples).
enum class Placement { Randomized, Canonical };

AffineProblem make_strongly_monotone(Eigen::Index d, double mu, double big_l,
                                     std::uint64_t seed,
                                     Placement placement = Placement::Randomized);
AffineProblem make_bilinear(Eigen::Index d, double s);
AffineProblem make_weak_minty(double eps);
AffineProblem make_star_cocoercive(Eigen::Index d, double ell, double min_eig,
                                   std::uint64_t seed,
                                   Placement placement = Placement::Randomized);

Vector evaluate(const AffineProblem& problem, const Vector& z);

// Random orthogonal matrix: QR of a seeded Gaussian matrix with the diagonal
// of R made positive.
Matrix random_orthogonal(Eigen::Index d, std::uint64_t seed);

double spectral_norm(const Matrix& a);
// Extreme eigenvalues of the symmetric part (A + A^T) / 2.
double min_sym_eigenvalue(const Matrix& a);
double max_sym_eigenvalue(const Matrix& a);

enum class Property { Monotone, StarMonotone, SNC, QSM, SC, Lipschitz };

std::string_view to_string(Property property);
Property property_from_string(std::string_view name);

struct ProbeReport {
  Property property = Property::Monotone;
  double radius = 0.0;
  std::int64_t n_samples = 0;
  double constant = 0.0;  // the constant the inequality was checked with
  double min_slack = 0.0;
  Vector worst_point;
};

// Samples the defining inequality of `property` in B_radius(x*) and reports
// the smallest left-minus-right margin. `constant` overrides the certified
// constant (e.g. SNC with rho = 0 to test star-monotonicity).
ProbeReport probe_property(const AffineProblem& problem, Property property,
                           double radius, std::int64_t n_samples,
                           std::uint64_t seed,
                           std::optional<double> constant = std::nullopt);

}  // namespace vipclip
