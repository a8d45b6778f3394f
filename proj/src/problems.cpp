#include "vipclip/problems.hpp"

#include "vipclip/random.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace vipclip {

AffineProblem::AffineProblem(Matrix matrix, Vector offset, Vector solution,
                             Constants constants, std::string label)
    : matrix_(std::move(matrix)),
      offset_(std::move(offset)),
      solution_(std::move(solution)),
      constants_(std::move(constants)),
      label_(std::move(label)) {
  const Eigen::Index d = offset_.size();
  require(d > 0, "problem dimension must be positive");
  require(matrix_.rows() == d && matrix_.cols() == d,
          "matrix must be square with the offset's dimension");
  require_dim(solution_.size(), d, "solution");
  require(matrix_.allFinite() && offset_.allFinite() && solution_.allFinite(),
          "problem data must be finite");
  require(constants_.lipschitz >= 0.0, "lipschitz constant must be nonnegative");
  require(constants_.qsm_mu >= 0.0, "qsm_mu must be nonnegative");
  require(!constants_.sc_ell || *constants_.sc_ell > 0.0,
          "sc_ell must be positive when present");
  require(!constants_.snc_rho || *constants_.snc_rho >= 0.0,
          "snc_rho must be nonnegative when present");

  const double residual = (matrix_ * solution_ + offset_).norm();
  if (residual > 1e-10 * (1.0 + offset_.norm())) {
    std::ostringstream msg;
    msg << "solution residual ||A x* + b|| = " << residual
        << " exceeds 1e-10 (1 + ||b||)";
    throw InvalidArgument(msg.str());
  }
}

void AffineProblem::validate_constants(double tol) const {
  const double norm = spectral_norm(matrix_);
  if (std::abs(norm - constants_.lipschitz) > tol * (1.0 + norm)) {
    std::ostringstream msg;
    msg << "lipschitz constant " << constants_.lipschitz
        << " does not match the spectral norm " << norm;
    throw InvalidArgument(msg.str());
  }
  if (constants_.qsm_mu > 0.0 &&
      min_sym_eigenvalue(matrix_) < constants_.qsm_mu - tol) {
    throw InvalidArgument("qsm_mu exceeds the smallest eigenvalue of sym(A)");
  }
  if (constants_.sc_ell && matrix_.isApprox(matrix_.transpose(), 1e-12)) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(matrix_);
    const auto& values = eig.eigenvalues();
    if (values.minCoeff() >= -tol && *constants_.sc_ell < values.maxCoeff() - tol)
      throw InvalidArgument("sc_ell is below the largest eigenvalue of A");
  }
}

bool AffineProblem::operator==(const AffineProblem& other) const {
  return matrix_ == other.matrix_ && offset_ == other.offset_ &&
         solution_ == other.solution_ && constants_ == other.constants_ &&
         label_ == other.label_;
}

Matrix random_orthogonal(Eigen::Index d, std::uint64_t seed) {
  CounterEngine engine{seed, channel::kConstruction, 0};
  Matrix gaussian(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) gaussian(i, j) = engine.standard_normal();
  Eigen::HouseholderQR<Matrix> qr(gaussian);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < d; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  return q;
}

double spectral_norm(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

double min_sym_eigenvalue(const Matrix& a) {
  const Matrix sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

double max_sym_eigenvalue(const Matrix& a) {
  const Matrix sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff();
}

namespace {

Vector random_solution(Eigen::Index d, std::uint64_t seed) {
  CounterEngine engine{seed, channel::kConstruction, 1};
  return sample_in_ball(d, 1.0, engine);
}

std::string format_label(const std::string& name, const std::string& args) {
  return "zoo:" + name + "(" + args + ")";
}

}  // namespace

AffineProblem make_strongly_monotone(Eigen::Index d, double mu, double big_l,
                                     std::uint64_t seed, Placement placement) {
  require(d > 0 && d % 2 == 0, "strongly_monotone: d must be even and positive");
  require(mu > 0.0, "strongly_monotone: mu must be positive");
  require(mu <= big_l, "strongly_monotone: mu must not exceed L");

  const double skew = std::sqrt(big_l * big_l - mu * mu);
  Matrix blocks = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; i += 2) {
    blocks(i, i) = mu;
    blocks(i + 1, i + 1) = mu;
    blocks(i, i + 1) = skew;
    blocks(i + 1, i) = -skew;
  }

  Matrix a = blocks;
  Vector x_star = Vector::Zero(d);
  if (placement == Placement::Randomized) {
    const Matrix q = random_orthogonal(d, seed);
    a = q * blocks * q.transpose();
    x_star = random_solution(d, seed);
  }
  Vector b = -(a * x_star);

  Constants c;
  c.lipschitz = big_l;
  c.qsm_mu = mu;
  // <Az, z> = mu |z|^2 and |Az|^2 = L^2 |z|^2, so ell = L^2 / mu is tight.
  c.sc_ell = big_l * big_l / mu;
  c.snc_rho = 0.0;
  std::ostringstream args;
  args << "d=" << d << ", mu=" << mu << ", L=" << big_l << ", seed=" << seed;
  return AffineProblem(std::move(a), std::move(b), std::move(x_star), c,
                       format_label("strongly_monotone", args.str()));
}

AffineProblem make_bilinear(Eigen::Index d, double s) {
  require(d > 0, "bilinear: d must be positive");
  require(s > 0.0, "bilinear: s must be positive");
  Matrix a = Matrix::Zero(2 * d, 2 * d);
  a.topRightCorner(d, d) = s * Matrix::Identity(d, d);
  a.bottomLeftCorner(d, d) = -s * Matrix::Identity(d, d);
  Constants c;
  c.lipschitz = s;
  c.qsm_mu = 0.0;
  c.snc_rho = 0.0;
  std::ostringstream args;
  args << "d=" << d << ", s=" << s;
  return AffineProblem(std::move(a), Vector::Zero(2 * d), Vector::Zero(2 * d), c,
                       format_label("bilinear", args.str()));
}

AffineProblem make_weak_minty(double eps) {
  require(eps > 0.0 && eps < 1.0, "weak_minty: eps must lie in (0, 1)");
  Matrix a(2, 2);
  a << -eps, 1.0, -1.0, -eps;
  Constants c;
  c.lipschitz = std::sqrt(1.0 + eps * eps);
  c.qsm_mu = 0.0;
  c.snc_rho = eps / (1.0 + eps * eps);
  std::ostringstream args;
  args << "eps=" << eps;
  return AffineProblem(std::move(a), Vector::Zero(2), Vector::Zero(2), c,
                       format_label("weak_minty", args.str()));
}

AffineProblem make_star_cocoercive(Eigen::Index d, double ell, double min_eig,
                                   std::uint64_t seed, Placement placement) {
  require(d > 0, "star_cocoercive: d must be positive");
  require(ell > 0.0, "star_cocoercive: ell must be positive");
  require(min_eig >= 0.0 && min_eig <= ell,
          "star_cocoercive: min_eig must lie in [0, ell]");

  Vector spectrum(d);
  if (d == 1) {
    spectrum[0] = ell;
  } else {
    CounterEngine engine{seed, channel::kConstruction, 2};
    spectrum[0] = min_eig;
    spectrum[d - 1] = ell;
    for (Eigen::Index i = 1; i + 1 < d; ++i)
      spectrum[i] = min_eig + (ell - min_eig) * engine.uniform01();
  }

  Matrix a = spectrum.asDiagonal();
  Vector x_star = Vector::Zero(d);
  if (placement == Placement::Randomized) {
    const Matrix q = random_orthogonal(d, seed);
    a = q * spectrum.asDiagonal() * q.transpose();
    a = 0.5 * (a + a.transpose()).eval();
    x_star = random_solution(d, seed);
  }
  Vector b = -(a * x_star);

  Constants c;
  c.lipschitz = ell;
  c.qsm_mu = d == 1 ? ell : min_eig;
  c.sc_ell = ell;
  c.snc_rho = 0.0;
  std::ostringstream args;
  args << "d=" << d << ", ell=" << ell << ", min_eig=" << min_eig
       << ", seed=" << seed;
  return AffineProblem(std::move(a), std::move(b), std::move(x_star), c,
                       format_label("star_cocoercive", args.str()));
}

Vector evaluate(const AffineProblem& problem, const Vector& z) {
  require_dim(z.size(), problem.dimension(), "evaluate");
  return problem.matrix() * z + problem.offset();
}

std::string_view to_string(Property property) {
  switch (property) {
    case Property::Monotone: return "monotone";
    case Property::StarMonotone: return "star_monotone";
    case Property::SNC: return "snc";
    case Property::QSM: return "qsm";
    case Property::SC: return "sc";
    case Property::Lipschitz: return "lipschitz";
  }
  return "unknown";
}

Property property_from_string(std::string_view name) {
  for (Property p : {Property::Monotone, Property::StarMonotone, Property::SNC,
                     Property::QSM, Property::SC, Property::Lipschitz}) {
    if (to_string(p) == name) return p;
  }
  throw InvalidArgument("unknown property '" + std::string(name) + "'");
}

namespace {

double certified_constant(const AffineProblem& problem, Property property) {
  const auto missing = [&](const char* what) -> double {
    throw MissingConstant(std::string(to_string(property)) + " probe needs " +
                          what + ", which problem '" + problem.label() +
                          "' does not certify");
  };
  switch (property) {
    case Property::Monotone:
    case Property::StarMonotone:
      return 0.0;
    case Property::SNC:
      return problem.snc_rho() ? *problem.snc_rho() : missing("snc_rho");
    case Property::QSM:
      return problem.qsm_mu();
    case Property::SC:
      return problem.sc_ell() ? *problem.sc_ell() : missing("sc_ell");
    case Property::Lipschitz:
      return problem.lipschitz();
  }
  return 0.0;
}

bool is_pairwise(Property property) {
  return property == Property::Monotone || property == Property::Lipschitz;
}

}  // namespace

ProbeReport probe_property(const AffineProblem& problem, Property property,
                           double radius, std::int64_t n_samples,
                           std::uint64_t seed, std::optional<double> constant) {
  require(radius > 0.0, "probe radius must be positive");
  require(n_samples >= 1, "probe needs at least one sample");
  const double k = constant ? *constant : certified_constant(problem, property);

  const Vector& x_star = problem.solution();
  const Eigen::Index d = problem.dimension();

  ProbeReport report;
  report.property = property;
  report.radius = radius;
  report.n_samples = n_samples;
  report.constant = k;
  report.min_slack = std::numeric_limits<double>::infinity();

  for (std::int64_t i = 0; i < n_samples; ++i) {
    CounterEngine engine{seed, channel::kProbe, static_cast<std::uint64_t>(i)};
    const Vector x = x_star + sample_in_ball(d, radius, engine);
    const Vector fx = evaluate(problem, x);
    double slack = 0.0;
    if (is_pairwise(property)) {
      const Vector y = x_star + sample_in_ball(d, radius, engine);
      const Vector fy = evaluate(problem, y);
      if (property == Property::Monotone)
        slack = (fx - fy).dot(x - y);
      else
        slack = k * (x - y).norm() - (fx - fy).norm();
    } else {
      const Vector dx = x - x_star;
      const double inner = fx.dot(dx);
      switch (property) {
        case Property::StarMonotone: slack = inner; break;
        case Property::SNC: slack = inner + k * fx.squaredNorm(); break;
        case Property::QSM: slack = inner - k * dx.squaredNorm(); break;
        case Property::SC: slack = k * inner - fx.squaredNorm(); break;
        default: break;
      }
    }
    if (slack < report.min_slack) {
      report.min_slack = slack;
      report.worst_point = x;
    }
  }
  return report;
}

}  // namespace vipclip
