#include "vipclip/problems.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace vipclip;

TEST_CASE("strongly monotone canonical block matches the hand eigencomputation") {
  const AffineProblem p = make_strongly_monotone(2, 1.0, 2.0, 0, Placement::Canonical);
  const double r3 = std::sqrt(3.0);
  CHECK(p.matrix()(0, 0) == doctest::Approx(1.0));
  CHECK(p.matrix()(0, 1) == doctest::Approx(r3));
  CHECK(p.matrix()(1, 0) == doctest::Approx(-r3));
  CHECK(p.matrix()(1, 1) == doctest::Approx(1.0));
  // [[1, c], [-c, 1]] is sqrt(1 + c^2) times a rotation, so sigma_max = 2.
  CHECK(oracle::power_iteration_norm(p.matrix()) == doctest::Approx(2.0).epsilon(1e-12));
  const auto ev = oracle::sym_part_eigenvalues(p.matrix());
  CHECK(ev[0] == doctest::Approx(1.0));
  CHECK(ev[1] == doctest::Approx(1.0));
}

TEST_CASE("strongly monotone with mu = L has no skew part") {
  const AffineProblem p = make_strongly_monotone(2, 1.0, 1.0, 0, Placement::Canonical);
  CHECK(p.matrix().isApprox(Matrix::Identity(2, 2)));
}

TEST_CASE("strongly monotone constants agree with independent eigen oracles") {
  const AffineProblem p = make_strongly_monotone(4, 0.5, 3.0, 7);
  const auto ev = oracle::sym_part_eigenvalues(p.matrix());
  CHECK(std::abs(ev.front() - 0.5) <= 1e-8);
  CHECK(std::abs(oracle::power_iteration_norm(p.matrix()) - 3.0) <= 1e-8);
  CHECK(p.qsm_mu() == 0.5);
  CHECK(p.lipschitz() == 3.0);
  CHECK_NOTHROW(p.validate_constants());
}

TEST_CASE("strongly monotone rejects odd d and mu > L") {
  CHECK_THROWS_AS(make_strongly_monotone(3, 1.0, 2.0, 0), InvalidArgument);
  CHECK_THROWS_AS(make_strongly_monotone(2, 3.0, 2.0, 0), InvalidArgument);
  CHECK_THROWS_AS(make_strongly_monotone(2, 0.0, 2.0, 0), InvalidArgument);
}

TEST_CASE("strongly monotone places x* away from the origin") {
  const AffineProblem p = make_strongly_monotone(6, 1.0, 2.0, 11);
  CHECK(p.solution().norm() > 0.0);
  CHECK(p.solution().norm() <= 1.0);
  CHECK(evaluate(p, p.solution()).norm() <= 1e-10);
}

TEST_CASE("bilinear evaluation and structure") {
  const AffineProblem p = make_bilinear(1, 1.0);
  Vector z(2);
  z << 1, 0;
  const Vector f = evaluate(p, z);
  CHECK(f(0) == 0.0);
  CHECK(f(1) == -1.0);
  Vector w(2);
  w << 2, 5;
  const Vector g = evaluate(p, w);
  CHECK(g(0) == 5.0);
  CHECK(g(1) == -2.0);

  const AffineProblem q = make_bilinear(3, 2.0);
  CHECK(q.dimension() == 6);
  CHECK(oracle::power_iteration_norm(q.matrix()) == doctest::Approx(2.0).epsilon(1e-12));
  for (int i = 0; i < 10; ++i) {
    const Vector u = Vector::Random(6);
    CHECK(std::abs(evaluate(q, u).dot(u)) <= 1e-12);
  }
  CHECK_THROWS_AS(make_bilinear(2, 0.0), InvalidArgument);
}

TEST_CASE("weak Minty instance: hand-evaluated SNC equality") {
  const AffineProblem p = make_weak_minty(0.5);
  CHECK(*p.snc_rho() == doctest::Approx(0.4));
  CHECK(p.lipschitz() == doctest::Approx(std::sqrt(1.25)));
  Vector z(2);
  z << 1, 0;
  const Vector f = evaluate(p, z);
  CHECK(f.dot(z) == doctest::Approx(-0.5));
  CHECK(f.squaredNorm() == doctest::Approx(1.25));
  CHECK(f.dot(z) + 0.4 * f.squaredNorm() == doctest::Approx(0.0));

  CHECK(probe_property(p, Property::SNC, 3.0, 5000, 1).min_slack >= -1e-10);
  CHECK(probe_property(p, Property::Monotone, 1.0, 100, 1).min_slack < 0.0);
  CHECK_THROWS_AS(make_weak_minty(0.0), InvalidArgument);
  CHECK_THROWS_AS(make_weak_minty(1.0), InvalidArgument);
}

TEST_CASE("weak Minty rho vanishes as eps shrinks") {
  CHECK(*make_weak_minty(1e-9).snc_rho() < 1e-8);
}

TEST_CASE("star-cocoercive instances") {
  const AffineProblem one = make_star_cocoercive(1, 2.0, 0.0, 0);
  CHECK(one.matrix()(0, 0) == doctest::Approx(2.0));
  Vector z(1);
  z << 5.0 + one.solution()(0);
  const Vector f = evaluate(one, z);
  const Vector dz = z - one.solution();
  CHECK(f.squaredNorm() == doctest::Approx(100.0));
  CHECK(2.0 * f.dot(dz) == doctest::Approx(100.0));

  const AffineProblem id = make_star_cocoercive(3, 1.0, 1.0, 5);
  CHECK(id.matrix().isApprox(Matrix::Identity(3, 3), 1e-12));

  const AffineProblem p = make_star_cocoercive(4, 3.0, 0.1, 2);
  CHECK(probe_property(p, Property::SC, 1.0, 10000, 4).min_slack >= -1e-10);
  const auto ev = oracle::jacobi_eigenvalues(p.matrix());
  CHECK(ev.front() == doctest::Approx(0.1).epsilon(1e-10));
  CHECK(ev.back() == doctest::Approx(3.0).epsilon(1e-10));
  CHECK_THROWS_AS(make_star_cocoercive(3, 1.0, 2.0, 0), InvalidArgument);
}

TEST_CASE("evaluate checks dimensions and vanishes at the solution") {
  const AffineProblem id(Matrix::Identity(2, 2), Vector::Zero(2), Vector::Zero(2),
                         Constants{1.0, 1.0, 1.0, 0.0});
  Vector z(2);
  z << 3, 4;
  CHECK(evaluate(id, z) == z);
  CHECK_THROWS_AS(evaluate(id, Vector::Zero(3)), DimensionMismatch);
}

TEST_CASE("problem constructor rejects a wrong solution") {
  CHECK_THROWS_AS(AffineProblem(Matrix::Identity(2, 2), Vector::Ones(2), Vector::Zero(2),
                                Constants{1.0, 0.0, {}, {}}),
                  InvalidArgument);
}

TEST_CASE("validate_constants catches inconsistent constants") {
  const AffineProblem bad_l(Matrix::Identity(2, 2), Vector::Zero(2), Vector::Zero(2),
                            Constants{2.0, 0.0, {}, {}});
  CHECK_THROWS_AS(bad_l.validate_constants(), InvalidArgument);
  const AffineProblem bad_mu(Matrix::Identity(2, 2), Vector::Zero(2), Vector::Zero(2),
                             Constants{1.0, 1.5, {}, {}});
  CHECK_THROWS_AS(bad_mu.validate_constants(), InvalidArgument);
  const AffineProblem bad_ell(2.0 * Matrix::Identity(2, 2), Vector::Zero(2), Vector::Zero(2),
                              Constants{2.0, 0.0, 1.0, {}});
  CHECK_THROWS_AS(bad_ell.validate_constants(), InvalidArgument);
}

TEST_CASE("probe on the identity finds no monotonicity violation") {
  const AffineProblem id(Matrix::Identity(3, 3), Vector::Zero(3), Vector::Zero(3),
                         Constants{1.0, 1.0, 1.0, 0.0});
  for (double r : {0.1, 1.0, 10.0}) {
    const ProbeReport rep = probe_property(id, Property::Monotone, r, 500, 3);
    CHECK(rep.min_slack >= 0.0);
    CHECK(rep.n_samples == 500);
    CHECK(rep.worst_point.size() == 3);
  }
}

TEST_CASE("QSM probe on a strongly monotone instance") {
  const AffineProblem p = make_strongly_monotone(2, 1.0, 2.0, 9);
  CHECK(probe_property(p, Property::QSM, 1.0, 10000, 2).min_slack >= -1e-8);
}

TEST_CASE("probes report missing constants") {
  const AffineProblem b = make_bilinear(2, 1.0);
  CHECK_THROWS_AS(probe_property(b, Property::SC, 1.0, 10, 0), MissingConstant);
  const AffineProblem plain(Matrix::Identity(2, 2), Vector::Zero(2), Vector::Zero(2),
                            Constants{1.0, 0.0, {}, {}});
  CHECK_THROWS_AS(probe_property(plain, Property::SNC, 1.0, 10, 0), MissingConstant);
  CHECK_NOTHROW(probe_property(plain, Property::SNC, 1.0, 10, 0, 0.0));
}

TEST_CASE("property: certified constants survive probing for every zoo constructor") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const std::vector<AffineProblem> zoo = {
        make_strongly_monotone(4, 0.3, 2.5, seed), make_bilinear(2, 1.5),
        make_weak_minty(0.2 + 0.1 * static_cast<double>(seed)),
        make_star_cocoercive(5, 2.0, 0.2, seed)};
    for (const auto& p : zoo) {
      CHECK(evaluate(p, p.solution()).norm() <= 1e-10);
      for (double radius : {0.5, 3.0, 10.0}) {
        for (Property prop : {Property::Lipschitz, Property::SNC, Property::QSM}) {
          if (prop == Property::QSM && p.qsm_mu() == 0.0) continue;
          const ProbeReport rep = probe_property(p, prop, radius, 2000, seed);
          CHECK(rep.min_slack >= -1e-8 * (1.0 + radius * radius));
        }
        if (p.sc_ell()) {
          CHECK(probe_property(p, Property::SC, radius, 2000, seed).min_slack >=
                -1e-8 * (1.0 + radius * radius));
        }
      }
    }
  }
}

TEST_CASE("property: bilinear is star-monotone with equality") {
  const AffineProblem p = make_bilinear(3, 2.0);
  const ProbeReport rep = probe_property(p, Property::QSM, 5.0, 5000, 1, 0.0);
  CHECK(std::abs(rep.min_slack) <= 1e-12);
}

TEST_CASE("property: constructors are deterministic in (parameters, seed)") {
  CHECK(make_strongly_monotone(6, 0.5, 2.0, 42) == make_strongly_monotone(6, 0.5, 2.0, 42));
  CHECK(make_star_cocoercive(5, 1.0, 0.1, 42) == make_star_cocoercive(5, 1.0, 0.1, 42));
  CHECK_FALSE(make_strongly_monotone(6, 0.5, 2.0, 42) == make_strongly_monotone(6, 0.5, 2.0, 43));
}

TEST_CASE("property: a passing QSM probe implies a passing star-monotone probe") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const AffineProblem p = make_strongly_monotone(4, 0.7, 1.5, seed);
    const ProbeReport qsm = probe_property(p, Property::QSM, 2.0, 3000, seed);
    REQUIRE(qsm.min_slack >= -1e-8);
    CHECK(probe_property(p, Property::SNC, 2.0, 3000, seed, 0.0).min_slack >= -1e-8);
  }
}

TEST_CASE("random orthogonal matrices are orthogonal and reproducible") {
  const Matrix q = random_orthogonal(5, 3);
  CHECK((q.transpose() * q - Matrix::Identity(5, 5)).norm() <= 1e-12);
  CHECK(q == random_orthogonal(5, 3));
}

TEST_CASE("property names round-trip") {
  for (Property p : {Property::Monotone, Property::StarMonotone, Property::SNC, Property::QSM,
                     Property::SC, Property::Lipschitz}) {
    CHECK(property_from_string(to_string(p)) == p);
  }
  CHECK_THROWS_AS(property_from_string("nope"), InvalidArgument);
}
