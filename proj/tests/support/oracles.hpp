#pragma once

// Reference computations used only by the tests. They avoid the library's
// own linear algebra so that agreement is meaningful.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

// Largest singular value by power iteration on A^T A.
inline double power_iteration_norm(const Eigen::MatrixXd& a, int iters = 20000) {
  Eigen::VectorXd v = Eigen::VectorXd::Ones(a.cols());
  v(0) += 0.5;  // avoid an unlucky orthogonal start on symmetric structures
  v.normalize();
  double est = 0.0;
  for (int i = 0; i < iters; ++i) {
    Eigen::VectorXd w = a.transpose() * (a * v);
    const double n = w.norm();
    if (n == 0.0) return 0.0;
    v = w / n;
    if (std::abs(n - est) <= 1e-15 * n) {
      est = n;
      break;
    }
    est = n;
  }
  return std::sqrt(est);
}

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
inline std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd s) {
  const int n = static_cast<int>(s.rows());
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += s(p, q) * s(p, q);
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(s(p, q)) < 1e-300) continue;
        const double theta = (s(q, q) - s(p, p)) / (2.0 * s(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (int k = 0; k < n; ++k) {
          const double skp = s(k, p), skq = s(k, q);
          s(k, p) = c * skp - sn * skq;
          s(k, q) = sn * skp + c * skq;
        }
        for (int k = 0; k < n; ++k) {
          const double spk = s(p, k), sqk = s(q, k);
          s(p, k) = c * spk - sn * sqk;
          s(q, k) = sn * spk + c * sqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = s(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

inline std::vector<double> sym_part_eigenvalues(const Eigen::MatrixXd& a) {
  return jacobi_eigenvalues(0.5 * (a + a.transpose()));
}

// Root of an increasing function on [lo, hi] by bisection.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iters = 200) {
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

// B with B ln^2 B = target (B >= 2), or 2 when the floor binds.
inline double bk_by_bisection(double target) {
  const double ln2 = std::log(2.0);
  if (target <= 2.0 * ln2 * ln2) return 2.0;
  return bisect([&](double b) { return b * std::log(b) * std::log(b) - target; }, 2.0,
                std::max(4.0, target + 10.0));
}

// Sample quantile by the (n - 1) p linear rule, computed from scratch.
inline double quantile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * p;
  const double lo = std::floor(h);
  const auto i = static_cast<std::size_t>(lo);
  if (i + 1 >= v.size()) return v.back();
  return v[i] + (h - lo) * (v[i + 1] - v[i]);
}

// Standard normal upper tail.
inline double normal_sf(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

// Student-t CDF by Simpson integration of the density.
inline double student_t_cdf(double x, double nu) {
  const double c = std::tgamma((nu + 1) / 2) / (std::sqrt(nu * M_PI) * std::tgamma(nu / 2));
  const auto pdf = [&](double t) { return c * std::pow(1 + t * t / nu, -(nu + 1) / 2); };
  const int n = 200000;
  const double a = 0.0, b = std::abs(x);
  const double h = (b - a) / n;
  double s = pdf(a) + pdf(b);
  for (int i = 1; i < n; ++i) s += pdf(a + i * h) * (i % 2 ? 4 : 2);
  const double half = s * h / 3;
  return x >= 0 ? 0.5 + half : 0.5 - half;
}

// Inverse of an increasing CDF by bisection.
inline double inverse_cdf(const std::function<double(double)>& cdf, double p) {
  return bisect([&](double x) { return cdf(x) - p; }, -100.0, 100.0);
}


// max_{|u - xs| <= R} <A u + b, x - u> for A + A^T PSD, as a trust-region
// problem: the objective is -v'Mv + h'v + const in v = u - xs, M the symmetric
// part. Solved in M's eigenbasis by bisection on the secular equation.
inline double gap_trust_region(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                               const Eigen::VectorXd& xs, const Eigen::VectorXd& x, double R) {
  const Eigen::MatrixXd m = 0.5 * (a + a.transpose());
  const Eigen::VectorXd h = a.transpose() * x - b - 2.0 * m * xs;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  const Eigen::VectorXd hq = es.eigenvectors().transpose() * h;
  const auto v_of = [&](double nu) {
    Eigen::VectorXd v(hq.size());
    for (Eigen::Index i = 0; i < hq.size(); ++i) {
      const double den = 2.0 * (lam(i) + nu);
      v(i) = den > 0.0 ? hq(i) / den : 0.0;
    }
    return v;
  };
  Eigen::VectorXd v = v_of(0.0);
  bool singular_direction = false;
  for (Eigen::Index i = 0; i < hq.size(); ++i) {
    if (lam(i) <= 1e-14 && std::abs(hq(i)) > 1e-14) singular_direction = true;
  }
  if (singular_direction || v.norm() > R) {
    double hi = 1.0;
    while (v_of(hi).norm() > R) hi *= 2.0;
    const double nu = bisect([&](double n) { return R - v_of(n).norm(); }, 0.0, hi);
    v = v_of(nu);
  }
  const Eigen::VectorXd u = es.eigenvectors() * v + xs;
  return (a * u + b).dot(x - u);
}

}  // namespace oracle
