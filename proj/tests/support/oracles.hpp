#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library's numerics; only plain data types are shared.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>
#include <vector>

#include "twophase/model.hpp"
#include "twophase/stationary.hpp"

namespace oracle {

struct FarState {
  double A1, A2, gamma, alpha, mu;
  double rho, n, u;  // far-field values
};

inline FarState far_state(const twophase::ModelParams& p, const twophase::FarFieldData& f) {
  return {p.A1(), p.A2(), p.gamma(), p.alpha(), p.mu(), f.rho_plus(), f.n_plus(), f.u_plus()};
}

/// Stationary first-order system in (u, u_x, v), derived directly from the
/// momentum equations with the mass fluxes m1 = rho u, m2 = n v frozen at
/// their far-field values and phase 2 integrated once from infinity.
inline Eigen::Vector3d stationary_field(const FarState& s, const Eigen::Vector3d& y) {
  const double m1 = s.rho * s.u, m2 = s.n * s.u;
  const double u = y[0], w = y[1], v = y[2];
  const double rho = m1 / u, n = m2 / v;
  const double p1 = s.A1 * std::pow(rho, s.gamma), p1p = s.A1 * std::pow(s.rho, s.gamma);
  const double p2 = s.A2 * std::pow(n, s.alpha), p2p = s.A2 * std::pow(s.n, s.alpha);
  const double dp1 = s.A1 * s.gamma * std::pow(rho, s.gamma - 1.0);
  Eigen::Vector3d f;
  f[0] = w;
  f[1] = ((m1 - dp1 * rho / u) * w - n * (v - u)) / s.mu;
  f[2] = (m1 * (u - s.u) + (p1 - p1p) + m2 * (v - s.u) + (p2 - p2p) - s.mu * w) / n;
  return f;
}

/// Jacobian of stationary_field at the far state by centered differences.
inline Eigen::Matrix3d jacobian_fd(const FarState& s, double h = 1e-6) {
  Eigen::Matrix3d J;
  const Eigen::Vector3d y0(s.u, 0.0, s.u);
  for (int j = 0; j < 3; ++j) {
    Eigen::Vector3d e = Eigen::Vector3d::Zero();
    e[j] = h;
    J.col(j) = (stationary_field(s, y0 + e) - stationary_field(s, y0 - e)) / (2.0 * h);
  }
  return J;
}

inline std::array<std::complex<double>, 3> eigenvalues(const Eigen::Matrix3d& J) {
  Eigen::EigenSolver<Eigen::Matrix3d> es(J, false);
  std::array<std::complex<double>, 3> out;
  for (int i = 0; i < 3; ++i) out[i] = es.eigenvalues()[i];
  std::sort(out.begin(), out.end(), [](auto a, auto b) { return a.real() > b.real(); });
  return out;
}

/// Characteristic invariants of a 3x3 matrix.
struct Invariants {
  double trace, det, c2;
};

inline Invariants invariants(const std::array<std::array<double, 3>, 3>& m) {
  Eigen::Matrix3d J;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) J(i, j) = m[i][j];
  const double c2 = J(0, 0) * J(1, 1) - J(0, 1) * J(1, 0) + J(0, 0) * J(2, 2) - J(0, 2) * J(2, 0) +
                    J(1, 1) * J(2, 2) - J(1, 2) * J(2, 1);
  return {J.trace(), J.determinant(), c2};
}

/// Slowest decay rate min |Re l| over eigenvalues with negative real part.
inline double slowest_stable_rate(const Eigen::Matrix3d& J) {
  double best = INFINITY;
  for (auto l : eigenvalues(J))
    if (l.real() < 0.0) best = std::min(best, -l.real());
  return best;
}

/// Quadratic coefficient a of the center dynamics s' = a s^2 at a sonic far
/// state: a = l . D^2F(r, r) / 2 with l . r = 1, by second differences of the
/// vector field along the null direction.
inline double center_coefficient(const FarState& s) {
  const Eigen::Matrix3d J = jacobian_fd(s, 1e-7);
  Eigen::EigenSolver<Eigen::Matrix3d> es(J);
  int k = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(es.eigenvalues()[i]) < std::abs(es.eigenvalues()[k])) k = i;
  Eigen::Vector3d r = es.eigenvectors().col(k).real();
  r /= r[0];
  Eigen::EigenSolver<Eigen::Matrix3d> et(J.transpose());
  int kl = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(et.eigenvalues()[i]) < std::abs(et.eigenvalues()[kl])) kl = i;
  Eigen::Vector3d l = et.eigenvectors().col(kl).real();
  l /= l.dot(r);
  const Eigen::Vector3d y0(s.u, 0.0, s.u);
  const double eps = 1e-4;
  const Eigen::Vector3d d2 =
      (stationary_field(s, y0 + eps * r) + stationary_field(s, y0 - eps * r)) / (eps * eps);
  return 0.5 * l.dot(d2);
}

/// Residuals of the second-order stationary equations
///   (rho u^2 + p1)_x - mu u_xx - n (v - u) = 0
///   (n v^2 + p2)_x - (n v_x)_x + n (v - u) = 0
/// by fourth-order central differences on interior nodes, each scaled by the
/// largest magnitude of its individual terms.
inline double momentum_residual(const twophase::ModelParams& p, const twophase::StationaryProfile& prof) {
  const std::size_t N = prof.size();
  const double h = prof.x[1] - prof.x[0];
  std::vector<double> G1(N), G2(N), nvx(N);
  for (std::size_t i = 0; i < N; ++i) {
    // Subtract the far-field value so the differenced quantity is small.
    const double rp = prof.rho_plus, np = prof.n_plus, up = prof.u_plus;
    G1[i] = (prof.rho[i] * prof.u[i] * prof.u[i] - rp * up * up) +
            p.A1() * (std::pow(prof.rho[i], p.gamma()) - std::pow(rp, p.gamma()));
    G2[i] = (prof.n[i] * prof.v[i] * prof.v[i] - np * up * up) +
            p.A2() * (std::pow(prof.n[i], p.alpha()) - std::pow(np, p.alpha()));
  }
  auto d1 = [&](const std::vector<double>& f, std::size_t i) {
    return (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
  };
  auto d2 = [&](const std::vector<double>& f, std::size_t i) {
    return (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) / (12.0 * h * h);
  };
  for (std::size_t i = 2; i + 2 < N; ++i) nvx[i] = prof.n[i] * d1(prof.dv, i);
  double r1 = 0.0, r2 = 0.0, s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 4; i + 4 < N; ++i) {
    const double drag = prof.n[i] * (prof.dv[i] - prof.du[i]);
    const double a = d1(G1, i), b = p.mu() * d2(prof.du, i);
    const double c = d1(G2, i), d = d1(nvx, i);
    r1 = std::max(r1, std::abs(a - b - drag));
    r2 = std::max(r2, std::abs(c - d + drag));
    s1 = std::max({s1, std::abs(a), std::abs(b), std::abs(drag)});
    s2 = std::max({s2, std::abs(c), std::abs(d), std::abs(drag)});
  }
  return std::max(s1 > 0.0 ? r1 / s1 : r1, s2 > 0.0 ? r2 / s2 : r2);
}

/// rho * int_ref^rho (A s^e - A ref^e) / s^2 ds by 61-point Gauss-Kronrod.
inline double relative_entropy(double A, double e, double ref, double rho) {
  auto f = [&](double s) { return (A * std::pow(s, e) - A * std::pow(ref, e)) / (s * s); };
  const double I = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, ref, rho, 15, 1e-15);
  return rho * I;
}

/// Squared H1 norm of A exp(-(x-c)^2/(2 s^2)) over the whole line.
inline double gaussian_h1_sq(double A, double s) {
  return A * A * std::sqrt(M_PI) * (s + 1.0 / (2.0 * s));
}

}  // namespace oracle
