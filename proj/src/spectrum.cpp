#include "twophase/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "power.hpp"
#include "twophase/errors.hpp"

namespace twophase {

using cplx = std::complex<double>;

double FarFieldJacobian::trace() const noexcept {
  return entries[0][0] + entries[1][1] + entries[2][2];
}

double FarFieldJacobian::determinant() const noexcept {
  const auto& m = entries;
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

double FarFieldJacobian::second_invariant() const noexcept {
  const auto& m = entries;
  return (m[1][1] * m[2][2] - m[1][2] * m[2][1]) + (m[0][0] * m[2][2] - m[0][2] * m[2][0]) +
         (m[0][0] * m[1][1] - m[0][1] * m[1][0]);
}

FarFieldJacobian assemble_jacobian(const ModelParams& params, const FarFieldData& far) {
  const double rp = far.rho_plus();
  const double np = far.n_plus();
  const double up = far.u_plus();
  const double mu = params.mu();
  const double phase1 = rp * up * up - params.A1() * params.gamma() * detail::power(rp, params.gamma());
  const double phase2 = np * up * up - params.A2() * params.alpha() * detail::power(np, params.alpha());

  FarFieldJacobian J;
  J.entries = {{
      {0.0, 1.0, 0.0},
      {np / mu, phase1 / (mu * up), -np / mu},
      {phase1 / (np * up), -mu / np, phase2 / (np * up)},
  }};
  J.regime = classify(params, far);
  return J;
}

FarFieldJacobian make_jacobian(const Mat3& entries, RegimeLabel regime) {
  FarFieldJacobian J;
  J.entries = entries;
  J.regime = regime;
  return J;
}

namespace {

cplx polish_root(cplx z, double a, double b, double c) {
  auto p = [&](cplx x) { return ((x + a) * x + b) * x + c; };
  auto dp = [&](cplx x) { return (3.0 * x + 2.0 * a) * x + b; };
  for (int it = 0; it < 8; ++it) {
    const cplx d = dp(z);
    if (d == cplx(0.0)) break;
    const cplx next = z - p(z) / d;
    if (!(std::abs(p(next)) < std::abs(p(z)))) break;
    z = next;
  }
  return z;
}

bool descending_real(const cplx& x, const cplx& y) {
  if (x.real() != y.real()) return x.real() > y.real();
  return x.imag() > y.imag();
}

CVec3 invert_columns(const std::array<CVec3, 3>& cols, std::array<CVec3, 3>& rows) {
  // Rows of P^{-1} for P = [c0 c1 c2] via cofactors.
  const auto& P0 = cols[0];
  const auto& P1 = cols[1];
  const auto& P2 = cols[2];
  auto cross = [](const CVec3& u, const CVec3& v) {
    return CVec3{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
  };
  auto dot = [](const CVec3& u, const CVec3& v) { return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]; };
  const CVec3 r0 = cross(P1, P2);
  const CVec3 r1 = cross(P2, P0);
  const CVec3 r2 = cross(P0, P1);
  const cplx det = dot(P0, r0);
  rows[0] = r0;
  rows[1] = r1;
  rows[2] = r2;
  for (auto& r : rows)
    for (auto& v : r) v /= det;
  return CVec3{det, 0.0, 0.0};
}

double rel_gap(double value, double reference) {
  return std::abs(value - reference) / std::max(1.0, std::abs(reference));
}

}  // namespace

CVec3 cubic_roots(double a, double b, double c) {
  const double q = (a * a - 3.0 * b) / 9.0;
  const double r = (a * (2.0 * a * a - 9.0 * b) + 27.0 * c) / 54.0;
  const double q3 = q * q * q;
  CVec3 roots;
  if (r * r < q3) {
    const double t = std::acos(std::clamp(r / std::sqrt(q3), -1.0, 1.0));
    const double s = -2.0 * std::sqrt(q);
    const double pi = std::numbers::pi;
    roots[0] = s * std::cos(t / 3.0) - a / 3.0;
    roots[1] = s * std::cos((t + 2.0 * pi) / 3.0) - a / 3.0;
    roots[2] = s * std::cos((t - 2.0 * pi) / 3.0) - a / 3.0;
  } else {
    const double A = -std::copysign(std::cbrt(std::abs(r) + std::sqrt(r * r - q3)), r);
    const double B = A == 0.0 ? 0.0 : q / A;
    roots[0] = A + B - a / 3.0;
    const double re = -0.5 * (A + B) - a / 3.0;
    const double im = 0.5 * std::sqrt(3.0) * (A - B);
    roots[1] = cplx(re, im);
    roots[2] = cplx(re, -im);
  }
  for (auto& z : roots) z = polish_root(z, a, b, c);
  // Keep complex pairs exactly conjugate after polishing.
  if (roots[1].imag() != 0.0 && std::abs(roots[1].imag()) > 1e-300 &&
      std::abs(roots[1] - std::conj(roots[2])) < 1e-8 * std::abs(roots[1])) {
    roots[2] = std::conj(roots[1]);
  }
  return roots;
}

std::array<int, 3> SpectrumReport::stable_indices(int& count) const {
  std::array<int, 3> idx{-1, -1, -1};
  count = 0;
  for (int i = 0; i < 3; ++i)
    if (lambda[i].real() < 0.0) idx[count++] = i;
  return idx;
}

double SpectrumReport::slowest_stable_rate() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& l : lambda)
    if (l.real() < 0.0) m = std::min(m, -l.real());
  return m;
}

double SpectrumReport::fastest_stable_rate() const {
  double m = 0.0;
  for (const auto& l : lambda)
    if (l.real() < 0.0) m = std::max(m, -l.real());
  return m;
}

SpectrumReport eigen_spectrum(const FarFieldJacobian& J) {
  SpectrumReport rep;
  rep.regime = J.regime;
  rep.trace = J.trace();
  rep.determinant = J.determinant();
  rep.second_invariant = J.second_invariant();

  CVec3 d = cubic_roots(-rep.trace, rep.second_invariant, -rep.determinant);
  std::sort(d.begin(), d.end(), descending_real);
  rep.descending = d;

  const double scale = std::max({1.0, std::abs(d[0]), std::abs(d[2])});
  const double real_tol = 1e-9 * scale;
  auto is_real = [&](const cplx& z) { return std::abs(z.imag()) <= real_tol; };
  auto fail = [&](const std::string& expected) {
    throw StructuralError("eigenvalue sign pattern does not match " +
                          std::string(to_string(J.regime.tag)) + " (M+ = " +
                          std::to_string(J.regime.mach) + "); expected " + expected);
  };

  switch (J.regime.tag) {
    case Regime::Supersonic:
      if (!(d[0].real() > 0.0 && d[1].real() > 0.0 && d[2].real() < 0.0 && is_real(d[2])))
        fail("Re l1 > 0, Re l2 > 0, l3 < 0");
      rep.lambda = {d[0], d[1], cplx(d[2].real(), 0.0)};
      break;
    case Regime::Subsonic:
      if (!(d[0].real() > 0.0 && is_real(d[0]) && d[1].real() < 0.0 && d[2].real() < 0.0))
        fail("Re l1 < 0, Re l2 < 0, l3 > 0");
      rep.lambda = {d[1], d[2], cplx(d[0].real(), 0.0)};
      break;
    case Regime::Sonic:
      if (!(d[0].real() > 0.0 && is_real(d[0]) && d[2].real() < 0.0 && is_real(d[2]) &&
            std::abs(d[1]) <= 1e-6 * scale))
        fail("l1 > 0, l2 < 0, l3 = 0");
      rep.lambda = {cplx(d[0].real(), 0.0), cplx(d[2].real(), 0.0), cplx(d[1].real(), 0.0)};
      break;
  }

  const auto& m = J.entries;
  for (int i = 0; i < 3; ++i) {
    const cplx l = rep.lambda[i];
    rep.right[i] = {1.0, l, (l * l - m[1][0] - m[1][1] * l) / m[1][2]};
  }
  invert_columns(rep.right, rep.left);

  cplx sum = 0.0, prod = 1.0, pair = 0.0;
  for (int i = 0; i < 3; ++i) {
    sum += rep.lambda[i];
    prod *= rep.lambda[i];
    for (int j = i + 1; j < 3; ++j) pair += rep.lambda[i] * rep.lambda[j];
  }
  rep.residuals.sum = std::abs(sum - rep.trace) / std::max(1.0, std::abs(rep.trace));
  rep.residuals.product = std::abs(prod - rep.determinant) / std::max(1.0, std::abs(rep.determinant));
  rep.residuals.pairwise =
      std::abs(pair - rep.second_invariant) / std::max(1.0, std::abs(rep.second_invariant));
  return rep;
}

SpectrumReport eigen_spectrum(const ModelParams& params, const FarFieldData& far) {
  SpectrumReport rep = eigen_spectrum(assemble_jacobian(params, far));
  const double rp = far.rho_plus();
  const double np = far.n_plus();
  const double up = far.u_plus();
  const double mu = params.mu();
  const double A1g = params.A1() * params.gamma();
  const double A2a = params.A2() * params.alpha();
  auto& pr = rep.printed;
  pr.product = -((np + rp) * up * up - (A1g * detail::power(rp, params.gamma()) +
                                        A2a * detail::power(rp, params.alpha()))) /
               (mu * up);
  pr.sum = (rp * up * up - A1g * detail::power(rp, params.gamma())) / (mu * up) +
           (np * up * up - A2a * detail::power(rp, params.alpha())) / (np * up);
  pr.pairwise = rp * (up * up - A1g * detail::power(rp, params.gamma() - 1.0)) *
                    (up * up - A2a * detail::power(rp, params.alpha() - 1.0)) / (mu * up * up) -
                1.0 - np / mu;
  pr.product_gap = rel_gap(pr.product, rep.determinant);
  pr.sum_gap = rel_gap(pr.sum, rep.trace);
  pr.pairwise_gap = rel_gap(pr.pairwise, rep.second_invariant);
  return rep;
}

}  // namespace twophase
