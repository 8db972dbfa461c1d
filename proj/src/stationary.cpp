#include "twophase/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <string>

#include <fmt/format.h>

#include "power.hpp"
#include "twophase/errors.hpp"
#include "twophase/ode.hpp"

namespace twophase {

namespace {

using Ode = Dopri5<3>;
using cplx = std::complex<double>;

constexpr double kRtol = 1e-10;
// Forward marching amplifies integration noise along the unstable direction
// before it is projected out, so it runs tighter than the shooting solves.
constexpr double kMarchRtol = 1e-12;
constexpr double kTolBc = 1e-8;
constexpr int kRootBudget = 60;
constexpr double kInf = std::numeric_limits<double>::infinity();

double inf_norm(const Vec3& y) {
  return std::max({std::abs(y[0]), std::abs(y[1]), std::abs(y[2])});
}

double dot_real(const CVec3& l, const Vec3& y) {
  return (l[0] * y[0] + l[1] * y[1] + l[2] * y[2]).real();
}

CenterManifoldData center_data(const ModelParams& p, const FarFieldData& far) {
  const double rp = far.rho_plus();
  const double np = far.n_plus();
  const double up = far.u_plus();
  const double mu = p.mu();
  CenterManifoldData c;
  c.b = rp * (up * up - p.A1() * p.gamma() * detail::power(rp, p.gamma() - 1.0)) /
        (std::abs(up) * std::sqrt((mu + np) * np));
  const double num = p.A1() * p.gamma() * (p.gamma() + 1.0) * detail::power(rp, p.gamma()) +
                     p.A2() * p.alpha() * (p.alpha() + 1.0) * detail::power(np, p.alpha());
  c.a = num / (2.0 * up * up * (mu + np) * (1.0 + c.b * c.b));
  return c;
}

/// Real eigen-frame y = P z of the far-field linearisation. A complex pair
/// (l, conj l) with eigenvector r occupies two columns (Re r, Im r).
struct EigenFrame {
  Mat3 P{}, Pinv{};

  Vec3 to_y(const Vec3& z) const { return apply(P, z); }
  Vec3 to_z(const Vec3& y) const { return apply(Pinv, y); }

  static Vec3 apply(const Mat3& M, const Vec3& v) {
    Vec3 r{};
    for (int i = 0; i < 3; ++i) r[i] = M[i][0] * v[0] + M[i][1] * v[1] + M[i][2] * v[2];
    return r;
  }
};

Mat3 inverse(const Mat3& m) {
  Mat3 inv;
  inv[0][0] = m[1][1] * m[2][2] - m[1][2] * m[2][1];
  inv[0][1] = m[0][2] * m[2][1] - m[0][1] * m[2][2];
  inv[0][2] = m[0][1] * m[1][2] - m[0][2] * m[1][1];
  inv[1][0] = m[1][2] * m[2][0] - m[1][0] * m[2][2];
  inv[1][1] = m[0][0] * m[2][2] - m[0][2] * m[2][0];
  inv[1][2] = m[0][2] * m[1][0] - m[0][0] * m[1][2];
  inv[2][0] = m[1][0] * m[2][1] - m[1][1] * m[2][0];
  inv[2][1] = m[0][1] * m[2][0] - m[0][0] * m[2][1];
  inv[2][2] = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  const double det = m[0][0] * inv[0][0] + m[0][1] * inv[1][0] + m[0][2] * inv[2][0];
  for (auto& row : inv)
    for (auto& v : row) v /= det;
  return inv;
}

/// Linearised solutions on the stable subspace, expressed in the eigen-frame:
/// one real mode, two real modes, or one complex-conjugate pair.
struct StableBasis {
  EigenFrame frame;
  int modes = 0;
  bool complex_pair = false;
  cplx lambda[2];
  int column[2] = {-1, -1};

  Vec3 eval_z(double x, const std::vector<double>& s, double scale) const {
    Vec3 z{0.0, 0.0, 0.0};
    if (complex_pair) {
      const cplx c = scale * cplx(s[0], s[1]) * std::exp(lambda[0] * x);
      z[column[0]] = c.real();
      z[column[1]] = -c.imag();
      return z;
    }
    for (int k = 0; k < modes; ++k) z[column[k]] = scale * s[k] * std::exp(lambda[k].real() * x);
    return z;
  }
  Vec3 eval(double x, const std::vector<double>& s, double scale) const {
    return frame.to_y(eval_z(x, s, scale));
  }

  double slowest_rate() const {
    double m = kInf;
    for (int k = 0; k < modes; ++k) m = std::min(m, -lambda[k].real());
    return m;
  }
  double fastest_rate() const {
    double m = 0.0;
    for (int k = 0; k < modes; ++k) m = std::max(m, -lambda[k].real());
    return m;
  }
};

StableBasis stable_basis(const SpectrumReport& spec) {
  StableBasis b;
  int partner[3] = {-1, -1, -1};
  for (int i = 0; i < 3; ++i) {
    if (spec.lambda[i].imag() <= 0.0) continue;
    for (int j = 0; j < 3; ++j)
      if (j != i && spec.lambda[j].imag() < 0.0) partner[i] = j;
  }
  for (int i = 0; i < 3; ++i) {
    const CVec3& r = spec.right[i];
    if (spec.lambda[i].imag() < 0.0) continue;
    for (int k = 0; k < 3; ++k) b.frame.P[k][i] = r[k].real();
    if (partner[i] >= 0)
      for (int k = 0; k < 3; ++k) b.frame.P[k][partner[i]] = r[k].imag();
    if (spec.lambda[i].real() >= 0.0) continue;
    b.lambda[b.modes] = spec.lambda[i];
    b.column[b.modes] = i;
    ++b.modes;
    if (partner[i] >= 0) {
      b.complex_pair = true;
      b.column[1] = partner[i];
      b.lambda[1] = std::conj(spec.lambda[i]);
      b.modes = 2;
    }
  }
  b.frame.Pinv = inverse(b.frame.P);
  return b;
}

struct GridSampler {
  const StationaryOde& ode;
  const FarFieldData& far;
  StationaryProfile& prof;

  void set(std::size_t j, const Vec3& y) const {
    const double up = far.u_plus();
    const Vec3 f = ode.rhs(y);
    prof.du[j] = y[0];
    prof.dv[j] = y[2];
    prof.ux[j] = y[1];
    prof.vx[j] = f[2];
    prof.u[j] = up + y[0];
    prof.v[j] = up + y[2];
    prof.rho[j] = far.rho_plus() * up / prof.u[j];
    prof.n[j] = far.n_plus() * up / prof.v[j];
  }
};

void allocate(StationaryProfile& p, std::size_t n, double length) {
  if (n < 5) throw DomainError("grid needs at least 5 nodes");
  p.length = length;
  p.x.resize(n);
  for (std::size_t j = 0; j < n; ++j) p.x[j] = length * static_cast<double>(j) / static_cast<double>(n - 1);
  p.x.back() = length;
  for (auto* v : {&p.rho, &p.u, &p.n, &p.v, &p.du, &p.dv, &p.ux, &p.vx}) v->assign(n, 0.0);
}

void finish(const ModelParams& params, const FarFieldData& far, StationaryProfile& p) {
  const double m1 = far.rho_plus() * far.u_plus();
  const double m2 = far.n_plus() * far.u_plus();
  double flux = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (!(p.rho[j] > 0.0) || !(p.n[j] > 0.0)) throw BlowUpError("profile density lost positivity");
    flux = std::max({flux, std::abs(p.rho[j] * p.u[j] - m1) / m1, std::abs(p.n[j] * p.v[j] - m2) / m2});
  }
  p.flux_error = flux;
  const double db = far.offset();
  p.boundary_mismatch = std::max(std::abs(p.du.front() - db), std::abs(p.dv.front() - db));
  p.tail_deviation = std::max(std::abs(p.du.back()), std::abs(p.dv.back())) / far.u_plus();
  p.residual_norm = profile_residual(params, far, p);
}

/// Damped Newton on an m-dimensional shooting map (m = 1 or 2) with a
/// forward-difference Jacobian. Returns the number of iterations used.
int damped_newton(const std::function<std::vector<double>(const std::vector<double>&)>& F,
                  std::vector<double>& s, double tol, double& final_norm) {
  const std::size_t m = s.size();
  auto norm = [](const std::vector<double>& r) {
    double v = 0.0;
    for (double x : r) v = std::max(v, std::abs(x));
    return std::isfinite(v) ? v : kInf;
  };
  std::vector<double> r = F(s);
  double nr = norm(r);
  int it = 0;
  for (; it < kRootBudget && nr > tol; ++it) {
    std::vector<std::vector<double>> J(m, std::vector<double>(m));
    for (std::size_t k = 0; k < m; ++k) {
      std::vector<double> sp = s;
      const double h = 1e-7 * std::max(1.0, std::abs(s[k]));
      sp[k] += h;
      const auto rp = F(sp);
      for (std::size_t i = 0; i < m; ++i) J[i][k] = (rp[i] - r[i]) / h;
    }
    std::vector<double> step(m);
    if (m == 1) {
      step[0] = -r[0] / J[0][0];
    } else {
      const double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
      step[0] = -(J[1][1] * r[0] - J[0][1] * r[1]) / det;
      step[1] = -(-J[1][0] * r[0] + J[0][0] * r[1]) / det;
    }
    if (!std::isfinite(step[0]) || (m == 2 && !std::isfinite(step[1]))) break;
    double lam = 1.0;
    bool improved = false;
    for (int d = 0; d < 30; ++d, lam *= 0.5) {
      std::vector<double> trial = s;
      for (std::size_t k = 0; k < m; ++k) trial[k] += lam * step[k];
      const auto rt = F(trial);
      const double nt = norm(rt);
      if (nt < nr) {
        s = trial;
        r = rt;
        nr = nt;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  final_norm = nr;
  return it;
}

/// Bracketing bisection for the scalar shooting map; used when Newton stalls.
int bisect(const std::function<double(double)>& f, double s0, double& s, double tol) {
  double lo = s0, hi = s0;
  double flo = f(lo), fhi = flo;
  int it = 0;
  double width = std::max(1.0, std::abs(s0));
  while (std::isfinite(flo) && std::isfinite(fhi) && flo * fhi > 0.0 && it < kRootBudget) {
    lo = s0 - width;
    hi = s0 + width;
    flo = f(lo);
    fhi = f(hi);
    width *= 2.0;
    ++it;
  }
  if (!(flo * fhi <= 0.0)) return it;
  for (; it < kRootBudget; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (std::abs(fm) <= tol) {
      s = mid;
      return it;
    }
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  s = 0.5 * (lo + hi);
  return it;
}

StationaryProfile constant_profile(const ModelParams& params, const FarFieldData& far,
                                   const GridSpec& spec, RegimeLabel regime) {
  StationaryProfile p;
  p.regime = regime;
  p.solver = spec.force_regime.value_or(regime.tag);
  p.delta = 0.0;
  p.u_plus = far.u_plus();
  p.rho_plus = far.rho_plus();
  p.n_plus = far.n_plus();
  allocate(p, spec.nodes, spec.length > 0.0 ? spec.length : 50.0);
  for (std::size_t j = 0; j < p.size(); ++j) {
    p.rho[j] = far.rho_plus();
    p.u[j] = far.u_plus();
    p.n[j] = far.n_plus();
    p.v[j] = far.u_plus();
  }
  finish(params, far, p);
  return p;
}

/// Backward shooting on the stable manifold (one- or two-dimensional). The
/// seed point is pulled in far enough that a fast stable mode is not lost
/// below the relative tolerance of the slow one.
void shoot_stable(const StationaryOde& ode, const FarFieldData& far, const SpectrumReport& spectrum,
                  StationaryProfile& prof) {
  const StableBasis basis = stable_basis(spectrum);
  const EigenFrame& frame = basis.frame;
  const double db = far.offset();
  const double L = prof.length;
  const double gap = basis.fastest_rate() - basis.slowest_rate();
  double xs = std::min({L, 36.0 / basis.slowest_rate(), 640.0 / basis.fastest_rate()});
  if (basis.modes == 2 && !basis.complex_pair && gap > 0.0) xs = std::min(xs, 12.0 / gap);

  struct Shot {
    Vec3 y0;
    Ode::Dense dense;
  };
  auto integrate = [&](const std::vector<double>& s, bool dense) {
    const Vec3 seed = basis.eval(xs, s, db);
    Ode::Options opt;
    opt.rtol = kRtol;
    opt.atol = 1e-3 * kRtol * std::max(inf_norm(seed), 1e-300);
    opt.dense = dense;
    auto res = Ode::integrate(ode, xs, seed, 0.0, opt);
    return Shot{res.y, std::move(res.dense)};
  };

  double final_norm = kInf;
  std::vector<double> s;
  if (basis.modes == 1) {
    // One-dimensional manifold: only u(0) = u- can be imposed.
    s = {1.0 / frame.P[0][basis.column[0]]};
    auto f = [&](double sv) {
      try {
        return (integrate({sv}, false).y0[0] - db) / std::abs(db);
      } catch (const std::runtime_error&) {
        return kInf;
      }
    };
    auto F = [&](const std::vector<double>& sv) { return std::vector<double>{f(sv[0])}; };
    prof.iterations = damped_newton(F, s, 1e-13, final_norm);
    if (final_norm * std::abs(db) > 1e-3 * kTolBc) {
      double sb = s[0];
      prof.iterations += bisect(f, s[0], sb, 1e-13);
      s[0] = sb;
      final_norm = std::abs(f(sb));
    }
  } else {
    // Linear guess: impose u(0) = v(0) = u- on the linear stable subspace.
    const Vec3 e0 = basis.eval(0.0, {1.0, 0.0}, 1.0);
    const Vec3 e1 = basis.eval(0.0, {0.0, 1.0}, 1.0);
    const double det = e0[0] * e1[2] - e1[0] * e0[2];
    s = {(e1[2] - e1[0]) / det, (e0[0] - e0[2]) / det};
    auto F = [&](const std::vector<double>& sv) {
      try {
        const Vec3 y0 = integrate(sv, false).y0;
        return std::vector<double>{(y0[0] - db) / std::abs(db), (y0[2] - db) / std::abs(db)};
      } catch (const std::runtime_error&) {
        return std::vector<double>{kInf, kInf};
      }
    };
    prof.iterations = damped_newton(F, s, 1e-13, final_norm);
  }
  prof.shooting_params = s;

  const Shot shot = integrate(s, true);
  const double mismatch_u = std::abs(shot.y0[0] - db);
  const double mismatch_v = std::abs(shot.y0[2] - db);
  if (!(mismatch_u <= kTolBc)) {
    throw NoProfileError(fmt::format("stable-manifold shooting did not reach u(0) = u- "
                                     "(|mismatch| = {:.3e}); u- lies outside the empirical "
                                     "admissible set",
                                     mismatch_u),
                         mismatch_u);
  }
  if (!(mismatch_v <= kTolBc)) {
    throw NoProfileError(
        fmt::format("the {}-dimensional stable manifold through u(0) = u- reaches v(0) - u+ = {:.6e} "
                    "instead of {:.6e} (|mismatch| = {:.3e}); no profile with v(0) = u-",
                    basis.modes, shot.y0[2], db, mismatch_v),
        mismatch_v);
  }

  GridSampler sampler{ode, far, prof};
  for (std::size_t j = 0; j < prof.size(); ++j) {
    const double x = prof.x[j];
    sampler.set(j, x <= xs ? shot.dense(x) : basis.eval(x, s, db));
  }
}

/// Forward marching on the center-stable manifold. Each segment fixes
/// (u, v) at its left end and chooses u_x so the unstable coordinate
/// vanishes a horizon T ahead; only the first half of the segment is kept.
void march_center_stable(const StationaryOde& ode, const FarFieldData& far,
                         const SpectrumReport& spectrum, StationaryProfile& prof) {
  const double db = far.offset();
  const CVec3& ell_u = spectrum.left[0];
  const double lam_u = spectrum.lambda[0].real();
  const double horizon = 20.0 / lam_u;
  const double keep = 4.0 / lam_u;

  Ode::Options opt;
  opt.rtol = kMarchRtol;
  opt.dense = false;

  auto leak = [&](const Vec3& y, double T) {
    Ode::Options o = opt;
    o.atol = 1e-3 * kMarchRtol * inf_norm(y);
    return dot_real(ell_u, Ode::integrate(ode, 0.0, y, T, o).y);
  };

  auto solve_slope = [&](Vec3 y, double T) {
    const double scale = inf_norm(y);
    double w0 = y[1];
    auto g = [&](double w) {
      Vec3 t = y;
      t[1] = w;
      return leak(t, T);
    };
    double g0 = g(w0);
    double w1 = w0 + 1e-6 * scale;
    for (int it = 0; it < 40; ++it) {
      const double g1 = g(w1);
      if (g1 == g0 || g1 == 0.0) break;
      const double w2 = w1 - g1 * (w1 - w0) / (g1 - g0);
      w0 = w1;
      g0 = g1;
      w1 = w2;
      if (std::abs(w1 - w0) <= 1e-15 * scale) break;
    }
    return w1;
  };

  // Linear projection onto span{stable, center} as the starting slope.
  const double w_lin = -(ell_u[0] + ell_u[2]).real() * db / ell_u[1].real();
  Vec3 y{db, w_lin, db};
  for (int k = 1; k <= 6; ++k) y[1] = solve_slope(y, k * horizon / 6.0);
  prof.shooting_params = {y[1]};

  GridSampler sampler{ode, far, prof};
  std::size_t j = 0;
  double xr = 0.0;
  double jump_max = 0.0;
  int segments = 0;
  while (j < prof.size()) {
    if (segments > 0) {
      const double continued = y[1];
      y[1] = solve_slope(y, horizon);
      jump_max = std::max(jump_max, std::abs(y[1] - continued) / std::abs(continued));
    }
    Ode::Options o = opt;
    o.dense = true;
    o.atol = 1e-3 * kMarchRtol * inf_norm(y);
    const auto seg = Ode::integrate(ode, 0.0, y, keep, o);
    const double xend = xr + keep;
    while (j < prof.size() && prof.x[j] <= xend) {
      sampler.set(j, seg.dense(prof.x[j] - xr));
      ++j;
    }
    y = seg.dense(keep);
    xr = xend;
    ++segments;
  }
  prof.iterations = segments;
  prof.junction_jump = jump_max;
}

}  // namespace

StationaryOde::StationaryOde(const ModelParams& params, const FarFieldData& far)
    : u_plus_(far.u_plus()),
      m1_(far.rho_plus() * far.u_plus()),
      m2_(far.n_plus() * far.u_plus()),
      mu_(params.mu()),
      A1_(params.A1()),
      gamma_(params.gamma()),
      alpha_(params.alpha()),
      p1_plus_(params.A1() * detail::power(far.rho_plus(), params.gamma())),
      p2_plus_(params.A2() * detail::power(far.n_plus(), params.alpha())) {}

void StationaryOde::operator()(double /*x*/, const Vec3& y, Vec3& dy) const {
  const double ub = y[0], w = y[1], vb = y[2];
  const double u = u_plus_ + ub;
  const double v = u_plus_ + vb;
  if (!(u > 0.0) || !(v > 0.0)) throw BlowUpError("stationary velocity left (0, inf)");
  const double rho = m1_ / u;
  const double dp1 = A1_ * gamma_ * detail::power(rho, gamma_ - 1.0);
  dy[0] = w;
  dy[1] = ((m1_ - dp1 * rho / u) * w - m2_ * (vb - ub) / v) / mu_;
  const double s1 = p1_plus_ * detail::inverse_power_m1(ub / u_plus_, gamma_);
  const double s2 = p2_plus_ * detail::inverse_power_m1(vb / u_plus_, alpha_);
  dy[2] = (v / m2_) * (m1_ * ub + s1 + m2_ * vb + s2 - mu_ * w);
}

CenterManifoldData center_manifold_coeff(const ModelParams& params, const FarFieldData& far) {
  const RegimeLabel label = classify(params, far);
  if (label.tag != Regime::Sonic) {
    throw UsageError(fmt::format("center-manifold coefficient requested for a {} far field (M+ = {})",
                                 to_string(label.tag), label.mach));
  }
  CenterManifoldData c = center_data(params, far);
  const SpectrumReport spec = eigen_spectrum(params, far);
  const double db = far.offset();
  c.sigma0 = dot_real(spec.left[2], Vec3{db, 0.0, db});
  return c;
}

double default_length(const SpectrumReport& spectrum, double delta) {
  if (spectrum.regime.tag == Regime::Sonic) return delta > 0.0 ? 40.0 / delta : 50.0;
  return std::max(50.0, 12.0 / spectrum.slowest_stable_rate());
}

StationaryProfile solve_stationary(const ModelParams& params, const FarFieldData& far,
                                   const GridSpec& spec) {
  const RegimeLabel label = classify(params, far);
  if (far.delta() > spec.max_delta) {
    throw DomainError(fmt::format("|u- - u+| = {} exceeds the configured threshold {}", far.delta(),
                                  spec.max_delta));
  }
  if (far.delta() == 0.0) return constant_profile(params, far, spec, label);

  const Regime branch = spec.force_regime.value_or(label.tag);
  const SpectrumReport spectrum = eigen_spectrum(make_jacobian(assemble_jacobian(params, far).entries,
                                                               RegimeLabel{branch, label.mach}));
  StationaryProfile prof;
  prof.regime = label;
  prof.solver = branch;
  prof.delta = far.delta();
  prof.u_plus = far.u_plus();
  prof.rho_plus = far.rho_plus();
  prof.n_plus = far.n_plus();
  allocate(prof, spec.nodes, spec.length > 0.0 ? spec.length : default_length(spectrum, far.delta()));

  const StationaryOde ode(params, far);
  if (branch == Regime::Sonic) {
    if (!(far.offset() < 0.0)) {
      throw NoProfileError("sonic far field requires u- < u+ (center coordinate must start negative)",
                           far.offset());
    }
    march_center_stable(ode, far, spectrum, prof);
    CenterManifoldData c = center_data(params, far);
    const double db = far.offset();
    c.sigma0 = dot_real(spectrum.left[2], Vec3{db, prof.shooting_params[0], db});
    prof.center = c;
    prof.shooting_params.push_back(c.sigma0);
    for (std::size_t j = 0; j < prof.size(); ++j) {
      const double z3 = dot_real(spectrum.left[2], Vec3{prof.du[j], prof.ux[j], prof.dv[j]});
      if (!(z3 < 0.0)) {
        throw NoProfileError(fmt::format("center coordinate turned nonnegative at x = {}", prof.x[j]), z3);
      }
      if (prof.ux[j] < -1e-10 || prof.vx[j] < -1e-10) {
        throw NoProfileError(fmt::format("sonic profile not monotone at x = {} (u_x = {}, v_x = {})",
                                         prof.x[j], prof.ux[j], prof.vx[j]),
                             std::min(prof.ux[j], prof.vx[j]));
      }
    }
  } else {
    shoot_stable(ode, far, spectrum, prof);
  }
  finish(params, far, prof);
  return prof;
}

double profile_residual(const ModelParams& params, const FarFieldData& far,
                        const StationaryProfile& p) {
  const std::size_t n = p.size();
  if (n < 5 || p.trivial()) return 0.0;
  const StationaryOde ode(params, far);
  const double h = p.x[1] - p.x[0];
  std::vector<Vec3> f(n);
  Vec3 scale{0.0, 0.0, 0.0};
  for (std::size_t j = 0; j < n; ++j) {
    f[j] = ode.rhs(Vec3{p.du[j], p.ux[j], p.dv[j]});
    for (int i = 0; i < 3; ++i) scale[i] = std::max(scale[i], std::abs(f[j][i]));
  }
  const std::vector<double>* comp[3] = {&p.du, &p.ux, &p.dv};
  double worst = 0.0;
  for (std::size_t j = 2; j + 2 < n; ++j) {
    for (int i = 0; i < 3; ++i) {
      const auto& y = *comp[i];
      const double d = (y[j - 2] - 8.0 * y[j - 1] + 8.0 * y[j + 1] - y[j + 2]) / (12.0 * h);
      if (scale[i] > 0.0) worst = std::max(worst, std::abs(d - f[j][i]) / scale[i]);
    }
  }
  return worst;
}

}  // namespace twophase
