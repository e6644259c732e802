#include "wvgg/wvgg_density.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "wvgg/errors.hpp"
#include "wvgg/geom_quantities.hpp"
#include "wvgg/special_fn.hpp"

namespace wvgg {

namespace {

// Quantities along u = v·dir: 𝔈 and 𝔇 are constant, 𝔄² = a·v + b.
struct RayGeometry {
  double e = 0.0;
  double log_d = 0.0;
  double a = 0.0;
  double b = 0.0;
};

RayGeometry ray_geometry(const WvggParams& p, const Vector& s, const Vector& dir) {
  const int n = p.dim();
  const Matrix m = diamond(dir, p.sigma.matrix());
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) throw NumericError("ray_geometry: dir⋄Σ is singular");
  const Vector dm = dir.cwiseProduct(p.mu);
  const Vector ms = llt.solve(s);
  const double qs = s.dot(ms);
  const double qmu = dm.dot(llt.solve(dm));
  double log_det = 0.0;
  for (int k = 0; k < n; ++k) log_det += 2.0 * std::log(llt.matrixL()(k, k));
  RayGeometry g;
  g.e = dm.dot(ms);
  g.log_d = 0.5 * n * std::log(qs) + 0.5 * log_det;
  g.a = 2.0 * dir.squaredNorm() * qs;
  g.b = qmu * qs;
  return g;
}

void check_point(const WvggParams& p, const Vector& s, double r, const char* what) {
  if (p.dim() < 2) throw NotApplicable(std::string(what) + ": requires n >= 2");
  if (s.size() != p.dim()) throw DomainError(std::string(what) + ": dimension mismatch");
  if (!(std::abs(s.norm() - 1.0) <= 1e-9)) throw DomainError(std::string(what) + ": s must be a unit vector");
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError(std::string(what) + ": r must be positive");
  if (!p.sigma.invertible()) throw DomainError(std::string(what) + ": sigma must be invertible");
}

Estimate to_estimate(const QuadResult& q, double scale) {
  Estimate e;
  e.value = scale * q.value;
  e.abs_err = scale * q.abs_err;
  e.status = q.status;
  return e;
}

QuadResult exact(double v) {
  QuadResult q;
  q.value = v;
  q.status = QuadStatus::Finite;
  return q;
}

// Sum over the interior components of ∫ kernel(𝔈, 𝔄, log𝔇) dU, with a fast path on rays.
template <class Kernel>
QuadResult integrate_interior(const WvggParams& p, const Vector& s, const Kernel& kernel,
                              const QuadOptions& opts) {
  const QuantityContext ctx(p.mu, p.sigma);
  QuadResult total = exact(0.0);
  for (const auto& c : p.measure.components()) {
    if (!ThorinMeasure::is_interior(c)) continue;
    if (const auto* atom = std::get_if<Atom>(&c)) {
      const Ade q = ade_quantities(ctx, s, atom->point);
      total = combine(total, exact(atom->mass * kernel(q.e, q.a, std::log(q.d))));
    } else if (const auto* ray = std::get_if<Ray>(&c)) {
      const RayGeometry g = ray_geometry(p, s, ray->direction);
      auto f = [&](double v) { return kernel(g.e, std::sqrt(g.a * v + g.b), g.log_d); };
      total = combine(total, integrate_ray(*ray, f, opts));
    } else {
      auto f = [&](const Vector& u) {
        // Nodes next to a boundary endpoint can round onto a face, or so close to
        // it that u⋄Σ is numerically singular. Both are null sets for 𝒰; any
        // divergence still shows in the partial sums at representable nodes.
        if (!is_positive(u)) return 0.0;
        const Ade q = ade_quantities(ctx, s, u);
        if (!std::isfinite(q.a) || !std::isfinite(q.d) || !std::isfinite(q.e) || !(q.d > 0.0)) return 0.0;
        return kernel(q.e, q.a, std::log(q.d));
      };
      total = combine(total, integrate_curve(std::get<Curve>(c), f, opts));
    }
  }
  return total;
}

}  // namespace

double c_n(int n) { return 2.0 / std::pow(2.0 * std::numbers::pi, 0.5 * n); }

QuadOptions density_quadrature() {
  QuadOptions o;
  o.rel_tol = 1e-9;
  return o;
}

Estimate h_density(const WvggParams& p, const Vector& s, double r, const QuadOptions& opts) {
  check_point(p, s, r, "h_density");
  const int n = p.dim();
  const KappaKernel k_main(0.5 * n);
  auto kernel = [&](double e, double a, double log_d) {
    return std::exp(r * e - log_d + k_main.log_value(r * a));
  };
  return to_estimate(integrate_interior(p, s, kernel, opts), c_n(n));
}

Estimate h_derivative(const WvggParams& p, const Vector& s, double r, const QuadOptions& opts) {
  check_point(p, s, r, "h_derivative");
  const int n = p.dim();
  const KappaKernel k_main(0.5 * n);
  const KappaKernel k_low(0.5 * (n - 2));
  auto kernel = [&](double e, double a, double log_d) {
    const double w = r * a;
    const double base = r * e - log_d;
    return e * std::exp(base + k_main.log_value(w)) - r * a * a * std::exp(base + k_low.log_value(w));
  };
  return to_estimate(integrate_interior(p, s, kernel, opts), c_n(n));
}

DerivativeAtZero h_derivative_at_zero(const WvggParams& p, const Vector& s, const QuadOptions& opts) {
  DerivativeAtZero out;
  if (p.dim() < 2) return out;
  check_point(p, s, 1.0, "h_derivative_at_zero");
  out.precondition = integrate_interior(
      p, s, [](double, double a, double log_d) { return std::exp(std::log(a) - log_d); }, opts);
  if (!out.precondition.finite()) return out;
  out.mean = integrate_interior(
      p, s, [](double e, double, double log_d) { return e == 0.0 ? 0.0 : e * std::exp(-log_d); }, opts);
  if (!out.mean.finite()) return out;
  const int n = p.dim();
  out.applicable = true;
  out.value = c_n(n) * std::exp(0.5 * (n - 2) * std::numbers::ln2 + std::lgamma(0.5 * n)) * out.mean.value;
  return out;
}

std::complex<double> char_exponent(const WvggParams& p, const Vector& theta, const QuadOptions& opts) {
  const int n = p.dim();
  if (theta.size() != n) throw DomainError("char_exponent: dimension mismatch");
  const std::complex<double> i(0.0, 1.0);
  const Vector dmu = p.d.cwiseProduct(p.mu);
  const double drift_q = theta.dot(diamond(p.d, p.sigma.matrix()) * theta);
  std::complex<double> psi = i * dmu.dot(theta) - 0.5 * drift_q;
  if (theta.isZero(0.0)) return 0.0;

  // ln(1 + z) with z = (−i·m + ½q)/L where L = ‖u‖², m = ⟨u⋄μ,θ⟩, q = ‖θ‖²_{u⋄Σ}.
  auto log_arg = [&](const Vector& u) {
    const double len2 = u.squaredNorm();
    const double m = u.cwiseProduct(p.mu).dot(theta);
    const double q = theta.dot(diamond(u, p.sigma.matrix()) * theta);
    // Real part 1 + q/(2L) ≥ 1, so the principal branch is continuous.
    return std::log(std::complex<double>(1.0 + 0.5 * q / len2, -m / len2));
  };

  std::complex<double> integral = 0.0;
  for (const auto& c : p.measure.components()) {
    if (const auto* atom = std::get_if<Atom>(&c)) {
      integral += atom->mass * log_arg(atom->point);
    } else if (const auto* ray = std::get_if<Ray>(&c)) {
      const Vector& dir = ray->direction;
      const double len2 = dir.squaredNorm();
      const double m = dir.cwiseProduct(p.mu).dot(theta);
      const double q = theta.dot(diamond(dir, p.sigma.matrix()) * theta);
      auto z = [&](double v) {
        return std::log(std::complex<double>(1.0 + 0.5 * q / (v * len2), -m / (v * len2)));
      };
      const QuadResult re = integrate_ray(*ray, [&](double v) { return z(v).real(); }, opts);
      const QuadResult im = integrate_ray(*ray, [&](double v) { return z(v).imag(); }, opts);
      if (!re.finite() || !im.finite()) throw NumericError("char_exponent: ray integral did not converge");
      integral += std::complex<double>(re.value, im.value);
    } else {
      const auto& curve = std::get<Curve>(c);
      const QuadResult re = integrate_curve(curve, [&](const Vector& u) { return log_arg(u).real(); }, opts);
      const QuadResult im = integrate_curve(curve, [&](const Vector& u) { return log_arg(u).imag(); }, opts);
      if (!re.finite() || !im.finite()) throw NumericError("char_exponent: curve integral did not converge");
      integral += std::complex<double>(re.value, im.value);
    }
  }
  return psi - integral;
}

double vg_char_exponent(double b, const CovMatrix& sigma, const Vector& theta) {
  if (!(b > 0.0)) throw DomainError("vg_char_exponent: b must be positive");
  const double q = theta.dot(sigma.matrix() * theta);
  return -b * std::log1p(0.5 * q / b);
}

double vg_levy_density(double b, const Vector& mu, const CovMatrix& sigma, const Vector& y) {
  if (!(b > 0.0)) throw DomainError("vg_levy_density: b must be positive");
  if (!is_nonzero(y)) throw DomainError("vg_levy_density: y must be nonzero");
  if (!sigma.invertible()) throw DomainError("vg_levy_density: sigma must be invertible");
  const int n = sigma.dim();
  const double ny = std::sqrt(sigma.inverse_norm2(y));
  const double arg = std::sqrt(2.0 * b + sigma.inverse_norm2(mu)) * ny;
  const double log_v = std::log(c_n(n) * b) - 0.5 * std::log(sigma.det()) - n * std::log(ny) +
                       sigma.inverse_inner(y, mu) + log_kappa_bessel(0.5 * n, arg);
  return std::exp(log_v);
}

std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) throw DomainError("log_grid: need 0 < lo < hi and count >= 2");
  std::vector<double> g(count);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < count; ++i) g[i] = std::exp(a + (b - a) * i / (count - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<double> default_r_grid() { return log_grid(1e-4, 50.0, 200); }

std::vector<MonotonicityFlag> monotonicity_scan(const WvggParams& p, const std::vector<Vector>& s_samples,
                                                const std::vector<double>& r_grid, double tol,
                                                const QuadOptions& opts) {
  std::vector<MonotonicityFlag> out;
  out.reserve(s_samples.size());
  for (const auto& s : s_samples) {
    MonotonicityFlag f;
    f.s = s;
    f.margin = -std::numeric_limits<double>::infinity();
    double prev = 0.0;
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
      const Estimate h = h_density(p, s, r_grid[i], opts);
      if (!h.ok()) {
        f.status = h.status;
        break;
      }
      if (i > 0) {
        const double rel = h.value / prev - 1.0;
        f.margin = std::max(f.margin, rel);
        if (h.value > prev * (1.0 + tol) && f.nonincreasing) {
          f.nonincreasing = false;
          f.r0 = r_grid[i - 1];
        }
      }
      prev = h.value;
    }
    out.push_back(std::move(f));
  }
  return out;
}

DensityCurve density_curve(const WvggParams& p, const Vector& s, const std::vector<double>& r_grid,
                           const QuadOptions& opts) {
  DensityCurve c;
  c.s = s;
  c.r_grid = r_grid;
  for (double r : r_grid) {
    const Estimate h = h_density(p, s, r, opts);
    const Estimate dh = h_derivative(p, s, r, opts);
    c.values.push_back(h.value);
    c.deriv.push_back(dh.value);
    c.quadrature_err.push_back(h.abs_err);
    if (!h.ok() || !dh.ok()) c.status = h.ok() ? dh.status : h.status;
  }
  return c;
}

void write_csv(std::ostream& os, const DensityCurve& curve) {
  const auto old_precision = os.precision(17);
  const Eigen::Index n = curve.s.size();
  for (Eigen::Index k = 0; k < n; ++k) os << "s_" << (k + 1) << ',';
  os << "r,h,dh,err\n";
  for (std::size_t i = 0; i < curve.r_grid.size(); ++i) {
    for (Eigen::Index k = 0; k < n; ++k) os << curve.s[k] << ',';
    os << curve.r_grid[i] << ',' << curve.values[i] << ',' << curve.deriv[i] << ','
       << curve.quadrature_err[i] << '\n';
  }
  os.precision(old_precision);
}

}  // namespace wvgg
