#include "wvgg/thorin_measures.hpp"

#include <algorithm>

#include <cmath>
#include <numbers>
#include <string>

#include "wvgg/errors.hpp"

namespace wvgg {

namespace {

double param(const DensityParams& p, const std::string& key) {
  auto it = p.find(key);
  if (it == p.end()) throw DomainError("density parameter '" + key + "' is missing");
  return it->second;
}

double param_or(const DensityParams& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

// (1 + ln⁻x) ∧ (1/x)
double validity_weight(double x) {
  return std::min(1.0 + std::max(-std::log(x), 0.0), 1.0 / x);
}

bool parallel(const Vector& a, const Vector& b) {
  return std::abs(a.dot(b) - a.norm() * b.norm()) <= 1e-12 * a.norm() * b.norm();
}

QuadResult exact(double value) {
  QuadResult r;
  r.value = value;
  r.status = QuadStatus::Finite;
  return r;
}

// ∫ f over (lo, hi), split at an interior point when given.
QuadResult integrate_split(const Integrand& f, double lo, double hi, double split,
                           const QuadOptions& opts) {
  if (split > lo && split < hi) {
    return combine(integrate(f, lo, split, opts), integrate(f, split, hi, opts));
  }
  return integrate(f, lo, hi, opts);
}

void check_component(int n, const MeasureComponent& c, std::size_t index) {
  const std::string where = "ThorinMeasure component " + std::to_string(index) + ": ";
  if (const auto* a = std::get_if<Atom>(&c)) {
    if (!(a->mass > 0.0) || !std::isfinite(a->mass)) throw DomainError(where + "atom mass must be positive");
    if (a->point.size() != n) throw DomainError(where + "atom dimension mismatch");
    if (!is_nonnegative(a->point) || !is_nonzero(a->point)) {
      throw DomainError(where + "atom must lie in [0,inf)^n without the origin");
    }
  } else if (const auto* r = std::get_if<Ray>(&c)) {
    if (r->direction.size() != n) throw DomainError(where + "ray dimension mismatch");
    if (!is_nonnegative(r->direction) || !is_nonzero(r->direction)) {
      throw DomainError(where + "ray direction must lie in [0,inf)^n without the origin");
    }
    if (!r->density.fn) throw DomainError(where + "ray density is empty");
    if (!(r->density.lower >= 0.0) || !(r->density.upper > r->density.lower)) {
      throw DomainError(where + "ray density support must be a subinterval of (0,inf)");
    }
  } else {
    const auto& cv = std::get<Curve>(c);
    if (!cv.map) throw DomainError(where + "curve map is empty");
    if (!std::isfinite(cv.lower) || !std::isfinite(cv.upper) || !(cv.lower < cv.upper)) {
      throw DomainError(where + "curve interval must be bounded");
    }
    for (int i = 0; i <= 16; ++i) {
      const Vector p = cv.map(cv.lower + (cv.upper - cv.lower) * i / 16.0);
      if (p.size() != n || !is_nonnegative(p) || !is_nonzero(p)) {
        throw DomainError(where + "curve leaves [0,inf)^n without the origin");
      }
    }
  }
}

}  // namespace

RadialDensity beta2_density(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("beta2_density: a and b must be positive");
  const double log_c = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
  RadialDensity w;
  w.name = "beta2";
  w.params = {{"a", a}, {"b", b}};
  w.fn = [a, b, log_c](double u) {
    return std::exp(log_c + (a - 1.0) * std::log(u) - (a + b) * std::log1p(u));
  };
  return w;
}

RadialDensity power_cut_density(double a, double b, double c, double g) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("power_cut_density: a and b must be positive");
  if (!(c > 0.0) || !(g >= 0.0)) throw DomainError("power_cut_density: need c > 0 and g >= 0");
  RadialDensity w;
  w.name = "power_cut";
  w.params = {{"a", a}, {"b", b}, {"c", c}, {"g", g}};
  w.fn = [a, b, c](double u) { return std::pow(a * u + b, -c); };
  w.lower = g;
  return w;
}

RadialDensity power_density(double scale, double exponent, double lower, double upper) {
  if (!(scale > 0.0)) throw DomainError("power_density: scale must be positive");
  if (!(lower >= 0.0) || !(upper > lower)) throw DomainError("power_density: bad support");
  RadialDensity w;
  w.name = "power";
  w.params = {{"scale", scale}, {"exponent", exponent}, {"lower", lower}, {"upper", upper}};
  w.fn = [scale, exponent](double v) { return scale * std::pow(v, exponent); };
  w.lower = lower;
  w.upper = upper;
  return w;
}

RadialDensity constant_density(double value, double lower, double upper) {
  RadialDensity w = power_density(value, 0.0, lower, upper);
  w.name = "constant";
  w.params = {{"value", value}, {"lower", lower}, {"upper", upper}};
  return w;
}

DensityRegistry::DensityRegistry() {
  const double inf = std::numeric_limits<double>::infinity();
  factories_["beta2"] = [](const DensityParams& p) {
    return beta2_density(param(p, "a"), param(p, "b"));
  };
  factories_["power_cut"] = [](const DensityParams& p) {
    return power_cut_density(param(p, "a"), param(p, "b"), param(p, "c"), param_or(p, "g", 0.0));
  };
  factories_["power"] = [inf](const DensityParams& p) {
    return power_density(param_or(p, "scale", 1.0), param(p, "exponent"), param_or(p, "lower", 0.0),
                         param_or(p, "upper", inf));
  };
  factories_["constant"] = [inf](const DensityParams& p) {
    return constant_density(param(p, "value"), param_or(p, "lower", 0.0), param_or(p, "upper", inf));
  };
}

DensityRegistry& DensityRegistry::global() {
  static DensityRegistry registry;
  return registry;
}

void DensityRegistry::add(const std::string& name, Factory factory) {
  std::lock_guard<std::mutex> lock(mutex_);
  factories_[name] = std::move(factory);
}

bool DensityRegistry::contains(const std::string& name) const {
  std::lock_guard<std::mutex> lock(mutex_);
  return factories_.count(name) != 0;
}

RadialDensity DensityRegistry::make(const std::string& name, const DensityParams& params) const {
  Factory f;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = factories_.find(name);
    if (it == factories_.end()) throw DomainError("unknown density '" + name + "'");
    f = it->second;
  }
  RadialDensity w = f(params);
  w.name = name;
  return w;
}

Curve circle_curve(const std::string& name, double lower, double upper) {
  Curve c;
  c.name = name;
  c.lower = lower;
  c.upper = upper;
  if (name == "circle_theta") {
    c.map = [](double t) { return Vector{{std::cos(t), std::sin(t)}}; };
  } else if (name == "circle_theta2") {
    c.map = [](double t) { return Vector{{std::cos(t * t), std::sin(t * t)}}; };
  } else {
    throw DomainError("unknown curve '" + name + "'");
  }
  return c;
}

QuadResult integrate_ray(const Ray& ray, const std::function<double(double)>& g,
                         const QuadOptions& opts, double cut) {
  const double lo = std::max(ray.density.lower, cut);
  const double hi = ray.density.upper;
  if (!(hi > lo)) return exact(0.0);
  auto f = [&](double v) {
    const double w = ray.density.fn(v);
    return w == 0.0 ? 0.0 : g(v) * w;
  };
  return integrate(f, lo, hi, opts);
}

std::vector<double> curve_breakpoints(const Curve& curve, int samples) {
  // Sign changes of u_k − u_l on a uniform grid, refined by bisection.
  std::vector<double> grid(samples + 1);
  std::vector<Vector> pts(samples + 1);
  for (int i = 0; i <= samples; ++i) {
    grid[i] = curve.lower + (curve.upper - curve.lower) * i / samples;
    pts[i] = curve.map(grid[i]);
  }
  std::vector<double> out;
  const auto n = pts.front().size();
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index l = k + 1; l < n; ++l) {
      auto diff = [&](double t) {
        const Vector u = curve.map(t);
        return u[k] - u[l];
      };
      for (int i = 0; i < samples; ++i) {
        const double d0 = pts[i][k] - pts[i][l];
        const double d1 = pts[i + 1][k] - pts[i + 1][l];
        if (d0 == 0.0 || d0 * d1 >= 0.0) continue;
        double lo = grid[i];
        double hi = grid[i + 1];
        for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * std::abs(hi); ++it) {
          const double mid = 0.5 * (lo + hi);
          if ((diff(mid) < 0.0) == (d0 < 0.0)) {
            lo = mid;
          } else {
            hi = mid;
          }
        }
        out.push_back(0.5 * (lo + hi));
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

QuadResult integrate_curve(const Curve& curve, const std::function<double(const Vector&)>& f,
                           const QuadOptions& opts) {
  // u⋄Σ involves u_k ∧ u_l, so integrands have kinks where coordinates cross;
  // splitting there restores the double-exponential convergence.
  std::vector<double> cuts{curve.lower};
  for (double t : curve_breakpoints(curve)) {
    if (t > cuts.back() && t < curve.upper) cuts.push_back(t);
  }
  cuts.push_back(curve.upper);
  QuadResult total = exact(0.0);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total = combine(total, integrate_finite([&](double t) { return f(curve.map(t)); }, cuts[i], cuts[i + 1], opts));
  }
  return total;
}

QuadResult integrate_measure(const ThorinMeasure& u, const std::function<double(const Vector&)>& f,
                             bool interior_only, const QuadOptions& opts) {
  QuadResult total = exact(0.0);
  for (const auto& c : u.components()) {
    if (interior_only && !ThorinMeasure::is_interior(c)) continue;
    if (const auto* a = std::get_if<Atom>(&c)) {
      total = combine(total, exact(a->mass * f(a->point)));
    } else if (const auto* r = std::get_if<Ray>(&c)) {
      total = combine(total, integrate_ray(*r, [&](double v) { return f(v * r->direction); }, opts));
    } else {
      total = combine(total, integrate_curve(std::get<Curve>(c), f, opts));
    }
  }
  return total;
}

QuadResult radial_moment(const RadialDensity& w, double p, double cut, const QuadOptions& opts) {
  const double lo = std::max(w.lower, cut);
  if (!(w.upper > lo)) return exact(0.0);
  auto f = [&](double v) {
    const double d = w.fn(v);
    return d == 0.0 ? 0.0 : std::pow(v, p) * d;
  };
  return integrate_split(f, lo, w.upper, 1.0, opts);
}

ValidityReport validate(int n, const std::vector<MeasureComponent>& components, const QuadOptions& opts) {
  ValidityReport rep;
  QuadResult total = exact(0.0);
  for (std::size_t i = 0; i < components.size(); ++i) {
    const auto& c = components[i];
    check_component(n, c, i);
    QuadResult q;
    if (const auto* a = std::get_if<Atom>(&c)) {
      q = exact(a->mass * validity_weight(a->point.norm()));
    } else if (const auto* r = std::get_if<Ray>(&c)) {
      const double len = r->direction.norm();
      auto f = [&](double v) {
        const double w = r->density.fn(v);
        return w == 0.0 ? 0.0 : validity_weight(v * len) * w;
      };
      q = integrate_split(f, r->density.lower, r->density.upper, 1.0 / len, opts);
    } else {
      q = integrate_curve(std::get<Curve>(c), [](const Vector& u) { return validity_weight(u.norm()); },
                          opts);
    }
    rep.per_component.push_back(q);
    if (!q.finite() && rep.offending < 0) rep.offending = static_cast<int>(i);
    total = combine(total, q);
  }
  rep.integral = total.value;
  rep.status = total.status;
  rep.valid = total.finite();
  return rep;
}

ThorinMeasure::ThorinMeasure(int n, std::vector<MeasureComponent> components)
    : n_(n), components_(std::move(components)) {
  if (n < 1) throw DomainError("ThorinMeasure: dimension must be at least 1");
  const ValidityReport rep = wvgg::validate(n_, components_);
  if (!rep.valid) {
    throw DomainError("ThorinMeasure: validity integral is " + std::string(to_string(rep.status)) +
                      " at component " + std::to_string(rep.offending));
  }
}

ValidityReport ThorinMeasure::validate(const QuadOptions& opts) const {
  return wvgg::validate(n_, components_, opts);
}

bool ThorinMeasure::is_interior(const MeasureComponent& c) {
  if (const auto* a = std::get_if<Atom>(&c)) return is_positive(a->point);
  if (const auto* r = std::get_if<Ray>(&c)) return is_positive(r->direction);
  const auto& cv = std::get<Curve>(c);
  return is_positive(cv.map(0.5 * (cv.lower + cv.upper)));
}

bool ThorinMeasure::has_interior_mass() const {
  for (const auto& c : components_) {
    if (is_interior(c)) return true;
  }
  return false;
}

bool ThorinMeasure::finitely_supported() const {
  for (const auto& c : components_) {
    if (!std::holds_alternative<Atom>(c)) return false;
  }
  return true;
}

bool ThorinMeasure::interior_ray_supported() const {
  for (const auto& c : components_) {
    if (std::holds_alternative<Curve>(c) && is_interior(c)) return false;
  }
  return true;
}

WvggParams::WvggParams(Vector d_, Vector mu_, CovMatrix sigma_, ThorinMeasure measure_)
    : d(std::move(d_)), mu(std::move(mu_)), sigma(std::move(sigma_)), measure(std::move(measure_)) {
  const int n = static_cast<int>(mu.size());
  if (d.size() != n || sigma.dim() != n || measure.dim() != n) {
    throw DomainError("WvggParams: dimensions of d, mu, sigma and U must agree");
  }
  if (!is_nonnegative(d)) throw DomainError("WvggParams: d must be nonnegative");
  if (!all_finite(mu)) throw DomainError("WvggParams: mu must be finite");
}

ThorinMeasure alpha_gamma_measure(double a, const Vector& alpha) {
  if (!(a > 0.0)) throw DomainError("alpha_gamma_measure: a must be positive");
  if (!is_positive(alpha)) throw DomainError("alpha_gamma_measure: alpha must be positive");
  std::vector<MeasureComponent> comps;
  comps.emplace_back(Atom{a, alpha / alpha.squaredNorm()});
  const int n = static_cast<int>(alpha.size());
  for (int k = 0; k < n; ++k) {
    if (!(a * alpha[k] < 1.0)) throw DomainError("alpha_gamma_measure: need a*alpha_k < 1");
    Vector e = Vector::Zero(n);
    e[k] = 1.0 / alpha[k];
    comps.emplace_back(Atom{(1.0 - a * alpha[k]) / alpha[k], e});
  }
  return ThorinMeasure(n, std::move(comps));
}

ThorinMeasure matrix_gamma_measure(const std::vector<double>& masses, const std::vector<Vector>& points) {
  if (masses.size() != points.size() || masses.empty()) {
    throw DomainError("matrix_gamma_measure: need equally many masses and points");
  }
  std::vector<MeasureComponent> comps;
  for (std::size_t i = 0; i < masses.size(); ++i) comps.emplace_back(Atom{masses[i], points[i]});
  return ThorinMeasure(static_cast<int>(points.front().size()), std::move(comps));
}

ThorinMeasure beta2_measure(double a, double b, const Vector& direction) {
  std::vector<MeasureComponent> comps;
  comps.emplace_back(Ray{direction, beta2_density(a, b)});
  return ThorinMeasure(static_cast<int>(direction.size()), std::move(comps));
}

ThorinMeasure beta2_axes_measure(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty()) throw DomainError("beta2_axes_measure: size mismatch");
  const int n = static_cast<int>(a.size());
  std::vector<MeasureComponent> comps;
  for (int k = 0; k < n; ++k) {
    Vector e = Vector::Zero(n);
    e[k] = 1.0;
    comps.emplace_back(Ray{e, beta2_density(a[k], b[k])});
  }
  return ThorinMeasure(n, std::move(comps));
}

ThorinMeasure circle_measure(const std::string& parametrization) {
  std::string name = parametrization;
  if (name == "theta") name = "circle_theta";
  if (name == "theta_squared" || name == "theta2") name = "circle_theta2";
  std::vector<MeasureComponent> comps;
  comps.emplace_back(circle_curve(name));
  return ThorinMeasure(2, std::move(comps));
}

ThorinMeasure sdcex_measure(double a, double b, double c, double g, const Vector& alpha,
                            const std::vector<std::optional<RadialDensity>>& axis) {
  if (!(c >= 0.5 && c <= 1.0)) throw DomainError("sdcex_measure: c must lie in [1/2, 1]");
  if (!is_nonnegative(alpha) || !is_nonzero(alpha)) {
    throw DomainError("sdcex_measure: alpha must lie in [0,inf)^n without the origin");
  }
  const int n = static_cast<int>(alpha.size());
  if (static_cast<int>(axis.size()) != n && !axis.empty()) {
    throw DomainError("sdcex_measure: need one axis entry per coordinate");
  }
  std::vector<MeasureComponent> comps;
  comps.emplace_back(Ray{alpha / alpha.squaredNorm(), power_cut_density(a, b, c, g)});
  for (std::size_t k = 0; k < axis.size(); ++k) {
    if (!axis[k]) continue;
    Vector e = Vector::Zero(n);
    e[static_cast<Eigen::Index>(k)] = 1.0;
    comps.emplace_back(Ray{e, *axis[k]});
  }
  return ThorinMeasure(n, std::move(comps));
}

QuadResult moment_strong(const ThorinMeasure& u, const QuadOptions& opts) {
  const int n = u.dim();
  QuadResult total = exact(0.0);
  for (const auto& c : u.components()) {
    if (!ThorinMeasure::is_interior(c)) continue;
    if (const auto* r = std::get_if<Ray>(&c)) {
      // On u = v·d the factor (‖u‖ⁿ/∏u)^{1/2} does not depend on v.
      const double len = r->direction.norm();
      const double shape = std::sqrt(std::pow(len, n) / r->direction.prod());
      QuadResult q = integrate_ray(*r, [&](double v) { return 1.0 + std::sqrt(v * len); }, opts);
      q.value *= shape;
      q.abs_err *= shape;
      total = combine(total, q);
      continue;
    }
    auto f = [n](const Vector& p) {
      return (1.0 + std::sqrt(p.norm())) * std::sqrt(std::pow(p.norm(), n) / p.prod());
    };
    if (const auto* a = std::get_if<Atom>(&c)) {
      total = combine(total, exact(a->mass * f(a->point)));
    } else {
      total = combine(total, integrate_curve(std::get<Curve>(c), f, opts));
    }
  }
  return total;
}

std::vector<RayMoment> ray_half_moment(const ThorinMeasure& u, bool tail_only, const QuadOptions& opts) {
  if (!u.interior_ray_supported()) {
    throw NotRaySupported("ray_half_moment: interior mass is not carried by rays");
  }
  const double cut = tail_only ? 1.0 : 0.0;
  std::vector<RayMoment> out;
  const auto& comps = u.components();
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (!ThorinMeasure::is_interior(comps[i])) continue;
    RayMoment m;
    m.component = static_cast<int>(i);
    if (const auto* r = std::get_if<Ray>(&comps[i])) {
      m.direction = r->direction;
      m.result = radial_moment(r->density, 0.5, cut, opts);
    } else {
      const auto& a = std::get<Atom>(comps[i]);
      // Express the atom on a ray already present, else on its own ray at v = 1.
      double v0 = 1.0;
      m.direction = a.point;
      for (const auto& other : comps) {
        const auto* r = std::get_if<Ray>(&other);
        if (r && ThorinMeasure::is_interior(other) && parallel(r->direction, a.point)) {
          m.direction = r->direction;
          v0 = a.point.norm() / r->direction.norm();
          break;
        }
      }
      m.result = exact(v0 > cut ? a.mass * std::sqrt(v0) : 0.0);
    }
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace wvgg
