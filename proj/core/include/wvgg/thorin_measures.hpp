#pragma once

#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "wvgg/matrix_core.hpp"
#include "wvgg/quadrature.hpp"

namespace wvgg {

using DensityParams = std::map<std::string, double>;

// Radial density w(v) of a ray component, zero outside (lower, upper).
struct RadialDensity {
  std::string name;
  DensityParams params;
  std::function<double(double)> fn;
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();

  double operator()(double v) const { return v > lower && v < upper ? fn(v) : 0.0; }
};

// u^{a−1}(1+u)^{−a−b}/B(a,b) on (0,∞).
RadialDensity beta2_density(double a, double b);
// (a·u + b)^{−c} on (g,∞).
RadialDensity power_cut_density(double a, double b, double c, double g);
// scale·v^{exponent} on (lower, upper).
RadialDensity power_density(double scale, double exponent, double lower = 0.0,
                            double upper = std::numeric_limits<double>::infinity());
RadialDensity constant_density(double value, double lower = 0.0,
                               double upper = std::numeric_limits<double>::infinity());

// Named density factories; built-ins are beta2, power_cut, power, constant.
class DensityRegistry {
 public:
  using Factory = std::function<RadialDensity(const DensityParams&)>;

  static DensityRegistry& global();
  void add(const std::string& name, Factory factory);
  bool contains(const std::string& name) const;
  RadialDensity make(const std::string& name, const DensityParams& params) const;

 private:
  DensityRegistry();
  mutable std::mutex mutex_;
  std::map<std::string, Factory> factories_;
};

struct Atom {
  double mass = 0.0;
  Vector point;
};

// Points v·direction for v in the density's support.
struct Ray {
  Vector direction;
  RadialDensity density;
};

// Image of θ ↦ map(θ) on [lower, upper] with Lebesgue density in θ.
struct Curve {
  std::string name;
  std::function<Vector(double)> map;
  double lower = 0.0;
  double upper = 1.0;
};
Curve circle_curve(const std::string& name, double lower = 0.0, double upper = 1.0);

using MeasureComponent = std::variant<Atom, Ray, Curve>;

struct ValidityReport {
  bool valid = false;
  double integral = 0.0;
  QuadStatus status = QuadStatus::Unresolved;
  int offending = -1;
  std::vector<QuadResult> per_component;
};

// Quadrature of (1 + ln⁻‖u‖) ∧ (1/‖u‖) per component.
ValidityReport validate(int n, const std::vector<MeasureComponent>& components,
                        const QuadOptions& opts = {});

class ThorinMeasure {
 public:
  // Checks shapes, support in [0,∞)ⁿ_* and finiteness of the validity integral.
  ThorinMeasure(int n, std::vector<MeasureComponent> components);

  int dim() const { return n_; }
  const std::vector<MeasureComponent>& components() const { return components_; }
  ValidityReport validate(const QuadOptions& opts = {}) const;

  // U((0,∞)ⁿ) > 0.
  bool has_interior_mass() const;
  // Every component is an atom.
  bool finitely_supported() const;
  // Every component touching (0,∞)ⁿ is an atom or a ray.
  bool interior_ray_supported() const;
  // Whether a component charges (0,∞)ⁿ.
  static bool is_interior(const MeasureComponent& c);

 private:
  int n_;
  std::vector<MeasureComponent> components_;
};

struct WvggParams {
  Vector d;
  Vector mu;
  CovMatrix sigma;
  ThorinMeasure measure;

  WvggParams(Vector d, Vector mu, CovMatrix sigma, ThorinMeasure measure);
  int dim() const { return static_cast<int>(mu.size()); }
};

// ∫ g(v) w(v) dv over the support of the ray density intersected with (cut, ∞).
QuadResult integrate_ray(const Ray& ray, const std::function<double(double)>& g,
                         const QuadOptions& opts = {}, double cut = 0.0);
// Parameters in (lower, upper) where two coordinates of the curve cross.
std::vector<double> curve_breakpoints(const Curve& curve, int samples = 256);
QuadResult integrate_curve(const Curve& curve, const std::function<double(const Vector&)>& f,
                           const QuadOptions& opts = {});
// ∫ f dU over all components, or over those charging (0,∞)ⁿ.
QuadResult integrate_measure(const ThorinMeasure& u, const std::function<double(const Vector&)>& f,
                             bool interior_only, const QuadOptions& opts = {});

// ∫ v^p w(v) dv over (cut, ∞) ∩ support.
QuadResult radial_moment(const RadialDensity& w, double p, double cut = 0.0,
                         const QuadOptions& opts = {});

ThorinMeasure alpha_gamma_measure(double a, const Vector& alpha);
ThorinMeasure matrix_gamma_measure(const std::vector<double>& masses, const std::vector<Vector>& points);
ThorinMeasure beta2_measure(double a, double b, const Vector& direction);
// Independent beta2 rays along the coordinate axes e_k.
ThorinMeasure beta2_axes_measure(const std::vector<double>& a, const std::vector<double>& b);
ThorinMeasure circle_measure(const std::string& parametrization);
// Ray along α/‖α‖² with density 1_{(g,∞)}(u)(au+b)^{−c}, plus axis rays e_k with
// the given densities (absent entries are omitted).
ThorinMeasure sdcex_measure(double a, double b, double c, double g, const Vector& alpha,
                            const std::vector<std::optional<RadialDensity>>& axis);

// ∫(1+‖u‖^{1/2})(‖u‖ⁿ/∏u)^{1/2} over (0,∞)ⁿ.
QuadResult moment_strong(const ThorinMeasure& u, const QuadOptions& opts = {});

struct RayMoment {
  int component = -1;
  Vector direction;
  QuadResult result;
};
// ∫ v^{1/2} per interior ray (atoms count as a ray at v = 1). With tail_only the
// integral runs over (1,∞). Throws NotRaySupported if an interior curve exists.
std::vector<RayMoment> ray_half_moment(const ThorinMeasure& u, bool tail_only = false,
                                       const QuadOptions& opts = {});

}  // namespace wvgg
