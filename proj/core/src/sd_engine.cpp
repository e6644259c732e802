#include "wvgg/sd_engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "wvgg/errors.hpp"
#include "wvgg/special_fn.hpp"

namespace wvgg {

namespace {

constexpr double kPatternTol = 1e-12;

bool nearly(double x, double y, double tol = kPatternTol) {
  return std::abs(x - y) <= tol * std::max({1.0, std::abs(x), std::abs(y)});
}

// All coordinates equal and positive: the vector lies on the e-ray.
bool on_e_ray(const Vector& v) {
  const double m = v.mean();
  if (!(m > 0.0)) return false;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (!nearly(v[k], m)) return false;
  }
  return true;
}

bool sigma_diagonal(const CovMatrix& sigma) {
  const double scale = sigma.matrix().diagonal().cwiseAbs().maxCoeff();
  return sigma.is_diagonal(kPatternTol * std::max(1.0, scale));
}

bool wvag_pattern(const ThorinMeasure& u) {
  const int n = u.dim();
  if (n < 2 || !u.finitely_supported()) return false;
  const Atom* common = nullptr;
  std::vector<const Atom*> axis(n, nullptr);
  for (const auto& c : u.components()) {
    const auto& a = std::get<Atom>(c);
    if (is_positive(a.point)) {
      if (common) return false;
      common = &a;
      continue;
    }
    int support = -1;
    for (int k = 0; k < n; ++k) {
      if (a.point[k] == 0.0) continue;
      if (support >= 0) return false;
      support = k;
    }
    if (support < 0 || axis[support]) return false;
    axis[support] = &a;
  }
  if (!common) return false;
  const double a = common->mass;
  const Vector alpha = common->point / common->point.squaredNorm();
  for (int k = 0; k < n; ++k) {
    const double expected_mass = (1.0 - a * alpha[k]) / alpha[k];
    if (!(expected_mass > -kPatternTol)) return false;
    if (!axis[k]) {
      if (!nearly(expected_mass, 0.0)) return false;
      continue;
    }
    if (!nearly(axis[k]->point[k], 1.0 / alpha[k]) || !nearly(axis[k]->mass, expected_mass)) return false;
  }
  return true;
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Uniform direction on 𝕊 with every |s_k| ≥ 1e-6, so s ∈ 𝕊_**.
Vector draw_direction(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  for (;;) {
    Vector s(n);
    for (int k = 0; k < n; ++k) s[k] = gauss(rng);
    const double len = s.norm();
    if (!(len > 1e-12)) continue;
    s /= len;
    if (s.cwiseAbs().minCoeff() >= 1e-6) return s;
  }
}

Vector perturb_direction(const Vector& centre, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  const int n = static_cast<int>(centre.size());
  for (;;) {
    Vector s = centre;
    for (int k = 0; k < n; ++k) s[k] += scale * gauss(rng);
    const double len = s.norm();
    if (!(len > 1e-12)) continue;
    s /= len;
    if (s.cwiseAbs().minCoeff() >= 1e-6) return s;
  }
}

std::string format(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// Shared state of one classification run.
struct Run {
  const WvggParams& p;
  const ClassifyBudget& budget;
  SubclassTag tags;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  std::vector<EvidenceItem> evidence;
  std::vector<std::string> notes;
  bool numeric_only = false;
  bool out_of_time = false;

  Run(const WvggParams& params, const ClassifyBudget& b) : p(params), budget(b), tags(identify_subclass(params)) {}

  bool over_budget() {
    if (elapsed_seconds(start) > budget.max_seconds) out_of_time = true;
    return out_of_time;
  }
};

// n ≥ 2, μ ≠ 0, |Σ| ≠ 0 and 𝒰((0,∞)ⁿ) > 0: the standing hypotheses of the NOT_SD clauses.
bool not_sd_hypotheses(const WvggParams& p) {
  return p.dim() >= 2 && is_nonzero(p.mu) && p.sigma.invertible() && p.measure.has_interior_mass();
}

RuleOutcome rule_dimension_one(Run& run) {
  RuleOutcome o{"Thm3.1", Verdict::SD, false, ""};
  if (run.p.dim() == 1) {
    o.fired = true;
    o.detail = "n = 1";
  }
  return o;
}

RuleOutcome rule_driftless(Run& run) {
  RuleOutcome o{"Thm3.1(iii)", Verdict::SD, false, ""};
  if (run.p.dim() >= 2 && !is_nonzero(run.p.mu)) {
    o.fired = true;
    o.detail = "mu = 0";
    run.evidence.push_back({"mu_norm", 0.0, 0.0});
  }
  return o;
}

RuleOutcome rule_singular_sigma(Run& run) {
  RuleOutcome o{"singular-sigma", Verdict::INCONCLUSIVE, false, ""};
  if (!run.p.sigma.invertible()) {
    o.fired = true;
    o.detail = "|Sigma| = 0 lies outside the non-SD theory";
    run.evidence.push_back({"det_sigma", run.p.sigma.det(), CovMatrix::kDetTol});
  }
  return o;
}

RuleOutcome rule_no_interior_mass(Run& run) {
  RuleOutcome o{"no-interior-mass", Verdict::INCONCLUSIVE, false, ""};
  if (!run.p.measure.has_interior_mass()) {
    o.fired = true;
    o.detail = "U((0,inf)^n) = 0, the non-SD clauses need positive interior mass";
  }
  return o;
}

RuleOutcome rule_finite_support(Run& run) {
  std::string token = "Thm3.2(vii)";
  if (run.tags.wvag) {
    token = "Cor3.5(ii)";
  } else if (run.tags.wvmg) {
    token = "Cor3.6(ii)";
  }
  RuleOutcome o{token, Verdict::NOT_SD, false, ""};
  if (!not_sd_hypotheses(run.p) || !run.p.measure.finitely_supported()) return o;
  o.fired = true;
  double interior = 0.0;
  for (const auto& c : run.p.measure.components()) {
    if (ThorinMeasure::is_interior(c)) interior += std::get<Atom>(c).mass;
  }
  run.evidence.push_back({"interior_atom_mass", interior, 0.0});
  o.detail = "finitely supported with interior mass " + format(interior);
  return o;
}

RuleOutcome rule_ray_moments(Run& run, const QuadOptions& opts) {
  RuleOutcome o{run.tags.vgg_n1 ? "Cor3.3(ii)" : "Thm3.2(vi)", Verdict::NOT_SD, false, ""};
  if (!not_sd_hypotheses(run.p) || !run.p.measure.interior_ray_supported()) return o;
  const auto moments = ray_half_moment(run.p.measure, false, opts);
  bool all_ok = !moments.empty();
  for (const auto& m : moments) {
    run.evidence.push_back({"half_moment[" + std::to_string(m.component) + "]", m.result.value,
                            m.result.abs_err});
    if (!m.result.finite() || !(m.result.value > 0.0)) all_ok = false;
  }
  if (all_ok) {
    o.fired = true;
    o.detail = "every interior ray has a finite positive half moment";
  }
  return o;
}

RuleOutcome rule_strong_moment(Run& run, const QuadOptions& opts) {
  RuleOutcome o{run.tags.vgg_nn ? "Cor3.4(ii)" : "Thm3.2(v)", Verdict::NOT_SD, false, ""};
  if (!not_sd_hypotheses(run.p)) return o;
  const QuadResult m = moment_strong(run.p.measure, opts);
  run.evidence.push_back({"moment_strong", m.value, m.abs_err});
  if (!m.finite()) {
    run.notes.push_back(std::string("moment_strong status ") + to_string(m.status));
    return o;
  }
  if (m.value > 0.0) {
    o.fired = true;
    o.detail = "moment_strong = " + format(m.value);
  }
  return o;
}

RuleOutcome rule_numeric_iv(Run& run, const QuadOptions& opts) {
  RuleOutcome o{"Thm3.2(iv)-numeric", Verdict::NOT_SD, false, ""};
  if (!not_sd_hypotheses(run.p) || !run.budget.run_numeric) return o;
  const int n = run.p.dim();
  const QuantityContext ctx(run.p.mu, run.p.sigma);
  std::mt19937_64 rng(run.budget.seed);
  const Vector centre = run.p.mu / run.p.mu.norm();

  // Half the draws are uniform on 𝕊; the rest perturb μ/‖μ‖, where 𝔈 > 0 is
  // most likely, so a thin 𝕍⁺ cone is still reached.
  const int uniform_draws = run.budget.max_draws / 2;
  int draws = 0;
  int accepted = 0;
  int positive = 0;
  double min_inf = std::numeric_limits<double>::infinity();
  while (accepted < run.budget.s_samples && draws < run.budget.max_draws) {
    if (run.over_budget()) break;
    const Vector s = draws < uniform_draws ? draw_direction(n, rng) : perturb_direction(centre, 0.25, rng);
    ++draws;
    const MembershipResult m = v_plus_member(ctx, s, run.budget.scan);
    if (m.member != Membership::Member) continue;
    ++accepted;
    min_inf = std::min(min_inf, m.evidence.value);
    const DerivativeAtZero dz = h_derivative_at_zero(run.p, s, opts);
    if (dz.applicable && dz.mean.value > 0.0) ++positive;
  }
  run.evidence.push_back({"iv_draws", static_cast<double>(draws), 0.0});
  run.evidence.push_back({"iv_accepted", static_cast<double>(accepted), 0.0});
  if (accepted > 0) run.evidence.push_back({"iv_min_usp_infimum", min_inf, 0.0});
  const double fraction = accepted > 0 ? static_cast<double>(positive) / accepted : 0.0;
  run.evidence.push_back({"iv_positive_fraction", fraction, run.budget.positive_fraction});
  if (accepted > 0 && positive > 0 && fraction >= run.budget.positive_fraction) {
    o.fired = true;
    o.detail = std::to_string(positive) + " of " + std::to_string(accepted) +
               " directions in V+ have a finite A/D integral and positive mean";
  }
  return o;
}

RuleOutcome rule_numeric_monotone(Run& run, const QuadOptions& opts) {
  RuleOutcome o{"Thm3.2(iii)-numeric", Verdict::NOT_SD, false, ""};
  if (!not_sd_hypotheses(run.p) || !run.budget.run_numeric) return o;
  const int n = run.p.dim();
  // A distinct stream from rule (iv) so the two samples are independent.
  std::mt19937_64 rng(run.budget.seed ^ 0x9e3779b97f4a7c15ULL);
  int sampled = 0;
  int by_derivative = 0;
  int by_increase = 0;
  double best_r0 = 0.0;
  double best_margin = -std::numeric_limits<double>::infinity();
  double best_slope = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < run.budget.mono_s_samples; ++i) {
    if (run.over_budget()) break;
    const Vector s = draw_direction(n, rng);
    ++sampled;
    const DerivativeAtZero dz = h_derivative_at_zero(run.p, s, opts);
    if (dz.applicable) best_slope = std::max(best_slope, dz.value);
    if (dz.applicable && dz.value > run.budget.mono_tol) {
      ++by_derivative;
      continue;
    }
    const auto flags = monotonicity_scan(run.p, {s}, run.budget.mono_r_grid, run.budget.mono_tol, opts);
    const MonotonicityFlag& f = flags.front();
    if (f.status != QuadStatus::Finite) continue;
    if (f.margin > best_margin) best_margin = f.margin;
    if (!f.nonincreasing) {
      ++by_increase;
      if (best_r0 == 0.0) best_r0 = f.r0;
    }
  }
  const double fraction = sampled > 0 ? static_cast<double>(by_derivative + by_increase) / sampled : 0.0;
  run.evidence.push_back({"mono_sampled", static_cast<double>(sampled), 0.0});
  if (std::isfinite(best_slope)) run.evidence.push_back({"max_h_derivative_at_zero", best_slope, run.budget.mono_tol});
  if (std::isfinite(best_margin)) run.evidence.push_back({"max_increase_margin", best_margin, run.budget.mono_tol});
  if (best_r0 > 0.0) run.evidence.push_back({"r0_witness", best_r0, run.budget.mono_tol});
  run.evidence.push_back({"mono_positive_fraction", fraction, run.budget.positive_fraction});
  if (sampled > 0 && by_derivative + by_increase > 0 && fraction >= run.budget.positive_fraction) {
    o.fired = true;
    if (by_derivative == 0) o.rule = "Thm3.2(ii)-numeric";
    o.detail = std::to_string(by_derivative) + " directions with positive slope at 0+, " +
               std::to_string(by_increase) + " with an increase on the r grid";
  }
  return o;
}

using RuleFn = std::function<RuleOutcome(Run&)>;

std::vector<RuleFn> ladder() {
  const QuadOptions opts = density_quadrature();
  return {
      rule_dimension_one,
      rule_driftless,
      rule_singular_sigma,
      rule_no_interior_mass,
      rule_finite_support,
      [opts](Run& r) { return rule_ray_moments(r, opts); },
      [opts](Run& r) { return rule_strong_moment(r, opts); },
      [opts](Run& r) { return rule_numeric_iv(r, opts); },
      [opts](Run& r) { return rule_numeric_monotone(r, opts); },
  };
}

constexpr std::size_t kFirstNumericRule = 7;

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::SD: return "SD";
    case Verdict::NOT_SD: return "NOT_SD";
    case Verdict::INCONCLUSIVE: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

std::vector<std::string> SubclassTag::names() const {
  std::vector<std::string> out;
  if (vg) out.emplace_back("VG");
  if (vgg_n1) out.emplace_back("VGG_n1");
  if (vgg_nn) out.emplace_back("VGG_nn");
  if (wvag) out.emplace_back("WVAG");
  if (wvmg) out.emplace_back("WVMG");
  if (wvgg) out.emplace_back("WVGG");
  return out;
}

SubclassTag identify_subclass(const WvggParams& p) {
  SubclassTag t;
  const ThorinMeasure& u = p.measure;
  const bool d_zero = !is_nonzero(p.d);
  t.drift_zero = !is_nonzero(p.mu);
  t.vgg_nn = sigma_diagonal(p.sigma);

  bool all_on_e = !u.components().empty();
  for (const auto& c : u.components()) {
    if (const auto* a = std::get_if<Atom>(&c)) {
      all_on_e = all_on_e && on_e_ray(a->point);
    } else if (const auto* r = std::get_if<Ray>(&c)) {
      all_on_e = all_on_e && on_e_ray(r->direction);
    } else {
      all_on_e = false;
    }
  }
  const bool d_on_e = d_zero || on_e_ray(p.d);
  t.vgg_n1 = all_on_e && d_on_e;

  t.wvmg = d_zero && u.finitely_supported();
  t.wvag = d_zero && wvag_pattern(u);

  if (d_zero && u.components().size() == 1) {
    if (const auto* a = std::get_if<Atom>(&u.components().front())) {
      const double c = a->point.mean();
      t.vg = on_e_ray(a->point) && nearly(a->mass, p.dim() * c);
    }
  }
  return t;
}

ClassificationReport classify(const WvggParams& p, const ClassifyBudget& budget) {
  Run run(p, budget);
  ClassificationReport report;
  report.seed = budget.seed;
  const auto rules = ladder();
  for (std::size_t i = 0; i < rules.size(); ++i) {
    if (i >= kFirstNumericRule && !budget.run_numeric) break;
    const RuleOutcome o = rules[i](run);
    if (run.out_of_time) {
      report.rule = "budget-exhausted";
      report.notes.push_back("time budget of " + format(budget.max_seconds) + " s exhausted during " + o.rule);
      break;
    }
    if (o.fired) {
      report.verdict = o.verdict;
      report.rule = o.rule;
      report.numeric_only = i >= kFirstNumericRule;
      if (!o.detail.empty()) report.notes.push_back(o.detail);
      if (report.numeric_only) {
        report.notes.push_back("supported by quadrature evidence, not proved by a closed-form clause");
      } else if (o.verdict == Verdict::NOT_SD) {
        report.notes.push_back("proved by a theorem clause with exactly checkable hypotheses");
      }
      break;
    }
  }
  if (report.rule.empty()) {
    report.rule = "none";
    report.notes.push_back("no rule of the ladder applies");
  }
  report.evidence = std::move(run.evidence);
  for (auto& n : run.notes) report.notes.push_back(std::move(n));
  return report;
}

std::vector<RuleOutcome> audit(const WvggParams& p, const ClassifyBudget& budget) {
  Run run(p, budget);
  std::vector<RuleOutcome> out;
  const auto rules = ladder();
  for (std::size_t i = 0; i < rules.size(); ++i) {
    if (i >= kFirstNumericRule && !budget.run_numeric) break;
    out.push_back(rules[i](run));
  }
  return out;
}

bool audit_consistent(const std::vector<RuleOutcome>& outcomes) {
  bool sd = false;
  bool not_sd = false;
  for (const auto& o : outcomes) {
    if (!o.fired) continue;
    sd = sd || o.verdict == Verdict::SD;
    not_sd = not_sd || o.verdict == Verdict::NOT_SD;
  }
  return !(sd && not_sd);
}

const char* to_string(EquivClause c) {
  switch (c) {
    case EquivClause::SphereSupported: return "sphere-supported";
    case EquivClause::RaySupported: return "ray-supported";
    case EquivClause::AwayFromOrigin: return "away-from-origin";
    case EquivClause::Direct: return "direct";
  }
  return "direct";
}

namespace {

std::vector<Vector> curve_samples(const Curve& c, int count = 65) {
  std::vector<Vector> pts;
  for (int i = 1; i < count; ++i) pts.push_back(c.map(c.lower + (c.upper - c.lower) * i / count));
  return pts;
}

// 𝒰((𝕊_{++})^C) = 0.
bool sphere_supported(const ThorinMeasure& u) {
  auto on_sphere = [](const Vector& x) { return is_positive(x) && std::abs(x.norm() - 1.0) <= 1e-9; };
  for (const auto& c : u.components()) {
    if (const auto* a = std::get_if<Atom>(&c)) {
      if (!on_sphere(a->point)) return false;
    } else if (std::holds_alternative<Ray>(c)) {
      return false;
    } else {
      for (const auto& x : curve_samples(std::get<Curve>(c))) {
        if (!on_sphere(x)) return false;
      }
    }
  }
  return true;
}

// 𝒰((a𝔻_*)_{++}) = 0 for some a > 0; curves are checked on a sample grid.
bool away_from_origin(const ThorinMeasure& u) {
  for (const auto& c : u.components()) {
    if (!ThorinMeasure::is_interior(c)) continue;
    if (const auto* r = std::get_if<Ray>(&c)) {
      if (!(r->density.lower > 0.0)) return false;
    } else if (const auto* cv = std::get_if<Curve>(&c)) {
      double lo = std::numeric_limits<double>::infinity();
      for (const auto& x : curve_samples(*cv)) lo = std::min(lo, x.norm());
      if (!(lo > 1e-9)) return false;
    }
  }
  return true;
}

bool clause_applies(const ThorinMeasure& u, EquivClause c) {
  switch (c) {
    case EquivClause::SphereSupported: return sphere_supported(u);
    case EquivClause::RaySupported: return u.interior_ray_supported();
    case EquivClause::AwayFromOrigin: return away_from_origin(u);
    case EquivClause::Direct: return true;
  }
  return false;
}

}  // namespace

EquivalentConditions equivalent_conditions(const WvggParams& p, const Vector& s,
                                           std::optional<EquivClause> clause, const QuadOptions& opts) {
  const int n = p.dim();
  if (n < 2) throw NotApplicable("equivalent_conditions: requires n >= 2");
  if (!p.sigma.invertible()) throw DomainError("equivalent_conditions: sigma must be invertible");
  if (s.size() != n || std::abs(s.norm() - 1.0) > 1e-9 || !all_coordinates_nonzero(s)) {
    throw DomainError("equivalent_conditions: s must be a unit vector with nonzero coordinates");
  }
  const ThorinMeasure& u = p.measure;
  EquivalentConditions out;
  if (clause) {
    if (!clause_applies(u, *clause)) {
      throw DomainError(std::string("equivalent_conditions: clause ") + to_string(*clause) +
                        " does not apply to this measure");
    }
    out.clause = *clause;
  } else {
    out.clause = EquivClause::Direct;
    for (EquivClause c : {EquivClause::SphereSupported, EquivClause::RaySupported, EquivClause::AwayFromOrigin}) {
      if (clause_applies(u, c)) {
        out.clause = c;
        break;
      }
    }
  }

  const Matrix& sig = p.sigma.matrix();
  // ‖s‖_{(u⋄Σ)⁻¹}^{n−1}(∏u)^{1/2} in log form.
  auto log_weight = [&](const Vector& x) {
    const double q = weighted_inner(s, s, x, sig);
    return 0.5 * (n - 1) * std::log(q) + 0.5 * x.array().log().sum();
  };
  // As in the density integrals, numerically degenerate nodes count as null.
  auto guarded = [](double v) { return std::isfinite(v) ? v : 0.0; };

  out.direct = h_derivative_at_zero(p, s, opts).precondition;
  switch (out.clause) {
    case EquivClause::SphereSupported:
      out.equivalent = integrate_measure(u, [&](const Vector& x) { return is_positive(x) ? guarded(std::exp(-log_weight(x))) : 0.0; }, true, opts);
      break;
    case EquivClause::RaySupported: {
      QuadResult total;
      total.status = QuadStatus::Finite;
      for (const auto& m : ray_half_moment(u, true, opts)) total = combine(total, m.result);
      out.equivalent = total;
      break;
    }
    case EquivClause::AwayFromOrigin:
      out.equivalent = integrate_measure(
          u, [&](const Vector& x) { return is_positive(x) ? guarded(std::exp(std::log(x.norm()) - log_weight(x))) : 0.0; }, true, opts);
      break;
    case EquivClause::Direct:
      out.equivalent = out.direct;
      break;
  }
  out.agree = out.equivalent.finite() == out.direct.finite();
  return out;
}

GrigelionisCheck grigelionis_check(const WvggParams& p, const QuadOptions& opts) {
  GrigelionisCheck out;
  const int n = p.dim();
  if (n < 2 || !identify_subclass(p).vgg_n1 || !is_nonzero(p.mu) || !p.sigma.invertible()) return out;
  out.applicable = true;
  const double order = n == 2 ? 2.0 : 1.0;
  // 𝒰 = ∫δ_{v·e/n}𝒰₀(dv): a point c·e carries 𝒰₀-coordinate n·c.
  QuadResult total;
  total.status = QuadStatus::Finite;
  for (const auto& c : p.measure.components()) {
    if (const auto* a = std::get_if<Atom>(&c)) {
      QuadResult q;
      q.status = QuadStatus::Finite;
      q.value = a->mass * std::pow(n * a->point.mean(), order);
      total = combine(total, q);
    } else if (const auto* r = std::get_if<Ray>(&c)) {
      QuadResult q = radial_moment(r->density, order, 0.0, opts);
      const double scale = std::pow(n * r->direction.mean(), order);
      q.value *= scale;
      q.abs_err *= scale;
      total = combine(total, q);
    }
  }
  out.moment = total;
  out.fires = total.finite() && total.value > 0.0;
  return out;
}

std::vector<Vector> sphere_grid(int n, int count) {
  if (n < 1 || count < 1) throw DomainError("sphere_grid: need n >= 1 and count >= 1");
  std::vector<Vector> out;
  out.reserve(count);
  if (n == 2) {
    // Offsets by half a step keep every point off the axes.
    for (int k = 0; k < count; ++k) {
      const double t = 2.0 * std::numbers::pi * (k + 0.5) / count + 1e-3;
      out.push_back(Vector{{std::cos(t), std::sin(t)}});
    }
    return out;
  }
  std::mt19937_64 rng(0x5eedULL + static_cast<std::uint64_t>(n));
  for (int k = 0; k < count; ++k) out.push_back(draw_direction(n, rng));
  return out;
}

Counterexample build_sd_counterexample(const CounterexampleInput& in, const CounterexampleGrid& grid) {
  const int n = static_cast<int>(in.alpha.size());
  if (n < 2) throw DomainError("build_sd_counterexample: requires n >= 2");
  if (!(in.c >= 0.5 && in.c <= 1.0)) throw DomainError("build_sd_counterexample: c must lie in [1/2, 1]");
  if (!is_positive(in.alpha)) throw DomainError("build_sd_counterexample: alpha must be positive");
  if (in.mu.size() != n || !is_nonzero(in.mu)) throw DomainError("build_sd_counterexample: mu must be nonzero");
  if (in.sigma.dim() != n || !in.sigma.invertible()) {
    throw DomainError("build_sd_counterexample: sigma must be invertible");
  }
  const Vector d = in.d.size() == 0 ? Vector::Zero(n) : in.d;

  const CovMatrix m = diamond(in.alpha, in.sigma);
  const Vector am = in.alpha.cwiseProduct(in.mu);
  const double q = m.inverse_norm2(am);
  const double lambda_max = Eigen::SelfAdjointEigenSolver<Matrix>(m.matrix(), Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();

  Counterexample out;
  out.b = 1.0;
  out.a = 2.0 * out.b / q;
  out.e_bar = m.solve(am).norm();
  out.a_low = 2.0 / lambda_max;
  out.b_low = q / lambda_max;
  const double nu = 0.5 * n;
  out.h = out.e_bar * std::sqrt(std::numbers::pi) * std::exp(std::lgamma(nu + 0.5) - std::lgamma(nu));
  out.g = std::max(1.0, (out.h * out.h - out.b_low) / out.a_low);

  ThorinMeasure measure = sdcex_measure(out.a, out.b, in.c, out.g, in.alpha, in.axis);
  out.params.emplace(d, in.mu, in.sigma, std::move(measure));
  out.verification = monotonicity_scan(*out.params, sphere_grid(n, grid.s_count), grid.r_grid, grid.tol);
  out.verified = std::all_of(out.verification.begin(), out.verification.end(), [](const MonotonicityFlag& f) {
    return f.nonincreasing && f.status == QuadStatus::Finite;
  });
  if (!out.verified) {
    for (const auto& f : out.verification) {
      if (f.status != QuadStatus::Finite) {
        throw NumericError(std::string("build_sd_counterexample: density quadrature ") + to_string(f.status));
      }
      if (!f.nonincreasing) {
        throw NumericError("build_sd_counterexample: increase of relative size " + format(f.margin) +
                           " near r = " + format(f.r0));
      }
    }
  }
  return out;
}

double g_star(double f, double t) {
  if (!(t > 0.0)) throw DomainError("g_star: t must be positive");
  return kappa_bessel(1.0, t) + (1.0 / t - f) * bessel_tail(1.0, t);
}

double g_star_derivative(double f, double t) {
  if (!(t > 0.0)) throw DomainError("g_star_derivative: t must be positive");
  return -t * kappa_bessel(0.0, t) + (f - 1.0 / t) * kappa_bessel(1.0, t) - bessel_tail(1.0, t) / (t * t);
}

}  // namespace wvgg
