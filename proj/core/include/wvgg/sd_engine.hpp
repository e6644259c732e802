#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wvgg/geom_quantities.hpp"
#include "wvgg/thorin_measures.hpp"
#include "wvgg/wvgg_density.hpp"

namespace wvgg {

enum class Verdict { SD, NOT_SD, INCONCLUSIVE };
const char* to_string(Verdict v);

struct EvidenceItem {
  std::string name;
  double value = 0.0;
  double tol = 0.0;
};

struct ClassificationReport {
  Verdict verdict = Verdict::INCONCLUSIVE;
  std::string rule;
  bool numeric_only = false;
  std::vector<EvidenceItem> evidence;
  std::vector<std::string> notes;
  std::uint64_t seed = 0;
};

struct SubclassTag {
  bool vg = false;
  bool vgg_n1 = false;
  bool vgg_nn = false;
  bool wvag = false;
  bool wvmg = false;
  bool wvgg = true;
  bool drift_zero = false;

  std::vector<std::string> names() const;
};

// Pattern match on d, Σ and U with tolerance 1e-12.
SubclassTag identify_subclass(const WvggParams& p);

struct ClassifyBudget {
  std::uint64_t seed = 20240601;
  // Numeric clause (iv): accepted directions, draw cap and required fraction.
  int s_samples = 64;
  int max_draws = 2048;
  double positive_fraction = 0.05;
  // Numeric clauses (ii)/(iii).
  int mono_s_samples = 32;
  std::vector<double> mono_r_grid = log_grid(1e-3, 20.0, 40);
  double mono_tol = 1e-6;
  ScanOptions scan;
  // Wall-clock cap; exceeding it yields INCONCLUSIVE with the evidence so far.
  double max_seconds = 600.0;
  bool run_numeric = true;
};

ClassificationReport classify(const WvggParams& p, const ClassifyBudget& budget = {});

struct RuleOutcome {
  std::string rule;
  Verdict verdict = Verdict::INCONCLUSIVE;  // verdict the rule would return when it fires
  bool fired = false;
  std::string detail;
};
// Evaluates every rule of the ladder independently.
std::vector<RuleOutcome> audit(const WvggParams& p, const ClassifyBudget& budget = {});
// No SD rule and NOT_SD rule fire together.
bool audit_consistent(const std::vector<RuleOutcome>& outcomes);

enum class EquivClause { SphereSupported, RaySupported, AwayFromOrigin, Direct };
const char* to_string(EquivClause c);

struct EquivalentConditions {
  EquivClause clause = EquivClause::Direct;
  QuadResult equivalent;  // the clause's integral (per-ray tail moments are combined)
  QuadResult direct;      // ∫𝔄/𝔇 dU over (0,∞)ⁿ
  bool agree = false;
};
// Finiteness of ∫𝔄(s,u)/𝔇(s,u) dU through the first applicable equivalent form,
// cross-checked against direct quadrature. s ∈ 𝕊_**.
EquivalentConditions equivalent_conditions(const WvggParams& p, const Vector& s,
                                           std::optional<EquivClause> clause = std::nullopt,
                                           const QuadOptions& opts = density_quadrature());

struct CounterexampleInput {
  double c = 0.5;
  Vector d;
  Vector alpha;
  Vector mu;
  CovMatrix sigma = CovMatrix::identity(2);
  std::vector<std::optional<RadialDensity>> axis;
};

struct Counterexample {
  double a = 0.0;
  double b = 1.0;
  double g = 0.0;
  double h = 0.0;
  double e_bar = 0.0;
  double a_low = 0.0;
  double b_low = 0.0;
  std::optional<WvggParams> params;
  std::vector<MonotonicityFlag> verification;
  bool verified = false;
};

struct CounterexampleGrid {
  int s_count = 32;
  std::vector<double> r_grid = default_r_grid();
  double tol = 1e-10;
};

// Grigelionis' moment test for VGG^{n,1}: ∫u²𝒰₀ (n = 2) or ∫u𝒰₀ (n ≥ 3) in (0,∞),
// with μ ≠ 0 and |Σ| ≠ 0. Kept to show where the half moment is sharper.
struct GrigelionisCheck {
  bool applicable = false;
  bool fires = false;
  QuadResult moment;
};
GrigelionisCheck grigelionis_check(const WvggParams& p, const QuadOptions& opts = {});

// Sets b = 1, a = 2/‖α⋄μ‖²_{(α⋄Σ)⁻¹}, g = 1 ∨ ((h² − b̲)/a̲) and verifies that
// r ↦ 𝔥_s(r) is nonincreasing on an s-grid of 𝕊. Throws NumericError otherwise.
Counterexample build_sd_counterexample(const CounterexampleInput& in, const CounterexampleGrid& grid = {});

// Evenly spaced unit vectors (n = 2) or a deterministic spherical Fibonacci-like
// set (n ≥ 3) with all coordinates nonzero.
std::vector<Vector> sphere_grid(int n, int count);

// 𝔊*(t) = 𝔎₁(t) + (1/t − f)∫_t^∞𝔎₁ and its t-derivative, for the untruncated
// two-dimensional construction with c = 1/2.
double g_star(double f, double t);
double g_star_derivative(double f, double t);

}  // namespace wvgg
