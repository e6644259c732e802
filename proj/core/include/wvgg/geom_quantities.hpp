#pragma once

#include <vector>

#include "wvgg/matrix_core.hpp"

namespace wvgg {

// Brownian drift μ and invertible covariance Σ.
class QuantityContext {
 public:
  QuantityContext(Vector mu, CovMatrix sigma);

  int dim() const { return static_cast<int>(mu_.size()); }
  const Vector& mu() const { return mu_; }
  const CovMatrix& sigma() const { return sigma_; }

 private:
  Vector mu_;
  CovMatrix sigma_;
};

// 𝔄, 𝔇, 𝔈 at (x, u) with M = u⋄Σ:
//   𝔈 = ⟨x, u⋄μ⟩_{M⁻¹}
//   𝔄 = ((2‖u‖² + ‖u⋄μ‖²_{M⁻¹})·‖x‖²_{M⁻¹})^{1/2}
//   𝔇 = ‖x‖ⁿ_{M⁻¹}·|M|^{1/2}
struct Ade {
  double a = 0.0;
  double d = 0.0;
  double e = 0.0;
};
Ade ade_quantities(const QuantityContext& ctx, const Vector& x, const Vector& u);
double e_quantity(const QuantityContext& ctx, const Vector& x, const Vector& u);
double a_quantity(const QuantityContext& ctx, const Vector& x, const Vector& u);
double d_quantity(const QuantityContext& ctx, const Vector& y, const Vector& u);

// ⟨x, y⟩_{(u⋄Σ)⁻¹} for an arbitrary symmetric Σ with u⋄Σ invertible.
double weighted_inner(const Vector& x, const Vector& y, const Vector& u, const Matrix& sigma);

// 𝔈(x, u) in ordered coordinates: with x̃, μ̃, Σ̃ permuted by perm and
// u_{perm[0]} ≤ … ≤ u_{perm[n−1]} encoded by ratios v ∈ [0,1]^{n−1},
// 𝔈 = μ̃ (Δ_n(v)*Σ̃)⁻¹ x̃'. Defined on the closed box, faces included.
double boundary_e(const QuantityContext& ctx, const Vector& x, const std::vector<int>& perm,
                  const Vector& v);

// u ∈ (0,∞)ⁿ with the ordering and ratios of (perm, v); v must be positive.
Vector u_from_ordered_ratios(const std::vector<int>& perm, const Vector& v);

struct InfimumEstimate {
  double value = 0.0;
  Vector argmin_v;
  std::vector<int> permutation;
  bool boundary = false;  // some argmin ratio < 1e-6
  bool certified_positive = false;
  double uncertainty = 0.0;
  double grid_value = 0.0;
  long evaluations = 0;
};

struct ScanOptions {
  int grid_points = 17;
  // n!·G^{n−1} is capped here; G shrinks for n = 5, 6.
  double max_evaluations = 2.5e6;
  int refine_starts = 4;
  double refine_step_min = 1e-10;
};

// Effective per-axis grid size for a dimension under the evaluation cap.
int scan_grid_points(int n, const ScanOptions& opts);

// inf_{u ∈ (0,∞)ⁿ} 𝔈(x, u); n ≤ 6.
InfimumEstimate usp_infimum(const QuantityContext& ctx, const Vector& x, const ScanOptions& opts = {});

enum class Membership { Member, NotMember, Unknown };
const char* to_string(Membership m);

struct MembershipResult {
  Membership member = Membership::Unknown;
  InfimumEstimate evidence;
};
MembershipResult v_plus_member(const QuantityContext& ctx, const Vector& x, const ScanOptions& opts = {});

enum class Extremal { InfNormY, InfD, SupNormUMu, SupAbsE };
const char* to_string(Extremal e);

struct ExtremalResult {
  double estimate = 0.0;
  bool finite_or_positive = false;
  Vector arg_u;
};
// Grid plus pattern-search refinement over 𝕊_{++}.
ExtremalResult extremal_scan(const QuantityContext& ctx, Extremal which, const Vector& arg,
                             const ScanOptions& opts = {});

}  // namespace wvgg
