#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace wvgg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Symmetric nonnegative definite matrix. Symmetry must be exact; inputs that
// are not symmetric are rejected rather than symmetrised.
class CovMatrix {
 public:
  // Relative slack on eigenvalues (scaled by max(1, trace)).
  static constexpr double kEigenTol = 1e-10;
  // |Σ| must exceed det_tol times the Hadamard bound ∏Σ_kk to count as invertible.
  static constexpr double kDetTol = 1e-12;

  explicit CovMatrix(Matrix entries, double det_tol = kDetTol);

  static CovMatrix identity(int n);
  static CovMatrix diagonal(const Vector& d);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  double operator()(int k, int l) const { return m_(k, l); }
  double det() const { return det_; }
  bool invertible() const { return invertible_; }
  bool is_diagonal(double tol = 0.0) const;

  // ‖x‖²_{Σ^{-1}}; requires invertible().
  double inverse_norm2(const Vector& x) const;
  // ⟨x, y⟩_{Σ^{-1}}; requires invertible().
  double inverse_inner(const Vector& x, const Vector& y) const;
  Vector solve(const Vector& x) const;

 private:
  Matrix m_;
  double det_ = 0.0;
  bool invertible_ = false;
  Eigen::LLT<Matrix> llt_;
};

// Finite entries, coordinate predicates.
bool all_finite(const Vector& x);
bool is_nonnegative(const Vector& x);          // x ∈ [0,∞)ⁿ
bool is_positive(const Vector& x);             // x ∈ (0,∞)ⁿ
bool is_nonzero(const Vector& x);              // x ∈ ℝⁿ_*
bool all_coordinates_nonzero(const Vector& x); // x ∈ ℝⁿ_**

Vector diamond(const Vector& x, const Vector& mu);
// (x_k ∧ x_l)·Σ_kl for arbitrary real x.
Matrix diamond(const Vector& x, const Matrix& sigma);
// Requires x ≥ 0 so the result stays nonnegative definite.
CovMatrix diamond(const Vector& x, const CovMatrix& sigma);

Matrix min_matrix(const Vector& x);

double determinant(const Matrix& a);
double min_eigenvalue(const Matrix& symmetric);
// Smallest eigenvalue ≥ −rel_tol·max(1, trace).
bool is_nonneg_definite(const Matrix& symmetric, double rel_tol = 1e-9);

struct OppenheimBounds {
  double ratio = 0.0;  // |u⋄Σ| / ∏u
  double lower = 0.0;  // |Σ|
  double upper = 0.0;  // ∏Σ_kk
  bool holds = false;  // lower ≤ ratio ≤ upper within 1e-10 relative slack
};
OppenheimBounds oppenheim_ratio(const CovMatrix& sigma, const Vector& u);

// Ξ_{n+1}(x): diagonal 2, row k ≤ n off-diagonal x_k, last row off-diagonal 1.
Matrix xi_matrix(const Vector& x);
double xi_det(const Vector& x);

// Exact determinant of Ξ_{n+1}(x) for x ∈ {0,1}ⁿ by fraction-free elimination.
std::int64_t xi_det_binary(const std::vector<int>& x);
// Bareiss elimination; exact for integer matrices whose minors fit in int64.
std::int64_t exact_determinant(std::vector<std::vector<std::int64_t>> a);

struct XiExtrema {
  std::int64_t inf = 0;
  std::int64_t sup = 0;
  std::vector<int> argmin;
  std::vector<int> argmax;
};
// Scans the corner set {0, e} ∪ {(0,…,0,1,…,1)} for 1 ≤ n ≤ 8.
XiExtrema xi_extrema(int n);
std::vector<std::vector<int>> xi_corner_set(int n);

// Υ_n(v), v ∈ [0,1]^{n−1}: diagonal 2, (k<l) entry 1 + ∏_{k≤m<l} v_m.
Matrix upsilon_matrix(const Vector& v);
// Θ_n(u)_kl = t(u_k/u_l), t(x) = (1∧x) + (1∧1/x).
Matrix theta_matrix(const Vector& u);
// Δ_n(v): ones on and below the diagonal, ∏_{k≤m<l} v_m above.
Matrix delta_matrix(const Vector& v);
// Symmetric part of (u⋄Σ)·diag(1/u).
Matrix sigma_sym(const Vector& u, const CovMatrix& sigma);

// v_k = u_k/u_{k+1} for nondecreasing u ∈ (0,∞)ⁿ.
Vector ratios_from_ordered(const Vector& u);
// Inverse of ratios_from_ordered with u_n = 1.
Vector ordered_from_ratios(const Vector& v);

}  // namespace wvgg
