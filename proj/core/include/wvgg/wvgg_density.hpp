#pragma once

#include <complex>
#include <iosfwd>
#include <vector>

#include "wvgg/quadrature.hpp"
#include "wvgg/thorin_measures.hpp"

namespace wvgg {

// c_n = 2/(2π)^{n/2}
double c_n(int n);

struct Estimate {
  double value = 0.0;
  double abs_err = 0.0;
  QuadStatus status = QuadStatus::Unresolved;

  bool ok() const { return status == QuadStatus::Finite; }
};

// Quadrature settings used by the density routines.
QuadOptions density_quadrature();

// 𝔥_s(r) = c_n ∫ exp(r𝔈)𝔎_{n/2}(r𝔄)/𝔇 dU over (0,∞)ⁿ. n ≥ 2, s ∈ 𝕊, r > 0.
Estimate h_density(const WvggParams& p, const Vector& s, double r,
                   const QuadOptions& opts = density_quadrature());

// ∂_r𝔥_s(r) = c_n ∫ exp(r𝔈)(𝔈𝔎_{n/2}(r𝔄) − r𝔄²𝔎_{(n−2)/2}(r𝔄))/𝔇 dU.
Estimate h_derivative(const WvggParams& p, const Vector& s, double r,
                      const QuadOptions& opts = density_quadrature());

struct DerivativeAtZero {
  bool applicable = false;
  double value = 0.0;
  QuadResult precondition;  // ∫𝔄/𝔇 dU
  QuadResult mean;          // ∫𝔈/𝔇 dU
};
// c_n 2^{(n−2)/2}Γ(n/2)∫𝔈/𝔇 dU, applicable only when ∫𝔄/𝔇 dU is finite and n ≥ 2.
DerivativeAtZero h_derivative_at_zero(const WvggParams& p, const Vector& s,
                                      const QuadOptions& opts = density_quadrature());

// i⟨d⋄μ,θ⟩ − ½‖θ‖²_{d⋄Σ} − ∫ ln((‖u‖² − i⟨u⋄μ,θ⟩ + ½‖θ‖²_{u⋄Σ})/‖u‖²) dU.
std::complex<double> char_exponent(const WvggParams& p, const Vector& theta,
                                   const QuadOptions& opts = {});

// −b ln((b + ½‖θ‖²_Σ)/b), the exponent of a driftless symmetric VG law.
double vg_char_exponent(double b, const CovMatrix& sigma, const Vector& theta);

// Lévy density of VG^n(b, μ, Σ) at y ≠ 0.
double vg_levy_density(double b, const Vector& mu, const CovMatrix& sigma, const Vector& y);

std::vector<double> log_grid(double lo, double hi, int count);
std::vector<double> default_r_grid();

struct MonotonicityFlag {
  Vector s;
  bool nonincreasing = true;
  double r0 = 0.0;        // left grid point of the first flagged increase
  double margin = 0.0;    // largest h_{i+1}/h_i − 1 seen
  QuadStatus status = QuadStatus::Finite;
};
std::vector<MonotonicityFlag> monotonicity_scan(const WvggParams& p, const std::vector<Vector>& s_samples,
                                                const std::vector<double>& r_grid, double tol = 1e-6,
                                                const QuadOptions& opts = density_quadrature());

struct DensityCurve {
  Vector s;
  std::vector<double> r_grid;
  std::vector<double> values;
  std::vector<double> deriv;
  std::vector<double> quadrature_err;
  QuadStatus status = QuadStatus::Finite;
};
DensityCurve density_curve(const WvggParams& p, const Vector& s, const std::vector<double>& r_grid,
                           const QuadOptions& opts = density_quadrature());
// Header s_1,…,s_n,r,h,dh,err; 17 significant digits.
void write_csv(std::ostream& os, const DensityCurve& curve);

}  // namespace wvgg
