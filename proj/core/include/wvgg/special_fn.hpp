#pragma once

namespace wvgg {

// 𝔎_ρ(w) = w^ρ K_ρ(w) with its estimated absolute error.
struct BesselEval {
  double rho = 0.0;
  double w = 0.0;
  double value = 0.0;
  double abs_err_est = 0.0;
};

// Quadrature of 2^{ρ−1}∫₀^∞ t^{ρ−1} exp(−t − w²/(4t)) dt in t = e^x, centred at
// the saddle of the exponent. ρ ≥ 0, w > 0. Throws NumericError if the
// trapezoid fails to settle.
BesselEval kappa_bessel_eval(double rho, double w);
double kappa_bessel(double rho, double w);
double log_kappa_bessel(double rho, double w);

// 𝔎_ρ(0+) = 2^{ρ−1}Γ(ρ) for ρ > 0, +∞ for ρ = 0.
double kappa_bessel_at_zero(double rho);

// Order-specialised evaluator for inner loops: half-integer orders up to 21/2
// use the finite Hankel sum, other orders fall back to the quadrature.
class KappaKernel {
 public:
  explicit KappaKernel(double rho);
  double rho() const { return rho_; }
  double operator()(double w) const;
  double log_value(double w) const;

 private:
  double rho_;
  int half_order_ = -1;  // m for ρ = m + 1/2
  double coef_[12] = {};
};

struct KappaSup {
  double value = 0.0;       // sup_{r>0} r𝔎_ρ(r)
  double argmax = 0.0;
  double near_zero = 0.0;   // r𝔎_ρ(r) at r = 1e-8
};
KappaSup kappa_bessel_sup(double rho);

// ∫_r^∞ 𝔎_ν(v) dv, ν ≥ 0, r > 0, relative error ≤ 1e-8.
double bessel_tail(double nu, double r);

// π^{1/2}Γ(ν+1/2)/Γ(ν)·𝔎_ν(r), an upper bound for bessel_tail; ν > 0.
double gaunt_tail_bound(double nu, double r);

// |(𝔎_ν(w+h) − 𝔎_ν(w−h))/(2h) + w𝔎_{ν−1}(w)| / max(w𝔎_{ν−1}(w), tiny); ν ≥ 1.
// step ≤ 0 selects h = min(1e-3·w, 1e-4).
double bessel_derivative_check(double nu, double w, double step = 0.0);

}  // namespace wvgg
