#include "wvgg/special_fn.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "wvgg/errors.hpp"

namespace wvgg {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kEulerGamma = std::numbers::egamma;
// Trapezoid terms below this fraction of the peak are dropped. The log-concave
// integrands only decrease past the saddle, so the dropped mass is of the same order.
constexpr double kDropRatio = 1e-20;
constexpr double kRelTarget = 2e-15;
constexpr int kMaxHalvings = 12;

struct LogSum {
  double log_value;
  double rel_err;
};

// log ∫ exp(ψ(x)) dx for strictly concave ψ peaking at x_star, by trapezoid
// sums on a lattice anchored at x_star with step halving.
template <class Psi>
LogSum log_trapezoid_concave(const Psi& psi, double x_star, double psi_star, double h0) {
  // Rounding in ψ near the peak is about eps·|ψ*|; no sum can settle below that.
  const double target = std::max(kRelTarget, 8.0 * std::numeric_limits<double>::epsilon() * std::abs(psi_star));
  auto term = [&](double x) { return std::exp(psi(x) - psi_star); };
  auto walk = [&](double start, double h, double dir, double& sum) {
    // Sum of term(start + dir·k·step) for k ≥ 0 until terms drop under kDropRatio
    // on the far side of the peak.
    for (int k = 0;; ++k) {
      const double x = start + dir * k * h;
      const double y = term(x);
      sum += y;
      if (y < kDropRatio && dir * (x - x_star) > 0.0) break;
      if (k > 200000) throw NumericError("kappa quadrature: runaway walk");
    }
  };
  double h = h0;
  double sum = 0.0;
  walk(x_star, h, 1.0, sum);
  walk(x_star - h, h, -1.0, sum);
  double prev = h * sum;
  for (int level = 1; level <= kMaxHalvings; ++level) {
    // New nodes sit halfway between the old ones.
    double odd = 0.0;
    walk(x_star + 0.5 * h, h, 1.0, odd);
    walk(x_star - 0.5 * h, h, -1.0, odd);
    sum += odd;
    h *= 0.5;
    const double cur = h * sum;
    const double rel = std::abs(cur - prev) / cur;
    if (rel <= target) return {std::log(cur) + psi_star, std::max(rel, 1e-16)};
    prev = cur;
  }
  throw NumericError("kappa quadrature: trapezoid did not settle");
}

double log_erfc(double z) {
  if (z < 25.0) return std::log(std::erfc(z));
  const double z2 = z * z;
  const double series = -0.5 / z2 + 0.75 / (z2 * z2) - 1.875 / (z2 * z2 * z2);
  return -z2 - std::log(z * std::sqrt(std::numbers::pi)) + std::log1p(series);
}

void check_args(double rho, double w, const char* what) {
  if (!(rho >= 0.0) || !std::isfinite(rho)) {
    throw DomainError(std::string(what) + ": order must be a finite value >= 0");
  }
  if (!(w > 0.0) || !std::isfinite(w)) {
    throw DomainError(std::string(what) + ": argument must be finite and > 0");
  }
}

LogSum log_kappa_impl(double rho, double w) {
  if (rho == 0.0 && w < 1e-4) {
    const double q = 0.25 * w * w;
    const double v = -(std::log(0.5 * w) + kEulerGamma) * (1.0 + q) + q;
    return {std::log(v), q * q * std::abs(std::log(w))};
  }
  if (w > std::max(50.0, 4.0 * rho * rho)) {
    // Hankel expansion. Past this point its smallest term is far below double
    // precision, while the saddle sum loses digits to rounding in ψ ≈ −w.
    const double mu = 4.0 * rho * rho;
    double term = 1.0;
    double series = 1.0;
    for (int k = 1; k <= 40; ++k) {
      const double next = term * (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * w);
      if (std::abs(next) >= std::abs(term)) break;
      term = next;
      series += term;
      if (std::abs(term) < 1e-17 * std::abs(series)) break;
    }
    return {rho * std::log(w) + 0.5 * std::log(0.5 * std::numbers::pi / w) - w + std::log(series),
            std::max(std::abs(term), 1e-16)};
  }
  const double q = 0.25 * w * w;
  const double t_star = 0.5 * (rho + std::sqrt(rho * rho + w * w));
  const double x_star = std::log(t_star);
  auto psi = [rho, q](double x) { return rho * x - std::exp(x) - q * std::exp(-x); };
  const double curvature = t_star + q / t_star;
  const double h0 = std::min(0.5, 1.0 / std::sqrt(curvature));
  LogSum s;
  try {
    s = log_trapezoid_concave(psi, x_star, psi(x_star), h0);
  } catch (const NumericError& e) {
    throw NumericError(std::string(e.what()) + " (rho=" + std::to_string(rho) + ", w=" + std::to_string(w) + ")");
  }
  s.log_value += (rho - 1.0) * kLn2;
  return s;
}

}  // namespace

BesselEval kappa_bessel_eval(double rho, double w) {
  check_args(rho, w, "kappa_bessel");
  const LogSum s = log_kappa_impl(rho, w);
  BesselEval e;
  e.rho = rho;
  e.w = w;
  e.value = std::exp(s.log_value);
  e.abs_err_est = e.value * s.rel_err;
  return e;
}

double kappa_bessel(double rho, double w) { return kappa_bessel_eval(rho, w).value; }

double log_kappa_bessel(double rho, double w) {
  check_args(rho, w, "log_kappa_bessel");
  return log_kappa_impl(rho, w).log_value;
}

double kappa_bessel_at_zero(double rho) {
  if (!(rho >= 0.0)) throw DomainError("kappa_bessel_at_zero: order must be >= 0");
  if (rho == 0.0) return std::numeric_limits<double>::infinity();
  return std::exp((rho - 1.0) * kLn2 + std::lgamma(rho));
}

KappaKernel::KappaKernel(double rho) : rho_(rho) {
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw DomainError("KappaKernel: order must be >= 0");
  const double m = rho - 0.5;
  if (m >= 0.0 && m <= 10.0 && m == std::floor(m)) {
    half_order_ = static_cast<int>(m);
    // a_k = (m+k)! / (k!(m−k)!) 2^{−k}
    for (int k = 0; k <= half_order_; ++k) {
      coef_[k] = std::exp(std::lgamma(half_order_ + k + 1.0) - std::lgamma(k + 1.0) -
                          std::lgamma(half_order_ - k + 1.0) - k * kLn2);
    }
  }
}

double KappaKernel::log_value(double w) const {
  if (half_order_ < 0) return log_kappa_bessel(rho_, w);
  if (!(w > 0.0)) throw DomainError("KappaKernel: argument must be > 0");
  // 𝔎_{m+1/2}(w) = (π/2)^{1/2} e^{−w} Σ_k a_k w^{m−k}
  double p = coef_[0];
  for (int k = 1; k <= half_order_; ++k) p = p * w + coef_[k];
  return 0.5 * std::log(0.5 * std::numbers::pi) - w + std::log(p);
}

double KappaKernel::operator()(double w) const {
  if (half_order_ < 0) return kappa_bessel(rho_, w);
  return std::exp(log_value(w));
}

KappaSup kappa_bessel_sup(double rho) {
  if (!(rho >= 0.0)) throw DomainError("kappa_bessel_sup: order must be >= 0");
  auto g = [rho](double log_r) {
    const double r = std::exp(log_r);
    return r * kappa_bessel(rho, r);
  };
  const double lo = std::log(1e-6);
  const double hi = std::log(400.0);
  constexpr int kGrid = 240;
  int best = 0;
  double best_val = -1.0;
  for (int i = 0; i <= kGrid; ++i) {
    const double v = g(lo + (hi - lo) * i / kGrid);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  double a = lo + (hi - lo) * std::max(best - 1, 0) / kGrid;
  double b = lo + (hi - lo) * std::min(best + 1, kGrid) / kGrid;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double gc = g(c);
  double gd = g(d);
  while (b - a > 1e-10) {
    if (gc > gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - inv_phi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + inv_phi * (b - a);
      gd = g(d);
    }
  }
  KappaSup s;
  const double x = 0.5 * (a + b);
  s.argmax = std::exp(x);
  s.value = std::max(g(x), best_val);
  s.near_zero = 1e-8 * kappa_bessel(rho, 1e-8);
  return s;
}

double bessel_tail(double nu, double r) {
  check_args(nu, r, "bessel_tail");
  // ∫_r^∞ 𝔎_ν = 2^{ν−1}π^{1/2}∫ t^{ν−1/2} e^{−t} erfc(r/(2√t)) dt, t = e^x.
  auto psi = [nu, r](double x) {
    return (nu + 0.5) * x - std::exp(x) + log_erfc(0.5 * r * std::exp(-0.5 * x));
  };
  // ψ is concave; locate its peak by golden section.
  double a = -60.0;
  double b = 2.0 * std::log(r + nu + 10.0) + 5.0;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double pc = psi(c);
  double pd = psi(d);
  while (b - a > 1e-8) {
    if (pc > pd) {
      b = d;
      d = c;
      pd = pc;
      c = b - inv_phi * (b - a);
      pc = psi(c);
    } else {
      a = c;
      c = d;
      pc = pd;
      d = a + inv_phi * (b - a);
      pd = psi(d);
    }
  }
  const double x_star = 0.5 * (a + b);
  const double p_star = psi(x_star);
  const double dx = 1e-3;
  const double second = (psi(x_star + dx) - 2.0 * p_star + psi(x_star - dx)) / (dx * dx);
  const double h0 = second < 0.0 ? std::min(0.5, 1.0 / std::sqrt(-second)) : 0.5;
  const LogSum s = log_trapezoid_concave(psi, x_star, p_star, h0);
  return std::exp(s.log_value + (nu - 1.0) * kLn2 + 0.5 * std::log(std::numbers::pi));
}

double gaunt_tail_bound(double nu, double r) {
  if (!(nu > 0.0)) throw DomainError("gaunt_tail_bound: order must be > 0");
  return std::exp(0.5 * std::log(std::numbers::pi) + std::lgamma(nu + 0.5) - std::lgamma(nu)) *
         kappa_bessel(nu, r);
}

double bessel_derivative_check(double nu, double w, double step) {
  if (!(nu >= 1.0)) throw DomainError("bessel_derivative_check: order must be >= 1");
  if (!(w > 0.0)) throw DomainError("bessel_derivative_check: w must be positive");
  // Truncation error grows like h²/w near the origin, so the default step scales with w.
  if (step <= 0.0) step = std::min(1e-3 * w, 1e-4);
  if (!(w > step)) throw DomainError("bessel_derivative_check: need w > step");
  const double fd = (kappa_bessel(nu, w + step) - kappa_bessel(nu, w - step)) / (2.0 * step);
  const double exact = w * kappa_bessel(nu - 1.0, w);
  return std::abs(fd + exact) / std::max(exact, std::numeric_limits<double>::min());
}

}  // namespace wvgg
