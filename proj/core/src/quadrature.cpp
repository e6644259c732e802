#include "wvgg/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "wvgg/errors.hpp"

namespace wvgg {

const char* to_string(QuadStatus s) {
  switch (s) {
    case QuadStatus::Finite: return "Finite";
    case QuadStatus::Divergent: return "Divergent";
    case QuadStatus::Unresolved: return "Unresolved";
  }
  return "Unresolved";
}

QuadResult combine(const QuadResult& a, const QuadResult& b) {
  QuadResult r;
  r.value = a.value + b.value;
  r.abs_err = a.abs_err + b.abs_err;
  r.rounds = std::max(a.rounds, b.rounds);
  r.evaluations = a.evaluations + b.evaluations;
  if (a.status == QuadStatus::Divergent || b.status == QuadStatus::Divergent) {
    r.status = QuadStatus::Divergent;
  } else if (a.status == QuadStatus::Unresolved || b.status == QuadStatus::Unresolved) {
    r.status = QuadStatus::Unresolved;
  } else {
    r.status = QuadStatus::Finite;
  }
  return r;
}

QuadResult integrate_real_line(const Integrand& g, const QuadOptions& o) {
  QuadResult r;
  bool nonfinite = false;
  auto eval = [&](double t) {
    ++r.evaluations;
    const double y = g(t);
    if (!std::isfinite(y)) {
      nonfinite = true;
      return 0.0;
    }
    return y;
  };

  double h = o.initial_step;
  double window = o.initial_window;
  long k_max = static_cast<long>(std::floor(window / h + 1e-9));
  double sum = eval(0.0);
  double edge = 0.0;
  for (long k = 1; k <= k_max; ++k) {
    const double up = eval(k * h);
    const double down = eval(-k * h);
    sum += up + down;
    if (k == k_max) edge = std::abs(up) + std::abs(down);
  }
  double prev = h * sum;
  edge *= h;
  if (nonfinite) {
    r.status = QuadStatus::Divergent;
    r.value = std::numeric_limits<double>::infinity();
    r.abs_err = std::numeric_limits<double>::infinity();
    return r;
  }

  int streak = 0;
  for (int round = 1; round <= o.max_rounds; ++round) {
    const double h2 = 0.5 * h;
    const double window2 = std::min(window + o.window_growth, std::max(o.max_window, window));
    const long j_max = static_cast<long>(std::floor(window2 / h2 + 1e-9));
    const long old_top = 2 * k_max;
    double edge2 = 0.0;
    for (long j = 1; j <= j_max; ++j) {
      if (j <= old_top && j % 2 == 0) continue;
      const double up = eval(j * h2);
      const double down = eval(-j * h2);
      sum += up + down;
      if (j == j_max) edge2 = std::abs(up) + std::abs(down);
    }
    if (j_max == old_top) edge2 = edge / h;  // top node unchanged
    const double cur = h2 * sum;
    edge2 *= h2;
    r.rounds = round;
    r.value = cur;
    r.abs_err = std::abs(cur - prev);

    if (nonfinite || !std::isfinite(cur) || std::abs(cur) > o.divergence_cap) {
      r.status = QuadStatus::Divergent;
      return r;
    }
    const double tol = o.rel_tol * std::abs(cur) + o.abs_tol;
    if (r.abs_err <= tol && edge2 <= std::max(tol, 10.0 * o.rel_tol * std::abs(cur))) {
      r.status = QuadStatus::Finite;
      return r;
    }
    const double base = std::max(std::abs(prev), std::numeric_limits<double>::min());
    if ((std::abs(cur) - std::abs(prev)) / base > o.divergence_growth) {
      if (++streak >= o.divergence_rounds) {
        r.status = QuadStatus::Divergent;
        return r;
      }
    } else {
      streak = 0;
    }
    prev = cur;
    h = h2;
    window = window2;
    k_max = j_max;
    edge = edge2;
  }
  r.status = QuadStatus::Unresolved;
  return r;
}

QuadResult integrate_finite(const Integrand& f, double a, double b, const QuadOptions& o) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("integrate_finite: need finite a < b");
  }
  const double half = 0.5 * (b - a);
  constexpr double kHalfPi = 0.5 * std::numbers::pi;
  auto g = [&](double t) {
    const double s = kHalfPi * std::sinh(t);
    const double c = kHalfPi * std::cosh(t);
    // Distance to the nearer endpoint: half·(1 − tanh|s|) = (b−a)/(1+e^{2|s|}).
    const double e = std::exp(-2.0 * std::abs(s));
    const double dist = (b - a) * e / (1.0 + e);
    if (dist <= 0.0) return 0.0;
    const double x = t < 0.0 ? a + dist : b - dist;
    if (x <= a || x >= b) return 0.0;
    const double sech = 2.0 * std::exp(-std::abs(s)) / (1.0 + e);
    const double w = half * c * sech * sech;
    const double y = f(x);
    if (w == 0.0) return 0.0;
    return y * w;
  };
  QuadOptions opts = o;
  opts.initial_window = std::min(o.initial_window, 3.0);
  return integrate_real_line(g, opts);
}

QuadResult integrate_half_line(const Integrand& f, double a, const QuadOptions& o) {
  if (!std::isfinite(a)) throw DomainError("integrate_half_line: a must be finite");
  constexpr double kHalfPi = 0.5 * std::numbers::pi;
  auto g = [&](double t) {
    const double s = kHalfPi * std::sinh(t);
    if (s > 700.0) return 0.0;
    const double dx = std::exp(s);
    if (dx == 0.0) return 0.0;
    const double x = a + dx;
    if (x <= a || !std::isfinite(x)) return 0.0;
    const double w = dx * kHalfPi * std::cosh(t);
    const double y = f(x);
    if (y == 0.0) return 0.0;
    return y * w;
  };
  return integrate_real_line(g, o);
}

QuadResult integrate(const Integrand& f, double lo, double hi, const QuadOptions& o) {
  if (std::isinf(hi) && hi > 0) return integrate_half_line(f, lo, o);
  return integrate_finite(f, lo, hi, o);
}

}  // namespace wvgg
