#pragma once

#include <cstddef>
#include <functional>
#include <string>

namespace wvgg {

enum class QuadStatus { Finite, Divergent, Unresolved };

const char* to_string(QuadStatus s);

struct QuadResult {
  double value = 0.0;
  double abs_err = 0.0;
  QuadStatus status = QuadStatus::Unresolved;
  int rounds = 0;
  std::size_t evaluations = 0;

  bool finite() const { return status == QuadStatus::Finite; }
};

// Worst status wins: Divergent > Unresolved > Finite. Values and errors add.
QuadResult combine(const QuadResult& a, const QuadResult& b);

struct QuadOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-300;
  int max_rounds = 8;
  // Step of the trapezoid in the transformed variable at round 0.
  double initial_step = 0.5;
  // Half-width of the transformed window at round 0, its growth per round and cap.
  double initial_window = 4.0;
  double window_growth = 0.5;
  double max_window = 6.0;
  // A partial sum that grows by more than divergence_growth (relative) for
  // divergence_rounds consecutive rounds, or exceeds divergence_cap, is Divergent.
  double divergence_growth = 0.05;
  int divergence_rounds = 3;
  double divergence_cap = 1e12;
};

using Integrand = std::function<double(double)>;

// ∫_a^b f by tanh-sinh; f is evaluated at points strictly inside (a, b) with
// the distance to the nearer endpoint computed without cancellation.
QuadResult integrate_finite(const Integrand& f, double a, double b, const QuadOptions& o = {});

// ∫_a^∞ f by exp-sinh, x = a + exp((π/2)·sinh t).
QuadResult integrate_half_line(const Integrand& f, double a, const QuadOptions& o = {});

// Dispatches on whether hi is finite.
QuadResult integrate(const Integrand& f, double lo, double hi, const QuadOptions& o = {});

// Trapezoid on ℝ of a transformed integrand g(t) with nested halving and
// window growth; the building block of the two rules above.
QuadResult integrate_real_line(const Integrand& g, const QuadOptions& o = {});

}  // namespace wvgg
