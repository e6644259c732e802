#include <cmath>
#include <random>
#include <sstream>

#include "wvgg/cli.hpp"
#include "wvgg/matrix_core.hpp"
#include "wvgg/special_fn.hpp"

namespace wvgg::cli {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

// AAᵀ + n·0.05·I keeps the condition number moderate.
CovMatrix random_spd(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = g(rng);
  Matrix s = a * a.transpose() + 0.05 * n * Matrix::Identity(n, n);
  s = 0.5 * (s + s.transpose()).eval();
  return CovMatrix(s);
}

// Coordinates in [0,1] with a fifth of them pinned to 0 or 1 to reach the faces.
Vector random_box(int m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector v(m);
  for (int k = 0; k < m; ++k) {
    const double pick = unit(rng);
    v[k] = pick < 0.1 ? 0.0 : pick < 0.2 ? 1.0 : unit(rng);
  }
  return v;
}

Vector random_positive(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> expo(-3.0, 3.0);
  Vector u(n);
  for (int k = 0; k < n; ++k) u[k] = std::exp(expo(rng));
  return u;
}

}  // namespace

std::vector<LemmaCheck> lemma_suites(std::uint64_t seed, int draws) {
  std::vector<LemmaCheck> out;
  for (int n = 1; n <= 6; ++n) {
    const XiExtrema x = xi_extrema(n);
    const bool pass = x.inf == n + 2 && x.sup == (std::int64_t{1} << (n + 1));
    out.push_back({"xi_extrema n=" + std::to_string(n), pass,
                   "inf=" + std::to_string(x.inf) + " sup=" + std::to_string(x.sup)});
  }

  std::mt19937_64 rng(seed);
  double worst_upsilon = INFINITY;
  double worst_theta = INFINITY;
  double worst_delta = INFINITY;
  bool oppenheim = true;
  for (int i = 0; i < draws; ++i) {
    const int n = 2 + i % 5;
    const Vector v = random_box(n - 1, rng);
    worst_upsilon = std::min(worst_upsilon, min_eigenvalue(upsilon_matrix(v)));

    const CovMatrix sigma = random_spd(n, rng);
    const Vector u = random_positive(n, rng);
    const Matrix ts = theta_matrix(u).cwiseProduct(sigma.matrix());
    worst_theta = std::min(worst_theta, min_eigenvalue(ts) / sigma.matrix().trace());
    oppenheim = oppenheim && oppenheim_ratio(sigma, u).holds;

    const Matrix ds = delta_matrix(random_box(n - 1, rng)).cwiseProduct(sigma.matrix());
    worst_delta = std::min(worst_delta, std::abs(determinant(ds)) / sigma.det());
  }
  out.push_back({"upsilon_nonneg_definite", worst_upsilon >= -1e-9, "min_eig=" + fmt(worst_upsilon)});
  out.push_back({"theta_hadamard_positive", worst_theta > 0.0, "min_eig/trace=" + fmt(worst_theta)});
  out.push_back({"delta_hadamard_invertible", worst_delta > 1e-12, "min |det|/|Sigma|=" + fmt(worst_delta)});
  out.push_back({"oppenheim_bounds", oppenheim, ""});

  double worst_half = 0.0;
  double worst_deriv = 0.0;
  bool gaunt = true;
  bool ratio = true;
  for (int i = 0; i < 50; ++i) {
    const double r = std::exp(std::log(1e-3) + (std::log(30.0) - std::log(1e-3)) * i / 49.0);
    const double closed = std::sqrt(0.5 * M_PI) * std::exp(-r);
    worst_half = std::max(worst_half, std::abs(kappa_bessel(0.5, r) - closed) / closed);
    worst_deriv = std::max({worst_deriv, bessel_derivative_check(1.0, r), bessel_derivative_check(1.5, r)});
    gaunt = gaunt && bessel_tail(1.0, r) <= gaunt_tail_bound(1.0, r);
    // K₀/K₁ > t/(1 + (1 + t²)^{1/2}); 𝔎₀/𝔎₁ = K₀/(tK₁).
    ratio = ratio && kappa_bessel(0.0, r) / kappa_bessel(1.0, r) * r > r / (1.0 + std::sqrt(1.0 + r * r));
  }
  out.push_back({"kappa_half_closed_form", worst_half <= 1e-10, "max_rel=" + fmt(worst_half)});
  out.push_back({"kappa_derivative_identity", worst_deriv <= 1e-6, "max_resid=" + fmt(worst_deriv)});
  out.push_back({"gaunt_tail_bound", gaunt, ""});
  out.push_back({"k0_k1_ratio_bound", ratio, ""});
  return out;
}

}  // namespace wvgg::cli
