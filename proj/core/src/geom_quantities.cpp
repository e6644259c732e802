#include "wvgg/geom_quantities.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "wvgg/errors.hpp"

namespace wvgg {

namespace {

constexpr double kSphereClip = 1e-8;
constexpr int kMaxScanDim = 6;

void require_dim(const Vector& x, int n, const char* what) {
  if (x.size() != n) throw DomainError(std::string(what) + ": dimension mismatch");
}

long factorial(int n) {
  long f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// Minimises f over the box [lo, hi]^m by compass search starting from x.
double pattern_search(const std::function<double(const Vector&)>& f, Vector& x, double lo,
                      double hi, double step, double step_min, long& evals) {
  double best = f(x);
  ++evals;
  int guard = 0;
  while (step > step_min && guard++ < 20000) {
    bool improved = false;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      for (double dir : {-1.0, 1.0}) {
        Vector y = x;
        y[k] = std::clamp(x[k] + dir * step, lo, hi);
        if (y[k] == x[k]) continue;
        const double v = f(y);
        ++evals;
        if (v < best) {
          best = v;
          x = std::move(y);
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

// Magnitude used for the rounding floor of 𝔈 estimates.
double e_scale(const QuantityContext& ctx, const Vector& x) {
  return std::sqrt(ctx.sigma().inverse_norm2(ctx.mu())) *
             std::sqrt(ctx.sigma().inverse_norm2(x)) +
         std::numeric_limits<double>::min();
}

struct OrderedBest {
  double value = std::numeric_limits<double>::infinity();
  double grid_value = std::numeric_limits<double>::infinity();
  std::vector<int> perm;
  Vector v;
  long evaluations = 0;
};

// Minimises sign·𝔈 over permutations × [0,1]^{n−1}.
OrderedBest scan_ordered(const QuantityContext& ctx, const Vector& x, double sign,
                         const ScanOptions& opts) {
  const int n = ctx.dim();
  const int m = n - 1;
  const int g = scan_grid_points(n, opts);
  OrderedBest out;

  struct Candidate {
    double value;
    std::vector<int> perm;
    Vector v;
  };
  std::vector<Candidate> per_perm;

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  long grid_size = 1;
  for (int k = 0; k < m; ++k) grid_size *= g;
  do {
    Candidate best{std::numeric_limits<double>::infinity(), perm, Vector::Zero(m)};
    Vector v(m);
    for (long idx = 0; idx < grid_size; ++idx) {
      long rest = idx;
      for (int k = 0; k < m; ++k) {
        v[k] = static_cast<double>(rest % g) / (g - 1);
        rest /= g;
      }
      const double val = sign * boundary_e(ctx, x, perm, v);
      ++out.evaluations;
      if (val < best.value) {
        best.value = val;
        best.v = v;
      }
    }
    per_perm.push_back(std::move(best));
  } while (std::next_permutation(perm.begin(), perm.end()));

  // Stable order keeps the lexicographically first permutation on ties.
  std::stable_sort(per_perm.begin(), per_perm.end(),
                   [](const Candidate& a, const Candidate& b) { return a.value < b.value; });
  out.grid_value = per_perm.front().value;
  out.value = per_perm.front().value;
  out.perm = per_perm.front().perm;
  out.v = per_perm.front().v;
  if (m == 0) return out;

  const int starts = std::min<int>(opts.refine_starts, static_cast<int>(per_perm.size()));
  for (int s = 0; s < starts; ++s) {
    Candidate c = per_perm[s];
    auto f = [&](const Vector& v) { return sign * boundary_e(ctx, x, c.perm, v); };
    const double val =
        pattern_search(f, c.v, 0.0, 1.0, 1.0 / (g - 1), opts.refine_step_min, out.evaluations);
    if (val < out.value) {
      out.value = val;
      out.perm = c.perm;
      out.v = c.v;
    }
  }
  return out;
}

Vector sphere_point(const Vector& p) { return p / p.norm(); }

double sphere_objective(const QuantityContext& ctx, Extremal which, const Vector& arg,
                        const Vector& u) {
  switch (which) {
    case Extremal::InfNormY:
      return std::sqrt(weighted_inner(arg, arg, u, ctx.sigma().matrix()));
    case Extremal::InfD:
      return d_quantity(ctx, arg, u);
    case Extremal::SupNormUMu:
      return -diamond(u, ctx.mu()).norm();
    case Extremal::SupAbsE:
      break;
  }
  throw DomainError("sphere_objective: unsupported extremal");
}

}  // namespace

QuantityContext::QuantityContext(Vector mu, CovMatrix sigma)
    : mu_(std::move(mu)), sigma_(std::move(sigma)) {
  if (mu_.size() != sigma_.dim()) throw DomainError("QuantityContext: dimension mismatch");
  if (!all_finite(mu_)) throw DomainError("QuantityContext: non-finite drift");
  if (!sigma_.invertible()) throw DomainError("QuantityContext: sigma must be invertible");
}

double weighted_inner(const Vector& x, const Vector& y, const Vector& u, const Matrix& sigma) {
  const Matrix m = diamond(u, sigma);
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) throw NumericError("weighted_inner: u⋄Σ is singular");
  return y.dot(llt.solve(x));
}

Ade ade_quantities(const QuantityContext& ctx, const Vector& x, const Vector& u) {
  const int n = ctx.dim();
  require_dim(x, n, "ade_quantities");
  require_dim(u, n, "ade_quantities");
  if (!is_positive(u)) throw DomainError("ade_quantities: u must lie in (0,inf)^n");
  const Matrix m = diamond(u, ctx.sigma().matrix());
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) throw NumericError("ade_quantities: u⋄Σ is singular");
  const Vector umu = u.cwiseProduct(ctx.mu());
  const Vector mx = llt.solve(x);
  const double x2 = x.dot(mx);
  const double umu2 = umu.dot(llt.solve(umu));
  double log_det = 0.0;
  for (int k = 0; k < n; ++k) log_det += 2.0 * std::log(llt.matrixL()(k, k));
  Ade r;
  r.e = umu.dot(mx);
  r.a = std::sqrt((2.0 * u.squaredNorm() + umu2) * x2);
  r.d = std::exp(0.5 * n * std::log(x2) + 0.5 * log_det);
  return r;
}

double e_quantity(const QuantityContext& ctx, const Vector& x, const Vector& u) {
  return ade_quantities(ctx, x, u).e;
}

double a_quantity(const QuantityContext& ctx, const Vector& x, const Vector& u) {
  return ade_quantities(ctx, x, u).a;
}

double d_quantity(const QuantityContext& ctx, const Vector& y, const Vector& u) {
  if (!is_nonzero(y)) throw DomainError("d_quantity: y must be nonzero");
  return ade_quantities(ctx, y, u).d;
}

double boundary_e(const QuantityContext& ctx, const Vector& x, const std::vector<int>& perm,
                  const Vector& v) {
  const int n = ctx.dim();
  require_dim(x, n, "boundary_e");
  if (static_cast<int>(perm.size()) != n || v.size() != n - 1) {
    throw DomainError("boundary_e: dimension mismatch");
  }
  Vector xt(n), mt(n);
  Matrix st(n, n);
  for (int k = 0; k < n; ++k) {
    xt[k] = x[perm[k]];
    mt[k] = ctx.mu()[perm[k]];
    for (int l = 0; l < n; ++l) st(k, l) = ctx.sigma()(perm[k], perm[l]);
  }
  const Matrix a = delta_matrix(v).cwiseProduct(st);
  return mt.dot(Eigen::PartialPivLU<Matrix>(a).solve(xt));
}

Vector u_from_ordered_ratios(const std::vector<int>& perm, const Vector& v) {
  const Vector ordered = ordered_from_ratios(v);
  Vector u(ordered.size());
  for (Eigen::Index k = 0; k < ordered.size(); ++k) u[perm[k]] = ordered[k];
  return u;
}

int scan_grid_points(int n, const ScanOptions& opts) {
  if (n <= 1) return opts.grid_points;
  const double per_perm = opts.max_evaluations / static_cast<double>(factorial(n));
  const int cap = static_cast<int>(std::floor(std::pow(per_perm, 1.0 / (n - 1)) + 1e-9));
  return std::max(3, std::min(opts.grid_points, cap));
}

InfimumEstimate usp_infimum(const QuantityContext& ctx, const Vector& x, const ScanOptions& opts) {
  const int n = ctx.dim();
  require_dim(x, n, "usp_infimum");
  if (n > kMaxScanDim) throw DomainError("usp_infimum: dimension above 6 is not supported");
  const OrderedBest b = scan_ordered(ctx, x, 1.0, opts);
  InfimumEstimate r;
  r.value = b.value;
  r.grid_value = b.grid_value;
  r.argmin_v = b.v;
  r.permutation = b.perm;
  r.evaluations = b.evaluations;
  r.boundary = (b.v.array() < 1e-6).any();
  const double floor = 1e-9 * e_scale(ctx, x);
  r.uncertainty = std::max(b.grid_value - b.value, floor);
  r.certified_positive = r.value > 10.0 * r.uncertainty;
  return r;
}

const char* to_string(Membership m) {
  switch (m) {
    case Membership::Member: return "true";
    case Membership::NotMember: return "false";
    case Membership::Unknown: return "unknown";
  }
  return "unknown";
}

MembershipResult v_plus_member(const QuantityContext& ctx, const Vector& x, const ScanOptions& opts) {
  MembershipResult r;
  if (!is_nonzero(x) || !is_nonzero(ctx.mu())) {
    r.member = Membership::NotMember;
    r.evidence.permutation.resize(ctx.dim());
    std::iota(r.evidence.permutation.begin(), r.evidence.permutation.end(), 0);
    r.evidence.argmin_v = Vector::Ones(ctx.dim() - 1);
    return r;
  }
  if (ctx.dim() > kMaxScanDim) return r;
  r.evidence = usp_infimum(ctx, x, opts);
  if (r.evidence.certified_positive) {
    r.member = Membership::Member;
  } else if (r.evidence.value < -r.evidence.uncertainty) {
    r.member = Membership::NotMember;
  }
  return r;
}

const char* to_string(Extremal e) {
  switch (e) {
    case Extremal::InfNormY: return "inf_norm_y";
    case Extremal::InfD: return "inf_D";
    case Extremal::SupNormUMu: return "sup_norm_umu";
    case Extremal::SupAbsE: return "sup_abs_E";
  }
  return "?";
}

ExtremalResult extremal_scan(const QuantityContext& ctx, Extremal which, const Vector& arg,
                             const ScanOptions& opts) {
  const int n = ctx.dim();
  require_dim(arg, n, "extremal_scan");
  if (which == Extremal::InfNormY && !is_nonzero(arg)) {
    throw DomainError("extremal_scan: y must be nonzero");
  }
  if (which == Extremal::InfD && !all_coordinates_nonzero(arg)) {
    throw DomainError("extremal_scan: z must have all coordinates nonzero");
  }
  ExtremalResult r;
  if (which == Extremal::SupAbsE) {
    if (n > kMaxScanDim) throw DomainError("extremal_scan: dimension above 6 is not supported");
    const OrderedBest lo = scan_ordered(ctx, arg, 1.0, opts);
    const OrderedBest hi = scan_ordered(ctx, arg, -1.0, opts);
    r.estimate = std::max(std::abs(lo.value), std::abs(hi.value));
    const OrderedBest& b = std::abs(lo.value) >= std::abs(hi.value) ? lo : hi;
    Vector v = b.v.cwiseMax(kSphereClip);
    r.arg_u = sphere_point(u_from_ordered_ratios(b.perm, v));
    r.finite_or_positive = std::isfinite(r.estimate);
    return r;
  }

  // Grid over p ∈ [ε,1]ⁿ, u = p/‖p‖, then compass search from the best node.
  const int g = std::max(3, std::min(opts.grid_points,
                                     static_cast<int>(std::floor(std::pow(2e5, 1.0 / n)))));
  long total = 1;
  for (int k = 0; k < n; ++k) total *= g;
  auto objective = [&](const Vector& p) {
    return sphere_objective(ctx, which, arg, sphere_point(p));
  };
  double best = std::numeric_limits<double>::infinity();
  Vector best_p = Vector::Ones(n);
  Vector p(n);
  for (long idx = 0; idx < total; ++idx) {
    long rest = idx;
    for (int k = 0; k < n; ++k) {
      p[k] = std::max(kSphereClip, static_cast<double>(rest % g) / (g - 1));
      rest /= g;
    }
    const double val = objective(p);
    if (val < best) {
      best = val;
      best_p = p;
    }
  }
  long evals = 0;
  best = std::min(best, pattern_search(objective, best_p, kSphereClip, 1.0, 1.0 / (g - 1),
                                       opts.refine_step_min, evals));
  r.arg_u = sphere_point(best_p);
  if (which == Extremal::SupNormUMu) {
    r.estimate = -best;
    r.finite_or_positive = std::isfinite(r.estimate);
  } else {
    r.estimate = best;
    r.finite_or_positive = std::isfinite(best) && best > 0.0;
  }
  return r;
}

}  // namespace wvgg
