#include "wvgg/matrix_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wvgg/errors.hpp"

namespace wvgg {

namespace {

void require_same_dim(const Vector& x, Eigen::Index n, const char* what) {
  if (x.size() != n) {
    throw DomainError(std::string(what) + ": dimension mismatch (" +
                      std::to_string(x.size()) + " vs " + std::to_string(n) + ")");
  }
}

void require_unit_box(const Vector& v, const char* what) {
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (!(v[k] >= 0.0 && v[k] <= 1.0)) {
      throw DomainError(std::string(what) + ": v must lie in [0,1]^(n-1)");
    }
  }
}

// ∏_{k≤m<l} v_m, zero-based with k < l.
double run_product(const Vector& v, int k, int l) {
  double p = 1.0;
  for (int m = k; m < l; ++m) p *= v[m];
  return p;
}

}  // namespace

CovMatrix::CovMatrix(Matrix entries, double det_tol) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) {
    throw DomainError("CovMatrix: matrix must be square and nonempty");
  }
  if (m_.rows() > 16) throw DomainError("CovMatrix: dimension above 16");
  if (!m_.allFinite()) throw DomainError("CovMatrix: non-finite entry");
  const int n = dim();
  for (int k = 0; k < n; ++k) {
    for (int l = k + 1; l < n; ++l) {
      if (m_(k, l) != m_(l, k)) throw DomainError("CovMatrix: matrix is not symmetric");
    }
  }
  const double scale = std::max(1.0, m_.trace());
  if (min_eigenvalue(m_) < -kEigenTol * scale) {
    throw DomainError("CovMatrix: matrix is not nonnegative definite");
  }
  det_ = determinant(m_);
  double hadamard = 1.0;
  for (int k = 0; k < n; ++k) hadamard *= m_(k, k);
  invertible_ = hadamard > 0.0 && det_ > det_tol * hadamard;
  if (invertible_) {
    llt_.compute(m_);
    if (llt_.info() != Eigen::Success) invertible_ = false;
  }
}

CovMatrix CovMatrix::identity(int n) { return CovMatrix(Matrix::Identity(n, n)); }

CovMatrix CovMatrix::diagonal(const Vector& d) { return CovMatrix(Matrix(d.asDiagonal())); }

bool CovMatrix::is_diagonal(double tol) const {
  const int n = dim();
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      if (k != l && std::abs(m_(k, l)) > tol) return false;
    }
  }
  return true;
}

Vector CovMatrix::solve(const Vector& x) const {
  if (!invertible_) throw DomainError("CovMatrix: matrix is singular");
  require_same_dim(x, m_.rows(), "CovMatrix::solve");
  return llt_.solve(x);
}

double CovMatrix::inverse_norm2(const Vector& x) const { return x.dot(solve(x)); }

double CovMatrix::inverse_inner(const Vector& x, const Vector& y) const {
  require_same_dim(y, m_.rows(), "CovMatrix::inverse_inner");
  return y.dot(solve(x));
}

bool all_finite(const Vector& x) { return x.allFinite(); }

bool is_nonnegative(const Vector& x) {
  return x.allFinite() && (x.array() >= 0.0).all();
}

bool is_positive(const Vector& x) {
  return x.allFinite() && (x.array() > 0.0).all();
}

bool is_nonzero(const Vector& x) {
  return x.allFinite() && (x.array() != 0.0).any();
}

bool all_coordinates_nonzero(const Vector& x) {
  return x.allFinite() && (x.array() != 0.0).all();
}

Vector diamond(const Vector& x, const Vector& mu) {
  require_same_dim(mu, x.size(), "diamond");
  return x.cwiseProduct(mu);
}

Matrix min_matrix(const Vector& x) {
  const Eigen::Index n = x.size();
  Matrix m(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index l = 0; l < n; ++l) m(k, l) = std::min(x[k], x[l]);
  }
  return m;
}

Matrix diamond(const Vector& x, const Matrix& sigma) {
  if (sigma.rows() != sigma.cols()) throw DomainError("diamond: matrix must be square");
  require_same_dim(x, sigma.rows(), "diamond");
  return min_matrix(x).cwiseProduct(sigma);
}

CovMatrix diamond(const Vector& x, const CovMatrix& sigma) {
  if (!is_nonnegative(x)) {
    throw DomainError("diamond: x must be nonnegative for a covariance result");
  }
  return CovMatrix(diamond(x, sigma.matrix()));
}

double determinant(const Matrix& a) {
  if (a.rows() != a.cols()) throw DomainError("determinant: matrix must be square");
  if (a.rows() > 16) throw DomainError("determinant: dimension above 16");
  if (a.rows() == 0) return 1.0;
  return Eigen::PartialPivLU<Matrix>(a).determinant();
}

double min_eigenvalue(const Matrix& symmetric) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetric, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool is_nonneg_definite(const Matrix& symmetric, double rel_tol) {
  const double scale = std::max(1.0, std::abs(symmetric.trace()));
  return min_eigenvalue(symmetric) >= -rel_tol * scale;
}

OppenheimBounds oppenheim_ratio(const CovMatrix& sigma, const Vector& u) {
  require_same_dim(u, sigma.dim(), "oppenheim_ratio");
  if (!is_positive(u)) throw DomainError("oppenheim_ratio: u must be positive");
  if (!sigma.invertible()) throw DomainError("oppenheim_ratio: sigma must be invertible");
  OppenheimBounds b;
  b.ratio = determinant(diamond(u, sigma.matrix())) / u.prod();
  b.lower = sigma.det();
  b.upper = sigma.matrix().diagonal().prod();
  const double slack = 1e-10 * b.upper;
  b.holds = b.ratio >= b.lower - slack && b.ratio <= b.upper + slack;
  return b;
}

Matrix xi_matrix(const Vector& x) {
  const Eigen::Index n = x.size();
  if (n < 1) throw DomainError("xi_matrix: n must be at least 1");
  Matrix m(n + 1, n + 1);
  for (Eigen::Index k = 0; k <= n; ++k) {
    const double off = k < n ? x[k] : 1.0;
    for (Eigen::Index l = 0; l <= n; ++l) m(k, l) = k == l ? 2.0 : off;
  }
  return m;
}

double xi_det(const Vector& x) { return determinant(xi_matrix(x)); }

std::int64_t exact_determinant(std::vector<std::vector<std::int64_t>> a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  for (const auto& row : a) {
    if (row.size() != n) throw DomainError("exact_determinant: matrix must be square");
  }
  std::int64_t sign = 1;
  std::int64_t prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        // Division is exact by Sylvester's identity.
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      }
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

std::int64_t xi_det_binary(const std::vector<int>& x) {
  const std::size_t n = x.size();
  if (n < 1) throw DomainError("xi_det_binary: n must be at least 1");
  std::vector<std::vector<std::int64_t>> a(n + 1, std::vector<std::int64_t>(n + 1));
  for (std::size_t k = 0; k <= n; ++k) {
    const std::int64_t off = k < n ? x[k] : 1;
    if (k < n && x[k] != 0 && x[k] != 1) throw DomainError("xi_det_binary: entries must be 0 or 1");
    for (std::size_t l = 0; l <= n; ++l) a[k][l] = k == l ? 2 : off;
  }
  return exact_determinant(std::move(a));
}

std::vector<std::vector<int>> xi_corner_set(int n) {
  if (n < 1 || n > 8) throw DomainError("xi_corner_set: n must lie in [1, 8]");
  std::vector<std::vector<int>> corners;
  corners.emplace_back(n, 0);
  corners.emplace_back(n, 1);
  for (int zeros = 1; zeros < n; ++zeros) {
    std::vector<int> c(n, 1);
    std::fill(c.begin(), c.begin() + zeros, 0);
    corners.push_back(std::move(c));
  }
  return corners;
}

XiExtrema xi_extrema(int n) {
  XiExtrema r;
  r.inf = std::numeric_limits<std::int64_t>::max();
  r.sup = std::numeric_limits<std::int64_t>::min();
  for (const auto& c : xi_corner_set(n)) {
    const std::int64_t h = xi_det_binary(c);
    if (h < r.inf) {
      r.inf = h;
      r.argmin = c;
    }
    if (h > r.sup) {
      r.sup = h;
      r.argmax = c;
    }
  }
  return r;
}

Matrix upsilon_matrix(const Vector& v) {
  require_unit_box(v, "upsilon_matrix");
  const int n = static_cast<int>(v.size()) + 1;
  Matrix m(n, n);
  for (int k = 0; k < n; ++k) {
    m(k, k) = 2.0;
    for (int l = k + 1; l < n; ++l) m(k, l) = m(l, k) = 1.0 + run_product(v, k, l);
  }
  return m;
}

Matrix theta_matrix(const Vector& u) {
  if (!is_positive(u)) throw DomainError("theta_matrix: u must be positive");
  const Eigen::Index n = u.size();
  Matrix m(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index l = 0; l < n; ++l) {
      const double x = u[k] / u[l];
      m(k, l) = std::min(1.0, x) + std::min(1.0, 1.0 / x);
    }
  }
  return m;
}

Matrix delta_matrix(const Vector& v) {
  require_unit_box(v, "delta_matrix");
  const int n = static_cast<int>(v.size()) + 1;
  Matrix m = Matrix::Ones(n, n);
  for (int k = 0; k < n; ++k) {
    for (int l = k + 1; l < n; ++l) m(k, l) = run_product(v, k, l);
  }
  return m;
}

Matrix sigma_sym(const Vector& u, const CovMatrix& sigma) {
  require_same_dim(u, sigma.dim(), "sigma_sym");
  if (!is_positive(u)) throw DomainError("sigma_sym: u must be positive");
  const Matrix a = diamond(u, sigma.matrix()) * u.cwiseInverse().asDiagonal();
  return 0.5 * (a + a.transpose());
}

Vector ratios_from_ordered(const Vector& u) {
  if (!is_positive(u)) throw DomainError("ratios_from_ordered: u must be positive");
  Vector v(u.size() - 1);
  for (Eigen::Index k = 0; k + 1 < u.size(); ++k) {
    if (u[k] > u[k + 1]) throw DomainError("ratios_from_ordered: u must be nondecreasing");
    v[k] = u[k] / u[k + 1];
  }
  return v;
}

Vector ordered_from_ratios(const Vector& v) {
  const Eigen::Index n = v.size() + 1;
  Vector u(n);
  u[n - 1] = 1.0;
  for (Eigen::Index k = n - 2; k >= 0; --k) u[k] = v[k] * u[k + 1];
  return u;
}

}  // namespace wvgg
