#ifndef PROTSUB_LINALG_HPP
#define PROTSUB_LINALG_HPP

// Dense complex matrices and the handful of spectral routines the rest of the
// library is built on. Everything here is desk scale (n up to a few dozen):
// accuracy and reproducibility matter, speed does not.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "protsub/error.hpp"

namespace protsub {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

inline constexpr double kDefaultTol = 1e-10;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0}) {}

  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw Error(ErrorKind::ShapeMismatch,
                  "entry count " + std::to_string(data_.size()) + " does not match " +
                      std::to_string(rows_) + "x" + std::to_string(cols_));
    }
  }

  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) throw Error(ErrorKind::ShapeMismatch, "ragged initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return ComplexMatrix(rows, cols); }

  static ComplexMatrix diagonal(std::span<const Complex> diag) {
    ComplexMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
  }

  static ComplexMatrix diagonal(std::initializer_list<Complex> diag) {
    return diagonal(std::span<const Complex>(diag.begin(), diag.size()));
  }

  static ComplexMatrix column(std::span<const Complex> v) {
    return ComplexMatrix(v.size(), 1, std::vector<Complex>(v.begin(), v.end()));
  }

  /// Matrix whose columns are the given vectors (all of equal length).
  static ComplexMatrix from_columns(std::span<const ComplexVector> columns) {
    if (columns.empty()) return {};
    ComplexMatrix m(columns.front().size(), columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (columns[j].size() != m.rows()) throw Error(ErrorKind::ShapeMismatch, "column length");
      for (std::size_t i = 0; i < m.rows(); ++i) m(i, j) = columns[j][i];
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const Complex> data() const noexcept { return data_; }
  std::span<Complex> data() noexcept { return data_; }

  ComplexVector col(std::size_t j) const {
    ComplexVector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  void set_col(std::size_t j, std::span<const Complex> v) {
    if (v.size() != rows_) throw Error(ErrorKind::ShapeMismatch, "set_col length");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same_shape(o, "+=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }

  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same_shape(o, "-=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }

  ComplexMatrix& operator*=(Complex s) {
    for (auto& x : data_) x *= s;
    return *this;
  }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  void require_same_shape(const ComplexMatrix& o, const char* op) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
      throw Error(ErrorKind::ShapeMismatch, std::string("operands of ") + op);
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

inline ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
inline ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
inline ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
inline ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
inline ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= Complex{s, 0.0}; }
inline ComplexMatrix operator-(ComplexMatrix a) { return a *= -1.0; }

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorKind::ShapeMismatch, "product of " + std::to_string(a.rows()) + "x" +
                                              std::to_string(a.cols()) + " and " +
                                              std::to_string(b.rows()) + "x" +
                                              std::to_string(b.cols()));
  }
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const Complex ail = a(i, l);
      if (ail == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += ail * b(l, j);
    }
  }
  return c;
}

inline ComplexVector operator*(const ComplexMatrix& a, std::span<const Complex> v) {
  if (a.cols() != v.size()) throw Error(ErrorKind::ShapeMismatch, "matrix-vector product");
  ComplexVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex acc{};
    for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

inline ComplexVector operator*(const ComplexMatrix& a, const ComplexVector& v) {
  return a * std::span<const Complex>(v);
}

inline ComplexMatrix adjoint(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
  return out;
}

inline ComplexMatrix transpose(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

inline Complex trace(const ComplexMatrix& a) {
  if (!a.is_square()) throw Error(ErrorKind::ShapeMismatch, "trace of non-square matrix");
  Complex t{};
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

/// Largest entry modulus; the norm every tolerance in the library refers to.
inline double max_norm(const ComplexMatrix& a) {
  double m = 0.0;
  for (const auto& x : a.data()) m = std::max(m, std::abs(x));
  return m;
}

inline double frobenius_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (const auto& x : a.data()) s += std::norm(x);
  return std::sqrt(s);
}

inline bool is_finite(const ComplexMatrix& a) {
  return std::all_of(a.data().begin(), a.data().end(), [](const Complex& x) {
    return std::isfinite(x.real()) && std::isfinite(x.imag());
  });
}

inline Complex dot(std::span<const Complex> u, std::span<const Complex> v) {
  if (u.size() != v.size()) throw Error(ErrorKind::ShapeMismatch, "inner product");
  Complex acc{};
  for (std::size_t i = 0; i < u.size(); ++i) acc += std::conj(u[i]) * v[i];
  return acc;
}

inline double norm(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

inline ComplexMatrix outer(std::span<const Complex> u, std::span<const Complex> v) {
  ComplexMatrix m(u.size(), v.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * std::conj(v[j]);
  return m;
}

/// Matrix unit E_pq (single 1 at row p, column q).
inline ComplexMatrix matrix_unit(std::size_t rows, std::size_t cols, std::size_t p, std::size_t q) {
  ComplexMatrix m(rows, cols);
  m(p, q) = 1.0;
  return m;
}

inline ComplexMatrix select_columns(const ComplexMatrix& a, std::span<const std::size_t> idx) {
  ComplexMatrix out(a.rows(), idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) out(i, j) = a(i, idx[j]);
  return out;
}

inline ComplexMatrix hstack(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (a.rows() != b.rows()) throw Error(ErrorKind::ShapeMismatch, "hstack row count");
  ComplexMatrix out(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) out(i, a.cols() + j) = b(i, j);
  }
  return out;
}

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b - b * a;
}

/// ‖A − A†‖_max
inline double hermiticity_residual(const ComplexMatrix& a) {
  if (!a.is_square()) throw Error(ErrorKind::ShapeMismatch, "hermiticity of non-square matrix");
  return max_norm(a - adjoint(a));
}

/// ‖A†A − 1‖_max; for a square matrix this is the unitarity defect.
inline double isometry_residual(const ComplexMatrix& a) {
  return max_norm(adjoint(a) * a - ComplexMatrix::identity(a.cols()));
}

inline double normality_residual(const ComplexMatrix& a) {
  return max_norm(adjoint(a) * a - a * adjoint(a));
}

/// Kronecker product, row-major blocks: out[(i·p+k), (j·q+l)] = a[i,j]·b[k,l].
inline ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t p = b.rows();
  const std::size_t q = b.cols();
  ComplexMatrix out(a.rows() * p, a.cols() * q);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      for (std::size_t k = 0; k < p; ++k)
        for (std::size_t l = 0; l < q; ++l) out(i * p + k, j * q + l) = aij * b(k, l);
    }
  return out;
}

inline ComplexVector tensor(std::span<const Complex> u, std::span<const Complex> v) {
  ComplexVector out;
  out.reserve(u.size() * v.size());
  for (const auto& x : u)
    for (const auto& y : v) out.push_back(x * y);
  return out;
}

/// Modified Gram-Schmidt (two passes) on the columns of `a`. Columns that
/// become numerically dependent are an error: callers pass full-rank input.
inline ComplexMatrix orthonormalize_columns(const ComplexMatrix& a) {
  std::vector<ComplexVector> cols;
  cols.reserve(a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    ComplexVector v = a.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : cols) {
        const Complex proj = dot(u, v);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= proj * u[i];
      }
    }
    const double nv = norm(v);
    if (nv < 1e-12) throw Error(ErrorKind::InvalidArgument, "columns are linearly dependent");
    for (auto& x : v) x /= nv;
    cols.push_back(std::move(v));
  }
  return ComplexMatrix::from_columns(cols);
}

// ---------------------------------------------------------------------------
// Eigendecompositions

enum class EigenOrdering { AscendingReal, AscendingPhase };

struct EigenDecomposition {
  std::vector<Complex> values;
  ComplexMatrix vectors;  // column j belongs to values[j]
  EigenOrdering ordering = EigenOrdering::AscendingReal;

  std::vector<double> real_values() const {
    std::vector<double> out;
    out.reserve(values.size());
    for (const auto& v : values) out.push_back(v.real());
    return out;
  }

  /// Principal phases in [0, 2π).
  std::vector<double> phases() const;
};

/// Principal argument mapped into [0, 2π). Phases within `snap` of 2π fold to 0
/// so that eigenvalues numerically equal to 1 sort first.
inline double principal_phase(Complex z, double snap = 1e-12) {
  double phi = std::arg(z);
  if (phi < 0.0) phi += 2.0 * std::numbers::pi;
  if (2.0 * std::numbers::pi - phi <= snap) phi = 0.0;
  return phi;
}

inline std::vector<double> EigenDecomposition::phases() const {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(principal_phase(v));
  return out;
}

namespace detail {

// Make the first non-negligible component of each column real and positive.
inline void fix_column_phases(ComplexMatrix& v) {
  for (std::size_t j = 0; j < v.cols(); ++j) {
    for (std::size_t i = 0; i < v.rows(); ++i) {
      const double mag = std::abs(v(i, j));
      if (mag > 1e-10) {
        const Complex ph = std::conj(v(i, j)) / mag;
        for (std::size_t r = 0; r < v.rows(); ++r) v(r, j) *= ph;
        break;
      }
    }
  }
}

// Cyclic complex Jacobi on an exactly Hermitian copy. Returns unsorted
// eigenvalues and the accumulated rotation.
inline std::pair<std::vector<double>, ComplexMatrix> jacobi_hermitian(ComplexMatrix a,
                                                                      int max_sweeps = 100) {
  const std::size_t n = a.rows();
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double scale = frobenius_norm(a);
  bool converged = (n <= 1) || scale == 0.0;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) <= 1e-16 * scale) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double r = std::abs(apq);
        if (r == 0.0) continue;
        if (r < 1e-19 * scale) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const Complex ph = apq / r;  // e^{iφ}
        const Complex phc = std::conj(ph);
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * r);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t i = 0; i < n; ++i) {
          const Complex aip = a(i, p);
          const Complex aiq = a(i, q);
          a(i, p) = c * aip - s * phc * aiq;
          a(i, q) = s * aip + c * phc * aiq;
        }
        for (std::size_t j = 0; j < n; ++j) {
          const Complex apj = a(p, j);
          const Complex aqj = a(q, j);
          a(p, j) = c * apj - s * ph * aqj;
          a(q, j) = s * apj + c * ph * aqj;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const Complex vip = v(i, p);
          const Complex viq = v(i, q);
          v(i, p) = c * vip - s * phc * viq;
          v(i, q) = s * vip + c * phc * viq;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }
  if (!converged) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) > 1e-14 * scale) {
      throw Error(ErrorKind::NoConvergence, "Jacobi sweep budget exhausted");
    }
  }
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = a(i, i).real();
  return {std::move(values), std::move(v)};
}

inline ComplexMatrix hermitian_part(const ComplexMatrix& a) { return 0.5 * (a + adjoint(a)); }

inline ComplexMatrix skew_part_over_i(const ComplexMatrix& a) {
  return (a - adjoint(a)) * Complex{0.0, -0.5};
}

// Groups consecutive sorted values whose neighbours differ by at most `gap`.
inline std::vector<std::vector<std::size_t>> cluster_sorted(const std::vector<double>& values,
                                                            const std::vector<std::size_t>& order,
                                                            double gap) {
  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t idx = 0; idx < order.size(); ++idx) {
    if (idx == 0 || values[order[idx]] - values[order[idx - 1]] > gap) clusters.emplace_back();
    clusters.back().push_back(order[idx]);
  }
  return clusters;
}

// Diagonalize each Hermitian part in turn, restricted to the clusters left by
// the previous one. The basis `q` spans an invariant subspace of the family.
inline ComplexMatrix refine_joint_basis(const ComplexMatrix& q,
                                        const std::vector<ComplexMatrix>& parts,
                                        std::size_t depth) {
  if (q.cols() <= 1 || depth >= parts.size()) return q;
  ComplexMatrix restricted = hermitian_part(adjoint(q) * parts[depth] * q);
  auto [vals, w] = jacobi_hermitian(restricted);
  ComplexMatrix rotated = q * w;
  std::vector<std::size_t> order(vals.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return vals[x] < vals[y]; });
  const double gap = 1e-8 * (1.0 + max_norm(parts[depth]));
  ComplexMatrix out;
  for (const auto& cluster : cluster_sorted(vals, order, gap)) {
    out = hstack(out, refine_joint_basis(select_columns(rotated, cluster), parts, depth + 1));
  }
  return out;
}

}  // namespace detail

/// Eigendecomposition of a Hermitian matrix, values ascending.
/// Each eigenvector's first non-negligible component is made real positive.
inline EigenDecomposition eig_hermitian(const ComplexMatrix& t, double tol = kDefaultTol) {
  if (!t.is_square()) throw Error(ErrorKind::ShapeMismatch, "eig_hermitian needs a square matrix");
  const double asym = hermiticity_residual(t);
  if (asym > tol) {
    throw Error(ErrorKind::NotHermitian, "symmetry residual " + std::to_string(asym));
  }
  auto [vals, vecs] = detail::jacobi_hermitian(detail::hermitian_part(t));
  std::vector<std::size_t> order(vals.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
  EigenDecomposition out;
  out.ordering = EigenOrdering::AscendingReal;
  out.vectors = select_columns(vecs, order);
  detail::fix_column_phases(out.vectors);
  for (auto i : order) out.values.emplace_back(vals[i], 0.0);
  return out;
}

/// Orthonormal basis diagonalizing every member of a commuting family of
/// normal matrices. Commutation is checked by the callers that care.
inline ComplexMatrix joint_eigenbasis(std::span<const ComplexMatrix> family) {
  if (family.empty()) throw Error(ErrorKind::InvalidArgument, "empty family");
  const std::size_t n = family.front().rows();
  std::vector<ComplexMatrix> parts;
  for (const auto& t : family) {
    if (!t.is_square() || t.rows() != n) throw Error(ErrorKind::ShapeMismatch, "family shapes");
    parts.push_back(detail::hermitian_part(t));
    parts.push_back(detail::skew_part_over_i(t));
  }
  // A generic real combination separates joint eigenspaces; the recursive
  // refinement repairs accidental collisions of the combined values.
  ComplexMatrix combined(n, n);
  for (std::size_t j = 0; j < parts.size(); ++j) {
    const double w = 0.3 + std::fmod(0.7548776662466927 * static_cast<double>(j + 1), 1.0);
    combined += (w / (1.0 + max_norm(parts[j]))) * parts[j];
  }
  parts.insert(parts.begin(), combined);
  return detail::refine_joint_basis(ComplexMatrix::identity(n), parts, 0);
}

/// Eigendecomposition of a unitary matrix, eigenvalues sorted by principal
/// phase in [0, 2π).
inline EigenDecomposition eig_unitary(const ComplexMatrix& u, double tol = kDefaultTol) {
  if (!u.is_square()) throw Error(ErrorKind::ShapeMismatch, "eig_unitary needs a square matrix");
  const double defect = isometry_residual(u);
  if (defect > tol) throw Error(ErrorKind::NotUnitary, "unitarity residual " + std::to_string(defect));
  const ComplexMatrix single[] = {u};
  ComplexMatrix basis = joint_eigenbasis(single);
  const std::size_t n = u.rows();
  std::vector<Complex> vals(n);
  for (std::size_t j = 0; j < n; ++j) {
    const ComplexVector v = basis.col(j);
    vals[j] = dot(v, u * v);
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return principal_phase(vals[a], tol) < principal_phase(vals[b], tol);
  });
  EigenDecomposition out;
  out.ordering = EigenOrdering::AscendingPhase;
  out.vectors = select_columns(basis, order);
  detail::fix_column_phases(out.vectors);
  for (auto i : order) out.values.push_back(vals[i]);
  const ComplexMatrix resid =
      u * out.vectors - out.vectors * ComplexMatrix::diagonal(out.values);
  if (max_norm(resid) > 10.0 * tol * std::max(1.0, max_norm(u))) {
    throw Error(ErrorKind::NoConvergence, "unitary eigen-residual " + std::to_string(max_norm(resid)));
  }
  return out;
}

/// Singular values, descending. One-sided Jacobi on the columns, so small
/// values keep absolute accuracy ~eps·‖A‖ (a Gram matrix would square it).
inline std::vector<double> singular_values(const ComplexMatrix& a) {
  ComplexMatrix w = a.rows() >= a.cols() ? a : adjoint(a);
  const std::size_t m = w.rows(), n = w.cols();
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double app = 0.0, aqq = 0.0;
        Complex apq{};
        for (std::size_t i = 0; i < m; ++i) {
          app += std::norm(w(i, p));
          aqq += std::norm(w(i, q));
          apq += std::conj(w(i, p)) * w(i, q);
        }
        const double g = std::abs(apq);
        if (g == 0.0 || g <= 1e-15 * std::sqrt(app * aqq)) continue;
        rotated = true;
        const Complex ph = apq / g;
        const double zeta = (aqq - app) / (2.0 * g);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t), s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const Complex xp = w(i, p), xq = w(i, q) * std::conj(ph);
          w(i, p) = c * xp - s * xq;
          w(i, q) = (s * xp + c * xq) * ph;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<double> out;
  for (std::size_t j = 0; j < n; ++j) out.push_back(norm(w.col(j)));
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

inline std::size_t numerical_rank(const ComplexMatrix& a, double tol = 1e-8) {
  const auto sv = singular_values(a);
  return static_cast<std::size_t>(
      std::count_if(sv.begin(), sv.end(), [&](double s) { return s > tol; }));
}

/// Reconstructs V·diag(values)·V†.
inline ComplexMatrix reconstruct(const EigenDecomposition& e) {
  return e.vectors * ComplexMatrix::diagonal(e.values) * adjoint(e.vectors);
}

}  // namespace protsub

#endif  // PROTSUB_LINALG_HPP
