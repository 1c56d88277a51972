#ifndef PROTSUB_ISOMETRY_HPP
#define PROTSUB_ISOMETRY_HPP

#include <utility>

#include "protsub/linalg.hpp"

namespace protsub {

/// C : L → H with C†C = 1_k. Compression Γ(X) = C†XC is the "coding" map,
/// Γ*(ρ) = CρC† embeds states of L into the code subspace.
class Isometry {
 public:
  explicit Isometry(ComplexMatrix c, double tol = kDefaultTol) : c_(std::move(c)) {
    if (c_.cols() == 0 || c_.rows() < c_.cols()) {
      throw Error(ErrorKind::ShapeMismatch, "isometry must be n x k with 1 <= k <= n");
    }
    if (!is_finite(c_)) throw Error(ErrorKind::NotFinite, "isometry has NaN/Inf entries");
    const double defect = isometry_residual(c_);
    if (defect > tol) throw Error(ErrorKind::NotIsometry, "C†C defect " + std::to_string(defect));
  }

  static Isometry from_columns(std::span<const ComplexVector> cols, double tol = kDefaultTol) {
    return Isometry(ComplexMatrix::from_columns(cols), tol);
  }

  const ComplexMatrix& matrix() const noexcept { return c_; }
  std::size_t n() const noexcept { return c_.rows(); }
  std::size_t k() const noexcept { return c_.cols(); }

  ComplexMatrix compress(const ComplexMatrix& x) const { return adjoint(c_) * x * c_; }
  ComplexMatrix embed(const ComplexMatrix& rho) const { return c_ * rho * adjoint(c_); }
  ComplexVector embed(std::span<const Complex> v) const { return c_ * v; }

  /// Orthogonal projector CC† onto the code subspace.
  ComplexMatrix projector() const { return c_ * adjoint(c_); }

 private:
  ComplexMatrix c_;
};

}  // namespace protsub

#endif  // PROTSUB_ISOMETRY_HPP
