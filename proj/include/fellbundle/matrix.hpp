#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace fell {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kDefaultTol = 1e-9;

Matrix kron(const Matrix& a, const Matrix& b);
Matrix matrix_unit(std::size_t n, std::size_t row, std::size_t col);
Matrix identity(std::size_t n);

/// Hilbert-Schmidt inner product trace(a* b); conjugate-linear in `a`.
Complex hs_inner(const Matrix& a, const Matrix& b);
double hs_norm(const Matrix& a);

/// Largest singular value, taken from the Hermitian eigendecomposition of a*a.
double op_norm(const Matrix& m);

/// Smallest eigenvalue of the Hermitian part of a square matrix.
double min_hermitian_eigenvalue(const Matrix& m);

/// True iff m is Hermitian within tol and its spectrum is >= -tol * op_norm(m).
bool is_psd(const Matrix& m, double tol = kDefaultTol);

bool all_finite(const Matrix& m);

/// An orthonormal (Hilbert-Schmidt) basis of a linear subspace of M_n.
class MatrixSubspace {
 public:
  MatrixSubspace() = default;
  explicit MatrixSubspace(std::size_t ambient_dim);

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return basis_.size(); }
  bool empty() const { return basis_.empty(); }
  const std::vector<Matrix>& basis() const { return basis_; }
  const Matrix& operator[](std::size_t i) const { return basis_[i]; }

  /// HS coordinates <b_i, m> of the orthogonal projection of m.
  Vector coordinates(const Matrix& m) const;
  Matrix from_coordinates(const Vector& c) const;
  Matrix project(const Matrix& m) const;
  /// HS distance from m to the subspace.
  double residual(const Matrix& m) const;
  /// ||m - proj(m)||_HS <= tol * max(1, ||m||_HS).
  bool contains(const Matrix& m, double tol = kDefaultTol) const;
  bool contains(const MatrixSubspace& other, double tol = kDefaultTol) const;
  bool same_span(const MatrixSubspace& other, double tol = kDefaultTol) const;

  /// Basis as columns of an n^2 x dim matrix (column-major vec of each element).
  const Matrix& flattened() const { return flat_; }

 private:
  friend MatrixSubspace orthonormalize(std::span<const Matrix>, std::size_t, double);
  std::size_t ambient_ = 0;
  std::vector<Matrix> basis_;
  Matrix flat_;
};

/// Gram-Schmidt (two passes). Inputs whose residual falls below
/// tol * (largest input HS norm) are dropped. Throws DimensionMismatch.
MatrixSubspace orthonormalize(std::span<const Matrix> mats, std::size_t ambient_dim,
                              double tol = kDefaultTol);
MatrixSubspace orthonormalize(std::span<const Matrix> mats, double tol = kDefaultTol);

MatrixSubspace product_span(const MatrixSubspace& s, const MatrixSubspace& t,
                            double tol = kDefaultTol);
MatrixSubspace adjoint_span(const MatrixSubspace& s, double tol = kDefaultTol);
MatrixSubspace sum_span(const MatrixSubspace& s, const MatrixSubspace& t,
                        double tol = kDefaultTol);

/// Closed under products and adjoints (probabilistic beyond 64 basis elements).
bool is_star_algebra(const MatrixSubspace& a, double tol = kDefaultTol);

/// The unit of a finite-dimensional *-algebra: the range projection of
/// sum_i a_i a_i^*. Empty if that projection is not an element of `a`
/// acting as a two-sided identity.
std::optional<Matrix> algebra_unit(const MatrixSubspace& a, double tol = kDefaultTol);

/// Center {z in A : zb = bz for all b in A}, as an orthonormal subspace.
/// Throws NotAnAlgebra / NotUnital when A is not a unital *-algebra.
MatrixSubspace algebra_center(const MatrixSubspace& a, double tol = kDefaultTol);

std::size_t wedderburn_block_count(const MatrixSubspace& a, double tol = kDefaultTol);

/// Minimal central projections of a finite-dimensional C*-algebra.
std::vector<Matrix> minimal_central_projections(const MatrixSubspace& a,
                                                double tol = kDefaultTol);

/// Sorted matrix sizes k_i of the simple summands M_{k_i}.
std::vector<std::size_t> wedderburn_block_sizes(const MatrixSubspace& a,
                                                double tol = kDefaultTol);

}  // namespace fell
