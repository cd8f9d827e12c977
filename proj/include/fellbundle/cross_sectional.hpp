#pragma once

#include <string>
#include <vector>

#include "fellbundle/bundle.hpp"

namespace fell {

/// The section algebra of a matrix bundle: the span of all fibers, with the
/// grading projections delta_s read off from the direct-sum decomposition.
class SectionAlgebra {
 public:
  /// Throws AxiomViolation unless verify_fell_axioms passes.
  explicit SectionAlgebra(GradedBundle bundle, double tol = kDefaultTol);

  const GradedBundle& bundle() const { return bundle_; }
  const MatrixSubspace& total() const { return total_; }
  /// delta_s(a) for a in total().
  Matrix component(Element s, const Matrix& a) const;
  /// Coefficients of a against the concatenated fiber bases.
  Vector fiber_coefficients(const Matrix& a) const;
  /// delta_s as a linear map on total() coordinates.
  const Matrix& grading_projection(Element s) const { return projections_[s]; }

 private:
  GradedBundle bundle_;
  MatrixSubspace total_;
  std::vector<std::size_t> offset_;
  /// (F^* F)^{-1} F^* for the n^2 x D matrix F of concatenated fiber bases.
  Matrix solver_;
  std::vector<Matrix> projections_;
};

SectionAlgebra section_algebra(const GradedBundle& a, double tol = kDefaultTol);

/// delta_e(a). Throws NotInAlgebra when a is not in the section algebra.
Matrix conditional_expectation(const SectionAlgebra& s, const Matrix& a, double tol = kDefaultTol);

/// A x_delta G realized in M_n ⊗ M_|G|: (a_s, t) ↦ a_s ⊗ E_{st,t}.
class CrossedProduct {
 public:
  explicit CrossedProduct(const GradedBundle& a, double tol = kDefaultTol);

  const SectionAlgebra& section() const { return section_; }
  const FiniteGroup& group() const { return section_.bundle().group(); }
  std::size_t ambient_dim() const { return ambient_; }
  /// Span of all fiber images; its dimension is |G| times the section dimension.
  const MatrixSubspace& algebra() const { return algebra_; }

  Matrix embed(Element s, Element t, const Matrix& a) const;
  MatrixSubspace fiber_at(Element s, Element t) const;
  /// j_A on a section: sum_s delta_s(a) ⊗ left(s).
  Matrix jA(const Matrix& a) const;
  /// 1 ⊗ E_{t,t}
  Matrix jG(Element t) const;
  /// 1 ⊗ right(r)
  Matrix dual_unitary(Element r) const;
  /// Conjugation by dual_unitary(r).
  Matrix dual_action(Element r, const Matrix& x) const;

 private:
  SectionAlgebra section_;
  std::size_t base_ambient_;
  std::size_t ambient_;
  MatrixSubspace algebra_;
};

CrossedProduct crossed_product(const GradedBundle& a, double tol = kDefaultTol);

struct CrossedProductCheck {
  bool pass = true;
  std::size_t dimension = 0;
  std::size_t expected_dimension = 0;
  /// Worst residuals of the groupoid product/adjoint rules, isometry and covariance.
  double groupoid = 0.0;
  double isometry = 0.0;
  double covariance = 0.0;
  double dual_action = 0.0;
};

/// Groupoid product and adjoint rules on generator pairs, ||a ⊗ E|| = ||a||,
/// covariance of (jA, jG), and that the dual action moves (s,t) to (s, t r^-1)
/// homomorphically.
CrossedProductCheck verify_crossed_product(const CrossedProduct& x, double tol = kDefaultTol);

struct CovariantPairReport {
  bool covariant = true;
  bool integrated_homomorphism = true;
  double residual = 0.0;
  std::string failure;
};

/// pi is given on fiber bases; mu(t) must be projections on one space.
/// Returns covariant = false when the projections are not orthogonal, do not
/// sum to the identity, or the covariance identity fails. Throws
/// ProjectionsNotResolving for shape errors or non-projections, and
/// NotAHomomorphism when pi is degenerate or not a *-homomorphism.
CovariantPairReport verify_covariant_pair(const SectionAlgebra& s, const FiberMap& pi,
                                          const std::vector<Matrix>& mu, double tol = kDefaultTol);

}  // namespace fell
