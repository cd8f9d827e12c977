#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fellbundle/group.hpp"
#include "fellbundle/matrix.hpp"

namespace fell {

/// A Fell bundle over a finite group, realized as a G-indexed family of
/// subspaces of one ambient matrix algebra M_n. Product and adjoint are the
/// ambient ones; verify_fell_axioms checks that they respect the grading.
class GradedBundle {
 public:
  /// Throws DimensionMismatch if the fiber count or any ambient size is off.
  GradedBundle(FiniteGroup group, std::size_t ambient_dim, std::vector<MatrixSubspace> fibers);

  const FiniteGroup& group() const { return group_; }
  std::size_t ambient_dim() const { return ambient_; }
  const MatrixSubspace& fiber(Element s) const { return fibers_[s]; }
  const std::vector<MatrixSubspace>& fibers() const { return fibers_; }
  /// Sum of fiber dimensions.
  std::size_t section_dim() const;

 private:
  FiniteGroup group_;
  std::size_t ambient_;
  std::vector<MatrixSubspace> fibers_;
};

struct AxiomViolation {
  std::string axiom;
  Element s = 0;
  Element t = 0;
  double residual = 0.0;
};

struct AxiomReport {
  bool pass = true;
  std::vector<std::string> families;
  std::vector<AxiomViolation> violations;

  bool family_passed(const std::string& family) const;
};

inline constexpr const char* kProductClosure = "product_closure";
inline constexpr const char* kAdjointSymmetry = "adjoint_symmetry";
inline constexpr const char* kDirectSum = "direct_sum";
inline constexpr const char* kUnitFiberSubalgebra = "unit_fiber_subalgebra";
inline constexpr const char* kCStarNorm = "cstar_norm";

/// Checks product closure, adjoint symmetry, joint linear independence of
/// the fibers, that fiber(e) is a unital *-subalgebra, and ||a*a|| = ||a||^2.
/// Each violation names the witnessing pair (s, t) and its worst residual.
AxiomReport verify_fell_axioms(const GradedBundle& a, double tol = kDefaultTol);

/// images[s][i] is the image of the i-th basis vector of fiber s.
struct FiberMap {
  std::vector<std::vector<Matrix>> images;

  /// Evaluates phi_s on an arbitrary element of fiber s of `source`.
  Matrix apply(const GradedBundle& source, Element s, const Matrix& a) const;
};

FiberMap make_fiber_map(const GradedBundle& source,
                        const std::function<Matrix(Element, const Matrix&)>& phi);

struct IsomorphismReport {
  bool pass = true;
  double residual = 0.0;
  std::string failure;
};

/// phi must be fiberwise bijective, multiplicative, *-preserving and isometric.
/// Throws ShapeMismatch when groups differ or phi has the wrong shape.
IsomorphismReport verify_bundle_isomorphism(const GradedBundle& a, const GradedBundle& b,
                                            const FiberMap& phi, double tol = kDefaultTol);

/// fiber(s) = unit_algebra ⊗ span{left(s)} inside M_n ⊗ M_|G|.
GradedBundle trivial_bundle(const FiniteGroup& g, const MatrixSubspace& unit_algebra,
                            double tol = kDefaultTol);

/// fiber(s) = {d ⊗ left(s) : d in D_{sN}} inside M_n ⊗ M_|G|. The basis of
/// fiber(s) is (d_i ⊗ left(s)) / sqrt|G| for the basis d_i of D_{sN}.
/// Throws GroupMismatch unless d is graded over q.group().
GradedBundle pullback(const GradedBundle& d, const Quotient& q, double tol = kDefaultTol);

/// The *-embedding d ↦ d ⊗ left(s) of D_{sN} onto fiber s of the pullback.
Matrix pullback_embed(const Quotient& q, Element s, const Matrix& d);
/// Inverse of the tensor embedding: returns d with x = d ⊗ right_factor.
Matrix untensor(const Matrix& x, const Matrix& right_factor);

/// Restriction to a subgroup (normality not required); the result is graded
/// over h.as_group(a.group()).
GradedBundle restrict_bundle(const GradedBundle& a, const Subgroup& h);

/// Identity fiber maps a -> a.
FiberMap identity_map(const GradedBundle& a);

}  // namespace fell
