#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fellbundle/bundle.hpp"

namespace fell {

/// A finitely supported map from pairs of indices to matrices.
///   X0: (coset k, element t)  -> D_k
///   B0: (element s, element t) -> D_{sN}, the triple (d, s, t)
///   C0: (coset k, coset l)     -> D_k, the pair (d, lN) sitting over k
template <int Kind>
struct SparseElement {
  using Key = std::pair<Element, Element>;
  std::map<Key, Matrix> terms;

  void add(Key key, const Matrix& m) {
    auto it = terms.find(key);
    if (it == terms.end()) terms.emplace(key, m);
    else it->second += m;
  }
  SparseElement& operator+=(const SparseElement& o) {
    for (const auto& [k, m] : o.terms) add(k, m);
    return *this;
  }
  friend SparseElement operator+(SparseElement a, const SparseElement& b) { return a += b; }
  friend SparseElement operator*(Complex z, SparseElement a) {
    for (auto& [k, m] : a.terms) m *= z;
    return a;
  }
};

using BimoduleElement = SparseElement<0>;
using AlgebraElementB = SparseElement<1>;
using AlgebraElementC = SparseElement<2>;

/// Largest HS norm of a coefficient difference.
template <int Kind>
double distance(const SparseElement<Kind>& a, const SparseElement<Kind>& b) {
  double d = 0.0;
  for (const auto& [k, m] : a.terms) {
    auto it = b.terms.find(k);
    d = std::max(d, it == b.terms.end() ? m.norm() : (m - it->second).norm());
  }
  for (const auto& [k, m] : b.terms)
    if (!a.terms.count(k)) d = std::max(d, m.norm());
  return d;
}

/// The X0 = Γ_c(D × G) bimodule between B0 = Γ_c(q*D × G) and C0 = Γ_c(D × G/N).
class Imprimitivity {
 public:
  using Star = std::function<Matrix(const Matrix&)>;

  /// Throws GroupMismatch unless d is graded over q.group(). `star` replaces
  /// the fiber involution everywhere it enters the formulas (for fault injection).
  Imprimitivity(GradedBundle d, Quotient q, Star star = {});

  const GradedBundle& coefficients() const { return d_; }
  const Quotient& quotient() const { return q_; }

  /// Each throws FiberMismatch when an argument has a term outside its fiber.
  BimoduleElement right_action(const BimoduleElement& x, const AlgebraElementC& c) const;
  BimoduleElement left_action(const AlgebraElementB& b, const BimoduleElement& x) const;
  AlgebraElementC rinner(const BimoduleElement& x, const BimoduleElement& y) const;
  AlgebraElementB linner(const BimoduleElement& x, const BimoduleElement& y) const;
  BimoduleElement gamma(Element r, const BimoduleElement& x) const;

  AlgebraElementB multiply(const AlgebraElementB& a, const AlgebraElementB& b) const;
  AlgebraElementC multiply(const AlgebraElementC& a, const AlgebraElementC& b) const;
  AlgebraElementB adjoint(const AlgebraElementB& b) const;
  AlgebraElementC adjoint(const AlgebraElementC& c) const;
  /// (s, t) ↦ (s, t r^-1)
  AlgebraElementB dual_action(Element r, const AlgebraElementB& b) const;
  /// (k, l) ↦ (k, l q(r)^-1)
  AlgebraElementC inflated_dual_action(Element r, const AlgebraElementC& c) const;

  /// Faithful realizations: (d, s, t) ↦ d ⊗ E_{st,t} and (d, k, l) ↦ d ⊗ E_{kl,l}.
  Matrix realize(const AlgebraElementB& b) const;
  Matrix realize(const AlgebraElementC& c) const;

  /// Coordinates against the generator bases (fiber orthonormal bases per key).
  Vector coordinates(const AlgebraElementB& b) const;
  Vector coordinates(const AlgebraElementC& c) const;

  std::vector<BimoduleElement> x_generators() const;
  std::vector<AlgebraElementB> b_generators() const;
  std::vector<AlgebraElementC> c_generators() const;

  std::size_t dim_x() const;
  std::size_t dim_b() const;
  std::size_t dim_c() const;

  void check_fibers(const BimoduleElement& x) const;
  void check_fibers(const AlgebraElementB& b) const;
  void check_fibers(const AlgebraElementC& c) const;

  /// A copy whose operations skip the per-call fiber checks, for sweeps
  /// over elements already known to lie in their fibers.
  Imprimitivity without_fiber_checks() const;

 private:
  Matrix star(const Matrix& m) const { return star_ ? star_(m) : Matrix(m.adjoint()); }
  Element coset(Element s) const { return q_.coset_of(s); }

  GradedBundle d_;
  Quotient q_;
  template <class T>
  void guard(const T& x) const {
    if (checked_) check_fibers(x);
  }

  Star star_;
  Matrix unit_;
  bool checked_ = true;
};

struct UnitElements {
  AlgebraElementB unit_b;
  AlgebraElementC unit_c;
};

/// unitB = sum_t (1, e, t) and unitC = sum_l (1, eN, l). Throws NonUnitalUnitFiber.
UnitElements unit_elements(const Imprimitivity& imp, double tol = kDefaultTol);

struct ItemResult {
  std::string name;
  bool pass = true;
  double residual = 0.0;
};

struct ImprimitivityReport {
  bool pass = true;
  /// Items (i) to (viii) in order, then the unit-element checks.
  std::vector<ItemResult> items;
  std::size_t rank_b = 0;
  std::size_t rank_c = 0;

  const ItemResult& item(const std::string& name) const;
};

/// Every bimodule identity on all generator combinations, plus random sums.
ImprimitivityReport verify_imprimitivity(const Imprimitivity& imp, double tol = kDefaultTol);

struct EquivarianceReport {
  bool pass = true;
  double linner_residual = 0.0;
  double right_action_residual = 0.0;
  double action_residual = 0.0;
};

/// <γ_r x, γ_r y>_B = dual_r <x, y>_B and γ_r(x c) = γ_r(x) infl_r(c) on all
/// generators for every r, and r ↦ γ_r is an action.
EquivarianceReport verify_equivariance(const Imprimitivity& imp, double tol = 1e-10);

struct MoritaReport {
  std::size_t dim_b = 0;
  std::size_t dim_c = 0;
  std::size_t dim_x = 0;
  std::size_t blocks_b = 0;
  std::size_t blocks_c = 0;
  bool equivalent = false;
};

/// Throws AxiomViolation when `report` failed.
MoritaReport morita_report(const Imprimitivity& imp, const ImprimitivityReport& report,
                           double tol = kDefaultTol);

}  // namespace fell
