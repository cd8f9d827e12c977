#pragma once

#include <string>
#include <vector>

#include "fellbundle/abstract_bundle.hpp"

namespace fell {

/// A homomorphism from `domain` into the unitary multipliers of a matrix
/// bundle. unitaries[i] is a multiplier of order degree[i], an element of the
/// bundle's group.
struct UnitaryMultiplierFamily {
  FiniteGroup domain = cyclic_group(1);
  std::vector<Element> degree;
  std::vector<Matrix> unitaries;

  const Matrix& operator[](Element i) const { return unitaries[i]; }
};

/// A family indexed by the members of N (local indices as in N.as_group).
UnitaryMultiplierFamily family_over_subgroup(const FiniteGroup& g, const Subgroup& n,
                                             std::vector<Matrix> unitaries);

struct MultiplierCheck {
  bool pass = true;
  double residual = 0.0;
  std::string failure;
};

/// Unitary on the support (U*U = UU* = unit of fiber e), order conditions
/// U A_t ⊆ A_{deg t} and A_t U ⊆ A_{t deg}, and U_i U_j = U_{ij}. When
/// `covariant` is set, also a_s U_n = U_{s n s^-1} a_s, which presumes
/// degree[i] lists the members of a normal subgroup.
MultiplierCheck check_multiplier_family(const GradedBundle& a, const UnitaryMultiplierFamily& u,
                                        bool covariant, double tol = kDefaultTol);

/// U(n) = 1_D ⊗ left(n) on pullback(d, q). Throws NonUnitalUnitFiber.
UnitaryMultiplierFamily canonical_multiplier_family(const GradedBundle& d, const Quotient& q,
                                                    double tol = kDefaultTol);

/// The orbit bundle A/u over G/N with fiber k represented by A_{c(k)}:
/// [a][b] = [a b U(m)^*] with m = c(kl)^-1 c(k) c(l), and [a]^* = [a^* U(m')^*]
/// with m' = c(k^-1)^-1 c(k)^-1. Coordinates are those of A's fiber bases.
/// Throws InvalidMultiplierFamily.
AbstractBundle quotient_bundle(const GradedBundle& a, const Quotient& q,
                               const UnitaryMultiplierFamily& u, double tol = kDefaultTol);

/// The representative of [a] at the section: a U(n_s)^* for a in A_s.
Matrix orbit_representative(const Quotient& q, const UnitaryMultiplierFamily& u, Element s,
                            const Matrix& a);

struct RoundTrip {
  ConcreteBundle rebuilt;
  IsomorphismReport isomorphism;
};

/// Rebuilds D as the orbit bundle of pullback(d, q) under the canonical
/// family and checks [d ⊗ left(c(k))] ↦ d against d.
RoundTrip quotient_of_pullback(const GradedBundle& d, const Quotient& q, double tol = kDefaultTol);

/// Pulls back the orbit bundle A/u and checks a ↦ ([a U(n_s)^*], s) from a.
/// The rebuilt bundle is the concretized orbit bundle; the pullback itself is
/// pullback(rebuilt.bundle, q).
RoundTrip pullback_of_quotient(const GradedBundle& a, const Quotient& q, const UnitaryMultiplierFamily& u,
                               double tol = kDefaultTol);

}  // namespace fell
