#pragma once

#include <vector>

#include "fellbundle/abstract_bundle.hpp"

namespace fell {

/// A Green-twisted system (B, G, N, alpha, tau) with B a unital *-subalgebra
/// of some M_n. alpha[s] acts on B's orthonormal coordinates; tau[i] is the
/// unitary of B attached to the i-th member of N.
struct TwistedAction {
  MatrixSubspace algebra;
  FiniteGroup group = cyclic_group(1);
  Subgroup normal = Subgroup::trivial();
  std::vector<Matrix> alpha;
  std::vector<Matrix> twist;

  Matrix apply(Element s, const Matrix& b) const;
  const Matrix& tau(Element n) const { return twist[normal.local_index(n)]; }
  /// The unit of B.
  Matrix unit() const;
  /// The same action with N = {e} and tau(e) = 1.
  TwistedAction untwisted() const;
};

/// alpha_s = Ad(v_s) restricted to B, with v_s any ambient unitaries that
/// normalize B. `twist` is indexed like normal.members(); empty means N = {e}.
TwistedAction inner_twisted_action(const MatrixSubspace& algebra, const FiniteGroup& g,
                                   const std::vector<Matrix>& implementing_unitaries,
                                   const Subgroup& normal, const std::vector<Matrix>& twist);

/// Throws InvalidAction when some alpha_s is not a *-automorphism or
/// alpha is not a homomorphism.
void validate_action(const TwistedAction& t, double tol = kDefaultTol);
/// validate_action plus the Green twist identities; throws InvalidTwist.
void validate_twisted_action(const TwistedAction& t, double tol = kDefaultTol);

/// B x G with (b,s)(c,t) = (b alpha_s(c), st), (b,s)^* = (alpha_{s^-1}(b)^*, s^-1)
/// and phi(b, e) = trace(b). Fiber coordinates are those of B. Ignores the twist.
AbstractBundle semidirect_bundle(const TwistedAction& t, double tol = kDefaultTol);

/// The N-orbit space of B x G over G/N, each fiber represented at the
/// section element c(sN). Coordinates are those of B.
AbstractBundle twisted_semidirect_bundle(const TwistedAction& t, double tol = kDefaultTol);

/// The orbit representative of (b, s) at the section: [b, s] = [b tau_m, c(sN)]
/// with m = s c(sN)^{-1}. Returns b tau_m.
Matrix twisted_representative(const TwistedAction& t, const Quotient& q, Element s, const Matrix& b);

}  // namespace fell
