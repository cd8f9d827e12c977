#pragma once

#include <string>
#include <vector>

#include "fellbundle/cross_sectional.hpp"
#include "fellbundle/multipliers.hpp"
#include "fellbundle/twisted.hpp"

namespace fell {

struct LandstadResult {
  TwistedAction action;
  /// twisted_semidirect_bundle(action), concretized.
  ConcreteBundle rebuilt;
  /// [b, s] ↦ b u_s from the rebuilt bundle onto D.
  IsomorphismReport isomorphism;
};

/// B = D_N, alpha_s = Ad u_s on B, tau = u restricted to N. `u` is indexed by
/// all of G with degree[s] = sN. Throws MultiplierNotOrderCompatible when u is
/// not a unitary multiplier family of those orders or does not normalize B,
/// and FiberNotPrincipal when D_{sN} != B u_s.
LandstadResult landstad_reconstruct(const GradedBundle& d, const Quotient& q,
                                    const UnitaryMultiplierFamily& u, double tol = kDefaultTol);

/// On the concretized twisted semidirect bundle of t, u_s is the image of [1, s].
UnitaryMultiplierFamily landstad_canonical_family(const TwistedAction& t, const ConcreteBundle& d);

struct OlesenPedersenReport {
  bool pass = false;
  std::size_t semidirect_dim = 0;
  std::size_t pullback_dim = 0;
  IsomorphismReport isomorphism;
};

/// Checks that (b, s) ↦ ([b, s], s) is an isomorphism from the semidirect
/// bundle of the untwisted action onto the pullback of the twisted bundle.
OlesenPedersenReport olesen_pedersen_forward(const TwistedAction& t, double tol = kDefaultTol);

/// u_n = (tau_n^*, n) on the concretized semidirect bundle of t.
UnitaryMultiplierFamily semidirect_multiplier_family(const TwistedAction& t, const ConcreteBundle& a);

/// tau_n = (1, n) u_{n^-1} read back in B. `a` must be the concretized
/// semidirect bundle of `action` (whose own twist is ignored) and u must be
/// indexed by the members of `normal`. Throws InvalidMultiplierFamily when u
/// fails the multiplier conditions or the result is not a Green twist.
std::vector<Matrix> extract_twist(const TwistedAction& action, const ConcreteBundle& a, const Subgroup& normal,
                                  const UnitaryMultiplierFamily& u, double tol = kDefaultTol);

/// Two-sided ideals (sums of minimal central summands) preserved by every
/// grading projection, including 0 and the whole algebra.
std::vector<MatrixSubspace> graded_ideals(const SectionAlgebra& s, double tol = kDefaultTol);

/// True iff the only graded ideals are 0 and the whole algebra.
bool is_G_simple(const SectionAlgebra& s, double tol = kDefaultTol);

/// Ideals of the coefficient algebra of t invariant under every alpha_s.
std::vector<MatrixSubspace> action_invariant_ideals(const TwistedAction& t, double tol = kDefaultTol);

/// A finite G-set: perm[s][x] = s·x.
struct GSetAction {
  FiniteGroup group = cyclic_group(1);
  std::size_t size = 0;
  std::vector<std::vector<std::size_t>> perm;
};

/// Throws InvalidAction unless perm is a homomorphism into Sym(size).
void validate_gset(const GSetAction& act);
/// Left multiplication on the left cosets sH, numbered by first appearance.
GSetAction coset_action(const FiniteGroup& g, const Subgroup& h);
GSetAction translation_action(const FiniteGroup& g);
GSetAction trivial_action(const FiniteGroup& g, std::size_t size);

/// C(X) as diagonal matrices with alpha_s = Ad(permutation matrix of s).
TwistedAction function_algebra_action(const GSetAction& act);

struct ObstructionReport {
  Subgroup kernel = Subgroup::trivial();
  /// False when N is not contained in every point stabilizer.
  bool induced_possible = true;
  std::string verdict;
};

/// Intersects the point stabilizers. A twist over N forces N into every
/// stabilizer, so N ⊄ kernel rules out weak induction from G/N. Throws TrivialN.
ObstructionReport stabilizer_obstruction(const GSetAction& act, const Subgroup& n);

}  // namespace fell
