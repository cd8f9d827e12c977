#include "doctest.h"

#include <set>

#include "fellbundle/catalog.hpp"
#include "fellbundle/duality.hpp"
#include "fellbundle/error.hpp"
#include "oracles.hpp"

using namespace fell;

namespace {

Quotient z4_mod_2() {
  const FiniteGroup z4 = cyclic_group(4);
  return Quotient(z4, make_normal_subgroup(z4, {0, 2}));
}

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::InvalidParameter;
}

/// Kernel of a permutation action by direct enumeration of fixed points.
std::vector<Element> kernel_by_enumeration(const GSetAction& act) {
  std::vector<Element> out;
  for (Element s = 0; s < act.group.order(); ++s) {
    bool fixes_all = true;
    for (std::size_t x = 0; x < act.size; ++x) fixes_all = fixes_all && act.perm[s][x] == x;
    if (fixes_all) out.push_back(s);
  }
  return out;
}

}  // namespace

TEST_CASE("Landstad reconstruction of the twisted Z4 example") {
  const TwistedAction t = catalog::z4_scalar_twist(-1.0);
  const ConcreteBundle d = concretize(twisted_semidirect_bundle(t));
  const Quotient q = z4_mod_2();
  const LandstadResult r = landstad_reconstruct(d.bundle, q, landstad_canonical_family(t, d));
  CHECK(r.isomorphism.pass);
  CHECK(r.action.algebra.dim() == 1);
  // B is one-dimensional, so the twist is recovered exactly: tau(2) = -1.
  CHECK((r.action.tau(2) + r.action.unit()).norm() < 1e-10);
}

TEST_CASE("Landstad reconstruction of a trivial bundle") {
  const FiniteGroup z3 = cyclic_group(3);
  const Quotient q(z3, Subgroup::whole(z3));
  const GradedBundle d = trivial_bundle(cyclic_group(1), catalog::full_matrix_algebra(2));
  const UnitaryMultiplierFamily u{z3, {0, 0, 0}, std::vector<Matrix>(3, identity(2))};
  const LandstadResult r = landstad_reconstruct(d, q, u);
  CHECK(r.isomorphism.pass);
  for (Element n : q.normal().members()) CHECK((r.action.tau(n) - identity(2)).norm() < 1e-12);
  for (Element s = 0; s < 3; ++s)
    for (const auto& b : r.action.algebra.basis()) CHECK((r.action.apply(s, b) - b).norm() < 1e-12);
}

TEST_CASE("Landstad rejects families of the wrong order") {
  const TwistedAction t = catalog::z4_scalar_twist(-1.0);
  const ConcreteBundle d = concretize(twisted_semidirect_bundle(t));
  UnitaryMultiplierFamily u = landstad_canonical_family(t, d);
  u.unitaries[1] = u.unitaries[0];
  CHECK(code_of([&] { landstad_reconstruct(d.bundle, z4_mod_2(), u); }) == Errc::MultiplierNotOrderCompatible);
  u = landstad_canonical_family(t, d);
  u.degree[1] = 0;
  CHECK(code_of([&] { landstad_reconstruct(d.bundle, z4_mod_2(), u); }) == Errc::MultiplierNotOrderCompatible);
}

TEST_CASE("Landstad round trip on S3 over A3") {
  const TwistedAction t = catalog::s3_matrix_action(true);
  const ConcreteBundle d = concretize(twisted_semidirect_bundle(t));
  const LandstadResult r =
      landstad_reconstruct(d.bundle, Quotient(t.group, t.normal), landstad_canonical_family(t, d));
  CHECK(r.isomorphism.pass);
  CHECK(r.action.algebra.dim() == 4);
}

TEST_CASE("Olesen-Pedersen forward map") {
  const OlesenPedersenReport twisted = olesen_pedersen_forward(catalog::z4_scalar_twist(-1.0));
  CHECK(twisted.pass);
  CHECK(twisted.semidirect_dim == 4);
  CHECK(twisted.pullback_dim == 4);
  CHECK(olesen_pedersen_forward(catalog::z4_scalar_twist(1.0)).pass);
  CHECK(olesen_pedersen_forward(catalog::swap_action()).pass);
  CHECK(olesen_pedersen_forward(catalog::s3_matrix_action(true)).pass);
}

TEST_CASE("twist extraction") {
  for (const TwistedAction& t : {catalog::z4_scalar_twist(-1.0), catalog::s3_matrix_action(true)}) {
    const ConcreteBundle a = concretize(semidirect_bundle(t));
    const auto tau = extract_twist(t, a, t.normal, semidirect_multiplier_family(t, a));
    REQUIRE(tau.size() == t.twist.size());
    for (std::size_t i = 0; i < tau.size(); ++i) CHECK((tau[i] - t.twist[i]).norm() < 1e-10);
  }
  const TwistedAction swap = catalog::swap_action();
  const ConcreteBundle a = concretize(semidirect_bundle(swap));
  const auto tau = extract_twist(swap, a, Subgroup::trivial(), semidirect_multiplier_family(swap, a));
  REQUIRE(tau.size() == 1);
  CHECK((tau[0] - swap.unit()).norm() < 1e-10);

  // Scaling a multiplier breaks unitarity.
  const TwistedAction z4 = catalog::z4_scalar_twist(-1.0);
  const ConcreteBundle az = concretize(semidirect_bundle(z4));
  UnitaryMultiplierFamily bad = semidirect_multiplier_family(z4, az);
  bad.unitaries[1] *= 2.0;
  CHECK(code_of([&] { extract_twist(z4, az, z4.normal, bad); }) == Errc::InvalidMultiplierFamily);
}

TEST_CASE("graded ideals") {
  const SectionAlgebra cz2(trivial_bundle(cyclic_group(2), catalog::scalars(1)));
  const auto ideals = graded_ideals(cz2);
  REQUIRE(ideals.size() == 2);
  CHECK(ideals[0].dim() == 0);
  CHECK(ideals[1].dim() == 2);
  CHECK(is_G_simple(cz2));

  CHECK(graded_ideals(SectionAlgebra(trivial_bundle(cyclic_group(1), catalog::full_matrix_algebra(2)))).size() == 2);

  // Two copies of the Pauli bundle, block diagonally.
  const Matrix x = catalog::pauli_x();
  Matrix i1 = Matrix::Zero(4, 4), i2 = Matrix::Zero(4, 4), x1 = Matrix::Zero(4, 4), x2 = Matrix::Zero(4, 4);
  i1.topLeftCorner(2, 2) = identity(2);
  i2.bottomRightCorner(2, 2) = identity(2);
  x1.topLeftCorner(2, 2) = x;
  x2.bottomRightCorner(2, 2) = x;
  const std::vector<Matrix> e{i1, i2}, one{x1, x2};
  const GradedBundle doubled(cyclic_group(2), 4, {orthonormalize(e, std::size_t{4}), orthonormalize(one, std::size_t{4})});
  const SectionAlgebra sd(doubled);
  CHECK(graded_ideals(sd).size() >= 4);
  CHECK_FALSE(is_G_simple(sd));

  // Everything in the unit fiber: C ⊕ C graded trivially over Z/2.
  const GradedBundle ungraded(cyclic_group(2), 2, {catalog::diagonal_algebra(2), MatrixSubspace(2)});
  CHECK_FALSE(is_G_simple(SectionAlgebra(ungraded)));
}

TEST_CASE("action-invariant ideals") {
  CHECK(action_invariant_ideals(catalog::swap_action()).size() == 2);
  const TwistedAction id = inner_twisted_action(catalog::diagonal_algebra(2), cyclic_group(2),
                                                {identity(2), identity(2)}, Subgroup::trivial(), {});
  CHECK(action_invariant_ideals(id).size() == 4);
}

TEST_CASE("stabilizer obstruction on S3 acting on S3 / <(01)>") {
  const FiniteGroup s3 = symmetric_group(3);
  const GSetAction act = coset_action(s3, Subgroup::make(s3, {0, catalog::kS3Transposition}));
  validate_gset(act);
  CHECK(act.size == 3);
  const ObstructionReport r = stabilizer_obstruction(act, catalog::s3_alternating());
  CHECK(r.kernel.members() == kernel_by_enumeration(act));
  CHECK(r.kernel.members() == std::vector<Element>{0});
  CHECK_FALSE(r.induced_possible);
  CHECK(r.verdict.find("not weakly induced") != std::string::npos);

  // The crossed product C(S3/H) x S3 is M3 ⊕ M3 and G-simple.
  const ConcreteBundle c = concretize(semidirect_bundle(function_algebra_action(act)));
  const SectionAlgebra s(c.bundle);
  CHECK(s.total().dim() == 18);
  CHECK(oracle::center_dim(s.total().basis()) == 2);
  CHECK(is_G_simple(s));
}

TEST_CASE("stabilizer obstruction edge cases") {
  const FiniteGroup s3 = symmetric_group(3);
  const GSetAction free = translation_action(s3);
  CHECK(stabilizer_obstruction(free, catalog::s3_alternating()).kernel.members() == kernel_by_enumeration(free));
  CHECK(stabilizer_obstruction(free, catalog::s3_alternating()).kernel.order() == 1);

  const GSetAction fixed = trivial_action(s3, 2);
  const ObstructionReport r = stabilizer_obstruction(fixed, catalog::s3_alternating());
  CHECK(r.kernel.order() == 6);
  CHECK(r.induced_possible);
  CHECK(r.verdict == "no obstruction");

  CHECK(code_of([&] { stabilizer_obstruction(fixed, Subgroup::trivial()); }) == Errc::TrivialN);

  GSetAction broken = fixed;
  broken.perm[1] = {1, 1};
  CHECK(code_of([&] { validate_gset(broken); }) == Errc::InvalidAction);
}
