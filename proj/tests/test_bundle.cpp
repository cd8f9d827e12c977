#include "doctest.h"

#include <cmath>

#include "fellbundle/catalog.hpp"
#include "fellbundle/cross_sectional.hpp"
#include "fellbundle/error.hpp"
#include "fellbundle/multipliers.hpp"
#include "oracles.hpp"

using namespace fell;

namespace {

std::size_t blocks(const GradedBundle& b) {
  std::vector<Matrix> all;
  for (const auto& f : b.fibers())
    for (const auto& m : f.basis()) all.push_back(m);
  return oracle::center_dim(all);
}

std::vector<Matrix> all_fiber_elements(const GradedBundle& b) {
  std::vector<Matrix> all;
  for (const auto& f : b.fibers())
    for (const auto& m : f.basis()) all.push_back(m);
  return all;
}

}  // namespace

TEST_CASE("Fell axioms on small bundles") {
  const GradedBundle pauli = catalog::pauli_bundle();
  const AxiomReport ok = verify_fell_axioms(pauli);
  CHECK(ok.pass);
  CHECK(ok.families.size() == 5);

  const std::vector<Matrix> e{identity(2)}, e12{matrix_unit(2, 0, 1)};
  const GradedBundle broken(cyclic_group(2), 2, {orthonormalize(e, std::size_t{2}), orthonormalize(e12, std::size_t{2})});
  const AxiomReport bad = verify_fell_axioms(broken);
  CHECK_FALSE(bad.pass);
  CHECK_FALSE(bad.family_passed(kAdjointSymmetry));

  CHECK(verify_fell_axioms(trivial_bundle(symmetric_group(3), catalog::scalars(1))).pass);
}

TEST_CASE("trivial bundles") {
  const GradedBundle z2 = trivial_bundle(cyclic_group(2), catalog::scalars(1));
  REQUIRE(z2.ambient_dim() == 2);
  CHECK(z2.fiber(0).contains(identity(2)));
  CHECK(z2.fiber(1).contains(catalog::pauli_x()));

  const GradedBundle one = trivial_bundle(cyclic_group(1), catalog::full_matrix_algebra(2));
  CHECK(one.section_dim() == 4);

  const GradedBundle z4 = trivial_bundle(cyclic_group(4), catalog::full_matrix_algebra(2));
  for (const auto& f : z4.fibers()) CHECK(f.dim() == 4);
  CHECK(z4.section_dim() == 16);
  CHECK(verify_fell_axioms(z4).pass);
}

TEST_CASE("pullbacks") {
  const FiniteGroup z4 = cyclic_group(4);
  const Quotient q(z4, make_normal_subgroup(z4, {0, 2}));
  const GradedBundle p = pullback(catalog::pauli_bundle(), q);
  for (const auto& f : p.fibers()) CHECK(f.dim() == 1);
  CHECK(p.section_dim() == 4);
  CHECK(verify_fell_axioms(p).pass);
  CHECK_THROWS_AS(pullback(catalog::pauli_bundle(), Quotient(z4, Subgroup::trivial())), Error);

  // Along N = {e} the pullback is D itself via d ↦ d ⊗ left(s).
  const GradedBundle d = trivial_bundle(cyclic_group(2), catalog::scalars(1));
  const Quotient id(cyclic_group(2), Subgroup::trivial());
  const GradedBundle pd = pullback(d, id);
  const FiberMap phi = make_fiber_map(d, [&](Element s, const Matrix& m) { return pullback_embed(id, s, m); });
  CHECK(verify_bundle_isomorphism(d, pd, phi).pass);

  // Pulling back the trivial C-bundle gives the trivial C-bundle.
  const GradedBundle tc = pullback(trivial_bundle(cyclic_group(2), catalog::scalars(1)), q);
  CHECK(tc.section_dim() == 4);
  CHECK(blocks(tc) == 4);
}

TEST_CASE("restriction") {
  const FiniteGroup z4 = cyclic_group(4);
  const Subgroup n = make_normal_subgroup(z4, {0, 2});
  const GradedBundle p = pullback(catalog::pauli_bundle(), Quotient(z4, n));
  const GradedBundle r = restrict_bundle(p, n);
  CHECK(r.group().order() == 2);
  CHECK(verify_fell_axioms(r).pass);
  // The restriction to N is the trivial bundle over N with coefficients D_e.
  CHECK(r.fiber(0).dim() == 1);
  CHECK(r.fiber(1).dim() == 1);
  CHECK(blocks(r) == 2);

  CHECK(restrict_bundle(p, Subgroup::trivial()).section_dim() == 1);
  CHECK(restrict_bundle(p, Subgroup::whole(z4)).section_dim() == 4);
}

TEST_CASE("semidirect bundles after concretization") {
  const TwistedAction trivial_z2 = inner_twisted_action(catalog::scalars(1), cyclic_group(2),
                                                        {identity(1), identity(1)}, Subgroup::trivial(), {});
  const ConcreteBundle c = concretize(semidirect_bundle(trivial_z2));
  CHECK(c.bundle.section_dim() == 2);
  CHECK(verify_fell_axioms(c.bundle).pass);
  CHECK(blocks(c.bundle) == 2);

  const ConcreteBundle swap = concretize(semidirect_bundle(catalog::swap_action()));
  CHECK(swap.bundle.section_dim() == 4);
  CHECK(verify_fell_axioms(swap.bundle).pass);
  CHECK(blocks(swap.bundle) == 1);
}

TEST_CASE("twisted semidirect bundle over Z4/{0,2}") {
  const TwistedAction t = catalog::z4_scalar_twist(-1.0);
  validate_twisted_action(t);
  const AbstractBundle ab = twisted_semidirect_bundle(t);
  CHECK(ab.group.order() == 2);
  CHECK(ab.dims == std::vector<std::size_t>{1, 1});
  CHECK(check_abstract_bundle(ab).pass);
  const ConcreteBundle c = concretize(ab);
  CHECK(c.bundle.section_dim() == 2);
  CHECK(verify_fell_axioms(c.bundle).pass);
  // [1, 1]^2 = [tau(2)^*, 0] = -1, so the algebra is C[i] ≅ C ⊕ C.
  const Matrix g = c.image(1, Vector::Ones(1));
  CHECK((g * g + identity(g.rows())).norm() < 1e-10);

  const Quotient q(t.group, t.normal);
  const GradedBundle p = pullback(c.bundle, q);
  CHECK(p.section_dim() == 4);
  CHECK(blocks(p) == 4);

  CHECK_THROWS_AS(validate_twisted_action(catalog::z4_scalar_twist(2.0)), Error);
}

TEST_CASE("abstract round trip") {
  for (const GradedBundle& b : {catalog::pauli_bundle(), trivial_bundle(symmetric_group(3), catalog::scalars(1))}) {
    const AbstractBundle ab = abstract_from(b);
    CHECK(check_abstract_bundle(ab).pass);
    const ConcreteBundle c = concretize(ab);
    const FiberMap phi = make_fiber_map(c.bundle, [&](Element s, const Matrix& m) {
      return b.fiber(s).from_coordinates(c.coordinates(s, m));
    });
    CHECK(verify_bundle_isomorphism(c.bundle, b, phi).pass);
  }
}

TEST_CASE("isomorphism checks") {
  const GradedBundle pauli = catalog::pauli_bundle();
  CHECK(verify_bundle_isomorphism(pauli, pauli, identity_map(pauli)).pass);
  const FiberMap scaled = make_fiber_map(pauli, [](Element s, const Matrix& m) {
    return s == 1 ? Matrix(2.0 * m) : m;
  });
  CHECK_FALSE(verify_bundle_isomorphism(pauli, pauli, scaled).pass);
}

TEST_CASE("multiplier families and orbit bundles") {
  const FiniteGroup z4 = cyclic_group(4);
  const Quotient q(z4, make_normal_subgroup(z4, {0, 2}));
  const GradedBundle pauli = catalog::pauli_bundle();
  const GradedBundle p = pullback(pauli, q);
  const UnitaryMultiplierFamily u = canonical_multiplier_family(pauli, q);
  CHECK(check_multiplier_family(p, u, true).pass);

  const RoundTrip back = quotient_of_pullback(pauli, q);
  CHECK(back.rebuilt.bundle.group().order() == 2);
  CHECK(back.isomorphism.pass);

  const RoundTrip forth = pullback_of_quotient(p, q, u);
  CHECK(forth.isomorphism.pass);

  // Trivial C-bundle over Z4 with u = left-regular on N gives 1-dim fibers over Z2.
  const GradedBundle t = trivial_bundle(z4, catalog::scalars(1));
  const UnitaryMultiplierFamily lr =
      family_over_subgroup(z4, q.normal(), {left_regular(z4, 0), left_regular(z4, 2)});
  const AbstractBundle ob = quotient_bundle(t, q, lr);
  CHECK(ob.dims == std::vector<std::size_t>{1, 1});
  CHECK(verify_fell_axioms(concretize(ob).bundle).pass);

  // N = {e}: the orbit bundle is A.
  const Quotient id(z4, Subgroup::trivial());
  const UnitaryMultiplierFamily triv = family_over_subgroup(z4, Subgroup::trivial(), {identity(4)});
  const ConcreteBundle same = concretize(quotient_bundle(t, id, triv));
  CHECK(same.bundle.section_dim() == 4);

  // A family that is not unitary is rejected.
  const UnitaryMultiplierFamily bad =
      family_over_subgroup(z4, q.normal(), {left_regular(z4, 0), Matrix(2.0 * left_regular(z4, 2))});
  CHECK_THROWS_AS(quotient_bundle(t, q, bad), Error);
}

TEST_CASE("C*-identity on fiber elements") {
  const TwistedAction t = catalog::s3_matrix_action(true);
  const ConcreteBundle c = concretize(twisted_semidirect_bundle(t));
  CHECK(verify_fell_axioms(c.bundle).pass);
  for (const auto& a : all_fiber_elements(c.bundle))
    CHECK(oracle::op_norm(a.adjoint() * a) == doctest::Approx(std::pow(oracle::op_norm(a), 2)).epsilon(1e-8));
}
