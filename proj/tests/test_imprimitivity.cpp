#include "doctest.h"

#include "fellbundle/catalog.hpp"
#include "fellbundle/error.hpp"
#include "fellbundle/imprimitivity.hpp"
#include "oracles.hpp"

using namespace fell;

namespace {

Quotient z4_mod_2() {
  const FiniteGroup z4 = cyclic_group(4);
  return Quotient(z4, make_normal_subgroup(z4, {0, 2}));
}

Imprimitivity pauli_z4() { return Imprimitivity(catalog::pauli_bundle(), z4_mod_2()); }

Imprimitivity s3_a3() {
  const ConcreteBundle d = concretize(twisted_semidirect_bundle(catalog::s3_matrix_action(true)));
  return Imprimitivity(d.bundle, Quotient(symmetric_group(3), catalog::s3_alternating()));
}

template <int K>
SparseElement<K> single(Element a, Element b, const Matrix& m) {
  SparseElement<K> e;
  e.add({a, b}, m);
  return e;
}

double min_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(0.5 * (m + m.adjoint())));
  return es.eigenvalues().minCoeff();
}

}  // namespace

TEST_CASE("actions and inner products on generators") {
  const Imprimitivity imp = pauli_z4();
  const Matrix i2 = identity(2), x = catalog::pauli_x();

  // x = (I at coset 0, t = 1), c = (X over coset 1, l = 0): 0^-1 q(1) = 1 = 1 + 0.
  const BimoduleElement xa = single<0>(0, 1, i2);
  const BimoduleElement r = imp.right_action(xa, single<2>(1, 0, x));
  REQUIRE(r.terms.size() == 1);
  CHECK(r.terms.begin()->first == std::pair<Element, Element>{1, 1});
  CHECK((r.terms.begin()->second - x).norm() == 0.0);
  CHECK(imp.right_action(xa, single<2>(1, 1, x)).terms.empty());

  // b = (X, s = 1, r = 1) acts on x at t = 1 and lands at (q(1) + 0, 1 + 1).
  const BimoduleElement l = imp.left_action(single<1>(1, 1, x), xa);
  REQUIRE(l.terms.size() == 1);
  CHECK(l.terms.begin()->first == std::pair<Element, Element>{1, 2});
  CHECK(imp.left_action(single<1>(1, 0, x), xa).terms.empty());

  const BimoduleElement ya = single<0>(1, 1, x);
  const AlgebraElementC ri = imp.rinner(xa, ya);
  REQUIRE(ri.terms.size() == 1);
  CHECK(ri.terms.begin()->first == std::pair<Element, Element>{1, 0});
  CHECK(imp.rinner(xa, single<0>(1, 2, x)).terms.empty());

  // linner((I, 0, 1), (X, 1, 2)): t v^-1 = 3 and k u^-1 = 1 = q(3).
  const AlgebraElementB li = imp.linner(xa, single<0>(1, 2, x));
  REQUIRE(li.terms.size() == 1);
  CHECK(li.terms.begin()->first == std::pair<Element, Element>{3, 2});
  CHECK(imp.linner(xa, single<0>(0, 2, i2)).terms.empty());

  CHECK(distance(imp.gamma(0, xa), xa) == 0.0);
  CHECK_THROWS_AS(imp.right_action(single<0>(0, 1, x), single<2>(1, 0, x)), Error);
}

TEST_CASE("unit elements act trivially") {
  for (const Imprimitivity& imp : {pauli_z4(), s3_a3()}) {
    const UnitElements u = unit_elements(imp);
    for (const auto& x : imp.x_generators()) {
      CHECK(distance(imp.right_action(x, u.unit_c), x) < 1e-10);
      CHECK(distance(imp.left_action(u.unit_b, x), x) < 1e-10);
    }
  }
}

TEST_CASE("realizations are faithful *-representations") {
  for (const Imprimitivity& imp : {pauli_z4(), s3_a3()}) {
    const auto bs = imp.b_generators();
    const auto cs = imp.c_generators();
    std::vector<Matrix> bm, cm;
    for (const auto& b : bs) bm.push_back(imp.realize(b));
    for (const auto& c : cs) cm.push_back(imp.realize(c));
    double worst = 0.0;
    for (std::size_t i = 0; i < bs.size(); ++i) {
      worst = std::max(worst, (imp.realize(imp.adjoint(bs[i])) - bm[i].adjoint()).norm());
      for (std::size_t j = 0; j < bs.size(); ++j)
        worst = std::max(worst, (imp.realize(imp.multiply(bs[i], bs[j])) - bm[i] * bm[j]).norm());
    }
    for (std::size_t i = 0; i < cs.size(); ++i)
      for (std::size_t j = 0; j < cs.size(); ++j)
        worst = std::max(worst, (imp.realize(imp.multiply(cs[i], cs[j])) - cm[i] * cm[j]).norm());
    CHECK(worst < 1e-10);
    CHECK(oracle::span_dim(bm) == imp.dim_b());
    CHECK(oracle::span_dim(cm) == imp.dim_c());
  }
}

TEST_CASE("inner products are positive") {
  const Imprimitivity imp = s3_a3();
  const auto xs = imp.x_generators();
  BimoduleElement sum;
  for (std::size_t i = 0; i < xs.size(); i += 3) sum += Complex(1.0, 0.5 * static_cast<double>(i)) * xs[i];
  for (const auto& x : {xs.front(), xs.back(), sum}) {
    CHECK(min_eigenvalue(imp.realize(imp.rinner(x, x))) >= -1e-8);
    CHECK(min_eigenvalue(imp.realize(imp.linner(x, x))) >= -1e-8);
  }
}

TEST_CASE("full imprimitivity suite") {
  for (const Imprimitivity& imp : {pauli_z4(), s3_a3()}) {
    const ImprimitivityReport r = verify_imprimitivity(imp, 1e-8);
    CHECK(r.pass);
    CHECK(r.items.size() == 9);
    CHECK(r.rank_b == imp.dim_b());
    CHECK(r.rank_c == imp.dim_c());
    CHECK(verify_equivariance(imp).pass);
  }
}

TEST_CASE("a corrupted involution breaks symmetry only") {
  const Imprimitivity imp(catalog::pauli_bundle(), z4_mod_2(), [](const Matrix& m) { return Matrix(2.0 * m.adjoint()); });
  const ImprimitivityReport r = verify_imprimitivity(imp, 1e-8);
  CHECK_FALSE(r.pass);
  CHECK_FALSE(r.item("(iii) inner products are symmetric").pass);
  CHECK(r.item("(i) bimodule").pass);
  CHECK(r.item("(ii) inner products are module maps").pass);
}

TEST_CASE("Morita reports") {
  const Imprimitivity imp = pauli_z4();
  const MoritaReport m = morita_report(imp, verify_imprimitivity(imp));
  CHECK(m.dim_c == 4);
  CHECK(m.dim_b == 16);
  CHECK(m.dim_x == 8);
  CHECK(m.blocks_b == 1);
  CHECK(m.blocks_c == 1);
  CHECK(m.equivalent);

  // D = C over the trivial group, G = Z/2.
  const Imprimitivity small(trivial_bundle(cyclic_group(1), catalog::scalars(1)),
                            Quotient(cyclic_group(2), Subgroup::whole(cyclic_group(2))));
  const MoritaReport ms = morita_report(small, verify_imprimitivity(small));
  CHECK(ms.dim_b == 4);
  CHECK(ms.dim_c == 1);
  CHECK(ms.blocks_b == 1);
  CHECK(ms.blocks_c == 1);

  // N = {e}: both sides are the same crossed product.
  const Imprimitivity same(catalog::pauli_bundle(), Quotient(cyclic_group(2), Subgroup::trivial()));
  const MoritaReport mn = morita_report(same, verify_imprimitivity(same));
  CHECK(mn.dim_b == mn.dim_c);
  CHECK(mn.blocks_b == mn.blocks_c);

  const Imprimitivity broken(catalog::pauli_bundle(), z4_mod_2(), [](const Matrix& m) { return Matrix(2.0 * m.adjoint()); });
  CHECK_THROWS_AS(morita_report(broken, verify_imprimitivity(broken)), Error);
}
