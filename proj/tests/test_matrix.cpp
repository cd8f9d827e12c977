#include "doctest.h"

#include <random>

#include "fellbundle/abstract_bundle.hpp"
#include "fellbundle/catalog.hpp"
#include "fellbundle/error.hpp"
#include "fellbundle/matrix.hpp"
#include "oracles.hpp"

using namespace fell;

namespace {

MatrixSubspace span_of(std::vector<Matrix> mats, std::size_t n) { return orthonormalize(mats, n); }

}  // namespace

TEST_CASE("orthonormalize") {
  const Matrix i2 = identity(2), x = catalog::pauli_x();
  CHECK(span_of({i2, Matrix(2.0 * i2)}, 2).dim() == 1);
  const MatrixSubspace s = span_of({i2, x}, 2);
  REQUIRE(s.dim() == 2);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) CHECK(std::abs(hs_inner(s[a], s[b]) - Complex(a == b)) < 1e-12);
  CHECK(span_of({}, 2).dim() == 0);
  CHECK_THROWS_AS(span_of({identity(2), identity(3)}, 2), Error);
}

TEST_CASE("orthonormalize agrees with an SVD rank on random spans") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Matrix> gens;
    for (int i = 0; i < 4; ++i) gens.push_back(oracle::random_matrix(rng, 3));
    gens.push_back(Matrix(gens[0] + Complex(0, 2) * gens[1]));
    gens.push_back(Matrix(gens[2] - gens[3]));
    const MatrixSubspace s = orthonormalize(gens, std::size_t{3});
    CHECK(s.dim() == oracle::span_dim(gens));
    for (const auto& g : gens) CHECK(s.contains(g));
  }
}

TEST_CASE("membership") {
  const MatrixSubspace s = span_of({identity(2)}, 2);
  CHECK(s.contains(Matrix(3.0 * identity(2))));
  CHECK_FALSE(s.contains(catalog::pauli_x()));
  CHECK(s.contains(Matrix::Zero(2, 2)));
}

TEST_CASE("product spans") {
  const MatrixSubspace x = span_of({catalog::pauli_x()}, 2);
  CHECK(product_span(x, x).same_span(span_of({identity(2)}, 2)));
  CHECK(product_span(x, MatrixSubspace(2)).dim() == 0);
  const MatrixSubspace e12 = span_of({matrix_unit(2, 0, 1)}, 2), e21 = span_of({matrix_unit(2, 1, 0)}, 2);
  CHECK(product_span(e12, e21).same_span(span_of({matrix_unit(2, 0, 0)}, 2)));

  std::mt19937 rng(3);
  const MatrixSubspace a = span_of({oracle::random_matrix(rng, 2)}, 2), b = span_of({oracle::random_matrix(rng, 2)}, 2),
                       c = span_of({oracle::random_matrix(rng, 2)}, 2);
  CHECK(product_span(product_span(a, b), c).same_span(product_span(a, product_span(b, c)), 1e-8));
}

TEST_CASE("operator norm and positivity") {
  CHECK(op_norm(identity(2)) == doctest::Approx(1.0));
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 2.0;
  CHECK(op_norm(m) == doctest::Approx(2.0));
  std::mt19937 rng(11);
  for (int i = 0; i < 20; ++i) {
    const Matrix a = oracle::random_matrix(rng, 4);
    CHECK(op_norm(a) == doctest::Approx(oracle::op_norm(a)).epsilon(1e-10));
    CHECK(op_norm(a) == doctest::Approx(op_norm(a.adjoint())).epsilon(1e-10));
    CHECK(op_norm(a.adjoint() * a) == doctest::Approx(op_norm(a) * op_norm(a)).epsilon(1e-8));
    CHECK(is_psd(a.adjoint() * a));
  }
  CHECK(is_psd(identity(2)));
  CHECK_FALSE(is_psd(Matrix(-identity(2))));
}

TEST_CASE("Wedderburn block counts match an independent center solve") {
  CHECK(wedderburn_block_count(catalog::full_matrix_algebra(2)) == 1);
  CHECK(wedderburn_block_count(catalog::diagonal_algebra(2)) == 2);

  // Group algebra of S3 through the left regular representation; 3 conjugacy classes.
  const FiniteGroup s3 = symmetric_group(3);
  std::vector<Matrix> reg;
  for (Element s = 0; s < 6; ++s) reg.push_back(left_regular(s3, s));
  const MatrixSubspace cs3 = orthonormalize(reg, std::size_t{6});
  CHECK(oracle::center_dim(reg) == 3);
  CHECK(wedderburn_block_count(cs3) == 3);
  CHECK(wedderburn_block_sizes(cs3) == std::vector<std::size_t>{1, 1, 2});

  // M2 ⊕ C inside M3.
  std::vector<Matrix> mixed;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) mixed.push_back(matrix_unit(3, i, j));
  mixed.push_back(matrix_unit(3, 2, 2));
  CHECK(wedderburn_block_count(orthonormalize(mixed, std::size_t{3})) == oracle::center_dim(mixed));
  CHECK(minimal_central_projections(orthonormalize(mixed, std::size_t{3})).size() == 2);
}

TEST_CASE("algebra checks") {
  CHECK(is_star_algebra(catalog::full_matrix_algebra(3)));
  const MatrixSubspace upper = span_of({matrix_unit(2, 0, 1)}, 2);
  CHECK_FALSE(is_star_algebra(upper));
  CHECK_THROWS_AS(wedderburn_block_count(upper), Error);
  const auto unit = algebra_unit(span_of({matrix_unit(3, 0, 0), matrix_unit(3, 1, 1)}, 3));
  REQUIRE(unit);
  CHECK((*unit - (matrix_unit(3, 0, 0) + matrix_unit(3, 1, 1))).norm() < 1e-12);
}
