#include "fellbundle/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fell::catalog {

Matrix pauli_x() {
  Matrix x = Matrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  return x;
}

Matrix pauli_z() {
  Matrix z = Matrix::Identity(2, 2);
  z(1, 1) = -1.0;
  return z;
}

GradedBundle pauli_bundle() {
  const std::vector<Matrix> e{identity(2)}, one{pauli_x()};
  return GradedBundle(cyclic_group(2), 2, {orthonormalize(e, std::size_t{2}), orthonormalize(one, std::size_t{2})});
}

MatrixSubspace scalars(std::size_t n) {
  const std::vector<Matrix> span{identity(n)};
  return orthonormalize(span, n);
}

MatrixSubspace full_matrix_algebra(std::size_t n) {
  std::vector<Matrix> span;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) span.push_back(matrix_unit(n, i, j));
  return orthonormalize(span, n);
}

MatrixSubspace diagonal_algebra(std::size_t n) {
  std::vector<Matrix> span;
  for (std::size_t i = 0; i < n; ++i) span.push_back(matrix_unit(n, i, i));
  return orthonormalize(span, n);
}

std::vector<std::size_t> permutation_of(std::size_t m, Element s) {
  std::vector<std::size_t> p(m);
  std::iota(p.begin(), p.end(), std::size_t{0});
  for (Element i = 0; i < s; ++i) std::next_permutation(p.begin(), p.end());
  return p;
}

Matrix permutation_matrix(const std::vector<std::size_t>& sigma) {
  const auto n = static_cast<Eigen::Index>(sigma.size());
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index x = 0; x < n; ++x) m(static_cast<Eigen::Index>(sigma[static_cast<std::size_t>(x)]), x) = 1.0;
  return m;
}

std::vector<Matrix> s3_standard_representation() {
  // Orthonormal basis of the sum-zero vectors in C^3.
  Matrix v(3, 2);
  v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(6.0), -1.0 / std::sqrt(2.0), 1.0 / std::sqrt(6.0), 0.0,
      -2.0 / std::sqrt(6.0);
  std::vector<Matrix> rho;
  for (Element s = 0; s < 6; ++s) rho.push_back(v.adjoint() * permutation_matrix(permutation_of(3, s)) * v);
  return rho;
}

Subgroup s3_alternating() {
  const FiniteGroup g = symmetric_group(3);
  std::vector<Element> even;
  for (Element s = 0; s < g.order(); ++s) {
    const auto p = permutation_of(3, s);
    std::size_t inversions = 0;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i + 1; j < 3; ++j) inversions += p[i] > p[j];
    if (inversions % 2 == 0) even.push_back(s);
  }
  return make_normal_subgroup(g, even);
}

TwistedAction z4_scalar_twist(Complex tau2) {
  const FiniteGroup g = cyclic_group(4);
  const std::vector<Matrix> trivial(4, identity(1));
  Matrix t2 = identity(1);
  t2(0, 0) = tau2;
  return inner_twisted_action(scalars(1), g, trivial, make_normal_subgroup(g, {0, 2}), {identity(1), t2});
}

TwistedAction swap_action() {
  return inner_twisted_action(diagonal_algebra(2), cyclic_group(2), {identity(2), pauli_x()}, Subgroup::trivial(),
                              {});
}

TwistedAction s3_matrix_action(bool twisted) {
  const FiniteGroup g = symmetric_group(3);
  const auto rho = s3_standard_representation();
  if (!twisted) return inner_twisted_action(full_matrix_algebra(2), g, rho, Subgroup::trivial(), {});
  const Subgroup n = s3_alternating();
  std::vector<Matrix> tau;
  for (Element m : n.members()) tau.push_back(rho[m]);
  return inner_twisted_action(full_matrix_algebra(2), g, rho, n, tau);
}

}  // namespace fell::catalog
