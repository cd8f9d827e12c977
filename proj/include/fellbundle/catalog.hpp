#pragma once

#include <vector>

#include "fellbundle/abstract_bundle.hpp"
#include "fellbundle/twisted.hpp"

namespace fell::catalog {

Matrix pauli_x();
Matrix pauli_z();

/// Z/2 graded as fiber(0) = span{I}, fiber(1) = span{X} in M_2.
GradedBundle pauli_bundle();

/// span{I_n}
MatrixSubspace scalars(std::size_t n);
/// All of M_n.
MatrixSubspace full_matrix_algebra(std::size_t n);
/// Diagonal matrices in M_n.
MatrixSubspace diagonal_algebra(std::size_t n);

/// The permutation of {0..m-1} behind element s of symmetric_group(m).
std::vector<std::size_t> permutation_of(std::size_t m, Element s);
/// e_x ↦ e_{σ(x)}
Matrix permutation_matrix(const std::vector<std::size_t>& sigma);
/// The 2-dimensional irreducible unitary representation of S_3.
std::vector<Matrix> s3_standard_representation();

/// The transposition swapping 0 and 1 in symmetric_group(3).
inline constexpr Element kS3Transposition = 2;
/// A_3 inside symmetric_group(3).
Subgroup s3_alternating();

/// B = C, G = Z/4, N = {0, 2}, alpha trivial, tau(2) = `tau2`.
TwistedAction z4_scalar_twist(Complex tau2);
/// Z/2 acting on the diagonal of M_2 by swapping the entries.
TwistedAction swap_action();
/// B = M_2, G = S_3, alpha = Ad rho; N = A_3 with tau = rho when `twisted`,
/// otherwise N = {e}.
TwistedAction s3_matrix_action(bool twisted);

}  // namespace fell::catalog
