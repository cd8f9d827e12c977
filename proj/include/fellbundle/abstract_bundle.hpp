#pragma once

#include <vector>

#include "fellbundle/bundle.hpp"

namespace fell {

/// A Fell bundle given by structure constants, before it has a matrix
/// realization. Fiber s is C^{dims[s]} with basis e_{s,0..dims[s]-1}.
struct AbstractBundle {
  FiniteGroup group = cyclic_group(1);
  std::vector<std::size_t> dims;
  /// product[s * |G| + t] is dims[st] x (dims[s] * dims[t]); column i*dims[t]+j
  /// holds the coordinates of e_{s,i} e_{t,j}.
  std::vector<Matrix> product;
  /// involution[s] is dims[s^-1] x dims[s]; (x)^* = involution[s] * conj(x).
  std::vector<Matrix> involution;
  /// Positive faithful functional on fiber e: phi(e_{e,i}).
  Vector functional;

  Vector multiply(Element s, const Vector& x, Element t, const Vector& y) const;
  Vector adjoint(Element s, const Vector& x) const;
  std::size_t section_dim() const;
};

struct AbstractCheck {
  bool pass = true;
  double associativity = 0.0;
  double involution = 0.0;
  double antimultiplicative = 0.0;
};

/// Associativity on basis triples, x** = x and (xy)* = y*x*.
AbstractCheck check_abstract_bundle(const AbstractBundle& b, double tol = kDefaultTol);

/// Structure constants of a graded matrix bundle in its orthonormal fiber
/// bases, with the trace as functional.
AbstractBundle abstract_from(const GradedBundle& a);

/// The left regular representation of the section space with inner product
/// <x, y> = phi(E(x^* y)), written in an orthonormal basis.
struct ConcreteBundle {
  GradedBundle bundle;
  /// images[s][i]: the matrix representing e_{s,i}.
  std::vector<std::vector<Matrix>> images;

  Matrix image(Element s, const Vector& coords) const;
  /// Inverse of image() on fiber s (least squares against the generator images).
  Vector coordinates(Element s, const Matrix& m) const;
};

/// Throws DegenerateFunctional when the section inner product is not
/// positive definite.
ConcreteBundle concretize(const AbstractBundle& b, double tol = kDefaultTol);

}  // namespace fell
