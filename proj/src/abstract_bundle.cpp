#include "fellbundle/abstract_bundle.hpp"

#include <algorithm>
#include <cmath>

#include "fellbundle/error.hpp"

namespace fell {

namespace {

Vector unit_vector(std::size_t dim, std::size_t i) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(i)) = 1.0;
  return v;
}

}  // namespace

Vector AbstractBundle::multiply(Element s, const Vector& x, Element t, const Vector& y) const {
  const Matrix& c = product[s * group.order() + t];
  Vector xy(x.size() * y.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) xy.segment(i * y.size(), y.size()) = x(i) * y;
  if (xy.size() == 0) return Vector::Zero(c.rows());
  return c * xy;
}

Vector AbstractBundle::adjoint(Element s, const Vector& x) const {
  return involution[s] * x.conjugate();
}

std::size_t AbstractBundle::section_dim() const {
  std::size_t d = 0;
  for (auto k : dims) d += k;
  return d;
}

AbstractCheck check_abstract_bundle(const AbstractBundle& b, double tol) {
  AbstractCheck check;
  const FiniteGroup& g = b.group;
  for (Element s = 0; s < g.order(); ++s)
    for (Element t = 0; t < g.order(); ++t)
      for (Element u = 0; u < g.order(); ++u)
        for (std::size_t i = 0; i < b.dims[s]; ++i)
          for (std::size_t j = 0; j < b.dims[t]; ++j)
            for (std::size_t k = 0; k < b.dims[u]; ++k) {
              const Vector x = unit_vector(b.dims[s], i);
              const Vector y = unit_vector(b.dims[t], j);
              const Vector z = unit_vector(b.dims[u], k);
              const Vector left = b.multiply(g.mul(s, t), b.multiply(s, x, t, y), u, z);
              const Vector right = b.multiply(s, x, g.mul(t, u), b.multiply(t, y, u, z));
              check.associativity = std::max(check.associativity, (left - right).norm());
            }
  for (Element s = 0; s < g.order(); ++s)
    for (std::size_t i = 0; i < b.dims[s]; ++i) {
      const Vector x = unit_vector(b.dims[s], i);
      const Vector back = b.adjoint(g.inv(s), b.adjoint(s, x));
      check.involution = std::max(check.involution, (back - x).norm());
      for (Element t = 0; t < g.order(); ++t)
        for (std::size_t j = 0; j < b.dims[t]; ++j) {
          const Vector y = unit_vector(b.dims[t], j);
          const Vector lhs = b.adjoint(g.mul(s, t), b.multiply(s, x, t, y));
          const Vector rhs = b.multiply(g.inv(t), b.adjoint(t, y), g.inv(s), b.adjoint(s, x));
          check.antimultiplicative = std::max(check.antimultiplicative, (lhs - rhs).norm());
        }
    }
  check.pass = check.associativity <= tol && check.involution <= tol && check.antimultiplicative <= tol;
  return check;
}

AbstractBundle abstract_from(const GradedBundle& a) {
  const FiniteGroup& g = a.group();
  AbstractBundle b;
  b.group = g;
  for (const auto& f : a.fibers()) b.dims.push_back(f.dim());
  b.product.resize(g.order() * g.order());
  for (Element s = 0; s < g.order(); ++s)
    for (Element t = 0; t < g.order(); ++t) {
      const MatrixSubspace& target = a.fiber(g.mul(s, t));
      Matrix c(static_cast<Eigen::Index>(target.dim()),
               static_cast<Eigen::Index>(b.dims[s] * b.dims[t]));
      for (std::size_t i = 0; i < b.dims[s]; ++i)
        for (std::size_t j = 0; j < b.dims[t]; ++j)
          c.col(static_cast<Eigen::Index>(i * b.dims[t] + j)) =
              target.coordinates(Matrix(a.fiber(s)[i] * a.fiber(t)[j]));
      b.product[s * g.order() + t] = std::move(c);
    }
  for (Element s = 0; s < g.order(); ++s) {
    const MatrixSubspace& target = a.fiber(g.inv(s));
    Matrix j(static_cast<Eigen::Index>(target.dim()), static_cast<Eigen::Index>(b.dims[s]));
    for (std::size_t i = 0; i < b.dims[s]; ++i)
      j.col(static_cast<Eigen::Index>(i)) = target.coordinates(Matrix(a.fiber(s)[i].adjoint()));
    b.involution.push_back(std::move(j));
  }
  const MatrixSubspace& unit_fiber = a.fiber(FiniteGroup::identity());
  b.functional.resize(static_cast<Eigen::Index>(unit_fiber.dim()));
  for (std::size_t i = 0; i < unit_fiber.dim(); ++i)
    b.functional(static_cast<Eigen::Index>(i)) = unit_fiber[i].trace();
  return b;
}

// ---------------------------------------------------------------------------

Matrix ConcreteBundle::image(Element s, const Vector& coords) const {
  const auto n = static_cast<Eigen::Index>(bundle.ambient_dim());
  Matrix out = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < images[s].size(); ++i)
    out += coords(static_cast<Eigen::Index>(i)) * images[s][i];
  return out;
}

Vector ConcreteBundle::coordinates(Element s, const Matrix& m) const {
  const auto& img = images[s];
  const auto n2 = static_cast<Eigen::Index>(bundle.ambient_dim() * bundle.ambient_dim());
  Matrix cols(n2, static_cast<Eigen::Index>(img.size()));
  for (std::size_t i = 0; i < img.size(); ++i)
    cols.col(static_cast<Eigen::Index>(i)) = Eigen::Map<const Vector>(img[i].data(), n2);
  const Vector target = Eigen::Map<const Vector>(m.data(), n2);
  return cols.colPivHouseholderQr().solve(target);
}

ConcreteBundle concretize(const AbstractBundle& b, double tol) {
  const FiniteGroup& g = b.group;
  std::vector<std::size_t> offset(g.order() + 1, 0);
  for (Element s = 0; s < g.order(); ++s) offset[s + 1] = offset[s] + b.dims[s];
  const auto d = static_cast<Eigen::Index>(offset.back());

  // <x, y> = phi(E(x^* y)) pairs only equal degrees, so the Gram matrix is block diagonal.
  Matrix gram = Matrix::Zero(d, d);
  for (Element s = 0; s < g.order(); ++s)
    for (std::size_t i = 0; i < b.dims[s]; ++i) {
      const Vector xi_star = b.adjoint(s, unit_vector(b.dims[s], i));
      for (std::size_t j = 0; j < b.dims[s]; ++j) {
        const Vector e = b.multiply(g.inv(s), xi_star, s, unit_vector(b.dims[s], j));
        gram(static_cast<Eigen::Index>(offset[s] + i), static_cast<Eigen::Index>(offset[s] + j)) =
            (b.functional.transpose() * e)(0);
      }
    }
  if (d > 0) {
    const double scale = std::max(1.0, gram.norm());
    if ((gram - gram.adjoint()).norm() > tol * scale)
      throw Error(Errc::DegenerateFunctional, "section inner product is not Hermitian");
    gram = 0.5 * (gram + gram.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <= 1e-10 * es.eigenvalues().maxCoeff())
      throw Error(Errc::DegenerateFunctional, "section inner product is not positive definite");
  }

  const Matrix r = d > 0 ? Matrix(gram.llt().matrixU()) : Matrix(0, 0);
  ConcreteBundle out{GradedBundle(g, static_cast<std::size_t>(d), std::vector<MatrixSubspace>(g.order())), {}};
  out.images.resize(g.order());
  std::vector<MatrixSubspace> fibers;
  for (Element s = 0; s < g.order(); ++s) {
    for (std::size_t i = 0; i < b.dims[s]; ++i) {
      const Vector x = unit_vector(b.dims[s], i);
      Matrix left = Matrix::Zero(d, d);
      for (Element t = 0; t < g.order(); ++t) {
        const Element st = g.mul(s, t);
        for (std::size_t j = 0; j < b.dims[t]; ++j)
          left.block(static_cast<Eigen::Index>(offset[st]), static_cast<Eigen::Index>(offset[t] + j),
                     static_cast<Eigen::Index>(b.dims[st]), 1) =
              b.multiply(s, x, t, unit_vector(b.dims[t], j));
      }
      // Orthonormal coordinates y = R x turn the *-structure into the matrix adjoint.
      const Matrix rl = r * left;
      const Matrix image = r.triangularView<Eigen::Upper>().solve<Eigen::OnTheRight>(rl);
      out.images[s].push_back(image);
    }
    MatrixSubspace fiber = orthonormalize(out.images[s], static_cast<std::size_t>(d), 1e-8);
    if (fiber.dim() != b.dims[s])
      throw Error(Errc::DegenerateFunctional, "left regular representation is not faithful on a fiber");
    fibers.push_back(std::move(fiber));
  }
  out.bundle = GradedBundle(g, static_cast<std::size_t>(d), std::move(fibers));
  return out;
}

}  // namespace fell
