#include "fellbundle/cross_sectional.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "fellbundle/error.hpp"

namespace fell {

namespace {

Vector flat(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

Matrix unflat(const Vector& v, Eigen::Index n) { return Eigen::Map<const Matrix>(v.data(), n, n); }

/// Generator pairs to test: all of them when few, otherwise a fixed random sample.
std::vector<std::pair<std::size_t, std::size_t>> pair_sample(std::size_t count, std::size_t limit,
                                                             std::uint64_t seed) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (count * count <= limit) {
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t j = 0; j < count; ++j) out.emplace_back(i, j);
    return out;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, count - 1);
  for (std::size_t k = 0; k < limit; ++k) out.emplace_back(pick(rng), pick(rng));
  return out;
}

struct Generator {
  Element s;
  std::size_t i;
};

std::vector<Generator> fiber_generators(const GradedBundle& a) {
  std::vector<Generator> gens;
  for (Element s = 0; s < a.group().order(); ++s)
    for (std::size_t i = 0; i < a.fiber(s).dim(); ++i) gens.push_back({s, i});
  return gens;
}

}  // namespace

SectionAlgebra::SectionAlgebra(GradedBundle bundle, double tol) : bundle_(std::move(bundle)) {
  const AxiomReport report = verify_fell_axioms(bundle_, tol);
  if (!report.pass) {
    const auto& v = report.violations.front();
    throw Error(Errc::AxiomViolation, "bundle fails " + v.axiom + " at (" + std::to_string(v.s) + ", " +
                                          std::to_string(v.t) + ")");
  }
  const FiniteGroup& g = bundle_.group();
  const auto n = static_cast<Eigen::Index>(bundle_.ambient_dim());
  offset_.assign(g.order() + 1, 0);
  std::vector<Matrix> all;
  for (Element s = 0; s < g.order(); ++s) {
    offset_[s + 1] = offset_[s] + bundle_.fiber(s).dim();
    for (const auto& b : bundle_.fiber(s).basis()) all.push_back(b);
  }
  total_ = orthonormalize(all, bundle_.ambient_dim(), tol);
  const auto d = static_cast<Eigen::Index>(offset_.back());
  Matrix f(n * n, d);
  for (Eigen::Index i = 0; i < d; ++i) f.col(i) = flat(all[static_cast<std::size_t>(i)]);
  const Matrix gram = f.adjoint() * f;
  solver_ = gram.ldlt().solve(Matrix(f.adjoint()));

  const Matrix& t = total_.flattened();
  const Matrix coeff = solver_ * t;
  for (Element s = 0; s < g.order(); ++s) {
    const auto off = static_cast<Eigen::Index>(offset_[s]);
    const auto len = static_cast<Eigen::Index>(bundle_.fiber(s).dim());
    if (len == 0 || d == 0) {
      projections_.push_back(Matrix::Zero(static_cast<Eigen::Index>(total_.dim()),
                                          static_cast<Eigen::Index>(total_.dim())));
      continue;
    }
    projections_.push_back(t.adjoint() * f.middleCols(off, len) * coeff.middleRows(off, len));
  }
}

Vector SectionAlgebra::fiber_coefficients(const Matrix& a) const {
  if (solver_.rows() == 0) return Vector(0);
  return solver_ * flat(a);
}

Matrix SectionAlgebra::component(Element s, const Matrix& a) const {
  const auto n = static_cast<Eigen::Index>(bundle_.ambient_dim());
  const MatrixSubspace& fiber = bundle_.fiber(s);
  if (fiber.dim() == 0) return Matrix::Zero(n, n);
  const Vector c = fiber_coefficients(a).segment(static_cast<Eigen::Index>(offset_[s]),
                                                 static_cast<Eigen::Index>(fiber.dim()));
  return unflat(fiber.flattened() * c, n);
}

SectionAlgebra section_algebra(const GradedBundle& a, double tol) { return SectionAlgebra(a, tol); }

Matrix conditional_expectation(const SectionAlgebra& s, const Matrix& a, double tol) {
  const auto n = static_cast<Eigen::Index>(s.total().ambient_dim());
  if (a.rows() != n || a.cols() != n || !s.total().contains(a, tol))
    throw Error(Errc::NotInAlgebra, "matrix is not in the section algebra");
  return s.component(FiniteGroup::identity(), a);
}

// ---------------------------------------------------------------------------

CrossedProduct::CrossedProduct(const GradedBundle& a, double tol)
    : section_(a, tol), base_ambient_(a.ambient_dim()), ambient_(a.ambient_dim() * a.group().order()) {
  const FiniteGroup& g = a.group();
  std::vector<Matrix> all;
  for (Element s = 0; s < g.order(); ++s)
    for (Element t = 0; t < g.order(); ++t)
      for (const auto& x : a.fiber(s).basis()) all.push_back(embed(s, t, x));
  algebra_ = orthonormalize(all, ambient_, tol);
}

Matrix CrossedProduct::embed(Element s, Element t, const Matrix& a) const {
  const FiniteGroup& g = group();
  return kron(a, matrix_unit(g.order(), g.mul(s, t), t));
}

MatrixSubspace CrossedProduct::fiber_at(Element s, Element t) const {
  std::vector<Matrix> images;
  for (const auto& x : section_.bundle().fiber(s).basis()) images.push_back(embed(s, t, x));
  return orthonormalize(images, ambient_);
}

Matrix CrossedProduct::jA(const Matrix& a) const {
  const FiniteGroup& g = group();
  const auto n = static_cast<Eigen::Index>(ambient_);
  Matrix out = Matrix::Zero(n, n);
  for (Element s = 0; s < g.order(); ++s) out += kron(section_.component(s, a), left_regular(g, s));
  return out;
}

Matrix CrossedProduct::jG(Element t) const {
  return kron(identity(base_ambient_), matrix_unit(group().order(), t, t));
}

Matrix CrossedProduct::dual_unitary(Element r) const {
  return kron(identity(base_ambient_), right_regular(group(), r));
}

Matrix CrossedProduct::dual_action(Element r, const Matrix& x) const {
  const Matrix w = dual_unitary(r);
  return w * x * w.adjoint();
}

CrossedProduct crossed_product(const GradedBundle& a, double tol) { return CrossedProduct(a, tol); }

CrossedProductCheck verify_crossed_product(const CrossedProduct& x, double tol) {
  CrossedProductCheck check;
  const GradedBundle& a = x.section().bundle();
  const FiniteGroup& g = a.group();
  check.dimension = x.algebra().dim();
  check.expected_dimension = g.order() * a.section_dim();

  const auto gens = fiber_generators(a);
  // Generator (a_s, t) is gens[k / |G|] at position t = k % |G|.
  const std::size_t count = gens.size() * g.order();
  const auto basis_of = [&](std::size_t k) -> std::pair<Generator, Element> {
    return {gens[k / g.order()], k % g.order()};
  };
  const std::size_t limit = x.ambient_dim() <= 64 ? 40000 : 400;
  for (const auto& [p, q] : pair_sample(count, limit, 17)) {
    const auto [gx, t] = basis_of(p);
    const auto [gy, v] = basis_of(q);
    const Matrix& xa = a.fiber(gx.s)[gx.i];
    const Matrix& ya = a.fiber(gy.s)[gy.i];
    const Matrix prod = x.embed(gx.s, t, xa) * x.embed(gy.s, v, ya);
    const Matrix expected = t == g.mul(gy.s, v) ? x.embed(g.mul(gx.s, gy.s), v, Matrix(xa * ya))
                                                : Matrix::Zero(prod.rows(), prod.cols());
    check.groupoid = std::max(check.groupoid, (prod - expected).norm());
  }
  for (std::size_t k = 0; k < count; ++k) {
    const auto [gx, t] = basis_of(k);
    const Matrix& xa = a.fiber(gx.s)[gx.i];
    const Matrix image = x.embed(gx.s, t, xa);
    const Matrix star = x.embed(g.inv(gx.s), g.mul(gx.s, t), Matrix(xa.adjoint()));
    check.groupoid = std::max(check.groupoid, (Matrix(image.adjoint()) - star).norm());
    check.isometry = std::max(check.isometry, std::abs(op_norm(image) - op_norm(xa)));
    const Matrix ja = x.jA(xa);
    check.covariance = std::max(check.covariance, (ja * x.jG(t) - x.jG(g.mul(gx.s, t)) * ja).norm());
  }
  // Dual action: every generator for each r when small, otherwise the first few generators.
  const std::size_t dual_count = x.ambient_dim() <= 64 ? count : std::min<std::size_t>(count, 24);
  for (Element r = 0; r < g.order(); ++r) {
    for (std::size_t k = 0; k < dual_count; ++k) {
      const auto [gx, t] = basis_of(k);
      const Matrix& xa = a.fiber(gx.s)[gx.i];
      const Matrix moved = x.dual_action(r, x.embed(gx.s, t, xa));
      const Matrix expected = x.embed(gx.s, g.mul(t, g.inv(r)), xa);
      check.dual_action = std::max(check.dual_action, (moved - expected).norm());
    }
    for (Element r2 = 0; r2 < g.order(); ++r2)
      check.dual_action = std::max(
          check.dual_action, (x.dual_unitary(r) * x.dual_unitary(r2) - x.dual_unitary(g.mul(r, r2))).norm());
  }
  check.pass = check.dimension == check.expected_dimension && check.groupoid <= tol &&
               check.isometry <= std::max(tol, 1e-10) && check.covariance <= tol && check.dual_action <= tol;
  return check;
}

// ---------------------------------------------------------------------------

CovariantPairReport verify_covariant_pair(const SectionAlgebra& sa, const FiberMap& pi,
                                          const std::vector<Matrix>& mu, double tol) {
  CovariantPairReport report;
  const GradedBundle& a = sa.bundle();
  const FiniteGroup& g = a.group();
  const auto fail = [&](double residual, const std::string& what) {
    report.residual = std::max(report.residual, residual);
    if (report.covariant) report.failure = what;
    report.covariant = false;
  };

  if (mu.size() != g.order()) throw Error(Errc::ProjectionsNotResolving, "need one projection per group element");
  const Eigen::Index m = mu.front().rows();
  for (const auto& p : mu) {
    if (p.rows() != m || p.cols() != m) throw Error(Errc::ProjectionsNotResolving, "projections differ in shape");
    if ((p * p - p).norm() > tol * std::max(1.0, p.norm()) || (p - p.adjoint()).norm() > tol)
      throw Error(Errc::ProjectionsNotResolving, "mu(t) is not a projection");
  }
  if (pi.images.size() != g.order()) throw Error(Errc::NotAHomomorphism, "pi must be given on every fiber");
  for (Element s = 0; s < g.order(); ++s) {
    if (pi.images[s].size() != a.fiber(s).dim()) throw Error(Errc::NotAHomomorphism, "pi has the wrong fiber size");
    for (const auto& img : pi.images[s])
      if (img.rows() != m || img.cols() != m) throw Error(Errc::NotAHomomorphism, "pi and mu act on different spaces");
  }

  // pi must be a nondegenerate *-homomorphism on the section algebra.
  const auto unit = algebra_unit(a.fiber(FiniteGroup::identity()), tol);
  const Matrix one = Matrix::Identity(m, m);
  if (!unit || (pi.apply(a, FiniteGroup::identity(), *unit) - one).norm() > tol * std::max<double>(1.0, std::sqrt(m)))
    throw Error(Errc::NotAHomomorphism, "pi is degenerate");
  const auto gens = fiber_generators(a);
  for (const auto& [p, q] : pair_sample(gens.size(), 40000, 23)) {
    const Generator gx = gens[p], gy = gens[q];
    const Matrix& xa = a.fiber(gx.s)[gx.i];
    const Matrix& ya = a.fiber(gy.s)[gy.i];
    const double r = (pi.images[gx.s][gx.i] * pi.images[gy.s][gy.i] -
                      pi.apply(a, g.mul(gx.s, gy.s), Matrix(xa * ya))).norm();
    if (r > tol * std::max(1.0, xa.norm() * ya.norm()))
      throw Error(Errc::NotAHomomorphism, "pi is not multiplicative");
  }
  for (const auto& gx : gens) {
    const Matrix& xa = a.fiber(gx.s)[gx.i];
    if ((pi.apply(a, g.inv(gx.s), Matrix(xa.adjoint())) - pi.images[gx.s][gx.i].adjoint()).norm() > tol)
      throw Error(Errc::NotAHomomorphism, "pi does not preserve adjoints");
  }

  Matrix sum = Matrix::Zero(m, m);
  for (Element t = 0; t < g.order(); ++t) {
    sum += mu[t];
    for (Element u = t + 1; u < g.order(); ++u) {
      const double r = (mu[t] * mu[u]).norm();
      if (r > tol) fail(r, "projections are not pairwise orthogonal");
    }
  }
  if ((sum - one).norm() > tol) fail((sum - one).norm(), "projections do not sum to the identity");
  if (!report.covariant) {
    report.integrated_homomorphism = false;
    return report;
  }

  for (const auto& gx : gens)
    for (Element t = 0; t < g.order(); ++t) {
      const Matrix& img = pi.images[gx.s][gx.i];
      const double r = (img * mu[t] - mu[g.mul(gx.s, t)] * img).norm();
      if (r > tol) fail(r, "pi(a_s) mu(t) != mu(st) pi(a_s)");
    }
  if (!report.covariant) {
    report.integrated_homomorphism = false;
    return report;
  }

  // The integrated form (a_s, t) ↦ pi(a_s) mu(t) on crossed-product generators.
  const std::size_t count = gens.size() * g.order();
  const auto rho = [&](std::size_t k) -> Matrix {
    const Generator gx = gens[k / g.order()];
    return pi.images[gx.s][gx.i] * mu[k % g.order()];
  };
  for (const auto& [p, q] : pair_sample(count, 40000, 29)) {
    const Generator gx = gens[p / g.order()], gy = gens[q / g.order()];
    const Element t = p % g.order(), v = q % g.order();
    const Matrix prod = rho(p) * rho(q);
    Matrix expected = Matrix::Zero(m, m);
    if (t == g.mul(gy.s, v))
      expected = pi.apply(a, g.mul(gx.s, gy.s), Matrix(a.fiber(gx.s)[gx.i] * a.fiber(gy.s)[gy.i])) * mu[v];
    const double r = (prod - expected).norm();
    report.residual = std::max(report.residual, r);
    if (r > tol) report.integrated_homomorphism = false;
  }
  for (std::size_t k = 0; k < count; ++k) {
    const Generator gx = gens[k / g.order()];
    const Element t = k % g.order();
    const Matrix star = pi.apply(a, g.inv(gx.s), Matrix(a.fiber(gx.s)[gx.i].adjoint())) * mu[g.mul(gx.s, t)];
    const double r = (Matrix(rho(k).adjoint()) - star).norm();
    report.residual = std::max(report.residual, r);
    if (r > tol) report.integrated_homomorphism = false;
  }
  if (!report.integrated_homomorphism) report.failure = "integrated form is not a *-homomorphism";
  return report;
}

}  // namespace fell
