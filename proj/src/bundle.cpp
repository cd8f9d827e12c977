#include "fellbundle/bundle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "fellbundle/error.hpp"

namespace fell {

namespace {

double relative(double residual, double scale) { return residual / std::max(1.0, scale); }

void record(AxiomReport& report, const char* axiom, Element s, Element t, double residual) {
  report.pass = false;
  report.violations.push_back({axiom, s, t, residual});
}

Matrix random_combination(const MatrixSubspace& f, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Vector c(static_cast<Eigen::Index>(f.dim()));
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = Complex(normal(rng), normal(rng));
  return f.from_coordinates(c);
}

}  // namespace

GradedBundle::GradedBundle(FiniteGroup group, std::size_t ambient_dim,
                           std::vector<MatrixSubspace> fibers)
    : group_(std::move(group)), ambient_(ambient_dim), fibers_(std::move(fibers)) {
  if (fibers_.size() != group_.order())
    throw Error(Errc::DimensionMismatch, "need exactly one fiber per group element");
  for (auto& f : fibers_) {
    if (f.empty() && f.ambient_dim() != ambient_) f = MatrixSubspace(ambient_);
    if (f.ambient_dim() != ambient_)
      throw Error(Errc::DimensionMismatch, "fiber lives in a different ambient algebra");
  }
}

std::size_t GradedBundle::section_dim() const {
  std::size_t d = 0;
  for (const auto& f : fibers_) d += f.dim();
  return d;
}

bool AxiomReport::family_passed(const std::string& family) const {
  return std::none_of(violations.begin(), violations.end(),
                      [&](const AxiomViolation& v) { return v.axiom == family; });
}

AxiomReport verify_fell_axioms(const GradedBundle& a, double tol) {
  AxiomReport report;
  report.families = {kProductClosure, kAdjointSymmetry, kDirectSum, kUnitFiberSubalgebra, kCStarNorm};
  const FiniteGroup& g = a.group();
  const std::size_t order = g.order();

  for (Element s = 0; s < order; ++s)
    for (Element t = 0; t < order; ++t) {
      const MatrixSubspace& target = a.fiber(g.mul(s, t));
      double worst = 0.0;
      for (const auto& x : a.fiber(s).basis())
        for (const auto& y : a.fiber(t).basis()) {
          const Matrix xy = x * y;
          worst = std::max(worst, relative(target.residual(xy), xy.norm()));
        }
      if (worst > tol) record(report, kProductClosure, s, t, worst);
    }

  for (Element s = 0; s < order; ++s) {
    const MatrixSubspace& target = a.fiber(g.inv(s));
    double worst = a.fiber(s).dim() == target.dim() ? 0.0 : 1.0;
    for (const auto& x : a.fiber(s).basis())
      worst = std::max(worst, relative(target.residual(x.adjoint()), x.norm()));
    if (worst > tol) record(report, kAdjointSymmetry, s, g.inv(s), worst);
  }

  {
    // Joint independence: the Gram matrix of all fiber bases must be
    // nonsingular. The witness pair is the one with the largest overlap.
    std::vector<const Matrix*> all;
    for (const auto& f : a.fibers())
      for (const auto& b : f.basis()) all.push_back(&b);
    const auto d = static_cast<Eigen::Index>(all.size());
    if (d > 0) {
      Matrix gram(d, d);
      for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) gram(i, j) = hs_inner(*all[i], *all[j]);
      Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
      const double lowest = es.eigenvalues().minCoeff();
      if (lowest < std::sqrt(tol)) {
        double overlap = -1.0;
        Element ws = 0, wt = 0;
        for (Element s = 0; s < order; ++s)
          for (Element t = s + 1; t < order; ++t) {
            if (a.fiber(s).empty() || a.fiber(t).empty()) continue;
            const Matrix cross = a.fiber(s).flattened().adjoint() * a.fiber(t).flattened();
            const double o = op_norm(cross);
            if (o > overlap) overlap = o, ws = s, wt = t;
          }
        record(report, kDirectSum, ws, wt, 1.0 - lowest);
      }
    }
  }

  {
    const MatrixSubspace& unit_fiber = a.fiber(FiniteGroup::identity());
    if (!is_star_algebra(unit_fiber, tol) || !algebra_unit(unit_fiber, tol))
      record(report, kUnitFiberSubalgebra, 0, 0, 1.0);
  }

  std::mt19937_64 rng(7);
  for (Element s = 0; s < order; ++s) {
    std::vector<Matrix> samples = a.fiber(s).basis();
    if (!a.fiber(s).empty()) samples.push_back(random_combination(a.fiber(s), rng));
    double worst = 0.0;
    for (const auto& x : samples) {
      const double n = op_norm(x);
      worst = std::max(worst, relative(std::abs(op_norm(x.adjoint() * x) - n * n), n * n));
    }
    if (worst > tol) record(report, kCStarNorm, s, s, worst);
  }
  return report;
}

// ---------------------------------------------------------------------------

Matrix FiberMap::apply(const GradedBundle& source, Element s, const Matrix& a) const {
  const Vector c = source.fiber(s).coordinates(a);
  const auto& img = images.at(s);
  if (img.empty()) return Matrix();
  Matrix out = Matrix::Zero(img.front().rows(), img.front().cols());
  for (std::size_t i = 0; i < img.size(); ++i) out += c(static_cast<Eigen::Index>(i)) * img[i];
  return out;
}

FiberMap make_fiber_map(const GradedBundle& source,
                        const std::function<Matrix(Element, const Matrix&)>& phi) {
  FiberMap map;
  map.images.resize(source.group().order());
  for (Element s = 0; s < source.group().order(); ++s)
    for (const auto& b : source.fiber(s).basis()) map.images[s].push_back(phi(s, b));
  return map;
}

FiberMap identity_map(const GradedBundle& a) {
  return make_fiber_map(a, [](Element, const Matrix& m) { return m; });
}

IsomorphismReport verify_bundle_isomorphism(const GradedBundle& a, const GradedBundle& b,
                                            const FiberMap& phi, double tol) {
  if (!(a.group() == b.group())) throw Error(Errc::ShapeMismatch, "bundles over different groups");
  const FiniteGroup& g = a.group();
  if (phi.images.size() != g.order()) throw Error(Errc::ShapeMismatch, "one fiber map per element");
  const auto nb = static_cast<Eigen::Index>(b.ambient_dim());
  for (Element s = 0; s < g.order(); ++s) {
    if (phi.images[s].size() != a.fiber(s).dim())
      throw Error(Errc::ShapeMismatch, "fiber map is not defined on the whole fiber basis");
    for (const auto& m : phi.images[s])
      if (m.rows() != nb || m.cols() != nb)
        throw Error(Errc::ShapeMismatch, "fiber map image has the wrong shape");
  }

  IsomorphismReport report;
  auto note = [&](double r, const std::string& what) {
    if (r > report.residual) report.residual = r;
    if (r > tol && report.pass) {
      report.pass = false;
      report.failure = what;
    }
  };

  for (Element s = 0; s < g.order(); ++s) {
    if (a.fiber(s).dim() != b.fiber(s).dim()) {
      note(1.0, "fiber dimensions differ at " + std::to_string(s));
      continue;
    }
    for (const auto& m : phi.images[s])
      note(relative(b.fiber(s).residual(m), m.norm()), "image leaves the target fiber");
    if (orthonormalize(phi.images[s], b.ambient_dim(), 1e-8).dim() != a.fiber(s).dim())
      note(1.0, "fiber map is not injective at " + std::to_string(s));
  }
  if (!report.pass) return report;

  for (Element s = 0; s < g.order(); ++s)
    for (Element t = 0; t < g.order(); ++t) {
      const Element st = g.mul(s, t);
      for (std::size_t i = 0; i < a.fiber(s).dim(); ++i)
        for (std::size_t j = 0; j < a.fiber(t).dim(); ++j) {
          const Matrix lhs = phi.apply(a, st, Matrix(a.fiber(s)[i] * a.fiber(t)[j]));
          const Matrix rhs = phi.images[s][i] * phi.images[t][j];
          note(relative((lhs - rhs).norm(), rhs.norm()), "not multiplicative");
        }
    }

  for (Element s = 0; s < g.order(); ++s)
    for (std::size_t i = 0; i < a.fiber(s).dim(); ++i) {
      const Matrix lhs = phi.apply(a, g.inv(s), Matrix(a.fiber(s)[i].adjoint()));
      const Matrix rhs = phi.images[s][i].adjoint();
      note(relative((lhs - rhs).norm(), rhs.norm()), "does not preserve adjoints");
    }

  std::mt19937_64 rng(11);
  for (Element s = 0; s < g.order(); ++s) {
    std::vector<Matrix> samples = a.fiber(s).basis();
    if (!a.fiber(s).empty()) samples.push_back(random_combination(a.fiber(s), rng));
    for (const auto& x : samples) {
      const double na = op_norm(x);
      note(relative(std::abs(op_norm(phi.apply(a, s, x)) - na), na), "not isometric");
    }
  }
  return report;
}

// ---------------------------------------------------------------------------

GradedBundle trivial_bundle(const FiniteGroup& g, const MatrixSubspace& unit_algebra, double tol) {
  if (!is_star_algebra(unit_algebra, tol) || !algebra_unit(unit_algebra, tol))
    throw Error(Errc::NotAnAlgebra, "trivial bundle needs a unital *-algebra");
  const double scale = 1.0 / std::sqrt(static_cast<double>(g.order()));
  const std::size_t n = unit_algebra.ambient_dim() * g.order();
  std::vector<MatrixSubspace> fibers;
  for (Element s = 0; s < g.order(); ++s) {
    const Matrix lambda = left_regular(g, s);
    std::vector<Matrix> basis;
    for (const auto& u : unit_algebra.basis()) basis.push_back(scale * kron(u, lambda));
    fibers.push_back(orthonormalize(basis, n, tol));
  }
  return GradedBundle(g, n, std::move(fibers));
}

Matrix pullback_embed(const Quotient& q, Element s, const Matrix& d) {
  return kron(d, left_regular(q.parent(), s));
}

Matrix untensor(const Matrix& x, const Matrix& right_factor) {
  const Eigen::Index r = right_factor.rows();
  const Eigen::Index n = x.rows() / r;
  const Complex norm2 = hs_inner(right_factor, right_factor);
  Matrix d(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      d(i, j) = hs_inner(right_factor, Matrix(x.block(i * r, j * r, r, r))) / norm2;
  return d;
}

GradedBundle pullback(const GradedBundle& d, const Quotient& q, double tol) {
  if (!(d.group() == q.group()))
    throw Error(Errc::GroupMismatch, "bundle is not graded over the quotient group");
  const FiniteGroup& g = q.parent();
  const std::size_t n = d.ambient_dim() * g.order();
  std::vector<MatrixSubspace> fibers;
  for (Element s = 0; s < g.order(); ++s) {
    std::vector<Matrix> basis;
    for (const auto& x : d.fiber(q.coset_of(s)).basis()) basis.push_back(pullback_embed(q, s, x));
    fibers.push_back(orthonormalize(basis, n, tol));
  }
  return GradedBundle(g, n, std::move(fibers));
}

GradedBundle restrict_bundle(const GradedBundle& a, const Subgroup& h) {
  for (Element x : h.members())
    if (x >= a.group().order()) throw Error(Errc::NotASubgroup, "subgroup of a different group");
  // Re-validate against this group: members() alone is not proof of closure here.
  const Subgroup checked = Subgroup::make(a.group(), h.members());
  std::vector<MatrixSubspace> fibers;
  for (Element x : checked.members()) fibers.push_back(a.fiber(x));
  return GradedBundle(checked.as_group(a.group()), a.ambient_dim(), std::move(fibers));
}

}  // namespace fell
