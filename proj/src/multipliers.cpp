#include "fellbundle/multipliers.hpp"

#include <algorithm>
#include <string>

#include "fellbundle/error.hpp"

namespace fell {

namespace {

void fail(MultiplierCheck& c, double residual, const std::string& what) {
  c.residual = std::max(c.residual, residual);
  if (c.pass) {
    c.pass = false;
    c.failure = what;
  }
}

}  // namespace

UnitaryMultiplierFamily family_over_subgroup(const FiniteGroup& g, const Subgroup& n,
                                             std::vector<Matrix> unitaries) {
  if (unitaries.size() != n.order())
    throw Error(Errc::InvalidMultiplierFamily, "need one unitary per member of N");
  return UnitaryMultiplierFamily{n.as_group(g), n.members(), std::move(unitaries)};
}

MultiplierCheck check_multiplier_family(const GradedBundle& a, const UnitaryMultiplierFamily& u,
                                        bool covariant, double tol) {
  MultiplierCheck check;
  const FiniteGroup& g = a.group();
  const std::size_t k = u.domain.order();
  if (u.degree.size() != k || u.unitaries.size() != k) {
    fail(check, 0.0, "family size does not match its domain");
    return check;
  }
  const auto n = static_cast<Eigen::Index>(a.ambient_dim());
  for (std::size_t i = 0; i < k; ++i)
    if (u.unitaries[i].rows() != n || u.unitaries[i].cols() != n || u.degree[i] >= g.order()) {
      fail(check, 0.0, "multiplier " + std::to_string(i) + " has the wrong shape");
      return check;
    }
  const auto unit = algebra_unit(a.fiber(FiniteGroup::identity()), tol);
  if (!unit) throw Error(Errc::NonUnitalUnitFiber, "unit fiber has no unit");
  const Matrix& p = *unit;

  for (std::size_t i = 0; i < k; ++i) {
    const Matrix& v = u.unitaries[i];
    const double r = std::max((v.adjoint() * v - p).norm(), (v * v.adjoint() - p).norm());
    if (r > tol * std::max(1.0, p.norm())) fail(check, r, "U_" + std::to_string(i) + " is not unitary on the support");
    for (Element t = 0; t < g.order(); ++t) {
      const MatrixSubspace& left_target = a.fiber(g.mul(u.degree[i], t));
      const MatrixSubspace& right_target = a.fiber(g.mul(t, u.degree[i]));
      for (const auto& x : a.fiber(t).basis()) {
        const Matrix vx = v * x, xv = x * v;
        if (!left_target.contains(vx, tol))
          fail(check, left_target.residual(vx), "U_" + std::to_string(i) + " A_" + std::to_string(t) + " leaves its fiber");
        if (!right_target.contains(xv, tol))
          fail(check, right_target.residual(xv), "A_" + std::to_string(t) + " U_" + std::to_string(i) + " leaves its fiber");
      }
    }
    for (std::size_t j = 0; j < k; ++j) {
      const double h = (v * u.unitaries[j] - u.unitaries[u.domain.mul(i, j)]).norm();
      if (h > tol * std::max(1.0, p.norm())) fail(check, h, "U is not a homomorphism");
    }
  }
  if (covariant) {
    for (std::size_t i = 0; i < k; ++i) {
      const Element nn = u.degree[i];
      for (Element s = 0; s < g.order(); ++s) {
        const Element conj = g.conj(s, nn);
        const auto it = std::find(u.degree.begin(), u.degree.end(), conj);
        if (it == u.degree.end()) {
          fail(check, 0.0, "degrees are not closed under conjugation");
          continue;
        }
        const Matrix& w = u.unitaries[static_cast<std::size_t>(it - u.degree.begin())];
        for (const auto& x : a.fiber(s).basis()) {
          const double c = (x * u.unitaries[i] - w * x).norm();
          if (c > tol) fail(check, c, "covariance a_s U_n = U_{sns^-1} a_s fails");
        }
      }
    }
  }
  return check;
}

UnitaryMultiplierFamily canonical_multiplier_family(const GradedBundle& d, const Quotient& q, double tol) {
  const auto unit = algebra_unit(d.fiber(FiniteGroup::identity()), tol);
  if (!unit || d.fiber(FiniteGroup::identity()).empty())
    throw Error(Errc::NonUnitalUnitFiber, "unit fiber of D has no unit");
  std::vector<Matrix> us;
  for (Element m : q.normal().members()) us.push_back(kron(*unit, left_regular(q.parent(), m)));
  return family_over_subgroup(q.parent(), q.normal(), std::move(us));
}

Matrix orbit_representative(const Quotient& q, const UnitaryMultiplierFamily& u, Element s,
                            const Matrix& a) {
  return a * u[q.normal().local_index(q.n_part(s))].adjoint();
}

AbstractBundle quotient_bundle(const GradedBundle& a, const Quotient& q,
                               const UnitaryMultiplierFamily& u, double tol) {
  if (!(a.group() == q.parent())) throw Error(Errc::GroupMismatch, "bundle is not graded over the parent group");
  if (u.degree != q.normal().members())
    throw Error(Errc::InvalidMultiplierFamily, "family is not indexed by the members of N");
  const MultiplierCheck check = check_multiplier_family(a, u, true, tol);
  if (!check.pass) throw Error(Errc::InvalidMultiplierFamily, check.failure);

  const FiniteGroup& g = a.group();
  const FiniteGroup& gq = q.group();
  const Subgroup& normal = q.normal();
  AbstractBundle out;
  out.group = gq;
  for (Element k = 0; k < gq.order(); ++k) out.dims.push_back(a.fiber(q.section(k)).dim());
  out.product.resize(gq.order() * gq.order());
  for (Element k = 0; k < gq.order(); ++k)
    for (Element l = 0; l < gq.order(); ++l) {
      const Element ck = q.section(k), cl = q.section(l), ckl = q.section(gq.mul(k, l));
      const Element m = g.mul(g.inv(ckl), g.mul(ck, cl));
      const Matrix correction = u[normal.local_index(m)].adjoint();
      const MatrixSubspace& target = a.fiber(ckl);
      Matrix c(static_cast<Eigen::Index>(target.dim()),
               static_cast<Eigen::Index>(out.dims[k] * out.dims[l]));
      for (std::size_t i = 0; i < out.dims[k]; ++i)
        for (std::size_t j = 0; j < out.dims[l]; ++j)
          c.col(static_cast<Eigen::Index>(i * out.dims[l] + j)) =
              target.coordinates(Matrix(a.fiber(ck)[i] * a.fiber(cl)[j] * correction));
      out.product[k * gq.order() + l] = std::move(c);
    }
  for (Element k = 0; k < gq.order(); ++k) {
    const Element ck = q.section(k), ckinv = q.section(gq.inv(k));
    const Element m = g.mul(g.inv(ckinv), g.inv(ck));
    const Matrix correction = u[normal.local_index(m)].adjoint();
    const MatrixSubspace& target = a.fiber(ckinv);
    Matrix j(static_cast<Eigen::Index>(target.dim()), static_cast<Eigen::Index>(out.dims[k]));
    for (std::size_t i = 0; i < out.dims[k]; ++i)
      j.col(static_cast<Eigen::Index>(i)) = target.coordinates(Matrix(a.fiber(ck)[i].adjoint() * correction));
    out.involution.push_back(std::move(j));
  }
  const MatrixSubspace& unit_fiber = a.fiber(FiniteGroup::identity());
  out.functional.resize(static_cast<Eigen::Index>(unit_fiber.dim()));
  for (std::size_t i = 0; i < unit_fiber.dim(); ++i)
    out.functional(static_cast<Eigen::Index>(i)) = unit_fiber[i].trace();
  return out;
}

RoundTrip quotient_of_pullback(const GradedBundle& d, const Quotient& q, double tol) {
  const GradedBundle p = pullback(d, q, tol);
  RoundTrip out{concretize(quotient_bundle(p, q, canonical_multiplier_family(d, q, tol), tol), tol), {}};
  const ConcreteBundle& r = out.rebuilt;
  const FiberMap phi = make_fiber_map(r.bundle, [&](Element k, const Matrix& m) -> Matrix {
    const Element ck = q.section(k);
    return untensor(p.fiber(ck).from_coordinates(r.coordinates(k, m)), left_regular(q.parent(), ck));
  });
  out.isomorphism = verify_bundle_isomorphism(r.bundle, d, phi, tol);
  return out;
}

RoundTrip pullback_of_quotient(const GradedBundle& a, const Quotient& q, const UnitaryMultiplierFamily& u,
                               double tol) {
  RoundTrip out{concretize(quotient_bundle(a, q, u, tol), tol), {}};
  const ConcreteBundle& r = out.rebuilt;
  const GradedBundle p = pullback(r.bundle, q, tol);
  const FiberMap phi = make_fiber_map(a, [&](Element s, const Matrix& x) -> Matrix {
    const Element k = q.coset_of(s);
    const Matrix rep = orbit_representative(q, u, s, x);
    return pullback_embed(q, s, r.image(k, a.fiber(q.section(k)).coordinates(rep)));
  });
  out.isomorphism = verify_bundle_isomorphism(a, p, phi, tol);
  return out;
}

}  // namespace fell
