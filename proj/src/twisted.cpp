#include "fellbundle/twisted.hpp"

#include <algorithm>
#include <string>

#include "fellbundle/error.hpp"

namespace fell {

namespace {

double rel(const Matrix& diff, const Matrix& ref) { return diff.norm() / std::max(1.0, ref.norm()); }

}  // namespace

Matrix TwistedAction::apply(Element s, const Matrix& b) const {
  return algebra.from_coordinates(alpha[s] * algebra.coordinates(b));
}

Matrix TwistedAction::unit() const {
  const auto u = algebra_unit(algebra);
  if (!u) throw Error(Errc::NotUnital, "coefficient algebra has no unit");
  return *u;
}

TwistedAction TwistedAction::untwisted() const {
  TwistedAction out = *this;
  out.normal = Subgroup::trivial();
  out.twist = {unit()};
  return out;
}

TwistedAction inner_twisted_action(const MatrixSubspace& algebra, const FiniteGroup& g,
                                   const std::vector<Matrix>& implementing_unitaries,
                                   const Subgroup& normal, const std::vector<Matrix>& twist) {
  if (implementing_unitaries.size() != g.order())
    throw Error(Errc::InvalidAction, "need one implementing unitary per group element");
  TwistedAction t;
  t.algebra = algebra;
  t.group = g;
  const auto k = static_cast<Eigen::Index>(algebra.dim());
  for (Element s = 0; s < g.order(); ++s) {
    const Matrix& v = implementing_unitaries[s];
    if (static_cast<std::size_t>(v.rows()) != algebra.ambient_dim() || v.rows() != v.cols())
      throw Error(Errc::InvalidAction, "implementing unitary has the wrong shape");
    Matrix a(k, k);
    for (Eigen::Index j = 0; j < k; ++j) {
      const Matrix moved = v * algebra[static_cast<std::size_t>(j)] * v.adjoint();
      if (!algebra.contains(moved))
        throw Error(Errc::InvalidAction, "unitary for element " + std::to_string(s) + " does not normalize B");
      a.col(j) = algebra.coordinates(moved);
    }
    t.alpha.push_back(std::move(a));
  }
  if (twist.empty()) {
    t.normal = Subgroup::trivial();
    t.twist = {t.unit()};
  } else {
    t.normal = normal;
    t.twist = twist;
  }
  return t;
}

void validate_action(const TwistedAction& t, double tol) {
  const FiniteGroup& g = t.group;
  const std::size_t k = t.algebra.dim();
  if (t.alpha.size() != g.order()) throw Error(Errc::InvalidAction, "one automorphism per element");
  if (!is_star_algebra(t.algebra, tol) || !algebra_unit(t.algebra, tol))
    throw Error(Errc::InvalidAction, "coefficient algebra is not a unital *-algebra");
  for (Element s = 0; s < g.order(); ++s) {
    const Matrix& a = t.alpha[s];
    if (static_cast<std::size_t>(a.rows()) != k || static_cast<std::size_t>(a.cols()) != k)
      throw Error(Errc::InvalidAction, "automorphism matrix has the wrong shape");
    if (Eigen::FullPivLU<Matrix>(a).rank() != static_cast<Eigen::Index>(k))
      throw Error(Errc::InvalidAction, "alpha_" + std::to_string(s) + " is not bijective");
    for (std::size_t i = 0; i < k; ++i) {
      const Matrix& bi = t.algebra[i];
      if (rel(t.apply(s, bi.adjoint()) - t.apply(s, bi).adjoint(), bi) > tol)
        throw Error(Errc::InvalidAction, "alpha_" + std::to_string(s) + " does not preserve adjoints");
      for (std::size_t j = 0; j < k; ++j) {
        const Matrix& bj = t.algebra[j];
        const Matrix lhs = t.apply(s, bi * bj);
        if (rel(lhs - t.apply(s, bi) * t.apply(s, bj), lhs) > tol)
          throw Error(Errc::InvalidAction, "alpha_" + std::to_string(s) + " is not multiplicative");
      }
    }
  }
  const auto ki = static_cast<Eigen::Index>(k);
  if ((t.alpha[0] - Matrix::Identity(ki, ki)).norm() > tol)
    throw Error(Errc::InvalidAction, "alpha_e is not the identity");
  for (Element s = 0; s < g.order(); ++s)
    for (Element u = 0; u < g.order(); ++u)
      if ((t.alpha[s] * t.alpha[u] - t.alpha[g.mul(s, u)]).norm() > tol * std::max<double>(1.0, static_cast<double>(k)))
        throw Error(Errc::InvalidAction, "alpha is not a homomorphism");
}

void validate_twisted_action(const TwistedAction& t, double tol) {
  validate_action(t, tol);
  const FiniteGroup& g = t.group;
  if (!t.normal.is_normal_in(g)) throw Error(Errc::InvalidTwist, "twist domain is not normal");
  if (t.twist.size() != t.normal.order()) throw Error(Errc::InvalidTwist, "one twist unitary per member of N");
  const Matrix one = t.unit();
  for (Element n : t.normal.members()) {
    const Matrix& u = t.tau(n);
    if (!t.algebra.contains(u, tol)) throw Error(Errc::InvalidTwist, "tau_" + std::to_string(n) + " is not in B");
    if (rel(u * u.adjoint() - one, one) > tol || rel(u.adjoint() * u - one, one) > tol)
      throw Error(Errc::InvalidTwist, "tau_" + std::to_string(n) + " is not unitary");
    for (Element m : t.normal.members())
      if (rel(u * t.tau(m) - t.tau(g.mul(n, m)), one) > tol)
        throw Error(Errc::InvalidTwist, "tau is not a homomorphism");
    for (Element s = 0; s < g.order(); ++s)
      if (rel(t.apply(s, u) - t.tau(g.conj(s, n)), one) > tol)
        throw Error(Errc::InvalidTwist, "alpha_s(tau_n) != tau_{sns^-1}");
    for (const auto& b : t.algebra.basis())
      if (rel(t.apply(n, b) - u * b * u.adjoint(), b) > tol)
        throw Error(Errc::InvalidTwist, "alpha_n is not Ad tau_n");
  }
}

AbstractBundle semidirect_bundle(const TwistedAction& t, double tol) {
  validate_action(t, tol);
  const FiniteGroup& g = t.group;
  const std::size_t k = t.algebra.dim();
  const auto ki = static_cast<Eigen::Index>(k);
  AbstractBundle out;
  out.group = g;
  out.dims.assign(g.order(), k);
  out.product.resize(g.order() * g.order());
  for (Element s = 0; s < g.order(); ++s)
    for (Element u = 0; u < g.order(); ++u) {
      Matrix c(ki, ki * ki);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
          c.col(static_cast<Eigen::Index>(i * k + j)) =
              t.algebra.coordinates(Matrix(t.algebra[i] * t.apply(s, t.algebra[j])));
      out.product[s * g.order() + u] = std::move(c);
    }
  for (Element s = 0; s < g.order(); ++s) {
    Matrix inv(ki, ki);
    for (std::size_t i = 0; i < k; ++i)
      inv.col(static_cast<Eigen::Index>(i)) =
          t.algebra.coordinates(Matrix(t.apply(g.inv(s), t.algebra[i]).adjoint()));
    out.involution.push_back(std::move(inv));
  }
  out.functional.resize(ki);
  for (std::size_t i = 0; i < k; ++i) out.functional(static_cast<Eigen::Index>(i)) = t.algebra[i].trace();
  return out;
}

Matrix twisted_representative(const TwistedAction& t, const Quotient& q, Element s, const Matrix& b) {
  const Element c = q.section(q.coset_of(s));
  const Element m = t.group.mul(s, t.group.inv(c));
  return b * t.tau(m);
}

AbstractBundle twisted_semidirect_bundle(const TwistedAction& t, double tol) {
  validate_twisted_action(t, tol);
  const FiniteGroup& g = t.group;
  const Quotient q(g, t.normal);
  const FiniteGroup& gq = q.group();
  const std::size_t k = t.algebra.dim();
  const auto ki = static_cast<Eigen::Index>(k);

  AbstractBundle out;
  out.group = gq;
  out.dims.assign(gq.order(), k);
  out.product.resize(gq.order() * gq.order());
  for (Element a = 0; a < gq.order(); ++a)
    for (Element b = 0; b < gq.order(); ++b) {
      const Element s = q.section(a), u = q.section(b), su = g.mul(s, u);
      Matrix c(ki, ki * ki);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
          const Matrix prod = t.algebra[i] * t.apply(s, t.algebra[j]);
          c.col(static_cast<Eigen::Index>(i * k + j)) =
              t.algebra.coordinates(twisted_representative(t, q, su, prod));
        }
      out.product[a * gq.order() + b] = std::move(c);
    }
  for (Element a = 0; a < gq.order(); ++a) {
    const Element s = q.section(a), sinv = g.inv(s);
    Matrix inv(ki, ki);
    for (std::size_t i = 0; i < k; ++i) {
      const Matrix star = t.apply(sinv, t.algebra[i]).adjoint();
      inv.col(static_cast<Eigen::Index>(i)) =
          t.algebra.coordinates(twisted_representative(t, q, sinv, star));
    }
    out.involution.push_back(std::move(inv));
  }
  out.functional.resize(ki);
  for (std::size_t i = 0; i < k; ++i) out.functional(static_cast<Eigen::Index>(i)) = t.algebra[i].trace();
  return out;
}

}  // namespace fell
