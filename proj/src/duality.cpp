#include "fellbundle/duality.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "fellbundle/error.hpp"

namespace fell {

namespace {

/// All sums of subsets of the given central projections, applied to `algebra`.
std::vector<std::pair<Matrix, MatrixSubspace>> block_ideals(const MatrixSubspace& algebra, double tol) {
  const auto n = static_cast<Eigen::Index>(algebra.ambient_dim());
  std::vector<std::pair<Matrix, MatrixSubspace>> out;
  if (algebra.dim() == 0) {
    out.emplace_back(Matrix::Zero(n, n), MatrixSubspace(algebra.ambient_dim()));
    return out;
  }
  const auto projections = minimal_central_projections(algebra, tol);
  if (projections.size() > 20) throw Error(Errc::InvalidParameter, "too many central summands to enumerate");
  const std::size_t count = std::size_t{1} << projections.size();
  for (std::size_t mask = 0; mask < count; ++mask) {
    Matrix p = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < projections.size(); ++i)
      if (mask & (std::size_t{1} << i)) p += projections[i];
    std::vector<Matrix> span;
    for (const auto& b : algebra.basis()) span.push_back(p * b);
    out.emplace_back(p, orthonormalize(span, algebra.ambient_dim(), 1e-8));
  }
  return out;
}

}  // namespace

LandstadResult landstad_reconstruct(const GradedBundle& d, const Quotient& q, const UnitaryMultiplierFamily& u,
                                    double tol) {
  const FiniteGroup& g = q.parent();
  if (!(d.group() == q.group())) throw Error(Errc::GroupMismatch, "D is not graded over G/N");
  if (!(u.domain == g) || u.unitaries.size() != g.order())
    throw Error(Errc::MultiplierNotOrderCompatible, "family must be indexed by G");
  for (Element s = 0; s < g.order(); ++s)
    if (u.degree[s] != q.coset_of(s))
      throw Error(Errc::MultiplierNotOrderCompatible, "u_" + std::to_string(s) + " must have order sN");
  const MultiplierCheck check = check_multiplier_family(d, u, false, tol);
  if (!check.pass) throw Error(Errc::MultiplierNotOrderCompatible, check.failure);

  const MatrixSubspace& b = d.fiber(FiniteGroup::identity());
  const Matrix p = *algebra_unit(b, tol);
  for (Element s = 0; s < g.order(); ++s) {
    std::vector<Matrix> moved, principal;
    for (const auto& x : b.basis()) {
      moved.push_back(u[s] * x * u[s].adjoint());
      principal.push_back(x * u[s]);
    }
    if (!orthonormalize(moved, b.ambient_dim(), 1e-8).same_span(b, tol))
      throw Error(Errc::MultiplierNotOrderCompatible, "u_" + std::to_string(s) + " does not normalize D_N");
    if (!orthonormalize(principal, b.ambient_dim(), 1e-8).same_span(d.fiber(q.coset_of(s)), tol))
      throw Error(Errc::FiberNotPrincipal, "D_sN != D_N u_s for s = " + std::to_string(s));
  }

  std::vector<Matrix> twist;
  for (Element n : q.normal().members()) twist.push_back(u[n] * p);
  LandstadResult result{inner_twisted_action(b, g, u.unitaries, q.normal(), twist),
                        ConcreteBundle{GradedBundle(g, 0, std::vector<MatrixSubspace>(g.order())), {}},
                        {}};
  validate_twisted_action(result.action, tol);
  result.rebuilt = concretize(twisted_semidirect_bundle(result.action, tol), tol);

  const ConcreteBundle& rb = result.rebuilt;
  const FiberMap phi = make_fiber_map(rb.bundle, [&](Element k, const Matrix& m) -> Matrix {
    const Matrix bb = b.from_coordinates(rb.coordinates(k, m));
    return bb * u[q.section(k)];
  });
  result.isomorphism = verify_bundle_isomorphism(rb.bundle, d, phi, tol);
  return result;
}

UnitaryMultiplierFamily landstad_canonical_family(const TwistedAction& t, const ConcreteBundle& d) {
  const FiniteGroup& g = t.group;
  const Quotient q(g, t.normal);
  UnitaryMultiplierFamily u{g, {}, {}};
  const Matrix one = t.unit();
  for (Element s = 0; s < g.order(); ++s) {
    const Matrix rep = twisted_representative(t, q, s, one);
    u.degree.push_back(q.coset_of(s));
    u.unitaries.push_back(d.image(q.coset_of(s), t.algebra.coordinates(rep)));
  }
  return u;
}

OlesenPedersenReport olesen_pedersen_forward(const TwistedAction& t, double tol) {
  validate_twisted_action(t, tol);
  const FiniteGroup& g = t.group;
  const Quotient q(g, t.normal);
  const ConcreteBundle a = concretize(semidirect_bundle(t.untwisted(), tol), tol);
  const ConcreteBundle twisted = concretize(twisted_semidirect_bundle(t, tol), tol);
  const GradedBundle p = pullback(twisted.bundle, q, tol);

  const FiberMap phi = make_fiber_map(a.bundle, [&](Element s, const Matrix& m) -> Matrix {
    const Matrix b = t.algebra.from_coordinates(a.coordinates(s, m));
    const Matrix rep = twisted_representative(t, q, s, b);
    return pullback_embed(q, s, twisted.image(q.coset_of(s), t.algebra.coordinates(rep)));
  });
  OlesenPedersenReport report;
  report.semidirect_dim = a.bundle.section_dim();
  report.pullback_dim = p.section_dim();
  report.isomorphism = verify_bundle_isomorphism(a.bundle, p, phi, tol);
  report.pass = report.isomorphism.pass && report.semidirect_dim == report.pullback_dim;
  return report;
}

UnitaryMultiplierFamily semidirect_multiplier_family(const TwistedAction& t, const ConcreteBundle& a) {
  std::vector<Matrix> us;
  for (Element n : t.normal.members())
    us.push_back(a.image(n, t.algebra.coordinates(Matrix(t.tau(n).adjoint()))));
  return family_over_subgroup(t.group, t.normal, std::move(us));
}

std::vector<Matrix> extract_twist(const TwistedAction& action, const ConcreteBundle& a, const Subgroup& normal,
                                  const UnitaryMultiplierFamily& u, double tol) {
  const FiniteGroup& g = action.group;
  if (!normal.is_normal_in(g)) throw Error(Errc::NotNormal, "twist domain is not normal");
  if (u.degree != normal.members()) throw Error(Errc::InvalidMultiplierFamily, "family is not indexed by N");
  const MultiplierCheck check = check_multiplier_family(a.bundle, u, true, tol);
  if (!check.pass) throw Error(Errc::InvalidMultiplierFamily, check.failure);

  const Matrix one = action.unit();
  const Vector one_coords = action.algebra.coordinates(one);
  std::vector<Matrix> tau;
  for (Element n : normal.members()) {
    const Matrix x = a.image(n, one_coords) * u[normal.local_index(g.inv(n))];
    if (!a.bundle.fiber(FiniteGroup::identity()).contains(x, tol))
      throw Error(Errc::InvalidMultiplierFamily, "(1, n) u_{n^-1} is not in the unit fiber");
    tau.push_back(action.algebra.from_coordinates(a.coordinates(FiniteGroup::identity(), x)));
  }
  TwistedAction twisted = action;
  twisted.normal = normal;
  twisted.twist = tau;
  try {
    validate_twisted_action(twisted, std::max(tol, 1e-8));
  } catch (const Error& e) {
    throw Error(Errc::InvalidMultiplierFamily, std::string("extracted twist is invalid: ") + e.what());
  }
  return tau;
}

std::vector<MatrixSubspace> graded_ideals(const SectionAlgebra& s, double tol) {
  const FiniteGroup& g = s.bundle().group();
  std::vector<MatrixSubspace> out;
  for (auto& [p, ideal] : block_ideals(s.total(), tol)) {
    bool graded = true;
    for (Element t = 0; t < g.order() && graded; ++t)
      for (const auto& x : ideal.basis())
        if (!ideal.contains(s.component(t, x), 1e-7)) {
          graded = false;
          break;
        }
    if (graded) out.push_back(std::move(ideal));
  }
  std::sort(out.begin(), out.end(), [](const MatrixSubspace& a, const MatrixSubspace& b) { return a.dim() < b.dim(); });
  return out;
}

bool is_G_simple(const SectionAlgebra& s, double tol) {
  const auto ideals = graded_ideals(s, tol);
  return ideals.size() == 2 && ideals.front().dim() == 0 && ideals.back().dim() == s.total().dim();
}

std::vector<MatrixSubspace> action_invariant_ideals(const TwistedAction& t, double tol) {
  std::vector<MatrixSubspace> out;
  for (auto& [p, ideal] : block_ideals(t.algebra, tol)) {
    bool invariant = true;
    for (Element s = 0; s < t.group.order() && invariant; ++s)
      for (const auto& x : ideal.basis())
        if (!ideal.contains(t.apply(s, x), 1e-7)) {
          invariant = false;
          break;
        }
    if (invariant) out.push_back(std::move(ideal));
  }
  return out;
}

// ---------------------------------------------------------------------------

void validate_gset(const GSetAction& act) {
  const FiniteGroup& g = act.group;
  if (act.perm.size() != g.order()) throw Error(Errc::InvalidAction, "one permutation per group element");
  for (const auto& p : act.perm) {
    if (p.size() != act.size) throw Error(Errc::InvalidAction, "permutation has the wrong length");
    std::vector<bool> seen(act.size, false);
    for (auto x : p) {
      if (x >= act.size || seen[x]) throw Error(Errc::InvalidAction, "not a permutation");
      seen[x] = true;
    }
  }
  for (std::size_t x = 0; x < act.size; ++x)
    if (act.perm[0][x] != x) throw Error(Errc::InvalidAction, "identity does not act trivially");
  for (Element s = 0; s < g.order(); ++s)
    for (Element t = 0; t < g.order(); ++t)
      for (std::size_t x = 0; x < act.size; ++x)
        if (act.perm[g.mul(s, t)][x] != act.perm[s][act.perm[t][x]])
          throw Error(Errc::InvalidAction, "permutation action is not a homomorphism");
}

GSetAction coset_action(const FiniteGroup& g, const Subgroup& h) {
  std::vector<std::size_t> coset_of(g.order(), g.order());
  std::size_t count = 0;
  for (Element s = 0; s < g.order(); ++s) {
    if (coset_of[s] != g.order()) continue;
    for (Element m : h.members()) coset_of[g.mul(s, m)] = count;
    ++count;
  }
  std::vector<Element> rep(count);
  for (Element s = g.order(); s-- > 0;) rep[coset_of[s]] = s;
  GSetAction act{g, count, {}};
  for (Element s = 0; s < g.order(); ++s) {
    std::vector<std::size_t> p(count);
    for (std::size_t x = 0; x < count; ++x) p[x] = coset_of[g.mul(s, rep[x])];
    act.perm.push_back(std::move(p));
  }
  validate_gset(act);
  return act;
}

GSetAction translation_action(const FiniteGroup& g) { return coset_action(g, Subgroup::trivial()); }

GSetAction trivial_action(const FiniteGroup& g, std::size_t size) {
  std::vector<std::size_t> id(size);
  std::iota(id.begin(), id.end(), std::size_t{0});
  return GSetAction{g, size, std::vector<std::vector<std::size_t>>(g.order(), id)};
}

TwistedAction function_algebra_action(const GSetAction& act) {
  validate_gset(act);
  std::vector<Matrix> diag, perms;
  for (std::size_t x = 0; x < act.size; ++x) diag.push_back(matrix_unit(act.size, x, x));
  for (const auto& p : act.perm) {
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(act.size), static_cast<Eigen::Index>(act.size));
    for (std::size_t x = 0; x < act.size; ++x) m(static_cast<Eigen::Index>(p[x]), static_cast<Eigen::Index>(x)) = 1.0;
    perms.push_back(std::move(m));
  }
  return inner_twisted_action(orthonormalize(diag, act.size), act.group, perms, Subgroup::trivial(), {});
}

ObstructionReport stabilizer_obstruction(const GSetAction& act, const Subgroup& n) {
  validate_gset(act);
  if (n.order() <= 1) throw Error(Errc::TrivialN, "N must be nontrivial");
  const FiniteGroup& g = act.group;
  std::vector<Element> kernel;
  for (Element s = 0; s < g.order(); ++s) {
    bool fixes_all = true;
    for (std::size_t x = 0; x < act.size; ++x) fixes_all = fixes_all && act.perm[s][x] == x;
    if (fixes_all) kernel.push_back(s);
  }
  ObstructionReport report;
  report.kernel = Subgroup::make(g, kernel);
  report.induced_possible =
      std::all_of(n.members().begin(), n.members().end(), [&](Element m) { return report.kernel.contains(m); });
  std::string members;
  for (Element m : n.members()) members += (members.empty() ? "" : ",") + std::to_string(m);
  const std::string quotient = "G/N with N = {" + members + "}";
  if (report.kernel.order() == 1)
    report.verdict = "not weakly induced from " + quotient + " (nor from G/M for any nontrivial M)";
  else if (!report.induced_possible)
    report.verdict = "not weakly induced from " + quotient;
  else
    report.verdict = "no obstruction";
  return report;
}

}  // namespace fell
