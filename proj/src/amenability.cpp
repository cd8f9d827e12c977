#include "fellbundle/amenability.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fellbundle/error.hpp"

namespace fell {

namespace {

Matrix unit_of(const GradedBundle& a, double tol) {
  const MatrixSubspace& e = a.fiber(FiniteGroup::identity());
  const auto unit = algebra_unit(e, tol);
  if (!unit || e.empty()) throw Error(Errc::NonUnitalUnitFiber, "unit fiber has no unit");
  return *unit;
}

void check_values(const GradedBundle& a, const EPWitness& w, double tol) {
  if (w.f.size() != a.group().order()) throw Error(Errc::ShapeMismatch, "witness needs one value per element");
  const MatrixSubspace& e = a.fiber(FiniteGroup::identity());
  for (const auto& v : w.f)
    if (!e.contains(v, std::max(tol, 1e-8)))
      throw Error(Errc::ValueOutsideUnitFiber, "witness value outside the unit fiber");
}

}  // namespace

double ep_bound(const EPWitness& w) {
  if (w.f.empty()) return 0.0;
  Matrix sum = Matrix::Zero(w.f.front().rows(), w.f.front().cols());
  for (const auto& v : w.f) sum += v.adjoint() * v;
  return op_norm(sum);
}

EPDefect ep_defect(const GradedBundle& a, const EPWitness& w, double tol) {
  check_values(a, w, tol);
  const FiniteGroup& g = a.group();
  EPDefect out;
  out.bound = ep_bound(w);
  for (Element t = 0; t < g.order(); ++t)
    for (const auto& basis : a.fiber(t).basis()) {
      const Matrix x = basis / op_norm(basis);
      Matrix avg = Matrix::Zero(x.rows(), x.cols());
      for (Element s = 0; s < g.order(); ++s) avg += w.f[g.mul(t, s)].adjoint() * x * w.f[s];
      out.defect = std::max(out.defect, op_norm(avg - x));
    }
  return out;
}

EPWitness uniform_witness(const GradedBundle& a, double tol) {
  const Matrix unit = unit_of(a, tol) / std::sqrt(static_cast<double>(a.group().order()));
  return EPWitness{std::vector<Matrix>(a.group().order(), unit)};
}

EPWitness delta_witness(const GradedBundle& a, double tol) {
  const Matrix unit = unit_of(a, tol);
  EPWitness w{std::vector<Matrix>(a.group().order(), Matrix::Zero(unit.rows(), unit.cols()))};
  w.f[0] = unit;
  return w;
}

EPWitness ep_pullback_witness(const GradedBundle& d, const EPWitness& fd, const std::vector<Complex>& g,
                              const Quotient& q, double tol) {
  if (g.size() != q.normal().order()) throw Error(Errc::ShapeMismatch, "g needs one value per member of N");
  double norm2 = 0.0;
  for (const auto& z : g) norm2 += std::norm(z);
  if (norm2 > 1.0 + 1e-12) throw Error(Errc::GNormExceeded, "sum |g(n)|^2 exceeds 1");
  check_values(d, fd, tol);
  const FiniteGroup& parent = q.parent();
  EPWitness h;
  const Matrix id = identity(parent.order());
  for (Element s = 0; s < parent.order(); ++s) {
    const Complex gn = g[q.normal().local_index(q.n_part(s))];
    h.f.push_back(kron(Matrix(fd.f[q.coset_of(s)] * gn), id));
  }
  return h;
}

Complex matrix_coefficient(const FiniteGroup& parent, const Subgroup& normal, const std::vector<Complex>& g,
                           Element n) {
  Complex sum = 0.0;
  for (Element m : normal.members())
    sum += std::conj(g[normal.local_index(parent.mul(n, m))]) * g[normal.local_index(m)];
  return sum;
}

PullbackDefectEstimate pullback_defect_estimate(const GradedBundle& d, const EPWitness& fd,
                                                const std::vector<Complex>& g, const Quotient& q, double tol) {
  const FiniteGroup& parent = q.parent();
  const FiniteGroup& gq = q.group();
  PullbackDefectEstimate est;
  const EPWitness h = ep_pullback_witness(d, fd, g, q, tol);
  est.defect = ep_defect(pullback(d, q, tol), h, tol).defect;
  est.base_defect = ep_defect(d, fd, tol).defect;
  for (Element t = 0; t < gq.order(); ++t) {
    double c = 0.0;
    for (Element k = 0; k < gq.order(); ++k) c += op_norm(fd.f[gq.mul(t, k)]) * op_norm(fd.f[k]);
    est.c = std::max(est.c, c);
  }
  for (Element t = 0; t < parent.order(); ++t)
    for (Element s = 0; s < parent.order(); ++s) {
      const Element n = q.n_part(parent.mul(t, q.section(q.coset_of(s))));
      est.delta = std::max(est.delta, std::abs(1.0 - matrix_coefficient(parent, q.normal(), g, n)));
    }
  est.estimate = est.base_defect + est.c * est.delta;
  return est;
}

Matrix averaging_map(const SectionAlgebra& s, const EPWitness& w, const Matrix& a,
                     const std::optional<Subgroup>& subgroup, double tol) {
  const GradedBundle& bundle = s.bundle();
  const FiniteGroup& g = bundle.group();
  check_values(bundle, w, tol);
  const Subgroup h = subgroup ? *subgroup : Subgroup::whole(g);
  const auto n = static_cast<Eigen::Index>(bundle.ambient_dim());
  if (a.rows() != n || a.cols() != n || !s.total().contains(a, std::max(tol, 1e-8)))
    throw Error(Errc::NotInAlgebra, "matrix is not a section");
  Matrix rest = a;
  Matrix out = Matrix::Zero(n, n);
  for (Element x : h.members()) {
    const Matrix ax = s.component(x, a);
    rest -= ax;
    for (Element t = 0; t < g.order(); ++t) out += w.f[g.mul(x, t)].adjoint() * ax * w.f[t];
  }
  if (rest.norm() > std::max(tol, 1e-8) * std::max(1.0, a.norm()))
    throw Error(Errc::NotInAlgebra, "section has components outside the subgroup");
  return out;
}

AmenabilityReport amenability_report(const GradedBundle& a, double tol) {
  AmenabilityReport report;
  const SectionAlgebra s(a, tol);
  const MatrixSubspace& total = s.total();
  const auto d = static_cast<Eigen::Index>(total.dim());
  if (d > 0) {
    // Left multiplication on the section space, one column per basis element.
    Matrix reg(d * d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j)
        reg.block(j * d, i, d, 1) = total.coordinates(Matrix(total[static_cast<std::size_t>(i)] *
                                                             total[static_cast<std::size_t>(j)]));
    Eigen::ColPivHouseholderQR<Matrix> qr(reg);
    qr.setThreshold(1e-9);
    report.regular_rep_kernel_dim = static_cast<std::size_t>(d - qr.rank());
  }
  try {
    const EPWitness w = uniform_witness(a, tol);
    report.witness = "uniform";
    report.witness_defect = ep_defect(a, w, tol);
    report.ep_exact_witness_found = report.witness_defect.defect <= std::max(tol, 1e-9);
  } catch (const Error& e) {
    if (e.code() != Errc::NonUnitalUnitFiber) throw;
    report.witness = "none";
  }
  return report;
}

}  // namespace fell
