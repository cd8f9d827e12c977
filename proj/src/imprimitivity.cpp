#include "fellbundle/imprimitivity.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "fellbundle/error.hpp"

namespace fell {

namespace {

template <int Kind>
double scale_of(const SparseElement<Kind>& a) {
  double s = 0.0;
  for (const auto& [k, m] : a.terms) s = std::max(s, m.norm());
  return std::max(1.0, s);
}

Complex random_complex(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return {n(rng), n(rng)};
}

template <int Kind>
SparseElement<Kind> random_combination(const std::vector<SparseElement<Kind>>& gens, std::size_t terms,
                                       std::mt19937_64& rng) {
  SparseElement<Kind> out;
  if (gens.empty()) return out;
  std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
  for (std::size_t i = 0; i < terms; ++i) out += random_complex(rng) * gens[pick(rng)];
  return out;
}

std::size_t numeric_rank(const std::vector<Vector>& rows, std::size_t cols) {
  if (rows.empty() || cols == 0) return 0;
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  Eigen::ColPivHouseholderQR<Matrix> qr(m);
  qr.setThreshold(1e-9);
  return static_cast<std::size_t>(qr.rank());
}

}  // namespace

Imprimitivity::Imprimitivity(GradedBundle d, Quotient q, Star star)
    : d_(std::move(d)), q_(std::move(q)), star_(std::move(star)) {
  if (!(d_.group() == q_.group())) throw Error(Errc::GroupMismatch, "D is not graded over G/N");
  const auto unit = algebra_unit(d_.fiber(FiniteGroup::identity()));
  unit_ = unit ? *unit : Matrix::Zero(static_cast<Eigen::Index>(d_.ambient_dim()),
                                      static_cast<Eigen::Index>(d_.ambient_dim()));
}

Imprimitivity Imprimitivity::without_fiber_checks() const {
  Imprimitivity out = *this;
  out.checked_ = false;
  return out;
}

void Imprimitivity::check_fibers(const BimoduleElement& x) const {
  for (const auto& [key, m] : x.terms)
    if (key.first >= q_.index() || key.second >= q_.parent().order() || !d_.fiber(key.first).contains(m))
      throw Error(Errc::FiberMismatch, "bimodule term outside its fiber");
}

void Imprimitivity::check_fibers(const AlgebraElementB& b) const {
  for (const auto& [key, m] : b.terms)
    if (key.first >= q_.parent().order() || key.second >= q_.parent().order() ||
        !d_.fiber(coset(key.first)).contains(m))
      throw Error(Errc::FiberMismatch, "B0 term outside its fiber");
}

void Imprimitivity::check_fibers(const AlgebraElementC& c) const {
  for (const auto& [key, m] : c.terms)
    if (key.first >= q_.index() || key.second >= q_.index() || !d_.fiber(key.first).contains(m))
      throw Error(Errc::FiberMismatch, "C0 term outside its fiber");
}

BimoduleElement Imprimitivity::right_action(const BimoduleElement& x, const AlgebraElementC& c) const {
  guard(x);
  guard(c);
  const FiniteGroup& gq = q_.group();
  BimoduleElement out;
  for (const auto& [kx, d] : x.terms)
    for (const auto& [kc, e] : c.terms) {
      const Element k = kx.first, t = kx.second, u = kc.first, l = kc.second;
      if (gq.mul(gq.inv(k), coset(t)) != gq.mul(u, l)) continue;
      out.add({gq.mul(k, u), t}, d * e);
    }
  return out;
}

BimoduleElement Imprimitivity::left_action(const AlgebraElementB& b, const BimoduleElement& x) const {
  guard(b);
  guard(x);
  const FiniteGroup& g = q_.parent();
  const FiniteGroup& gq = q_.group();
  BimoduleElement out;
  for (const auto& [kb, d] : b.terms)
    for (const auto& [kx, e] : x.terms) {
      const Element s = kb.first, r = kb.second, k = kx.first, t = kx.second;
      if (r != t) continue;
      out.add({gq.mul(coset(s), k), g.mul(s, t)}, d * e);
    }
  return out;
}

AlgebraElementC Imprimitivity::rinner(const BimoduleElement& x, const BimoduleElement& y) const {
  guard(x);
  guard(y);
  const FiniteGroup& gq = q_.group();
  AlgebraElementC out;
  for (const auto& [kx, d] : x.terms)
    for (const auto& [ky, e] : y.terms) {
      const Element k = kx.first, t = kx.second, u = ky.first, v = ky.second;
      if (t != v) continue;
      out.add({gq.mul(gq.inv(k), u), gq.mul(gq.inv(u), coset(v))}, star(d) * e);
    }
  return out;
}

AlgebraElementB Imprimitivity::linner(const BimoduleElement& x, const BimoduleElement& y) const {
  guard(x);
  guard(y);
  const FiniteGroup& g = q_.parent();
  const FiniteGroup& gq = q_.group();
  AlgebraElementB out;
  for (const auto& [kx, d] : x.terms)
    for (const auto& [ky, e] : y.terms) {
      const Element k = kx.first, t = kx.second, u = ky.first, v = ky.second;
      const Element tv = g.mul(t, g.inv(v));
      if (gq.mul(k, gq.inv(u)) != coset(tv)) continue;
      out.add({tv, v}, d * star(e));
    }
  return out;
}

BimoduleElement Imprimitivity::gamma(Element r, const BimoduleElement& x) const {
  const FiniteGroup& g = q_.parent();
  BimoduleElement out;
  for (const auto& [k, d] : x.terms) out.add({k.first, g.mul(k.second, g.inv(r))}, d);
  return out;
}

AlgebraElementB Imprimitivity::multiply(const AlgebraElementB& a, const AlgebraElementB& b) const {
  guard(a);
  guard(b);
  const FiniteGroup& g = q_.parent();
  AlgebraElementB out;
  for (const auto& [ka, d] : a.terms)
    for (const auto& [kb, e] : b.terms)
      if (ka.second == g.mul(kb.first, kb.second)) out.add({g.mul(ka.first, kb.first), kb.second}, d * e);
  return out;
}

AlgebraElementC Imprimitivity::multiply(const AlgebraElementC& a, const AlgebraElementC& b) const {
  guard(a);
  guard(b);
  const FiniteGroup& gq = q_.group();
  AlgebraElementC out;
  for (const auto& [ka, d] : a.terms)
    for (const auto& [kb, e] : b.terms)
      if (ka.second == gq.mul(kb.first, kb.second)) out.add({gq.mul(ka.first, kb.first), kb.second}, d * e);
  return out;
}

AlgebraElementB Imprimitivity::adjoint(const AlgebraElementB& b) const {
  const FiniteGroup& g = q_.parent();
  AlgebraElementB out;
  for (const auto& [k, d] : b.terms) out.add({g.inv(k.first), g.mul(k.first, k.second)}, star(d));
  return out;
}

AlgebraElementC Imprimitivity::adjoint(const AlgebraElementC& c) const {
  const FiniteGroup& gq = q_.group();
  AlgebraElementC out;
  for (const auto& [k, d] : c.terms) out.add({gq.inv(k.first), gq.mul(k.first, k.second)}, star(d));
  return out;
}

AlgebraElementB Imprimitivity::dual_action(Element r, const AlgebraElementB& b) const {
  const FiniteGroup& g = q_.parent();
  AlgebraElementB out;
  for (const auto& [k, d] : b.terms) out.add({k.first, g.mul(k.second, g.inv(r))}, d);
  return out;
}

AlgebraElementC Imprimitivity::inflated_dual_action(Element r, const AlgebraElementC& c) const {
  const FiniteGroup& gq = q_.group();
  AlgebraElementC out;
  for (const auto& [k, d] : c.terms) out.add({k.first, gq.mul(k.second, gq.inv(coset(r)))}, d);
  return out;
}

Matrix Imprimitivity::realize(const AlgebraElementB& b) const {
  const FiniteGroup& g = q_.parent();
  const auto n = static_cast<Eigen::Index>(d_.ambient_dim() * g.order());
  Matrix out = Matrix::Zero(n, n);
  for (const auto& [k, d] : b.terms) out += kron(d, matrix_unit(g.order(), g.mul(k.first, k.second), k.second));
  return out;
}

Matrix Imprimitivity::realize(const AlgebraElementC& c) const {
  const FiniteGroup& gq = q_.group();
  const auto n = static_cast<Eigen::Index>(d_.ambient_dim() * gq.order());
  Matrix out = Matrix::Zero(n, n);
  for (const auto& [k, d] : c.terms) out += kron(d, matrix_unit(gq.order(), gq.mul(k.first, k.second), k.second));
  return out;
}

Vector Imprimitivity::coordinates(const AlgebraElementB& b) const {
  const FiniteGroup& g = q_.parent();
  Vector out = Vector::Zero(static_cast<Eigen::Index>(dim_b()));
  std::vector<std::size_t> offset(g.order() + 1, 0);
  for (Element s = 0; s < g.order(); ++s) offset[s + 1] = offset[s] + d_.fiber(coset(s)).dim();
  for (const auto& [k, d] : b.terms) {
    const auto& fiber = d_.fiber(coset(k.first));
    const auto start = static_cast<Eigen::Index>(k.second * offset.back() + offset[k.first]);
    out.segment(start, static_cast<Eigen::Index>(fiber.dim())) += fiber.coordinates(d);
  }
  return out;
}

Vector Imprimitivity::coordinates(const AlgebraElementC& c) const {
  const FiniteGroup& gq = q_.group();
  Vector out = Vector::Zero(static_cast<Eigen::Index>(dim_c()));
  std::vector<std::size_t> offset(gq.order() + 1, 0);
  for (Element k = 0; k < gq.order(); ++k) offset[k + 1] = offset[k] + d_.fiber(k).dim();
  for (const auto& [k, d] : c.terms) {
    const auto& fiber = d_.fiber(k.first);
    const auto start = static_cast<Eigen::Index>(k.second * offset.back() + offset[k.first]);
    out.segment(start, static_cast<Eigen::Index>(fiber.dim())) += fiber.coordinates(d);
  }
  return out;
}

std::vector<BimoduleElement> Imprimitivity::x_generators() const {
  std::vector<BimoduleElement> out;
  for (Element k = 0; k < q_.index(); ++k)
    for (Element t = 0; t < q_.parent().order(); ++t)
      for (const auto& d : d_.fiber(k).basis()) {
        BimoduleElement x;
        x.add({k, t}, d);
        out.push_back(std::move(x));
      }
  return out;
}

std::vector<AlgebraElementB> Imprimitivity::b_generators() const {
  std::vector<AlgebraElementB> out;
  for (Element s = 0; s < q_.parent().order(); ++s)
    for (Element t = 0; t < q_.parent().order(); ++t)
      for (const auto& d : d_.fiber(coset(s)).basis()) {
        AlgebraElementB b;
        b.add({s, t}, d);
        out.push_back(std::move(b));
      }
  return out;
}

std::vector<AlgebraElementC> Imprimitivity::c_generators() const {
  std::vector<AlgebraElementC> out;
  for (Element k = 0; k < q_.index(); ++k)
    for (Element l = 0; l < q_.index(); ++l)
      for (const auto& d : d_.fiber(k).basis()) {
        AlgebraElementC c;
        c.add({k, l}, d);
        out.push_back(std::move(c));
      }
  return out;
}

std::size_t Imprimitivity::dim_x() const { return q_.parent().order() * d_.section_dim(); }

std::size_t Imprimitivity::dim_b() const {
  std::size_t total = 0;
  for (Element s = 0; s < q_.parent().order(); ++s) total += d_.fiber(coset(s)).dim();
  return total * q_.parent().order();
}

std::size_t Imprimitivity::dim_c() const { return q_.index() * d_.section_dim(); }

UnitElements unit_elements(const Imprimitivity& imp, double tol) {
  const auto& unit_fiber = imp.coefficients().fiber(FiniteGroup::identity());
  const auto unit = algebra_unit(unit_fiber, tol);
  if (!unit || unit_fiber.empty()) throw Error(Errc::NonUnitalUnitFiber, "D_N has no unit");
  UnitElements u;
  for (Element t = 0; t < imp.quotient().parent().order(); ++t) u.unit_b.add({0, t}, *unit);
  for (Element l = 0; l < imp.quotient().index(); ++l) u.unit_c.add({0, l}, *unit);
  return u;
}

// ---------------------------------------------------------------------------

const ItemResult& ImprimitivityReport::item(const std::string& name) const {
  for (const auto& i : items)
    if (i.name == name) return i;
  throw Error(Errc::InvalidParameter, "no report item " + name);
}

ImprimitivityReport verify_imprimitivity(const Imprimitivity& checked, double tol) {
  ImprimitivityReport report;
  for (const auto& x : checked.x_generators()) checked.check_fibers(x);
  for (const auto& b : checked.b_generators()) checked.check_fibers(b);
  for (const auto& c : checked.c_generators()) checked.check_fibers(c);
  // Everything below is built from the generators by the bimodule operations.
  const Imprimitivity imp = checked.without_fiber_checks();
  const auto xs = imp.x_generators();
  const auto bs = imp.b_generators();
  const auto cs = imp.c_generators();
  std::mt19937_64 rng(0x1a7e);

  auto record = [&](ItemResult& item, double residual, double scale) {
    item.residual = std::max(item.residual, residual / scale);
    if (residual > tol * scale) item.pass = false;
  };

  // Random sums complement the generator sweeps with genuinely mixed elements.
  constexpr std::size_t kRandom = 6;
  std::vector<BimoduleElement> rx;
  std::vector<AlgebraElementB> rb;
  std::vector<AlgebraElementC> rc;
  for (std::size_t i = 0; i < kRandom; ++i) {
    rx.push_back(random_combination(xs, 4, rng));
    rb.push_back(random_combination(bs, 4, rng));
    rc.push_back(random_combination(cs, 4, rng));
  }

  ItemResult i1{"(i) bimodule"};
  for (const auto& b : bs)
    for (const auto& b2 : bs) {
      const auto bb = imp.multiply(b, b2);
      for (const auto& x : xs) {
        const auto lhs = imp.left_action(bb, x);
        const auto rhs = imp.left_action(b, imp.left_action(b2, x));
        record(i1, distance(lhs, rhs), 1.0);
      }
    }
  for (const auto& x : xs) {
    for (const auto& c : cs)
      for (const auto& c2 : cs)
        record(i1, distance(imp.right_action(imp.right_action(x, c), c2), imp.right_action(x, imp.multiply(c, c2))),
               1.0);
    for (const auto& b : bs)
      for (const auto& c : cs)
        record(i1, distance(imp.right_action(imp.left_action(b, x), c), imp.left_action(b, imp.right_action(x, c))),
               1.0);
  }
  for (std::size_t i = 0; i < kRandom; ++i) {
    const auto& x = rx[i];
    const auto& b = rb[i];
    const auto& c = rc[i];
    const auto& b2 = rb[(i + 1) % kRandom];
    const auto& c2 = rc[(i + 1) % kRandom];
    const double s = scale_of(x) * scale_of(b) * std::max(scale_of(b2), scale_of(c)) * scale_of(c2);
    record(i1, distance(imp.left_action(imp.multiply(b, b2), x), imp.left_action(b, imp.left_action(b2, x))), s);
    record(i1, distance(imp.right_action(imp.right_action(x, c), c2), imp.right_action(x, imp.multiply(c, c2))), s);
    record(i1, distance(imp.right_action(imp.left_action(b, x), c), imp.left_action(b, imp.right_action(x, c))), s);
  }

  ItemResult i2{"(ii) inner products are module maps"};
  for (const auto& x : xs)
    for (const auto& y : xs) {
      const auto lxy = imp.linner(x, y);
      const auto rxy = imp.rinner(x, y);
      for (const auto& b : bs) record(i2, distance(imp.linner(imp.left_action(b, x), y), imp.multiply(b, lxy)), 1.0);
      for (const auto& c : cs) record(i2, distance(imp.rinner(x, imp.right_action(y, c)), imp.multiply(rxy, c)), 1.0);
    }
  for (std::size_t i = 0; i < kRandom; ++i) {
    const auto& x = rx[i];
    const auto& y = rx[(i + 1) % kRandom];
    const double s = scale_of(x) * scale_of(y) * std::max(scale_of(rb[i]), scale_of(rc[i]));
    record(i2, distance(imp.linner(imp.left_action(rb[i], x), y), imp.multiply(rb[i], imp.linner(x, y))), s);
    record(i2, distance(imp.rinner(x, imp.right_action(y, rc[i])), imp.multiply(imp.rinner(x, y), rc[i])), s);
  }

  ItemResult i3{"(iii) inner products are symmetric"};
  ItemResult i5{"(v) inner products are compatible"};
  std::vector<Vector> b_rows, c_rows;
  for (const auto& x : xs)
    for (const auto& y : xs) {
      const auto lxy = imp.linner(x, y);
      const auto rxy = imp.rinner(x, y);
      record(i3, distance(imp.adjoint(lxy), imp.linner(y, x)), 1.0);
      record(i3, distance(imp.adjoint(rxy), imp.rinner(y, x)), 1.0);
      b_rows.push_back(imp.coordinates(lxy));
      c_rows.push_back(imp.coordinates(rxy));
      for (const auto& z : xs)
        record(i5, distance(imp.right_action(x, imp.rinner(y, z)), imp.left_action(lxy, z)), 1.0);
    }
  for (std::size_t i = 0; i < kRandom; ++i) {
    const auto& x = rx[i];
    const auto& y = rx[(i + 1) % kRandom];
    const auto& z = rx[(i + 2) % kRandom];
    const double s = scale_of(x) * scale_of(y);
    record(i3, distance(imp.adjoint(imp.linner(x, y)), imp.linner(y, x)), s);
    record(i3, distance(imp.adjoint(imp.rinner(x, y)), imp.rinner(y, x)), s);
    record(i5, distance(imp.right_action(x, imp.rinner(y, z)), imp.left_action(imp.linner(x, y), z)),
           s * scale_of(z));
  }

  ItemResult i4{"(iv) linearity"};
  for (std::size_t i = 0; i < kRandom; ++i) {
    const auto& x = rx[i];
    const auto& x2 = rx[(i + 1) % kRandom];
    const auto& y = rx[(i + 2) % kRandom];
    const Complex a = random_complex(rng), b = random_complex(rng);
    const double s = std::max(scale_of(x), scale_of(x2)) * scale_of(y) * (std::abs(a) + std::abs(b));
    record(i4, distance(imp.linner(a * x + b * x2, y), a * imp.linner(x, y) + b * imp.linner(x2, y)), s);
    record(i4, distance(imp.rinner(y, a * x + b * x2), a * imp.rinner(y, x) + b * imp.rinner(y, x2)), s);
  }

  ItemResult i6{"(vi) fullness"};
  report.rank_b = numeric_rank(b_rows, imp.dim_b());
  report.rank_c = numeric_rank(c_rows, imp.dim_c());
  if (report.rank_b != imp.dim_b() || report.rank_c != imp.dim_c()) i6.pass = false;
  i6.residual = static_cast<double>((imp.dim_b() - report.rank_b) + (imp.dim_c() - report.rank_c));

  // Positivity and the norm bounds are eigenvalue problems in the faithful realizations.
  ItemResult i7{"(vii) positivity"};
  ItemResult i8{"(viii) bounded actions"};
  const double positivity_tol = std::max(tol, 1e-8);
  auto check_psd = [&](ItemResult& item, const Matrix& m, double scale) {
    const double lowest = m.size() == 0 ? 0.0 : min_hermitian_eigenvalue(m);
    const double herm = (m - m.adjoint()).norm();
    item.residual = std::max(item.residual, std::max(-lowest, herm) / scale);
    if (lowest < -positivity_tol * scale || herm > positivity_tol * scale) item.pass = false;
  };
  std::vector<BimoduleElement> probes(xs.begin(), xs.end());
  probes.insert(probes.end(), rx.begin(), rx.end());
  for (const auto& x : probes) {
    const double s = scale_of(x) * scale_of(x);
    check_psd(i7, imp.realize(imp.linner(x, x)), s);
    check_psd(i7, imp.realize(imp.rinner(x, x)), s);
  }
  for (std::size_t i = 0; i < kRandom; ++i)
    for (const auto& x : {rx[i], rx[(i + 1) % kRandom]}) {
      const double nb = op_norm(imp.realize(rb[i]));
      const double nc = op_norm(imp.realize(rc[i]));
      const auto bx = imp.left_action(rb[i], x);
      const auto xc = imp.right_action(x, rc[i]);
      const double s = std::max(1.0, nb * nb) * std::max(1.0, nc * nc) * scale_of(x) * scale_of(x);
      check_psd(i8, nb * nb * imp.realize(imp.rinner(x, x)) - imp.realize(imp.rinner(bx, bx)), s);
      check_psd(i8, nc * nc * imp.realize(imp.linner(x, x)) - imp.realize(imp.linner(xc, xc)), s);
    }

  ItemResult units{"unit elements"};
  try {
    const UnitElements u = unit_elements(imp, tol);
    for (const auto& c : cs) {
      record(units, distance(imp.multiply(u.unit_c, c), c), 1.0);
      record(units, distance(imp.multiply(c, u.unit_c), c), 1.0);
    }
    for (const auto& b : bs) {
      record(units, distance(imp.multiply(u.unit_b, b), b), 1.0);
      record(units, distance(imp.multiply(b, u.unit_b), b), 1.0);
    }
    for (const auto& x : xs) {
      record(units, distance(imp.right_action(x, u.unit_c), x), 1.0);
      record(units, distance(imp.left_action(u.unit_b, x), x), 1.0);
    }
  } catch (const Error&) {
    units.pass = false;
  }

  report.items = {i1, i2, i3, i4, i5, i6, i7, i8, units};
  for (const auto& item : report.items) report.pass = report.pass && item.pass;
  return report;
}

EquivarianceReport verify_equivariance(const Imprimitivity& checked, double tol) {
  EquivarianceReport report;
  const Imprimitivity imp = checked.without_fiber_checks();
  const FiniteGroup& g = imp.quotient().parent();
  const auto xs = imp.x_generators();
  const auto cs = imp.c_generators();
  for (Element r = 0; r < g.order(); ++r) {
    for (const auto& x : xs) {
      const auto gx = imp.gamma(r, x);
      for (const auto& y : xs)
        report.linner_residual = std::max(
            report.linner_residual, distance(imp.linner(gx, imp.gamma(r, y)), imp.dual_action(r, imp.linner(x, y))));
      for (const auto& c : cs)
        report.right_action_residual =
            std::max(report.right_action_residual,
                     distance(imp.gamma(r, imp.right_action(x, c)), imp.right_action(gx, imp.inflated_dual_action(r, c))));
      for (Element r2 = 0; r2 < g.order(); ++r2)
        report.action_residual =
            std::max(report.action_residual, distance(imp.gamma(r, imp.gamma(r2, x)), imp.gamma(g.mul(r, r2), x)));
    }
  }
  report.pass = report.linner_residual <= tol && report.right_action_residual <= tol && report.action_residual <= tol;
  return report;
}

MoritaReport morita_report(const Imprimitivity& imp, const ImprimitivityReport& report, double tol) {
  if (!report.pass) throw Error(Errc::AxiomViolation, "imprimitivity checks failed");
  MoritaReport m;
  m.dim_b = imp.dim_b();
  m.dim_c = imp.dim_c();
  m.dim_x = imp.dim_x();
  std::vector<Matrix> bimg, cimg;
  for (const auto& b : imp.b_generators()) bimg.push_back(imp.realize(b));
  for (const auto& c : imp.c_generators()) cimg.push_back(imp.realize(c));
  const MatrixSubspace balg = orthonormalize(bimg, tol);
  const MatrixSubspace calg = orthonormalize(cimg, tol);
  m.blocks_b = wedderburn_block_count(balg, tol);
  m.blocks_c = wedderburn_block_count(calg, tol);
  m.equivalent = m.blocks_b == m.blocks_c && balg.dim() == m.dim_b && calg.dim() == m.dim_c;
  return m;
}

}  // namespace fell
