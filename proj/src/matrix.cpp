#include "fellbundle/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "fellbundle/error.hpp"

namespace fell {

namespace {

Vector vec(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

Matrix unvec(const Vector& v, std::size_t n) {
  return Eigen::Map<const Matrix>(v.data(), static_cast<Eigen::Index>(n),
                                  static_cast<Eigen::Index>(n));
}

// Fixed seed: every randomized probe in this file is reproducible run to run.
std::mt19937_64& probe_rng() {
  thread_local std::mt19937_64 rng(0x5eed'f311ULL);
  return rng;
}

Matrix generic_element(const MatrixSubspace& a, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Vector c(static_cast<Eigen::Index>(a.dim()));
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = Complex(normal(rng), normal(rng));
  return a.from_coordinates(c);
}

constexpr std::size_t kExhaustiveLimit = 64;
constexpr std::size_t kProbeCount = 4;

}  // namespace

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix matrix_unit(std::size_t n, std::size_t row, std::size_t col) {
  Matrix e = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  e(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = 1.0;
  return e;
}

Matrix identity(std::size_t n) {
  return Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
}

Complex hs_inner(const Matrix& a, const Matrix& b) { return (a.adjoint() * b).trace(); }

double hs_norm(const Matrix& a) { return a.norm(); }

double op_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  const Matrix gram = m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double min_hermitian_eigenvalue(const Matrix& m) {
  const Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool is_psd(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const double norm = op_norm(m);
  if (op_norm(m - m.adjoint()) > tol * std::max(1.0, norm)) return false;
  return min_hermitian_eigenvalue(m) >= -tol * norm;
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

// ---------------------------------------------------------------------------

MatrixSubspace::MatrixSubspace(std::size_t ambient_dim)
    : ambient_(ambient_dim),
      flat_(static_cast<Eigen::Index>(ambient_dim * ambient_dim), 0) {}

Vector MatrixSubspace::coordinates(const Matrix& m) const {
  if (static_cast<std::size_t>(m.rows()) != ambient_ ||
      static_cast<std::size_t>(m.cols()) != ambient_)
    throw Error(Errc::DimensionMismatch, "matrix does not live in the ambient algebra");
  return flat_.adjoint() * vec(m);
}

Matrix MatrixSubspace::from_coordinates(const Vector& c) const {
  if (static_cast<std::size_t>(c.size()) != dim())
    throw Error(Errc::DimensionMismatch, "coordinate vector has wrong length");
  if (dim() == 0) return Matrix::Zero(static_cast<Eigen::Index>(ambient_),
                                      static_cast<Eigen::Index>(ambient_));
  return unvec(flat_ * c, ambient_);
}

Matrix MatrixSubspace::project(const Matrix& m) const { return from_coordinates(coordinates(m)); }

double MatrixSubspace::residual(const Matrix& m) const { return (m - project(m)).norm(); }

bool MatrixSubspace::contains(const Matrix& m, double tol) const {
  return residual(m) <= tol * std::max(1.0, m.norm());
}

bool MatrixSubspace::contains(const MatrixSubspace& other, double tol) const {
  return std::all_of(other.basis_.begin(), other.basis_.end(),
                     [&](const Matrix& m) { return contains(m, tol); });
}

bool MatrixSubspace::same_span(const MatrixSubspace& other, double tol) const {
  return dim() == other.dim() && contains(other, tol) && other.contains(*this, tol);
}

MatrixSubspace orthonormalize(std::span<const Matrix> mats, std::size_t ambient_dim,
                              double tol) {
  MatrixSubspace out(ambient_dim);
  double max_norm = 0.0;
  for (const auto& m : mats) {
    if (static_cast<std::size_t>(m.rows()) != ambient_dim ||
        static_cast<std::size_t>(m.cols()) != ambient_dim)
      throw Error(Errc::DimensionMismatch, "orthonormalize: matrices must share one square shape");
    if (!m.allFinite()) throw Error(Errc::NonFiniteEntry, "orthonormalize: non-finite entry");
    max_norm = std::max(max_norm, m.norm());
  }
  if (max_norm == 0.0) return out;

  std::vector<Vector> accepted;
  for (const auto& m : mats) {
    Vector v = vec(m);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : accepted) v -= q.dot(v) * q;
    const double r = v.norm();
    if (r < tol * max_norm) continue;
    accepted.push_back(v / r);
  }
  out.flat_.resize(static_cast<Eigen::Index>(ambient_dim * ambient_dim),
                   static_cast<Eigen::Index>(accepted.size()));
  for (std::size_t i = 0; i < accepted.size(); ++i) {
    out.flat_.col(static_cast<Eigen::Index>(i)) = accepted[i];
    out.basis_.push_back(unvec(accepted[i], ambient_dim));
  }
  return out;
}

MatrixSubspace orthonormalize(std::span<const Matrix> mats, double tol) {
  if (mats.empty()) return MatrixSubspace(0);
  return orthonormalize(mats, static_cast<std::size_t>(mats.front().rows()), tol);
}

MatrixSubspace product_span(const MatrixSubspace& s, const MatrixSubspace& t, double tol) {
  if (s.ambient_dim() != t.ambient_dim())
    throw Error(Errc::DimensionMismatch, "product_span: ambient dimensions differ");
  std::vector<Matrix> products;
  products.reserve(s.dim() * t.dim());
  for (const auto& a : s.basis())
    for (const auto& b : t.basis()) products.push_back(a * b);
  return orthonormalize(products, s.ambient_dim(), tol);
}

MatrixSubspace adjoint_span(const MatrixSubspace& s, double tol) {
  std::vector<Matrix> adj;
  for (const auto& a : s.basis()) adj.push_back(a.adjoint());
  return orthonormalize(adj, s.ambient_dim(), tol);
}

MatrixSubspace sum_span(const MatrixSubspace& s, const MatrixSubspace& t, double tol) {
  if (s.ambient_dim() != t.ambient_dim())
    throw Error(Errc::DimensionMismatch, "sum_span: ambient dimensions differ");
  std::vector<Matrix> all(s.basis());
  all.insert(all.end(), t.basis().begin(), t.basis().end());
  return orthonormalize(all, s.ambient_dim(), tol);
}

bool is_star_algebra(const MatrixSubspace& a, double tol) {
  for (const auto& b : a.basis())
    if (!a.contains(Matrix(b.adjoint()), tol)) return false;
  if (a.dim() <= kExhaustiveLimit) {
    for (const auto& x : a.basis())
      for (const auto& y : a.basis())
        if (!a.contains(Matrix(x * y), tol)) return false;
    return true;
  }
  // Membership of x*y is polynomial in (x, y): failing on a proper subvariety
  // means generic probes detect it with probability one.
  auto& rng = probe_rng();
  for (std::size_t i = 0; i < kProbeCount; ++i) {
    const Matrix x = generic_element(a, rng);
    const Matrix y = generic_element(a, rng);
    if (!a.contains(Matrix(x * y), tol)) return false;
  }
  return true;
}

std::optional<Matrix> algebra_unit(const MatrixSubspace& a, double tol) {
  const auto n = static_cast<Eigen::Index>(a.ambient_dim());
  if (a.dim() == 0) return Matrix::Zero(n, n);
  Matrix h = Matrix::Zero(n, n);
  for (const auto& b : a.basis()) h += b * b.adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const double top = es.eigenvalues().maxCoeff();
  Matrix p = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (es.eigenvalues()(i) > 1e-8 * top) {
      const Vector v = es.eigenvectors().col(i);
      p += v * v.adjoint();
    }
  }
  if (!a.contains(p, tol)) return std::nullopt;
  for (const auto& b : a.basis()) {
    if ((p * b - b).norm() > tol * std::max(1.0, b.norm())) return std::nullopt;
    if ((b * p - b).norm() > tol * std::max(1.0, b.norm())) return std::nullopt;
  }
  return p;
}

MatrixSubspace algebra_center(const MatrixSubspace& a, double tol) {
  if (!is_star_algebra(a, tol)) throw Error(Errc::NotAnAlgebra, "not closed under product/adjoint");
  if (!algebra_unit(a, tol)) throw Error(Errc::NotUnital, "algebra has no unit");
  const std::size_t k = a.dim();
  if (k == 0) return MatrixSubspace(a.ambient_dim());

  std::vector<Matrix> probes;
  if (k <= 24) {
    probes = a.basis();
  } else {
    // Finite-dimensional semisimple algebras are generated by two generic
    // elements, so commuting with a few probes is commuting with all of A.
    auto& rng = probe_rng();
    for (std::size_t i = 0; i < kProbeCount; ++i) probes.push_back(generic_element(a, rng));
  }

  const auto n2 = static_cast<Eigen::Index>(a.ambient_dim() * a.ambient_dim());
  Matrix constraints(n2 * static_cast<Eigen::Index>(probes.size()), static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < k; ++i) {
    const Matrix& ai = a[i];
    for (std::size_t p = 0; p < probes.size(); ++p) {
      const Matrix comm = ai * probes[p] - probes[p] * ai;
      constraints.block(static_cast<Eigen::Index>(p) * n2, static_cast<Eigen::Index>(i), n2, 1) =
          vec(comm);
    }
  }
  const Matrix gram = constraints.adjoint() * constraints;
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  const double top = std::max(1.0, es.eigenvalues().maxCoeff());
  const double floor = std::pow(std::max(tol, 1e-12) * 100.0, 2) * top;
  std::vector<Matrix> central;
  for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j)
    if (es.eigenvalues()(j) <= floor) central.push_back(a.from_coordinates(es.eigenvectors().col(j)));
  return orthonormalize(central, a.ambient_dim(), 1e-6);
}

std::size_t wedderburn_block_count(const MatrixSubspace& a, double tol) {
  return algebra_center(a, tol).dim();
}

std::vector<Matrix> minimal_central_projections(const MatrixSubspace& a, double tol) {
  const MatrixSubspace z = algebra_center(a, tol);
  const std::size_t m = z.dim();
  if (m == 0) return {};
  if (m == 1) return {*algebra_unit(a, tol)};

  auto& rng = probe_rng();
  for (int attempt = 0; attempt < 8; ++attempt) {
    Matrix h = generic_element(z, rng);
    h = 0.5 * (h + h.adjoint());
    // Multiplication by a Hermitian central element is HS-self-adjoint on Z.
    Matrix lh(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t j = 0; j < m; ++j)
      lh.col(static_cast<Eigen::Index>(j)) = z.coordinates(Matrix(h * z[j]));
    lh = 0.5 * (lh + lh.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(lh);
    const auto& ev = es.eigenvalues();
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    bool separated = true;
    for (Eigen::Index j = 1; j < ev.size(); ++j)
      if (ev(j) - ev(j - 1) < 1e-6 * scale) separated = false;
    if (!separated) continue;

    std::vector<Matrix> projections;
    bool ok = true;
    for (Eigen::Index j = 0; j < ev.size(); ++j) {
      const Matrix x = z.from_coordinates(es.eigenvectors().col(j));
      const Complex c = (x * x).trace() / x.trace();
      const Matrix p = x / c;
      if ((p * p - p).norm() > 1e-6 || (p - p.adjoint()).norm() > 1e-6) ok = false;
      projections.push_back(0.5 * (p + p.adjoint()));
    }
    if (!ok) continue;
    std::sort(projections.begin(), projections.end(), [](const Matrix& l, const Matrix& r) {
      const double tl = l.trace().real(), tr = r.trace().real();
      if (std::abs(tl - tr) > 1e-6) return tl < tr;
      for (Eigen::Index i = 0; i < l.rows(); ++i) {
        const double dl = l(i, i).real(), dr = r(i, i).real();
        if (std::abs(dl - dr) > 1e-6) return dl > dr;
      }
      return false;
    });
    return projections;
  }
  throw Error(Errc::NotAnAlgebra, "could not separate minimal central projections");
}

std::vector<std::size_t> wedderburn_block_sizes(const MatrixSubspace& a, double tol) {
  std::vector<std::size_t> sizes;
  for (const auto& p : minimal_central_projections(a, tol)) {
    std::vector<Matrix> cut;
    for (const auto& b : a.basis()) cut.push_back(b * p);
    const auto dim = orthonormalize(cut, a.ambient_dim(), 1e-8).dim();
    sizes.push_back(static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(dim)))));
  }
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

}  // namespace fell
