#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library's subspace or center code.

#include <algorithm>
#include <cstddef>
#include <random>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "fellbundle/group.hpp"

namespace oracle {

using fell::Element;
using fell::Matrix;

inline Matrix vec(const Matrix& m) { return Eigen::Map<const Matrix>(m.data(), m.size(), 1); }

/// Rank by singular values relative to the largest one.
inline std::size_t rank(const Matrix& columns, double rel = 1e-9) {
  if (columns.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(columns);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) r += sv(i) > rel * sv(0);
  return r;
}

/// Dimension of the linear span of a list of square matrices.
inline std::size_t span_dim(const std::vector<Matrix>& mats) {
  if (mats.empty()) return 0;
  Matrix cols(mats.front().size(), static_cast<Eigen::Index>(mats.size()));
  for (std::size_t i = 0; i < mats.size(); ++i) cols.col(static_cast<Eigen::Index>(i)) = vec(mats[i]);
  return rank(cols);
}

inline double op_norm(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

/// Dimension of the center of the algebra spanned by `span`: the nullity of
/// c ↦ (Σ_i c_i [a_i, a_j])_j after reducing `span` to a basis.
inline std::size_t center_dim(const std::vector<Matrix>& span) {
  std::vector<Matrix> basis;
  for (const auto& m : span) {
    std::vector<Matrix> trial = basis;
    trial.push_back(m);
    if (span_dim(trial) > basis.size()) basis.push_back(m);
  }
  const auto d = static_cast<Eigen::Index>(basis.size());
  if (d == 0) return 0;
  const Eigen::Index n2 = basis.front().size();
  Matrix system(n2 * d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      const auto& a = basis[static_cast<std::size_t>(i)];
      const auto& b = basis[static_cast<std::size_t>(j)];
      system.block(j * n2, i, n2, 1) = vec(Matrix(a * b - b * a));
    }
  Eigen::JacobiSVD<Matrix> svd(system);
  const auto& sv = svd.singularValues();
  double scale = 0.0;
  for (const auto& m : basis) scale = std::max(scale, m.norm());
  std::size_t nonzero = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) nonzero += sv(i) > 1e-9 * std::max(1.0, scale * scale);
  return static_cast<std::size_t>(d) - nonzero;
}

/// Every normal subgroup by enumerating all subsets containing the identity.
inline std::vector<std::vector<Element>> brute_force_normal_subgroups(const fell::FiniteGroup& g) {
  const std::size_t n = g.order();
  std::vector<std::vector<Element>> out;
  for (unsigned long mask = 1; mask < (1ul << n); mask += 2) {
    std::vector<Element> h;
    for (Element s = 0; s < n; ++s)
      if (mask >> s & 1ul) h.push_back(s);
    const auto in = [&](Element s) { return (mask >> s & 1ul) != 0; };
    bool ok = true;
    for (Element a : h) {
      for (Element b : h) ok = ok && in(g.mul(a, b));
      for (Element s = 0; s < n; ++s) ok = ok && in(g.mul(g.mul(s, a), g.inv(s)));
    }
    if (ok) out.push_back(h);
  }
  return out;
}

/// Composition of permutations of {0..m-1} as functions: (στ)(x) = σ(τ(x)).
inline std::vector<std::size_t> compose(const std::vector<std::size_t>& s, const std::vector<std::size_t>& t) {
  std::vector<std::size_t> r(s.size());
  for (std::size_t x = 0; x < s.size(); ++x) r[x] = s[t[x]];
  return r;
}

inline Matrix random_matrix(std::mt19937& rng, Eigen::Index n) {
  std::normal_distribution<double> nd;
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = {nd(rng), nd(rng)};
  return m;
}

}  // namespace oracle
