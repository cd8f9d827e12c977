#include "fellbundle/group.hpp"

#include <algorithm>
#include <iostream>
#include <numeric>
#include <set>

#include "fellbundle/error.hpp"

namespace fell {

FiniteGroup FiniteGroup::from_table(std::vector<std::vector<Element>> table) {
  const std::size_t n = table.size();
  if (n == 0) throw Error(Errc::InvalidParameter, "empty Cayley table");
  for (const auto& row : table)
    if (row.size() != n) throw Error(Errc::InvalidParameter, "Cayley table is not square");

  auto is_permutation = [n](auto&& at) {
    std::vector<bool> seen(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      const Element v = at(i);
      if (v >= n || seen[v]) return false;
      seen[v] = true;
    }
    return true;
  };
  for (std::size_t r = 0; r < n; ++r) {
    if (!is_permutation([&](std::size_t i) { return table[r][i]; }))
      throw Error(Errc::NotAPermutationRow, "row " + std::to_string(r) + " is not a permutation");
    if (!is_permutation([&](std::size_t i) { return table[i][r]; }))
      throw Error(Errc::NotAPermutationRow, "column " + std::to_string(r) + " is not a permutation");
  }

  for (std::size_t i = 0; i < n; ++i)
    if (table[0][i] != i || table[i][0] != i)
      throw Error(Errc::MissingIdentity, "element 0 must act as the identity");

  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (table[table[a][b]][c] != table[a][table[b][c]])
          throw Error(Errc::NonAssociativeTable, "(" + std::to_string(a) + "," + std::to_string(b) +
                                                     "," + std::to_string(c) + ") not associative");

  if (n > kGroupSoftCap)
    std::cerr << "warning: group of order " << n << " exceeds the soft cap of " << kGroupSoftCap
              << "; matrix sizes grow quadratically\n";

  FiniteGroup g;
  g.inverse_.assign(n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (table[a][b] == 0) g.inverse_[a] = b;
  g.table_ = std::move(table);
  return g;
}

FiniteGroup cyclic_group(std::size_t m) {
  if (m == 0) throw Error(Errc::InvalidParameter, "cyclic group order must be positive");
  std::vector<std::vector<Element>> t(m, std::vector<Element>(m));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) t[a][b] = (a + b) % m;
  return FiniteGroup::from_table(std::move(t));
}

FiniteGroup dihedral_group(std::size_t m) {
  if (m == 0) throw Error(Errc::InvalidParameter, "dihedral parameter must be positive");
  const std::size_t n = 2 * m;
  std::vector<std::vector<Element>> t(n, std::vector<Element>(n));
  // s^f1 r^i1 s^f2 r^i2 = s^(f1+f2) r^(±i1 + i2), using r^i s = s r^-i.
  for (std::size_t x = 0; x < n; ++x) {
    const std::size_t f1 = x / m, i1 = x % m;
    for (std::size_t y = 0; y < n; ++y) {
      const std::size_t f2 = y / m, i2 = y % m;
      const std::size_t rot = ((f2 == 1 ? (m - i1) % m : i1) + i2) % m;
      t[x][y] = ((f1 + f2) % 2) * m + rot;
    }
  }
  return FiniteGroup::from_table(std::move(t));
}

FiniteGroup symmetric_group(std::size_t m) {
  if (m == 0) throw Error(Errc::InvalidParameter, "symmetric group degree must be positive");
  std::vector<std::vector<std::size_t>> perms;
  std::vector<std::size_t> p(m);
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));

  const std::size_t n = perms.size();
  std::vector<std::vector<Element>> t(n, std::vector<Element>(n));
  std::vector<std::size_t> composed(m);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t x = 0; x < m; ++x) composed[x] = perms[a][perms[b][x]];
      t[a][b] = static_cast<Element>(
          std::lower_bound(perms.begin(), perms.end(), composed) - perms.begin());
    }
  return FiniteGroup::from_table(std::move(t));
}

FiniteGroup direct_product(const FiniteGroup& g, const FiniteGroup& h) {
  const std::size_t ng = g.order(), nh = h.order();
  std::vector<std::vector<Element>> t(ng * nh, std::vector<Element>(ng * nh));
  for (std::size_t a = 0; a < ng * nh; ++a)
    for (std::size_t b = 0; b < ng * nh; ++b)
      t[a][b] = g.mul(a / nh, b / nh) * nh + h.mul(a % nh, b % nh);
  return FiniteGroup::from_table(std::move(t));
}

FiniteGroup build_group(const GroupDescriptor& desc) {
  using Kind = GroupDescriptor::Kind;
  switch (desc.kind) {
    case Kind::Cyclic: return cyclic_group(desc.param);
    case Kind::Dihedral: return dihedral_group(desc.param);
    case Kind::Symmetric:
      if (desc.param > 6) throw Error(Errc::InvalidParameter, "symmetric groups limited to degree 6");
      return symmetric_group(desc.param);
    case Kind::DirectProduct: {
      if (desc.factors.empty()) throw Error(Errc::InvalidParameter, "direct product needs factors");
      FiniteGroup g = build_group(desc.factors.front());
      for (std::size_t i = 1; i < desc.factors.size(); ++i)
        g = direct_product(g, build_group(desc.factors[i]));
      return g;
    }
    case Kind::Table: return FiniteGroup::from_table(desc.table);
  }
  throw Error(Errc::InvalidParameter, "unknown group kind");
}

// ---------------------------------------------------------------------------

Subgroup Subgroup::make(const FiniteGroup& g, std::vector<Element> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (members.empty() || members.front() != 0)
    throw Error(Errc::NotASubgroup, "subgroup must contain the identity");
  if (members.back() >= g.order()) throw Error(Errc::NotASubgroup, "element out of range");
  const std::set<Element> set(members.begin(), members.end());
  for (Element a : members) {
    if (!set.count(g.inv(a))) throw Error(Errc::NotASubgroup, "not closed under inverses");
    for (Element b : members)
      if (!set.count(g.mul(a, b))) throw Error(Errc::NotASubgroup, "not closed under products");
  }
  return Subgroup(std::move(members));
}

Subgroup Subgroup::whole(const FiniteGroup& g) {
  std::vector<Element> all(g.order());
  std::iota(all.begin(), all.end(), 0);
  return Subgroup(std::move(all));
}

bool Subgroup::contains(Element s) const {
  return std::binary_search(members_.begin(), members_.end(), s);
}

std::size_t Subgroup::local_index(Element s) const {
  const auto it = std::lower_bound(members_.begin(), members_.end(), s);
  if (it == members_.end() || *it != s)
    throw Error(Errc::NotASubgroup, "element " + std::to_string(s) + " is not a member");
  return static_cast<std::size_t>(it - members_.begin());
}

bool Subgroup::is_normal_in(const FiniteGroup& g) const {
  for (Element s = 0; s < g.order(); ++s)
    for (Element n : members_)
      if (!contains(g.conj(s, n))) return false;
  return true;
}

FiniteGroup Subgroup::as_group(const FiniteGroup& parent) const {
  const std::size_t k = members_.size();
  std::vector<std::vector<Element>> t(k, std::vector<Element>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) t[i][j] = local_index(parent.mul(members_[i], members_[j]));
  return FiniteGroup::from_table(std::move(t));
}

Subgroup make_normal_subgroup(const FiniteGroup& g, std::vector<Element> members) {
  Subgroup h = Subgroup::make(g, std::move(members));
  if (!h.is_normal_in(g)) throw Error(Errc::NotNormal, "subgroup is not normal");
  return h;
}

Subgroup generated_subgroup(const FiniteGroup& g, const std::vector<Element>& generators) {
  std::set<Element> members{0};
  std::vector<Element> frontier{0};
  while (!frontier.empty()) {
    std::vector<Element> next;
    for (Element x : frontier)
      for (Element s : generators) {
        if (s >= g.order()) throw Error(Errc::NotASubgroup, "generator out of range");
        const Element y = g.mul(x, s);
        if (members.insert(y).second) next.push_back(y);
      }
    frontier = std::move(next);
  }
  return Subgroup::make(g, {members.begin(), members.end()});
}

std::vector<Subgroup> normal_subgroups(const FiniteGroup& g) {
  // Every normal subgroup is the join of the normal closures of its elements,
  // so closing the set of normal closures under joins finds them all.
  auto normal_closure = [&](std::vector<Element> gens) {
    std::vector<Element> conjugates;
    for (Element x : gens)
      for (Element s = 0; s < g.order(); ++s) conjugates.push_back(g.conj(s, x));
    return generated_subgroup(g, conjugates).members();
  };

  std::set<std::vector<Element>> found{{0}};
  for (Element x = 0; x < g.order(); ++x) found.insert(normal_closure({x}));
  bool grew = true;
  while (grew) {
    grew = false;
    const std::vector<std::vector<Element>> current(found.begin(), found.end());
    for (std::size_t i = 0; i < current.size(); ++i)
      for (std::size_t j = i + 1; j < current.size(); ++j) {
        std::vector<Element> joined = current[i];
        joined.insert(joined.end(), current[j].begin(), current[j].end());
        if (found.insert(generated_subgroup(g, joined).members()).second) grew = true;
      }
  }

  std::vector<Subgroup> out;
  for (const auto& m : found) out.push_back(Subgroup::make(g, m));
  std::stable_sort(out.begin(), out.end(),
                   [](const Subgroup& a, const Subgroup& b) { return a.order() < b.order(); });
  return out;
}

// ---------------------------------------------------------------------------

Quotient::Quotient(const FiniteGroup& parent, Subgroup normal)
    : parent_(parent), normal_(std::move(normal)), group_(cyclic_group(1)) {
  if (!normal_.is_normal_in(parent_)) throw Error(Errc::NotNormal, "quotient by a non-normal subgroup");
  const std::size_t n = parent_.order();
  constexpr Element kUnset = static_cast<Element>(-1);
  coset_of_.assign(n, kUnset);
  for (Element s = 0; s < n; ++s) {
    if (coset_of_[s] != kUnset) continue;
    const Element k = section_.size();
    section_.push_back(s);  // smallest member, since s is scanned in order
    for (Element m : normal_.members()) coset_of_[parent_.mul(s, m)] = k;
  }
  const std::size_t q = section_.size();
  std::vector<std::vector<Element>> t(q, std::vector<Element>(q));
  for (std::size_t a = 0; a < q; ++a)
    for (std::size_t b = 0; b < q; ++b) t[a][b] = coset_of_[parent_.mul(section_[a], section_[b])];
  group_ = FiniteGroup::from_table(std::move(t));
}

Element Quotient::n_part(Element s) const { return parent_.mul(parent_.inv(section(coset_of(s))), s); }

std::vector<Element> Quotient::coset_members(Element coset) const {
  std::vector<Element> out;
  for (Element s = 0; s < parent_.order(); ++s)
    if (coset_of_[s] == coset) out.push_back(s);
  return out;
}

Matrix left_regular(const FiniteGroup& g, Element s) {
  const auto n = static_cast<Eigen::Index>(g.order());
  Matrix m = Matrix::Zero(n, n);
  for (Element h = 0; h < g.order(); ++h) m(static_cast<Eigen::Index>(g.mul(s, h)), static_cast<Eigen::Index>(h)) = 1.0;
  return m;
}

Matrix right_regular(const FiniteGroup& g, Element r) {
  const auto n = static_cast<Eigen::Index>(g.order());
  Matrix m = Matrix::Zero(n, n);
  const Element rinv = g.inv(r);
  for (Element h = 0; h < g.order(); ++h) m(static_cast<Eigen::Index>(g.mul(h, rinv)), static_cast<Eigen::Index>(h)) = 1.0;
  return m;
}

RegularRepresentations regular_representations(const FiniteGroup& g) {
  RegularRepresentations reps;
  for (Element s = 0; s < g.order(); ++s) {
    reps.left.push_back(left_regular(g, s));
    reps.right.push_back(right_regular(g, s));
  }
  return reps;
}

}  // namespace fell
