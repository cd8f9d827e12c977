#include "fellbundle/spec_io.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include "fellbundle/error.hpp"

namespace fell::io {

namespace {

[[noreturn]] void parse_error(const std::string& field, const std::string& what) {
  throw Error(Errc::ParseError, field + ": " + what);
}

[[noreturn]] void validation_error(const std::string& field, const std::string& what) {
  throw Error(Errc::ValidationError, field + ": " + what);
}

const Json& require(const Json& j, const char* key, const std::string& field) {
  if (!j.is_object()) parse_error(field, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) parse_error(field, std::string("missing field \"") + key + "\"");
  return *it;
}

std::size_t positive_integer(const Json& j, const std::string& field) {
  if (!j.is_number_integer() || j.get<long long>() <= 0) parse_error(field, "expected a positive integer");
  return j.get<std::size_t>();
}

Element element_key(const std::string& key, std::size_t order, const std::string& field) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(key, &pos);
  } catch (const std::exception&) {
    parse_error(field, "key \"" + key + "\" is not an element index");
  }
  if (pos != key.size()) parse_error(field, "key \"" + key + "\" is not an element index");
  if (v >= order) validation_error(field, "element " + key + " is out of range");
  return static_cast<Element>(v);
}

std::vector<Element> element_array(const Json& j, std::size_t order, const std::string& field) {
  if (!j.is_array()) parse_error(field, "expected an array of element indices");
  std::vector<Element> out;
  for (const auto& x : j) {
    if (!x.is_number_unsigned()) parse_error(field, "expected element indices");
    const auto v = x.get<std::size_t>();
    if (v >= order) validation_error(field, "element " + std::to_string(v) + " is out of range");
    out.push_back(v);
  }
  return out;
}

/// A map element -> matrix, as used by fibers, witnesses and multipliers.
std::vector<std::pair<Element, Matrix>> element_matrix_map(const Json& j, std::size_t order, std::size_t n,
                                                           const std::string& field) {
  if (!j.is_object()) parse_error(field, "expected an object keyed by element index");
  std::vector<std::pair<Element, Matrix>> out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string f = field + "." + it.key();
    out.emplace_back(element_key(it.key(), order, f), matrix_from_json(it.value(), n, f));
  }
  return out;
}

std::optional<double> tolerance_of(const Json& j) {
  auto it = j.find("tolerance");
  if (it == j.end()) return std::nullopt;
  if (!it->is_number() || it->get<double>() <= 0.0) parse_error("tolerance", "expected a positive number");
  return it->get<double>();
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(Json::array({m(i, k).real(), m(i, k).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j, std::size_t n, const std::string& field) {
  if (!j.is_array()) parse_error(field, "expected a matrix (array of rows)");
  if (j.size() != n) validation_error(field, "expected " + std::to_string(n) + " rows, got " + std::to_string(j.size()));
  const auto ni = static_cast<Eigen::Index>(n);
  Matrix m(ni, ni);
  for (std::size_t i = 0; i < n; ++i) {
    const Json& row = j[i];
    if (!row.is_array()) parse_error(field, "row " + std::to_string(i) + " is not an array");
    if (row.size() != n)
      validation_error(field, "row " + std::to_string(i) + " has " + std::to_string(row.size()) + " entries, expected " +
                                  std::to_string(n));
    for (std::size_t k = 0; k < n; ++k) {
      const Json& e = row[k];
      Complex z;
      if (e.is_number()) {
        z = e.get<double>();
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        z = Complex(e[0].get<double>(), e[1].get<double>());
      } else {
        parse_error(field, "entry (" + std::to_string(i) + ", " + std::to_string(k) + ") is not [re, im]");
      }
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) validation_error(field, "non-finite entry");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = z;
    }
  }
  return m;
}

GroupDescriptor group_descriptor_from_json(const Json& j, const std::string& field) {
  using Kind = GroupDescriptor::Kind;
  const Json& kind = require(j, "kind", field);
  if (!kind.is_string()) parse_error(field + ".kind", "expected a string");
  const std::string k = kind.get<std::string>();
  GroupDescriptor d;
  if (k == "table") {
    d.kind = Kind::Table;
    const Json& t = require(j, "table", field);
    if (!t.is_array()) parse_error(field + ".table", "expected an array of rows");
    for (const auto& row : t) {
      if (!row.is_array()) parse_error(field + ".table", "expected an array of rows");
      std::vector<Element> r;
      for (const auto& x : row) {
        if (!x.is_number_unsigned()) parse_error(field + ".table", "entries must be element indices");
        r.push_back(x.get<Element>());
      }
      d.table.push_back(std::move(r));
    }
    return d;
  }
  const Json& params = require(j, "params", field);
  if (!params.is_array() || params.empty()) parse_error(field + ".params", "expected a non-empty array");
  if (k == "direct_product") {
    d.kind = Kind::DirectProduct;
    for (std::size_t i = 0; i < params.size(); ++i)
      d.factors.push_back(group_descriptor_from_json(params[i], field + ".params[" + std::to_string(i) + "]"));
    return d;
  }
  if (k == "cyclic") d.kind = Kind::Cyclic;
  else if (k == "dihedral") d.kind = Kind::Dihedral;
  else if (k == "symmetric") d.kind = Kind::Symmetric;
  else parse_error(field + ".kind", "unknown group kind \"" + k + "\"");
  d.param = positive_integer(params[0], field + ".params[0]");
  return d;
}

Json group_descriptor_to_json(const GroupDescriptor& d) {
  using Kind = GroupDescriptor::Kind;
  switch (d.kind) {
    case Kind::Cyclic: return {{"kind", "cyclic"}, {"params", {d.param}}};
    case Kind::Dihedral: return {{"kind", "dihedral"}, {"params", {d.param}}};
    case Kind::Symmetric: return {{"kind", "symmetric"}, {"params", {d.param}}};
    case Kind::DirectProduct: {
      Json params = Json::array();
      for (const auto& f : d.factors) params.push_back(group_descriptor_to_json(f));
      return {{"kind", "direct_product"}, {"params", params}};
    }
    case Kind::Table: return {{"kind", "table"}, {"table", d.table}};
  }
  return {};
}

GroupDescriptor group_descriptor_from_string(const std::string& s) {
  using Kind = GroupDescriptor::Kind;
  const auto colon = s.find(':');
  if (colon == std::string::npos) parse_error("--group", "expected kind:parameter, got \"" + s + "\"");
  const std::string kind = s.substr(0, colon), rest = s.substr(colon + 1);
  GroupDescriptor d;
  if (kind == "product") {
    d.kind = Kind::DirectProduct;
    std::stringstream ss(rest);
    std::string part;
    while (std::getline(ss, part, '*')) d.factors.push_back(group_descriptor_from_string(part));
    if (d.factors.empty()) parse_error("--group", "product needs factors");
    return d;
  }
  if (kind == "cyclic") d.kind = Kind::Cyclic;
  else if (kind == "dihedral") d.kind = Kind::Dihedral;
  else if (kind == "symmetric") d.kind = Kind::Symmetric;
  else parse_error("--group", "unknown group kind \"" + kind + "\"");
  std::size_t pos = 0;
  try {
    d.param = std::stoul(rest, &pos);
  } catch (const std::exception&) {
    parse_error("--group", "bad parameter \"" + rest + "\"");
  }
  if (pos != rest.size() || d.param == 0) parse_error("--group", "bad parameter \"" + rest + "\"");
  return d;
}

std::vector<Element> element_list(const std::string& s) {
  std::vector<Element> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    std::size_t pos = 0;
    try {
      out.push_back(std::stoul(part, &pos));
    } catch (const std::exception&) {
      parse_error("element list", "bad element \"" + part + "\"");
    }
    if (pos != part.size()) parse_error("element list", "bad element \"" + part + "\"");
  }
  return out;
}

bool is_action_spec(const Json& j) { return j.is_object() && j.contains("coefficient_algebra"); }

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, path + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(Errc::ParseError, path + ": " + e.what());
  }
}

BundleSpec parse_bundle_spec(const Json& j) {
  if (!j.is_object()) parse_error("<root>", "expected an object");
  if (auto it = j.find("schema"); it != j.end() && *it != kSchema) validation_error("schema", "unsupported schema");
  BundleSpec spec;
  spec.group_descriptor = group_descriptor_from_json(require(j, "group", "<root>"), "group");
  try {
    spec.group = build_group(spec.group_descriptor);
  } catch (const Error& e) {
    validation_error("group", e.what());
  }
  const std::size_t n = positive_integer(require(j, "ambient_dim", "<root>"), "ambient_dim");
  const std::size_t order = spec.group.order();
  const Json& fibers = require(j, "fibers", "<root>");
  if (!fibers.is_object()) parse_error("fibers", "expected an object keyed by element index");
  std::vector<std::vector<Matrix>> spans(order);
  for (auto it = fibers.begin(); it != fibers.end(); ++it) {
    const std::string f = "fibers." + it.key();
    const Element s = element_key(it.key(), order, f);
    if (!it->is_array()) parse_error(f, "expected a list of matrices");
    for (std::size_t i = 0; i < it->size(); ++i)
      spans[s].push_back(matrix_from_json((*it)[i], n, f + "[" + std::to_string(i) + "]"));
  }
  spec.tolerance = tolerance_of(j);
  const double tol = spec.tolerance.value_or(kDefaultTol);
  std::vector<MatrixSubspace> subspaces;
  for (const auto& span : spans) subspaces.push_back(orthonormalize(span, n, tol));
  spec.bundle = GradedBundle(spec.group, n, std::move(subspaces));
  if (auto it = j.find("normal_subgroup"); it != j.end())
    spec.normal = element_array(*it, order, "normal_subgroup");
  if (auto it = j.find("multipliers"); it != j.end())
    spec.multipliers = element_matrix_map(*it, std::numeric_limits<std::size_t>::max(), n, "multipliers");
  return spec;
}

BundleSpec parse_spec(const std::string& path) { return parse_bundle_spec(read_json_file(path)); }

ActionSpec parse_action_spec(const Json& j) {
  if (!j.is_object()) parse_error("<root>", "expected an object");
  if (auto it = j.find("schema"); it != j.end() && *it != kSchema) validation_error("schema", "unsupported schema");
  ActionSpec spec;
  spec.group_descriptor = group_descriptor_from_json(require(j, "group", "<root>"), "group");
  FiniteGroup g = cyclic_group(1);
  try {
    g = build_group(spec.group_descriptor);
  } catch (const Error& e) {
    validation_error("group", e.what());
  }
  const std::size_t n = positive_integer(require(j, "ambient_dim", "<root>"), "ambient_dim");
  spec.tolerance = tolerance_of(j);
  const double tol = spec.tolerance.value_or(kDefaultTol);

  const Json& alg = require(j, "coefficient_algebra", "<root>");
  if (!alg.is_array()) parse_error("coefficient_algebra", "expected a list of matrices");
  std::vector<Matrix> span;
  for (std::size_t i = 0; i < alg.size(); ++i)
    span.push_back(matrix_from_json(alg[i], n, "coefficient_algebra[" + std::to_string(i) + "]"));
  const MatrixSubspace algebra = orthonormalize(span, n, tol);

  std::vector<Matrix> unitaries(g.order(), identity(n));
  if (auto it = j.find("implementing_unitaries"); it != j.end())
    for (auto& [s, m] : element_matrix_map(*it, g.order(), n, "implementing_unitaries")) unitaries[s] = m;

  Subgroup normal = Subgroup::trivial();
  if (auto it = j.find("normal_subgroup"); it != j.end()) {
    try {
      normal = make_normal_subgroup(g, element_array(*it, g.order(), "normal_subgroup"));
    } catch (const Error& e) {
      validation_error("normal_subgroup", e.what());
    }
  }
  std::vector<Matrix> twist;
  if (normal.order() > 1 || j.contains("twist")) {
    twist.assign(normal.order(), identity(n));
    if (auto it = j.find("twist"); it != j.end())
      for (auto& [m, t] : element_matrix_map(*it, g.order(), n, "twist")) {
        if (!normal.contains(m)) validation_error("twist." + std::to_string(m), "element is not in the normal subgroup");
        twist[normal.local_index(m)] = t;
      }
  }
  try {
    spec.action = inner_twisted_action(algebra, g, unitaries, normal, twist);
  } catch (const Error& e) {
    if (e.code() == Errc::InvalidAction || e.code() == Errc::InvalidTwist || e.code() == Errc::NotUnital ||
        e.code() == Errc::NotAnAlgebra)
      throw;
    validation_error("<root>", e.what());
  }
  return spec;
}

Json bundle_to_json(const GroupDescriptor& group, const GradedBundle& bundle) {
  Json fibers = Json::object();
  for (Element s = 0; s < bundle.group().order(); ++s) {
    Json list = Json::array();
    for (const auto& b : bundle.fiber(s).basis()) list.push_back(matrix_to_json(b));
    if (!list.empty()) fibers[std::to_string(s)] = std::move(list);
  }
  return {{"schema", kSchema},
          {"group", group_descriptor_to_json(group)},
          {"ambient_dim", bundle.ambient_dim()},
          {"fibers", std::move(fibers)}};
}

EPWitness parse_witness(const Json& j, const GradedBundle& a) {
  const std::size_t n = a.ambient_dim();
  EPWitness w{std::vector<Matrix>(a.group().order(), Matrix::Zero(static_cast<Eigen::Index>(n),
                                                                   static_cast<Eigen::Index>(n)))};
  for (auto& [s, m] : element_matrix_map(require(j, "f", "<root>"), a.group().order(), n, "f")) w.f[s] = m;
  return w;
}

}  // namespace fell::io
