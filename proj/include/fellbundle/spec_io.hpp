#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "fellbundle/amenability.hpp"
#include "fellbundle/twisted.hpp"

namespace fell::io {

using Json = nlohmann::json;

inline constexpr const char* kSchema = "fellbundle/1";

/// [[[re, im], ...], ...] row-major.
Json matrix_to_json(const Matrix& m);
/// Accepts [re, im] pairs or plain numbers. Throws ParseError on malformed
/// entries and ValidationError when the shape is not n x n.
Matrix matrix_from_json(const Json& j, std::size_t n, const std::string& field);

/// {"kind": "cyclic"|"dihedral"|"symmetric", "params": [m]},
/// {"kind": "direct_product", "params": [G, H]} or {"kind": "table", "table": [[...]]}.
GroupDescriptor group_descriptor_from_json(const Json& j, const std::string& field);
Json group_descriptor_to_json(const GroupDescriptor& d);
/// "cyclic:4", "dihedral:3", "symmetric:3" or "product:cyclic:2*cyclic:2".
GroupDescriptor group_descriptor_from_string(const std::string& s);

/// Comma-separated element indices.
std::vector<Element> element_list(const std::string& s);

struct BundleSpec {
  GroupDescriptor group_descriptor;
  FiniteGroup group = cyclic_group(1);
  GradedBundle bundle{cyclic_group(1), 1, std::vector<MatrixSubspace>(1, MatrixSubspace(1))};
  std::optional<std::vector<Element>> normal;
  std::optional<double> tolerance;
  /// Optional "multipliers": element of the parent group -> matrix. Keys are
  /// range-checked by the caller, which knows the parent group.
  std::optional<std::vector<std::pair<Element, Matrix>>> multipliers;
};

struct ActionSpec {
  GroupDescriptor group_descriptor;
  TwistedAction action;
  std::optional<double> tolerance;
};

/// True when the document describes a twisted action rather than a bundle.
bool is_action_spec(const Json& j);

Json read_json_file(const std::string& path);
BundleSpec parse_bundle_spec(const Json& j);
BundleSpec parse_spec(const std::string& path);
ActionSpec parse_action_spec(const Json& j);

Json bundle_to_json(const GroupDescriptor& group, const GradedBundle& bundle);

/// {"f": {"<element>": matrix}} with unlisted elements zero.
EPWitness parse_witness(const Json& j, const GradedBundle& a);

}  // namespace fell::io
