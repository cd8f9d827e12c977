#include "fellbundle/cli.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fellbundle/amenability.hpp"
#include "fellbundle/duality.hpp"
#include "fellbundle/error.hpp"
#include "fellbundle/imprimitivity.hpp"
#include "fellbundle/spec_io.hpp"

namespace fell::cli {

namespace {

using io::Json;

bool is_input_error(Errc c) {
  switch (c) {
    case Errc::ParseError:
    case Errc::ValidationError:
    case Errc::UnknownCommand:
    case Errc::InvalidParameter:
    case Errc::NonAssociativeTable:
    case Errc::MissingIdentity:
    case Errc::NotAPermutationRow:
    case Errc::NotASubgroup:
    case Errc::NotNormal:
    case Errc::DimensionMismatch:
    case Errc::NonFiniteEntry:
    case Errc::GroupMismatch:
    case Errc::ShapeMismatch:
    case Errc::TrivialN:
    case Errc::GNormExceeded:
    case Errc::ValueOutsideUnitFiber:
      return true;
    default:
      return false;
  }
}

struct Options {
  std::string spec;
  std::optional<double> tol;
  std::string normal;
  std::string group;
  std::string output;
  std::string format = "json";
  std::string witness;
  std::string stabilizer;
};

Json header(const std::string& command) { return {{"schema", io::kSchema}, {"command", command}}; }

double tolerance(const Options& o, const std::optional<double>& from_spec) {
  if (o.tol) {
    if (!(*o.tol > 0.0)) throw Error(Errc::InvalidParameter, "--tol must be positive");
    return *o.tol;
  }
  return from_spec.value_or(kDefaultTol);
}

FiniteGroup parent_group(const Options& o, const char* command) {
  if (o.group.empty()) throw Error(Errc::ParseError, std::string(command) + " needs --group");
  return build_group(io::group_descriptor_from_string(o.group));
}

Subgroup normal_subgroup(const FiniteGroup& g, const Options& o, const std::optional<std::vector<Element>>& fallback) {
  std::vector<Element> members;
  if (!o.normal.empty()) members = io::element_list(o.normal);
  else if (fallback) members = *fallback;
  else throw Error(Errc::ParseError, "a normal subgroup is required (--normal)");
  for (Element s : members)
    if (s >= g.order()) throw Error(Errc::ValidationError, "--normal: element " + std::to_string(s) + " out of range");
  return make_normal_subgroup(g, members);
}

Quotient quotient_for(const GradedBundle& d, const Options& o, const io::BundleSpec& spec, const char* command) {
  const FiniteGroup g = parent_group(o, command);
  Quotient q(g, normal_subgroup(g, o, std::nullopt));
  (void)spec;
  if (!(q.group() == d.group()))
    throw Error(Errc::GroupMismatch, "the bundle's group is not G/N for the given --group and --normal");
  return q;
}

Json isomorphism_json(const IsomorphismReport& r) {
  return {{"pass", r.pass}, {"residual", r.residual}, {"failure", r.failure}};
}

Json axioms_json(const AxiomReport& r) {
  Json families = Json::array();
  for (const auto& f : r.families) families.push_back({{"name", f}, {"pass", r.family_passed(f)}});
  Json violations = Json::array();
  for (const auto& v : r.violations)
    violations.push_back({{"axiom", v.axiom}, {"s", v.s}, {"t", v.t}, {"residual", v.residual}});
  return {{"pass", r.pass}, {"families", families}, {"violations", violations}};
}

Json dims_json(const std::vector<MatrixSubspace>& spaces) {
  Json dims = Json::array();
  for (const auto& s : spaces) dims.push_back(s.dim());
  return dims;
}

using Command = std::function<int(const Options&, Json&)>;

int cmd_verify(const Options& o, Json& report) {
  const auto spec = io::parse_spec(o.spec);
  const double tol = tolerance(o, spec.tolerance);
  const AxiomReport axioms = verify_fell_axioms(spec.bundle, tol);
  report["axioms"] = axioms_json(axioms);
  report["group_order"] = spec.group.order();
  report["ambient_dim"] = spec.bundle.ambient_dim();
  report["section_dim"] = spec.bundle.section_dim();
  report["pass"] = axioms.pass;
  return axioms.pass ? kExitPass : kExitCheckFailed;
}

int cmd_pullback(const Options& o, Json& report) {
  const auto spec = io::parse_spec(o.spec);
  const double tol = tolerance(o, spec.tolerance);
  const Quotient q = quotient_for(spec.bundle, o, spec, "pullback");
  const GradedBundle p = pullback(spec.bundle, q, tol);
  const AxiomReport axioms = verify_fell_axioms(p, tol);
  report["axioms"] = axioms_json(axioms);
  report["group_order"] = q.parent().order();
  report["ambient_dim"] = p.ambient_dim();
  report["section_dim"] = p.section_dim();
  report["pass"] = axioms.pass;
  if (!o.output.empty()) {
    std::ofstream f(o.output);
    if (!f) throw Error(Errc::ParseError, o.output + ": cannot write file");
    f << io::bundle_to_json(io::group_descriptor_from_string(o.group), p).dump(2) << "\n";
  }
  return axioms.pass ? kExitPass : kExitCheckFailed;
}

int cmd_crossed(const Options& o, Json& report) {
  const auto spec = io::parse_spec(o.spec);
  const double tol = tolerance(o, spec.tolerance);
  const CrossedProductCheck c = verify_crossed_product(crossed_product(spec.bundle, tol), tol);
  report["dimension"] = c.dimension;
  report["expected_dimension"] = c.expected_dimension;
  report["residuals"] = {{"groupoid", c.groupoid},
                         {"isometry", c.isometry},
                         {"covariance", c.covariance},
                         {"dual_action", c.dual_action}};
  report["pass"] = c.pass;
  return c.pass ? kExitPass : kExitCheckFailed;
}

int cmd_imprimitivity(const Options& o, Json& report) {
  const auto spec = io::parse_spec(o.spec);
  const double tol = tolerance(o, spec.tolerance);
  const Quotient q = quotient_for(spec.bundle, o, spec, "imprimitivity");
  const Imprimitivity imp(spec.bundle, q);
  const ImprimitivityReport r = verify_imprimitivity(imp, tol);
  Json items = Json::array();
  for (const auto& it : r.items) items.push_back({{"name", it.name}, {"pass", it.pass}, {"residual", it.residual}});
  report["items"] = items;
  report["rank_b"] = r.rank_b;
  report["rank_c"] = r.rank_c;
  const EquivarianceReport eq = verify_equivariance(imp);
  report["equivariance"] = {{"pass", eq.pass},
                            {"linner_residual", eq.linner_residual},
                            {"right_action_residual", eq.right_action_residual},
                            {"action_residual", eq.action_residual}};
  bool pass = r.pass && eq.pass;
  if (r.pass) {
    const MoritaReport m = morita_report(imp, r, tol);
    report["morita"] = {{"dim_b", m.dim_b},       {"dim_c", m.dim_c},       {"dim_x", m.dim_x},
                        {"blocks_b", m.blocks_b}, {"blocks_c", m.blocks_c}, {"equivalent", m.equivalent}};
    pass = pass && m.equivalent;
  }
  report["pass"] = pass;
  return pass ? kExitPass : kExitCheckFailed;
}

Json twist_json(const TwistedAction& t) {
  Json twist = Json::object();
  for (std::size_t i = 0; i < t.normal.order(); ++i)
    twist[std::to_string(t.normal.members()[i])] = io::matrix_to_json(t.twist[i]);
  return twist;
}

int cmd_landstad(const Options& o, Json& report) {
  const Json doc = io::read_json_file(o.spec);
  if (io::is_action_spec(doc)) {
    const io::ActionSpec spec = io::parse_action_spec(doc);
    const double tol = tolerance(o, spec.tolerance);
    validate_twisted_action(spec.action, tol);
    const ConcreteBundle d = concretize(twisted_semidirect_bundle(spec.action, tol), tol);
    const Quotient q(spec.action.group, spec.action.normal);
    const LandstadResult r = landstad_reconstruct(d.bundle, q, landstad_canonical_family(spec.action, d), tol);
    report["source"] = "twisted_action";
    report["coefficient_dim"] = r.action.algebra.dim();
    report["twist"] = twist_json(r.action);
    report["isomorphism"] = isomorphism_json(r.isomorphism);
    report["pass"] = r.isomorphism.pass;
    return r.isomorphism.pass ? kExitPass : kExitCheckFailed;
  }
  const io::BundleSpec spec = io::parse_bundle_spec(doc);
  const double tol = tolerance(o, spec.tolerance);
  if (!spec.multipliers) throw Error(Errc::ParseError, "landstad needs \"multipliers\" in the bundle spec");
  const Quotient q = quotient_for(spec.bundle, o, spec, "landstad");
  const FiniteGroup& g = q.parent();
  UnitaryMultiplierFamily u;
  u.domain = g;
  for (Element s = 0; s < g.order(); ++s) u.degree.push_back(q.coset_of(s));
  const auto n = static_cast<Eigen::Index>(spec.bundle.ambient_dim());
  u.unitaries.assign(g.order(), Matrix::Zero(n, n));
  std::vector<bool> seen(g.order(), false);
  for (const auto& [s, m] : *spec.multipliers) {
    if (s >= g.order()) throw Error(Errc::ValidationError, "multipliers." + std::to_string(s) + ": out of range");
    u.unitaries[s] = m;
    seen[s] = true;
  }
  for (Element s = 0; s < g.order(); ++s)
    if (!seen[s]) throw Error(Errc::ValidationError, "multipliers: missing element " + std::to_string(s));
  const LandstadResult r = landstad_reconstruct(spec.bundle, q, u, tol);
  report["source"] = "bundle";
  report["coefficient_dim"] = r.action.algebra.dim();
  report["twist"] = twist_json(r.action);
  report["isomorphism"] = isomorphism_json(r.isomorphism);
  report["pass"] = r.isomorphism.pass;
  return r.isomorphism.pass ? kExitPass : kExitCheckFailed;
}

int cmd_olesen_pedersen(const Options& o, Json& report) {
  const io::ActionSpec spec = io::parse_action_spec(io::read_json_file(o.spec));
  const double tol = tolerance(o, spec.tolerance);
  const TwistedAction& t = spec.action;
  validate_twisted_action(t, tol);
  const OlesenPedersenReport fwd = olesen_pedersen_forward(t, tol);
  report["forward"] = {{"semidirect_dim", fwd.semidirect_dim},
                       {"pullback_dim", fwd.pullback_dim},
                       {"isomorphism", isomorphism_json(fwd.isomorphism)},
                       {"pass", fwd.pass}};
  const ConcreteBundle a = concretize(semidirect_bundle(t, tol), tol);
  const std::vector<Matrix> tau = extract_twist(t, a, t.normal, semidirect_multiplier_family(t, a), tol);
  double residual = 0.0;
  Json extracted = Json::object();
  for (std::size_t i = 0; i < tau.size(); ++i) {
    residual = std::max(residual, (tau[i] - t.twist[i]).norm());
    extracted[std::to_string(t.normal.members()[i])] = io::matrix_to_json(tau[i]);
  }
  const bool twist_ok = residual <= std::max(tol, 1e-8);
  report["extracted_twist"] = {{"twist", extracted}, {"residual", residual}, {"pass", twist_ok}};
  report["pass"] = fwd.pass && twist_ok;
  return fwd.pass && twist_ok ? kExitPass : kExitCheckFailed;
}

int cmd_gsimple(const Options& o, Json& report) {
  const Json doc = io::read_json_file(o.spec);
  std::optional<SectionAlgebra> s;
  double tol = kDefaultTol;
  if (io::is_action_spec(doc)) {
    const io::ActionSpec spec = io::parse_action_spec(doc);
    tol = tolerance(o, spec.tolerance);
    validate_action(spec.action, tol);
    report["source"] = "semidirect_product";
    report["invariant_coefficient_ideals"] = dims_json(action_invariant_ideals(spec.action, tol));
    s.emplace(concretize(semidirect_bundle(spec.action, tol), tol).bundle, tol);
  } else {
    const io::BundleSpec spec = io::parse_bundle_spec(doc);
    tol = tolerance(o, spec.tolerance);
    report["source"] = "bundle";
    s.emplace(spec.bundle, tol);
  }
  report["section_dim"] = s->total().dim();
  report["graded_ideals"] = dims_json(graded_ideals(*s, tol));
  report["g_simple"] = is_G_simple(*s, tol);
  report["pass"] = true;
  return kExitPass;
}

int cmd_obstruction(const Options& o, Json& report) {
  const FiniteGroup g = parent_group(o, "obstruction");
  GSetAction act;
  if (!o.stabilizer.empty()) {
    std::vector<Element> h = io::element_list(o.stabilizer);
    for (Element s : h)
      if (s >= g.order()) throw Error(Errc::ValidationError, "--stabilizer: element out of range");
    act = coset_action(g, Subgroup::make(g, h));
  } else if (!o.spec.empty()) {
    const Json doc = io::read_json_file(o.spec);
    auto it = doc.find("perm");
    if (!doc.is_object() || it == doc.end() || !it->is_array())
      throw Error(Errc::ParseError, "perm: expected one permutation per group element");
    act.group = g;
    for (const auto& row : *it) {
      if (!row.is_array()) throw Error(Errc::ParseError, "perm: expected arrays of points");
      std::vector<std::size_t> p;
      for (const auto& x : row) {
        if (!x.is_number_unsigned()) throw Error(Errc::ParseError, "perm: points must be indices");
        p.push_back(x.get<std::size_t>());
      }
      act.perm.push_back(std::move(p));
    }
    act.size = act.perm.empty() ? 0 : act.perm.front().size();
    try {
      validate_gset(act);
    } catch (const Error& e) {
      throw Error(Errc::ValidationError, e.what());
    }
  } else {
    throw Error(Errc::ParseError, "obstruction needs --stabilizer or a G-set file");
  }
  const Subgroup n = normal_subgroup(g, o, std::nullopt);
  const ObstructionReport r = stabilizer_obstruction(act, n);
  const double tol = tolerance(o, std::nullopt);
  const TwistedAction fa = function_algebra_action(act);
  const SectionAlgebra s(concretize(semidirect_bundle(fa, tol), tol).bundle, tol);
  report["points"] = act.size;
  report["kernel"] = r.kernel.members();
  report["normal"] = n.members();
  report["induced_possible"] = r.induced_possible;
  report["verdict"] = r.verdict;
  report["crossed_product_dim"] = s.total().dim();
  report["g_simple"] = is_G_simple(s, tol);
  report["pass"] = true;
  return kExitPass;
}

int cmd_ep(const Options& o, Json& report) {
  const auto spec = io::parse_spec(o.spec);
  const double tol = tolerance(o, spec.tolerance);
  EPWitness w;
  if (o.witness.empty()) {
    w = uniform_witness(spec.bundle, tol);
    report["witness"] = "uniform";
  } else {
    w = io::parse_witness(io::read_json_file(o.witness), spec.bundle);
    report["witness"] = "file";
  }
  const EPDefect d = ep_defect(spec.bundle, w, tol);
  report["bound"] = d.bound;
  report["defect"] = d.defect;
  const bool pass = d.defect <= tol;
  report["pass"] = pass;
  return pass ? kExitPass : kExitCheckFailed;
}

int cmd_report(const Options& o, Json& report) {
  const auto spec = io::parse_spec(o.spec);
  const double tol = tolerance(o, spec.tolerance);
  const AxiomReport axioms = verify_fell_axioms(spec.bundle, tol);
  report["axioms"] = axioms_json(axioms);
  report["group_order"] = spec.group.order();
  report["ambient_dim"] = spec.bundle.ambient_dim();
  report["section_dim"] = spec.bundle.section_dim();
  if (!axioms.pass) {
    report["pass"] = false;
    return kExitCheckFailed;
  }
  Json fibers = Json::array();
  for (const auto& f : spec.bundle.fibers()) fibers.push_back(f.dim());
  report["fiber_dims"] = fibers;
  const SectionAlgebra s(spec.bundle, tol);
  report["wedderburn_blocks"] = wedderburn_block_count(s.total(), tol);
  report["g_simple"] = is_G_simple(s, tol);
  const AmenabilityReport a = amenability_report(spec.bundle, tol);
  report["amenability"] = {{"regular_rep_kernel_dim", a.regular_rep_kernel_dim},
                           {"ep_exact_witness_found", a.ep_exact_witness_found},
                           {"witness", a.witness},
                           {"bound", a.witness_defect.bound},
                           {"defect", a.witness_defect.defect}};
  report["pass"] = true;
  return kExitPass;
}

}  // namespace

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  const std::map<std::string, Command> commands{
      {"verify", cmd_verify},           {"pullback", cmd_pullback},
      {"crossed", cmd_crossed},         {"imprimitivity", cmd_imprimitivity},
      {"landstad", cmd_landstad},       {"olesen-pedersen", cmd_olesen_pedersen},
      {"gsimple", cmd_gsimple},         {"obstruction", cmd_obstruction},
      {"ep", cmd_ep},                   {"report", cmd_report},
  };

  const std::map<std::string, std::string> descriptions{
      {"verify", "check the Fell bundle axioms"},
      {"pullback", "pull a bundle back along G -> G/N"},
      {"crossed", "build and check the crossed product"},
      {"imprimitivity", "check the imprimitivity bimodule over G/N"},
      {"landstad", "rebuild a twisted action from a bundle and multipliers"},
      {"olesen-pedersen", "check the semidirect/pullback isomorphism and the twist"},
      {"gsimple", "list graded ideals"},
      {"obstruction", "stabilizer obstruction to being induced from G/N"},
      {"ep", "approximation property defect of a witness"},
      {"report", "summary of axioms, fibers, blocks and amenability"},
  };

  CLI::App app{"Finite-dimensional Fell bundle toolkit", "fellbundle"};
  app.require_subcommand(1);
  Options o;
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, _] : commands) {
    CLI::App* sub = app.add_subcommand(name, descriptions.at(name));
    sub->add_option("spec", o.spec, "bundle, action or G-set spec file")->required(name != "obstruction");
    sub->add_option("--tol", o.tol, "numerical tolerance (default 1e-9)");
    sub->add_option("--normal", o.normal, "normal subgroup as a comma list of elements");
    sub->add_option("--group", o.group, "parent group, e.g. cyclic:4 or product:cyclic:2*cyclic:2");
    sub->add_option("-o,--output", o.output, "output path");
    sub->add_option("--format", o.format, "report format")->check(CLI::IsMember({"json"}));
    if (name == "ep") sub->add_option("--witness", o.witness, "witness file {\"f\": {elem: matrix}}");
    if (name == "obstruction") sub->add_option("--stabilizer", o.stabilizer, "act on the cosets of this subgroup");
    subs[name] = sub;
  }

  if (argc >= 2) {
    const std::string first = argv[1];
    if (!first.empty() && first[0] != '-' && !commands.count(first)) {
      err << "UnknownCommand: " << first << "\n";
      return kExitInputError;
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "ParseError: " << e.what() << "\n";
    return kExitInputError;
  }

  std::string name;
  for (const auto& [n, sub] : subs)
    if (sub->parsed()) name = n;

  Json report = header(name);
  int code = kExitPass;
  try {
    code = commands.at(name)(o, report);
  } catch (const Error& e) {
    if (is_input_error(e.code())) {
      err << e.what() << "\n";
      return kExitInputError;
    }
    report["pass"] = false;
    report["error"] = e.what();
    code = kExitCheckFailed;
  } catch (const Json::exception& e) {
    err << "ParseError: " << e.what() << "\n";
    return kExitInputError;
  }
  const std::string text = report.dump(2) + "\n";
  out << text;
  if (!o.output.empty() && name != "pullback") {
    std::ofstream f(o.output);
    if (!f) {
      err << "cannot write " << o.output << "\n";
      return kExitInputError;
    }
    f << text;
  }
  return code;
}

}  // namespace fell::cli
