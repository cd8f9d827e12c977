// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <sys/wait.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fellbundle/amenability.hpp"
#include "fellbundle/catalog.hpp"
#include "fellbundle/cross_sectional.hpp"
#include "fellbundle/duality.hpp"
#include "fellbundle/imprimitivity.hpp"
#include "fellbundle/multipliers.hpp"
#include "oracles.hpp"

using namespace fell;

namespace {

/// Collects the failed sub-checks of one criterion.
struct Check {
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

Quotient z4_mod_2() {
  const FiniteGroup z4 = cyclic_group(4);
  return Quotient(z4, make_normal_subgroup(z4, {0, 2}));
}

Quotient s3_mod_a3() { return Quotient(symmetric_group(3), catalog::s3_alternating()); }

/// The twisted S3 example: a bundle over S3/A3.
GradedBundle s3_example() { return concretize(twisted_semidirect_bundle(catalog::s3_matrix_action(true))).bundle; }

struct Example {
  std::string name;
  GradedBundle bundle;
};

std::vector<Example> battery() {
  return {
      {"Pauli over Z2", catalog::pauli_bundle()},
      {"trivial over Z4", trivial_bundle(cyclic_group(4), catalog::scalars(1))},
      {"trivial over S3", trivial_bundle(symmetric_group(3), catalog::scalars(1))},
      {"Pauli pulled back to Z4", pullback(catalog::pauli_bundle(), z4_mod_2())},
      {"twisted Z4 example", concretize(twisted_semidirect_bundle(catalog::z4_scalar_twist(-1.0))).bundle},
      {"swap action on C^2", concretize(semidirect_bundle(catalog::swap_action())).bundle},
  };
}

double min_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(0.5 * (m + m.adjoint())));
  return es.eigenvalues().minCoeff();
}

void fell_axioms(Check& c) {
  for (const auto& e : battery()) c.expect(verify_fell_axioms(e.bundle, 1e-8).pass, e.name);
}

void imprimitivity(Check& c) {
  const std::vector<std::pair<std::string, Imprimitivity>> cases{
      {"Pauli over Z4/{0,2}", Imprimitivity(catalog::pauli_bundle(), z4_mod_2())},
      {"twisted S3 example over S3/A3", Imprimitivity(s3_example(), s3_mod_a3())}};
  for (const auto& [name, imp] : cases) {
    const ImprimitivityReport r = verify_imprimitivity(imp, 1e-8);
    for (const auto& item : r.items) c.expect(item.pass, name + ": " + item.name);
    c.expect(r.items.size() == 9, name + ": eight items plus units");
    c.expect(r.rank_b == imp.dim_b() && r.rank_c == imp.dim_c(), name + ": fullness ranks");
    // Independent eigenvalue check on every generator.
    for (const auto& x : imp.x_generators()) {
      c.expect(min_eigenvalue(imp.realize(imp.linner(x, x))) >= -1e-8, name + ": <x,x>_B >= 0");
      c.expect(min_eigenvalue(imp.realize(imp.rinner(x, x))) >= -1e-8, name + ": <x,x>_C >= 0");
    }
  }
}

void morita(Check& c) {
  const Imprimitivity imp(catalog::pauli_bundle(), z4_mod_2());
  const MoritaReport m = morita_report(imp, verify_imprimitivity(imp, 1e-8));
  c.expect(m.dim_c == 4, "dim C = 4");
  c.expect(m.dim_b == 16, "dim B = 16");
  c.expect(m.dim_x == 8, "dim X = 8");
  std::vector<Matrix> bs, cs;
  for (const auto& b : imp.b_generators()) bs.push_back(imp.realize(b));
  for (const auto& x : imp.c_generators()) cs.push_back(imp.realize(x));
  c.expect(oracle::center_dim(bs) == 1, "oracle: B is simple");
  c.expect(oracle::center_dim(cs) == 1, "oracle: C is simple");
  c.expect(m.blocks_b == 1 && m.blocks_c == 1, "block counts 1 = 1");
  c.expect(m.equivalent, "reported equivalent");
}

void equivariance(Check& c) {
  for (const Imprimitivity& imp :
       {Imprimitivity(catalog::pauli_bundle(), z4_mod_2()), Imprimitivity(s3_example(), s3_mod_a3())}) {
    const EquivarianceReport r = verify_equivariance(imp, 1e-10);
    c.expect(r.pass, "equivariance report");
    c.expect(r.linner_residual <= 1e-10, "left inner product residual");
    c.expect(r.right_action_residual <= 1e-10, "right action residual");
  }
}

void round_trips(Check& c) {
  const std::vector<std::pair<GradedBundle, Quotient>> cases{{catalog::pauli_bundle(), z4_mod_2()},
                                                             {s3_example(), s3_mod_a3()}};
  for (const auto& [d, q] : cases) {
    const RoundTrip back = quotient_of_pullback(d, q, 1e-8);
    c.expect(back.isomorphism.pass && back.isomorphism.residual <= 1e-8, "quotient of pullback");
    const GradedBundle p = pullback(d, q);
    const RoundTrip forth = pullback_of_quotient(p, q, canonical_multiplier_family(d, q), 1e-8);
    c.expect(forth.isomorphism.pass && forth.isomorphism.residual <= 1e-8, "pullback of quotient");
  }
}

void olesen_pedersen(Check& c) {
  const TwistedAction twisted = catalog::z4_scalar_twist(-1.0);
  c.expect(olesen_pedersen_forward(twisted, 1e-8).pass, "twisted Z4 forward map");
  c.expect(olesen_pedersen_forward(catalog::z4_scalar_twist(1.0), 1e-8).pass, "untwisted Z4 forward map");
  const ConcreteBundle a = concretize(semidirect_bundle(twisted));
  const auto tau = extract_twist(twisted, a, twisted.normal, semidirect_multiplier_family(twisted, a));
  const auto& members = twisted.normal.members();
  bool found = false;
  for (std::size_t i = 0; i < members.size(); ++i)
    if (members[i] == 2) {
      found = true;
      c.expect(tau[i].rows() == 1 && std::abs(tau[i](0, 0) + 1.0) < 1e-12, "tau(2) = -1");
    }
  c.expect(found, "2 lies in N");
}

void obstruction(Check& c) {
  const FiniteGroup s3 = symmetric_group(3);
  const GSetAction act = coset_action(s3, Subgroup::make(s3, {0, catalog::kS3Transposition}));
  std::vector<Element> kernel;
  for (Element s = 0; s < s3.order(); ++s) {
    bool fixes_all = true;
    for (std::size_t x = 0; x < act.size; ++x) fixes_all = fixes_all && act.perm[s][x] == x;
    if (fixes_all) kernel.push_back(s);
  }
  c.expect(kernel == std::vector<Element>{0}, "enumerated kernel is {e}");
  const Subgroup a3 = catalog::s3_alternating();
  c.expect(a3.members() == std::vector<Element>{0, 3, 4}, "A3 = {0,3,4}");
  const ObstructionReport r = stabilizer_obstruction(act, a3);
  c.expect(r.kernel.members() == kernel, "reported kernel");
  c.expect(!r.induced_possible, "induced_possible is false");
  c.expect(r.verdict.rfind("not weakly induced from G/N with N = {0,3,4}", 0) == 0, "verdict: " + r.verdict);
  const SectionAlgebra dual(concretize(semidirect_bundle(function_algebra_action(act))).bundle);
  c.expect(dual.total().dim() == 18, "crossed product has dimension 18");
  c.expect(is_G_simple(dual), "G-simple");
}

void ep(Check& c) {
  for (const auto& e : battery()) {
    const EPDefect d = ep_defect(e.bundle, uniform_witness(e.bundle));
    c.expect(std::abs(d.bound - 1.0) < 1e-12 && d.defect < 1e-12, "uniform witness on " + e.name);
  }
  const Quotient q = z4_mod_2();
  const GradedBundle pauli = catalog::pauli_bundle();
  const std::vector<Complex> constant(2, 1.0 / std::sqrt(2.0));
  const EPDefect h = ep_defect(pullback(pauli, q), ep_pullback_witness(pauli, uniform_witness(pauli), constant, q));
  c.expect(h.defect < 1e-12 && h.bound <= 1.0 + 1e-12, "constant g on the Pauli pullback");

  // Random (f, g) on the twisted S3 example, whose unit fiber is not scalar.
  const GradedBundle d = s3_example();
  const Quotient s3q = s3_mod_a3();
  std::mt19937 rng(17);
  std::normal_distribution<double> nd;
  auto bound_of = [](const EPWitness& w) {
    Matrix sum = Matrix::Zero(w.f.front().rows(), w.f.front().cols());
    for (const auto& v : w.f) sum += v.adjoint() * v;
    return oracle::op_norm(sum);
  };
  int violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    EPWitness f;
    for (Element s = 0; s < 2; ++s) {
      Matrix v = Matrix::Zero(static_cast<Eigen::Index>(d.ambient_dim()), static_cast<Eigen::Index>(d.ambient_dim()));
      for (const auto& b : d.fiber(0).basis()) v += Complex(nd(rng), nd(rng)) * b;
      f.f.push_back(v);
    }
    std::vector<Complex> g;
    double g2 = 0.0;
    for (std::size_t i = 0; i < s3q.normal().order(); ++i) {
      g.emplace_back(nd(rng), nd(rng));
      g2 += std::norm(g.back());
    }
    const double scale = std::sqrt(std::uniform_real_distribution<double>(0.05, 1.0)(rng) / g2);
    g2 = 0.0;
    for (auto& z : g) {
      z *= scale;
      g2 += std::norm(z);
    }
    const EPWitness w = ep_pullback_witness(d, f, g, s3q);
    if (bound_of(w) > bound_of(f) * g2 * (1.0 + 1e-9) + 1e-12) ++violations;
  }
  c.expect(violations == 0, std::to_string(violations) + " random bound violations");
}

void dimension_law(Check& c) {
  std::vector<Example> all = battery();
  all.push_back({"twisted S3 example", s3_example()});
  for (const auto& e : all) {
    const CrossedProductCheck r = verify_crossed_product(crossed_product(e.bundle));
    c.expect(r.dimension == e.bundle.group().order() * e.bundle.section_dim(), e.name + ": dimension");
    c.expect(r.isometry <= 1e-10, e.name + ": isometry");
    c.expect(r.pass, e.name + ": crossed product checks");
  }
}

struct Captured {
  int code = -1;
  std::string out;
};

Captured run_cli(const std::string& args) {
  const auto path = std::filesystem::temp_directory_path() / "fellbundle_acceptance_out.txt";
  const std::string cmd = std::string("\"") + FELLBUNDLE_CLI + "\" " + args + " > \"" + path.string() + "\" 2>/dev/null";
  const int status = std::system(cmd.c_str());
  Captured r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  r.out = buf.str();
  std::filesystem::remove(path);
  return r;
}

void cli(Check& c) {
  const std::string data = FELLBUNDLE_TEST_DATA;
  for (const std::string& args :
       {"verify " + data + "/pauli.json", "report " + data + "/pauli.json",
        "imprimitivity " + data + "/pauli.json --group cyclic:4 --normal 0,2",
        "olesen-pedersen " + data + "/z4_twist.json",
        std::string("obstruction --group symmetric:3 --stabilizer 0,2 --normal 0,3,4"),
        "ep " + data + "/pauli.json"}) {
    const Captured a = run_cli(args), b = run_cli(args);
    c.expect(a.code == 0 && !a.out.empty(), "runs: " + args);
    c.expect(a.out == b.out, "byte-identical: " + args);
  }
  c.expect(run_cli("verify " + data + "/broken_involution.json").code == 1, "corrupted involution exits 1");
  c.expect(run_cli("verify " + data + "/malformed.json").code == 2, "malformed spec exits 2");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
      {"fell axioms on the example battery", fell_axioms},
      {"imprimitivity bimodule identities", imprimitivity},
      {"Morita dimensions and block counts", morita},
      {"dual-action equivariance", equivariance},
      {"quotient and pullback round trips", round_trips},
      {"Olesen-Pedersen forward map and twist extraction", olesen_pedersen},
      {"stabilizer obstruction and G-simplicity", obstruction},
      {"approximation property witnesses", ep},
      {"crossed product dimension law and isometry", dimension_law},
      {"CLI determinism and exit codes", cli},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    const bool ok = c.failures.empty();
    failed += ok ? 0 : 1;
    std::cout << (ok ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first;
    if (!ok) {
      std::cout << " (";
      for (std::size_t k = 0; k < c.failures.size(); ++k) std::cout << (k ? "; " : "") << c.failures[k];
      std::cout << ")";
    }
    std::cout << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
