#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fellbundle/cross_sectional.hpp"

namespace fell {

/// A finitely supported map G -> A_e; f[s] is the value at s (zero off the support).
struct EPWitness {
  std::vector<Matrix> f;
};

/// ||sum_s f(s)^* f(s)||
double ep_bound(const EPWitness& w);

struct EPDefect {
  double bound = 0.0;
  double defect = 0.0;
};

/// defect = max over fibers t and basis vectors a_t (rescaled to operator
/// norm 1) of ||sum_s f(ts)^* a_t f(s) - a_t||. Throws ValueOutsideUnitFiber.
EPDefect ep_defect(const GradedBundle& a, const EPWitness& w, double tol = kDefaultTol);

/// f(s) = unit / sqrt|G|. Throws NonUnitalUnitFiber.
EPWitness uniform_witness(const GradedBundle& a, double tol = kDefaultTol);
/// f = delta_e * unit. Throws NonUnitalUnitFiber.
EPWitness delta_witness(const GradedBundle& a, double tol = kDefaultTol);

/// h(s) = fD(sN) g(n_s) ⊗ 1 on pullback(d, q); g is indexed like q.normal().members().
/// Throws GNormExceeded when sum |g|^2 > 1 and ValueOutsideUnitFiber.
EPWitness ep_pullback_witness(const GradedBundle& d, const EPWitness& fd, const std::vector<Complex>& g,
                              const Quotient& q, double tol = kDefaultTol);

/// n ↦ sum_m conj(g(nm)) g(m), for n a member of `normal`.
Complex matrix_coefficient(const FiniteGroup& parent, const Subgroup& normal, const std::vector<Complex>& g,
                           Element n);

struct PullbackDefectEstimate {
  /// Defect of the pulled-back witness.
  double defect = 0.0;
  /// defect(fD) + c * delta, with c = max_t sum_k ||fD(tk)|| ||fD(k)|| and
  /// delta = max_{t,s} |1 - matrix_coefficient(n_{t c(s)})|.
  double estimate = 0.0;
  double base_defect = 0.0;
  double c = 0.0;
  double delta = 0.0;
};

PullbackDefectEstimate pullback_defect_estimate(const GradedBundle& d, const EPWitness& fd,
                                                const std::vector<Complex>& g, const Quotient& q,
                                                double tol = kDefaultTol);

/// Psi(a) = sum_h sum_s f(hs)^* a_h f(s), h ranging over `subgroup` (all of G
/// when absent). Throws NotInAlgebra unless a lies in the span of those fibers.
Matrix averaging_map(const SectionAlgebra& s, const EPWitness& w, const Matrix& a,
                     const std::optional<Subgroup>& subgroup = std::nullopt, double tol = kDefaultTol);

struct AmenabilityReport {
  std::size_t regular_rep_kernel_dim = 0;
  bool ep_exact_witness_found = false;
  std::string witness;
  EPDefect witness_defect;
};

AmenabilityReport amenability_report(const GradedBundle& a, double tol = kDefaultTol);

}  // namespace fell
