#pragma once

// Solvability classification of (domain, H): the integral test against the
// perimeter (non-extremal / extremal / infeasible trichotomy), pointwise
// boundary-curvature margins, and Cheeger-type lower bounds. The subset
// condition behind existence quantifies over all proper subsets and is not
// decidable numerically; the scan family used here (inscribed disks on a
// coarse lattice plus sub/super-level sets of H) is deterministic and its
// size is reported, so the classifier is a certificate for the extremal and
// infeasible verdicts and a heuristic for the subset condition.

#include <optional>
#include <string>

#include "hpmc/grid.hpp"

namespace hpmc {

enum class DomainClass { non_extremal, extremal, infeasible };
enum class CheegerMethod { exact_disk, user_supplied, heuristic_scan };

std::string to_string(DomainClass c);
std::string to_string(CheegerMethod m);

struct ConditionReport {
  double integral_H = 0.0;
  double perimeter = 0.0;
  double area = 0.0;
  DomainClass classification = DomainClass::non_extremal;
  double extremal_tol = 0.0;
  double serrin_min_margin = 0.0;   // min over samples of H_bdry - |H|
  double cheeger_lower_bound = 0.0;
  CheegerMethod cheeger_method = CheegerMethod::heuristic_scan;
  double delta_hat = 1.0;           // min over the scan family of 1-|int H|/P
  int scan_family_size = 0;
};

/// tol <= 0 selects the default 2/sqrt(N_cells) relative tolerance
/// (quadrature noise floor for gridded sources).
ConditionReport classify_domain(const GridDomain& domain, const ScalarField& H,
                                double tol = -1.0);

struct SerrinResult {
  bool pass = false;
  double min_margin = 0.0;
};

/// Pointwise boundary test |H| < H_bdry (strict) or <= (non-strict) over all
/// boundary samples; H is read at the nearest domain cell.
SerrinResult serrin_check(const GridDomain& domain, const ScalarField& H,
                          bool strict);

struct CheegerBound {
  double value = 0.0;
  CheegerMethod method = CheegerMethod::heuristic_scan;
};

/// Exact 2/r for disks; otherwise the minimum of P(A)/|A| over the inscribed
/// scan family (an upper bound on the true constant, reported as such).
CheegerBound cheeger_bound(const GridDomain& domain,
                           std::optional<double> user_value = std::nullopt);

}  // namespace hpmc
