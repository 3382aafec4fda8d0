#pragma once

// Graph area energies at positive eps and in the horizontal limit, and the
// continuation eps -> 0 over an exhausting family of eroded domains, warm
// starting each solve from the previous one. Reported energies extend the
// step solution to the full domain by the boundary datum, so successive
// values are comparable and reproduce closed forms on the model problems.

#include <string>
#include <vector>

#include "hpmc/solve.hpp"

namespace hpmc {

/// sum sqrt(eps^2 + |Du + sigma X|^2) h^2 over domain cells. The singular
/// part of the distributional derivative is identically zero for grid
/// fields, so this is the full graph perimeter.
double energy_eps(const ScalarField& u, const PmcProblem& problem);

/// sum |Du + sigma X| h^2 (+ sigma * sum H u h^2 when include_source).
double energy_subriemannian(const ScalarField& u, const PmcProblem& problem,
                            bool include_source = false);

/// Area term + sigma * sum H u h^2 + boundary attachment sum |u - sigma*phi| h.
double penalized_energy(const ScalarField& u, const PmcProblem& problem);

struct EpsSchedule {
  std::vector<double> eps_list = {1.0,    0.5,     0.25,    0.125,
                                  0.0625, 0.03125, 0.015625};
  /// Erosion margins as fractions of the inradius, one per step; padded by
  /// halving the last entry when shorter than eps_list.
  std::vector<double> margins = {0.2, 0.1, 0.05, 0.025};
  SolverConfig solver;
  double du_tol = 1e-6;  // successive-difference threshold on the probe set
};

struct LimitStep {
  double eps = 0.0;
  double energy_eps = 0.0;
  double energy_sub = 0.0;
  double du_max = 0.0;  // against the previous step on the probe compact
  double grad_max = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct LimitReport {
  std::vector<LimitStep> steps;
  bool converged = false;
  int characteristic_cells = 0;  // |Du+X| below guard at the final step
  std::string error;
  ScalarField u;  // final solution extended to the full domain by phi
};

LimitReport eps_continuation(const PmcProblem& problem,
                             const EpsSchedule& schedule);

}  // namespace hpmc
