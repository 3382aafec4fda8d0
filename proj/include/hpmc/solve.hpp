#pragma once

// Dirichlet solver (damped Newton with sigma-continuation on the conservative
// discretization) and the penalized-functional minimizer (primal-dual
// saddle-point iteration on the dual form of the area functional, pointwise
// unit-ball dual constraint, proximal boundary shrinkage). Both paths
// minimize the same tilted discrete functional, so they agree to solver
// tolerance on problems whose trace attaches.

#include <functional>
#include <utility>
#include <vector>

#include "hpmc/conditions.hpp"
#include "hpmc/grid.hpp"
#include "hpmc/types.hpp"

namespace hpmc {

struct PmcProblem {
  const GridDomain* domain = nullptr;
  ScalarField H;
  ScalarField phi;  // Dirichlet datum sampled on boundary cells
  std::function<double(double, double)> phi_fn;  // optional evaluator
  double eps = 1.0;
  Mode mode = Mode::heisenberg;
  double sigma = 1.0;  // continuation parameter scaling both X and H
};

PmcProblem make_problem(const GridDomain& d,
                        const std::function<double(double, double)>& H,
                        const std::function<double(double, double)>& phi,
                        double eps, Mode mode);

enum class PdEngine {
  ball,    // plain saddle-point iteration, 3-component dual ball
  smooth,  // accelerated variant exploiting smoothness of the area integrand
};

struct SolverConfig {
  double tol_residual = 1e-10;  // max-norm of the discrete equation residual
  int max_newton = 50;
  double armijo_c = 1e-4;
  double backtrack_shrink = 0.5;
  double min_step = 1e-6;
  int homotopy_steps = 5;
  int polish_newton = 1;  // extra full steps after the tolerance is met
  // primal-dual parameters; tau/s <= 0 selects steps from the measured
  // operator norm with tau*s*|K|^2 <= 1
  double pd_tau = 0.0;
  double pd_s = 0.0;
  double pd_theta = 1.0;
  int max_pd = 20000;
  double pd_gap_tol = 1e-8;  // relative duality gap
  PdEngine pd_engine = PdEngine::smooth;
  bool pd_warm_linear = true;  // lagged-diffusivity initial guess
};

struct SolveReport {
  int iterations = 0;
  std::vector<double> residual_history;
  double final_residual = 0.0;
  double energy = 0.0;        // value of the penalized functional
  double duality_gap = -1.0;  // primal-dual path only, relative
  double max_gradient = 0.0;  // max |Du| over interior cells
  bool converged = false;
  std::vector<double> homotopy_path;
  double worst_energy_increase = 0.0;  // over accepted Newton iterates
  std::string error;
};

/// Newton solve of the discrete equation with u = sigma*phi on boundary
/// cells. Refuses infeasible (domain, H) pairs; returns converged=false on
/// stall after exhausting the continuation path. init, when given, seeds the
/// interior values of the first attempt.
std::pair<ScalarField, SolveReport> solve_dirichlet(
    const PmcProblem& problem, const SolverConfig& cfg = {},
    const ScalarField* init = nullptr);

/// Minimizes the penalized functional
///   sum_f (h^2/2) sqrt(eps^2+|w_f|^2) + sum H v h^2 + sum_bdry |v - phi| h
/// by the primal-dual iteration; the dual variable is constrained to the
/// pointwise unit ball. On extremal domains the vertical gauge is fixed by
/// centering the result to median zero.
std::pair<ScalarField, SolveReport> minimize_penalized(
    const PmcProblem& problem, const SolverConfig& cfg = {},
    const ScalarField* init = nullptr);

/// Net discrete flux of (Du + sigma X)/sqrt(eps^2+|...|^2) across the
/// frontier of the eroded set { dist > t }, summed from the per-face
/// transfers of the conservative operator; equals the quadrature of the
/// operator over the set to rounding.
double boundary_flux(const ScalarField& u, const PmcProblem& problem,
                     double t);

struct ComparisonReport {
  double boundary_excess = 0.0;   // max over boundary cells of u - v
  double worst_violation = 0.0;   // max over interior cells of u - v
  bool boundary_ordered = false;  // u <= v on all boundary cells
};

/// Comparison diagnostic for two solutions of the same problem.
ComparisonReport comparison_check(const ScalarField& u, const ScalarField& v,
                                  const PmcProblem& problem);

}  // namespace hpmc
