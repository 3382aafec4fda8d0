#pragma once

// Variational discretization of the graph area functional on the dual
// squares of the cell grid: cell values are bilinear (Q1) nodal values on
// every 2x2 block of domain cells, and the energy
//
//   E(u) = sum_squares sum_{2x2 Gauss points} (h^2/4)
//              sqrt(eps^2 + |grad u_bilinear + sigma X|^2)
//
// is tilted by its own gradient at u == 0, so the flat graph is an exact
// discrete solution of the homogeneous equation (the continuum zero-state
// flux X/sqrt(eps^2+|z|^2) is divergence free). Every square touching an
// interior cell is complete, so the Euler-Lagrange equations carry one
// uniform second-order stencil; the tilted gradient is a sum of per-sample
// zero-sum transfers, so a discrete divergence theorem holds exactly over
// arbitrary cell sets; and the Hessian is symmetric positive definite on
// interior unknowns. Newton and the primal-dual minimizer share this one
// functional.

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <array>
#include <vector>

#include "hpmc/grid.hpp"
#include "hpmc/types.hpp"

namespace hpmc {

/// One quadrature sample: four nodal cells with the gradient coefficients of
/// the bilinear interpolant at the sample point, and the offset field there.
struct AreaSample {
  std::array<int, 4> c;       // cells: (i,j), (i+1,j), (i,j+1), (i+1,j+1)
  std::array<double, 4> gx;   // d/dx coefficients (units 1/h)
  std::array<double, 4> gy;   // d/dy coefficients (units 1/h)
  double Xn, Xt;              // sigma * X at the sample point (0 euclidean)
};

class PmcOperator {
 public:
  PmcOperator(const GridDomain& d, double eps, Mode mode, double sigma = 1.0);

  const GridDomain& domain() const { return *d_; }
  double eps() const { return eps_; }
  double sigma() const { return sigma_; }
  Mode mode() const { return mode_; }
  const std::vector<AreaSample>& samples() const { return samples_; }
  /// quadrature weight per sample (h^2/4)
  double sample_weight() const { return weight_; }

  /// Tilted discrete area energy.
  double energy(const Eigen::ArrayXd& u) const;

  /// Gradient of the tilted energy over all cells (zero off domain cells).
  Eigen::VectorXd energy_gradient(const Eigen::ArrayXd& u) const;

  /// The conservative operator field: -(1/h^2) * energy_gradient.
  /// Approximates div((Du + sigma X)/sqrt(eps^2 + |Du + sigma X|^2)).
  ScalarField apply(const ScalarField& u) const;

  /// Hessian of the tilted energy restricted to the given unknown cells;
  /// cell_to_unknown maps linear cell index -> unknown index or -1.
  Eigen::SparseMatrix<double> hessian(
      const Eigen::ArrayXd& u, const std::vector<int>& cell_to_unknown,
      int n_unknowns) const;

  /// Net tilted flux into the cell set (in_set per linear index): equals the
  /// quadrature of apply(u) over the set by the discrete divergence theorem,
  /// computed from per-sample transfers across the set frontier.
  double set_flux(const Eigen::ArrayXd& u,
                  const std::vector<char>& in_set) const;

  /// Per-sample gradient of the bilinear interpolant (without the offset).
  void sample_values(const Eigen::ArrayXd& u, Eigen::ArrayXd& px,
                     Eigen::ArrayXd& py) const;
  /// Adjoint accumulate: out += B^T (a, b).
  void sample_adjoint(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b,
                      Eigen::VectorXd& out) const;
  /// Tilt vector (gradient of the raw energy at u == 0).
  const Eigen::VectorXd& tilt() const { return tilt_; }

 private:
  Eigen::VectorXd raw_gradient(const Eigen::ArrayXd& u) const;

  const GridDomain* d_;
  double eps_, sigma_, weight_;
  Mode mode_;
  std::vector<AreaSample> samples_;
  Eigen::VectorXd tilt_;
};

}  // namespace hpmc
