#pragma once

// Geometry of t-graphs: the unit normal in the orthonormal frame, the
// mean-curvature operator, the curvature energy density Ric(nu)+|h|^2, the
// Laplace-Beltrami operator on the graph, the Jacobi identity residual and
// the second-variation density q with its Riemannian-limit gap.
//
// All graph quantities are extended vertically, so frame derivatives reduce
// to planar finite differences and the eps*T derivative vanishes. Every
// operation depends on u only through Du and is therefore invariant under
// vertical translations, exactly in floating point.

#include <Eigen/Core>

#include <vector>

#include "hpmc/grid.hpp"
#include "hpmc/types.hpp"

namespace hpmc {

/// Grid-sampled frame vectors (components relative to the orthonormal frame).
struct FrameField {
  const GridDomain* domain = nullptr;
  std::vector<ScalarField> comp;  // 2n+1 components
};

/// A graph height field together with cached first-order geometry:
/// w = Du + X (one-sided at the frontier), the unit normal, the horizontal
/// unit normal off characteristic points and the vertical density
/// TdH = 1/|w| (the limit of nu_{2n+1}/eps).
struct GraphGeometry {
  const GridDomain* domain = nullptr;
  double eps = 1.0;
  Mode mode = Mode::heisenberg;
  ScalarField u;
  ScalarField wx, wy;        // Du + X
  ScalarField wnorm;         // |Du + X|
  ScalarField nu1, nu2, nu3; // unit normal, frame components
  ScalarField nuh1, nuh2;    // horizontal unit normal (guarded)
  ScalarField tdh;           // 1/|Du+X| (guarded)
};

GraphGeometry make_graph_geometry(const ScalarField& u, double eps, Mode mode);

/// Unit normal of the graph as a frame field: (-(Du+X)/W, eps/W) with
/// W = sqrt(eps^2 + |Du+X|^2). Unit norm by construction.
FrameField graph_normal(const GraphGeometry& geom);

/// Conservative discrete div((Du + sigma X)/sqrt(eps^2 + |Du + sigma X|^2))
/// at interior cells. Values carry the full second-order stencil on cells of
/// depth >= 3. Throws StencilError when no interior cell exists.
ScalarField mean_curvature_operator(const GraphGeometry& geom,
                                    double sigma = 1.0);

/// Ric(nu)+|h|^2 of the graph: sum_{l,s<=2n} Z_s(nu_l) Z_l(nu_s)
/// + 4 <J(nu), grad(nu3/eps)> + 4n (nu3/eps)^2 in heisenberg mode; the flat
/// reduction sum_{l,s} Z_s(nu_l) Z_l(nu_s) in euclidean mode. Defined on
/// cells of depth >= 3 (zero elsewhere).
ScalarField curvature_energy(const GraphGeometry& geom);

/// Laplace-Beltrami of a vertically-extended scalar on the graph:
///   sum g^{ij} Z_i Z_j f - Heps g(grad f, nu) + (2 nu3/eps) <grad f, J(nu)>
/// with g^{ij} = delta_ij - nu_i nu_j and Heps = -H (sign convention of the
/// solver's source, pinned by the hemisphere test). Defined where central
/// second differences of f exist (depth >= 2).
ScalarField laplace_beltrami(const ScalarField& f, const GraphGeometry& geom,
                             const ScalarField& H);

/// Residual of the Jacobi-type identity
///   Delta_S(nu3) - g(grad_S Heps, eps T) + nu3 (Ric(nu)+|h|^2)
/// on the graph; near zero exactly when u solves the equation with source H.
/// Defined on cells of depth >= 4.
ScalarField jacobi_identity_residual(const GraphGeometry& geom,
                                     const ScalarField& H);

/// Second-variation density q off characteristic points:
///   q = sum_{h,k<=2n} Z_h(nuh_k) Z_k(nuh_h) + 4 <J(nuh), grad(TdH)>
///       + 4n TdH^2.
/// Defined on cells of depth >= 3 whose 3x3 neighborhood is
/// non-characteristic; a validity mask is returned alongside.
struct GuardedField {
  ScalarField value;
  std::vector<unsigned char> defined;  // per linear cell index
};
GuardedField second_variation_q(const GraphGeometry& geom);

/// Pointwise q at the cell containing p; throws CharacteristicPointError
/// when |Du+X| is below the guard there, StencilError without margin.
double second_variation_q_at(const GraphGeometry& geom, const Vec2& p);

/// curvature_energy - q, pointwise where q is defined.
GuardedField q_limit_gap(const GraphGeometry& geom);
double q_limit_gap_at(const GraphGeometry& geom, const Vec2& p);

/// Cell containing the point (by nearest center); throws ConfigError if the
/// cell is not a domain cell.
std::pair<int, int> cell_at(const GridDomain& d, const Vec2& p);

}  // namespace hpmc
