#pragma once

// Discrete planar domains on a uniform cell-centered Cartesian grid: masks,
// analytic boundary geometry with curvature, erosion, scalar fields,
// finite-difference calculus and midpoint quadrature.

#include <Eigen/Core>

#include <functional>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "hpmc/types.hpp"

namespace hpmc {

struct DiskSpec {
  Vec2 center{0.0, 0.0};
  double radius{1.0};
};

struct RectSpec {
  Vec2 lo{0.0, 0.0};
  Vec2 hi{1.0, 1.0};
};

/// Simple polygon; orientation is normalized internally to counterclockwise.
struct PolygonSpec {
  std::vector<Vec2> vertices;
};

using DomainSpec = std::variant<DiskSpec, RectSpec, PolygonSpec>;

enum class CellTag : unsigned char { exterior = 0, boundary = 1, interior = 2 };

struct BoundarySample {
  Vec2 point;
  Vec2 outward_normal;
  double curvature;  // sum of principal curvatures of the boundary
};

struct BoundaryGeometry {
  std::vector<BoundarySample> samples;
  double perimeter = 0.0;
  double area = 0.0;  // analytic area of the described region
};

class GridDomain {
 public:
  GridDomain() = default;

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double spacing() const { return h_; }
  const Vec2& origin() const { return origin_; }
  int size() const { return nx_ * ny_; }

  int index(int i, int j) const { return j * nx_ + i; }
  Vec2 cell_center(int i, int j) const {
    return {origin_.x() + (i + 0.5) * h_, origin_.y() + (j + 0.5) * h_};
  }

  CellTag tag(int i, int j) const { return mask_[index(i, j)]; }
  bool in_domain(int i, int j) const {
    return mask_[index(i, j)] != CellTag::exterior;
  }
  bool is_interior(int i, int j) const {
    return mask_[index(i, j)] == CellTag::interior;
  }
  bool in_domain_checked(int i, int j) const {
    return i >= 0 && i < nx_ && j >= 0 && j < ny_ && in_domain(i, j);
  }

  /// Chebyshev cell distance to the nearest non-domain cell; 0 outside the
  /// domain, 1 on boundary cells, >= 2 on interior cells. A cell of depth d
  /// has every cell within Chebyshev radius d-1 inside the domain.
  int depth(int i, int j) const { return depth_[index(i, j)]; }
  int depth_at(int idx) const { return depth_[idx]; }
  bool has_margin(int i, int j, int cells) const {
    return depth_[index(i, j)] >= cells + 1;
  }
  int max_depth() const { return max_depth_; }

  /// Linear indices of all domain cells (boundary + interior), row-major.
  const std::vector<int>& domain_cells() const { return domain_cells_; }
  const std::vector<int>& interior_cells() const { return interior_cells_; }
  const std::vector<int>& boundary_cells() const { return boundary_cells_; }

  const BoundaryGeometry& boundary() const { return boundary_; }
  const DomainSpec& spec() const { return spec_; }

  /// Signed distance to the analytic boundary, positive inside.
  double boundary_distance(const Vec2& p) const;
  bool contains(const Vec2& p) const { return boundary_distance(p) > 0.0; }

  double inradius() const { return inradius_; }
  double cell_count_area() const {
    return static_cast<double>(domain_cells_.size()) * h_ * h_;
  }

  friend GridDomain build_domain(const DomainSpec& spec, double h);

 private:
  int nx_ = 0, ny_ = 0;
  double h_ = 0.0;
  Vec2 origin_{0.0, 0.0};
  std::vector<CellTag> mask_;
  std::vector<int> depth_;
  int max_depth_ = 0;
  std::vector<int> domain_cells_, interior_cells_, boundary_cells_;
  BoundaryGeometry boundary_;
  DomainSpec spec_;
  double inradius_ = 0.0;
};

/// Rasterize a domain descriptor at spacing h. Throws ConfigError on
/// degenerate descriptors, self-intersecting polygons, or resolutions that
/// do not resolve the feature size (fewer than 8 cells across).
GridDomain build_domain(const DomainSpec& spec, double h);

/// The eroded domain { z : dist(z, boundary) > t } with refreshed analytic
/// boundary geometry. Throws ConfigError when the erosion empties the domain.
GridDomain erode(const GridDomain& d, double t);

double perimeter_of(const DomainSpec& spec);
double area_of(const DomainSpec& spec);

/// Scalar grid field, stored dense over the bounding box; values are
/// meaningful on domain cells only.
struct ScalarField {
  ScalarField() = default;
  explicit ScalarField(const GridDomain& d)
      : domain(&d), values(Eigen::ArrayXd::Zero(d.size())) {}

  const GridDomain* domain = nullptr;
  Eigen::ArrayXd values;

  double& operator()(int i, int j) { return values[domain->index(i, j)]; }
  double operator()(int i, int j) const { return values[domain->index(i, j)]; }
};

ScalarField make_field(const GridDomain& d,
                       const std::function<double(double, double)>& f);
ScalarField constant_field(const GridDomain& d, double value);

/// Midpoint quadrature over all domain cells.
double integrate(const ScalarField& f);

/// Cell-centered gradient: central differences where both neighbors are in
/// the domain, one-sided second order at the interior frontier.
struct VectorField {
  ScalarField x, y;
};
VectorField gradient(const ScalarField& f);

/// max |f| over domain cells of depth >= min_depth.
double max_abs(const ScalarField& f, int min_depth = 1);

/// Face-based summation-by-parts pair. Faces live between adjacent domain
/// cells; face_gradient is the normal difference (u_R - u_L)/h, divergence is
/// its exact negative adjoint, so <div F, f> h^2 + <F, grad f> h^2 = 0 to
/// rounding for fields supported on domain cells.
struct FaceField {
  const GridDomain* domain = nullptr;
  // x faces keyed by left cell index, y faces by bottom cell index
  Eigen::ArrayXd xface, yface;
};
FaceField face_gradient(const ScalarField& f);
ScalarField face_divergence(const FaceField& f);

/// CSV with header x,y,value, row-major over domain cells, 17 significant
/// digits (round-trips doubles exactly).
void dump_csv(const ScalarField& f, const std::string& path);
ScalarField load_csv(const GridDomain& d, const std::string& path);

}  // namespace hpmc
