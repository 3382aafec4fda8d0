#include "hpmc/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace hpmc {

namespace {

double dist_point_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c,
                        const Vec2& d) {
  auto cross = [](const Vec2& u, const Vec2& v) {
    return u.x() * v.y() - u.y() * v.x();
  };
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

double polygon_signed_area(const std::vector<Vec2>& v) {
  double a = 0.0;
  for (size_t k = 0; k < v.size(); ++k) {
    const Vec2& p = v[k];
    const Vec2& q = v[(k + 1) % v.size()];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

bool polygon_contains(const std::vector<Vec2>& v, const Vec2& p) {
  bool inside = false;
  for (size_t k = 0, m = v.size() - 1; k < v.size(); m = k++) {
    if ((v[k].y() > p.y()) != (v[m].y() > p.y()) &&
        p.x() < (v[m].x() - v[k].x()) * (p.y() - v[k].y()) /
                        (v[m].y() - v[k].y()) +
                    v[k].x())
      inside = !inside;
  }
  return inside;
}

void validate_polygon(const PolygonSpec& poly) {
  const auto& v = poly.vertices;
  if (v.size() < 3) throw ConfigError("polygon needs at least 3 vertices");
  if (std::abs(polygon_signed_area(v)) <= 0.0)
    throw ConfigError("polygon is degenerate");
  const size_t m = v.size();
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = i + 1; j < m; ++j) {
      // skip adjacent edges (shared vertex)
      if (j == i || (j + 1) % m == i || (i + 1) % m == j) continue;
      if (segments_intersect(v[i], v[(i + 1) % m], v[j], v[(j + 1) % m]))
        throw ConfigError("polygon is self-intersecting");
    }
  }
}

struct Bounds {
  Vec2 lo, hi;
};

Bounds spec_bounds(const DomainSpec& spec) {
  return std::visit(
      [](const auto& s) -> Bounds {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, DiskSpec>) {
          return {s.center - Vec2(s.radius, s.radius),
                  s.center + Vec2(s.radius, s.radius)};
        } else if constexpr (std::is_same_v<T, RectSpec>) {
          return {s.lo, s.hi};
        } else {
          Vec2 lo = s.vertices.front(), hi = s.vertices.front();
          for (const auto& p : s.vertices) {
            lo = lo.cwiseMin(p);
            hi = hi.cwiseMax(p);
          }
          return {lo, hi};
        }
      },
      spec);
}

BoundaryGeometry sample_boundary(const DomainSpec& spec, double h) {
  BoundaryGeometry geo;
  geo.perimeter = perimeter_of(spec);
  geo.area = area_of(spec);
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, DiskSpec>) {
          const int m = std::max<int>(64, static_cast<int>(
                                              std::ceil(geo.perimeter / h)));
          geo.samples.reserve(m);
          for (int k = 0; k < m; ++k) {
            const double th = 2.0 * M_PI * (k + 0.5) / m;
            const Vec2 n(std::cos(th), std::sin(th));
            geo.samples.push_back({s.center + s.radius * n, n, 1.0 / s.radius});
          }
        } else if constexpr (std::is_same_v<T, RectSpec>) {
          auto edge = [&](const Vec2& a, const Vec2& b, const Vec2& n) {
            const double len = (b - a).norm();
            const int m = std::max<int>(8, static_cast<int>(std::ceil(len / h)));
            for (int k = 0; k < m; ++k) {
              const double t = (k + 0.5) / m;
              geo.samples.push_back({a + t * (b - a), n, 0.0});
            }
          };
          const Vec2 lo = s.lo, hi = s.hi;
          edge({lo.x(), lo.y()}, {hi.x(), lo.y()}, {0, -1});
          edge({hi.x(), lo.y()}, {hi.x(), hi.y()}, {1, 0});
          edge({hi.x(), hi.y()}, {lo.x(), hi.y()}, {0, 1});
          edge({lo.x(), hi.y()}, {lo.x(), lo.y()}, {-1, 0});
        } else {
          // counterclockwise orientation assumed (normalized in build)
          const auto& v = s.vertices;
          for (size_t k = 0; k < v.size(); ++k) {
            const Vec2 a = v[k], b = v[(k + 1) % v.size()];
            const Vec2 e = b - a;
            const double len = e.norm();
            const Vec2 n(e.y() / len, -e.x() / len);
            const int m = std::max<int>(4, static_cast<int>(std::ceil(len / h)));
            for (int q = 0; q < m; ++q) {
              const double t = (q + 0.5) / m;
              geo.samples.push_back({a + t * e, n, 0.0});
            }
          }
        }
      },
      spec);
  return geo;
}

}  // namespace

double perimeter_of(const DomainSpec& spec) {
  return std::visit(
      [](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, DiskSpec>) {
          return 2.0 * M_PI * s.radius;
        } else if constexpr (std::is_same_v<T, RectSpec>) {
          return 2.0 * ((s.hi - s.lo).x() + (s.hi - s.lo).y());
        } else {
          double p = 0.0;
          for (size_t k = 0; k < s.vertices.size(); ++k)
            p += (s.vertices[(k + 1) % s.vertices.size()] - s.vertices[k])
                     .norm();
          return p;
        }
      },
      spec);
}

double area_of(const DomainSpec& spec) {
  return std::visit(
      [](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, DiskSpec>) {
          return M_PI * s.radius * s.radius;
        } else if constexpr (std::is_same_v<T, RectSpec>) {
          return (s.hi - s.lo).x() * (s.hi - s.lo).y();
        } else {
          return std::abs(polygon_signed_area(s.vertices));
        }
      },
      spec);
}

double GridDomain::boundary_distance(const Vec2& p) const {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, DiskSpec>) {
          return s.radius - (p - s.center).norm();
        } else if constexpr (std::is_same_v<T, RectSpec>) {
          const double dx = std::min(p.x() - s.lo.x(), s.hi.x() - p.x());
          const double dy = std::min(p.y() - s.lo.y(), s.hi.y() - p.y());
          if (dx >= 0.0 && dy >= 0.0) return std::min(dx, dy);
          // outside: negative euclidean distance to the rectangle
          const double ox = std::max(0.0, -dx), oy = std::max(0.0, -dy);
          return -std::hypot(ox, oy);
        } else {
          double d = std::numeric_limits<double>::max();
          const auto& v = s.vertices;
          for (size_t k = 0; k < v.size(); ++k)
            d = std::min(d,
                         dist_point_segment(p, v[k], v[(k + 1) % v.size()]));
          return polygon_contains(v, p) ? d : -d;
        }
      },
      spec_);
}

GridDomain build_domain(const DomainSpec& spec, double h) {
  if (h <= 0.0) throw ConfigError("grid spacing must be positive");
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, DiskSpec>) {
          if (s.radius <= 0.0) throw ConfigError("disk radius must be positive");
        } else if constexpr (std::is_same_v<T, RectSpec>) {
          if ((s.hi - s.lo).minCoeff() <= 0.0)
            throw ConfigError("rectangle has non-positive extent");
        } else {
          validate_polygon(s);
        }
      },
      spec);

  const Bounds b = spec_bounds(spec);
  const Vec2 extent = b.hi - b.lo;
  if (extent.minCoeff() < 8.0 * h)
    throw ConfigError("grid spacing too coarse for the domain feature size");

  GridDomain d;
  d.spec_ = spec;
  d.h_ = h;
  // origin snapped to the lattice h*Z^2 so that grids of the same spacing
  // (e.g. a domain and its erosions) share cell centers exactly; one cell of
  // exterior padding around the bounding box
  d.origin_ = Vec2((std::floor(b.lo.x() / h) - 1.0) * h,
                   (std::floor(b.lo.y() / h) - 1.0) * h);
  d.nx_ = static_cast<int>(std::ceil((b.hi.x() - d.origin_.x()) / h)) + 1;
  d.ny_ = static_cast<int>(std::ceil((b.hi.y() - d.origin_.y()) / h)) + 1;
  d.mask_.assign(static_cast<size_t>(d.nx_) * d.ny_, CellTag::exterior);
  d.depth_.assign(static_cast<size_t>(d.nx_) * d.ny_, 0);

  for (int j = 0; j < d.ny_; ++j)
    for (int i = 0; i < d.nx_; ++i)
      if (d.boundary_distance(d.cell_center(i, j)) > 0.0)
        d.mask_[d.index(i, j)] = CellTag::interior;  // provisional

  // two-pass chamfer transform: Chebyshev distance to the nearest
  // non-domain cell (array border counts as exterior)
  constexpr int kInf = 1 << 28;
  auto& depth = d.depth_;
  auto at = [&](int i, int j) -> int& { return depth[d.index(i, j)]; };
  for (int j = 0; j < d.ny_; ++j)
    for (int i = 0; i < d.nx_; ++i)
      at(i, j) = d.mask_[d.index(i, j)] == CellTag::exterior ? 0 : kInf;
  for (int j = 0; j < d.ny_; ++j)
    for (int i = 0; i < d.nx_; ++i) {
      int& v = at(i, j);
      if (v == 0) continue;
      int m = kInf;
      if (i == 0 || j == 0 || i == d.nx_ - 1 || j == d.ny_ - 1) m = 0;
      if (i > 0) m = std::min(m, at(i - 1, j));
      if (j > 0) {
        m = std::min(m, at(i, j - 1));
        if (i > 0) m = std::min(m, at(i - 1, j - 1));
        if (i < d.nx_ - 1) m = std::min(m, at(i + 1, j - 1));
      }
      v = std::min(v, m + 1);
    }
  for (int j = d.ny_ - 1; j >= 0; --j)
    for (int i = d.nx_ - 1; i >= 0; --i) {
      int& v = at(i, j);
      if (v == 0) continue;
      int m = kInf;
      if (i < d.nx_ - 1) m = std::min(m, at(i + 1, j));
      if (j < d.ny_ - 1) {
        m = std::min(m, at(i, j + 1));
        if (i > 0) m = std::min(m, at(i - 1, j + 1));
        if (i < d.nx_ - 1) m = std::min(m, at(i + 1, j + 1));
      }
      v = std::min(v, m + 1);
    }

  d.max_depth_ = 0;
  for (int j = 0; j < d.ny_; ++j)
    for (int i = 0; i < d.nx_; ++i) {
      const int idx = d.index(i, j);
      if (d.mask_[idx] == CellTag::exterior) continue;
      d.mask_[idx] = depth[idx] >= 2 ? CellTag::interior : CellTag::boundary;
      d.max_depth_ = std::max(d.max_depth_, depth[idx]);
    }

  double inr = 0.0;
  for (int j = 0; j < d.ny_; ++j)
    for (int i = 0; i < d.nx_; ++i) {
      const int idx = d.index(i, j);
      if (d.mask_[idx] == CellTag::exterior) continue;
      d.domain_cells_.push_back(idx);
      if (d.mask_[idx] == CellTag::interior)
        d.interior_cells_.push_back(idx);
      else
        d.boundary_cells_.push_back(idx);
      inr = std::max(inr, d.boundary_distance(d.cell_center(i, j)));
    }
  if (d.interior_cells_.empty())
    throw ConfigError("domain has no interior cells at this resolution");
  d.inradius_ = inr;
  d.boundary_ = sample_boundary(spec, h);
  return d;
}

GridDomain erode(const GridDomain& d, double t) {
  if (t < 0.0) throw ConfigError("erosion distance must be nonnegative");
  if (t == 0.0) return d;
  if (t >= d.inradius())
    throw ConfigError("erosion by t >= inradius empties the domain");
  DomainSpec spec = std::visit(
      [&](const auto& s) -> DomainSpec {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, DiskSpec>) {
          return DiskSpec{s.center, s.radius - t};
        } else if constexpr (std::is_same_v<T, RectSpec>) {
          return RectSpec{s.lo + Vec2(t, t), s.hi - Vec2(t, t)};
        } else {
          // inward edge offset; consecutive offset lines intersected.
          // Valid for convex polygons with t below the inradius; the result
          // is re-validated and rejected if it self-intersects.
          const auto& v = s.vertices;
          const size_t m = v.size();
          const double orient = polygon_signed_area(v) > 0 ? 1.0 : -1.0;
          std::vector<Vec2> out(m);
          for (size_t k = 0; k < m; ++k) {
            const Vec2 pa = v[(k + m - 1) % m], pb = v[k],
                       pc = v[(k + 1) % m];
            const Vec2 e1 = (pb - pa).normalized(), e2 = (pc - pb).normalized();
            const Vec2 n1 = orient * Vec2(e1.y(), -e1.x());
            const Vec2 n2 = orient * Vec2(e2.y(), -e2.x());
            // intersect the two inward-offset edge lines
            const Vec2 a1 = pb - t * n1, a2 = pb - t * n2;
            const double det = e1.x() * (-e2.y()) - e1.y() * (-e2.x());
            if (std::abs(det) < 1e-14) {
              out[k] = pb - t * n1;  // collinear edges
            } else {
              const Vec2 rhs = a2 - a1;
              const double s1 =
                  (rhs.x() * (-e2.y()) - rhs.y() * (-e2.x())) / det;
              out[k] = a1 + s1 * e1;
            }
          }
          PolygonSpec eroded{out};
          validate_polygon(eroded);
          return eroded;
        }
      },
      d.spec());
  return build_domain(spec, d.spacing());
}

ScalarField make_field(const GridDomain& d,
                       const std::function<double(double, double)>& f) {
  ScalarField out(d);
  for (int idx : d.domain_cells()) {
    const int i = idx % d.nx(), j = idx / d.nx();
    const Vec2 p = d.cell_center(i, j);
    out.values[idx] = f(p.x(), p.y());
  }
  return out;
}

ScalarField constant_field(const GridDomain& d, double value) {
  ScalarField out(d);
  for (int idx : d.domain_cells()) out.values[idx] = value;
  return out;
}

double integrate(const ScalarField& f) {
  const GridDomain& d = *f.domain;
  double s = 0.0;
  for (int idx : d.domain_cells()) s += f.values[idx];
  return s * d.spacing() * d.spacing();
}

VectorField gradient(const ScalarField& f) {
  const GridDomain& d = *f.domain;
  VectorField g{ScalarField(d), ScalarField(d)};
  const double h = d.spacing();
  auto val = [&](int i, int j) { return f.values[d.index(i, j)]; };
  auto deriv1d = [&](int i, int j, int di, int dj) -> double {
    const bool fwd = d.in_domain_checked(i + di, j + dj);
    const bool bwd = d.in_domain_checked(i - di, j - dj);
    if (fwd && bwd)
      return (val(i + di, j + dj) - val(i - di, j - dj)) / (2.0 * h);
    if (fwd && d.in_domain_checked(i + 2 * di, j + 2 * dj))
      return (-3.0 * val(i, j) + 4.0 * val(i + di, j + dj) -
              val(i + 2 * di, j + 2 * dj)) /
             (2.0 * h);
    if (bwd && d.in_domain_checked(i - 2 * di, j - 2 * dj))
      return (3.0 * val(i, j) - 4.0 * val(i - di, j - dj) +
              val(i - 2 * di, j - 2 * dj)) /
             (2.0 * h);
    if (fwd) return (val(i + di, j + dj) - val(i, j)) / h;
    if (bwd) return (val(i, j) - val(i - di, j - dj)) / h;
    return 0.0;
  };
  for (int idx : d.domain_cells()) {
    const int i = idx % d.nx(), j = idx / d.nx();
    g.x.values[idx] = deriv1d(i, j, 1, 0);
    g.y.values[idx] = deriv1d(i, j, 0, 1);
  }
  return g;
}

double max_abs(const ScalarField& f, int min_depth) {
  const GridDomain& d = *f.domain;
  double m = 0.0;
  for (int idx : d.domain_cells())
    if (d.depth_at(idx) >= min_depth)
      m = std::max(m, std::abs(f.values[idx]));
  return m;
}

FaceField face_gradient(const ScalarField& f) {
  const GridDomain& d = *f.domain;
  FaceField out;
  out.domain = &d;
  out.xface = Eigen::ArrayXd::Zero(d.size());
  out.yface = Eigen::ArrayXd::Zero(d.size());
  const double h = d.spacing();
  for (int idx : d.domain_cells()) {
    const int i = idx % d.nx(), j = idx / d.nx();
    if (d.in_domain_checked(i + 1, j))
      out.xface[idx] = (f.values[d.index(i + 1, j)] - f.values[idx]) / h;
    if (d.in_domain_checked(i, j + 1))
      out.yface[idx] = (f.values[d.index(i, j + 1)] - f.values[idx]) / h;
  }
  return out;
}

ScalarField face_divergence(const FaceField& f) {
  const GridDomain& d = *f.domain;
  ScalarField out(d);
  const double h = d.spacing();
  for (int idx : d.domain_cells()) {
    const int i = idx % d.nx(), j = idx / d.nx();
    double s = 0.0;
    if (d.in_domain_checked(i + 1, j)) s += f.xface[idx];
    if (d.in_domain_checked(i - 1, j)) s -= f.xface[d.index(i - 1, j)];
    if (d.in_domain_checked(i, j + 1)) s += f.yface[idx];
    if (d.in_domain_checked(i, j - 1)) s -= f.yface[d.index(i, j - 1)];
    out.values[idx] = s / h;
  }
  return out;
}

void dump_csv(const ScalarField& f, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open " + path + " for writing");
  os << "x,y,value\n";
  const GridDomain& d = *f.domain;
  char line[128];
  for (int idx : d.domain_cells()) {
    const int i = idx % d.nx(), j = idx / d.nx();
    const Vec2 p = d.cell_center(i, j);
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n", p.x(), p.y(),
                  f.values[idx]);
    os << line;
  }
}

ScalarField load_csv(const GridDomain& d, const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open " + path);
  std::string line;
  std::getline(is, line);  // header
  ScalarField out(d);
  const double h = d.spacing();
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    double x, y, v;
    char c1, c2;
    if (!(ss >> x >> c1 >> y >> c2 >> v))
      throw ConfigError("malformed CSV line: " + line);
    const int i = static_cast<int>(std::lround((x - d.origin().x()) / h - 0.5));
    const int j = static_cast<int>(std::lround((y - d.origin().y()) / h - 0.5));
    if (i < 0 || i >= d.nx() || j < 0 || j >= d.ny())
      throw ConfigError("CSV point outside grid: " + line);
    out.values[d.index(i, j)] = v;
  }
  return out;
}

}  // namespace hpmc
