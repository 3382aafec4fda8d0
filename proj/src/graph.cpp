#include "hpmc/graph.hpp"

#include <cmath>

#include "hpmc/pmc_operator.hpp"

namespace hpmc {

namespace {

// central differences; valid on cells of depth >= 2
struct Central {
  const GridDomain& d;
  double h;
  explicit Central(const GridDomain& dom) : d(dom), h(dom.spacing()) {}
  double dx(const ScalarField& f, int i, int j) const {
    return (f(i + 1, j) - f(i - 1, j)) / (2.0 * h);
  }
  double dy(const ScalarField& f, int i, int j) const {
    return (f(i, j + 1) - f(i, j - 1)) / (2.0 * h);
  }
  double dxx(const ScalarField& f, int i, int j) const {
    return (f(i + 1, j) - 2.0 * f(i, j) + f(i - 1, j)) / (h * h);
  }
  double dyy(const ScalarField& f, int i, int j) const {
    return (f(i, j + 1) - 2.0 * f(i, j) + f(i, j - 1)) / (h * h);
  }
  double dxy(const ScalarField& f, int i, int j) const {
    return (f(i + 1, j + 1) + f(i - 1, j - 1) - f(i + 1, j - 1) -
            f(i - 1, j + 1)) /
           (4.0 * h * h);
  }
};

}  // namespace

GraphGeometry make_graph_geometry(const ScalarField& u, double eps,
                                  Mode mode) {
  if (eps == 0.0)
    throw std::invalid_argument("make_graph_geometry: eps must be nonzero");
  const GridDomain& d = *u.domain;
  GraphGeometry g;
  g.domain = &d;
  g.eps = eps;
  g.mode = mode;
  g.u = u;
  const VectorField du = gradient(u);
  g.wx = ScalarField(d);
  g.wy = ScalarField(d);
  g.wnorm = ScalarField(d);
  g.nu1 = ScalarField(d);
  g.nu2 = ScalarField(d);
  g.nu3 = ScalarField(d);
  g.nuh1 = ScalarField(d);
  g.nuh2 = ScalarField(d);
  g.tdh = ScalarField(d);
  for (int idx : d.domain_cells()) {
    const int i = idx % d.nx(), j = idx / d.nx();
    const Vec2 p = d.cell_center(i, j);
    double wx = du.x.values[idx], wy = du.y.values[idx];
    if (mode == Mode::heisenberg) {
      wx += -p.y();
      wy += p.x();
    }
    const double wn = std::hypot(wx, wy);
    const double W = std::sqrt(eps * eps + wn * wn);
    g.wx.values[idx] = wx;
    g.wy.values[idx] = wy;
    g.wnorm.values[idx] = wn;
    g.nu1.values[idx] = -wx / W;
    g.nu2.values[idx] = -wy / W;
    g.nu3.values[idx] = eps / W;
    if (wn > kCharacteristicGuard) {
      g.nuh1.values[idx] = -wx / wn;
      g.nuh2.values[idx] = -wy / wn;
      g.tdh.values[idx] = 1.0 / wn;
    }
  }
  return g;
}

FrameField graph_normal(const GraphGeometry& geom) {
  FrameField f;
  f.domain = geom.domain;
  f.comp = {geom.nu1, geom.nu2, geom.nu3};
  return f;
}

ScalarField mean_curvature_operator(const GraphGeometry& geom, double sigma) {
  const PmcOperator op(*geom.domain, geom.eps, geom.mode, sigma);
  return op.apply(geom.u);
}

ScalarField curvature_energy(const GraphGeometry& geom) {
  const GridDomain& d = *geom.domain;
  const Central c(d);
  ScalarField out(d);
  bool any = false;
  for (int idx : d.domain_cells()) {
    const int i = idx % d.nx(), j = idx / d.nx();
    if (d.depth_at(idx) < 3) continue;
    any = true;
    const double t1 = c.dx(geom.nu1, i, j) * c.dx(geom.nu1, i, j) +
                      2.0 * c.dx(geom.nu2, i, j) * c.dy(geom.nu1, i, j) +
                      c.dy(geom.nu2, i, j) * c.dy(geom.nu2, i, j);
    double v = t1;
    if (geom.mode == Mode::heisenberg) {
      const double jn1 = -geom.nu2.values[idx], jn2 = geom.nu1.values[idx];
      const double g3e = geom.nu3.values[idx] / geom.eps;
      v += 4.0 * (jn1 * c.dx(geom.nu3, i, j) + jn2 * c.dy(geom.nu3, i, j)) /
           geom.eps;
      v += 4.0 * g3e * g3e;  // 4n with n = 1
    }
    out.values[idx] = v;
  }
  if (!any) throw StencilError("curvature_energy: no cell with margin 2");
  return out;
}

ScalarField laplace_beltrami(const ScalarField& f, const GraphGeometry& geom,
                             const ScalarField& H) {
  const GridDomain& d = *geom.domain;
  const Central c(d);
  ScalarField out(d);
  bool any = false;
  for (int idx : d.domain_cells()) {
    const int i = idx % d.nx(), j = idx / d.nx();
    if (d.depth_at(idx) < 2) continue;
    any = true;
    const double n1 = geom.nu1.values[idx], n2 = geom.nu2.values[idx],
                 n3 = geom.nu3.values[idx];
    const double fx = c.dx(f, i, j), fy = c.dy(f, i, j);
    const double heps = -H.values[idx];
    double v = (1.0 - n1 * n1) * c.dxx(f, i, j) -
               2.0 * n1 * n2 * c.dxy(f, i, j) +
               (1.0 - n2 * n2) * c.dyy(f, i, j);
    v -= heps * (fx * n1 + fy * n2);
    if (geom.mode == Mode::heisenberg)
      v += (2.0 * n3 / geom.eps) * (fx * (-n2) + fy * n1);
    out.values[idx] = v;
  }
  if (!any) throw StencilError("laplace_beltrami: no cell with margin 1");
  return out;
}

ScalarField jacobi_identity_residual(const GraphGeometry& geom,
                                     const ScalarField& H) {
  const GridDomain& d = *geom.domain;
  const ScalarField lap = laplace_beltrami(geom.nu3, geom, H);
  const ScalarField ce = curvature_energy(geom);
  const VectorField dH = gradient(H);
  ScalarField out(d);
  bool any = false;
  for (int idx : d.domain_cells()) {
    if (d.depth_at(idx) < 4) continue;
    any = true;
    const double n1 = geom.nu1.values[idx], n2 = geom.nu2.values[idx],
                 n3 = geom.nu3.values[idx];
    // g(grad_S Heps, eps T) for vertically-extended Heps = -H reduces to
    // -nu3 * <D Heps, nu_h> = nu3 * <D H, nu_h>
    const double grad_s_term =
        n3 * (dH.x.values[idx] * n1 + dH.y.values[idx] * n2);
    out.values[idx] = lap.values[idx] - grad_s_term + n3 * ce.values[idx];
  }
  if (!any)
    throw StencilError("jacobi_identity_residual: no cell with margin 3");
  return out;
}

namespace {

bool q_defined_at(const GraphGeometry& geom, int i, int j) {
  const GridDomain& d = *geom.domain;
  if (d.depth_at(d.index(i, j)) < 3) return false;
  for (int dj = -1; dj <= 1; ++dj)
    for (int di = -1; di <= 1; ++di)
      if (geom.wnorm.values[d.index(i + di, j + dj)] <= kCharacteristicGuard)
        return false;
  return true;
}

double q_value(const GraphGeometry& geom, int i, int j) {
  const Central c(*geom.domain);
  const int idx = geom.domain->index(i, j);
  const double t1 = c.dx(geom.nuh1, i, j) * c.dx(geom.nuh1, i, j) +
                    2.0 * c.dx(geom.nuh2, i, j) * c.dy(geom.nuh1, i, j) +
                    c.dy(geom.nuh2, i, j) * c.dy(geom.nuh2, i, j);
  const double jn1 = -geom.nuh2.values[idx], jn2 = geom.nuh1.values[idx];
  const double td = geom.tdh.values[idx];
  return t1 + 4.0 * (jn1 * c.dx(geom.tdh, i, j) + jn2 * c.dy(geom.tdh, i, j)) +
         4.0 * td * td;  // 4n with n = 1
}

}  // namespace

GuardedField second_variation_q(const GraphGeometry& geom) {
  const GridDomain& d = *geom.domain;
  GuardedField out{ScalarField(d), std::vector<unsigned char>(d.size(), 0)};
  for (int idx : d.domain_cells()) {
    const int i = idx % d.nx(), j = idx / d.nx();
    if (!q_defined_at(geom, i, j)) continue;
    out.value.values[idx] = q_value(geom, i, j);
    out.defined[idx] = 1;
  }
  return out;
}

double second_variation_q_at(const GraphGeometry& geom, const Vec2& p) {
  const GridDomain& d = *geom.domain;
  const auto [i, j] = cell_at(d, p);
  if (d.depth_at(d.index(i, j)) < 3)
    throw StencilError("second_variation_q: insufficient margin at point");
  if (!q_defined_at(geom, i, j))
    throw CharacteristicPointError(
        "second_variation_q: characteristic point (|Du+X| below guard)");
  return q_value(geom, i, j);
}

GuardedField q_limit_gap(const GraphGeometry& geom) {
  GuardedField q = second_variation_q(geom);
  const ScalarField ce = curvature_energy(geom);
  for (int idx : geom.domain->domain_cells())
    if (q.defined[idx]) q.value.values[idx] = ce.values[idx] - q.value.values[idx];
  return q;
}

double q_limit_gap_at(const GraphGeometry& geom, const Vec2& p) {
  const double q = second_variation_q_at(geom, p);
  const ScalarField ce = curvature_energy(geom);
  const auto [i, j] = cell_at(*geom.domain, p);
  return ce(i, j) - q;
}

std::pair<int, int> cell_at(const GridDomain& d, const Vec2& p) {
  const int i = static_cast<int>(
      std::lround((p.x() - d.origin().x()) / d.spacing() - 0.5));
  const int j = static_cast<int>(
      std::lround((p.y() - d.origin().y()) / d.spacing() - 0.5));
  if (i < 0 || i >= d.nx() || j < 0 || j >= d.ny() || !d.in_domain(i, j))
    throw ConfigError("point is not inside the discrete domain");
  return {i, j};
}

}  // namespace hpmc
