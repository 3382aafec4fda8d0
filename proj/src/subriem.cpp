#include "hpmc/subriem.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "hpmc/graph.hpp"

namespace hpmc {

namespace {

// Du + sigma*X at every domain cell (one-sided at the frontier)
void offset_gradient(const ScalarField& u, const PmcProblem& pb,
                     Eigen::ArrayXd& wx, Eigen::ArrayXd& wy) {
  const GridDomain& d = *u.domain;
  const VectorField g = gradient(u);
  wx = g.x.values;
  wy = g.y.values;
  if (pb.mode == Mode::heisenberg) {
    for (int idx : d.domain_cells()) {
      const Vec2 p = d.cell_center(idx % d.nx(), idx / d.nx());
      wx[idx] += pb.sigma * -p.y();
      wy[idx] += pb.sigma * p.x();
    }
  }
}

}  // namespace

double energy_eps(const ScalarField& u, const PmcProblem& problem) {
  const GridDomain& d = *u.domain;
  Eigen::ArrayXd wx, wy;
  offset_gradient(u, problem, wx, wy);
  const double e2 = problem.eps * problem.eps;
  long double s = 0.0L;
  for (int idx : d.domain_cells())
    s += std::sqrt(e2 + wx[idx] * wx[idx] + wy[idx] * wy[idx]);
  return static_cast<double>(s) * d.spacing() * d.spacing();
}

double energy_subriemannian(const ScalarField& u, const PmcProblem& problem,
                            bool include_source) {
  const GridDomain& d = *u.domain;
  Eigen::ArrayXd wx, wy;
  offset_gradient(u, problem, wx, wy);
  long double s = 0.0L;
  for (int idx : d.domain_cells()) s += std::hypot(wx[idx], wy[idx]);
  if (include_source)
    for (int idx : d.domain_cells())
      s += problem.sigma * problem.H.values[idx] * u.values[idx];
  return static_cast<double>(s) * d.spacing() * d.spacing();
}

double penalized_energy(const ScalarField& u, const PmcProblem& problem) {
  const GridDomain& d = *u.domain;
  long double s = energy_eps(u, problem);
  const double h2 = d.spacing() * d.spacing();
  for (int idx : d.domain_cells())
    s += problem.sigma * problem.H.values[idx] * u.values[idx] * h2;
  for (int idx : d.boundary_cells())
    s += d.spacing() *
         std::abs(u.values[idx] - problem.sigma * problem.phi.values[idx]);
  return static_cast<double>(s);
}

namespace {

// integer lattice offset of grid g relative to grid base: cell (i,j) of g
// sits at cell (i+oi, j+oj) of base (both origins on the same h-lattice)
std::pair<int, int> lattice_offset(const GridDomain& base,
                                   const GridDomain& g) {
  const double h = base.spacing();
  return {
      static_cast<int>(std::lround((g.origin().x() - base.origin().x()) / h)),
      static_cast<int>(std::lround((g.origin().y() - base.origin().y()) / h))};
}

// nearest-value fill of unset domain cells (breadth first from the set ones)
void bfs_fill(const GridDomain& d, Eigen::ArrayXd& vals,
              std::vector<char>& set) {
  std::deque<int> queue;
  for (int idx : d.domain_cells())
    if (set[idx]) queue.push_back(idx);
  const int nx = d.nx();
  while (!queue.empty()) {
    const int idx = queue.front();
    queue.pop_front();
    const int i = idx % nx, j = idx / nx;
    const int neigh[4][2] = {{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}};
    for (const auto& n : neigh) {
      if (!d.in_domain_checked(n[0], n[1])) continue;
      const int nidx = d.index(n[0], n[1]);
      if (set[nidx]) continue;
      vals[nidx] = vals[idx];
      set[nidx] = 1;
      queue.push_back(nidx);
    }
  }
}

}  // namespace

LimitReport eps_continuation(const PmcProblem& problem,
                             const EpsSchedule& schedule) {
  const GridDomain& d = *problem.domain;
  {
    const ConditionReport cls = classify_domain(d, problem.H);
    if (cls.classification == DomainClass::infeasible)
      throw InfeasibleDomainError("eps_continuation: infeasible (domain, H)");
  }
  if (schedule.eps_list.empty())
    throw ConfigError("eps_continuation: empty eps list");
  for (size_t k = 1; k < schedule.eps_list.size(); ++k)
    if (schedule.eps_list[k] >= schedule.eps_list[k - 1] ||
        schedule.eps_list[k] <= 0.0)
      throw ConfigError(
          "eps_continuation: eps list must be positive, strictly decreasing");

  std::vector<double> margins = schedule.margins;
  if (margins.empty()) margins.push_back(0.1);
  while (margins.size() < schedule.eps_list.size())
    margins.push_back(margins.back() * 0.5);

  LimitReport rep;
  std::deque<GridDomain> grids;  // stable references across steps
  std::vector<Eigen::ArrayXd> sols;
  const double inr = d.inradius();

  for (size_t j = 0; j < schedule.eps_list.size(); ++j) {
    grids.push_back(erode(d, margins[j] * inr));
    const GridDomain& dj = grids.back();
    const auto [oi, oj] = lattice_offset(d, dj);

    PmcProblem pj;
    pj.domain = &dj;
    pj.eps = schedule.eps_list[j];
    pj.mode = problem.mode;
    pj.sigma = problem.sigma;
    pj.phi_fn = problem.phi_fn;
    pj.H = ScalarField(dj);
    pj.phi = ScalarField(dj);
    for (int idx : dj.domain_cells()) {
      const int i = idx % dj.nx(), jj = idx / dj.nx();
      const int pidx = d.index(i + oi, jj + oj);
      pj.H.values[idx] = problem.H.values[pidx];
      pj.phi.values[idx] = problem.phi.values[pidx];
    }

    // warm start from the previous step mapped onto the larger domain
    ScalarField init(dj);
    const ScalarField* initp = nullptr;
    if (j > 0) {
      const GridDomain& dp = grids[j - 1];
      const auto [bi, bj] = lattice_offset(d, dp);
      std::vector<char> set(dj.size(), 0);
      for (int idx : dj.domain_cells()) {
        const int i = idx % dj.nx(), jj = idx / dj.nx();
        const int qi = i + oi - bi, qj = jj + oj - bj;
        if (qi >= 0 && qi < dp.nx() && qj >= 0 && qj < dp.ny() &&
            dp.in_domain(qi, qj)) {
          init.values[idx] = sols[j - 1][dp.index(qi, qj)];
          set[idx] = 1;
        }
      }
      bfs_fill(dj, init.values, set);
      initp = &init;
    }

    auto [u, sr] = solve_dirichlet(pj, schedule.solver, initp);
    if (!sr.converged) {
      auto [u2, sr2] = minimize_penalized(pj, schedule.solver, initp);
      if (sr2.converged) {
        u = u2;
        sr = sr2;
      } else {
        rep.error = "step " + std::to_string(j) +
                    " failed: " + (sr.error.empty() ? sr2.error : sr.error);
        rep.converged = false;
        return rep;
      }
    }

    LimitStep step;
    step.eps = pj.eps;
    step.iterations = sr.iterations;
    step.converged = sr.converged;
    step.grad_max = sr.max_gradient;

    // extension by the boundary datum onto the full domain
    ScalarField ext = problem.phi;
    ext.values *= problem.sigma;
    for (int idx : dj.domain_cells()) {
      const int i = idx % dj.nx(), jj = idx / dj.nx();
      ext.values[d.index(i + oi, jj + oj)] = u.values[idx];
    }
    PmcProblem pfull = problem;
    pfull.eps = pj.eps;
    step.energy_eps = energy_eps(ext, pfull);
    step.energy_sub = energy_subriemannian(ext, pfull);

    if (j > 0) {
      // successive difference on the probe compact (the smallest set)
      const GridDomain& d0 = grids[0];
      const GridDomain& dp = grids[j - 1];
      const auto [ai, aj] = lattice_offset(d, d0);
      const auto [bi, bj] = lattice_offset(d, dp);
      double dm = 0.0;
      for (int idx : d0.domain_cells()) {
        const int i = idx % d0.nx(), jj = idx / d0.nx();
        const int gi = i + ai, gj = jj + aj;  // full-lattice coordinates
        const int ci = gi - bi, cj = gj - bj;
        const int di2 = gi - oi, dj2 = gj - oj;
        if (ci < 0 || ci >= dp.nx() || cj < 0 || cj >= dp.ny()) continue;
        if (di2 < 0 || di2 >= dj.nx() || dj2 < 0 || dj2 >= dj.ny()) continue;
        if (!dp.in_domain(ci, cj) || !dj.in_domain(di2, dj2)) continue;
        dm = std::max(dm, std::abs(u.values[dj.index(di2, dj2)] -
                                   sols[j - 1][dp.index(ci, cj)]));
      }
      step.du_max = dm;
    }

    rep.steps.push_back(step);
    sols.push_back(u.values);

    if (j + 1 == schedule.eps_list.size()) {
      const GraphGeometry geom = make_graph_geometry(u, pj.eps, pj.mode);
      int nchar = 0;
      for (int idx : dj.interior_cells())
        if (geom.wnorm.values[idx] <= kCharacteristicGuard) ++nchar;
      rep.characteristic_cells = nchar;
      rep.u = ext;
    }
  }

  rep.converged = rep.steps.size() >= 2 &&
                  rep.steps.back().du_max <= schedule.du_tol &&
                  rep.steps.back().converged;
  return rep;
}

}  // namespace hpmc
