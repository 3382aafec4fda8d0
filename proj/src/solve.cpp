#include "hpmc/solve.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <random>

#include "hpmc/pmc_operator.hpp"
#include "hpmc/subriem.hpp"

namespace hpmc {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

void check_feasible(const PmcProblem& pb) {
  const ConditionReport cls = classify_domain(*pb.domain, pb.H);
  if (cls.classification == DomainClass::infeasible)
    throw InfeasibleDomainError(
        "|int H| exceeds the domain perimeter; no solution exists");
}

double objective(const PmcOperator& op, const PmcProblem& pb, double sigma,
                 const Eigen::ArrayXd& u) {
  const GridDomain& d = op.domain();
  const double h2 = d.spacing() * d.spacing();
  long double ht = 0.0L;
  for (int idx : d.domain_cells()) ht += pb.H.values[idx] * u[idx];
  return op.energy(u) + sigma * h2 * static_cast<double>(ht);
}

struct NewtonResult {
  bool ok = false;
  int iterations = 0;
  std::vector<double> residual_history;
  double worst_energy_increase = 0.0;
  double final_residual = 0.0;
};

NewtonResult newton_solve(const PmcOperator& op, const PmcProblem& pb,
                          double sigma, const SolverConfig& cfg,
                          Eigen::ArrayXd& u) {
  const GridDomain& d = op.domain();
  const double h2 = d.spacing() * d.spacing();
  const auto& interior = d.interior_cells();
  const int n = static_cast<int>(interior.size());
  std::vector<int> cell_to_unknown(d.size(), -1);
  for (int k = 0; k < n; ++k) cell_to_unknown[interior[k]] = k;

  NewtonResult out;
  Eigen::SimplicialLDLT<SpMat> ldlt;
  bool analyzed = false;
  double prev_obj = std::numeric_limits<double>::quiet_NaN();
  int polish_left = cfg.polish_newton;

  auto residual_vec = [&](const Eigen::ArrayXd& uu) {
    const Eigen::VectorXd g = op.energy_gradient(uu);
    Eigen::VectorXd grad(n);
    for (int k = 0; k < n; ++k)
      grad[k] = g[interior[k]] + sigma * h2 * pb.H.values[interior[k]];
    return grad;
  };

  Eigen::VectorXd grad = residual_vec(u);
  for (int it = 0; it <= cfg.max_newton; ++it) {
    const double res = grad.lpNorm<Eigen::Infinity>() / h2;
    out.residual_history.push_back(res);
    out.final_residual = res;
    const bool done = res <= cfg.tol_residual;
    if (done && polish_left <= 0) {
      out.ok = true;
      return out;
    }
    if (it == cfg.max_newton) {
      out.ok = done;
      return out;
    }

    SpMat hess = op.hessian(u, cell_to_unknown, n);
    if (!analyzed) {
      ldlt.analyzePattern(hess);
      analyzed = true;
    }
    ldlt.factorize(hess);
    if (ldlt.info() != Eigen::Success) {
      out.ok = done;
      return out;
    }
    const Eigen::VectorXd delta = ldlt.solve(-grad);
    const double dirder = grad.dot(delta);

    if (done) {
      // polishing step: accept a full step only if the residual improves
      Eigen::ArrayXd u_try = u;
      for (int k = 0; k < n; ++k) u_try[interior[k]] += delta[k];
      const Eigen::VectorXd grad_try = residual_vec(u_try);
      if (grad_try.lpNorm<Eigen::Infinity>() < grad.lpNorm<Eigen::Infinity>()) {
        u = u_try;
        grad = grad_try;
        ++out.iterations;
      }
      --polish_left;
      continue;
    }

    const double obj0 = objective(op, pb, sigma, u);
    const double res_norm = grad.lpNorm<Eigen::Infinity>();
    double alpha = 1.0;
    {
      // cap the step so a near-degenerate face (saturated flux) cannot
      // throw the iterate far outside the trust region of the model
      const double cap = 2.0 * (1.0 + u.abs().maxCoeff());
      const double dn = delta.lpNorm<Eigen::Infinity>();
      if (dn > cap) alpha = cap / dn;
    }
    bool accepted = false;
    Eigen::VectorXd grad_try;
    bool have_grad_try = false;
    while (alpha >= cfg.min_step) {
      Eigen::ArrayXd u_try = u;
      for (int k = 0; k < n; ++k) u_try[interior[k]] += alpha * delta[k];
      const double obj_try = objective(op, pb, sigma, u_try);
      bool take = obj_try <= obj0 + cfg.armijo_c * alpha * dirder;
      have_grad_try = false;
      if (!take && std::abs(obj_try - obj0) <= 1e-11 * (1.0 + std::abs(obj0))) {
        // the energy decrease has dropped below summation noise while the
        // equation residual still contracts; accept on residual descent so
        // the quadratic phase is not cut short
        grad_try = residual_vec(u_try);
        have_grad_try = true;
        take = grad_try.lpNorm<Eigen::Infinity>() <=
               (1.0 - cfg.armijo_c * alpha) * res_norm;
      }
      if (take) {
        u = u_try;
        if (!std::isnan(prev_obj))
          out.worst_energy_increase =
              std::max(out.worst_energy_increase, obj_try - prev_obj);
        prev_obj = obj_try;
        accepted = true;
        break;
      }
      alpha *= cfg.backtrack_shrink;
    }
    if (!accepted) return out;  // stall: step below min_step
    ++out.iterations;
    grad = have_grad_try ? grad_try : residual_vec(u);
  }
  return out;
}

double max_interior_gradient(const ScalarField& u) {
  const GridDomain& d = *u.domain;
  const VectorField g = gradient(u);
  double m = 0.0;
  for (int idx : d.interior_cells())
    m = std::max(m, std::hypot(g.x.values[idx], g.y.values[idx]));
  return m;
}

}  // namespace

PmcProblem make_problem(const GridDomain& d,
                        const std::function<double(double, double)>& H,
                        const std::function<double(double, double)>& phi,
                        double eps, Mode mode) {
  if (eps == 0.0) throw std::invalid_argument("make_problem: eps must be nonzero");
  PmcProblem pb;
  pb.domain = &d;
  pb.H = make_field(d, H);
  pb.phi = make_field(d, phi);
  pb.phi_fn = phi;
  pb.eps = eps;
  pb.mode = mode;
  return pb;
}

std::pair<ScalarField, SolveReport> solve_dirichlet(const PmcProblem& problem,
                                                    const SolverConfig& cfg,
                                                    const ScalarField* init) {
  const GridDomain& d = *problem.domain;
  check_feasible(problem);

  SolveReport report;
  Eigen::ArrayXd u = Eigen::ArrayXd::Zero(d.size());
  if (init) for (int idx : d.interior_cells()) u[idx] = init->values[idx];
  auto set_boundary = [&](double s) {
    for (int idx : d.boundary_cells()) u[idx] = s * problem.phi.values[idx];
  };

  const double target = problem.sigma;
  set_boundary(target);
  PmcOperator op(d, problem.eps, problem.mode, target);
  NewtonResult nr = newton_solve(op, problem, target, cfg, u);
  report.homotopy_path.push_back(target);
  report.residual_history = nr.residual_history;
  report.iterations = nr.iterations;
  report.worst_energy_increase = nr.worst_energy_increase;

  if (!nr.ok) {
    // continuation from the trivial sigma = 0 state, scaling X, H and the
    // boundary datum together; the increment is bisected on failure so a
    // stiff boundary-data jump cannot kill the path
    u.setZero();
    report.homotopy_path.clear();
    report.residual_history.clear();
    report.iterations = 0;
    report.worst_energy_increase = 0.0;
    Eigen::ArrayXd u_stable = u;
    double s_cur = 0.0;
    double step = target / cfg.homotopy_steps;
    const double min_sigma_step = step / 64.0;
    bool ok = true;
    while (s_cur < target - 1e-15) {
      const double s = std::min(target, s_cur + step);
      set_boundary(s);
      PmcOperator ops(d, problem.eps, problem.mode, s);
      nr = newton_solve(ops, problem, s, cfg, u);
      report.iterations += nr.iterations;
      report.residual_history.insert(report.residual_history.end(),
                                     nr.residual_history.begin(),
                                     nr.residual_history.end());
      report.worst_energy_increase =
          std::max(report.worst_energy_increase, nr.worst_energy_increase);
      if (nr.ok) {
        report.homotopy_path.push_back(s);
        s_cur = s;
        u_stable = u;
        step = std::min(2.0 * step, target / cfg.homotopy_steps);
      } else {
        u = u_stable;
        step *= 0.5;
        if (step < min_sigma_step) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) report.error = "newton stalled on the continuation path";
    nr.ok = ok;
  }

  ScalarField usol(d);
  usol.values = u;
  report.final_residual =
      report.residual_history.empty() ? 0.0 : report.residual_history.back();
  report.converged = nr.ok && report.final_residual <= cfg.tol_residual;
  report.energy = penalized_energy(usol, problem);
  report.max_gradient = max_interior_gradient(usol);
  return {usol, report};
}

namespace {

// dual cell contribution to the lower bound: inf over |t| <= M of
// r*t + penalty(t), with the boundary kink at phi
double dual_cell_value(double r, bool is_boundary, double phi, double h,
                       double box) {
  if (!is_boundary) return -box * std::abs(r);
  const double at_kink = r * phi;
  const double at_hi = r * box + h * std::abs(box - phi);
  const double at_lo = -r * box + h * std::abs(box + phi);
  return std::min(at_kink, std::min(at_hi, at_lo));
}

double measure_norm(const PmcOperator& op, const GridDomain& d, double scale) {
  std::mt19937 rng(12345);
  std::normal_distribution<double> nd;
  Eigen::ArrayXd v = Eigen::ArrayXd::Zero(d.size());
  for (int idx : d.domain_cells()) v[idx] = nd(rng);
  double lambda = 1.0;
  Eigen::ArrayXd wn, wt;
  for (int it = 0; it < 40; ++it) {
    op.face_values(v, wn, wt);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(d.size());
    op.face_adjoint(wn * scale * scale, wt * scale * scale, out);
    double nrm = 0.0;
    for (int idx : d.domain_cells()) nrm += out[idx] * out[idx];
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) return scale;  // degenerate
    lambda = nrm;
    for (int idx : d.domain_cells()) v[idx] = out[idx] / nrm;
  }
  return std::sqrt(lambda) * 1.01;
}

// 1d prox of the smooth dual engine: minimize over t in [0, w)
//   -eps*sqrt(w^2 - t^2) + (t - p)^2 / (2s)
double radial_dual_prox(double p, double w, double eps, double s) {
  double t = std::clamp(p, 0.0, w * (1.0 - 1e-12));
  for (int it = 0; it < 60; ++it) {
    const double root = std::sqrt(w * w - t * t);
    const double f = eps * t / root + (t - p) / s;
    const double fp = eps * w * w / (root * root * root) + 1.0 / s;
    double step = f / fp;
    double tn = t - step;
    if (tn >= w) tn = 0.5 * (t + w);
    if (tn < 0.0) tn = 0.5 * t;
    if (std::abs(tn - t) <= 1e-15 * w) {
      t = tn;
      break;
    }
    t = tn;
  }
  return t;
}

}  // namespace

std::pair<ScalarField, SolveReport> minimize_penalized(
    const PmcProblem& problem, const SolverConfig& cfg,
    const ScalarField* init) {
  const GridDomain& d = *problem.domain;
  const ConditionReport cls = classify_domain(d, problem.H);
  if (cls.classification == DomainClass::infeasible)
    throw InfeasibleDomainError(
        "|int H| exceeds the domain perimeter; no minimizer exists");

  const double sigma = problem.sigma;
  const double h = d.spacing();
  const double h2 = h * h;
  const double w = 0.5 * h2;
  const double eps = std::abs(problem.eps);
  PmcOperator op(d, problem.eps, problem.mode, sigma);
  const auto& faces = op.faces();
  const auto nf = static_cast<Eigen::Index>(faces.size());

  // linear term: source plus the well-balanced tilt
  Eigen::VectorXd lin = -op.tilt();
  for (int idx : d.domain_cells())
    lin[idx] += sigma * h2 * problem.H.values[idx];

  double max_phi = 0.0, max_center = 0.0;
  for (int idx : d.boundary_cells())
    max_phi = std::max(max_phi, std::abs(sigma * problem.phi.values[idx]));
  for (int idx : d.domain_cells()) {
    const Vec2 p = d.cell_center(idx % d.nx(), idx / d.nx());
    max_center = std::max(max_center, p.norm());
  }
  const double box =
      100.0 * (1.0 + max_phi +
               2.0 * max_center * (problem.mode == Mode::heisenberg
                                       ? 1.0 + max_center
                                       : 1.0));

  Eigen::ArrayXd v = Eigen::ArrayXd::Zero(d.size());
  if (init) {
    for (int idx : d.domain_cells()) v[idx] = init->values[idx];
  }
  for (int idx : d.boundary_cells()) v[idx] = sigma * problem.phi.values[idx];

  const auto& interior = d.interior_cells();
  if (!init && cfg.pd_warm_linear) {
    // lagged-diffusivity quadratic model with the boundary pinned
    const int n = static_cast<int>(interior.size());
    std::vector<int> c2u(d.size(), -1);
    for (int k = 0; k < n; ++k) c2u[interior[k]] = k;
    std::vector<Eigen::Triplet<double>> trips;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    Eigen::ArrayXd wn, wt;
    op.face_values(v, wn, wt);
    for (Eigen::Index k = 0; k < nf; ++k) {
      const Face& f = faces[k];
      const double an0 = f.Xn, at0 = f.Xt;
      const double W0 = std::sqrt(eps * eps + an0 * an0 + at0 * at0);
      const double cW = w / W0;
      std::array<int, 8> cells;
      std::array<double, 8> cn, ct;
      int m = 0;
      auto push = [&](int cell, double a, double b) {
        for (int q = 0; q < m; ++q)
          if (cells[q] == cell) {
            cn[q] += a;
            ct[q] += b;
            return;
          }
        cells[m] = cell;
        cn[m] = a;
        ct[m] = b;
        ++m;
      };
      push(f.n0, -1.0 / h, 0.0);
      push(f.n1, 1.0 / h, 0.0);
      for (int q = 0; q < 6; ++q)
        if (f.tc[q] >= 0) push(f.tc[q], 0.0, f.tw[q]);
      // residual of the model at v: cW*(w_f(v) + X_f) against each stencil
      const double rn = cW * (wn[k] + f.Xn), rt = cW * (wt[k] + f.Xt);
      for (int a = 0; a < m; ++a) {
        const int ia = c2u[cells[a]];
        if (ia < 0) continue;
        rhs[ia] -= rn * cn[a] + rt * ct[a];
        for (int b = 0; b < m; ++b) {
          const int ib = c2u[cells[b]];
          if (ib < 0) continue;
          trips.emplace_back(ia, ib, cW * (cn[a] * cn[b] + ct[a] * ct[b]));
        }
      }
    }
    for (int k = 0; k < n; ++k) rhs[k] -= lin[interior[k]];
    SpMat A(static_cast<int>(interior.size()), static_cast<int>(interior.size()));
    A.setFromTriplets(trips.begin(), trips.end());
    Eigen::SimplicialLDLT<SpMat> ldlt(A);
    if (ldlt.info() == Eigen::Success) {
      const Eigen::VectorXd dv = ldlt.solve(rhs);
      for (int k = 0; k < n; ++k) v[interior[k]] += dv[k];
    }
  }

  // dual state: 3-component unit ball per face (ball engine) or the
  // unnormalized smooth 2-component dual (smooth engine)
  Eigen::ArrayXd g1(nf), g2(nf), g3(nf);
  Eigen::ArrayXd wn, wt;
  op.face_values(v, wn, wt);
  for (Eigen::Index k = 0; k < nf; ++k) {
    const Face& f = faces[k];
    const double an = wn[k] + f.Xn, at = wt[k] + f.Xt;
    const double W = std::sqrt(eps * eps + an * an + at * at);
    g1[k] = an / W;
    g2[k] = at / W;
    g3[k] = eps / W;
  }

  SolveReport report;
  auto primal_value = [&](const Eigen::ArrayXd& vv) {
    op.face_values(vv, wn, wt);
    long double p = 0.0L;
    for (Eigen::Index k = 0; k < nf; ++k) {
      const Face& f = faces[k];
      const double an = wn[k] + f.Xn, at = wt[k] + f.Xt;
      p += w * std::sqrt(eps * eps + an * an + at * at);
    }
    for (int idx : d.domain_cells()) p += lin[idx] * vv[idx];
    for (int idx : d.boundary_cells())
      p += h * std::abs(vv[idx] - sigma * problem.phi.values[idx]);
    return static_cast<double>(p);
  };
  auto dual_value = [&](const Eigen::ArrayXd& a1, const Eigen::ArrayXd& a2,
                        const Eigen::ArrayXd& a3) {
    long double dv = 0.0L;
    for (Eigen::Index k = 0; k < nf; ++k) {
      const Face& f = faces[k];
      dv += w * (a1[k] * f.Xn + a2[k] * f.Xt + eps * a3[k]);
    }
    Eigen::VectorXd r = lin;
    op.face_adjoint(a1 * w, a2 * w, r);
    for (int idx : d.domain_cells()) {
      const bool is_b = d.tag(idx % d.nx(), idx / d.nx()) == CellTag::boundary;
      dv += dual_cell_value(r[idx], is_b,
                            sigma * problem.phi.values[idx], h, box);
    }
    return static_cast<double>(dv);
  };

  auto primal_prox = [&](Eigen::ArrayXd& vv, const Eigen::VectorXd& descent,
                         double tau) {
    for (int idx : d.domain_cells()) {
      double t = vv[idx] - tau * descent[idx];
      if (d.tag(idx % d.nx(), idx / d.nx()) == CellTag::boundary) {
        const double target = sigma * problem.phi.values[idx];
        const double dev = t - target;
        const double kappa = tau * h;
        t = target + (dev > kappa ? dev - kappa
                                  : (dev < -kappa ? dev + kappa : 0.0));
      }
      vv[idx] = std::clamp(t, -box, box);
    }
  };

  int iters = 0;
  double gap = std::numeric_limits<double>::infinity();

  if (cfg.pd_engine == PdEngine::ball) {
    const double norm_a = measure_norm(op, d, w);
    double tau = cfg.pd_tau > 0 ? cfg.pd_tau : 0.95 / norm_a;
    double s = cfg.pd_s > 0 ? cfg.pd_s : 0.95 / norm_a;
    const double theta = cfg.pd_theta;
    Eigen::ArrayXd vbar = v, vprev = v;
    Eigen::VectorXd descent(d.size());
    for (int k = 0; k < cfg.max_pd; ++k) {
      // dual ascent with extrapolated primal, then unit-ball projection
      op.face_values(vbar, wn, wt);
      for (Eigen::Index f = 0; f < nf; ++f) {
        g1[f] += s * w * (wn[f] + faces[f].Xn);
        g2[f] += s * w * (wt[f] + faces[f].Xt);
        g3[f] += s * w * eps;
        const double nrm =
            std::sqrt(g1[f] * g1[f] + g2[f] * g2[f] + g3[f] * g3[f]);
        if (nrm > 1.0) {
          g1[f] /= nrm;
          g2[f] /= nrm;
          g3[f] /= nrm;
        }
      }
      descent = lin;
      op.face_adjoint(g1 * w, g2 * w, descent);
      vprev = v;
      primal_prox(v, descent, tau);
      vbar = v + theta * (v - vprev);
      ++iters;
      if ((k + 1) % 25 == 0 || k + 1 == cfg.max_pd) {
        const double pv = primal_value(v), dv = dual_value(g1, g2, g3);
        gap = (pv - dv) / std::max(1.0, std::abs(pv));
        report.residual_history.push_back(gap);
        if (gap <= cfg.pd_gap_tol) break;
      }
    }
  } else {
    // smooth engine: unnormalized 2-component dual q with
    // F*(q) = -q.c - eps*sqrt(w^2-|q|^2); accelerated via the strong
    // convexity gamma = eps/w of F*
    const double norm_k = measure_norm(op, d, 1.0);
    double tau = cfg.pd_tau > 0 ? cfg.pd_tau : 0.95 / norm_k;
    double s = cfg.pd_s > 0 ? cfg.pd_s : 0.95 / norm_k;
    const double gamma = eps / w;
    Eigen::ArrayXd q1 = g1 * w, q2 = g2 * w;
    Eigen::ArrayXd q1p = q1, q2p = q2;
    Eigen::VectorXd descent(d.size());
    double theta_prev = 1.0;
    for (int k = 0; k < cfg.max_pd; ++k) {
      // primal step with extrapolated dual
      const Eigen::ArrayXd e1 = q1 + theta_prev * (q1 - q1p);
      const Eigen::ArrayXd e2 = q2 + theta_prev * (q2 - q2p);
      descent = lin;
      op.face_adjoint(e1, e2, descent);
      primal_prox(v, descent, tau);
      // dual prox
      q1p = q1;
      q2p = q2;
      op.face_values(v, wn, wt);
      for (Eigen::Index f = 0; f < nf; ++f) {
        // shift by s*c folds the linear -q.c part of F* into the prox
        const double p1 = q1[f] + s * (wn[f] + faces[f].Xn);
        const double p2 = q2[f] + s * (wt[f] + faces[f].Xt);
        const double pn = std::hypot(p1, p2);
        const double t = pn == 0.0 ? 0.0 : radial_dual_prox(pn, w, eps, s);
        const double sc = pn == 0.0 ? 0.0 : t / pn;
        q1[f] = p1 * sc;
        q2[f] = p2 * sc;
      }
      const double theta = 1.0 / std::sqrt(1.0 + 2.0 * gamma * s);
      s *= theta;
      tau /= theta;
      theta_prev = theta;
      ++iters;
      if ((k + 1) % 25 == 0 || k + 1 == cfg.max_pd) {
        for (Eigen::Index f = 0; f < nf; ++f) {
          g1[f] = q1[f] / w;
          g2[f] = q2[f] / w;
          const double rad2 = 1.0 - g1[f] * g1[f] - g2[f] * g2[f];
          g3[f] = rad2 > 0.0 ? std::sqrt(rad2) : 0.0;
        }
        const double pv = primal_value(v), dv = dual_value(g1, g2, g3);
        gap = (pv - dv) / std::max(1.0, std::abs(pv));
        report.residual_history.push_back(gap);
        if (gap <= cfg.pd_gap_tol) break;
      }
    }
  }

  ScalarField usol(d);
  usol.values = v;
  if (cls.classification == DomainClass::extremal) {
    // fix the vertical-translation gauge
    std::vector<double> vals;
    vals.reserve(d.domain_cells().size());
    for (int idx : d.domain_cells()) vals.push_back(v[idx]);
    std::nth_element(vals.begin(), vals.begin() + vals.size() / 2, vals.end());
    const double med = vals[vals.size() / 2];
    for (int idx : d.domain_cells()) usol.values[idx] -= med;
  }

  report.iterations = iters;
  report.duality_gap = gap;
  report.converged = gap <= cfg.pd_gap_tol;
  if (!report.converged) report.error = "duality gap above tolerance at max_pd";
  {
    const ScalarField res = op.apply(usol);
    double r = 0.0;
    for (int idx : d.interior_cells())
      r = std::max(r, std::abs(res.values[idx] -
                               sigma * problem.H.values[idx]));
    report.final_residual = r;
  }
  report.energy = penalized_energy(usol, problem);
  report.max_gradient = max_interior_gradient(usol);
  return {usol, report};
}

double boundary_flux(const ScalarField& u, const PmcProblem& problem,
                     double t) {
  const GridDomain& d = *problem.domain;
  if (t <= 0.0) throw ConfigError("boundary_flux: t must be positive");
  std::vector<char> in_set(d.size(), 0);
  int count = 0;
  for (int idx : d.domain_cells()) {
    const Vec2 p = d.cell_center(idx % d.nx(), idx / d.nx());
    if (d.boundary_distance(p) > t) {
      in_set[idx] = 1;
      ++count;
    }
  }
  if (count == 0)
    throw ConfigError("boundary_flux: erosion by t empties the domain");
  const PmcOperator op(d, problem.eps, problem.mode, problem.sigma);
  return op.set_flux(u.values, in_set);
}

ComparisonReport comparison_check(const ScalarField& u, const ScalarField& v,
                                  const PmcProblem& problem) {
  const GridDomain& d = *problem.domain;
  ComparisonReport r;
  r.boundary_excess = -std::numeric_limits<double>::infinity();
  r.worst_violation = -std::numeric_limits<double>::infinity();
  for (int idx : d.boundary_cells())
    r.boundary_excess =
        std::max(r.boundary_excess, u.values[idx] - v.values[idx]);
  for (int idx : d.interior_cells())
    r.worst_violation =
        std::max(r.worst_violation, u.values[idx] - v.values[idx]);
  r.boundary_ordered = r.boundary_excess <= 0.0;
  return r;
}

}  // namespace hpmc
