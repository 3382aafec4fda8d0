#include "hpmc/pmc_operator.hpp"

#include <cmath>

namespace hpmc {

PmcOperator::PmcOperator(const GridDomain& d, double eps, Mode mode,
                         double sigma)
    : d_(&d), eps_(eps), sigma_(sigma), mode_(mode) {
  if (eps == 0.0)
    throw std::invalid_argument("PmcOperator: eps must be nonzero");
  const double h = d.spacing();
  weight_ = 0.25 * h * h;
  // 2x2 Gauss nodes on the unit square
  const double ga = 0.5 - 0.5 / std::sqrt(3.0);
  const double gb = 0.5 + 0.5 / std::sqrt(3.0);
  const double gauss[4][2] = {{ga, ga}, {gb, ga}, {ga, gb}, {gb, gb}};

  samples_.reserve(d.domain_cells().size() * 4);
  for (int idx : d.domain_cells()) {
    const int i = idx % d.nx(), j = idx / d.nx();
    if (!d.in_domain_checked(i + 1, j) || !d.in_domain_checked(i, j + 1) ||
        !d.in_domain_checked(i + 1, j + 1))
      continue;
    const std::array<int, 4> cells = {idx, d.index(i + 1, j),
                                      d.index(i, j + 1),
                                      d.index(i + 1, j + 1)};
    const Vec2 corner = d.cell_center(i, j);
    for (const auto& g : gauss) {
      const double xi = g[0], eta = g[1];
      AreaSample s;
      s.c = cells;
      s.gx = {-(1.0 - eta) / h, (1.0 - eta) / h, -eta / h, eta / h};
      s.gy = {-(1.0 - xi) / h, -xi / h, (1.0 - xi) / h, xi / h};
      const Vec2 p = corner + h * Vec2(xi, eta);
      if (mode_ == Mode::heisenberg) {
        s.Xn = sigma_ * -p.y();
        s.Xt = sigma_ * p.x();
      } else {
        s.Xn = s.Xt = 0.0;
      }
      samples_.push_back(s);
    }
  }
  tilt_ = raw_gradient(Eigen::ArrayXd::Zero(d.size()));
}

void PmcOperator::sample_values(const Eigen::ArrayXd& u, Eigen::ArrayXd& px,
                                Eigen::ArrayXd& py) const {
  const auto ns = static_cast<Eigen::Index>(samples_.size());
  px.resize(ns);
  py.resize(ns);
  for (Eigen::Index k = 0; k < ns; ++k) {
    const AreaSample& s = samples_[k];
    double ax = 0.0, ay = 0.0;
    for (int q = 0; q < 4; ++q) {
      ax += s.gx[q] * u[s.c[q]];
      ay += s.gy[q] * u[s.c[q]];
    }
    px[k] = ax;
    py[k] = ay;
  }
}

void PmcOperator::sample_adjoint(const Eigen::ArrayXd& a,
                                 const Eigen::ArrayXd& b,
                                 Eigen::VectorXd& out) const {
  for (size_t k = 0; k < samples_.size(); ++k) {
    const AreaSample& s = samples_[k];
    for (int q = 0; q < 4; ++q)
      out[s.c[q]] += a[k] * s.gx[q] + b[k] * s.gy[q];
  }
}

Eigen::VectorXd PmcOperator::raw_gradient(const Eigen::ArrayXd& u) const {
  Eigen::ArrayXd px, py;
  sample_values(u, px, py);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(d_->size());
  Eigen::ArrayXd fa(px.size()), fb(px.size());
  for (Eigen::Index k = 0; k < px.size(); ++k) {
    const AreaSample& s = samples_[k];
    const double an = px[k] + s.Xn, at = py[k] + s.Xt;
    const double W = std::sqrt(eps_ * eps_ + an * an + at * at);
    fa[k] = weight_ * an / W;
    fb[k] = weight_ * at / W;
  }
  sample_adjoint(fa, fb, g);
  return g;
}

double PmcOperator::energy(const Eigen::ArrayXd& u) const {
  Eigen::ArrayXd px, py;
  sample_values(u, px, py);
  long double e = 0.0L;
  for (Eigen::Index k = 0; k < px.size(); ++k) {
    const AreaSample& s = samples_[k];
    const double an = px[k] + s.Xn, at = py[k] + s.Xt;
    e += weight_ * std::sqrt(eps_ * eps_ + an * an + at * at);
  }
  return static_cast<double>(e) - tilt_.dot(u.matrix());
}

Eigen::VectorXd PmcOperator::energy_gradient(const Eigen::ArrayXd& u) const {
  return raw_gradient(u) - tilt_;
}

ScalarField PmcOperator::apply(const ScalarField& u) const {
  if (d_->interior_cells().empty())
    throw StencilError("mean curvature operator: no interior cells");
  const double h2 = d_->spacing() * d_->spacing();
  const Eigen::VectorXd g = energy_gradient(u.values);
  ScalarField out(*d_);
  for (int idx : d_->interior_cells()) out.values[idx] = -g[idx] / h2;
  return out;
}

Eigen::SparseMatrix<double> PmcOperator::hessian(
    const Eigen::ArrayXd& u, const std::vector<int>& cell_to_unknown,
    int n_unknowns) const {
  Eigen::ArrayXd px, py;
  sample_values(u, px, py);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(samples_.size() * 16);
  for (Eigen::Index k = 0; k < px.size(); ++k) {
    const AreaSample& s = samples_[k];
    const double an = px[k] + s.Xn, at = py[k] + s.Xt;
    const double W2 = eps_ * eps_ + an * an + at * at;
    const double W = std::sqrt(W2);
    // D^2 of weight*sqrt(eps^2+|p|^2): weight*(I/W - p p^T/W^3)
    const double mnn = weight_ * (1.0 / W - an * an / (W2 * W));
    const double mtt = weight_ * (1.0 / W - at * at / (W2 * W));
    const double mnt = weight_ * (-an * at / (W2 * W));
    for (int a = 0; a < 4; ++a) {
      const int ia = cell_to_unknown[s.c[a]];
      if (ia < 0) continue;
      for (int b = 0; b < 4; ++b) {
        const int ib = cell_to_unknown[s.c[b]];
        if (ib < 0) continue;
        // zeros kept so the sparsity pattern is state independent
        trips.emplace_back(ia, ib,
                           mnn * s.gx[a] * s.gx[b] + mtt * s.gy[a] * s.gy[b] +
                               mnt * (s.gx[a] * s.gy[b] + s.gy[a] * s.gx[b]));
      }
    }
  }
  Eigen::SparseMatrix<double> hess(n_unknowns, n_unknowns);
  hess.setFromTriplets(trips.begin(), trips.end());
  return hess;
}

double PmcOperator::set_flux(const Eigen::ArrayXd& u,
                             const std::vector<char>& in_set) const {
  Eigen::ArrayXd px, py;
  sample_values(u, px, py);
  long double flux = 0.0L;
  for (Eigen::Index k = 0; k < px.size(); ++k) {
    const AreaSample& s = samples_[k];
    const bool b0 = in_set[s.c[0]], b1 = in_set[s.c[1]], b2 = in_set[s.c[2]],
               b3 = in_set[s.c[3]];
    if ((b0 && b1 && b2 && b3) || (!b0 && !b1 && !b2 && !b3)) continue;
    const double an = px[k] + s.Xn, at = py[k] + s.Xt;
    const double W = std::sqrt(eps_ * eps_ + an * an + at * at);
    const double W0 = std::sqrt(eps_ * eps_ + s.Xn * s.Xn + s.Xt * s.Xt);
    const double fa = weight_ * (an / W - s.Xn / W0);
    const double fb = weight_ * (at / W - s.Xt / W0);
    // transfer into cell c is -d(tilted e_s)/du_c; coefficients sum to zero
    // per sample, so interior samples cancel
    double t = 0.0;
    for (int q = 0; q < 4; ++q)
      if (in_set[s.c[q]]) t -= fa * s.gx[q] + fb * s.gy[q];
    flux += t;
  }
  return static_cast<double>(flux);
}

}  // namespace hpmc
