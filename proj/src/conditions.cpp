#include "hpmc/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace hpmc {

std::string to_string(DomainClass c) {
  switch (c) {
    case DomainClass::non_extremal: return "non_extremal";
    case DomainClass::extremal: return "extremal";
    case DomainClass::infeasible: return "infeasible";
  }
  return "?";
}

std::string to_string(CheegerMethod m) {
  switch (m) {
    case CheegerMethod::exact_disk: return "exact_disk";
    case CheegerMethod::user_supplied: return "user_supplied";
    case CheegerMethod::heuristic_scan: return "heuristic_scan";
  }
  return "?";
}

namespace {

struct ScanSet {
  double integral_H;
  double perimeter;
  double area;
};

// inscribed disks on a coarse lattice of centers with a short ladder of radii
void scan_inscribed_disks(const GridDomain& d, const ScalarField* H,
                          std::vector<ScanSet>& out) {
  const int stride = std::max(2, std::max(d.nx(), d.ny()) / 16);
  const double h = d.spacing();
  for (int j = 0; j < d.ny(); j += stride) {
    for (int i = 0; i < d.nx(); i += stride) {
      if (!d.in_domain(i, j)) continue;
      const Vec2 c = d.cell_center(i, j);
      const double rmax = d.boundary_distance(c) - 0.5 * h;
      if (rmax < 3.0 * h) continue;
      for (int q = 1; q <= 4; ++q) {
        const double r = rmax * q / 4.0;
        if (r < 3.0 * h) continue;
        double ih = 0.0;
        if (H) {
          const int span = static_cast<int>(std::ceil(r / h)) + 1;
          for (int jj = std::max(0, j - span);
               jj < std::min(d.ny(), j + span + 1); ++jj)
            for (int ii = std::max(0, i - span);
                 ii < std::min(d.nx(), i + span + 1); ++ii) {
              if (!d.in_domain(ii, jj)) continue;
              if ((d.cell_center(ii, jj) - c).norm() < r)
                ih += H->values[d.index(ii, jj)];
            }
          ih *= h * h;
        }
        out.push_back({ih, 2.0 * M_PI * r, M_PI * r * r});
      }
    }
  }
}

// level sets {H > theta} and {H < theta} at value quantiles; the perimeter
// combines a marching-squares estimate of the interior interface with the
// boundary portion prorated by sample count (declared heuristic)
void scan_level_sets(const GridDomain& d, const ScalarField& H,
                     std::vector<ScanSet>& out) {
  std::vector<double> vals;
  vals.reserve(d.domain_cells().size());
  for (int idx : d.domain_cells()) vals.push_back(H.values[idx]);
  std::sort(vals.begin(), vals.end());
  if (vals.front() == vals.back()) return;  // constant source, no level sets
  const double h = d.spacing();
  for (double q : {0.25, 0.5, 0.75}) {
    const double theta = vals[static_cast<size_t>(q * (vals.size() - 1))];
    for (int side = 0; side < 2; ++side) {
      auto in_set = [&](int idx) {
        return side == 0 ? H.values[idx] > theta : H.values[idx] < theta;
      };
      double ih = 0.0, cells = 0.0;
      for (int idx : d.domain_cells())
        if (in_set(idx)) {
          ih += H.values[idx];
          cells += 1.0;
        }
      if (cells == 0.0 || cells == static_cast<double>(d.domain_cells().size()))
        continue;
      // interior interface length: marching squares on phi = +-(H - theta)
      double per = 0.0;
      for (int j = 0; j < d.ny() - 1; ++j)
        for (int i = 0; i < d.nx() - 1; ++i) {
          const int c00 = d.index(i, j), c10 = d.index(i + 1, j),
                    c01 = d.index(i, j + 1), c11 = d.index(i + 1, j + 1);
          if (!d.in_domain(i, j) || !d.in_domain(i + 1, j) ||
              !d.in_domain(i, j + 1) || !d.in_domain(i + 1, j + 1))
            continue;
          auto phi = [&](int idx) {
            return side == 0 ? H.values[idx] - theta : theta - H.values[idx];
          };
          const double p00 = phi(c00), p10 = phi(c10), p01 = phi(c01),
                       p11 = phi(c11);
          auto cut = [](double a, double b) { return a / (a - b); };
          std::vector<Vec2> pts;
          if ((p00 > 0) != (p10 > 0)) pts.push_back({cut(p00, p10), 0.0});
          if ((p01 > 0) != (p11 > 0)) pts.push_back({cut(p01, p11), 1.0});
          if ((p00 > 0) != (p01 > 0)) pts.push_back({0.0, cut(p00, p01)});
          if ((p10 > 0) != (p11 > 0)) pts.push_back({1.0, cut(p10, p11)});
          if (pts.size() == 2) per += (pts[1] - pts[0]).norm() * h;
        }
      // boundary portion
      const auto& samples = d.boundary().samples;
      int on = 0;
      for (const auto& s : samples) {
        int ci = static_cast<int>(
            std::lround((s.point.x() - d.origin().x()) / h - 0.5));
        int cj = static_cast<int>(
            std::lround((s.point.y() - d.origin().y()) / h - 0.5));
        ci = std::clamp(ci, 0, d.nx() - 1);
        cj = std::clamp(cj, 0, d.ny() - 1);
        if (d.in_domain(ci, cj) && in_set(d.index(ci, cj))) ++on;
      }
      per += d.boundary().perimeter * on / static_cast<double>(samples.size());
      if (per > 0.0)
        out.push_back({ih * h * h, per, cells * h * h});
    }
  }
}

int nearest_domain_cell(const GridDomain& d, const Vec2& p) {
  const double h = d.spacing();
  const int i0 = static_cast<int>(std::lround((p.x() - d.origin().x()) / h - 0.5));
  const int j0 = static_cast<int>(std::lround((p.y() - d.origin().y()) / h - 0.5));
  int best = -1;
  double bestd = std::numeric_limits<double>::max();
  for (int dj = -2; dj <= 2; ++dj)
    for (int di = -2; di <= 2; ++di) {
      const int i = i0 + di, j = j0 + dj;
      if (i < 0 || i >= d.nx() || j < 0 || j >= d.ny() || !d.in_domain(i, j))
        continue;
      const double dist = (d.cell_center(i, j) - p).squaredNorm();
      if (dist < bestd) {
        bestd = dist;
        best = d.index(i, j);
      }
    }
  return best;
}

}  // namespace

ConditionReport classify_domain(const GridDomain& domain, const ScalarField& H,
                                double tol) {
  ConditionReport r;
  r.extremal_tol =
      tol > 0.0
          ? tol
          : 2.0 / std::sqrt(static_cast<double>(domain.domain_cells().size()));
  r.integral_H = integrate(H);
  r.perimeter = domain.boundary().perimeter;
  r.area = domain.boundary().area;

  const double a = std::abs(r.integral_H), p = r.perimeter;
  if (a > p * (1.0 + r.extremal_tol))
    r.classification = DomainClass::infeasible;
  else if (std::abs(a - p) <= r.extremal_tol * p)
    r.classification = DomainClass::extremal;
  else
    r.classification = DomainClass::non_extremal;

  r.serrin_min_margin = serrin_check(domain, H, true).min_margin;

  std::vector<ScanSet> family;
  family.push_back({r.integral_H, r.perimeter, r.area});
  scan_inscribed_disks(domain, &H, family);
  scan_level_sets(domain, H, family);
  double dh = 1.0;
  for (const auto& s : family)
    dh = std::min(dh, 1.0 - std::abs(s.integral_H) / s.perimeter);
  r.delta_hat = std::clamp(dh, 0.0, 1.0);
  r.scan_family_size = static_cast<int>(family.size());

  const CheegerBound cb = cheeger_bound(domain);
  r.cheeger_lower_bound = cb.value;
  r.cheeger_method = cb.method;
  return r;
}

SerrinResult serrin_check(const GridDomain& domain, const ScalarField& H,
                          bool strict) {
  SerrinResult res;
  res.min_margin = std::numeric_limits<double>::max();
  for (const auto& s : domain.boundary().samples) {
    const int idx = nearest_domain_cell(domain, s.point);
    const double hval = idx >= 0 ? H.values[idx] : 0.0;
    res.min_margin = std::min(res.min_margin, s.curvature - std::abs(hval));
  }
  res.pass = strict ? res.min_margin > 0.0 : res.min_margin >= 0.0;
  return res;
}

CheegerBound cheeger_bound(const GridDomain& domain,
                           std::optional<double> user_value) {
  if (user_value) return {*user_value, CheegerMethod::user_supplied};
  if (std::holds_alternative<DiskSpec>(domain.spec())) {
    const auto& disk = std::get<DiskSpec>(domain.spec());
    return {2.0 / disk.radius, CheegerMethod::exact_disk};
  }
  double best = domain.boundary().perimeter / domain.boundary().area;
  std::vector<ScanSet> family;
  scan_inscribed_disks(domain, nullptr, family);
  for (const auto& s : family) best = std::min(best, s.perimeter / s.area);
  return {best, CheegerMethod::heuristic_scan};
}

}  // namespace hpmc
