#include "hpmc/run.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "hpmc/conditions.hpp"
#include "hpmc/expr.hpp"
#include "hpmc/graph.hpp"
#include "hpmc/solve.hpp"
#include "hpmc/subriem.hpp"

namespace hpmc {

namespace {

using json = nlohmann::json;

std::vector<double> parse_number_list(const std::string& text, char sep) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (item.empty()) continue;
    size_t used = 0;
    out.push_back(std::stod(item, &used));
  }
  return out;
}

json config_json(const RunConfig& c) {
  return json{{"command", c.command}, {"domain", c.domain},
              {"H", c.H},             {"phi", c.phi},
              {"eps", c.eps},         {"mode", c.mode},
              {"h", c.h},             {"tol", c.tol},
              {"max_iter", c.max_iter}, {"schedule", c.schedule},
              {"sigma", c.sigma},     {"pd_engine", c.pd_engine}};
}

void write_report(const RunConfig& cfg, json payload) {
  payload["schema"] = 1;
  payload["command"] = cfg.command;
  payload["config"] = config_json(cfg);
  std::ofstream os(std::filesystem::path(cfg.out) / "report.json");
  os << payload.dump(2) << "\n";
}

void append_log(const RunConfig& cfg, const std::string& line) {
  std::ofstream os(std::filesystem::path(cfg.out) / "run.log",
                   std::ios::app);
  const auto now = std::chrono::system_clock::now();
  os << std::chrono::duration_cast<std::chrono::milliseconds>(
            now.time_since_epoch())
            .count()
     << " " << line << "\n";
}

ScalarField field_from_spec(const GridDomain& d, const std::string& spec) {
  if (spec.rfind("csv:", 0) == 0) return load_csv(d, spec.substr(4));
  return make_field(d, parse_expression(spec));
}

Mode parse_mode(const std::string& m) {
  if (m == "heisenberg") return Mode::heisenberg;
  if (m == "euclidean") return Mode::euclidean;
  throw ConfigError("mode must be 'heisenberg' or 'euclidean'");
}

json condition_json(const ConditionReport& r, const SerrinResult& strict,
                    const SerrinResult& weak) {
  return json{{"integral_H", r.integral_H},
              {"perimeter", r.perimeter},
              {"area", r.area},
              {"classification", to_string(r.classification)},
              {"extremal_tol", r.extremal_tol},
              {"serrin_min_margin", r.serrin_min_margin},
              {"serrin_strict_pass", strict.pass},
              {"serrin_pass", weak.pass},
              {"cheeger_lower_bound", r.cheeger_lower_bound},
              {"cheeger_method", to_string(r.cheeger_method)},
              {"delta_hat", r.delta_hat},
              {"scan_family_size", r.scan_family_size}};
}

json solve_json(const SolveReport& r) {
  json j{{"iterations", r.iterations},
         {"residual_history", r.residual_history},
         {"final_residual", r.final_residual},
         {"energy", r.energy},
         {"max_gradient", r.max_gradient},
         {"converged", r.converged},
         {"homotopy_path", r.homotopy_path},
         {"worst_energy_increase", r.worst_energy_increase}};
  if (r.duality_gap >= 0.0) j["duality_gap"] = r.duality_gap;
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

SolverConfig solver_config(const RunConfig& cfg) {
  SolverConfig sc;
  if (cfg.tol > 0.0) sc.tol_residual = cfg.tol;
  if (cfg.max_iter > 0) {
    sc.max_newton = cfg.max_iter;
    sc.max_pd = cfg.max_iter;
  }
  if (cfg.pd_engine == "ball") sc.pd_engine = PdEngine::ball;
  else if (cfg.pd_engine == "smooth") sc.pd_engine = PdEngine::smooth;
  else if (!cfg.pd_engine.empty())
    throw ConfigError("pd engine must be 'ball' or 'smooth'");
  return sc;
}

int run_check(const RunConfig& cfg) {
  const GridDomain d = build_domain(parse_domain_spec(cfg.domain), cfg.h);
  const ScalarField H = field_from_spec(d, cfg.H);
  const ConditionReport rep = classify_domain(d, H, cfg.tol);
  const SerrinResult strict = serrin_check(d, H, true);
  const SerrinResult weak = serrin_check(d, H, false);
  write_report(cfg, json{{"conditions", condition_json(rep, strict, weak)}});
  return 0;
}

int run_solve(const RunConfig& cfg, bool penalized) {
  const GridDomain d = build_domain(parse_domain_spec(cfg.domain), cfg.h);
  PmcProblem pb;
  pb.domain = &d;
  pb.H = field_from_spec(d, cfg.H);
  pb.phi = field_from_spec(d, cfg.phi);
  if (cfg.phi.rfind("csv:", 0) != 0) pb.phi_fn = parse_expression(cfg.phi);
  pb.eps = cfg.eps;
  pb.mode = parse_mode(cfg.mode);
  pb.sigma = cfg.sigma;
  const SolverConfig sc = solver_config(cfg);
  auto [u, rep] = penalized ? minimize_penalized(pb, sc)
                            : solve_dirichlet(pb, sc);
  dump_csv(u, (std::filesystem::path(cfg.out) / "u.csv").string());
  if (!penalized) {
    const GraphGeometry geom = make_graph_geometry(u, pb.eps, pb.mode);
    ScalarField res = mean_curvature_operator(geom, pb.sigma);
    for (int idx : d.interior_cells())
      res.values[idx] -= pb.sigma * pb.H.values[idx];
    dump_csv(res, (std::filesystem::path(cfg.out) / "residual.csv").string());
  }
  write_report(cfg, json{{"solve", solve_json(rep)}});
  return rep.converged ? 0 : 2;
}

int run_limit(const RunConfig& cfg) {
  const GridDomain d = build_domain(parse_domain_spec(cfg.domain), cfg.h);
  PmcProblem pb;
  pb.domain = &d;
  pb.H = field_from_spec(d, cfg.H);
  pb.phi = field_from_spec(d, cfg.phi);
  if (cfg.phi.rfind("csv:", 0) != 0) pb.phi_fn = parse_expression(cfg.phi);
  pb.eps = cfg.eps;
  pb.mode = parse_mode(cfg.mode);
  pb.sigma = cfg.sigma;
  EpsSchedule sched;
  sched.solver = solver_config(cfg);
  if (!cfg.schedule.empty()) sched.eps_list = parse_number_list(cfg.schedule, ',');
  const LimitReport rep = eps_continuation(pb, sched);

  {
    std::ofstream os(std::filesystem::path(cfg.out) / "steps.csv");
    os << "eps,energy_eps,energy_sub,du_max,grad_max\n";
    char line[192];
    for (const auto& s : rep.steps) {
      std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g,%.17g\n",
                    s.eps, s.energy_eps, s.energy_sub, s.du_max, s.grad_max);
      os << line;
    }
  }
  if (rep.u.domain)
    dump_csv(rep.u, (std::filesystem::path(cfg.out) / "u.csv").string());

  json steps = json::array();
  for (const auto& s : rep.steps)
    steps.push_back(json{{"eps", s.eps},
                         {"energy_eps", s.energy_eps},
                         {"energy_sub", s.energy_sub},
                         {"du_max", s.du_max},
                         {"grad_max", s.grad_max},
                         {"iterations", s.iterations},
                         {"converged", s.converged}});
  json payload{{"limit",
                json{{"steps", steps},
                     {"converged", rep.converged},
                     {"characteristic_cells", rep.characteristic_cells}}}};
  if (!rep.error.empty()) payload["limit"]["error"] = rep.error;
  write_report(cfg, payload);
  return rep.converged ? 0 : 2;
}

int run_geomverify(const RunConfig& cfg) {
  const GridDomain d = build_domain(parse_domain_spec(cfg.domain), cfg.h);
  const double eps = cfg.eps;
  json checks = json::array();
  auto add = [&](const std::string& name, double value, double threshold,
                 bool pass) {
    checks.push_back(json{{"name", name},
                          {"value", value},
                          {"threshold", threshold},
                          {"pass", pass}});
  };

  const ScalarField zero = constant_field(d, 0.0);
  const GraphGeometry flat = make_graph_geometry(zero, eps, Mode::heisenberg);

  // unit normal
  double dev = 0.0;
  for (int idx : d.domain_cells()) {
    const double n = flat.nu1.values[idx] * flat.nu1.values[idx] +
                     flat.nu2.values[idx] * flat.nu2.values[idx] +
                     flat.nu3.values[idx] * flat.nu3.values[idx];
    dev = std::max(dev, std::abs(n - 1.0));
  }
  add("unit_normal_max_dev", dev, 1e-12, dev <= 1e-12);

  // curvature energy against the closed form of the flat graph
  {
    const ScalarField ce = curvature_energy(flat);
    double err = 0.0;
    for (int idx : d.domain_cells()) {
      if (d.depth_at(idx) < 4) continue;
      const Vec2 p = d.cell_center(idx % d.nx(), idx / d.nx());
      const double wsq = eps * eps + p.squaredNorm();
      err = std::max(err, std::abs(ce.values[idx] -
                                   2.0 * eps * eps / (wsq * wsq)));
    }
    const double thr = 50.0 * cfg.h * cfg.h / std::min(1.0, eps * eps);
    add("curvature_energy_flat_max_err", err, thr, err <= thr);
  }

  // vertical translation equivariance of the curvature energy
  {
    ScalarField bump = make_field(
        d, [](double x, double y) { return std::sin(2.0 * x) * y; });
    ScalarField shifted = bump;
    for (int idx : d.domain_cells()) shifted.values[idx] += 17.25;
    const ScalarField a =
        curvature_energy(make_graph_geometry(bump, eps, Mode::heisenberg));
    const ScalarField b =
        curvature_energy(make_graph_geometry(shifted, eps, Mode::heisenberg));
    double e = 0.0;
    for (int idx : d.domain_cells())
      e = std::max(e, std::abs(a.values[idx] - b.values[idx]));
    add("translation_equivariance_dev", e, 1e-9, e <= 1e-9);
  }

  // summation-by-parts adjointness on seeded random fields
  {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> un(-1.0, 1.0);
    ScalarField f(d);
    FaceField F;
    F.domain = &d;
    F.xface = Eigen::ArrayXd::Zero(d.size());
    F.yface = Eigen::ArrayXd::Zero(d.size());
    for (int idx : d.domain_cells()) {
      f.values[idx] = un(rng);
      F.xface[idx] = un(rng);
      F.yface[idx] = un(rng);
    }
    const FaceField gf = face_gradient(f);
    const ScalarField divF = face_divergence(F);
    long double s = 0.0L;
    for (int idx : d.domain_cells()) s += divF.values[idx] * f.values[idx];
    for (int idx : d.domain_cells())
      s += F.xface[idx] * gf.xface[idx] + F.yface[idx] * gf.yface[idx];
    const double e = std::abs(static_cast<double>(s) * d.spacing() *
                              d.spacing());
    add("sbp_adjointness", e, 1e-10, e <= 1e-10);
  }

  // refinement of the Jacobi residual on the flat exact solution
  {
    auto max_res = [&](double hh) {
      const GridDomain dd = build_domain(parse_domain_spec(cfg.domain), hh);
      const ScalarField flat0 = constant_field(dd, 0.0);
      const GraphGeometry g = make_graph_geometry(flat0, eps, Mode::heisenberg);
      const ScalarField res =
          jacobi_identity_residual(g, constant_field(dd, 0.0));
      return max_abs(res, 5);
    };
    const double r1 = max_res(cfg.h), r2 = max_res(cfg.h / 2.0);
    const double ratio = r2 > 0.0 ? r1 / r2 : 4.0;
    add("jacobi_refinement_ratio", ratio, 1.8, ratio >= 1.8);
  }

  // q-limit gap decreasing in eps at a fixed probe
  {
    Vec2 centroid(0.0, 0.0);
    for (int idx : d.domain_cells())
      centroid += d.cell_center(idx % d.nx(), idx / d.nx());
    centroid /= static_cast<double>(d.domain_cells().size());
    const Vec2 probe = centroid + Vec2(0.6 * d.inradius(), 0.0);
    bool mono = true;
    double prev = std::numeric_limits<double>::infinity();
    for (double e : {0.4, 0.2, 0.1, 0.05}) {
      const GraphGeometry g = make_graph_geometry(zero, e, Mode::heisenberg);
      const double gap = std::abs(q_limit_gap_at(g, probe));
      if (gap >= prev) mono = false;
      prev = gap;
    }
    add("q_gap_strictly_decreasing", mono ? 1.0 : 0.0, 1.0, mono);
  }

  bool all = true;
  for (const auto& c : checks) all = all && c.at("pass").get<bool>();
  write_report(cfg, json{{"geomverify", json{{"checks", checks},
                                             {"all_pass", all}}}});
  return all ? 0 : 2;
}

}  // namespace

DomainSpec parse_domain_spec(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string rest =
      colon == std::string::npos ? "" : text.substr(colon + 1);
  if (kind == "disk") {
    const auto v = parse_number_list(rest, ',');
    if (v.size() == 1) return DiskSpec{{0.0, 0.0}, v[0]};
    if (v.size() == 3) return DiskSpec{{v[0], v[1]}, v[2]};
    throw ConfigError("disk spec needs 'disk:r' or 'disk:cx,cy,r'");
  }
  if (kind == "rect") {
    const auto v = parse_number_list(rest, ',');
    if (v.size() != 4) throw ConfigError("rect spec needs 'rect:x0,y0,x1,y1'");
    return RectSpec{{v[0], v[1]}, {v[2], v[3]}};
  }
  if (kind == "polygon") {
    PolygonSpec poly;
    std::stringstream ss(rest);
    std::string pair;
    while (std::getline(ss, pair, ';')) {
      const auto v = parse_number_list(pair, ',');
      if (v.size() != 2) throw ConfigError("polygon vertex needs 'x,y'");
      poly.vertices.push_back({v[0], v[1]});
    }
    return poly;
  }
  throw ConfigError("domain kind must be disk, rect or polygon");
}

int run(const RunConfig& cfg) {
  std::filesystem::create_directories(cfg.out);
  append_log(cfg, "start " + cfg.command);
  int code = 4;
  try {
    if (cfg.command == "check")
      code = run_check(cfg);
    else if (cfg.command == "solve")
      code = run_solve(cfg, false);
    else if (cfg.command == "minimize")
      code = run_solve(cfg, true);
    else if (cfg.command == "limit")
      code = run_limit(cfg);
    else if (cfg.command == "geomverify")
      code = run_geomverify(cfg);
    else
      throw ConfigError("unknown command '" + cfg.command + "'");
  } catch (const InfeasibleDomainError& e) {
    write_report(cfg, json{{"error", json{{"kind", "infeasible"},
                                          {"message", e.what()}}}});
    code = 3;
  } catch (const std::invalid_argument& e) {
    write_report(cfg, json{{"error", json{{"kind", "config"},
                                          {"message", e.what()}}}});
    code = 4;
  } catch (const ConfigError& e) {
    write_report(cfg, json{{"error", json{{"kind", "config"},
                                          {"message", e.what()}}}});
    code = 4;
  }
  append_log(cfg, "end " + cfg.command + " exit " + std::to_string(code));
  return code;
}

}  // namespace hpmc
