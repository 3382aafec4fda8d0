#pragma once

// Command front end shared by the CLI binary and the tests: config
// ingestion, dispatch to the module operations, artifact emission
// (report.json, u.csv, residual.csv, steps.csv) and exit codes:
//   0 success, 2 no convergence, 3 infeasible domain, 4 config error.

#include <string>

#include "hpmc/grid.hpp"

namespace hpmc {

struct RunConfig {
  std::string command;  // solve | minimize | check | limit | geomverify
  std::string domain = "disk:1";
  std::string H = "0";
  std::string phi = "0";
  double eps = 1.0;
  std::string mode = "heisenberg";
  double h = 1.0 / 64.0;
  std::string out = ".";
  double tol = -1.0;    // <= 0 keeps the solver default
  int max_iter = -1;    // < 0 keeps the solver default
  std::string schedule; // comma-separated eps list for the limit command
  double sigma = 1.0;
  std::string pd_engine;  // "" default | "ball" | "smooth"
};

/// Parses "disk:r", "disk:cx,cy,r", "rect:x0,y0,x1,y1",
/// "polygon:x1,y1;x2,y2;...".
DomainSpec parse_domain_spec(const std::string& text);

/// Executes the configured command, writing artifacts under cfg.out.
int run(const RunConfig& cfg);

}  // namespace hpmc
