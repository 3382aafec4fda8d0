// Command-line front end: solve | minimize | check | limit | geomverify.

#include <CLI11.hpp>

#include <iostream>

#include "hpmc/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"prescribed mean curvature t-graphs in the Riemannian "
               "Heisenberg group"};
  app.require_subcommand(1);

  hpmc::RunConfig cfg;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--domain", cfg.domain,
                    "disk:r | disk:cx,cy,r | rect:x0,y0,x1,y1 | "
                    "polygon:x1,y1;x2,y2;...");
    cmd->add_option("--H", cfg.H, "source: expression in x,y,r or csv:path");
    cmd->add_option("--phi", cfg.phi, "boundary datum: expression or csv:path");
    cmd->add_option("--eps", cfg.eps, "metric parameter (nonzero)");
    cmd->add_option("--mode", cfg.mode, "heisenberg | euclidean");
    cmd->add_option("--h", cfg.h, "grid spacing");
    cmd->add_option("--out", cfg.out, "output directory");
    cmd->add_option("--tol", cfg.tol, "residual / gap tolerance override");
    cmd->add_option("--max-iter", cfg.max_iter, "iteration cap override");
    cmd->add_option("--sigma", cfg.sigma, "continuation parameter in [0,1]");
    cmd->add_option("--pd-engine", cfg.pd_engine,
                    "primal-dual engine: ball | smooth");
  };
  for (const char* name :
       {"solve", "minimize", "check", "limit", "geomverify"}) {
    CLI::App* cmd = app.add_subcommand(name);
    add_common(cmd);
    if (std::string(name) == "limit")
      cmd->add_option("--schedule", cfg.schedule,
                      "comma-separated strictly decreasing eps list");
  }

  CLI11_PARSE(app, argc, argv);
  cfg.command = app.get_subcommands().front()->get_name();
  try {
    return hpmc::run(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
