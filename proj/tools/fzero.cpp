// Command-line driver for the fidelity-zero experiments.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "fzero/experiments.hpp"

namespace {

using fzero::RunConfig;

void add_common(CLI::App* app, RunConfig& cfg) {
  app->add_option("--J", cfg.J, "Ising coupling")->capture_default_str();
  app->add_option("--tol", cfg.tol, "Bisection tolerance")->capture_default_str();
  app->add_option("--threads", cfg.threads, "Worker threads (0: FZERO_THREADS or hardware count)");
  app->add_option("-o,--out", cfg.out_dir, "Output directory")->capture_default_str();
  app->add_option("--seed", cfg.seed, "Seed for generated test points")->capture_default_str();
  app->add_option("--dense-cutoff", cfg.solver.dense_cutoff, "Largest block solved densely")->capture_default_str();
  app->add_option("--subspace", cfg.solver.subspace_dim, "Krylov subspace size")->capture_default_str();
  app->add_option("--max-restarts", cfg.solver.max_restarts, "Krylov restart budget")->capture_default_str();
  app->add_option("--solver-tol", cfg.solver.tol, "Relative eigen-residual target")->capture_default_str();
  app->add_flag("--force-iterative", cfg.solver.force_iterative, "Use the Krylov path for every block");
}

void add_box(CLI::App* app, RunConfig& cfg) {
  app->add_option("--re-lo", cfg.box.re_lo, "Scan box lower Re(h)")->capture_default_str();
  app->add_option("--re-hi", cfg.box.re_hi, "Scan box upper Re(h)")->capture_default_str();
  app->add_option("--im-lo", cfg.box.im_lo, "Scan box lower Im(h)")->capture_default_str();
  app->add_option("--im-hi", cfg.box.im_hi, "Scan box upper Im(h)")->capture_default_str();
  app->add_option("--re-steps", cfg.box.re_steps, "Re(h) grid intervals per line")->capture_default_str();
  app->add_option("--im-steps", cfg.box.im_steps, "Im(h) grid intervals")->capture_default_str();
  app->add_flag("--rightmost-only", cfg.rightmost_only, "Only march each line to its rightmost zero");
  app->add_flag("--doubled-check", cfg.doubled_check, "Rescan with a doubled Re grid and keep the finer zeros");
  app->add_option("--refine-rounds", cfg.refine_rounds, "Parabolic h_L refinement rounds")->capture_default_str();
}

std::string join(const std::filesystem::path& a, const std::string& b) { return (a / b).string(); }

void reproduce(const std::string& fig, const RunConfig& base, int max_L) {
  const std::filesystem::path root = base.out_dir;
  const fzero::Stopwatch clock;
  auto stage = [&](const std::string& name) {
    RunConfig c = base;
    c.out_dir = join(root, name);
    std::cerr << "[" << fig << "] " << name << std::endl;
    return c;
  };
  if (fig == "fig2") {
    RunConfig c = stage("scan_L10");
    c.command = "scan1d";
    c.sizes = {10};
    c.im_h = 0.5;
    c.re_lo = 0.0;
    c.re_hi = 1.5;
    c.re_steps = 600;
    fzero::run_scan1d(c);
  } else if (fig == "fig3") {
    RunConfig a = stage("zeros_L10");
    a.command = "zeros1d";
    a.sizes = {10};
    a.box = fzero::ScanBox::chain_default();
    fzero::run_zeros(a);
    RunConfig b = stage("hL");
    b.command = "zeros1d";
    b.box = fzero::ScanBox::chain_default();
    for (int L = 10; L <= 32; L += 2) b.sizes.push_back(L);
    fzero::run_zeros(b);
    RunConfig s = stage("fit");
    s.command = "scaling";
    s.inputs = {join(b.out_dir, "hL.json")};
    s.fit_mode = "joint";
    fzero::run_scaling(s);
  } else if (fig == "fig4") {
    RunConfig c = stage("circle");
    c.command = "circle1d";
    c.sizes = {10, 32};
    c.g_values = {0.5, 1.5};
    c.h_ref = 1.0;
    fzero::run_circle(c);
  } else if (fig == "fig5") {
    RunConfig a = stage("zeros_3x3");
    a.command = "zeros2d";
    a.dimensionality = 2;
    a.sizes = {3};
    a.box = fzero::ScanBox::square_default();
    a.tol = 1e-8;
    fzero::run_zeros(a);
    RunConfig b = stage("hL");
    b.command = "zeros2d";
    b.dimensionality = 2;
    b.box = fzero::ScanBox::square_hL();
    b.rightmost_only = true;
    b.tol = 1e-8;
    for (int L = 2; L <= max_L; ++L) b.sizes.push_back(L);
    fzero::run_zeros(b);
    RunConfig s = stage("fit");
    s.command = "scaling";
    s.inputs = {join(b.out_dir, "hL.json")};
    fzero::run_scaling(s);
    RunConfig c = stage("circle_4x4");
    c.command = "circle2d";
    c.dimensionality = 2;
    c.sizes = {std::min(max_L, 4)};
    c.g_values = {0.5, 3.5};
    c.h_ref = 3.044;
    c.tol = 1e-8;
    fzero::run_circle(c);
  } else {
    throw fzero::ConfigError("unknown figure " + fig + " (expected fig2, fig3, fig4 or fig5)");
  }
  fzero::write_meta(root, base, fzero::ojson{{"total", clock.seconds()}}, {}, fzero::ojson{{"figure", fig}});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fidelity zeros of the transverse-field Ising model under a complex field"};
  app.require_subcommand(1);
  app.set_version_flag("--version", fzero::kToolVersion);

  RunConfig cfg;
  int max_L = 4;
  std::string fig;

  auto* scan = app.add_subcommand("scan1d", "Sector energies and fidelity along Im(h) = const (chain)");
  cfg.sizes = {};
  scan->add_option("-L,--L", cfg.sizes, "Chain lengths")->delimiter(',');
  scan->add_option("--im", cfg.im_h, "Im(h) of the scan line")->capture_default_str();
  scan->add_option("--re-lo", cfg.re_lo, "First Re(h)")->capture_default_str();
  scan->add_option("--re-hi", cfg.re_hi, "Last Re(h)")->capture_default_str();
  scan->add_option("--steps", cfg.re_steps, "Grid intervals")->capture_default_str();
  scan->add_option("--delta", cfg.delta, "Fidelity offset h' = h + delta")->capture_default_str();
  scan->add_option("--backend", cfg.backend, "auto, analytic or exact")->capture_default_str();
  scan->add_flag("--dump-triplets", cfg.dump_triplets, "Write both sector operators at the first grid point");
  scan->add_flag("--dump-vectors", cfg.dump_vectors, "Write both sector ground vectors at the first grid point");
  add_common(scan, cfg);

  auto* z1 = app.add_subcommand("zeros1d", "Fidelity zeros and h_L of chains");
  z1->add_option("-L,--L", cfg.sizes, "Chain lengths")->delimiter(',');
  z1->add_option("--backend", cfg.backend, "auto, analytic or exact")->capture_default_str();
  add_box(z1, cfg);
  add_common(z1, cfg);

  auto* z2 = app.add_subcommand("zeros2d", "Fidelity zeros and h_L of L x L square lattices");
  z2->add_option("-L,--L", cfg.sizes, "Linear sizes")->delimiter(',');
  bool hL_box = false;
  z2->add_flag("--hL-box", hL_box, "Start from the taller h_L search box instead of the default window");
  add_box(z2, cfg);
  add_common(z2, cfg);
  z2->footer("Square-lattice defaults replace the chain values shown above: Re(h) in [0, 3.5], Im(h) in\n"
             "[0.05, 1.0], 140 x 19 intervals, --tol 1e-8. With --hL-box: Re(h) in [0, 4], Im(h) in\n"
             "[0.2, 3.0], 40 x 14 intervals.");

  auto* c1 = app.add_subcommand("circle1d", "Zeros on h = g exp(i theta) for chains");
  c1->add_option("-L,--L", cfg.sizes, "Chain lengths")->delimiter(',');
  c1->add_option("-g,--g", cfg.g_values, "Circle radii")->delimiter(',');
  c1->add_option("--steps", cfg.theta_steps, "Theta grid size (0: automatic)");
  c1->add_option("--h-ref", cfg.h_ref, "Reference critical field for the edge angle")->capture_default_str();
  c1->add_option("--backend", cfg.backend, "auto, analytic or exact")->capture_default_str();
  add_common(c1, cfg);

  auto* c2 = app.add_subcommand("circle2d", "Zeros on h = g exp(i theta) for square lattices");
  c2->add_option("-L,--L", cfg.sizes, "Linear sizes")->delimiter(',');
  c2->add_option("-g,--g", cfg.g_values, "Circle radii")->delimiter(',');
  c2->add_option("--steps", cfg.theta_steps, "Theta grid size (0: automatic)");
  c2->add_option("--h-ref", cfg.h_ref, "Reference critical field for the edge angle");
  add_common(c2, cfg);

  auto* sc = app.add_subcommand("scaling", "Fit h_L = h_c + a L^(-1/nu) to hL.json inputs");
  sc->add_option("-i,--input", cfg.inputs, "hL.json files")->required();
  sc->add_option("--fit-mode", cfg.fit_mode, "independent or joint (shared nu)")->capture_default_str();
  sc->add_option("-o,--out", cfg.out_dir, "Output directory")->capture_default_str();

  auto* rp = app.add_subcommand("reproduce", "Chain the runs behind one figure");
  rp->add_option("figure", fig, "fig2, fig3, fig4 or fig5")->required();
  rp->add_option("--max-L", max_L, "Largest square lattice for fig5")->capture_default_str();
  add_common(rp, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*scan) {
      cfg.command = "scan1d";
      if (cfg.sizes.empty()) cfg.sizes = {10};
      fzero::run_scan1d(cfg);
    } else if (*z1 || *z2) {
      const bool square = static_cast<bool>(*z2);
      cfg.command = square ? "zeros2d" : "zeros1d";
      cfg.dimensionality = square ? 2 : 1;
      if (cfg.sizes.empty()) cfg.sizes = {square ? 3 : 10};
      if (square) {
        const auto d = hL_box ? fzero::ScanBox::square_hL() : fzero::ScanBox::square_default();
        if (z2->count("--re-hi") == 0) cfg.box.re_hi = d.re_hi;
        if (z2->count("--im-lo") == 0) cfg.box.im_lo = d.im_lo;
        if (z2->count("--im-hi") == 0) cfg.box.im_hi = d.im_hi;
        if (z2->count("--re-steps") == 0) cfg.box.re_steps = d.re_steps;
        if (z2->count("--im-steps") == 0) cfg.box.im_steps = d.im_steps;
        if (z2->count("--tol") == 0) cfg.tol = 1e-8;
      }
      fzero::run_zeros(cfg);
    } else if (*c1 || *c2) {
      const bool square = static_cast<bool>(*c2);
      cfg.command = square ? "circle2d" : "circle1d";
      cfg.dimensionality = square ? 2 : 1;
      if (cfg.sizes.empty()) cfg.sizes = square ? std::vector<int>{4} : std::vector<int>{10, 32};
      if (cfg.g_values.empty()) cfg.g_values = square ? std::vector<double>{0.5, 3.5} : std::vector<double>{0.5, 1.5};
      if (square && c2->count("--h-ref") == 0) cfg.h_ref = 3.044;
      if (square && c2->count("--tol") == 0) cfg.tol = 1e-8;
      fzero::run_circle(cfg);
    } else if (*sc) {
      cfg.command = "scaling";
      fzero::run_scaling(cfg);
    } else if (*rp) {
      cfg.command = "reproduce";
      reproduce(fig, cfg, max_L);
    }
  } catch (const fzero::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const fzero::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << " (best residual " << e.best_residual() << ")\n";
    return 3;
  } catch (const fzero::FitError& e) {
    std::cerr << "fit failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
