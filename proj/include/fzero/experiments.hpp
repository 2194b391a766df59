#ifndef FZERO_EXPERIMENTS_HPP
#define FZERO_EXPERIMENTS_HPP

// Experiment runners behind the command-line tool. Each runner writes its
// CSV/JSON outputs and a meta.json with the resolved configuration into
// one output directory.

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fzero/analytic1d.hpp"
#include "fzero/eigensolver.hpp"
#include "fzero/error.hpp"
#include "fzero/lattice.hpp"
#include "fzero/parallel.hpp"
#include "fzero/scaling.hpp"
#include "fzero/zerofinder.hpp"

namespace fzero {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

using ojson = nlohmann::ordered_json;

struct RunConfig {
  std::string command;
  int dimensionality = 1;
  std::vector<int> sizes;
  double J = 1.0;
  std::string backend = "auto";  // auto | analytic | exact

  // scan1d
  double im_h = 0.5;
  double re_lo = 0.0;
  double re_hi = 1.5;
  int re_steps = 600;
  double delta = 1e-3;

  // zeros
  ScanBox box = ScanBox::chain_default();
  bool rightmost_only = false;
  bool doubled_check = false;
  int refine_rounds = 3;

  // circle
  std::vector<double> g_values;
  int theta_steps = 0;  // 0: 32 N (analytic) or 8 N (exact)
  double h_ref = 1.0;

  // scaling
  std::vector<std::string> inputs;
  std::string fit_mode = "independent";  // independent | joint

  double tol = 1e-10;
  SolverConfig solver;
  int threads = 0;
  std::string out_dir = "out";
  std::uint64_t seed = 12345;
  bool dump_triplets = false;
  bool dump_vectors = false;

  void validate() const {
    if (dimensionality != 1 && dimensionality != 2) throw ConfigError("dimensionality must be 1 or 2");
    if (!(J > 0.0)) throw ConfigError("coupling J must be positive");
    if (backend != "auto" && backend != "analytic" && backend != "exact")
      throw ConfigError("backend must be auto, analytic or exact");
    if (backend == "analytic" && dimensionality != 1) throw ConfigError("the analytic backend is 1D only");
    if (!(tol > 0.0)) throw ConfigError("tolerance must be positive");
    if (!(delta > 0.0)) throw ConfigError("fidelity offset delta must be positive");
    if (fit_mode != "independent" && fit_mode != "joint") throw ConfigError("fit mode must be independent or joint");
    for (int L : sizes) {
      // Only exact diagonalisation is bound by the site cap.
      const bool analytic = backend == "analytic" || (backend == "auto" && dimensionality == 1 && L >= 4 && L % 2 == 0);
      if (analytic) analytic::require_even_chain(L);
      else LatticeSpec{dimensionality, L, kDefaultMaxSites}.validate();
    }
    solver.validate();
  }
};

inline ojson to_json(const ScanBox& b) {
  return ojson{{"re_lo", b.re_lo}, {"re_hi", b.re_hi}, {"im_lo", b.im_lo},
               {"im_hi", b.im_hi}, {"re_steps", b.re_steps}, {"im_steps", b.im_steps}};
}

inline ojson to_json(const SolverConfig& s) {
  return ojson{{"dense_cutoff", s.dense_cutoff}, {"subspace_dim", s.subspace_dim}, {"max_restarts", s.max_restarts},
               {"tol", s.tol}, {"degeneracy_tol", s.degeneracy_tol}, {"candidates", s.candidates},
               {"force_iterative", s.force_iterative}};
}

inline ojson to_json(const RunConfig& c) {
  return ojson{{"command", c.command},
               {"dimensionality", c.dimensionality},
               {"sizes", c.sizes},
               {"J", c.J},
               {"backend", c.backend},
               {"im_h", c.im_h},
               {"re_lo", c.re_lo},
               {"re_hi", c.re_hi},
               {"re_steps", c.re_steps},
               {"delta", c.delta},
               {"box", to_json(c.box)},
               {"rightmost_only", c.rightmost_only},
               {"doubled_check", c.doubled_check},
               {"refine_rounds", c.refine_rounds},
               {"g_values", c.g_values},
               {"theta_steps", c.theta_steps},
               {"h_ref", c.h_ref},
               {"inputs", c.inputs},
               {"fit_mode", c.fit_mode},
               {"tol", c.tol},
               {"solver", to_json(c.solver)},
               {"threads", resolve_threads(c.threads)},
               {"out_dir", c.out_dir},
               {"seed", c.seed},
               {"dump_triplets", c.dump_triplets},
               {"dump_vectors", c.dump_vectors}};
}

inline ojson to_json(const FitResult& f) {
  return ojson{{"component", component_name(f.component)}, {"h_c", f.h_c}, {"a", f.a}, {"nu", f.nu},
               {"rms_residual", f.rms_residual}};
}

/// 17 significant digits.
inline std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

namespace detail {

inline std::filesystem::path prepare_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw ConfigError("cannot create output directory " + dir);
  return dir;
}

inline std::ofstream open_out(const std::filesystem::path& p, bool binary = false) {
  std::ofstream os(p, binary ? std::ios::binary : std::ios::out);
  if (!os) throw ConfigError("cannot write " + p.string());
  return os;
}

inline void write_json(const std::filesystem::path& p, const ojson& j) {
  auto os = open_out(p);
  os << std::setw(2) << j << "\n";
}

}  // namespace detail

inline void write_meta(const std::filesystem::path& dir, const RunConfig& cfg, const ojson& timings,
                       const std::vector<std::string>& files, const ojson& extra = ojson::object()) {
  ojson meta{{"schema_version", kSchemaVersion},
             {"tool", "fzero"},
             {"tool_version", kToolVersion},
             {"config", to_json(cfg)},
             {"timings_s", timings},
             {"files", files}};
  for (auto it = extra.begin(); it != extra.end(); ++it) meta[it.key()] = it.value();
  detail::write_json(dir / "meta.json", meta);
}

inline bool use_analytic(const RunConfig& cfg, int L) {
  if (cfg.backend == "analytic") return true;
  if (cfg.backend == "exact" || cfg.dimensionality != 1) return false;
  return L >= 4 && L % 2 == 0;
}

inline std::unique_ptr<GapEvaluator> make_evaluator(const RunConfig& cfg, int L) {
  if (use_analytic(cfg, L)) return std::make_unique<AnalyticGapEvaluator>(L, cfg.J);
  return std::make_unique<ExactGapEvaluator>(LatticeSpec{cfg.dimensionality, L, kDefaultMaxSites}, cfg.J,
                                             cfg.solver);
}

// ---------------------------------------------------------------- scan1d

struct ScanRow {
  int L;
  cplx h;
  Parity sector = Parity::Odd;
  cplx e_even, e_odd;
  double fidelity = 0.0;
  std::string status = "ok";
};

namespace detail {

struct ExactGround {
  Parity sector;
  SectorGround blocks;
};

inline ExactGround exact_ground(const LatticeSpec& lat, double J, cplx h, const SolverConfig& cfg) {
  ExactGround g{Parity::Odd, ground_by_sector(lat, ModelParams{J, h}, cfg, true)};
  const GapSample s{g.blocks.even.value, g.blocks.odd.value, false};
  g.sector = s.ground();
  return g;
}

}  // namespace detail

/// Sector energies and |<psi0(h)|psi0(h + delta)>| along a horizontal line.
inline std::vector<ScanRow> scan_line_rows(const RunConfig& cfg, int L) {
  const int n = cfg.re_steps;
  if (n < 0) throw ConfigError("re_steps must be non-negative");
  const std::size_t rows = (cfg.re_hi == cfg.re_lo || n == 0) ? 1 : static_cast<std::size_t>(n) + 1;
  const bool analytic = use_analytic(cfg, L);
  const LatticeSpec lat{cfg.dimensionality, L, kDefaultMaxSites};
  return parallel_map(rows, resolve_threads(cfg.threads), [&](std::size_t i) {
    const double x = rows == 1 ? cfg.re_lo : cfg.re_lo + (cfg.re_hi - cfg.re_lo) * static_cast<double>(i) / n;
    ScanRow r;
    r.L = L;
    r.h = cplx{x, cfg.im_h};
    const cplx h2 = r.h + cfg.delta;
    try {
      Parity s2;
      if (analytic) {
        const auto e = analytic::sector_spectrum(L, r.h, cfg.J, Parity::Even);
        const auto o = analytic::sector_spectrum(L, r.h, cfg.J, Parity::Odd);
        r.e_even = e.ground_energy;
        r.e_odd = o.ground_energy;
        const auto g = analytic::ground_sector(L, r.h, cfg.J);
        r.sector = g.sector;
        s2 = analytic::ground_sector(L, h2, cfg.J).sector;
        r.fidelity = analytic::fidelity_1d(L, r.h, h2, cfg.J);
        if (g.degenerate) r.status = "degenerate";
      } else {
        const auto a = detail::exact_ground(lat, cfg.J, r.h, cfg.solver);
        const auto b = detail::exact_ground(lat, cfg.J, h2, cfg.solver);
        r.e_even = a.blocks.even.value;
        r.e_odd = a.blocks.odd.value;
        r.sector = a.sector;
        s2 = b.sector;
        r.fidelity = a.sector == b.sector
                         ? fidelity_numeric(*a.blocks[a.sector].vector, *b.blocks[b.sector].vector)
                         : 0.0;
        if (a.blocks[a.sector].degenerate) r.status = "degenerate";
      }
      if (r.fidelity < 1e-12 && s2 == r.sector) r.status = "anomaly";
    } catch (const DegenerateModeError&) {
      r.status = "degenerate_mode";
      r.fidelity = NAN;
    } catch (const SolverError&) {
      r.status = "solver_failure";
      r.fidelity = NAN;
    }
    return r;
  });
}

inline void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows) {
  os << "L,re_h,im_h,sector,re_E_even,im_E_even,re_E_odd,im_E_odd,fidelity,status\n";
  for (const auto& r : rows)
    os << r.L << ',' << fmt(r.h.real()) << ',' << fmt(r.h.imag()) << ',' << parity_value(r.sector) << ','
       << fmt(r.e_even.real()) << ',' << fmt(r.e_even.imag()) << ',' << fmt(r.e_odd.real()) << ','
       << fmt(r.e_odd.imag()) << ',' << fmt(r.fidelity) << ',' << r.status << '\n';
}

namespace detail {

/// Sector operators and ground vectors at h, for offline inspection.
inline std::vector<std::string> dump_blocks(const std::filesystem::path& dir, const RunConfig& cfg, int L, cplx h) {
  std::vector<std::string> files;
  const LatticeSpec lat{cfg.dimensionality, L, kDefaultMaxSites};
  for (Parity p : {Parity::Even, Parity::Odd}) {
    const std::string tag = std::string(parity_name(p)) + "_L" + std::to_string(L);
    if (cfg.dump_triplets) {
      const auto block = build_sector_hamiltonian(lat, ModelParams{cfg.J, h}, p);
      const std::string name = "triplets_" + tag + ".txt";
      auto os = open_out(dir / name);
      write_triplets(os, block.op);
      files.push_back(name);
    }
    if (cfg.dump_vectors) {
      const SectorModel model(lat, cfg.J, p);
      const auto r = min_real_eigenpair(model.at(h), cfg.solver, true);
      const std::string name = "vector_" + tag + ".bin";
      auto os = open_out(dir / name, true);
      write_eigenvector(os, *r.vector);
      files.push_back(name);
    }
  }
  return files;
}

}  // namespace detail

inline void run_scan1d(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.dimensionality != 1) throw ConfigError("scan1d is a chain experiment");
  if (cfg.sizes.empty()) throw ConfigError("scan1d needs at least one size");
  if (cfg.re_hi < cfg.re_lo) throw ConfigError("scan range is reversed");
  const Stopwatch clock;
  const auto dir = detail::prepare_dir(cfg.out_dir);
  std::vector<ScanRow> rows;
  std::vector<std::string> files{"scan.csv"};
  for (int L : cfg.sizes) {
    auto r = scan_line_rows(cfg, L);
    rows.insert(rows.end(), r.begin(), r.end());
    if (cfg.dump_triplets || cfg.dump_vectors) {
      auto f = detail::dump_blocks(dir, cfg, L, cplx{cfg.re_lo, cfg.im_h});
      files.insert(files.end(), f.begin(), f.end());
    }
  }
  {
    auto os = detail::open_out(dir / "scan.csv");
    write_scan_csv(os, rows);
  }
  const auto failures = std::count_if(rows.begin(), rows.end(), [](const ScanRow& r) {
    return r.status == "solver_failure";
  });
  write_meta(dir, cfg, ojson{{"total", clock.seconds()}}, files,
             ojson{{"rows", rows.size()}, {"solver_failures", failures}});
}

// ---------------------------------------------------------------- zeros

struct ZerosForSize {
  int L = 0;
  std::vector<ZeroPoint> zeros;
  std::optional<HLResult> hL;
  std::string status = "ok";
  std::string message;
  double seconds = 0.0;
  std::string backend;
};

namespace detail {

inline bool same_zero_sets(const std::vector<ZeroPoint>& a, const std::vector<ZeroPoint>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i].h - b[i].h) > tol) return false;
  return true;
}

}  // namespace detail

inline ZerosForSize zeros_for_size(const RunConfig& cfg, int L) {
  const Stopwatch clock;
  ZerosForSize out;
  out.L = L;
  const auto eval = make_evaluator(cfg, L);
  out.backend = eval->backend();
  const int threads = resolve_threads(cfg.threads);
  std::vector<std::optional<ZeroPoint>> rightmost;
  if (cfg.rightmost_only) {
    rightmost = parallel_map(static_cast<std::size_t>(cfg.box.im_steps) + 1, threads, [&](std::size_t j) {
      return find_rightmost_zero_on_line(*eval, cfg.box.im_at(static_cast<int>(j)), cfg.box.re_lo, cfg.box.re_hi,
                                         cfg.box.re_steps, cfg.tol);
    });
    for (const auto& z : rightmost)
      if (z) out.zeros.push_back(*z);
  } else {
    auto lines = scan_box_lines(*eval, cfg.box, cfg.tol, threads);
    if (cfg.doubled_check) {
      ScanBox fine = cfg.box;
      fine.re_steps *= 2;
      auto again = scan_box_lines(*eval, fine, cfg.tol, threads);
      for (std::size_t j = 0; j < lines.size(); ++j)
        if (!detail::same_zero_sets(lines[j], again[j], std::max(1e-8, 4 * cfg.tol))) {
          out.message = "doubled grid changed the zeros on Im(h)=" + fmt(cfg.box.im_at(static_cast<int>(j)));
          lines[j] = std::move(again[j]);
        }
    }
    for (auto& line : lines) {
      rightmost.push_back(line.empty() ? std::nullopt : std::optional<ZeroPoint>(line.back()));
      out.zeros.insert(out.zeros.end(), line.begin(), line.end());
    }
  }
  try {
    out.hL = refine_hL(*eval, cfg.box, std::move(rightmost), cfg.tol, cfg.refine_rounds);
  } catch (const ConfigError& e) {
    out.status = "failed";
    out.message = e.what();
  }
  out.seconds = clock.seconds();
  return out;
}

inline void write_zeros_csv(std::ostream& os, const std::vector<ZerosForSize>& all) {
  os << "L,re_h,im_h,bracket_width,source,degenerate_flag\n";
  for (const auto& s : all)
    for (const auto& z : s.zeros)
      os << s.L << ',' << fmt(z.h.real()) << ',' << fmt(z.h.imag()) << ',' << fmt(z.bracket_width) << ','
         << source_name(z.source) << ',' << (z.degenerate ? 1 : 0) << '\n';
}

inline ojson to_json(const ZeroPoint& z) {
  return ojson{{"re_h", z.h.real()}, {"im_h", z.h.imag()}, {"bracket_width", z.bracket_width},
               {"degenerate", z.degenerate}};
}

inline ojson hL_json(const RunConfig& cfg, const std::vector<ZerosForSize>& all) {
  ojson results = ojson::array();
  for (const auto& s : all) {
    ojson r{{"L", s.L}, {"dimensionality", cfg.dimensionality}, {"backend", s.backend}, {"status", s.status}};
    if (s.hL) {
      r["hL"] = to_json(s.hL->hL);
      r["grid_hL"] = to_json(s.hL->grid_hL);
      r["refined"] = s.hL->refined;
      r["at_box_edge"] = s.hL->at_box_edge;
    }
    if (!s.message.empty()) r["message"] = s.message;
    r["zero_count"] = s.zeros.size();
    r["box"] = to_json(cfg.box);
    results.push_back(r);
  }
  return ojson{{"schema_version", kSchemaVersion}, {"results", results}};
}

inline std::vector<ZerosForSize> run_zeros(const RunConfig& cfg) {
  cfg.validate();
  cfg.box.validate();
  if (cfg.sizes.empty()) throw ConfigError("zeros needs at least one size");
  const Stopwatch clock;
  const auto dir = detail::prepare_dir(cfg.out_dir);
  std::vector<ZerosForSize> all;
  ojson timings = ojson::object();
  for (int L : cfg.sizes) {
    all.push_back(zeros_for_size(cfg, L));
    timings["L" + std::to_string(L)] = all.back().seconds;
  }
  {
    auto os = detail::open_out(dir / "zeros.csv");
    write_zeros_csv(os, all);
  }
  detail::write_json(dir / "hL.json", hL_json(cfg, all));
  timings["total"] = clock.seconds();
  write_meta(dir, cfg, timings, {"zeros.csv", "hL.json"});
  return all;
}

// ---------------------------------------------------------------- circle

struct CircleRun {
  int L;
  EdgeReport report;
  int steps;
};

inline int circle_steps(const RunConfig& cfg, const GapEvaluator& eval) {
  if (cfg.theta_steps > 0) return cfg.theta_steps;
  const int n = eval.lattice().sites();
  return eval.backend() == "analytic" ? 32 * n : 8 * n;
}

inline std::vector<CircleRun> run_circle(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.sizes.empty() || cfg.g_values.empty()) throw ConfigError("circle needs sizes and g values");
  for (double g : cfg.g_values)
    if (!(g > 0.0)) throw ConfigError("circle radius g must be positive");
  const Stopwatch clock;
  const auto dir = detail::prepare_dir(cfg.out_dir);
  std::vector<std::pair<int, double>> jobs;
  for (int L : cfg.sizes)
    for (double g : cfg.g_values) jobs.emplace_back(L, g);
  auto runs = parallel_map(jobs.size(), resolve_threads(cfg.threads), [&](std::size_t i) {
    const auto eval = make_evaluator(cfg, jobs[i].first);
    const int steps = circle_steps(cfg, *eval);
    return CircleRun{jobs[i].first, fidelity_edge(*eval, jobs[i].second, cfg.h_ref, steps, cfg.tol), steps};
  });
  {
    auto os = detail::open_out(dir / "circle.csv");
    os << "L,g,theta,re_h,im_h,bracket_width\n";
    for (const auto& r : runs)
      for (const auto& z : r.report.zeros)
        os << r.L << ',' << fmt(r.report.g) << ',' << fmt(*z.theta) << ',' << fmt(z.h.real()) << ','
           << fmt(z.h.imag()) << ',' << fmt(z.bracket_width) << '\n';
  }
  ojson summary = ojson::array();
  for (const auto& r : runs) {
    ojson s{{"L", r.L}, {"g", r.report.g}, {"h_ref", r.report.h_ref}, {"steps", r.steps},
            {"count", r.report.zeros.size()}, {"gap_present", r.report.gap_present}};
    s["theta_edge_numeric"] = r.report.theta_edge_numeric ? ojson(*r.report.theta_edge_numeric) : ojson(nullptr);
    s["theta_edge_analytic"] =
        r.report.theta_edge_analytic ? ojson(*r.report.theta_edge_analytic) : ojson("undefined");
    summary.push_back(s);
  }
  detail::write_json(dir / "circle_summary.json", ojson{{"schema_version", kSchemaVersion}, {"runs", summary}});
  write_meta(dir, cfg, ojson{{"total", clock.seconds()}}, {"circle.csv", "circle_summary.json"});
  return runs;
}

// ---------------------------------------------------------------- scaling

/// Successful h_L entries of one or more hL.json documents, sorted by L.
inline std::vector<ScalingSample> samples_from_hL(const std::vector<ojson>& docs) {
  std::map<int, cplx> by_size;
  for (const auto& doc : docs) {
    if (!doc.contains("results")) throw ConfigError("hL document without a results array");
    for (const auto& r : doc.at("results")) {
      if (r.value("status", "") != "ok" || !r.contains("hL")) continue;
      by_size[r.at("L").get<int>()] = cplx{r.at("hL").at("re_h").get<double>(), r.at("hL").at("im_h").get<double>()};
    }
  }
  std::vector<ScalingSample> out;
  for (const auto& [L, h] : by_size) out.push_back({static_cast<double>(L), h});
  return out;
}

inline ojson read_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read " + path);
  try {
    return ojson::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed JSON in " + path + ": " + e.what());
  }
}

struct ScalingReport {
  std::vector<ScalingSample> samples;
  std::optional<FitResult> re, im;
  std::optional<JointFit> joint;
  std::vector<std::string> errors;
};

inline ScalingReport fit_samples(const std::vector<ScalingSample>& samples) {
  ScalingReport rep;
  rep.samples = samples;
  auto attempt = [&](auto&& fn, const char* what) {
    try {
      fn();
    } catch (const FitError& e) {
      rep.errors.push_back(std::string(what) + ": " + e.what());
    }
  };
  attempt([&] { rep.re = fit_power_law(samples, Component::Re); }, "Re");
  attempt([&] { rep.im = fit_power_law(samples, Component::Im); }, "Im");
  attempt([&] { rep.joint = fit_power_law_joint(samples); }, "joint");
  return rep;
}

inline ojson to_json(const ScalingReport& rep, const std::string& mode) {
  ojson samples = ojson::array();
  for (const auto& s : rep.samples) samples.push_back({{"L", s.L}, {"re_h", s.hL.real()}, {"im_h", s.hL.imag()}});
  auto opt = [](const std::optional<FitResult>& f) { return f ? to_json(*f) : ojson(nullptr); };
  ojson j{{"schema_version", kSchemaVersion}, {"model", "x_L = h_c + a * L^(-1/nu)"}, {"mode", mode},
          {"samples", samples}};
  const bool joint = mode == "joint";
  j["re"] = joint ? (rep.joint ? to_json(rep.joint->re) : ojson(nullptr)) : opt(rep.re);
  j["im"] = joint ? (rep.joint ? to_json(rep.joint->im) : ojson(nullptr)) : opt(rep.im);
  j["independent"] = {{"re", opt(rep.re)}, {"im", opt(rep.im)}};
  j["joint"] = rep.joint ? ojson{{"re", to_json(rep.joint->re)}, {"im", to_json(rep.joint->im)}} : ojson(nullptr);
  j["errors"] = rep.errors;
  return j;
}

inline ScalingReport run_scaling(const RunConfig& cfg) {
  if (cfg.inputs.empty()) throw ConfigError("scaling needs at least one hL.json input");
  if (cfg.fit_mode != "independent" && cfg.fit_mode != "joint")
    throw ConfigError("fit mode must be independent or joint");
  const Stopwatch clock;
  const auto dir = detail::prepare_dir(cfg.out_dir);
  std::vector<ojson> docs;
  for (const auto& p : cfg.inputs) docs.push_back(read_json(p));
  auto rep = fit_samples(samples_from_hL(docs));
  detail::write_json(dir / "fit.json", to_json(rep, cfg.fit_mode));
  write_meta(dir, cfg, ojson{{"total", clock.seconds()}}, {"fit.json"});
  const bool primary_ok = cfg.fit_mode == "joint" ? rep.joint.has_value() : (rep.re && rep.im);
  if (!primary_ok) throw FitError("scaling fit failed: " + (rep.errors.empty() ? std::string("?") : rep.errors[0]));
  return rep;
}

}  // namespace fzero

#endif  // FZERO_EXPERIMENTS_HPP
