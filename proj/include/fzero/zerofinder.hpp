#ifndef FZERO_ZEROFINDER_HPP
#define FZERO_ZEROFINDER_HPP

// Fidelity zeros as parity switches of the ground state.
//
// The ground state sits in the block whose lowest energy has the smaller
// real part. Ground states of different parity are orthogonal, so the
// fidelity vanishes exactly where s(h) = Re E_even(h) - Re E_odd(h)
// changes sign. Zeros are found by sampling the block label on a grid and
// bisecting every label change; only eigenvalues are needed.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fzero/analytic1d.hpp"
#include "fzero/eigensolver.hpp"
#include "fzero/error.hpp"
#include "fzero/lattice.hpp"
#include "fzero/parallel.hpp"

namespace fzero {

struct GapSample {
  cplx even;
  cplx odd;
  bool degenerate = false;

  double gap() const { return even.real() - odd.real(); }
  /// Ties (within the analytic tie tolerance) go to the odd block.
  Parity ground() const { return gap() < -analytic::kSectorTieTol ? Parity::Even : Parity::Odd; }
  cplx ground_energy() const { return ground() == Parity::Even ? even : odd; }
};

/// Stateful evaluation context. Contexts may keep warm-start data between
/// calls, so one context must not be shared across threads.
class GapContext {
 public:
  virtual ~GapContext() = default;
  virtual GapSample operator()(cplx h) = 0;
};

class GapEvaluator {
 public:
  virtual ~GapEvaluator() = default;
  virtual std::unique_ptr<GapContext> context() const = 0;
  virtual const LatticeSpec& lattice() const = 0;
  virtual double coupling() const = 0;
  virtual std::string backend() const = 0;
};

/// Free-fermion chain (even L).
class AnalyticGapEvaluator final : public GapEvaluator {
 public:
  explicit AnalyticGapEvaluator(int L, double J = 1.0) : lattice_(LatticeSpec::chain(L)), J_(J) {
    analytic::require_even_chain(L);
  }

  std::unique_ptr<GapContext> context() const override {
    struct Ctx final : GapContext {
      int L;
      double J;
      GapSample operator()(cplx h) override {
        const auto e = analytic::sector_spectrum(L, h, J, Parity::Even);
        const auto o = analytic::sector_spectrum(L, h, J, Parity::Odd);
        GapSample s{e.ground_energy, o.ground_energy, false};
        s.degenerate = std::abs(s.gap()) < analytic::kSectorTieTol;
        return s;
      }
    };
    auto c = std::make_unique<Ctx>();
    c->L = lattice_.L;
    c->J = J_;
    return c;
  }
  const LatticeSpec& lattice() const override { return lattice_; }
  double coupling() const override { return J_; }
  std::string backend() const override { return "analytic"; }

 private:
  LatticeSpec lattice_;
  double J_;
};

/// Exact diagonalisation of both parity blocks, any lattice.
class ExactGapEvaluator final : public GapEvaluator {
 public:
  ExactGapEvaluator(const LatticeSpec& lattice, double J = 1.0, SolverConfig cfg = {})
      : lattice_(lattice),
        J_(J),
        cfg_(cfg),
        even_(std::make_shared<SectorModel>(lattice, J, Parity::Even)),
        odd_(std::make_shared<SectorModel>(lattice, J, Parity::Odd)) {
    cfg_.validate();
  }

  std::unique_ptr<GapContext> context() const override {
    struct Ctx final : GapContext {
      std::shared_ptr<const SectorModel> even, odd;
      SolverConfig cfg;
      std::vector<cplx> warm_even, warm_odd;
      GapSample operator()(cplx h) override {
        const bool iterative = cfg.force_iterative || even->dimension() > cfg.dense_cutoff;
        auto solve = [&](const SectorModel& m, std::vector<cplx>& warm) {
          try {
            auto r = min_real_eigenpair(m.at(h), cfg, iterative, warm);
            if (iterative && r.vector) warm = std::move(*r.vector);
            return r;
          } catch (const SolverError& e) {
            throw SolverError(std::string(parity_name(m.parity())) + " sector at h=(" +
                                  std::to_string(h.real()) + "," + std::to_string(h.imag()) + "): " + e.what(),
                              e.best_residual());
          }
        };
        const auto re = solve(*even, warm_even);
        const auto ro = solve(*odd, warm_odd);
        GapSample s{re.value, ro.value, false};
        s.degenerate = std::abs(s.gap()) < analytic::kSectorTieTol;
        if ((s.ground() == Parity::Even ? re : ro).degenerate) s.degenerate = true;
        return s;
      }
    };
    auto c = std::make_unique<Ctx>();
    c->even = even_;
    c->odd = odd_;
    c->cfg = cfg_;
    return c;
  }
  const LatticeSpec& lattice() const override { return lattice_; }
  double coupling() const override { return J_; }
  std::string backend() const override { return "exact"; }

 private:
  LatticeSpec lattice_;
  double J_;
  SolverConfig cfg_;
  std::shared_ptr<const SectorModel> even_, odd_;
};

/// Wraps a plain function; used for synthetic landscapes.
class FunctionGapEvaluator final : public GapEvaluator {
 public:
  FunctionGapEvaluator(LatticeSpec lattice, std::function<GapSample(cplx)> fn)
      : lattice_(lattice), fn_(std::move(fn)) {}
  std::unique_ptr<GapContext> context() const override {
    struct Ctx final : GapContext {
      std::function<GapSample(cplx)> fn;
      GapSample operator()(cplx h) override { return fn(h); }
    };
    auto c = std::make_unique<Ctx>();
    c->fn = fn_;
    return c;
  }
  const LatticeSpec& lattice() const override { return lattice_; }
  double coupling() const override { return 1.0; }
  std::string backend() const override { return "function"; }

 private:
  LatticeSpec lattice_;
  std::function<GapSample(cplx)> fn_;
};

enum class ZeroSource { Line, Circle };

inline const char* source_name(ZeroSource s) { return s == ZeroSource::Line ? "line" : "circle"; }

struct ZeroPoint {
  cplx h;
  std::optional<double> theta;
  double bracket_width = 0.0;
  ZeroSource source = ZeroSource::Line;
  Parity left = Parity::Odd;
  Parity right = Parity::Even;
  bool degenerate = false;
};

namespace detail {

/// Bisect a label change of f on [lo, hi] (parameter t along a path).
/// `tied_ends`: a bracketing sample was a numerical tie, so the sign
/// change itself is below double precision.
template <class PathSample>
ZeroPoint bisect(PathSample&& sample, double lo, double hi, Parity label_lo, Parity label_hi, double tol,
                 bool tied_ends = false) {
  ZeroPoint z;
  z.left = label_lo;
  z.right = label_hi;
  z.degenerate = tied_ends;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const GapSample s = sample(mid);
    Parity label = s.ground();
    // Inside a numerical tie the raw sign still locates the crossing.
    if (s.degenerate) {
      if (s.gap() == 0.0) break;
      label = s.gap() < 0.0 ? Parity::Even : Parity::Odd;
    }
    if (label == label_lo) lo = mid;
    else hi = mid;
  }
  z.bracket_width = hi - lo;
  z.h = cplx{0.5 * (lo + hi), 0.0};  // parameter value; caller maps to h
  return z;
}

}  // namespace detail

/// Zeros on the horizontal line Im h = im_h, Re h in [re_lo, re_hi],
/// sorted by Re h.
inline std::vector<ZeroPoint> find_zeros_on_line(const GapEvaluator& eval, double im_h, double re_lo, double re_hi,
                                                 int steps, double tol = 1e-10) {
  if (steps < 16) throw ConfigError("line scan needs at least 16 steps");
  if (!(tol > 0.0)) throw ConfigError("refinement tolerance must be positive");
  if (!(re_hi >= re_lo)) throw ConfigError("line scan range is reversed");
  auto ctx = eval.context();
  auto sample = [&](double x) { return (*ctx)(cplx{x, im_h}); };
  std::vector<double> xs(static_cast<std::size_t>(steps) + 1);
  std::vector<Parity> labels(xs.size());
  std::vector<char> tied(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = re_lo + (re_hi - re_lo) * static_cast<double>(i) / steps;
    const GapSample g = sample(xs[i]);
    labels[i] = g.ground();
    tied[i] = g.degenerate;
  }
  // A tie at either end of the range is not a sign change inside it.
  if (tied.front()) labels.front() = labels[1];
  if (tied.back()) labels.back() = labels[labels.size() - 2];
  std::vector<ZeroPoint> out;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (labels[i] == labels[i + 1]) continue;
    ZeroPoint z = detail::bisect(sample, xs[i], xs[i + 1], labels[i], labels[i + 1], tol, tied[i] || tied[i + 1]);
    z.h = cplx{z.h.real(), im_h};
    z.source = ZeroSource::Line;
    out.push_back(z);
  }
  return out;
}

/// Rightmost zero on a line, scanning from re_hi downwards and stopping at
/// the first label change.
inline std::optional<ZeroPoint> find_rightmost_zero_on_line(const GapEvaluator& eval, double im_h, double re_lo,
                                                            double re_hi, int steps, double tol = 1e-10) {
  if (steps < 16) throw ConfigError("line scan needs at least 16 steps");
  auto ctx = eval.context();
  auto sample = [&](double x) { return (*ctx)(cplx{x, im_h}); };
  const double dx = (re_hi - re_lo) / steps;
  double x_hi = re_hi;
  const GapSample top = sample(x_hi);
  Parity l_hi = top.ground();
  bool tied_hi = top.degenerate;
  // A tie at either end of the range is not a sign change inside it.
  if (top.degenerate) {
    x_hi = re_hi - dx;
    const GapSample next = sample(x_hi);
    l_hi = next.ground();
    tied_hi = next.degenerate;
  }
  for (int i = steps - (top.degenerate ? 2 : 1); i >= 0; --i) {
    const double x = re_lo + dx * i;
    const GapSample g = sample(x);
    if (i == 0 && g.degenerate) break;
    const Parity l = g.ground();
    if (l != l_hi) {
      ZeroPoint z = detail::bisect(sample, x, x_hi, l, l_hi, tol, g.degenerate || tied_hi);
      z.h = cplx{z.h.real(), im_h};
      return z;
    }
    x_hi = x;
    l_hi = l;
    tied_hi = g.degenerate;
  }
  return std::nullopt;
}

/// Zeros on the circle h = g e^{i theta}, theta in [0, 2 pi).
inline std::vector<ZeroPoint> find_zeros_on_circle(const GapEvaluator& eval, double g, int steps,
                                                   double tol = 1e-10) {
  if (!(g > 0.0)) throw ConfigError("circle radius g must be positive");
  const int n = eval.lattice().sites();
  if (steps < 8 * n) throw ConfigError("circle scan needs at least 8 steps per site");
  auto ctx = eval.context();
  auto sample = [&](double t) { return (*ctx)(std::polar(g, t)); };
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<Parity> labels(static_cast<std::size_t>(steps));
  std::vector<char> tied(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const GapSample s = sample(two_pi * static_cast<double>(i) / steps);
    labels[i] = s.ground();
    tied[i] = s.degenerate;
  }
  std::vector<ZeroPoint> out;
  for (int i = 0; i < steps; ++i) {
    const Parity a = labels[static_cast<std::size_t>(i)];
    const Parity b = labels[static_cast<std::size_t>((i + 1) % steps)];
    if (a == b) continue;
    ZeroPoint z = detail::bisect(sample, two_pi * i / steps, two_pi * (i + 1) / steps, a, b, tol,
                                 tied[static_cast<std::size_t>(i)] || tied[static_cast<std::size_t>((i + 1) % steps)]);
    double t = z.h.real();
    if (t >= two_pi) t -= two_pi;
    z.theta = t;
    z.h = std::polar(g, t);
    z.source = ZeroSource::Circle;
    out.push_back(z);
  }
  return out;
}

struct EdgeReport {
  double g = 0.0;
  double h_ref = 0.0;
  std::optional<double> theta_edge_numeric;
  std::optional<double> theta_edge_analytic;
  bool gap_present = false;
  std::vector<ZeroPoint> zeros;
};

/// arccos(h_ref/g); undefined below the reference field.
inline std::optional<double> analytic_edge_angle(double g, double h_ref) {
  if (!(g > 0.0) || g < h_ref) return std::nullopt;
  return std::acos(h_ref / g);
}

/// Circle scan plus edge classification around theta = 0.
inline EdgeReport fidelity_edge(const GapEvaluator& eval, double g, double h_ref, int steps, double tol = 1e-10) {
  if (!(h_ref > 0.0)) throw ConfigError("reference critical field must be positive");
  EdgeReport rep;
  rep.g = g;
  rep.h_ref = h_ref;
  rep.zeros = find_zeros_on_circle(eval, g, steps, tol);
  rep.theta_edge_analytic = analytic_edge_angle(g, h_ref);
  const double two_pi = 2.0 * std::numbers::pi;
  for (const auto& z : rep.zeros) {
    const double t = *z.theta;
    if (t > 0.0 && (!rep.theta_edge_numeric || t < *rep.theta_edge_numeric)) rep.theta_edge_numeric = t;
  }
  if (rep.theta_edge_analytic && *rep.theta_edge_analytic > 0.0) {
    const double half = 0.5 * *rep.theta_edge_analytic;
    rep.gap_present = std::none_of(rep.zeros.begin(), rep.zeros.end(), [&](const ZeroPoint& z) {
      const double t = *z.theta;
      return t < half || t > two_pi - half;
    });
  }
  return rep;
}

inline constexpr double kHLTieTol = 1e-9;

/// Largest Re h among zeros with Im h > 0; ties broken by smallest Im h.
inline ZeroPoint select_hL(const std::vector<ZeroPoint>& zeros) {
  const ZeroPoint* best = nullptr;
  for (const auto& z : zeros) {
    if (!(z.h.imag() > 0.0)) continue;
    if (!best || z.h.real() > best->h.real() + kHLTieTol ||
        (std::abs(z.h.real() - best->h.real()) <= kHLTieTol && z.h.imag() < best->h.imag()))
      best = &z;
  }
  if (!best) throw ConfigError("no fidelity zero with Im(h) > 0 in the scan box; widen the box");
  return *best;
}

/// Rectangle in the complex h plane scanned by horizontal lines.
struct ScanBox {
  double re_lo = 0.0;
  double re_hi = 1.5;
  double im_lo = 0.01;
  double im_hi = 0.6;
  int re_steps = 300;
  int im_steps = 59;

  static ScanBox chain_default() { return {0.0, 1.5, 0.01, 0.6, 300, 59}; }
  static ScanBox square_default() { return {0.0, 3.5, 0.05, 1.0, 140, 19}; }
  // Taller and coarser box for the square-lattice h_L search; the outermost
  // zero of small lattices peaks above Im h = 1.
  static ScanBox square_hL() { return {0.0, 4.0, 0.2, 3.0, 40, 14}; }

  double im_at(int j) const { return im_steps == 0 ? im_lo : im_lo + (im_hi - im_lo) * j / im_steps; }

  void validate() const {
    if (!(re_hi > re_lo) || !(im_hi >= im_lo)) throw ConfigError("scan box bounds are reversed or empty");
    if (re_steps < 16) throw ConfigError("scan box needs at least 16 Re steps");
    if (im_steps < 0) throw ConfigError("scan box needs a non-negative Im step count");
  }
};

/// Zeros of every line of the box, one list per line in ascending Im.
inline std::vector<std::vector<ZeroPoint>> scan_box_lines(const GapEvaluator& eval, const ScanBox& box,
                                                          double tol = 1e-10, int threads = 1) {
  box.validate();
  return parallel_map(static_cast<std::size_t>(box.im_steps) + 1, threads, [&](std::size_t j) {
    return find_zeros_on_line(eval, box.im_at(static_cast<int>(j)), box.re_lo, box.re_hi, box.re_steps, tol);
  });
}

inline std::vector<ZeroPoint> scan_box(const GapEvaluator& eval, const ScanBox& box, double tol = 1e-10,
                                       int threads = 1) {
  std::vector<ZeroPoint> out;
  for (auto& line : scan_box_lines(eval, box, tol, threads)) out.insert(out.end(), line.begin(), line.end());
  return out;
}

struct HLResult {
  ZeroPoint hL;
  ZeroPoint grid_hL;          // best zero on the Im grid
  bool refined = false;       // hL comes from the continuous maximisation
  bool at_box_edge = false;   // grid optimum on the first or last line
  std::vector<std::optional<ZeroPoint>> rightmost;  // per Im line
};

/// Finite-size critical point: the zero of largest Re h (smallest Im h on
/// ties) over the box. The grid optimum is polished by successive
/// parabolic interpolation of Re h_zero(Im h) along the outermost zero
/// curve, which is smooth near its rightmost point.
inline HLResult refine_hL(const GapEvaluator& eval, const ScanBox& box,
                          std::vector<std::optional<ZeroPoint>> rightmost, double tol = 1e-10,
                          int refine_rounds = 3) {
  box.validate();
  if (rightmost.size() != static_cast<std::size_t>(box.im_steps) + 1)
    throw ConfigError("one rightmost zero slot per scan line expected");
  HLResult res;
  res.rightmost = std::move(rightmost);
  std::vector<ZeroPoint> found;
  int jbest = -1;
  for (std::size_t j = 0; j < res.rightmost.size(); ++j)
    if (res.rightmost[j]) found.push_back(*res.rightmost[j]);
  res.grid_hL = select_hL(found);
  for (std::size_t j = 0; j < res.rightmost.size(); ++j)
    if (res.rightmost[j] && res.rightmost[j]->h == res.grid_hL.h) jbest = static_cast<int>(j);
  res.hL = res.grid_hL;
  res.at_box_edge = jbest == 0 || jbest == box.im_steps;
  if (res.at_box_edge || refine_rounds <= 0 || !res.rightmost[static_cast<std::size_t>(jbest - 1)] ||
      !res.rightmost[static_cast<std::size_t>(jbest + 1)])
    return res;

  const double dx = (box.re_hi - box.re_lo) / box.re_steps;
  // Zero of the same curve on line y, searched in a window around x0.
  auto local_zero = [&](double y, double x0) -> std::optional<ZeroPoint> {
    const double lo = std::max(box.re_lo, x0 - 4.0 * dx);
    const double hi = std::min(box.re_hi, x0 + 4.0 * dx);
    auto z = find_rightmost_zero_on_line(eval, y, lo, hi, 16, tol);
    if (!z) z = find_rightmost_zero_on_line(eval, y, box.re_lo, box.re_hi, box.re_steps, tol);
    return z;
  };
  double y[3] = {box.im_at(jbest - 1), box.im_at(jbest), box.im_at(jbest + 1)};
  ZeroPoint z[3] = {*res.rightmost[static_cast<std::size_t>(jbest - 1)], res.grid_hL,
                    *res.rightmost[static_cast<std::size_t>(jbest + 1)]};
  ZeroPoint best = res.grid_hL;
  for (int round = 0; round < refine_rounds; ++round) {
    const double x0 = z[0].h.real(), x1 = z[1].h.real(), x2 = z[2].h.real();
    const double d01 = (x1 - x0) / (y[1] - y[0]);
    const double d12 = (x2 - x1) / (y[2] - y[1]);
    const double curv = (d12 - d01) / (y[2] - y[0]);
    if (!(curv < 0.0)) break;
    // Vertex of the interpolating parabola.
    double yv = y[1] - 0.5 * ((y[1] - y[0]) * (y[1] - y[0]) * (x1 - x2) - (y[1] - y[2]) * (y[1] - y[2]) * (x1 - x0)) /
                           ((y[1] - y[0]) * (x1 - x2) - (y[1] - y[2]) * (x1 - x0));
    yv = std::clamp(yv, y[0], y[2]);
    if (!(yv > box.im_lo) || !(yv < box.im_hi)) break;
    auto zc = local_zero(yv, x1);
    if (!zc) break;
    if (zc->h.real() > best.h.real()) best = *zc;
    const double half = 0.25 * (y[2] - y[0]);
    const double step = std::max(half * 0.5, 1e-7);
    auto za = local_zero(yv - step, zc->h.real());
    auto zb = local_zero(yv + step, zc->h.real());
    if (!za || !zb) break;
    y[0] = yv - step;
    y[1] = yv;
    y[2] = yv + step;
    z[0] = *za;
    z[1] = *zc;
    z[2] = *zb;
    for (const auto& c : {*za, *zb})
      if (c.h.real() > best.h.real()) best = c;
  }
  res.refined = best.h != res.grid_hL.h;
  res.hL = best;
  return res;
}

inline HLResult locate_hL(const GapEvaluator& eval, const ScanBox& box, double tol = 1e-10, int threads = 1,
                          int refine_rounds = 3) {
  box.validate();
  auto rightmost = parallel_map(static_cast<std::size_t>(box.im_steps) + 1, threads, [&](std::size_t j) {
    return find_rightmost_zero_on_line(eval, box.im_at(static_cast<int>(j)), box.re_lo, box.re_hi, box.re_steps,
                                       tol);
  });
  return refine_hL(eval, box, std::move(rightmost), tol, refine_rounds);
}

}  // namespace fzero

#endif  // FZERO_ZEROFINDER_HPP
