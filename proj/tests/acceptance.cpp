// End-to-end acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance            all criteria
//   acceptance 3 5        only criteria 3 and 5

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "dense_oracle.hpp"
#include "fzero/analytic1d.hpp"
#include "fzero/eigensolver.hpp"
#include "fzero/scaling.hpp"
#include "fzero/zerofinder.hpp"

using namespace fzero;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

constexpr double kPi = std::numbers::pi;

double wall(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. Free-fermion solution against exact diagonalisation.
void oracle(Outcome& out) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> re(-2.0, 2.0), im(-1.0, 1.0), off(-0.05, 0.05);
  double worst_e = 0.0, worst_f = 0.0;
  int fidelity_pairs = 0, skipped = 0;
  for (int L : {4, 6, 8, 10}) {
    const auto lat = LatticeSpec::chain(L);
    const SectorModel even(lat, 1.0, Parity::Even), odd(lat, 1.0, Parity::Odd);
    for (int i = 0; i < 50; ++i) {
      const cplx h{re(rng), im(rng)};
      const cplx h2 = h + cplx{off(rng), off(rng)};
      const auto a = analytic::ground_sector(L, h);
      const auto a2 = analytic::ground_sector(L, h2);
      EigenResult ed[2], ed2[2];
      for (int s = 0; s < 2; ++s) {
        const SectorModel& m = s == 0 ? even : odd;
        const Parity p = s == 0 ? Parity::Even : Parity::Odd;
        ed[s] = min_real_eigenpair(m.at(h), {}, true);
        ed2[s] = min_real_eigenpair(m.at(h2), {}, true);
        worst_e = std::max(worst_e, std::abs(ed[s].value - analytic::sector_ground_energy(L, h, 1.0, p)));
      }
      if (a.degenerate || a2.degenerate || a.sector != a2.sector) {
        ++skipped;
        continue;
      }
      const int s = a.sector == Parity::Even ? 0 : 1;
      const double f_ed = fidelity_numeric(*ed2[s].vector, *ed[s].vector);
      worst_f = std::max(worst_f, std::abs(f_ed - analytic::fidelity_1d(L, h2, h)));
      ++fidelity_pairs;
    }
  }
  out.detail << "max|dE|=" << worst_e << " max|dF|=" << worst_f << " over " << fidelity_pairs
             << " same-sector pairs (" << skipped << " cross-sector or degenerate pairs not compared)";
  out.require(worst_e <= 1e-9, "|dE| <= 1e-9");
  out.require(worst_f <= 1e-8, "|dF| <= 1e-8");
  out.require(fidelity_pairs >= 100, "at least 100 same-sector pairs");
}

// 2. Chain zeros confined to Re h < 1.1.
void confinement(Outcome& out) {
  const AnalyticGapEvaluator ev(10);
  const auto box = ScanBox::chain_default();
  const auto zeros = scan_box(ev, box);
  double max_re = -INFINITY;
  for (const auto& z : zeros) max_re = std::max(max_re, z.h.real());
  ScanBox para = box;
  para.re_lo = 1.2;
  para.re_hi = 1.5;
  para.re_steps = 60;
  const auto outside = scan_box(ev, para);
  out.detail << zeros.size() << " zeros, max Re h=" << max_re << ", " << outside.size()
             << " zeros with Re h in [1.2,1.5]";
  out.require(!zeros.empty(), "non-empty zero set");
  out.require(max_re < 1.1, "max Re h < 1.1");
  out.require(outside.empty(), "no zeros in [1.2,1.5]");
}

// 3. Chain finite-size scaling.
void chain_scaling(Outcome& out) {
  std::vector<ScalingSample> samples;
  for (int L = 10; L <= 32; L += 2) samples.push_back({double(L), locate_hL(AnalyticGapEvaluator(L), ScanBox::chain_default()).hL.h});
  const auto re = fit_power_law(samples, Component::Re);
  const auto im = fit_power_law(samples, Component::Im);
  const auto joint = fit_power_law_joint(samples);
  out.detail << "shared-nu fit: Re h_c=" << joint.re.h_c << " nu=" << joint.re.nu << " Im h_c=" << joint.im.h_c
             << "; independent fits: Re h_c=" << re.h_c << " nu=" << re.nu << ", Im h_c=" << im.h_c
             << " nu=" << im.nu;
  out.require(joint.re.h_c >= 0.995 && joint.re.h_c <= 1.015, "Re h_c in [0.995,1.015]");
  out.require(joint.re.nu >= 0.9 && joint.re.nu <= 1.1, "nu in [0.9,1.1]");
  out.require(std::abs(joint.im.h_c) < 0.02 && std::abs(im.h_c) < 0.02, "|Im h_c| < 0.02");
}

// 4. Zeros on the fugacity circle.
void circle(Outcome& out) {
  const double edge = std::acos(1.0 / 1.5);
  double err10 = INFINITY, err32 = INFINITY;
  for (int L : {10, 32}) {
    const AnalyticGapEvaluator ev(L);
    for (double g : {0.5, 1.5}) {
      const auto rep = fidelity_edge(ev, g, 1.0, 32 * L);
      out.detail << "L=" << L << " g=" << g << ": " << rep.zeros.size() << " zeros";
      out.require(rep.zeros.size() == static_cast<std::size_t>(2 * L), "2L zeros");
      if (g == 1.5) {
        for (const auto& z : rep.zeros)
          out.require(std::min(*z.theta, 2 * kPi - *z.theta) >= 0.5, "no zero with |theta| < 0.5");
        const double err = rep.theta_edge_numeric ? std::abs(*rep.theta_edge_numeric - edge) : INFINITY;
        (L == 10 ? err10 : err32) = err;
        out.detail << ", edge " << (rep.theta_edge_numeric ? *rep.theta_edge_numeric : NAN);
      }
      out.detail << "; ";
    }
  }
  out.detail << "|edge - arccos(2/3)|: " << err10 << " -> " << err32;
  out.require(err10 <= 0.05 && err32 <= 0.05, "edge within 0.05 of arccos(2/3)");
  out.require(err32 <= err10, "edge approaches arccos(2/3) as L grows");
}

// 5. 3x3 square lattice zero window.
void square_window(Outcome& out) {
  const ExactGapEvaluator ev(LatticeSpec::square(3));
  const auto zeros = scan_box(ev, ScanBox::square_default(), 1e-8);
  double max_re = -INFINITY;
  int in_window = 0;
  for (const auto& z : zeros) {
    max_re = std::max(max_re, z.h.real());
    in_window += z.h.real() >= 2.0 && z.h.real() <= 2.5;
  }
  out.detail << zeros.size() << " zeros, " << in_window << " with Re h in [2.0,2.5], max Re h=" << max_re;
  out.require(in_window > 0, "zeros near Re h 2.0-2.5");
  out.require(max_re <= 2.8, "no zeros beyond Re h 2.8");
}

// 6. Square lattice finite-size scaling, L = 2, 3, 4.
void square_scaling(Outcome& out) {
  std::vector<ScalingSample> samples;
  for (int L : {2, 3, 4}) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = locate_hL(ExactGapEvaluator(LatticeSpec::square(L)), ScanBox::square_hL(), 1e-8);
    samples.push_back({double(L), r.hL.h});
    out.detail << "L=" << L << " h_L=" << r.hL.h << (r.at_box_edge ? " (box edge)" : "") << " [" << wall(t0)
               << " s]; ";
    out.require(!r.at_box_edge, "h_L inside the scan box");
  }
  const auto re = fit_power_law(samples, Component::Re);
  out.detail << "Re fit h_c=" << re.h_c << " nu=" << re.nu << "; L=5 extended run not attempted (optional)";
  out.require(re.h_c >= 2.7 && re.h_c <= 3.4, "h_c in [2.7,3.4]");
  out.require(samples[0].hL.real() < samples[1].hL.real() && samples[1].hL.real() < samples[2].hL.real(),
              "Re h_L grows with L");
}

// 7. Property suites.
void properties(Outcome& out) {
  int checks = 0;
  // [H, P] = 0 and spectral conjugation.
  for (const auto& lat : {LatticeSpec::chain(4), LatticeSpec::chain(9), LatticeSpec::chain(12),
                          LatticeSpec::square(2), LatticeSpec::square(3)}) {
    const auto H = build_hamiltonian(lat, {1.0, cplx{0.9, 0.35}});
    bool commutes = true;
    for (const auto& t : H.off_diagonal())
      commutes = commutes && parity_eigenvalue(t.row, lat.sites()) == parity_eigenvalue(t.col, lat.sites());
    out.require(commutes, "[H,P]=0 on " + lat.describe());
    ++checks;
    if (lat.sites() <= 9) {
      auto a = testing::spectrum(H);
      auto b = testing::spectrum(build_hamiltonian(lat, {1.0, cplx{0.9, -0.35}}));
      for (auto& x : b) x = std::conj(x);
      out.require(testing::multiset_distance(a, b) < 1e-10, "spectrum conjugation on " + lat.describe());
      ++checks;
    }
  }
  // Zero sets of conjugate lines mirror each other.
  {
    const AnalyticGapEvaluator ev(12);
    const ExactGapEvaluator sq(LatticeSpec::square(2));
    for (double im : {0.2, 0.45}) {
      const auto up = find_zeros_on_line(ev, im, 0.0, 1.5, 300), dn = find_zeros_on_line(ev, -im, 0.0, 1.5, 300);
      bool same = up.size() == dn.size();
      for (std::size_t i = 0; same && i < up.size(); ++i) same = std::abs(up[i].h.real() - dn[i].h.real()) < 1e-9;
      const auto su = find_zeros_on_line(sq, 3 * im, 0.0, 3.5, 140, 1e-9);
      const auto sd = find_zeros_on_line(sq, -3 * im, 0.0, 3.5, 140, 1e-9);
      same = same && su.size() == sd.size();
      for (std::size_t i = 0; same && i < su.size(); ++i) same = std::abs(su[i].h.real() - sd[i].h.real()) < 1e-8;
      out.require(same, "zero-set mirror symmetry");
      ++checks;
    }
  }
  // Fidelity bounds and phase invariance.
  {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    bool ok = true;
    for (int i = 0; i < 200; ++i) {
      const cplx h{1.5 * u(rng), u(rng)}, h2 = h + cplx{0.05 * u(rng), 0.05 * u(rng)};
      const double f = analytic::fidelity_1d(10, h, h2);
      ok = ok && f >= 0.0 && f <= 1.0 + 1e-12 && std::abs(f - analytic::fidelity_1d(10, h2, h)) < 1e-12;
    }
    const auto g = ground_by_sector(LatticeSpec::chain(8), {1.0, cplx{0.7, 0.3}}, {}, true);
    const auto g2 = ground_by_sector(LatticeSpec::chain(8), {1.0, cplx{0.72, 0.3}}, {}, true);
    auto w = *g2.odd.vector;
    for (auto& x : w) x *= std::polar(1.0, 1.234);
    const double f1 = fidelity_numeric(*g.odd.vector, *g2.odd.vector), f2 = fidelity_numeric(*g.odd.vector, w);
    ok = ok && std::abs(f1 - f2) < 1e-14 && f1 <= 1.0 + 1e-12;
    out.require(ok, "fidelity bounds, symmetry and phase invariance");
    ++checks;
  }
  // Dense and iterative eigensolver paths on every block size up to 4096.
  {
    SolverConfig dense, iter;
    dense.dense_cutoff = 1u << 20;
    iter.force_iterative = true;
    double worst = 0.0;
    std::vector<LatticeSpec> lats;
    for (int L = 2; L <= 13; ++L) lats.push_back(LatticeSpec::chain(L));
    lats.push_back(LatticeSpec::square(2));
    lats.push_back(LatticeSpec::square(3));
    for (const auto& lat : lats)
      for (Parity p : {Parity::Even, Parity::Odd}) {
        const SectorModel m(lat, 1.0, p);
        const cplx h = lat.dimensionality == 1 ? cplx{0.85, 0.4} : cplx{2.2, 0.6};
        const auto d = min_real_eigenpair(m.at(h), dense);
        const auto i = min_real_eigenpair(m.at(h), iter);
        worst = std::max(worst, std::abs(d.value - i.value) / (1 + std::abs(d.value)));
      }
    out.detail << "dense/iterative max relative gap " << worst << "; ";
    out.require(worst <= 1e-8, "dense/iterative agreement");
    ++checks;
  }
  // Noiseless scaling round trip.
  {
    bool ok = true;
    for (auto [h_c, a, nu] : {std::tuple{1.0, 0.5, 1.0}, std::tuple{3.05, -2.0, 0.63}, std::tuple{0.2, 3.0, 2.2}}) {
      std::vector<ScalingSample> s;
      for (int L = 10; L <= 32; L += 2) s.push_back({double(L), cplx{h_c + a * std::pow(L, -1.0 / nu), 0.0}});
      const auto f = fit_power_law(s, Component::Re);
      ok = ok && std::abs(f.h_c - h_c) <= 1e-6 * std::max(1.0, std::abs(h_c)) &&
           std::abs(f.a - a) <= 1e-6 * std::max(1.0, std::abs(a)) && std::abs(f.nu - nu) <= 1e-6 * nu;
    }
    out.require(ok, "synthetic fit round trip");
    ++checks;
  }
  out.detail << checks << " property checks";
}

struct Criterion {
  const char* name;
  double budget_s;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {"analytic vs exact diagonalisation oracle", 60, oracle},
      {"1D zero confinement", 10, confinement},
      {"1D finite-size scaling", 60, chain_scaling},
      {"circle theorem and fidelity edge", 10, circle},
      {"2D 3x3 transition window", 300, square_window},
      {"2D finite-size scaling L=2,3,4", 3600, square_scaling},
      {"property suites", 600, properties},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!only.empty() && !only.count(static_cast<int>(i) + 1)) continue;
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].run(out);
    } catch (const std::exception& e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    const double t = wall(t0);
    out.require(t <= criteria[i].budget_s, "runtime budget " + std::to_string(criteria[i].budget_s) + " s");
    failures += !out.pass;
    std::cout << (out.pass ? "PASS" : "FAIL") << "  [" << i + 1 << "] " << criteria[i].name << " (" << t
              << " s): " << out.detail.str() << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
