#ifndef FZERO_ANALYTIC1D_HPP
#define FZERO_ANALYTIC1D_HPP

// Free-fermion solution of the periodic transverse-field Ising chain.
//
// After the Jordan-Wigner map the even-parity block has antiperiodic
// fermions (k = ±(2n-1)pi/L) and the odd-parity block periodic fermions
// (k = 2n pi/L). Modes with 0 < k < pi pair with -k and are diagonalised
// by a Bogoliubov rotation with quasiparticle energy eps(k). The odd block
// additionally carries the unpaired k = 0 and k = pi modes, whose
// occupation costs 2(h - J) and 2(h + J) respectively.
//
// With complex h the ground state of a block is the eigenstate with the
// smallest real part. Every eigenstate of a block is a set of excitations
// on top of the paired vacuum, so the block minimum is the cheapest (by
// real part) excitation subset of the right fermion parity.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "fzero/error.hpp"
#include "fzero/lattice.hpp"

namespace fzero::analytic {

inline constexpr double kModeDegeneracyTol = 1e-14;
inline constexpr double kSectorTieTol = 1e-12;

inline void require_even_chain(int L) {
  if (L < 4 || L % 2 != 0)
    throw ConfigError("analytic chain solution needs even L >= 4, got L=" + std::to_string(L));
}

/// Momenta of the parity block, ascending.
inline std::vector<double> sector_momenta(int L, Parity sector) {
  require_even_chain(L);
  const double pi = std::numbers::pi;
  std::vector<double> ks;
  ks.reserve(static_cast<std::size_t>(L));
  if (sector == Parity::Odd) {
    for (int n = -L / 2 + 1; n <= L / 2; ++n) ks.push_back(2.0 * n * pi / L);
  } else {
    for (int n = 1; n <= L / 2; ++n) {
      ks.push_back((2.0 * n - 1.0) * pi / L);
      ks.push_back(-(2.0 * n - 1.0) * pi / L);
    }
  }
  std::sort(ks.begin(), ks.end());
  return ks;
}

/// Momenta 0 < k < pi of the block; these label the Bogoliubov pairs.
inline std::vector<double> paired_momenta(int L, Parity sector) {
  std::vector<double> out;
  for (double k : sector_momenta(L, sector))
    if (k > 1e-12 && k < std::numbers::pi - 1e-12) out.push_back(k);
  return out;
}

/// Principal root with Re >= 0, and Im >= 0 when Re == 0.
inline cplx principal_sqrt(cplx z) {
  cplx r = std::sqrt(z);
  if (r.real() < 0.0 || (r.real() == 0.0 && r.imag() < 0.0)) r = -r;
  return r;
}

/// eps(k) = 2 sqrt((J cos k - h)^2 + (J sin k)^2).
inline cplx dispersion(double k, cplx h, double J = 1.0) {
  const cplx x = J * std::cos(k) - h;
  const double y = J * std::sin(k);
  return 2.0 * principal_sqrt(x * x + y * y);
}

/// Complex angle with tan(2 theta) = J sin k / (J cos k - h), on the branch
/// whose rotated pair (cos theta, sin theta) is the smaller-real-part
/// eigenvector of the pair block.
inline double ground_branch_mismatch(double k, cplx h, double J, cplx theta) {
  const cplx a = 2.0 * (h - J * std::cos(k));
  const double b = 2.0 * J * std::sin(k);
  const cplx e = dispersion(k, h, J);
  const cplx c = std::cos(theta), s = std::sin(theta);
  return std::abs(s * b - c * (a + e)) / ((std::abs(c) + std::abs(s)) * (std::abs(a) + std::abs(e) + b));
}

inline cplx bogoliubov_angle(double k, cplx h, double J = 1.0) {
  const cplx denom = J * std::cos(k) - h;
  const double s = J * std::sin(k);
  if (std::abs(denom * denom + s * s) < kModeDegeneracyTol)
    throw DegenerateModeError("vanishing mode energy at k=" + std::to_string(k));
  cplx theta = std::abs(denom) < kModeDegeneracyTol ? cplx{std::copysign(std::numbers::pi / 4.0, s), 0.0}
                                                    : 0.5 * std::atan(s / denom);
  if (denom.real() < 0.0) theta += std::numbers::pi / 2.0;
  // The quadrant rule above can land on the excited branch once h leaves
  // the real axis; the pair eigenvalue equation decides.
  const cplx alt = theta + std::numbers::pi / 2.0;
  if (ground_branch_mismatch(k, h, J, alt) < ground_branch_mismatch(k, h, J, theta)) theta = alt;
  return theta;
}

struct ModeData {
  double k;
  cplx epsilon;
  cplx theta;
};

/// Occupation pattern of a block ground state relative to the paired
/// vacuum. `excited_pairs` indexes into the block's paired momenta.
struct Occupation {
  bool zero_mode = false;
  bool pi_mode = false;
  std::vector<int> excited_pairs;
  friend bool operator==(const Occupation&, const Occupation&) = default;
};

struct SectorSpectrum {
  Parity sector;
  std::vector<double> momenta;
  std::vector<ModeData> modes;  // paired modes, 0 < k < pi
  Occupation occupation;
  cplx ground_energy;
  bool degenerate = false;
};

namespace detail {

struct Candidate {
  cplx energy;
  int tag;  // -1 zero mode, -2 pi mode, >= 0 pair index
};

inline cplx subset_sum(const std::vector<Candidate>& c, std::size_t first, std::size_t last) {
  cplx s{};
  for (std::size_t i = first; i < last; ++i) s += c[i].energy;
  return s;
}

}  // namespace detail

/// Ground data of one parity block.
inline SectorSpectrum sector_spectrum(int L, cplx h, double J, Parity sector) {
  require_even_chain(L);
  if (!(J > 0.0)) throw ConfigError("coupling J must be positive");
  SectorSpectrum out;
  out.sector = sector;
  out.momenta = sector_momenta(L, sector);
  const auto pairs = paired_momenta(L, sector);
  cplx vacuum{};
  std::vector<detail::Candidate> cands;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double k = pairs[i];
    const cplx e = dispersion(k, h, J);
    out.modes.push_back({k, e, cplx{}});
    vacuum -= e;
    cands.push_back({e, static_cast<int>(i)});
  }
  if (sector == Parity::Even) {
    // Pair excitations all have Re(eps) >= 0 and the block needs an even
    // count, so the paired vacuum is the minimum.
    out.ground_energy = vacuum;
    for (const auto& m : out.modes)
      if (m.epsilon.real() < kSectorTieTol) out.degenerate = true;
  } else {
    vacuum -= 2.0 * h;
    cands.push_back({2.0 * (h - J), -1});
    cands.push_back({2.0 * (h + J), -2});
    std::stable_sort(cands.begin(), cands.end(),
                     [](const auto& x, const auto& y) { return x.energy.real() < y.energy.real(); });
    std::size_t n_neg = 0;
    while (n_neg < cands.size() && cands[n_neg].energy.real() < 0.0) ++n_neg;
    // Cheapest odd-size subset: all negative candidates, fixed up by one.
    std::vector<std::size_t> chosen;
    cplx extra{};
    if (n_neg % 2 == 1) {
      for (std::size_t i = 0; i < n_neg; ++i) chosen.push_back(i);
      extra = detail::subset_sum(cands, 0, n_neg);
      const double margin_drop = -cands[n_neg - 1].energy.real();
      const double margin_add = n_neg < cands.size() ? cands[n_neg].energy.real() : INFINITY;
      if (std::min(margin_drop, margin_add) < kSectorTieTol) out.degenerate = true;
    } else {
      const cplx drop = n_neg > 0 ? detail::subset_sum(cands, 0, n_neg - 1) : cplx{INFINITY, 0.0};
      const cplx add = n_neg < cands.size() ? detail::subset_sum(cands, 0, n_neg + 1) : cplx{INFINITY, 0.0};
      const std::size_t count = drop.real() <= add.real() ? n_neg - 1 : n_neg + 1;
      for (std::size_t i = 0; i < count; ++i) chosen.push_back(i);
      extra = drop.real() <= add.real() ? drop : add;
      if (std::abs(drop.real() - add.real()) < kSectorTieTol) out.degenerate = true;
    }
    for (std::size_t i : chosen) {
      const int tag = cands[i].tag;
      if (tag == -1) out.occupation.zero_mode = true;
      else if (tag == -2) out.occupation.pi_mode = true;
      else out.occupation.excited_pairs.push_back(tag);
    }
    std::sort(out.occupation.excited_pairs.begin(), out.occupation.excited_pairs.end());
    // A lone quasiparticle at +k or -k is a two-fold level.
    if (!out.occupation.excited_pairs.empty()) out.degenerate = true;
    out.ground_energy = vacuum + extra;
  }
  for (auto& m : out.modes) {
    try {
      m.theta = bogoliubov_angle(m.k, h, J);
    } catch (const DegenerateModeError&) {
      m.theta = cplx{NAN, NAN};
    }
  }
  return out;
}

inline cplx sector_ground_energy(int L, cplx h, double J, Parity sector) {
  return sector_spectrum(L, h, J, sector).ground_energy;
}

struct GroundSector {
  Parity sector;
  cplx energy;
  bool degenerate;
};

/// Block holding the state of smallest real energy; ties go to odd.
inline GroundSector ground_sector(int L, cplx h, double J = 1.0) {
  const auto even = sector_spectrum(L, h, J, Parity::Even);
  const auto odd = sector_spectrum(L, h, J, Parity::Odd);
  const double diff = even.ground_energy.real() - odd.ground_energy.real();
  if (std::abs(diff) < kSectorTieTol) return {Parity::Odd, odd.ground_energy, true};
  if (diff < 0.0) return {Parity::Even, even.ground_energy, even.degenerate};
  return {Parity::Odd, odd.ground_energy, odd.degenerate};
}

/// Normalised overlap of two Bogoliubov pair states.
inline double pair_overlap(cplx theta, cplx theta_ref) {
  const cplx c = std::cos(theta), s = std::sin(theta);
  const cplx cr = std::cos(theta_ref), sr = std::sin(theta_ref);
  const double n = std::norm(c) + std::norm(s);
  const double nr = std::norm(cr) + std::norm(sr);
  return std::abs(std::conj(cr) * c + std::conj(sr) * s) / std::sqrt(n * nr);
}

/// |<psi0(h_ref)|psi0(h)>| for normalised ground states.
inline double fidelity_1d(int L, cplx h, cplx h_ref, double J = 1.0) {
  const auto g = ground_sector(L, h, J);
  const auto gr = ground_sector(L, h_ref, J);
  if (g.sector != gr.sector) return 0.0;
  const auto a = sector_spectrum(L, h, J, g.sector);
  const auto b = sector_spectrum(L, h_ref, J, g.sector);
  if (!(a.occupation == b.occupation)) return 0.0;
  double f = 1.0;
  for (std::size_t i = 0; i < a.modes.size(); ++i) {
    const bool excited = std::binary_search(a.occupation.excited_pairs.begin(),
                                            a.occupation.excited_pairs.end(), static_cast<int>(i));
    if (excited) continue;
    const double kk = a.modes[i].k;
    f *= pair_overlap(bogoliubov_angle(kk, h, J), bogoliubov_angle(kk, h_ref, J));
  }
  return f;
}

}  // namespace fzero::analytic

#endif  // FZERO_ANALYTIC1D_HPP
