#ifndef FZERO_LATTICE_HPP
#define FZERO_LATTICE_HPP

// Transverse-field Ising Hamiltonian H = -J sum_<ij> X_i X_j - h sum_j Z_j
// on periodic chains and square lattices, in the Z product basis.
//
// Basis convention: bit j of a state index is 1 when site j has Z = +1.
// Sites of the square lattice are numbered row-major, site = row * L + col.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fzero/error.hpp"

namespace fzero {

using cplx = std::complex<double>;
using State = std::uint64_t;

inline constexpr int kDefaultMaxSites = 25;

enum class Parity : int { Even = +1, Odd = -1 };

inline int parity_value(Parity p) { return static_cast<int>(p); }
inline const char* parity_name(Parity p) { return p == Parity::Even ? "even" : "odd"; }
inline Parity other(Parity p) { return p == Parity::Even ? Parity::Odd : Parity::Even; }

struct Bond {
  int a;
  int b;
  friend bool operator==(const Bond&, const Bond&) = default;
};

struct LatticeSpec {
  int dimensionality = 1;
  int L = 4;
  int max_sites = kDefaultMaxSites;

  static LatticeSpec chain(int L) { return {1, L, kDefaultMaxSites}; }
  static LatticeSpec square(int L) { return {2, L, kDefaultMaxSites}; }

  int sites() const { return dimensionality == 1 ? L : L * L; }

  void validate() const {
    if (dimensionality != 1 && dimensionality != 2)
      throw ConfigError("lattice dimensionality must be 1 or 2");
    if (L < 1 || sites() < 2)
      throw ConfigError("lattice needs at least two sites");
    if (sites() > max_sites || sites() > 62)
      throw ConfigError("lattice with " + std::to_string(sites()) +
                        " sites exceeds the configured cap of " +
                        std::to_string(max_sites));
  }

  std::string describe() const {
    return dimensionality == 1 ? "chain L=" + std::to_string(L)
                               : "square " + std::to_string(L) + "x" + std::to_string(L);
  }

  /// Nearest-neighbour bonds with periodic wrap. On the chain each
  /// unordered pair appears once (L = 2 has a single bond). On the square
  /// lattice every site contributes its +x and +y bond, 2N bonds in total;
  /// for L = 2 the wrap bond repeats the interior one and both are kept.
  std::vector<Bond> bonds() const {
    validate();
    std::vector<Bond> out;
    if (dimensionality == 1) {
      std::set<std::pair<int, int>> seen;
      for (int i = 0; i < L; ++i) {
        const int j = (i + 1) % L;
        const std::pair<int, int> key{std::min(i, j), std::max(i, j)};
        if (key.first != key.second && seen.insert(key).second) out.push_back({key.first, key.second});
      }
    } else {
      for (int r = 0; r < L; ++r)
        for (int c = 0; c < L; ++c) {
          const int site = r * L + c;
          out.push_back({site, r * L + (c + 1) % L});
          out.push_back({site, ((r + 1) % L) * L + c});
        }
    }
    return out;
  }
};

struct ModelParams {
  double J = 1.0;
  cplx h{0.0, 0.0};

  void validate() const {
    if (!(J > 0.0)) throw ConfigError("coupling J must be positive");
    if (!std::isfinite(h.real()) || !std::isfinite(h.imag()))
      throw ConfigError("field h must be finite");
  }
};

/// (-1)^(number of down spins) for an n_sites-bit state.
inline int parity_eigenvalue(State s, int n_sites) {
  const int ups = std::popcount(s);
  return ((n_sites - ups) % 2 == 0) ? +1 : -1;
}

/// Sum of Z_j over sites: (#up) - (#down).
inline int magnetization(State s, int n_sites) {
  return 2 * std::popcount(s) - n_sites;
}

struct Triplet {
  std::uint64_t row;
  std::uint64_t col;
  cplx value;
};

/// Square operator with the diagonal stored apart from the off-diagonal
/// entries. Off-diagonal entries live in row-compressed form; duplicate
/// (row, col) entries are summed on construction.
class SparseOperator {
 public:
  SparseOperator() = default;

  SparseOperator(std::size_t dim, std::vector<cplx> diagonal, std::vector<Triplet> off)
      : dim_(dim), diag_(std::move(diagonal)) {
    if (diag_.size() != dim_) throw ConfigError("diagonal length does not match dimension");
    for (const auto& t : off)
      if (t.row >= dim_ || t.col >= dim_ || t.row == t.col)
        throw ConfigError("off-diagonal entry out of range");
    std::sort(off.begin(), off.end(), [](const Triplet& x, const Triplet& y) {
      return x.row != y.row ? x.row < y.row : x.col < y.col;
    });
    row_ptr_.assign(dim_ + 1, 0);
    for (std::size_t i = 0; i < off.size(); ++i) {
      if (!cols_.empty() && i > 0 && off[i].row == off[i - 1].row &&
          off[i].col == off[i - 1].col) {
        vals_.back() += off[i].value;
        continue;
      }
      cols_.push_back(static_cast<std::uint32_t>(off[i].col));
      vals_.push_back(off[i].value);
      ++row_ptr_[off[i].row + 1];
    }
    for (std::size_t r = 0; r < dim_; ++r) row_ptr_[r + 1] += row_ptr_[r];
    pattern_symmetric_ = check_pattern_symmetric();
  }

  std::size_t dimension() const { return dim_; }
  const std::vector<cplx>& diagonal() const { return diag_; }
  std::size_t off_diagonal_count() const { return vals_.size(); }
  bool pattern_symmetric() const { return pattern_symmetric_; }

  std::vector<Triplet> off_diagonal() const {
    std::vector<Triplet> out;
    out.reserve(vals_.size());
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) out.push_back({r, cols_[p], vals_[p]});
    return out;
  }

  /// Entry (row, col); zero when absent.
  cplx at(std::size_t row, std::size_t col) const {
    if (row == col) return diag_[row];
    auto first = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row]);
    auto last = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row + 1]);
    auto it = std::lower_bound(first, last, static_cast<std::uint32_t>(col));
    return (it != last && *it == col) ? vals_[static_cast<std::size_t>(it - cols_.begin())] : cplx{};
  }

  /// out = A * in
  void apply(std::span<const cplx> in, std::span<cplx> out) const {
    for (std::size_t r = 0; r < dim_; ++r) {
      cplx acc = diag_[r] * in[r];
      for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) acc += vals_[p] * in[cols_[p]];
      out[r] = acc;
    }
  }

  /// Largest absolute row sum (infinity norm); bounds every |eigenvalue|.
  double max_abs_row_sum() const {
    double best = 0.0;
    for (std::size_t r = 0; r < dim_; ++r) {
      double s = std::abs(diag_[r]);
      for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) s += std::abs(vals_[p]);
      best = std::max(best, s);
    }
    return best;
  }

  bool is_hermitian(double tol = 0.0) const {
    for (std::size_t r = 0; r < dim_; ++r) {
      if (std::abs(diag_[r].imag()) > tol) return false;
      for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
        if (std::abs(vals_[p] - std::conj(at(cols_[p], r))) > tol) return false;
    }
    return true;
  }

 private:
  bool check_pattern_symmetric() const {
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
        if (at(cols_[p], r) == cplx{}) return false;
    return true;
  }

  std::size_t dim_ = 0;
  std::vector<cplx> diag_;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::uint32_t> cols_;
  std::vector<cplx> vals_;
  bool pattern_symmetric_ = true;
};

namespace detail {

inline std::vector<State> bond_masks(const LatticeSpec& lattice) {
  std::vector<State> masks;
  for (const auto& b : lattice.bonds()) masks.push_back((State{1} << b.a) | (State{1} << b.b));
  return masks;
}

}  // namespace detail

/// Full 2^N Hamiltonian.
inline SparseOperator build_hamiltonian(const LatticeSpec& lattice, const ModelParams& params) {
  lattice.validate();
  params.validate();
  const int n = lattice.sites();
  const std::size_t dim = std::size_t{1} << n;
  if (dim > std::numeric_limits<std::uint32_t>::max())
    throw ConfigError("full Hilbert space too large for a stored operator");
  const auto masks = detail::bond_masks(lattice);
  std::vector<cplx> diag(dim);
  std::vector<Triplet> off;
  off.reserve(dim * masks.size());
  for (State s = 0; s < dim; ++s) {
    diag[s] = -params.h * static_cast<double>(magnetization(s, n));
    for (State m : masks) off.push_back({s ^ m, s, cplx{-params.J, 0.0}});
  }
  return SparseOperator(dim, std::move(diag), std::move(off));
}

/// A parity block together with the full-basis state of each block index.
struct SectorOperator {
  Parity parity;
  SparseOperator op;
  std::vector<State> states;
};

/// Index of `s` inside its parity block: states of fixed parity are in
/// one-to-one correspondence with their upper N-1 bits.
inline std::size_t sector_index(State s) { return static_cast<std::size_t>(s >> 1); }

inline State sector_state(std::size_t index, Parity parity, int n_sites) {
  State s = static_cast<State>(index) << 1;
  if (parity_eigenvalue(s, n_sites) != parity_value(parity)) s |= 1;
  return s;
}

/// Restrict `op` (acting on n_sites spins) to one parity block. Throws if
/// any entry couples states of different parity.
inline SectorOperator sector_project(const SparseOperator& op, int n_sites, Parity parity) {
  if (op.dimension() != (std::size_t{1} << n_sites))
    throw ConfigError("operator dimension does not match 2^N");
  const std::size_t sdim = op.dimension() / 2;
  std::vector<State> states(sdim);
  std::vector<cplx> diag(sdim);
  for (std::size_t i = 0; i < sdim; ++i) {
    states[i] = sector_state(i, parity, n_sites);
    diag[i] = op.diagonal()[states[i]];
  }
  std::vector<Triplet> off;
  for (const auto& t : op.off_diagonal()) {
    const int pr = parity_eigenvalue(t.row, n_sites);
    const int pc = parity_eigenvalue(t.col, n_sites);
    if (pr != pc)
      throw ConfigError("operator does not commute with parity: entry (" + std::to_string(t.row) +
                        ", " + std::to_string(t.col) + ") couples sectors");
    if (pr == parity_value(parity)) off.push_back({sector_index(t.row), sector_index(t.col), t.value});
  }
  return {parity, SparseOperator(sdim, std::move(diag), std::move(off)), std::move(states)};
}

/// Parity block built directly, without materialising the full operator.
/// Identical to sector_project(build_hamiltonian(...)).
inline SectorOperator build_sector_hamiltonian(const LatticeSpec& lattice, const ModelParams& params,
                                               Parity parity) {
  lattice.validate();
  params.validate();
  const int n = lattice.sites();
  const std::size_t sdim = std::size_t{1} << (n - 1);
  if (sdim > std::numeric_limits<std::uint32_t>::max())
    throw ConfigError("parity block too large for a stored operator");
  const auto masks = detail::bond_masks(lattice);
  std::vector<State> states(sdim);
  std::vector<cplx> diag(sdim);
  std::vector<Triplet> off;
  off.reserve(sdim * masks.size());
  for (std::size_t i = 0; i < sdim; ++i) {
    const State s = sector_state(i, parity, n);
    states[i] = s;
    diag[i] = -params.h * static_cast<double>(magnetization(s, n));
    for (State m : masks) off.push_back({sector_index(s ^ m), i, cplx{-params.J, 0.0}});
  }
  return {parity, SparseOperator(sdim, std::move(diag), std::move(off)), std::move(states)};
}

/// Text dump, one "row col re im" line per stored entry (diagonal first
/// within each row), 17 significant digits.
inline void write_triplets(std::ostream& os, const SparseOperator& op) {
  const auto flags = os.flags();
  const auto prec = os.precision();
  os << std::setprecision(17);
  const auto off = op.off_diagonal();
  std::size_t p = 0;
  for (std::size_t r = 0; r < op.dimension(); ++r) {
    const cplx d = op.diagonal()[r];
    os << r << ' ' << r << ' ' << d.real() << ' ' << d.imag() << '\n';
    for (; p < off.size() && off[p].row == r; ++p)
      os << off[p].row << ' ' << off[p].col << ' ' << off[p].value.real() << ' ' << off[p].value.imag()
         << '\n';
  }
  os.flags(flags);
  os.precision(prec);
}

}  // namespace fzero

#endif  // FZERO_LATTICE_HPP
