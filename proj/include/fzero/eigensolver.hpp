#ifndef FZERO_EIGENSOLVER_HPP
#define FZERO_EIGENSOLVER_HPP

// Smallest-real-part eigenpair of a (generally non-Hermitian) parity block.
//
// Small blocks are diagonalised densely with LAPACK zgeev. Large blocks
// use a Krylov-Schur iteration: Arnoldi expansion with full
// reorthogonalisation, a complex Schur form of the projected matrix, and
// a thick restart that keeps the Schur vectors of the wanted Ritz values. Ritz values are ranked by real
// part, which is the same as ranking the shifted operator c*I - H (c real
// and dominant) by its real part; Krylov spaces are shift invariant, so
// the shift itself never has to be applied.

#include <Eigen/Dense>
#include <lapacke.h>

#include <algorithm>
#include <bit>
#include <complex>
#include <concepts>
#include <cstdint>
#include <cstring>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <vector>

#include "fzero/error.hpp"
#include "fzero/lattice.hpp"

namespace fzero {

template <class Op>
concept LinearOperator = requires(const Op& op, std::span<const cplx> in, std::span<cplx> out) {
  { op.dimension() } -> std::convertible_to<std::size_t>;
  op.apply(in, out);
  { op.max_abs_row_sum() } -> std::convertible_to<double>;
};

struct SolverConfig {
  std::size_t dense_cutoff = 128;
  int subspace_dim = 60;
  int max_restarts = 300;
  double tol = 1e-9;
  double degeneracy_tol = 1e-10;
  int candidates = 3;
  bool force_iterative = false;

  void validate() const {
    if (!(tol > 0.0)) throw ConfigError("solver tolerance must be positive");
    if (subspace_dim < 10) throw ConfigError("subspace dimension must be at least 10");
    if (candidates < 1 || candidates * 2 > subspace_dim)
      throw ConfigError("candidate count must lie in [1, subspace_dim/2]");
  }
};

struct EigenResult {
  cplx value;
  std::optional<std::vector<cplx>> vector;
  double residual = 0.0;  // ||H v - value v|| / ||H||_inf
  bool degenerate = false;
  bool converged = false;
  bool iterative = false;
  int restarts = 0;
};

namespace detail {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline double norm_scale(double row_sum) { return row_sum > 0.0 ? row_sum : 1.0; }

/// Multiply the largest-modulus component to be real and positive and
/// normalise to unit length.
inline void fix_phase(std::vector<cplx>& v) {
  double nrm = 0.0;
  std::size_t imax = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    nrm += std::norm(v[i]);
    if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
  }
  if (nrm == 0.0) return;
  const cplx phase = std::conj(v[imax]) / std::abs(v[imax]) / std::sqrt(nrm);
  for (auto& x : v) x *= phase;
  v[imax] = cplx{v[imax].real(), 0.0};
}

template <LinearOperator Op>
double residual_norm(const Op& op, cplx value, std::span<const cplx> v) {
  std::vector<cplx> w(v.size());
  op.apply(v, w);
  double r = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) r += std::norm(w[i] - value * v[i]);
  return std::sqrt(r);
}

template <LinearOperator Op>
Mat to_dense(const Op& op) {
  const std::size_t n = op.dimension();
  Mat a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<cplx> e(n, cplx{}), col(n);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    op.apply(e, col);
    e[j] = 0.0;
    for (std::size_t i = 0; i < n; ++i) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
  }
  return a;
}

/// Givens pair (c, s) with [c s; -conj(s) c] [f; g] = [r; 0].
inline void givens(cplx f, cplx g, double& c, cplx& s) {
  if (g == cplx{}) {
    c = 1.0;
    s = 0.0;
  } else if (f == cplx{}) {
    c = 0.0;
    s = std::conj(g) / std::abs(g);
  } else {
    const double af = std::abs(f);
    const double d = std::hypot(af, std::abs(g));
    c = af / d;
    s = (f / af) * std::conj(g) / d;
  }
}

/// Swap diagonal entries i and i+1 of upper-triangular T, keeping
/// Q T Q^H invariant.
inline void swap_schur(Mat& T, Mat& Q, Eigen::Index i) {
  const Eigen::Index n = T.rows();
  const cplx t11 = T(i, i), t22 = T(i + 1, i + 1);
  double c;
  cplx s;
  givens(T(i, i + 1), t22 - t11, c, s);
  for (Eigen::Index col = i + 2; col < n; ++col) {
    const cplx x = T(i, col), y = T(i + 1, col);
    T(i, col) = c * x + s * y;
    T(i + 1, col) = c * y - std::conj(s) * x;
  }
  for (Eigen::Index row = 0; row < i; ++row) {
    const cplx x = T(row, i), y = T(row, i + 1);
    T(row, i) = c * x + std::conj(s) * y;
    T(row, i + 1) = c * y - s * x;
  }
  T(i, i) = t22;
  T(i + 1, i + 1) = t11;
  for (Eigen::Index row = 0; row < Q.rows(); ++row) {
    const cplx x = Q(row, i), y = Q(row, i + 1);
    Q(row, i) = c * x + std::conj(s) * y;
    Q(row, i + 1) = c * y - s * x;
  }
}

/// Move the `keep` diagonal entries of smallest real part to the front,
/// in ascending order of real part.
inline void sort_schur(Mat& T, Mat& Q, Eigen::Index keep) {
  const Eigen::Index n = T.rows();
  for (Eigen::Index p = 0; p < keep && p < n; ++p) {
    Eigen::Index best = p;
    for (Eigen::Index q = p + 1; q < n; ++q)
      if (T(q, q).real() < T(best, best).real()) best = q;
    for (Eigen::Index q = best; q > p; --q) swap_schur(T, Q, q - 1);
  }
}

inline std::vector<cplx> start_vector(std::size_t n, std::span<const cplx> warm) {
  std::mt19937_64 rng(0x5eed5eedULL);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cplx> v(n);
  for (auto& x : v) x = cplx{u(rng), u(rng)};
  if (warm.size() == n) {
    // Keep a small random admixture so states orthogonal to the previous
    // ground vector (other symmetry sectors) stay reachable.
    for (std::size_t i = 0; i < n; ++i) v[i] = warm[i] + 1e-3 * v[i] / std::sqrt(static_cast<double>(n));
  }
  return v;
}

template <LinearOperator Op>
EigenResult dense_min_real(const Op& op, const SolverConfig& cfg, bool want_vector) {
  Mat a = to_dense(op);
  const auto n = static_cast<lapack_int>(a.rows());
  Eigen::VectorXcd w(a.rows());
  Mat vr(want_vector ? a.rows() : 1, want_vector ? a.rows() : 1);
  const lapack_int info =
      LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', want_vector ? 'V' : 'N', n, reinterpret_cast<lapack_complex_double*>(a.data()),
                    n, reinterpret_cast<lapack_complex_double*>(w.data()), nullptr, 1,
                    reinterpret_cast<lapack_complex_double*>(vr.data()), want_vector ? n : 1);
  if (info != 0) throw SolverError("dense eigensolver failed (zgeev info " + std::to_string(info) + ")", INFINITY);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(w.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return w(x).real() < w(y).real(); });
  EigenResult r;
  r.value = w(order[0]);
  r.converged = true;
  if (order.size() > 1 && w(order[1]).real() - w(order[0]).real() < cfg.degeneracy_tol) r.degenerate = true;
  if (want_vector) {
    std::vector<cplx> v(static_cast<std::size_t>(a.rows()));
    for (Eigen::Index i = 0; i < a.rows(); ++i) v[static_cast<std::size_t>(i)] = vr(i, order[0]);
    fix_phase(v);
    r.residual = residual_norm(op, r.value, v) / norm_scale(op.max_abs_row_sum());
    r.vector = std::move(v);
  }
  return r;
}

template <LinearOperator Op>
EigenResult krylov_schur_min_real(const Op& op, const SolverConfig& cfg, bool want_vector,
                                  std::span<const cplx> warm) {
  const auto n = static_cast<Eigen::Index>(op.dimension());
  const double scale = norm_scale(op.max_abs_row_sum());
  const Eigen::Index m = std::min<Eigen::Index>(cfg.subspace_dim, n);
  const Eigen::Index nev = std::min<Eigen::Index>(cfg.candidates, m);
  const Eigen::Index keep = std::max<Eigen::Index>(nev + 1, m / 2);

  Mat V = Mat::Zero(n, m + 1);
  Mat H = Mat::Zero(m + 1, m);
  {
    auto v0 = start_vector(static_cast<std::size_t>(n), warm);
    Vec x = Eigen::Map<Vec>(v0.data(), n);
    V.col(0) = x / x.norm();
  }
  std::vector<cplx> in(static_cast<std::size_t>(n)), out(static_cast<std::size_t>(n));
  Eigen::Index k = 0;
  double best_residual = INFINITY;

  for (int restart = 0; restart <= cfg.max_restarts; ++restart) {
    Eigen::Index msize = m;
    for (Eigen::Index j = k; j < m; ++j) {
      Eigen::Map<Vec>(in.data(), n) = V.col(j);
      op.apply(in, out);
      Vec w = Eigen::Map<Vec>(out.data(), n);
      Vec h = Vec::Zero(j + 1);
      for (int pass = 0; pass < 2; ++pass) {
        const Vec c = V.leftCols(j + 1).adjoint() * w;
        w -= V.leftCols(j + 1) * c;
        h += c;
      }
      H.col(j).head(j + 1) = h;
      const double beta = w.norm();
      H(j + 1, j) = beta;
      if (beta < 1e-13 * scale) {
        // Invariant subspace: the projected eigenvalues are exact.
        msize = j + 1;
        H(j + 1, j) = 0.0;
        break;
      }
      V.col(j + 1) = w / beta;
    }

    const Mat S = H.topLeftCorner(msize, msize);
    Eigen::ComplexSchur<Mat> schur(S);
    Mat T = schur.matrixT();
    Mat Q = schur.matrixU();
    sort_schur(T, Q, std::min(keep, msize));

    // Ritz vectors of the leading Schur block; residual of x = V y is
    // |beta_m| |y_last|.
    const Eigen::Index want = std::min(nev, msize);
    Eigen::ComplexEigenSolver<Mat> tes(T.topLeftCorner(want, want), true);
    const Mat Y = Q.leftCols(want) * tes.eigenvectors();
    const cplx beta_m = H(msize, msize - 1);
    bool all_ok = true;
    std::vector<double> res(static_cast<std::size_t>(want));
    for (Eigen::Index i = 0; i < want; ++i) {
      res[static_cast<std::size_t>(i)] = std::abs(beta_m) * std::abs(Y(msize - 1, i)) / Y.col(i).norm() / scale;
      if (res[static_cast<std::size_t>(i)] > cfg.tol) all_ok = false;
    }
    best_residual = std::min(best_residual, res[0]);

    if (all_ok || msize < m) {
      EigenResult r;
      r.iterative = true;
      r.restarts = restart;
      const Eigen::VectorXcd vals = tes.eigenvalues();
      Eigen::Index ibest = 0;
      for (Eigen::Index i = 1; i < want; ++i)
        if (vals(i).real() < vals(ibest).real()) ibest = i;
      r.value = vals(ibest);
      for (Eigen::Index i = 0; i < want; ++i)
        if (i != ibest && vals(i).real() - r.value.real() < cfg.degeneracy_tol) r.degenerate = true;
      Vec x = V.leftCols(msize) * Y.col(ibest);
      x /= x.norm();
      std::vector<cplx> v(x.data(), x.data() + n);
      fix_phase(v);
      r.residual = residual_norm(op, r.value, v) / scale;
      r.converged = r.residual <= cfg.tol;
      if (!r.converged)
        throw SolverError("Krylov-Schur residual check failed after convergence", r.residual);
      if (want_vector) r.vector = std::move(v);
      return r;
    }

    // Thick restart on the `keep` leading Schur vectors.
    const Mat Vk = V.leftCols(m) * Q.leftCols(keep);
    V.leftCols(keep) = Vk;
    V.col(keep) = V.col(m);
    const Eigen::RowVectorXcd b = H(m, m - 1) * Q.row(m - 1).head(keep);
    H.setZero();
    H.topLeftCorner(keep, keep) = T.topLeftCorner(keep, keep);
    H.row(keep).head(keep) = b;
    k = keep;
  }
  throw SolverError("Krylov-Schur did not converge within max_restarts", best_residual);
}

}  // namespace detail

/// Eigenvalue of smallest real part and, on request, its unit right
/// eigenvector with the largest-modulus component real and positive.
/// `warm` optionally seeds the iterative path with a previous vector.
template <LinearOperator Op>
EigenResult min_real_eigenpair(const Op& op, const SolverConfig& cfg = {}, bool want_vector = false,
                               std::span<const cplx> warm = {}) {
  cfg.validate();
  if (op.dimension() == 0) throw ConfigError("operator has dimension zero");
  if (!cfg.force_iterative && op.dimension() <= cfg.dense_cutoff)
    return detail::dense_min_real(op, cfg, want_vector);
  return detail::krylov_schur_min_real(op, cfg, want_vector, warm);
}

/// Parity block H(h) = B - h M with the bond part B stored once and the
/// magnetisation M kept as a diagonal. Cheap to re-evaluate at new h.
class SectorModel {
 public:
  SectorModel(const LatticeSpec& lattice, double J, Parity parity) : parity_(parity) {
    lattice.validate();
    const auto block = build_sector_hamiltonian(lattice, ModelParams{J, cplx{}}, parity);
    bonds_ = block.op;
    states_ = block.states;
    mag_.resize(states_.size());
    const int n = lattice.sites();
    for (std::size_t i = 0; i < states_.size(); ++i) mag_[i] = magnetization(states_[i], n);
    bond_row_sum_ = bonds_.max_abs_row_sum();
    max_mag_ = static_cast<double>(n);
  }

  class View {
   public:
    View(const SectorModel& m, cplx h) : m_(&m), h_(h) {}
    std::size_t dimension() const { return m_->bonds_.dimension(); }
    void apply(std::span<const cplx> in, std::span<cplx> out) const {
      m_->bonds_.apply(in, out);
      for (std::size_t i = 0; i < in.size(); ++i) out[i] -= h_ * m_->mag_[i] * in[i];
    }
    double max_abs_row_sum() const { return m_->bond_row_sum_ + std::abs(h_) * m_->max_mag_; }

   private:
    const SectorModel* m_;
    cplx h_;
  };

  View at(cplx h) const { return View(*this, h); }
  Parity parity() const { return parity_; }
  const std::vector<State>& states() const { return states_; }
  std::size_t dimension() const { return states_.size(); }

 private:
  Parity parity_;
  SparseOperator bonds_;
  std::vector<State> states_;
  std::vector<double> mag_;
  double bond_row_sum_ = 0.0;
  double max_mag_ = 0.0;
};

struct SectorGround {
  EigenResult even;
  EigenResult odd;
  const EigenResult& operator[](Parity p) const { return p == Parity::Even ? even : odd; }
};

/// Both parity blocks of H(lattice, params), solved independently.
inline SectorGround ground_by_sector(const LatticeSpec& lattice, const ModelParams& params,
                                    const SolverConfig& cfg = {}, bool want_vector = false) {
  params.validate();
  SectorGround out;
  for (Parity p : {Parity::Even, Parity::Odd}) {
    const SectorModel model(lattice, params.J, p);
    try {
      (p == Parity::Even ? out.even : out.odd) = min_real_eigenpair(model.at(params.h), cfg, want_vector);
    } catch (const SolverError& e) {
      throw SolverError(std::string(parity_name(p)) + " sector: " + e.what(), e.best_residual());
    }
  }
  return out;
}

/// |<v_ref|v>| of two unit vectors.
inline double fidelity_numeric(std::span<const cplx> v, std::span<const cplx> v_ref) {
  if (v.size() != v_ref.size()) throw ConfigError("fidelity of vectors with different dimensions");
  cplx acc{};
  for (std::size_t i = 0; i < v.size(); ++i) acc += std::conj(v_ref[i]) * v[i];
  return std::abs(acc);
}

/// Embed a block vector into the full 2^N space.
inline std::vector<cplx> embed(std::span<const cplx> v, const std::vector<State>& states, int n_sites) {
  std::vector<cplx> full(std::size_t{1} << n_sites, cplx{});
  for (std::size_t i = 0; i < v.size(); ++i) full[states[i]] = v[i];
  return full;
}

/// Little-endian dump: uint64 dimension, then re, im doubles per entry.
inline void write_eigenvector(std::ostream& os, std::span<const cplx> v) {
  auto put = [&os](auto value) {
    unsigned char bytes[sizeof(value)];
    std::memcpy(bytes, &value, sizeof(value));
    if constexpr (std::endian::native == std::endian::big) std::reverse(std::begin(bytes), std::end(bytes));
    os.write(reinterpret_cast<const char*>(bytes), sizeof(bytes));
  };
  put(static_cast<std::uint64_t>(v.size()));
  for (const cplx& x : v) {
    put(x.real());
    put(x.imag());
  }
}

}  // namespace fzero

#endif  // FZERO_EIGENSOLVER_HPP
