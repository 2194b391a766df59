#ifndef FZERO_TESTS_DENSE_ORACLE_HPP
#define FZERO_TESTS_DENSE_ORACLE_HPP

// Dense reference diagonalisation shared by the unit and acceptance tests.

#include <Eigen/Dense>

#include <algorithm>
#include <limits>
#include <vector>

#include "fzero/lattice.hpp"

namespace fzero::testing {

inline Eigen::MatrixXcd dense(const SparseOperator& op) {
  const auto n = static_cast<Eigen::Index>(op.dimension());
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) a(i, i) = op.diagonal()[static_cast<std::size_t>(i)];
  for (const auto& t : op.off_diagonal())
    a(static_cast<Eigen::Index>(t.row), static_cast<Eigen::Index>(t.col)) += t.value;
  return a;
}

inline std::vector<cplx> spectrum(const SparseOperator& op) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(dense(op), false);
  std::vector<cplx> w(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return w;
}

inline cplx min_real(const std::vector<cplx>& w) {
  return *std::min_element(w.begin(), w.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
}

/// Largest distance of a greedy nearest-neighbour matching between two
/// multisets; infinity when the sizes differ.
inline double multiset_distance(std::vector<cplx> a, std::vector<cplx> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (cplx x : a) {
    std::size_t best = b.size();
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j)
      if (!used[j] && std::abs(x - b[j]) < d) {
        d = std::abs(x - b[j]);
        best = j;
      }
    used[best] = true;
    worst = std::max(worst, d);
  }
  return worst;
}

/// Right eigenvector of smallest real part, unit norm.
inline Eigen::VectorXcd min_real_vector(const SparseOperator& op, cplx* value = nullptr) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(dense(op), true);
  Eigen::Index k = 0;
  for (Eigen::Index i = 1; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i).real() < es.eigenvalues()(k).real()) k = i;
  if (value) *value = es.eigenvalues()(k);
  return es.eigenvectors().col(k).normalized();
}

}  // namespace fzero::testing

#endif  // FZERO_TESTS_DENSE_ORACLE_HPP
