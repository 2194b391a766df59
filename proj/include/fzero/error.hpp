#ifndef FZERO_ERROR_HPP
#define FZERO_ERROR_HPP

#include <stdexcept>
#include <string>

namespace fzero {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid lattice, model or scan configuration.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

/// A Bogoliubov mode with cos k == h/J; the angle is undefined there.
class DegenerateModeError : public Error {
 public:
  explicit DegenerateModeError(const std::string& msg) : Error(msg) {}
};

/// Iterative eigensolver did not reach its residual target.
class SolverError : public Error {
 public:
  SolverError(const std::string& msg, double best_residual)
      : Error(msg), best_residual_(best_residual) {}
  double best_residual() const { return best_residual_; }

 private:
  double best_residual_;
};

/// Least-squares problem without a unique solution, or non-finite input.
class FitError : public Error {
 public:
  explicit FitError(const std::string& msg) : Error(msg) {}
};

}  // namespace fzero

#endif  // FZERO_ERROR_HPP
