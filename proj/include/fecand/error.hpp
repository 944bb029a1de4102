#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fecand {

// Non-convergence of an iterative solve. Carries the residual history so
// callers can report it.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, std::vector<double> residuals)
      : std::runtime_error(what), residuals_(std::move(residuals)) {}

  const std::vector<double>& residuals() const { return residuals_; }
  double last_residual() const {
    return residuals_.empty() ? 0.0 : residuals_.back();
  }

 private:
  std::vector<double> residuals_;
};

}  // namespace fecand
