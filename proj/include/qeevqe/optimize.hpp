#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace qeevqe {

struct MinimizeConfig {
  double grad_tol = 1e-8;  // max-norm
  double f_tol = 1e-10;    // objective change over one iteration
  std::size_t max_evals = 20000;
};

enum class StopReason { kGradient, kObjectiveChange, kLineSearch, kMaxEvaluations };

std::string to_string(StopReason r);

struct MinimizeResult {
  std::vector<double> x;
  double f = 0.0;
  std::size_t evaluations = 0;
  std::size_t iterations = 0;
  bool converged = false;
  StopReason reason = StopReason::kMaxEvaluations;
  double initial_gradient_norm = 0.0;
  double final_gradient_norm = 0.0;
  /// (evaluation index, objective) for every evaluation, 1-based.
  std::vector<std::pair<std::size_t, double>> history;
};

/// Returns f(x) and writes the gradient into `grad`.
using Objective = std::function<double(const std::vector<double>& x, std::vector<double>& grad)>;

/// BFGS with a strong-Wolfe line search. Returns the best point evaluated.
/// A non-finite objective or gradient aborts with NumericalError.
MinimizeResult minimize(const Objective& f, std::vector<double> x0, const MinimizeConfig& config = {});

}  // namespace qeevqe
