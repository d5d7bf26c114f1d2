#include "qeevqe/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include <Eigen/Dense>

#include "qeevqe/errors.hpp"

namespace qeevqe {

namespace {

using Vec = Eigen::VectorXd;

constexpr double kArmijo = 1e-4;
constexpr double kCurvature = 0.9;
constexpr int kMaxBracketSteps = 40;
constexpr int kMaxZoomSteps = 40;

struct Point {
  Vec x;
  double f = 0.0;
  Vec g;
};

struct BudgetExhausted {};

class Evaluator {
 public:
  Evaluator(const Objective& f, const MinimizeConfig& config, MinimizeResult& result)
      : f_(f), config_(config), result_(result) {}

  Point operator()(const Vec& x) {
    if (result_.evaluations >= config_.max_evals) throw BudgetExhausted{};
    buffer_x_.assign(x.data(), x.data() + x.size());
    buffer_g_.assign(static_cast<std::size_t>(x.size()), 0.0);
    const double fx = f_(buffer_x_, buffer_g_);
    ++result_.evaluations;
    if (!std::isfinite(fx)) {
      throw NumericalError("objective is not finite at evaluation " + std::to_string(result_.evaluations));
    }
    Point p{x, fx, Eigen::Map<const Vec>(buffer_g_.data(), x.size())};
    if (!p.g.allFinite()) {
      throw NumericalError("gradient is not finite at evaluation " + std::to_string(result_.evaluations));
    }
    result_.history.emplace_back(result_.evaluations, fx);
    if (!best_ || fx < best_->f) best_ = p;
    return p;
  }

  const std::optional<Point>& best() const { return best_; }

 private:
  const Objective& f_;
  const MinimizeConfig& config_;
  MinimizeResult& result_;
  std::vector<double> buffer_x_;
  std::vector<double> buffer_g_;
  std::optional<Point> best_;
};

// Minimizer of the cubic through (a0, f0, d0) and (a1, f1, d1), or the
// midpoint when it is undefined or too close to an end.
double cubic_step(double a0, double f0, double d0, double a1, double f1, double d1) {
  const double lo = std::min(a0, a1);
  const double hi = std::max(a0, a1);
  const double mid = 0.5 * (a0 + a1);
  const double d1p = d0 + d1 - 3.0 * (f0 - f1) / (a0 - a1);
  const double disc = d1p * d1p - d0 * d1;
  if (disc < 0.0) return mid;
  const double d2 = std::copysign(std::sqrt(disc), a1 - a0);
  const double denom = d1 - d0 + 2.0 * d2;
  if (denom == 0.0) return mid;
  const double a = a1 - (a1 - a0) * (d1 + d2 - d1p) / denom;
  const double margin = 0.1 * (hi - lo);
  if (!std::isfinite(a) || a < lo + margin || a > hi - margin) return mid;
  return a;
}

// Strong-Wolfe line search along d. Returns nothing if no point with a
// lower objective was found.
std::optional<Point> line_search(Evaluator& eval, const Point& start, const Vec& d, double alpha) {
  const double dphi0 = start.g.dot(d);
  const auto wolfe_ok = [&](const Point& p) { return std::abs(p.g.dot(d)) <= -kCurvature * dphi0; };
  const auto armijo_ok = [&](double a, const Point& p) { return p.f <= start.f + kArmijo * a * dphi0; };

  const auto zoom = [&](double a_lo, Point p_lo, double a_hi, Point p_hi) -> std::optional<Point> {
    for (int j = 0; j < kMaxZoomSteps; ++j) {
      const double a =
          cubic_step(a_lo, p_lo.f, p_lo.g.dot(d), a_hi, p_hi.f, p_hi.g.dot(d));
      if (std::abs(a_hi - a_lo) <= 1e-14 * std::max(1.0, std::abs(a_lo))) break;
      Point p = eval(start.x + a * d);
      if (!armijo_ok(a, p) || p.f >= p_lo.f) {
        a_hi = a;
        p_hi = std::move(p);
      } else {
        if (wolfe_ok(p)) return p;
        if (p.g.dot(d) * (a_hi - a_lo) >= 0.0) {
          a_hi = a_lo;
          p_hi = p_lo;
        }
        a_lo = a;
        p_lo = std::move(p);
      }
    }
    if (a_lo > 0.0 && p_lo.f < start.f) return p_lo;
    return std::nullopt;
  };

  double a_prev = 0.0;
  Point p_prev = start;
  for (int i = 0; i < kMaxBracketSteps; ++i) {
    Point p = eval(start.x + alpha * d);
    if (!armijo_ok(alpha, p) || (i > 0 && p.f >= p_prev.f)) return zoom(a_prev, p_prev, alpha, p);
    if (wolfe_ok(p)) return p;
    if (p.g.dot(d) >= 0.0) return zoom(alpha, p, a_prev, p_prev);
    a_prev = alpha;
    p_prev = std::move(p);
    alpha *= 2.0;
  }
  if (p_prev.f < start.f) return p_prev;
  return std::nullopt;
}

}  // namespace

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::kGradient: return "gradient";
    case StopReason::kObjectiveChange: return "objective_change";
    case StopReason::kLineSearch: return "line_search";
    default: return "max_evaluations";
  }
}

MinimizeResult minimize(const Objective& f, std::vector<double> x0, const MinimizeConfig& config) {
  MinimizeResult result;
  Evaluator eval(f, config, result);
  const auto n = static_cast<Eigen::Index>(x0.size());
  Point current;
  try {
    current = eval(Eigen::Map<const Vec>(x0.data(), n));
    result.initial_gradient_norm = n > 0 ? current.g.lpNorm<Eigen::Infinity>() : 0.0;
    if (result.initial_gradient_norm <= config.grad_tol) {
      result.reason = StopReason::kGradient;
    } else {
      Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(n, n);
      bool identity_hessian = true;
      bool first = true;
      while (true) {
        Vec d = -hinv * current.g;
        if (current.g.dot(d) >= 0.0) {
          hinv.setIdentity();
          identity_hessian = true;
          d = -current.g;
        }
        const double alpha0 = first ? std::min(1.0, 1.0 / current.g.lpNorm<Eigen::Infinity>()) : 1.0;
        std::optional<Point> next = line_search(eval, current, d, alpha0);
        if (!next && !identity_hessian) {
          hinv.setIdentity();
          identity_hessian = true;
          d = -current.g;
          next = line_search(eval, current, d, std::min(1.0, 1.0 / current.g.lpNorm<Eigen::Infinity>()));
        }
        if (!next) {
          result.reason = StopReason::kLineSearch;
          break;
        }
        const Vec s = next->x - current.x;
        const Vec y = next->g - current.g;
        const double change = std::abs(current.f - next->f);
        current = std::move(*next);
        ++result.iterations;

        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
          if (first) hinv *= sy / y.squaredNorm();
          const double rho = 1.0 / sy;
          const Vec hy = hinv * y;
          const double yhy = y.dot(hy);
          hinv.noalias() -= rho * (hy * s.transpose() + s * hy.transpose());
          hinv.noalias() += (rho * rho * yhy + rho) * (s * s.transpose());
          identity_hessian = false;
        }
        first = false;

        if (current.g.lpNorm<Eigen::Infinity>() <= config.grad_tol) {
          result.reason = StopReason::kGradient;
          break;
        }
        if (change <= config.f_tol) {
          result.reason = StopReason::kObjectiveChange;
          break;
        }
      }
    }
    result.converged = true;
  } catch (const BudgetExhausted&) {
    result.reason = StopReason::kMaxEvaluations;
    result.converged = false;
  }
  if (const auto& best = eval.best()) {
    result.x.assign(best->x.data(), best->x.data() + best->x.size());
    result.f = best->f;
    result.final_gradient_norm = n > 0 ? best->g.lpNorm<Eigen::Infinity>() : 0.0;
  } else {
    result.x = std::move(x0);
  }
  return result;
}

}  // namespace qeevqe
