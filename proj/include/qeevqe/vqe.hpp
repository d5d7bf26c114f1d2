#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qeevqe/circuit.hpp"
#include "qeevqe/configspace.hpp"
#include "qeevqe/encode.hpp"
#include "qeevqe/optimize.hpp"

namespace qeevqe {

enum class InitKind { kHartreeFock, kGaussian };

std::string to_string(InitKind kind);
InitKind init_from_string(std::string_view s);

struct InitStrategy {
  InitKind kind = InitKind::kGaussian;
  double mean = 0.0;
  /// Gaussian spread. Read as a variance unless `spread_is_stddev`.
  double variance = 0.3;
  bool spread_is_stddev = false;
  std::uint64_t seed = 0;

  static InitStrategy hartree_fock() { return {InitKind::kHartreeFock, 0.0, 0.3, false, 0}; }
  static InitStrategy gaussian(std::uint64_t seed) { return {InitKind::kGaussian, 0.0, 0.3, false, seed}; }

  double stddev() const;
};

/// Basis index of the aufbau configuration of `set`.
std::uint64_t hf_reference_state(const ConfigurationSet& set);

std::vector<double> initialize_params(const InitStrategy& strategy, std::size_t n_params);

enum class GradientMethod { kAdjoint, kParameterShift };

struct VqeConfig {
  MinimizeConfig minimize;
  GradientMethod gradient = GradientMethod::kAdjoint;
  /// Exact ground energy; when set, results below it by more than 1e-9
  /// raise NumericalError.
  std::optional<double> reference_ground;
  /// Worker threads for layer_sweep; 0 reads QEEVQE_THREADS, falling back to
  /// the hardware concurrency.
  std::size_t threads = 0;
};

struct VqeResult {
  double energy = 0.0;
  double initial_energy = 0.0;
  std::vector<double> params;
  std::size_t evaluations = 0;
  bool converged = false;
  StopReason stop_reason = StopReason::kMaxEvaluations;
  std::vector<std::pair<std::size_t, double>> history;
  InitStrategy init;
  std::size_t layers = 0;
  std::optional<AnsatzKind> ansatz;
  std::uint64_t prep = 0;
  double initial_gradient_norm = 0.0;
  /// Gradient vanished at the start point, so the optimizer never moved.
  bool flat_start = false;

  std::string to_json() const;
};

/// Minimizes <prep| U(t)^T H U(t) |prep> over the circuit parameters.
VqeResult run_vqe(const QubitOperator& h, const Circuit& circuit, std::uint64_t prep, const InitStrategy& init,
                  const VqeConfig& config = {});

/// One best-of-restarts result per layer count. Restart i uses seed
/// init.seed + i; a Hartree-Fock start is deterministic and runs once.
std::vector<VqeResult> layer_sweep(const QubitOperator& h, AnsatzKind family, const std::vector<std::size_t>& layers,
                                   std::uint64_t prep, const InitStrategy& init, std::size_t n_restarts,
                                   const VqeConfig& config = {});

/// Number of worker threads to use given a requested count (0 = automatic).
std::size_t resolve_thread_count(std::size_t requested);

}  // namespace qeevqe
