#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qeevqe/circuit.hpp"
#include "qeevqe/encode.hpp"
#include "qeevqe/pauli.hpp"

namespace qeevqe {

using Matrix2c = Eigen::Matrix2cd;
using KrausSet = std::vector<Matrix2c>;

/// Zero-temperature relaxation for duration t_ns: amplitude damping with
/// p1 = 1 - exp(-t/T1) followed by a phase flip that brings the total
/// coherence decay to exp(-t/T2). Infinite T1/T2 disable the respective
/// process. PhysicalityError if T2 > 2 T1.
KrausSet thermal_kraus(double t1_ms, double t2_ms, double t_ns);

/// Max-norm deviation of sum K^dagger K from the identity.
double kraus_completeness_error(const KrausSet& k);

struct NoiseModel {
  /// Per-qubit relaxation times; +infinity means no relaxation.
  std::vector<double> t1_ms;
  std::vector<double> t2_ms;
  /// Gate kind -> duration. Keys: u1, u2, u3, cnot, reset, measure. Missing
  /// keys count as zero.
  std::map<std::string, double> durations_ns;
  /// Also relax qubits not touched by a gate, for that gate's duration.
  bool idle_noise = false;

  /// Published 8-qubit device tables used for the keto and enol noisy runs.
  static NoiseModel keto_device();
  static NoiseModel enol_device();
  static std::map<std::string, double> default_durations();

  double duration(std::string_view key) const;
  void validate(std::size_t n_qubits) const;

  /// JSON: {"t1_ms": [...], "t2_ms": [...], "durations_ns": {...}, "idle_noise": false}.
  /// null entries in t1_ms / t2_ms mean infinity. Absent durations_ns uses
  /// the default table.
  static NoiseModel from_json(std::string_view text);
  static NoiseModel read(const std::string& path);
  std::string to_json() const;
};

class DensityMatrix {
 public:
  explicit DensityMatrix(std::size_t n_qubits, std::uint64_t basis_index = 0);
  static DensityMatrix from_state(const StateVector& s);

  std::size_t n_qubits() const { return n_qubits_; }
  const ComplexMatrix& matrix() const { return rho_; }

  void apply_gate(const Gate& g, const std::vector<double>& params);
  /// rho -> sum K rho K^dagger on one qubit.
  void apply_channel(std::size_t qubit, const KrausSet& kraus);

  double trace() const;
  double purity() const;
  /// Throws NumericalError when Hermiticity, trace or positivity fail.
  void check_valid(double tol = 1e-10) const;

 private:
  std::size_t n_qubits_;
  ComplexMatrix rho_;
};

/// Runs the circuit from |initial><initial| under `model`: each gate's
/// unitary, then relaxation on its qubits for its duration (Ry and X count
/// as u3), then measurement-duration relaxation on every qubit.
DensityMatrix simulate_density(const Circuit& c, const std::vector<double>& params, const NoiseModel& model,
                               std::uint64_t initial);

struct NoisyEnergy {
  double raw = 0.0;
  double renormalized = 0.0;
  /// Population outside the encoded subspace.
  double leakage = 0.0;
};

/// raw = Re Tr(rho H); renormalized = Tr(P rho P H) / Tr(P rho P) with P the
/// projector onto the first physical_dimension basis states.
NoisyEnergy noisy_expectation(const DensityMatrix& rho, const QubitOperator& h);

}  // namespace qeevqe
