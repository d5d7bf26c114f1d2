#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "qeevqe/encode.hpp"
#include "qeevqe/pauli.hpp"

namespace qeevqe {

enum class GateKind : std::uint8_t { kRy, kCnot, kX };

/// For kRy and kX `qubit` is the target; for kCnot `qubit` is the control
/// and `target` the target. `param` is meaningful only for kRy.
struct Gate {
  GateKind kind = GateKind::kRy;
  std::size_t qubit = 0;
  std::size_t target = 0;
  std::size_t param = 0;

  friend bool operator==(const Gate&, const Gate&) = default;
};

enum class AnsatzKind { kStaggered, kChain };

std::string to_string(AnsatzKind kind);
AnsatzKind ansatz_from_string(std::string_view s);

class Circuit {
 public:
  explicit Circuit(std::size_t n_qubits = 0);

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t n_params() const { return n_params_; }
  const std::vector<Gate>& gates() const { return gates_; }

  /// Parameter indices must be introduced in order 0, 1, 2, ... (reuse allowed).
  void add_ry(std::size_t qubit, std::size_t param);
  void add_cnot(std::size_t control, std::size_t target);
  void add_x(std::size_t qubit);

  std::size_t count(GateKind kind) const;

  std::optional<AnsatzKind> ansatz() const { return ansatz_; }
  std::size_t layers() const { return layers_; }
  void set_ansatz(AnsatzKind kind, std::size_t layers) {
    ansatz_ = kind;
    layers_ = layers;
  }

  /// Header `QUBITS <Q> PARAMS <P>`, then `RY q p` / `CNOT c t` / `X q` lines.
  std::string to_text() const;
  static Circuit from_text(std::string_view text);

 private:
  void check_qubit(std::size_t q) const;

  std::size_t n_qubits_;
  std::size_t n_params_ = 0;
  std::vector<Gate> gates_;
  std::optional<AnsatzKind> ansatz_;
  std::size_t layers_ = 0;
};

/// Layered Ry + CNOT ansatz with alternating pairings: odd layers entangle
/// (0,1)(2,3)..., even layers (1,2)(3,4)...(n-1,0). A final Ry rank follows
/// the last layer.
Circuit build_staggered_ansatz(std::size_t n_qubits, std::size_t layers);

/// Ry rank followed by the CNOT ladder (0,1)(1,2)...(n-2,n-1) per layer.
Circuit build_chain_ansatz(std::size_t n_qubits, std::size_t layers);

Circuit build_ansatz(AnsatzKind kind, std::size_t n_qubits, std::size_t layers);

using StateVector = Eigen::VectorXcd;
using RealStateVector = Eigen::VectorXd;
using RealSparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

StateVector basis_state(std::size_t n_qubits, std::uint64_t index);

/// Ry(t) = [[cos t/2, -sin t/2], [sin t/2, cos t/2]].
StateVector simulate_statevector(const Circuit& c, const std::vector<double>& params, std::uint64_t initial);
StateVector simulate_statevector(const Circuit& c, const std::vector<double>& params, StateVector initial);

/// <s|H|s>. Throws NumericalError if the imaginary part reaches 1e-10.
double expectation(const StateVector& s, const QubitOperator& h);
double expectation(const StateVector& s, const SparseComplexMatrix& h);

/// Exact Pauli expectation values estimated from `shots` binomial samples
/// per term. Identity terms are exact.
double sampled_expectation(const StateVector& s, const PauliSum& h, std::size_t shots, std::uint64_t seed);

/// Real part of a Hermitian operator. For real states <s|H|s> = s^T Re(H) s
/// since Im(H) is antisymmetric.
RealSparseMatrix real_part(const SparseComplexMatrix& h);

/// Energy and gradient of <0|X(prep)^T U(t)^T H U(t) X(prep)|0> on real
/// amplitudes. The ansatz gates keep every amplitude real.
class EnergyEvaluator {
 public:
  EnergyEvaluator(const QubitOperator& h, Circuit circuit, std::uint64_t prep);

  const Circuit& circuit() const { return circuit_; }
  std::uint64_t prep() const { return prep_; }

  double energy(const std::vector<double>& params) const;
  RealStateVector state(const std::vector<double>& params) const;

  /// Reverse-mode gradient (one forward and one backward sweep).
  double energy_and_gradient(const std::vector<double>& params, std::vector<double>& grad) const;

  /// dE/dt_i = [E(t_i + pi/2) - E(t_i - pi/2)] / 2 per parameter.
  double parameter_shift_gradient(const std::vector<double>& params, std::vector<double>& grad) const;

 private:
  RealSparseMatrix h_;
  Circuit circuit_;
  std::uint64_t prep_;
};

/// Parameter-shift gradient of an arbitrary expectation functional over a
/// circuit whose parameters each drive exactly one Ry gate.
std::vector<double> parameter_shift(const std::function<double(const std::vector<double>&)>& f,
                                    const std::vector<double>& params);

}  // namespace qeevqe
