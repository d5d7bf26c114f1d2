#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "qeevqe/configspace.hpp"
#include "qeevqe/fermion.hpp"
#include "qeevqe/pauli.hpp"

namespace qeevqe {

enum class EncodingKind { kGeneric, kJordanWigner, kQubitEfficient };

std::string to_string(EncodingKind kind);
EncodingKind encoding_from_string(std::string_view s);

/// Operator on Q qubits, held as a Pauli sum, a sparse matrix, or both. The
/// two realizations always describe the same operator; whichever is missing
/// is computed on request.
///
/// For qubit-efficient operators, basis states [0, physical_dimension) are
/// the encoded configurations and the rest are padding.
class QubitOperator {
 public:
  static QubitOperator from_pauli(PauliSum sum, EncodingKind kind = EncodingKind::kGeneric);
  static QubitOperator from_sparse(std::size_t n_qubits, SparseComplexMatrix m,
                                   EncodingKind kind = EncodingKind::kGeneric);

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t dimension() const { return std::size_t{1} << n_qubits_; }
  EncodingKind kind() const { return kind_; }

  /// Number of leading basis states that carry physical configurations.
  std::size_t physical_dimension() const { return physical_dim_.value_or(dimension()); }
  void set_physical_dimension(std::size_t d);

  bool has_pauli() const { return pauli_.has_value(); }
  bool has_sparse() const { return sparse_.has_value(); }

  PauliSum to_pauli(std::size_t cap = kDefaultDenseQubitCap) const;
  SparseComplexMatrix to_sparse() const;
  ComplexMatrix to_dense(std::size_t cap = kDefaultDenseQubitCap) const;

  /// Materializes both realizations.
  QubitOperator& materialize(std::size_t cap = kDefaultDenseQubitCap);

 private:
  QubitOperator() = default;

  std::size_t n_qubits_ = 0;
  EncodingKind kind_ = EncodingKind::kGeneric;
  std::optional<std::size_t> physical_dim_;
  std::optional<PauliSum> pauli_;
  std::optional<SparseComplexMatrix> sparse_;
};

/// a+_p = 1/2 (X_p - i Y_p) Z_{p-1} ... Z_0
PauliSum jw_creation(std::size_t n_qubits, std::size_t p);
PauliSum jw_annihilation(std::size_t n_qubits, std::size_t p);

/// Jordan-Wigner image of the full Hamiltonian on N qubits, including
/// core_energy times the identity.
QubitOperator jw_encode(const IntegralTable& t);

/// Sparse image of E_pq on the qubit-efficient basis: sign at
/// (index(E_pq f_k), k) for every allowed transition.
QubitOperator qee_excitation(const ConfigurationSet& set, std::size_t p, std::size_t q);

/// Pauli decomposition of any operator via a Walsh-Hadamard transform per
/// X-pattern. Terms with |c| <= tol are dropped.
PauliSum qee_pauli_decompose(const QubitOperator& op, std::size_t cap = kDefaultDenseQubitCap, double tol = 1e-14);

/// Matrix of an excitation polynomial on the sector, in canonical member
/// order (|F| x |F|). The constant term is included on the diagonal.
SparseComplexMatrix excitation_sector_matrix(const ExcitationPolynomial& poly, const ConfigurationSet& set);

/// Qubit-efficient Hamiltonian on ceil(log2 |F|) qubits. The core energy
/// multiplies the projector onto the encoded subspace; padding states are
/// exact zeros.
QubitOperator qee_hamiltonian(const IntegralTable& t, const ConfigurationSet& set);

struct QubitCounts {
  std::size_t jw = 0;
  std::size_t qee = 0;
};

QubitCounts qubit_counts(std::size_t n_spin_orbitals, int n_alpha, int n_beta);

/// `row col re im` per stored entry, preceded by a `# QUBITS <Q> PHYSICAL <d>` line.
std::string to_coordinate_text(const QubitOperator& op);
QubitOperator from_coordinate_text(std::string_view text, EncodingKind kind = EncodingKind::kGeneric);

}  // namespace qeevqe
