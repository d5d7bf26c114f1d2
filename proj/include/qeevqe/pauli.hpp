#pragma once

#include <complex>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace qeevqe {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using SparseComplexMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char to_char(Pauli p);

inline constexpr double kDefaultSimplifyTolerance = 1e-12;
inline constexpr std::size_t kDefaultDenseQubitCap = 14;
inline constexpr std::size_t kMaxPauliQubits = 64;

/// Tensor product of single-qubit Paulis. Qubit 0 is the least significant
/// tensor factor, matching little-endian basis indices.
///
/// Stored in symplectic form: letter = X^x Z^z up to the phase i^{x&z},
/// so that Y = i X Z.
class PauliString {
 public:
  explicit PauliString(std::size_t n_qubits = 0);

  /// Letters are written qubit (n-1) first, qubit 0 last: "IXZI".
  static PauliString from_letters(std::string_view letters);
  static PauliString single(std::size_t n_qubits, std::size_t qubit, Pauli p);
  static PauliString from_masks(std::size_t n_qubits, std::uint64_t x_mask, std::uint64_t z_mask);

  std::size_t n_qubits() const { return n_qubits_; }
  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }

  Pauli at(std::size_t qubit) const;
  void set(std::size_t qubit, Pauli p);
  bool is_identity() const { return x_ == 0 && z_ == 0; }
  std::size_t weight() const;
  std::string letters() const;

  /// P|basis> = phase |new_basis>.
  std::pair<Complex, std::uint64_t> apply_to_basis(std::uint64_t basis) const;

  friend bool operator==(const PauliString&, const PauliString&) = default;
  friend std::strong_ordering operator<=>(const PauliString& a, const PauliString& b) {
    if (auto c = a.n_qubits_ <=> b.n_qubits_; c != 0) return c;
    if (auto c = a.x_ <=> b.x_; c != 0) return c;
    return a.z_ <=> b.z_;
  }

 private:
  std::size_t n_qubits_;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
};

struct PauliProduct {
  Complex phase;
  PauliString product;
};

/// a * b = phase * product, with phase in {1, -1, i, -i}.
PauliProduct pauli_mul(const PauliString& a, const PauliString& b);

/// Weighted sum of Pauli strings on a fixed number of qubits. Terms are kept
/// in a sorted map so iteration order (and therefore serialization) is
/// deterministic.
class PauliSum {
 public:
  using TermMap = std::map<PauliString, Complex>;

  explicit PauliSum(std::size_t n_qubits);

  static PauliSum identity(std::size_t n_qubits, Complex coeff = 1.0);
  static PauliSum term(const PauliString& s, Complex coeff = 1.0);

  std::size_t n_qubits() const { return n_qubits_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  /// Accumulates into an existing entry for the same string.
  void add(const PauliString& s, Complex coeff);
  Complex coefficient(const PauliString& s) const;

  PauliSum& operator+=(const PauliSum& other);
  PauliSum& operator-=(const PauliSum& other);
  PauliSum& operator*=(Complex scalar);

  friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
  friend PauliSum operator-(PauliSum a, const PauliSum& b) { return a -= b; }
  friend PauliSum operator*(PauliSum a, Complex s) { return a *= s; }
  friend PauliSum operator*(Complex s, PauliSum a) { return a *= s; }
  friend PauliSum operator*(const PauliSum& a, const PauliSum& b);

  /// Drops terms with |coefficient| <= tol. Like terms are always combined.
  PauliSum simplify(double tol = kDefaultSimplifyTolerance) const;

  PauliSum adjoint() const;

  /// Pauli strings are Hermitian, so the sum is Hermitian iff all
  /// coefficients are real.
  bool is_hermitian(double tol = kDefaultSimplifyTolerance) const;

  ComplexMatrix to_matrix(std::size_t cap = kDefaultDenseQubitCap) const;
  SparseComplexMatrix to_sparse(std::size_t cap = 20) const;

  /// `# QUBITS <n>` header, then one line per term: `<re> <im> <letters>`.
  std::string to_text() const;
  static PauliSum from_text(std::string_view text);

 private:
  std::size_t n_qubits_;
  TermMap terms_;
};

bool is_hermitian(const PauliSum& s, double tol = kDefaultSimplifyTolerance);

}  // namespace qeevqe
