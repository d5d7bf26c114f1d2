#include "qeevqe/pauli.hpp"

#include <bit>
#include <optional>
#include <cstdio>
#include <sstream>
#include <vector>

#include "qeevqe/errors.hpp"

namespace qeevqe {

namespace {

// i^k for k mod 4.
Complex i_pow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

std::uint64_t qubit_mask(std::size_t n) {
  return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

void check_qubits(std::size_t n) {
  if (n > kMaxPauliQubits) {
    throw ResourceError("Pauli strings support at most " + std::to_string(kMaxPauliQubits) +
                        " qubits, got " + std::to_string(n));
  }
}

void check_dense_cap(std::size_t n, std::size_t cap) {
  if (n > cap) {
    throw ResourceError("matrix realization of " + std::to_string(n) +
                        " qubits exceeds the cap of " + std::to_string(cap));
  }
}

}  // namespace

char to_char(Pauli p) {
  static constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
  return kLetters[static_cast<int>(p)];
}

PauliString::PauliString(std::size_t n_qubits) : n_qubits_(n_qubits) { check_qubits(n_qubits); }

PauliString PauliString::from_letters(std::string_view letters) {
  PauliString s(letters.size());
  const std::size_t n = letters.size();
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t q = n - 1 - k;
    switch (letters[k]) {
      case 'I': break;
      case 'X': s.set(q, Pauli::X); break;
      case 'Y': s.set(q, Pauli::Y); break;
      case 'Z': s.set(q, Pauli::Z); break;
      default:
        throw ValidationError(std::string("invalid Pauli letter '") + letters[k] + "'");
    }
  }
  return s;
}

PauliString PauliString::single(std::size_t n_qubits, std::size_t qubit, Pauli p) {
  PauliString s(n_qubits);
  s.set(qubit, p);
  return s;
}

PauliString PauliString::from_masks(std::size_t n_qubits, std::uint64_t x_mask, std::uint64_t z_mask) {
  PauliString s(n_qubits);
  if ((x_mask | z_mask) & ~qubit_mask(n_qubits)) {
    throw DimensionError("Pauli mask has bits beyond qubit " + std::to_string(n_qubits - 1));
  }
  s.x_ = x_mask;
  s.z_ = z_mask;
  return s;
}

Pauli PauliString::at(std::size_t qubit) const {
  if (qubit >= n_qubits_) throw DimensionError("qubit index out of range");
  const bool x = (x_ >> qubit) & 1U;
  const bool z = (z_ >> qubit) & 1U;
  if (x && z) return Pauli::Y;
  if (x) return Pauli::X;
  if (z) return Pauli::Z;
  return Pauli::I;
}

void PauliString::set(std::size_t qubit, Pauli p) {
  if (qubit >= n_qubits_) throw DimensionError("qubit index out of range");
  const std::uint64_t bit = std::uint64_t{1} << qubit;
  x_ &= ~bit;
  z_ &= ~bit;
  if (p == Pauli::X || p == Pauli::Y) x_ |= bit;
  if (p == Pauli::Z || p == Pauli::Y) z_ |= bit;
}

std::size_t PauliString::weight() const { return static_cast<std::size_t>(std::popcount(x_ | z_)); }

std::string PauliString::letters() const {
  std::string out(n_qubits_, 'I');
  for (std::size_t q = 0; q < n_qubits_; ++q) out[n_qubits_ - 1 - q] = to_char(at(q));
  return out;
}

std::pair<Complex, std::uint64_t> PauliString::apply_to_basis(std::uint64_t basis) const {
  const int k = std::popcount(x_ & z_) + 2 * std::popcount(z_ & basis);
  return {i_pow(k), basis ^ x_};
}

PauliProduct pauli_mul(const PauliString& a, const PauliString& b) {
  if (a.n_qubits() != b.n_qubits()) {
    throw DimensionError("pauli_mul: qubit counts differ (" + std::to_string(a.n_qubits()) + " vs " +
                         std::to_string(b.n_qubits()) + ")");
  }
  // X^x1 Z^z1 X^x2 Z^z2 = (-1)^{|z1 & x2|} X^{x1^x2} Z^{z1^z2}
  const std::uint64_t x = a.x_mask() ^ b.x_mask();
  const std::uint64_t z = a.z_mask() ^ b.z_mask();
  const int k = std::popcount(a.x_mask() & a.z_mask()) + std::popcount(b.x_mask() & b.z_mask()) -
                std::popcount(x & z) + 2 * std::popcount(a.z_mask() & b.x_mask());
  return {i_pow(k), PauliString::from_masks(a.n_qubits(), x, z)};
}

PauliSum::PauliSum(std::size_t n_qubits) : n_qubits_(n_qubits) { check_qubits(n_qubits); }

PauliSum PauliSum::identity(std::size_t n_qubits, Complex coeff) {
  PauliSum s(n_qubits);
  s.add(PauliString(n_qubits), coeff);
  return s;
}

PauliSum PauliSum::term(const PauliString& str, Complex coeff) {
  PauliSum s(str.n_qubits());
  s.add(str, coeff);
  return s;
}

void PauliSum::add(const PauliString& s, Complex coeff) {
  if (s.n_qubits() != n_qubits_) throw DimensionError("PauliSum::add: qubit count mismatch");
  terms_[s] += coeff;
}

Complex PauliSum::coefficient(const PauliString& s) const {
  auto it = terms_.find(s);
  return it == terms_.end() ? Complex{} : it->second;
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
  if (other.n_qubits_ != n_qubits_) throw DimensionError("PauliSum: qubit count mismatch");
  for (const auto& [s, c] : other.terms_) terms_[s] += c;
  return *this;
}

PauliSum& PauliSum::operator-=(const PauliSum& other) {
  if (other.n_qubits_ != n_qubits_) throw DimensionError("PauliSum: qubit count mismatch");
  for (const auto& [s, c] : other.terms_) terms_[s] -= c;
  return *this;
}

PauliSum& PauliSum::operator*=(Complex scalar) {
  for (auto& [s, c] : terms_) c *= scalar;
  return *this;
}

PauliSum operator*(const PauliSum& a, const PauliSum& b) {
  if (a.n_qubits_ != b.n_qubits_) throw DimensionError("PauliSum: qubit count mismatch");
  PauliSum out(a.n_qubits_);
  for (const auto& [sa, ca] : a.terms_) {
    for (const auto& [sb, cb] : b.terms_) {
      const auto [phase, prod] = pauli_mul(sa, sb);
      out.terms_[prod] += phase * ca * cb;
    }
  }
  return out;
}

PauliSum PauliSum::simplify(double tol) const {
  PauliSum out(n_qubits_);
  for (const auto& [s, c] : terms_) {
    if (std::abs(c) > tol) out.terms_.emplace(s, c);
  }
  return out;
}

PauliSum PauliSum::adjoint() const {
  PauliSum out(n_qubits_);
  for (const auto& [s, c] : terms_) out.terms_.emplace(s, std::conj(c));
  return out;
}

bool PauliSum::is_hermitian(double tol) const {
  for (const auto& [s, c] : terms_) {
    if (std::abs(c.imag()) > tol) return false;
  }
  return true;
}

bool is_hermitian(const PauliSum& s, double tol) { return s.is_hermitian(tol); }

ComplexMatrix PauliSum::to_matrix(std::size_t cap) const {
  check_dense_cap(n_qubits_, cap);
  const std::uint64_t dim = std::uint64_t{1} << n_qubits_;
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const auto& [s, c] : terms_) {
    for (std::uint64_t col = 0; col < dim; ++col) {
      const auto [phase, row] = s.apply_to_basis(col);
      m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) += c * phase;
    }
  }
  return m;
}

SparseComplexMatrix PauliSum::to_sparse(std::size_t cap) const {
  check_dense_cap(n_qubits_, cap);
  const std::uint64_t dim = std::uint64_t{1} << n_qubits_;
  // Terms sharing an X pattern fill the same permutation pattern
  // row = col ^ x, so accumulate them column-wise before emitting.
  std::map<std::uint64_t, std::vector<Complex>> by_x;
  for (const auto& [s, c] : terms_) {
    auto& acc = by_x[s.x_mask()];
    if (acc.empty()) acc.assign(dim, Complex{});
    for (std::uint64_t col = 0; col < dim; ++col) acc[col] += c * s.apply_to_basis(col).first;
  }
  std::vector<Eigen::Triplet<Complex>> triplets;
  for (const auto& [x, acc] : by_x) {
    for (std::uint64_t col = 0; col < dim; ++col) {
      if (acc[col] != Complex{}) triplets.emplace_back(static_cast<int>(col ^ x), static_cast<int>(col), acc[col]);
    }
  }
  SparseComplexMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

std::string PauliSum::to_text() const {
  std::string out = "# QUBITS " + std::to_string(n_qubits_) + "\n";
  char buf[64];
  for (const auto& [s, c] : terms_) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g ", c.real(), c.imag());
    out += buf;
    out += s.letters();
    out += '\n';
  }
  return out;
}

PauliSum PauliSum::from_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  std::optional<PauliSum> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string key;
      std::size_t n = 0;
      if (hs >> key >> n && key == "QUBITS") {
        if (out && out->n_qubits() != n) throw ParseError("header disagrees with earlier terms", line_no);
        if (!out) out.emplace(n);
      }
      continue;
    }
    std::istringstream ls(line);
    double re = 0.0;
    double im = 0.0;
    std::string letters;
    if (!(ls >> re >> im)) throw ParseError("expected `<re> <im> <letters>`", line_no);
    ls >> letters;  // empty for a zero-qubit operator
    PauliString s(0);
    try {
      s = PauliString::from_letters(letters);
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no);
    }
    if (!out) out.emplace(s.n_qubits());
    if (s.n_qubits() != out->n_qubits()) throw ParseError("inconsistent qubit count", line_no);
    out->add(s, {re, im});
  }
  if (!out) throw ParseError("no Pauli terms found", line_no);
  return *out;
}

}  // namespace qeevqe
