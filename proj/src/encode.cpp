#include "qeevqe/encode.hpp"

#include <bit>
#include <cstdio>
#include <map>
#include <sstream>
#include <vector>

#include "qeevqe/errors.hpp"

namespace qeevqe {

namespace {

Complex i_pow_conj(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
  }
}

// In-place Walsh-Hadamard transform: out[z] = sum_i (-1)^{popcount(z & i)} in[i].
void walsh_hadamard(std::vector<Complex>& v) {
  const std::size_t n = v.size();
  for (std::size_t h = 1; h < n; h <<= 1) {
    for (std::size_t i = 0; i < n; i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        const Complex a = v[j];
        const Complex b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
    }
  }
}

}  // namespace

std::string to_string(EncodingKind kind) {
  switch (kind) {
    case EncodingKind::kJordanWigner: return "jw";
    case EncodingKind::kQubitEfficient: return "qee";
    default: return "generic";
  }
}

EncodingKind encoding_from_string(std::string_view s) {
  if (s == "jw") return EncodingKind::kJordanWigner;
  if (s == "qee") return EncodingKind::kQubitEfficient;
  if (s == "generic") return EncodingKind::kGeneric;
  throw ConfigError("unknown encoding '" + std::string(s) + "' (expected qee or jw)");
}

// ---------------------------------------------------------------------------
// QubitOperator

QubitOperator QubitOperator::from_pauli(PauliSum sum, EncodingKind kind) {
  QubitOperator op;
  op.n_qubits_ = sum.n_qubits();
  op.kind_ = kind;
  op.pauli_ = std::move(sum);
  return op;
}

QubitOperator QubitOperator::from_sparse(std::size_t n_qubits, SparseComplexMatrix m, EncodingKind kind) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n_qubits);
  if (m.rows() != dim || m.cols() != dim) {
    throw DimensionError("sparse operator is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                         ", expected " + std::to_string(dim) + " for " + std::to_string(n_qubits) + " qubits");
  }
  QubitOperator op;
  op.n_qubits_ = n_qubits;
  op.kind_ = kind;
  m.makeCompressed();
  op.sparse_ = std::move(m);
  return op;
}

void QubitOperator::set_physical_dimension(std::size_t d) {
  if (d > dimension()) throw DimensionError("physical dimension exceeds the Hilbert-space dimension");
  physical_dim_ = d;
}

PauliSum QubitOperator::to_pauli(std::size_t cap) const {
  if (pauli_) return *pauli_;
  return qee_pauli_decompose(*this, cap);
}

SparseComplexMatrix QubitOperator::to_sparse() const {
  if (sparse_) return *sparse_;
  return pauli_->to_sparse();
}

ComplexMatrix QubitOperator::to_dense(std::size_t cap) const {
  if (n_qubits_ > cap) throw ResourceError("dense realization exceeds the qubit cap");
  if (sparse_) return ComplexMatrix(*sparse_);
  return pauli_->to_matrix(cap);
}

QubitOperator& QubitOperator::materialize(std::size_t cap) {
  if (!pauli_) pauli_ = qee_pauli_decompose(*this, cap);
  if (!sparse_) sparse_ = pauli_->to_sparse();
  return *this;
}

// ---------------------------------------------------------------------------
// Jordan-Wigner

PauliSum jw_creation(std::size_t n_qubits, std::size_t p) {
  if (p >= n_qubits) throw DimensionError("creation operator index out of range");
  PauliString x = PauliString::single(n_qubits, p, Pauli::X);
  PauliString y = PauliString::single(n_qubits, p, Pauli::Y);
  for (std::size_t k = 0; k < p; ++k) {
    x.set(k, Pauli::Z);
    y.set(k, Pauli::Z);
  }
  PauliSum s(n_qubits);
  s.add(x, 0.5);
  s.add(y, Complex{0.0, -0.5});
  return s;
}

PauliSum jw_annihilation(std::size_t n_qubits, std::size_t p) { return jw_creation(n_qubits, p).adjoint(); }

QubitOperator jw_encode(const IntegralTable& t) {
  const std::size_t n = t.n_spin_orbitals();
  std::vector<PauliSum> create;
  std::vector<PauliSum> annihilate;
  for (std::size_t p = 0; p < n; ++p) {
    create.push_back(jw_creation(n, p));
    annihilate.push_back(jw_annihilation(n, p));
  }
  PauliSum h = PauliSum::identity(n, t.core_energy());
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      const double v = t.h1(p, q);
      if (v != 0.0) h += (create[p] * annihilate[q]) * Complex{v};
    }
  }
  // Pair products a+_p a+_q and a_r a_s, reused across the quartic sum.
  std::vector<PauliSum> create_pairs;
  std::vector<PauliSum> annihilate_pairs;
  create_pairs.reserve(n * n);
  annihilate_pairs.reserve(n * n);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      create_pairs.push_back((create[p] * create[q]).simplify(0.0));
      annihilate_pairs.push_back((annihilate[p] * annihilate[q]).simplify(0.0));
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      if (p == q) continue;
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t s = 0; s < n; ++s) {
          if (r == s) continue;
          const double v = t.h2(p, q, r, s);
          if (v == 0.0) continue;
          h += (create_pairs[p * n + q] * annihilate_pairs[r * n + s]) * Complex{0.5 * v};
        }
      }
    }
  }
  return QubitOperator::from_pauli(h.simplify(), EncodingKind::kJordanWigner);
}

// ---------------------------------------------------------------------------
// Qubit-efficient encoding

QubitOperator qee_excitation(const ConfigurationSet& set, std::size_t p, std::size_t q) {
  const std::size_t nq = set.qubit_count();
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << nq);
  std::vector<Eigen::Triplet<Complex>> triplets;
  for (std::size_t k = 0; k < set.size(); ++k) {
    const auto r = excitation_apply(set.member(k), p, q);
    if (!r) continue;
    const auto row = set.find(r->config.bits);
    if (!row) continue;  // transition leaves the sector
    triplets.emplace_back(static_cast<int>(*row), static_cast<int>(k), Complex{static_cast<double>(r->sign)});
  }
  SparseComplexMatrix m(dim, dim);
  m.setFromTriplets(triplets.begin(), triplets.end());
  QubitOperator op = QubitOperator::from_sparse(nq, std::move(m), EncodingKind::kQubitEfficient);
  op.set_physical_dimension(set.size());
  return op;
}

PauliSum qee_pauli_decompose(const QubitOperator& op, std::size_t cap, double tol) {
  const std::size_t nq = op.n_qubits();
  if (nq > cap) {
    throw ResourceError("Pauli decomposition of " + std::to_string(nq) + " qubits exceeds the cap of " +
                        std::to_string(cap));
  }
  const std::size_t dim = std::size_t{1} << nq;
  const SparseComplexMatrix m = op.to_sparse();
  // Group entries by X-pattern row ^ col; within a group f[col] = M(col ^ x, col).
  std::map<std::uint64_t, std::vector<Complex>> groups;
  for (Eigen::Index row = 0; row < m.outerSize(); ++row) {
    for (SparseComplexMatrix::InnerIterator it(m, row); it; ++it) {
      if (it.value() == Complex{}) continue;
      const auto col = static_cast<std::uint64_t>(it.col());
      const std::uint64_t x = static_cast<std::uint64_t>(row) ^ col;
      auto& f = groups[x];
      if (f.empty()) f.assign(dim, Complex{});
      f[col] += it.value();
    }
  }
  PauliSum out(nq);
  const double norm = 1.0 / static_cast<double>(dim);
  for (auto& [x, f] : groups) {
    walsh_hadamard(f);
    for (std::uint64_t z = 0; z < dim; ++z) {
      const Complex c = i_pow_conj(std::popcount(x & z)) * f[z] * norm;
      if (std::abs(c) > tol) out.add(PauliString::from_masks(nq, x, z), c);
    }
  }
  return out;
}

SparseComplexMatrix excitation_sector_matrix(const ExcitationPolynomial& poly, const ConfigurationSet& set) {
  const std::size_t n = poly.n_spin_orbitals;
  if (n != set.n_spin_orbitals()) throw DimensionError("polynomial and sector disagree on the orbital count");
  const std::size_t dim = set.size();

  // Nonzero index lists so the inner loops only touch live terms.
  std::vector<std::pair<std::size_t, std::size_t>> live_linear;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      if (poly.linear_at(p, q) != 0.0) live_linear.emplace_back(p, q);
    }
  }

  std::vector<Eigen::Triplet<Complex>> triplets;
  std::map<std::size_t, double> column;
  for (std::size_t k = 0; k < dim; ++k) {
    column.clear();
    const Configuration f = set.member(k);
    if (poly.constant != 0.0) column[k] += poly.constant;
    for (const auto& [p, q] : live_linear) {
      const auto r = excitation_apply(f, p, q);
      if (!r) continue;
      if (const auto row = set.find(r->config.bits)) column[*row] += r->sign * poly.linear_at(p, q);
    }
    // E_pr E_qs |f>: apply E_qs first.
    for (std::size_t s = 0; s < n; ++s) {
      if (!f.occupied(s)) continue;
      for (std::size_t q = 0; q < n; ++q) {
        const auto r1 = excitation_apply(f, q, s);
        if (!r1) continue;
        for (std::size_t r = 0; r < n; ++r) {
          if (!r1->config.occupied(r)) continue;
          for (std::size_t p = 0; p < n; ++p) {
            const double c = poly.quadratic_at(p, r, q, s);
            if (c == 0.0) continue;
            const auto r2 = excitation_apply(r1->config, p, r);
            if (!r2) continue;
            if (const auto row = set.find(r2->config.bits)) column[*row] += r1->sign * r2->sign * c;
          }
        }
      }
    }
    for (const auto& [row, v] : column) {
      if (v != 0.0) triplets.emplace_back(static_cast<int>(row), static_cast<int>(k), Complex{v});
    }
  }
  SparseComplexMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

QubitOperator qee_hamiltonian(const IntegralTable& t, const ConfigurationSet& set) {
  if (t.n_spin_orbitals() != set.n_spin_orbitals()) {
    throw ValidationError("integral table has " + std::to_string(t.n_spin_orbitals()) +
                          " spin-orbitals, sector has " + std::to_string(set.n_spin_orbitals()));
  }
  if (set.n_electrons() != t.n_electrons()) {
    throw ValidationError("sector holds " + std::to_string(set.n_electrons()) + " electrons, table declares " +
                          std::to_string(t.n_electrons()));
  }
  if (set.n_alpha() - set.n_beta() != t.ms2()) {
    throw ValidationError("sector spin projection does not match the table's MS2");
  }
  const ExcitationPolynomial poly = to_excitation_form(t);
  const SparseComplexMatrix block = excitation_sector_matrix(poly, set);

  const std::size_t nq = set.qubit_count();
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << nq);
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(static_cast<std::size_t>(block.nonZeros()));
  for (Eigen::Index row = 0; row < block.outerSize(); ++row) {
    for (SparseComplexMatrix::InnerIterator it(block, row); it; ++it) {
      triplets.emplace_back(static_cast<int>(row), static_cast<int>(it.col()), it.value());
    }
  }
  SparseComplexMatrix padded(dim, dim);
  padded.setFromTriplets(triplets.begin(), triplets.end());
  QubitOperator op = QubitOperator::from_sparse(nq, std::move(padded), EncodingKind::kQubitEfficient);
  op.set_physical_dimension(set.size());
  return op;
}

QubitCounts qubit_counts(std::size_t n_spin_orbitals, int n_alpha, int n_beta) {
  if (n_spin_orbitals == 0 || n_spin_orbitals % 2 != 0) throw ValidationError("spin-orbital count must be even");
  const std::size_t n_spatial = n_spin_orbitals / 2;
  if (n_alpha < 0 || n_beta < 0 || static_cast<std::size_t>(n_alpha) > n_spatial ||
      static_cast<std::size_t>(n_beta) > n_spatial) {
    throw ValidationError("invalid sector");
  }
  const std::uint64_t count = binomial(n_spatial, static_cast<std::uint64_t>(n_alpha)) *
                              binomial(n_spatial, static_cast<std::uint64_t>(n_beta));
  return {n_spin_orbitals, qubits_for(count)};
}

// ---------------------------------------------------------------------------
// Coordinate text

std::string to_coordinate_text(const QubitOperator& op) {
  const SparseComplexMatrix m = op.to_sparse();
  std::string out = "# QUBITS " + std::to_string(op.n_qubits()) + " PHYSICAL " +
                    std::to_string(op.physical_dimension()) + "\n";
  char buf[96];
  for (Eigen::Index row = 0; row < m.outerSize(); ++row) {
    for (SparseComplexMatrix::InnerIterator it(m, row); it; ++it) {
      if (it.value() == Complex{}) continue;
      std::snprintf(buf, sizeof(buf), "%lld %lld %.17g %.17g\n", static_cast<long long>(row),
                    static_cast<long long>(it.col()), it.value().real(), it.value().imag());
      out += buf;
    }
  }
  return out;
}

QubitOperator from_coordinate_text(std::string_view text, EncodingKind kind) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::size_t> n_qubits;
  std::optional<std::size_t> physical;
  std::vector<Eigen::Triplet<Complex>> triplets;
  long long max_index = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string key;
      while (hs >> key) {
        std::size_t v = 0;
        if (key == "QUBITS" && hs >> v) n_qubits = v;
        else if (key == "PHYSICAL" && hs >> v) physical = v;
      }
      continue;
    }
    std::istringstream ls(line);
    long long row = 0, col = 0;
    double re = 0.0, im = 0.0;
    if (!(ls >> row >> col >> re >> im) || row < 0 || col < 0) {
      throw ParseError("expected `row col re im`", line_no);
    }
    max_index = std::max({max_index, row, col});
    triplets.emplace_back(static_cast<int>(row), static_cast<int>(col), Complex{re, im});
  }
  if (!n_qubits) n_qubits = qubits_for(static_cast<std::size_t>(max_index + 1));
  const std::size_t dim = std::size_t{1} << *n_qubits;
  if (max_index >= static_cast<long long>(dim)) throw ParseError("entry index exceeds the declared qubit count", line_no);
  SparseComplexMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  m.setFromTriplets(triplets.begin(), triplets.end());
  QubitOperator op = QubitOperator::from_sparse(*n_qubits, std::move(m), kind);
  if (physical) op.set_physical_dimension(*physical);
  return op;
}

}  // namespace qeevqe
