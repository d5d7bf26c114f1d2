#include "qeevqe/oracle.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "qeevqe/errors.hpp"
#include "qeevqe/units.hpp"

namespace qeevqe {

SpectrumResult hermitian_spectrum(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("matrix is not square");
  if (m.rows() == 0) throw DimensionError("empty matrix has no spectrum");
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-10) throw NumericalError("operator is not Hermitian (deviation " + std::to_string(asym) + ")");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
  SpectrumResult r;
  r.eigenvalues = es.eigenvalues();
  r.ground_vector = es.eigenvectors().col(0);
  return r;
}

SpectrumResult exact_ground(const QubitOperator& h, bool restrict_to_encoded, const ConfigurationSet* set,
                            std::size_t cap) {
  if (h.n_qubits() > cap) {
    throw ResourceError("exact diagonalization of " + std::to_string(h.n_qubits()) + " qubits exceeds the cap of " +
                        std::to_string(cap));
  }
  ComplexMatrix m = h.to_dense(cap);
  if (restrict_to_encoded) {
    if (set == nullptr) throw ValidationError("restricted diagonalization needs the configuration set");
    if (set->size() != h.physical_dimension()) {
      throw ValidationError("configuration set size " + std::to_string(set->size()) +
                            " differs from the operator's encoded dimension " +
                            std::to_string(h.physical_dimension()));
    }
    const auto d = static_cast<Eigen::Index>(set->size());
    m = ComplexMatrix(m.topLeftCorner(d, d));
  }
  SpectrumResult r = hermitian_spectrum(m);
  r.restricted_to_encoded = restrict_to_encoded;
  return r;
}

ComplexMatrix jw_sector_matrix(const PauliSum& h_jw, const ConfigurationSet& set) {
  if (h_jw.n_qubits() != set.n_spin_orbitals()) {
    throw ValidationError("JW operator acts on " + std::to_string(h_jw.n_qubits()) + " qubits, sector has " +
                          std::to_string(set.n_spin_orbitals()) + " spin-orbitals");
  }
  const auto dim = static_cast<Eigen::Index>(set.size());
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const std::uint64_t bits = set.members()[static_cast<std::size_t>(k)];
    for (const auto& [p, c] : h_jw.terms()) {
      const auto [phase, out] = p.apply_to_basis(bits);
      if (const auto row = set.find(out)) m(static_cast<Eigen::Index>(*row), k) += c * phase;
    }
  }
  return m;
}

std::map<std::string, double> relative_energies(const std::map<std::string, double>& energies_hartree,
                                                const std::string& anchor) {
  auto it = energies_hartree.find(anchor);
  if (it == energies_hartree.end()) throw ValidationError("anchor '" + anchor + "' has no energy");
  std::map<std::string, double> out;
  for (const auto& [label, e] : energies_hartree) out[label] = hartree_to_kcal(e - it->second);
  return out;
}

}  // namespace qeevqe
