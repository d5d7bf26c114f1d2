#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "qeevqe/configspace.hpp"
#include "qeevqe/encode.hpp"
#include "qeevqe/pauli.hpp"

namespace qeevqe {

struct SpectrumResult {
  Eigen::VectorXd eigenvalues;  // ascending
  Eigen::VectorXcd ground_vector;
  bool restricted_to_encoded = false;

  double ground_energy() const { return eigenvalues[0]; }
};

/// Dense Hermitian diagonalization of H, or of its leading
/// physical_dimension x physical_dimension block when
/// `restrict_to_encoded`. The set, when given, must match that block.
SpectrumResult exact_ground(const QubitOperator& h, bool restrict_to_encoded = false,
                            const ConfigurationSet* set = nullptr, std::size_t cap = kDefaultDenseQubitCap);

/// Spectrum of an explicit Hermitian matrix.
SpectrumResult hermitian_spectrum(const ComplexMatrix& m);

/// M[k'][k] = <f_k'| H |f_k> with f_k the sector members as JW basis states.
ComplexMatrix jw_sector_matrix(const PauliSum& h_jw, const ConfigurationSet& set);

/// (E_t - E_anchor) in kcal/mol for every label.
std::map<std::string, double> relative_energies(const std::map<std::string, double>& energies_hartree,
                                                const std::string& anchor);

}  // namespace qeevqe
