#include <random>

#include <gtest/gtest.h>

#include "qeevqe/encode.hpp"
#include "qeevqe/errors.hpp"
#include "qeevqe/fermion.hpp"
#include "qeevqe/oracle.hpp"
#include "support/fock_oracle.hpp"

namespace qeevqe {
namespace {

TEST(ExactGround, DiagonalOperatorGivesSortedDiagonal) {
  SparseComplexMatrix h(4, 4);
  const double d[] = {0.3, -1.2, 2.0, -0.1};
  for (int i = 0; i < 4; ++i) h.insert(i, i) = d[i];
  const SpectrumResult s = exact_ground(QubitOperator::from_sparse(2, h));
  ASSERT_EQ(s.eigenvalues.size(), 4);
  EXPECT_DOUBLE_EQ(s.eigenvalues[0], -1.2);
  EXPECT_DOUBLE_EQ(s.eigenvalues[1], -0.1);
  EXPECT_DOUBLE_EQ(s.eigenvalues[3], 2.0);
  EXPECT_NEAR(std::abs(s.ground_vector[1]), 1.0, 1e-12);
  EXPECT_FALSE(s.restricted_to_encoded);
}

TEST(ExactGround, RestrictedAndFullAgreeForEncodedSectors) {
  const auto set = ConfigurationSet::enumerate(12, 2, 2);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const QubitOperator h = qee_hamiltonian(random_restricted_table(6, 4, seed, {.core_energy = -2.0}), set);
    const SpectrumResult full = exact_ground(h);
    const SpectrumResult block = exact_ground(h, true, &set);
    EXPECT_TRUE(block.restricted_to_encoded);
    EXPECT_EQ(block.eigenvalues.size(), 225);
    EXPECT_NEAR(full.ground_energy(), block.ground_energy(), 1e-10);
    EXPECT_NEAR(block.ground_vector.norm(), 1.0, 1e-12);
  }
  const auto other = ConfigurationSet::enumerate(12, 1, 1);
  const QubitOperator h = qee_hamiltonian(random_restricted_table(6, 4, 0), set);
  EXPECT_THROW(exact_ground(h, true, &other), ValidationError);
  EXPECT_THROW(exact_ground(h, true, nullptr), ValidationError);
  EXPECT_THROW(exact_ground(h, false, nullptr, 4), ResourceError);
}

TEST(ExactGround, RandomHermitianPauliSumMatchesDenseSolver) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const char letters[] = {'I', 'X', 'Y', 'Z'};
  for (int trial = 0; trial < 10; ++trial) {
    PauliSum h(3);
    for (int k = 0; k < 12; ++k) {
      std::string s(3, 'I');
      for (char& c : s) c = letters[rng() % 4];
      h.add(PauliString::from_letters(s), u(rng));
    }
    const ComplexMatrix dense = testing::kron_pauli_sum(h);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(dense);
    const SpectrumResult s = exact_ground(QubitOperator::from_pauli(h));
    EXPECT_LE((s.eigenvalues - es.eigenvalues()).cwiseAbs().maxCoeff(), 1e-12);
    for (int i = 1; i < s.eigenvalues.size(); ++i) EXPECT_LE(s.eigenvalues[i - 1], s.eigenvalues[i]);
  }
}

TEST(HermitianSpectrum, RejectsNonHermitianInput) {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.5, 0.0, 1.0;
  EXPECT_THROW(hermitian_spectrum(m), NumericalError);
  EXPECT_THROW(hermitian_spectrum(ComplexMatrix(2, 3)), DimensionError);
  m(1, 0) = 0.5;
  EXPECT_NEAR(hermitian_spectrum(m).eigenvalues[0], 0.5, 1e-14);
}

TEST(JwSectorMatrix, IdentityAndNumberOperator) {
  const auto set = ConfigurationSet::enumerate(6, 2, 1);
  EXPECT_LE((jw_sector_matrix(PauliSum::identity(6), set) - ComplexMatrix::Identity(9, 9)).norm(), 1e-15);

  PauliSum number(6);
  for (std::size_t p = 0; p < 6; ++p) number += jw_creation(6, p) * jw_annihilation(6, p);
  EXPECT_LE((jw_sector_matrix(number, set) - 3.0 * ComplexMatrix::Identity(9, 9)).norm(), 1e-12);

  EXPECT_THROW(jw_sector_matrix(number, ConfigurationSet::enumerate(4, 1, 1)), ValidationError);
}

TEST(JwSectorMatrix, EqualsTheEncodedBlock) {
  for (std::size_t n = 4; n <= 8; n += 2) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const IntegralTable t = random_restricted_table(n / 2, 2, seed + 10 * n);
      const auto set = ConfigurationSet::enumerate(n, 1, 1);
      const ComplexMatrix jw = jw_sector_matrix(jw_encode(t).to_pauli(), set);
      const ComplexMatrix qee = ComplexMatrix(qee_hamiltonian(t, set).to_dense()).topLeftCorner(set.size(), set.size());
      EXPECT_LE((jw - qee).cwiseAbs().maxCoeff(), 1e-10) << n << " " << seed;
      EXPECT_LE((jw - jw.adjoint()).norm(), 1e-12);
    }
  }
}

TEST(RelativeEnergies, AnchoredInKcalPerMol) {
  const auto r = relative_energies({{"keto", -189.53}, {"enol", -189.49}}, "keto");
  EXPECT_EQ(r.at("keto"), 0.0);
  EXPECT_NEAR(r.at("enol"), 0.04 * 627.509474, 1e-9);
  EXPECT_NEAR(r.at("enol"), 25.10, 5e-3);
  EXPECT_THROW(relative_energies({{"enol", -1.0}}, "keto"), ValidationError);
}

}  // namespace
}  // namespace qeevqe
