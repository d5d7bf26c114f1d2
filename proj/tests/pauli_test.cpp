#include <random>

#include <gtest/gtest.h>

#include "qeevqe/errors.hpp"
#include "qeevqe/pauli.hpp"
#include "support/fock_oracle.hpp"

namespace qeevqe {
namespace {

using testing::kron_pauli;
using testing::kron_pauli_sum;

PauliString random_string(std::size_t n, std::mt19937_64& rng) {
  const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
  return PauliString::from_masks(n, rng() & mask, rng() & mask);
}

PauliSum random_sum(std::size_t n, std::size_t terms, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PauliSum s(n);
  for (std::size_t k = 0; k < terms; ++k) s.add(random_string(n, rng), {u(rng), u(rng)});
  return s;
}

TEST(PauliString, LettersAreWrittenHighestQubitFirst) {
  const PauliString s = PauliString::from_letters("IXZY");
  EXPECT_EQ(s.n_qubits(), 4u);
  EXPECT_EQ(s.at(0), Pauli::Y);
  EXPECT_EQ(s.at(1), Pauli::Z);
  EXPECT_EQ(s.at(2), Pauli::X);
  EXPECT_EQ(s.at(3), Pauli::I);
  EXPECT_EQ(s.letters(), "IXZY");
  EXPECT_EQ(s.weight(), 3u);
}

TEST(PauliString, RejectsBadInput) {
  EXPECT_THROW(PauliString::from_letters("IXQ"), ValidationError);
  EXPECT_THROW(PauliString(65), ResourceError);
  EXPECT_THROW(PauliString::from_masks(2, 0b100, 0), DimensionError);
  EXPECT_THROW(PauliString(2).at(2), DimensionError);
}

TEST(PauliString, SingleQubitProducts) {
  const auto x = PauliString::from_letters("X");
  const auto y = PauliString::from_letters("Y");
  const auto z = PauliString::from_letters("Z");
  auto xy = pauli_mul(x, y);
  EXPECT_EQ(xy.product, z);
  EXPECT_EQ(xy.phase, Complex(0, 1));
  auto yx = pauli_mul(y, x);
  EXPECT_EQ(yx.phase, Complex(0, -1));
  auto zz = pauli_mul(z, z);
  EXPECT_TRUE(zz.product.is_identity());
  EXPECT_EQ(zz.phase, Complex(1, 0));
}

TEST(PauliString, ProductMatchesKroneckerOracleExhaustivelyOnTwoQubits) {
  for (std::uint64_t a = 0; a < 256; ++a) {
    const auto pa = PauliString::from_masks(2, a & 3, (a >> 2) & 3);
    const auto pb = PauliString::from_masks(2, (a >> 4) & 3, (a >> 6) & 3);
    const auto r = pauli_mul(pa, pb);
    const Eigen::MatrixXcd expected = kron_pauli(pa) * kron_pauli(pb);
    EXPECT_LT((r.phase * kron_pauli(r.product) - expected).norm(), 1e-14) << pa.letters() << " * " << pb.letters();
  }
}

TEST(PauliString, BasisActionMatchesKroneckerColumns) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = random_string(4, rng);
    const Eigen::MatrixXcd m = kron_pauli(s);
    for (std::uint64_t b = 0; b < 16; ++b) {
      const auto [phase, out] = s.apply_to_basis(b);
      EXPECT_LT(std::abs(m(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(b)) - phase), 1e-15);
    }
  }
}

TEST(PauliString, ProductPhasesStayInTheGroup) {
  for (std::uint64_t a = 0; a < 256; ++a) {
    const auto r = pauli_mul(PauliString::from_masks(2, a & 3, (a >> 2) & 3),
                             PauliString::from_masks(2, (a >> 4) & 3, (a >> 6) & 3));
    const bool unit = r.phase == Complex(1) || r.phase == Complex(-1) || r.phase == Complex(0, 1) ||
                      r.phase == Complex(0, -1);
    EXPECT_TRUE(unit);
  }
  const auto p = PauliString::from_letters("XYZI");
  const auto r = pauli_mul(PauliString(4), p);
  EXPECT_EQ(r.product, p);
  EXPECT_EQ(r.phase, Complex(1));
  EXPECT_THROW(pauli_mul(PauliString(2), PauliString(3)), DimensionError);
}

TEST(PauliSum, LadderAndProjectorMatrices) {
  PauliSum lower(1);
  lower.add(PauliString::from_letters("X"), 0.5);
  lower.add(PauliString::from_letters("Y"), Complex(0, 0.5));
  Eigen::Matrix2cd expected;
  expected << 0, 1, 0, 0;
  EXPECT_LT((lower.to_matrix() - expected).norm(), 1e-15);

  PauliSum n1(1);
  n1.add(PauliString::from_letters("I"), 0.5);
  n1.add(PauliString::from_letters("Z"), -0.5);
  expected << 0, 0, 0, 1;
  EXPECT_LT((n1.to_matrix() - expected).norm(), 1e-15);

  EXPECT_LT((PauliSum::identity(2, 1.5).to_matrix() - 1.5 * ComplexMatrix::Identity(4, 4)).norm(), 1e-15);
}

TEST(PauliSum, SimplifyIsIdempotentAndPreservesTheMatrix) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    PauliSum s = random_sum(3, 10, rng);
    s.add(random_string(3, rng), 1e-14);
    const PauliSum once = s.simplify();
    const PauliSum twice = once.simplify();
    EXPECT_EQ(once.to_text(), twice.to_text());
    EXPECT_LT((once.to_matrix() - s.to_matrix()).norm(), 1e-12);
  }
  PauliSum tiny(1);
  tiny.add(PauliString::from_letters("Z"), 1e-15);
  EXPECT_TRUE(tiny.simplify(1e-12).empty());
}

TEST(PauliSum, AccumulatesLikeTermsAndSimplifies) {
  PauliSum s(2);
  s.add(PauliString::from_letters("XZ"), 0.5);
  s.add(PauliString::from_letters("XZ"), 0.25);
  s.add(PauliString::from_letters("ZZ"), 1e-15);
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s.coefficient(PauliString::from_letters("XZ")), Complex(0.75));
  EXPECT_EQ(s.simplify().size(), 1u);
  EXPECT_EQ(s.coefficient(PauliString::from_letters("YY")), Complex(0.0));
}

TEST(PauliSum, ArithmeticMatchesDenseOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const PauliSum a = random_sum(3, 6, rng);
    const PauliSum b = random_sum(3, 5, rng);
    EXPECT_LT((kron_pauli_sum(a * b) - kron_pauli_sum(a) * kron_pauli_sum(b)).norm(), 1e-12);
    EXPECT_LT((kron_pauli_sum(a + b) - kron_pauli_sum(a) - kron_pauli_sum(b)).norm(), 1e-12);
    EXPECT_LT((kron_pauli_sum(a - b) - kron_pauli_sum(a) + kron_pauli_sum(b)).norm(), 1e-12);
    EXPECT_LT((kron_pauli_sum(a.adjoint()) - kron_pauli_sum(a).adjoint()).norm(), 1e-12);
    EXPECT_LT((a.to_matrix() - kron_pauli_sum(a)).norm(), 1e-12);
    EXPECT_LT((ComplexMatrix(a.to_sparse()) - kron_pauli_sum(a)).norm(), 1e-12);
  }
}

TEST(PauliSum, ProductIsAssociative) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const PauliSum a = random_sum(4, 4, rng);
    const PauliSum b = random_sum(4, 4, rng);
    const PauliSum c = random_sum(4, 4, rng);
    EXPECT_LT(((a * b) * c - a * (b * c)).to_matrix().norm(), 1e-12);
  }
}

TEST(PauliSum, HermiticityFollowsRealCoefficients) {
  PauliSum s(2);
  s.add(PauliString::from_letters("XY"), 0.3);
  EXPECT_TRUE(s.is_hermitian());
  s.add(PauliString::from_letters("ZI"), Complex(0.0, 0.1));
  EXPECT_FALSE(is_hermitian(s));
  const PauliSum h = s + s.adjoint();
  EXPECT_TRUE(h.is_hermitian());
  EXPECT_LT((h.to_matrix() - h.to_matrix().adjoint()).norm(), 1e-15);
}

TEST(PauliSum, TextRoundTripIsExact) {
  std::mt19937_64 rng(17);
  const PauliSum s = random_sum(5, 12, rng);
  const PauliSum back = PauliSum::from_text(s.to_text());
  ASSERT_EQ(back.size(), s.size());
  for (const auto& [p, c] : s.terms()) EXPECT_EQ(back.coefficient(p), c);
  EXPECT_EQ(back.to_text(), s.to_text());
}

TEST(PauliSum, EmptyAndZeroQubitSumsRoundTrip) {
  const PauliSum empty(3);
  const PauliSum e = PauliSum::from_text(empty.to_text());
  EXPECT_EQ(e.n_qubits(), 3u);
  EXPECT_TRUE(e.empty());

  const PauliSum scalar = PauliSum::identity(0, -2.5);
  const PauliSum s = PauliSum::from_text(scalar.to_text());
  EXPECT_EQ(s.n_qubits(), 0u);
  EXPECT_EQ(s.to_matrix()(0, 0), Complex(-2.5));
}

TEST(PauliSum, TextParseErrorsCarryLineNumbers) {
  try {
    PauliSum::from_text("1 0 XX\n0.5 0 XQ\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(PauliSum::from_text("1 0 XX\n1 0 XXX\n"), ParseError);
  EXPECT_THROW(PauliSum::from_text("abc\n"), ParseError);
  EXPECT_THROW(PauliSum::from_text(""), ParseError);
}

TEST(PauliSum, QubitCountMismatchAndCaps) {
  EXPECT_THROW(PauliSum(2) + PauliSum(3), DimensionError);
  EXPECT_THROW(PauliSum(2).add(PauliString(3), 1.0), DimensionError);
  EXPECT_THROW(PauliSum(15).to_matrix(), ResourceError);
  EXPECT_THROW(PauliSum(4).to_matrix(3), ResourceError);
}

}  // namespace
}  // namespace qeevqe
