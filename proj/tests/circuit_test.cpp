#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "qeevqe/circuit.hpp"
#include "qeevqe/errors.hpp"
#include "support/fock_oracle.hpp"

namespace qeevqe {
namespace {

Circuit random_circuit(std::size_t n, std::size_t gates, std::mt19937_64& rng) {
  Circuit c(n);
  std::size_t p = 0;
  for (std::size_t g = 0; g < gates; ++g) {
    const std::size_t a = rng() % n;
    if (n > 1 && rng() % 3 == 0) {
      std::size_t b = rng() % n;
      if (b == a) b = (a + 1) % n;
      c.add_cnot(a, b);
    } else {
      c.add_ry(a, p++);
    }
  }
  return c;
}

std::vector<double> random_params(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

PauliSum random_hermitian(std::size_t n, std::size_t terms, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
  PauliSum s(n);
  for (std::size_t k = 0; k < terms; ++k) s.add(PauliString::from_masks(n, rng() & mask, rng() & mask), u(rng));
  return s;
}

/// Full 2^n unitary of one gate, built from explicit Kronecker products.
Eigen::MatrixXd gate_matrix(std::size_t n, const Gate& g, const std::vector<double>& params) {
  const auto dim = Eigen::Index{1} << n;
  if (g.kind == GateKind::kCnot) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index b = 0; b < dim; ++b) {
      const Eigen::Index out = ((b >> g.qubit) & 1) ? (b ^ (Eigen::Index{1} << g.target)) : b;
      m(out, b) = 1.0;
    }
    return m;
  }
  Eigen::Matrix2d local;
  if (g.kind == GateKind::kX) {
    local << 0, 1, 1, 0;
  } else {
    const double t = params[g.param];
    local << std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2);
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(1, 1);
  for (std::size_t k = n; k-- > 0;) {
    const Eigen::Matrix2d f = k == g.qubit ? local : Eigen::Matrix2d::Identity();
    Eigen::MatrixXd next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      for (Eigen::Index j = 0; j < out.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = out(i, j) * f;
    }
    out = next;
  }
  return out;
}

std::string describe(const Gate& g) {
  switch (g.kind) {
    case GateKind::kRy: return "RY " + std::to_string(g.qubit) + " " + std::to_string(g.param);
    case GateKind::kCnot: return "CNOT " + std::to_string(g.qubit) + " " + std::to_string(g.target);
    case GateKind::kX: return "X " + std::to_string(g.qubit);
  }
  return "";
}

std::vector<std::string> describe(const std::vector<Gate>& gates) {
  std::vector<std::string> out;
  for (const Gate& g : gates) out.push_back(describe(g));
  return out;
}

std::string ry(std::size_t q, std::size_t p) { return "RY " + std::to_string(q) + " " + std::to_string(p); }
std::string cnot(std::size_t c, std::size_t t) { return "CNOT " + std::to_string(c) + " " + std::to_string(t); }

TEST(Ansatz, GateAndParameterCounts) {
  const Circuit s20 = build_staggered_ansatz(8, 20);
  EXPECT_EQ(s20.count(GateKind::kCnot), 80u);
  EXPECT_EQ(s20.n_params(), 168u);
  const Circuit s0 = build_staggered_ansatz(8, 0);
  EXPECT_EQ(s0.count(GateKind::kCnot), 0u);
  EXPECT_EQ(s0.n_params(), 8u);
  const Circuit c10 = build_chain_ansatz(8, 10);
  EXPECT_EQ(c10.count(GateKind::kCnot), 70u);
  EXPECT_EQ(c10.n_params(), 80u);
  const Circuit c4 = build_chain_ansatz(8, 4);
  EXPECT_EQ(c4.count(GateKind::kCnot), 28u);
  EXPECT_EQ(c4.n_params(), 32u);
  const Circuit c1 = build_chain_ansatz(8, 1);
  EXPECT_EQ(c1.count(GateKind::kCnot), 7u);
  EXPECT_EQ(c1.n_params(), 8u);
  for (std::size_t l = 0; l <= 6; ++l) {
    EXPECT_EQ(build_staggered_ansatz(8, l).count(GateKind::kCnot), 4 * l);
    EXPECT_EQ(build_staggered_ansatz(8, l).n_params(), 8 * (l + 1));
  }
}

TEST(Ansatz, InvalidSizes) {
  EXPECT_THROW(build_staggered_ansatz(7, 2), ValidationError);
  EXPECT_THROW(build_chain_ansatz(8, 0), ValidationError);
  EXPECT_THROW(build_chain_ansatz(1, 2), ValidationError);
  EXPECT_THROW(Circuit(31), ResourceError);
  Circuit c(3);
  EXPECT_THROW(c.add_cnot(1, 1), ValidationError);
  EXPECT_THROW(c.add_ry(3, 0), Error);
  EXPECT_THROW(c.add_ry(0, 1), ValidationError);
}

TEST(Ansatz, TwoStaggeredLayersGateByGate) {
  std::vector<std::string> expected;
  for (std::size_t q = 0; q < 8; ++q) expected.push_back(ry(q, q));
  for (std::size_t q = 0; q < 8; q += 2) expected.push_back(cnot(q, q + 1));
  // Second layer: theta_8..theta_14 on qubits 1..7 and theta_15 on qubit 0.
  for (std::size_t k = 0; k < 8; ++k) expected.push_back(ry((k + 1) % 8, 8 + k));
  for (std::size_t q = 1; q < 8; q += 2) expected.push_back(cnot(q, (q + 1) % 8));
  for (std::size_t q = 0; q < 8; ++q) expected.push_back(ry(q, 16 + q));
  EXPECT_EQ(describe(build_staggered_ansatz(8, 2).gates()), expected);
}

TEST(Ansatz, ChainLayerGateByGate) {
  std::vector<std::string> expected;
  for (std::size_t q = 0; q < 8; ++q) expected.push_back(ry(q, q));
  for (std::size_t q = 0; q < 7; ++q) expected.push_back(cnot(q, q + 1));
  EXPECT_EQ(describe(build_chain_ansatz(8, 1).gates()), expected);
}

TEST(CircuitText, RoundTripAndErrors) {
  Circuit c = build_staggered_ansatz(4, 3);
  c.add_x(2);
  const std::string text = c.to_text();
  EXPECT_EQ(text.substr(0, text.find('\n')), "QUBITS 4 PARAMS 16");
  const Circuit back = Circuit::from_text(text);
  EXPECT_EQ(back.gates(), c.gates());
  EXPECT_EQ(back.n_params(), 16u);
  EXPECT_EQ(back.to_text(), text);
  EXPECT_THROW(Circuit::from_text("RY 0 0\n"), ParseError);
  EXPECT_THROW(Circuit::from_text("QUBITS 2 PARAMS 1\nRZ 0 0\n"), ParseError);
  EXPECT_THROW(Circuit::from_text("QUBITS 2 PARAMS 2\nRY 0 0\n"), ValidationError);
  try {
    Circuit::from_text("QUBITS 2 PARAMS 1\nRY 0 0\nCNOT 0\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Simulation, ZeroAnglesPermuteBasisStates) {
  const Circuit c = build_staggered_ansatz(8, 2);
  const std::vector<double> zeros(c.n_params(), 0.0);
  for (std::uint64_t b : {0u, 1u, 5u, 130u, 255u}) {
    const StateVector s = simulate_statevector(c, zeros, b);
    std::uint64_t img = b;
    for (const Gate& g : c.gates()) {
      if (g.kind == GateKind::kCnot && ((img >> g.qubit) & 1U)) img ^= std::uint64_t{1} << g.target;
    }
    EXPECT_LT((s - basis_state(8, img)).norm(), 1e-15);
  }
}

TEST(Simulation, RyPiFlipsAQubit) {
  Circuit c(1);
  c.add_ry(0, 0);
  const StateVector s = simulate_statevector(c, {std::numbers::pi}, 0);
  EXPECT_NEAR(std::abs(s[1]), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(s[0]), 0.0, 1e-15);
  EXPECT_THROW(simulate_statevector(c, {}, 0), ValidationError);
}

TEST(Simulation, MatchesDenseUnitaryProduct) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 4);
    Circuit c = random_circuit(n, 12, rng);
    c.add_x(rng() % n);
    const std::vector<double> params = random_params(c.n_params(), rng);
    const std::uint64_t init = rng() % (std::uint64_t{1} << n);
    Eigen::MatrixXd u = Eigen::MatrixXd::Identity(Eigen::Index{1} << n, Eigen::Index{1} << n);
    for (const Gate& g : c.gates()) u = gate_matrix(n, g, params) * u;
    const StateVector s = simulate_statevector(c, params, init);
    EXPECT_LT((s - u.col(static_cast<Eigen::Index>(init)).cast<Complex>()).norm(), 1e-12);
  }
}

TEST(Simulation, NormIsPreservedAndAmplitudesStayReal) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Circuit c = build_staggered_ansatz(8, 1 + static_cast<std::size_t>(trial % 5));
    const StateVector s = simulate_statevector(c, random_params(c.n_params(), rng), rng() % 256);
    EXPECT_NEAR(s.norm(), 1.0, 1e-12);
    EXPECT_LT(s.imag().cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Expectation, IdentityDiagonalAndDenseOracle) {
  const QubitOperator c = QubitOperator::from_pauli(PauliSum::identity(2, -1.75));
  std::mt19937_64 rng(6);
  StateVector s(4);
  for (auto& a : s) a = Complex(std::normal_distribution<double>()(rng), std::normal_distribution<double>()(rng));
  s.normalize();
  EXPECT_NEAR(expectation(s, c), -1.75, 1e-14);

  PauliSum diag(2);
  diag.add(PauliString::from_letters("ZI"), 0.5);
  diag.add(PauliString::from_letters("IZ"), 0.25);
  const QubitOperator d = QubitOperator::from_pauli(diag);
  EXPECT_NEAR(expectation(basis_state(2, 3), d), -0.75, 1e-15);
  EXPECT_NEAR(expectation(basis_state(2, 1), d), 0.25, 1e-15);

  for (int trial = 0; trial < 10; ++trial) {
    const PauliSum h = random_hermitian(3, 10, rng);
    StateVector v(8);
    for (auto& a : v) a = Complex(std::normal_distribution<double>()(rng), std::normal_distribution<double>()(rng));
    v.normalize();
    const ComplexMatrix m = testing::kron_pauli_sum(h);
    EXPECT_NEAR(expectation(v, QubitOperator::from_pauli(h)), (v.adjoint() * m * v)(0).real(), 1e-12);
  }
  EXPECT_THROW(expectation(basis_state(3, 0), d), ValidationError);

  PauliSum anti(1);
  anti.add(PauliString::from_letters("Z"), Complex(0, 1));
  EXPECT_THROW(expectation(basis_state(1, 0), QubitOperator::from_pauli(anti)), NumericalError);
}

TEST(Expectation, ShotSamplingIsSeededAndUnbiased) {
  std::mt19937_64 rng(9);
  const PauliSum h = random_hermitian(3, 6, rng);
  const Circuit c = build_chain_ansatz(3, 2);
  const StateVector s = simulate_statevector(c, random_params(c.n_params(), rng), 0);
  const double exact = expectation(s, QubitOperator::from_pauli(h));
  const double a = sampled_expectation(s, h, 200000, 5);
  EXPECT_EQ(a, sampled_expectation(s, h, 200000, 5));
  EXPECT_NEAR(a, exact, 0.02);
}

TEST(EnergyEvaluator, MatchesComplexExpectation) {
  std::mt19937_64 rng(21);
  const PauliSum h = random_hermitian(4, 20, rng);
  const QubitOperator op = QubitOperator::from_pauli(h);
  const Circuit c = build_staggered_ansatz(4, 3);
  const EnergyEvaluator eval(op, c, 0b0101);
  for (int trial = 0; trial < 5; ++trial) {
    const std::vector<double> p = random_params(c.n_params(), rng);
    Circuit prep(4);
    prep.add_x(0);
    prep.add_x(2);
    const StateVector s = simulate_statevector(c, p, simulate_statevector(prep, {}, 0));
    EXPECT_NEAR(eval.energy(p), expectation(s, op), 1e-12);
  }
}

TEST(EnergyEvaluator, GradientsAgreeWithFiniteDifferences) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 5);
    const Circuit c = trial % 2 ? build_chain_ansatz(n, 2) : random_circuit(n, 14, rng);
    const QubitOperator op = QubitOperator::from_pauli(random_hermitian(n, 12, rng));
    const EnergyEvaluator eval(op, c, rng() % (std::uint64_t{1} << n));
    const std::vector<double> p = random_params(c.n_params(), rng);

    std::vector<double> adjoint, shift;
    const double e0 = eval.energy_and_gradient(p, adjoint);
    EXPECT_NEAR(eval.parameter_shift_gradient(p, shift), e0, 1e-12);
    const std::vector<double> generic = parameter_shift([&](const std::vector<double>& x) { return eval.energy(x); }, p);
    double max_diff = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      std::vector<double> hi = p, lo = p;
      hi[i] += 1e-5;
      lo[i] -= 1e-5;
      const double fd = (eval.energy(hi) - eval.energy(lo)) / 2e-5;
      max_diff = std::max(max_diff, std::abs(shift[i] - fd));
      EXPECT_NEAR(adjoint[i], shift[i], 1e-10);
      EXPECT_NEAR(generic[i], shift[i], 1e-12);
    }
    EXPECT_LE(max_diff, 1e-6) << "trial " << trial;
  }
}

TEST(AnsatzKind, Strings) {
  EXPECT_EQ(ansatz_from_string("chain"), AnsatzKind::kChain);
  EXPECT_EQ(to_string(AnsatzKind::kStaggered), "staggered");
  EXPECT_THROW(ansatz_from_string("ring"), ConfigError);
}

}  // namespace
}  // namespace qeevqe
