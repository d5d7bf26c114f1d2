#include "qeevqe/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "qeevqe/errors.hpp"

namespace qeevqe {

namespace {

template <typename Vec>
void apply_ry(Vec& v, std::size_t q, double theta) {
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  const std::size_t bit = std::size_t{1} << q;
  const auto n = static_cast<std::size_t>(v.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (i & bit) continue;
    const auto a = v[i];
    const auto b = v[i | bit];
    v[i] = c * a - s * b;
    v[i | bit] = s * a + c * b;
  }
}

template <typename Vec>
void apply_cnot(Vec& v, std::size_t control, std::size_t target) {
  const std::size_t cbit = std::size_t{1} << control;
  const std::size_t tbit = std::size_t{1} << target;
  const auto n = static_cast<std::size_t>(v.size());
  for (std::size_t i = 0; i < n; ++i) {
    if ((i & cbit) && !(i & tbit)) std::swap(v[i], v[i | tbit]);
  }
}

template <typename Vec>
void apply_x(Vec& v, std::size_t q) {
  const std::size_t bit = std::size_t{1} << q;
  const auto n = static_cast<std::size_t>(v.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (!(i & bit)) std::swap(v[i], v[i | bit]);
  }
}

template <typename Vec>
void apply_gate(Vec& v, const Gate& g, const std::vector<double>& params, bool inverse = false) {
  switch (g.kind) {
    case GateKind::kRy: apply_ry(v, g.qubit, inverse ? -params[g.param] : params[g.param]); break;
    case GateKind::kCnot: apply_cnot(v, g.qubit, g.target); break;
    case GateKind::kX: apply_x(v, g.qubit); break;
  }
}

void check_params(const Circuit& c, const std::vector<double>& params) {
  if (params.size() != c.n_params()) {
    throw ValidationError("circuit takes " + std::to_string(c.n_params()) + " parameters, got " +
                          std::to_string(params.size()));
  }
}

}  // namespace

std::string to_string(AnsatzKind kind) { return kind == AnsatzKind::kStaggered ? "staggered" : "chain"; }

AnsatzKind ansatz_from_string(std::string_view s) {
  if (s == "staggered") return AnsatzKind::kStaggered;
  if (s == "chain") return AnsatzKind::kChain;
  throw ConfigError("unknown ansatz '" + std::string(s) + "' (expected staggered or chain)");
}

// ---------------------------------------------------------------------------
// Circuit

Circuit::Circuit(std::size_t n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits > 30) throw ResourceError("statevector circuits are limited to 30 qubits");
}

void Circuit::check_qubit(std::size_t q) const {
  if (q >= n_qubits_) {
    throw ValidationError("qubit " + std::to_string(q) + " outside a " + std::to_string(n_qubits_) +
                          "-qubit circuit");
  }
}

void Circuit::add_ry(std::size_t qubit, std::size_t param) {
  check_qubit(qubit);
  if (param > n_params_) {
    throw ValidationError("parameter index " + std::to_string(param) + " skips index " + std::to_string(n_params_));
  }
  if (param == n_params_) ++n_params_;
  gates_.push_back({GateKind::kRy, qubit, qubit, param});
}

void Circuit::add_cnot(std::size_t control, std::size_t target) {
  check_qubit(control);
  check_qubit(target);
  if (control == target) throw ValidationError("CNOT control and target coincide");
  gates_.push_back({GateKind::kCnot, control, target, 0});
}

void Circuit::add_x(std::size_t qubit) {
  check_qubit(qubit);
  gates_.push_back({GateKind::kX, qubit, qubit, 0});
}

std::size_t Circuit::count(GateKind kind) const {
  std::size_t n = 0;
  for (const auto& g : gates_) n += g.kind == kind;
  return n;
}

std::string Circuit::to_text() const {
  std::ostringstream out;
  out << "QUBITS " << n_qubits_ << " PARAMS " << n_params_ << '\n';
  for (const auto& g : gates_) {
    switch (g.kind) {
      case GateKind::kRy: out << "RY " << g.qubit << ' ' << g.param << '\n'; break;
      case GateKind::kCnot: out << "CNOT " << g.qubit << ' ' << g.target << '\n'; break;
      case GateKind::kX: out << "X " << g.qubit << '\n'; break;
    }
  }
  return out.str();
}

Circuit Circuit::from_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  std::optional<Circuit> c;
  std::size_t declared_params = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string op;
    if (!(ls >> op) || op[0] == '#') continue;
    try {
      if (!c) {
        std::string params_kw;
        std::size_t q = 0;
        if (op != "QUBITS" || !(ls >> q >> params_kw >> declared_params) || params_kw != "PARAMS") {
          throw ParseError("expected header `QUBITS <Q> PARAMS <P>`", line_no);
        }
        c.emplace(q);
        continue;
      }
      std::size_t a = 0, b = 0;
      if (op == "RY" && ls >> a >> b) {
        c->add_ry(a, b);
      } else if (op == "CNOT" && ls >> a >> b) {
        c->add_cnot(a, b);
      } else if (op == "X" && ls >> a) {
        c->add_x(a);
      } else {
        throw ParseError("unrecognized gate line '" + line + "'", line_no);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  if (!c) throw ParseError("missing circuit header", line_no);
  if (c->n_params() != declared_params) {
    throw ValidationError("header declares " + std::to_string(declared_params) + " parameters, gates use " +
                          std::to_string(c->n_params()));
  }
  return *c;
}

// ---------------------------------------------------------------------------
// Ansatz families

Circuit build_staggered_ansatz(std::size_t n_qubits, std::size_t layers) {
  if (n_qubits < 2 || n_qubits % 2 != 0) throw ValidationError("staggered ansatz needs an even qubit count >= 2");
  Circuit c(n_qubits);
  std::size_t p = 0;
  for (std::size_t layer = 1; layer <= layers; ++layer) {
    const bool odd = layer % 2 == 1;
    if (odd) {
      for (std::size_t q = 0; q < n_qubits; ++q) c.add_ry(q, p++);
    } else {
      // Even layers number their rotations from qubit 1 around to qubit 0.
      for (std::size_t k = 0; k < n_qubits; ++k) c.add_ry((k + 1) % n_qubits, p++);
    }
    const std::size_t offset = odd ? 0 : 1;
    for (std::size_t q = offset; q < n_qubits + offset; q += 2) c.add_cnot(q % n_qubits, (q + 1) % n_qubits);
  }
  for (std::size_t q = 0; q < n_qubits; ++q) c.add_ry(q, p++);
  c.set_ansatz(AnsatzKind::kStaggered, layers);
  return c;
}

Circuit build_chain_ansatz(std::size_t n_qubits, std::size_t layers) {
  if (n_qubits < 2) throw ValidationError("chain ansatz needs at least 2 qubits");
  if (layers < 1) throw ValidationError("chain ansatz needs at least one layer");
  Circuit c(n_qubits);
  std::size_t p = 0;
  for (std::size_t layer = 0; layer < layers; ++layer) {
    for (std::size_t q = 0; q < n_qubits; ++q) c.add_ry(q, p++);
    for (std::size_t q = 0; q + 1 < n_qubits; ++q) c.add_cnot(q, q + 1);
  }
  c.set_ansatz(AnsatzKind::kChain, layers);
  return c;
}

Circuit build_ansatz(AnsatzKind kind, std::size_t n_qubits, std::size_t layers) {
  return kind == AnsatzKind::kStaggered ? build_staggered_ansatz(n_qubits, layers)
                                        : build_chain_ansatz(n_qubits, layers);
}

// ---------------------------------------------------------------------------
// Simulation

StateVector basis_state(std::size_t n_qubits, std::uint64_t index) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (index >= dim) throw ValidationError("basis index " + std::to_string(index) + " outside 2^" + std::to_string(n_qubits));
  StateVector s = StateVector::Zero(static_cast<Eigen::Index>(dim));
  s[static_cast<Eigen::Index>(index)] = 1.0;
  return s;
}

StateVector simulate_statevector(const Circuit& c, const std::vector<double>& params, std::uint64_t initial) {
  return simulate_statevector(c, params, basis_state(c.n_qubits(), initial));
}

StateVector simulate_statevector(const Circuit& c, const std::vector<double>& params, StateVector initial) {
  check_params(c, params);
  if (initial.size() != static_cast<Eigen::Index>(std::size_t{1} << c.n_qubits())) {
    throw ValidationError("initial state dimension does not match the circuit");
  }
  for (const auto& g : c.gates()) apply_gate(initial, g, params);
  return initial;
}

double expectation(const StateVector& s, const SparseComplexMatrix& h) {
  if (h.rows() != s.size() || h.cols() != s.size()) {
    throw ValidationError("operator dimension " + std::to_string(h.rows()) + " does not match state dimension " +
                          std::to_string(s.size()));
  }
  const StateVector hs = h * s;
  const Complex e = s.dot(hs);  // conjugates s
  if (std::abs(e.imag()) >= 1e-10) {
    throw NumericalError("expectation value has imaginary part " + std::to_string(e.imag()));
  }
  return e.real();
}

double expectation(const StateVector& s, const QubitOperator& h) { return expectation(s, h.to_sparse()); }

double sampled_expectation(const StateVector& s, const PauliSum& h, std::size_t shots, std::uint64_t seed) {
  if (s.size() != static_cast<Eigen::Index>(std::size_t{1} << h.n_qubits())) {
    throw ValidationError("operator and state sizes differ");
  }
  if (shots == 0) throw ValidationError("shot count must be positive");
  std::mt19937_64 rng(seed);
  double total = 0.0;
  for (const auto& [p, coeff] : h.terms()) {
    if (p.is_identity()) {
      total += coeff.real();
      continue;
    }
    Complex ev{};
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      if (s[i] == Complex{}) continue;
      const auto [phase, j] = p.apply_to_basis(static_cast<std::uint64_t>(i));
      ev += std::conj(s[static_cast<Eigen::Index>(j)]) * phase * s[i];
    }
    const double prob_plus = std::clamp((1.0 + ev.real()) / 2.0, 0.0, 1.0);
    std::binomial_distribution<std::size_t> draw(shots, prob_plus);
    const double plus = static_cast<double>(draw(rng));
    total += coeff.real() * (2.0 * plus - static_cast<double>(shots)) / static_cast<double>(shots);
  }
  return total;
}

RealSparseMatrix real_part(const SparseComplexMatrix& h) {
  RealSparseMatrix r = h.real();
  r.prune(0.0);
  r.makeCompressed();
  return r;
}

// ---------------------------------------------------------------------------
// EnergyEvaluator

EnergyEvaluator::EnergyEvaluator(const QubitOperator& h, Circuit circuit, std::uint64_t prep)
    : h_(real_part(h.to_sparse())), circuit_(std::move(circuit)), prep_(prep) {
  if (h.n_qubits() != circuit_.n_qubits()) {
    throw ValidationError("Hamiltonian acts on " + std::to_string(h.n_qubits()) + " qubits, circuit on " +
                          std::to_string(circuit_.n_qubits()));
  }
  if (prep >= h.dimension()) throw ValidationError("preparation index outside the qubit register");
}

RealStateVector EnergyEvaluator::state(const std::vector<double>& params) const {
  check_params(circuit_, params);
  RealStateVector v = RealStateVector::Zero(h_.rows());
  v[static_cast<Eigen::Index>(prep_)] = 1.0;
  for (const auto& g : circuit_.gates()) apply_gate(v, g, params);
  return v;
}

double EnergyEvaluator::energy(const std::vector<double>& params) const {
  const RealStateVector v = state(params);
  return v.dot(h_ * v);
}

double EnergyEvaluator::energy_and_gradient(const std::vector<double>& params, std::vector<double>& grad) const {
  RealStateVector phi = state(params);
  RealStateVector lambda = h_ * phi;
  const double e = phi.dot(lambda);
  grad.assign(params.size(), 0.0);
  RealStateVector mu(phi.size());
  const auto& gates = circuit_.gates();
  for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
    apply_gate(phi, *it, params, /*inverse=*/true);
    if (it->kind == GateKind::kRy) {
      // d/dt Ry(t) = Ry(t + pi) / 2, and dE = 2 <lambda| dU |phi>.
      mu = phi;
      apply_ry(mu, it->qubit, params[it->param] + std::numbers::pi);
      grad[it->param] += lambda.dot(mu);
    }
    apply_gate(lambda, *it, params, /*inverse=*/true);
  }
  return e;
}

double EnergyEvaluator::parameter_shift_gradient(const std::vector<double>& params, std::vector<double>& grad) const {
  check_params(circuit_, params);
  grad.assign(params.size(), 0.0);
  const auto& gates = circuit_.gates();
  const auto run = [&](std::size_t shifted_gate, double shift) {
    RealStateVector v = RealStateVector::Zero(h_.rows());
    v[static_cast<Eigen::Index>(prep_)] = 1.0;
    for (std::size_t k = 0; k < gates.size(); ++k) {
      const Gate& g = gates[k];
      if (k == shifted_gate) {
        apply_ry(v, g.qubit, params[g.param] + shift);
      } else {
        apply_gate(v, g, params);
      }
    }
    return v.dot(h_ * v);
  };
  constexpr double kShift = std::numbers::pi / 2;
  for (std::size_t k = 0; k < gates.size(); ++k) {
    if (gates[k].kind != GateKind::kRy) continue;
    grad[gates[k].param] += 0.5 * (run(k, kShift) - run(k, -kShift));
  }
  return energy(params);
}

std::vector<double> parameter_shift(const std::function<double(const std::vector<double>&)>& f,
                                    const std::vector<double>& params) {
  constexpr double kShift = std::numbers::pi / 2;
  std::vector<double> grad(params.size());
  std::vector<double> x = params;
  for (std::size_t i = 0; i < params.size(); ++i) {
    x[i] = params[i] + kShift;
    const double up = f(x);
    x[i] = params[i] - kShift;
    const double down = f(x);
    x[i] = params[i];
    grad[i] = 0.5 * (up - down);
  }
  return grad;
}

}  // namespace qeevqe
