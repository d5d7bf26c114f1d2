#include "qeevqe/noise.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "json.hpp"
#include "qeevqe/errors.hpp"

namespace qeevqe {

namespace {

constexpr double kNanosecondsPerMillisecond = 1e6;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Ry and the X used for state preparation are both u3-class pulses.
const char* duration_key(GateKind kind) { return kind == GateKind::kCnot ? "cnot" : "u3"; }

std::vector<double> read_times(const nlohmann::json& j, const char* key) {
  std::vector<double> out;
  if (!j.contains(key)) return out;
  if (!j.at(key).is_array()) throw ConfigError(std::string(key) + " must be an array");
  for (const auto& v : j.at(key)) {
    if (v.is_null()) {
      out.push_back(kInf);
    } else if (v.is_number()) {
      out.push_back(v.get<double>());
    } else {
      throw ConfigError(std::string(key) + " entries must be numbers or null");
    }
  }
  return out;
}

nlohmann::json write_times(const std::vector<double>& v) {
  nlohmann::json out = nlohmann::json::array();
  for (double x : v) {
    if (std::isinf(x)) {
      out.push_back(nullptr);
    } else {
      out.push_back(x);
    }
  }
  return out;
}

}  // namespace

KrausSet thermal_kraus(double t1_ms, double t2_ms, double t_ns) {
  if (!(t1_ms > 0.0) || !(t2_ms > 0.0)) throw ValidationError("T1 and T2 must be positive");
  if (!(t_ns >= 0.0)) throw ValidationError("duration must be non-negative");
  if (t2_ms > 2.0 * t1_ms) {
    throw PhysicalityError("T2 = " + std::to_string(t2_ms) + " ms exceeds 2 T1 = " + std::to_string(2.0 * t1_ms) +
                           " ms");
  }
  const double t1 = t1_ms * kNanosecondsPerMillisecond;
  const double t2 = t2_ms * kNanosecondsPerMillisecond;
  const double p1 = -std::expm1(-t_ns / t1);
  // Coherence left after amplitude damping is exp(-t/2T1); the phase flip
  // supplies the remaining factor.
  const double lambda = std::exp(-t_ns / t2 + t_ns / (2.0 * t1));
  const double pz = (1.0 - lambda) / 2.0;

  Matrix2c a0, a1, f0, f1;
  a0 << 1.0, 0.0, 0.0, std::sqrt(1.0 - p1);
  a1 << 0.0, std::sqrt(p1), 0.0, 0.0;
  f0 = std::sqrt(1.0 - pz) * Matrix2c::Identity();
  f1 << std::sqrt(pz), 0.0, 0.0, -std::sqrt(pz);

  KrausSet out;
  for (const Matrix2c& f : {f0, f1}) {
    for (const Matrix2c& a : {a0, a1}) {
      Matrix2c k = f * a;
      if (k.cwiseAbs().maxCoeff() > 0.0) out.push_back(k);
    }
  }
  return out;
}

double kraus_completeness_error(const KrausSet& k) {
  Matrix2c sum = Matrix2c::Zero();
  for (const auto& m : k) sum += m.adjoint() * m;
  return (sum - Matrix2c::Identity()).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// NoiseModel

std::map<std::string, double> NoiseModel::default_durations() {
  return {{"u1", 0.0}, {"u2", 50.0}, {"u3", 100.0}, {"cnot", 200.0}, {"reset", 1000.0}, {"measure", 1000.0}};
}

NoiseModel NoiseModel::keto_device() {
  NoiseModel m;
  m.t1_ms = {194.24, 230.20, 218.81, 212.36, 189.67, 198.52, 230.69, 153.56};
  m.t2_ms = {188.28, 219.84, 226.43, 165.82, 236.03, 204.83, 196.17, 166.16};
  m.durations_ns = default_durations();
  return m;
}

NoiseModel NoiseModel::enol_device() {
  NoiseModel m;
  m.t1_ms = {134.45, 147.61, 208.15, 211.67, 170.22, 208.24, 200.66, 242.95};
  m.t2_ms = {60.85, 234.66, 178.45, 210.15, 224.01, 178.00, 105.58, 136.21};
  m.durations_ns = default_durations();
  return m;
}

double NoiseModel::duration(std::string_view key) const {
  auto it = durations_ns.find(std::string(key));
  return it == durations_ns.end() ? 0.0 : it->second;
}

void NoiseModel::validate(std::size_t n_qubits) const {
  if (t1_ms.size() < n_qubits || t2_ms.size() < n_qubits) {
    throw ConfigError("noise model covers " + std::to_string(std::min(t1_ms.size(), t2_ms.size())) +
                      " qubits, circuit has " + std::to_string(n_qubits));
  }
  for (const auto& [key, v] : durations_ns) {
    if (!(v >= 0.0)) throw ConfigError("duration '" + key + "' is negative");
  }
  for (std::size_t q = 0; q < n_qubits; ++q) {
    if (!(t1_ms[q] > 0.0) || !(t2_ms[q] > 0.0)) {
      throw ConfigError("qubit " + std::to_string(q) + ": T1 and T2 must be positive");
    }
    if (t2_ms[q] > 2.0 * t1_ms[q]) throw PhysicalityError("qubit " + std::to_string(q) + ": T2 exceeds 2 T1");
  }
}

NoiseModel NoiseModel::from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("noise model: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("noise model must be a JSON object");
  NoiseModel m;
  m.t1_ms = read_times(j, "t1_ms");
  m.t2_ms = read_times(j, "t2_ms");
  if (m.t1_ms.size() != m.t2_ms.size()) throw ConfigError("t1_ms and t2_ms differ in length");
  if (j.contains("durations_ns")) {
    if (!j.at("durations_ns").is_object()) throw ConfigError("durations_ns must be an object");
    for (const auto& [key, v] : j.at("durations_ns").items()) {
      if (!v.is_number()) throw ConfigError("duration '" + key + "' must be a number");
      m.durations_ns[key] = v.get<double>();
    }
  } else {
    m.durations_ns = default_durations();
  }
  if (j.contains("idle_noise")) m.idle_noise = j.at("idle_noise").get<bool>();
  return m;
}

NoiseModel NoiseModel::read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open noise model '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

std::string NoiseModel::to_json() const {
  nlohmann::json j;
  j["t1_ms"] = write_times(t1_ms);
  j["t2_ms"] = write_times(t2_ms);
  j["durations_ns"] = durations_ns;
  j["idle_noise"] = idle_noise;
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(std::size_t n_qubits, std::uint64_t basis_index) : n_qubits_(n_qubits) {
  if (n_qubits > 12) throw ResourceError("density matrices are limited to 12 qubits");
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n_qubits);
  if (basis_index >= static_cast<std::uint64_t>(dim)) throw ValidationError("basis index outside the register");
  rho_ = ComplexMatrix::Zero(dim, dim);
  rho_(static_cast<Eigen::Index>(basis_index), static_cast<Eigen::Index>(basis_index)) = 1.0;
}

DensityMatrix DensityMatrix::from_state(const StateVector& s) {
  std::size_t n = 0;
  while ((Eigen::Index{1} << n) < s.size()) ++n;
  DensityMatrix d(n);
  d.rho_ = s * s.adjoint();
  return d;
}

void DensityMatrix::apply_gate(const Gate& g, const std::vector<double>& params) {
  // rho -> U rho U^T for the real gate set: apply U to every column, then
  // to every column of the transpose.
  Circuit single(n_qubits_);
  std::vector<double> local;
  switch (g.kind) {
    case GateKind::kRy:
      single.add_ry(g.qubit, 0);
      local.push_back(params.at(g.param));
      break;
    case GateKind::kCnot: single.add_cnot(g.qubit, g.target); break;
    case GateKind::kX: single.add_x(g.qubit); break;
  }
  for (Eigen::Index j = 0; j < rho_.cols(); ++j) rho_.col(j) = simulate_statevector(single, local, StateVector(rho_.col(j)));
  ComplexMatrix t = rho_.transpose();
  for (Eigen::Index j = 0; j < t.cols(); ++j) t.col(j) = simulate_statevector(single, local, StateVector(t.col(j)));
  rho_ = t.transpose();
}

void DensityMatrix::apply_channel(std::size_t qubit, const KrausSet& kraus) {
  if (qubit >= n_qubits_) throw ValidationError("channel qubit outside the register");
  const Eigen::Index bit = Eigen::Index{1} << qubit;
  const Eigen::Index dim = rho_.rows();
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (i & bit) continue;
    for (Eigen::Index j = 0; j < dim; ++j) {
      if (j & bit) continue;
      Matrix2c b;
      b << rho_(i, j), rho_(i, j | bit), rho_(i | bit, j), rho_(i | bit, j | bit);
      Matrix2c out = Matrix2c::Zero();
      for (const auto& k : kraus) out += k * b * k.adjoint();
      rho_(i, j) = out(0, 0);
      rho_(i, j | bit) = out(0, 1);
      rho_(i | bit, j) = out(1, 0);
      rho_(i | bit, j | bit) = out(1, 1);
    }
  }
}

double DensityMatrix::trace() const { return rho_.trace().real(); }

double DensityMatrix::purity() const { return (rho_ * rho_).trace().real(); }

void DensityMatrix::check_valid(double tol) const {
  const double herm = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol) throw NumericalError("density matrix is not Hermitian (deviation " + std::to_string(herm) + ")");
  if (std::abs(trace() - 1.0) > tol) throw NumericalError("density matrix trace is " + std::to_string(trace()));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9) {
    throw NumericalError("density matrix has eigenvalue " + std::to_string(es.eigenvalues().minCoeff()));
  }
}

DensityMatrix simulate_density(const Circuit& c, const std::vector<double>& params, const NoiseModel& model,
                               std::uint64_t initial) {
  if (params.size() != c.n_params()) throw ValidationError("parameter count does not match the circuit");
  model.validate(c.n_qubits());
  DensityMatrix rho(c.n_qubits(), initial);

  std::map<std::pair<std::size_t, double>, KrausSet> cache;
  const auto relax = [&](std::size_t q, double t) {
    if (t <= 0.0) return;
    auto key = std::make_pair(q, t);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, thermal_kraus(model.t1_ms[q], model.t2_ms[q], t)).first;
    rho.apply_channel(q, it->second);
  };

  for (const auto& g : c.gates()) {
    rho.apply_gate(g, params);
    const double t = model.duration(duration_key(g.kind));
    for (std::size_t q = 0; q < c.n_qubits(); ++q) {
      const bool acted = q == g.qubit || (g.kind == GateKind::kCnot && q == g.target);
      if (acted || model.idle_noise) relax(q, t);
    }
  }
  const double t_measure = model.duration("measure");
  for (std::size_t q = 0; q < c.n_qubits(); ++q) relax(q, t_measure);
  return rho;
}

NoisyEnergy noisy_expectation(const DensityMatrix& rho, const QubitOperator& h) {
  const ComplexMatrix& r = rho.matrix();
  if (static_cast<std::size_t>(r.rows()) != h.dimension()) {
    throw ValidationError("density matrix and operator dimensions differ");
  }
  const SparseComplexMatrix m = h.to_sparse();
  const auto d = static_cast<Eigen::Index>(h.physical_dimension());
  Complex raw{};
  Complex projected{};
  for (Eigen::Index i = 0; i < m.outerSize(); ++i) {
    for (SparseComplexMatrix::InnerIterator it(m, i); it; ++it) {
      const Complex term = r(it.col(), i) * it.value();
      raw += term;
      if (i < d && it.col() < d) projected += term;
    }
  }
  double weight = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) weight += r(i, i).real();
  if (weight < 1e-12) throw NumericalError("no population in the encoded subspace");
  return {raw.real(), projected.real() / weight, 1.0 - weight};
}

}  // namespace qeevqe
