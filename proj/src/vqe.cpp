#include "qeevqe/vqe.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <random>
#include <thread>

#include "json.hpp"
#include "qeevqe/errors.hpp"

namespace qeevqe {

std::string to_string(InitKind kind) { return kind == InitKind::kHartreeFock ? "hf" : "gaussian"; }

InitKind init_from_string(std::string_view s) {
  if (s == "hf") return InitKind::kHartreeFock;
  if (s == "gaussian") return InitKind::kGaussian;
  throw ConfigError("unknown init strategy '" + std::string(s) + "' (expected hf or gaussian)");
}

double InitStrategy::stddev() const {
  if (!(variance > 0.0)) throw ValidationError("Gaussian spread must be positive");
  return spread_is_stddev ? variance : std::sqrt(variance);
}

std::uint64_t hf_reference_state(const ConfigurationSet& set) {
  if (set.size() == 0) throw ValidationError("empty sector has no reference state");
  return set.encode_index(aufbau_configuration(set.n_spin_orbitals(), set.n_alpha(), set.n_beta()));
}

std::vector<double> initialize_params(const InitStrategy& strategy, std::size_t n_params) {
  std::vector<double> out(n_params, 0.0);
  if (strategy.kind == InitKind::kHartreeFock) return out;
  std::mt19937_64 rng(strategy.seed);
  std::normal_distribution<double> draw(strategy.mean, strategy.stddev());
  for (auto& v : out) v = draw(rng);
  return out;
}

std::size_t resolve_thread_count(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("QEEVQE_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

std::string VqeResult::to_json() const {
  nlohmann::json j;
  j["energy_hartree"] = energy;
  j["initial_energy_hartree"] = initial_energy;
  j["params"] = params;
  j["evaluations"] = evaluations;
  j["converged"] = converged;
  j["stop_reason"] = to_string(stop_reason);
  nlohmann::json h = nlohmann::json::array();
  for (const auto& [k, e] : history) h.push_back({k, e});
  j["history"] = std::move(h);
  j["layers"] = layers;
  j["ansatz"] = ansatz ? to_string(*ansatz) : "custom";
  j["init"] = {{"kind", to_string(init.kind)}, {"seed", init.seed}};
  j["prep"] = prep;
  j["flat_start"] = flat_start;
  return j.dump(2);
}

VqeResult run_vqe(const QubitOperator& h, const Circuit& circuit, std::uint64_t prep, const InitStrategy& init,
                  const VqeConfig& config) {
  const EnergyEvaluator evaluator(h, circuit, prep);
  const Objective objective = [&](const std::vector<double>& x, std::vector<double>& grad) {
    return config.gradient == GradientMethod::kAdjoint ? evaluator.energy_and_gradient(x, grad)
                                                       : evaluator.parameter_shift_gradient(x, grad);
  };
  const MinimizeResult m = minimize(objective, initialize_params(init, circuit.n_params()), config.minimize);

  VqeResult r;
  r.energy = m.f;
  r.initial_energy = m.history.empty() ? m.f : m.history.front().second;
  r.params = m.x;
  r.evaluations = m.evaluations;
  r.converged = m.converged;
  r.stop_reason = m.reason;
  r.history = m.history;
  r.init = init;
  r.layers = circuit.layers();
  r.ansatz = circuit.ansatz();
  r.prep = prep;
  r.initial_gradient_norm = m.initial_gradient_norm;
  r.flat_start = m.initial_gradient_norm <= config.minimize.grad_tol;
  if (config.reference_ground && r.energy < *config.reference_ground - 1e-9) {
    throw NumericalError("VQE energy " + std::to_string(r.energy) + " lies below the exact ground energy " +
                         std::to_string(*config.reference_ground));
  }
  return r;
}

std::vector<VqeResult> layer_sweep(const QubitOperator& h, AnsatzKind family, const std::vector<std::size_t>& layers,
                                   std::uint64_t prep, const InitStrategy& init, std::size_t n_restarts,
                                   const VqeConfig& config) {
  if (layers.empty()) throw ValidationError("layer list is empty");
  if (n_restarts == 0) throw ValidationError("at least one restart is required");
  const std::size_t restarts = init.kind == InitKind::kHartreeFock ? 1 : n_restarts;

  std::vector<Circuit> circuits;
  for (std::size_t l : layers) circuits.push_back(build_ansatz(family, h.n_qubits(), l));

  const std::size_t n_jobs = layers.size() * restarts;
  std::vector<std::optional<VqeResult>> results(n_jobs);
  std::vector<std::exception_ptr> errors(n_jobs);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t job = next++; job < n_jobs; job = next++) {
      const std::size_t li = job / restarts;
      const std::size_t ri = job % restarts;
      InitStrategy s = init;
      s.seed = init.seed + ri;
      try {
        results[job] = run_vqe(h, circuits[li], prep, s, config);
      } catch (...) {
        errors[job] = std::current_exception();
      }
    }
  };
  const std::size_t n_threads = std::min(resolve_thread_count(config.threads), n_jobs);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<VqeResult> best;
  for (std::size_t li = 0; li < layers.size(); ++li) {
    std::size_t pick = li * restarts;
    for (std::size_t ri = 1; ri < restarts; ++ri) {
      if (results[li * restarts + ri]->energy < results[pick]->energy) pick = li * restarts + ri;
    }
    best.push_back(std::move(*results[pick]));
  }
  return best;
}

}  // namespace qeevqe
