#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qeevqe/circuit.hpp"
#include "qeevqe/configspace.hpp"
#include "qeevqe/encode.hpp"
#include "qeevqe/fermion.hpp"
#include "qeevqe/noise.hpp"
#include "qeevqe/vqe.hpp"

namespace qeevqe {

inline constexpr int kSchemaVersion = 1;

struct TautomerInput {
  std::string label;
  std::filesystem::path fcidump;
  std::optional<std::filesystem::path> occupancy;
  /// Per-tautomer noise model; overrides WorkflowConfig::noise.
  std::optional<std::filesystem::path> noise;
};

struct ActiveSpaceSettings {
  std::optional<std::size_t> max_active_mos;
  std::optional<int> active_electrons;
  /// Inclusive window of active spatial orbitals.
  std::optional<std::pair<std::size_t, std::size_t>> range;
  std::optional<ActiveSpaceSpec> explicit_spec;
};

struct WorkflowConfig {
  std::vector<TautomerInput> tautomers;
  std::string anchor;
  ActiveSpaceSettings active_space;
  EncodingKind encoding = EncodingKind::kQubitEfficient;
  AnsatzKind ansatz = AnsatzKind::kStaggered;
  std::vector<std::size_t> layers{2, 4, 6, 8, 10, 12, 14, 16, 18, 20};
  InitStrategy init = InitStrategy::gaussian(0);
  std::size_t restarts = 5;
  VqeConfig vqe;
  std::optional<std::filesystem::path> noise;
  std::filesystem::path out = "qeevqe-out";
  /// User-supplied relative energies (kcal/mol) shown next to the computed ones.
  std::map<std::string, double> reference_kcal;

  /// Relative paths are resolved against `base_dir`.
  static WorkflowConfig from_json(std::string_view text, const std::filesystem::path& base_dir = {});
  static WorkflowConfig read(const std::filesystem::path& path);

  void validate() const;
  /// ConfigError naming the first input file that does not exist.
  void check_inputs_exist() const;
};

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Parses "2,4,6" into {2, 4, 6}.
std::vector<std::size_t> parse_layer_list(std::string_view csv);

struct EncodedTautomer {
  std::string label;
  ActiveSpaceSpec spec;
  IntegralTable active_table;
  ConfigurationSet sector;
  QubitCounts counts;
  EncodingKind encoding = EncodingKind::kQubitEfficient;
  QubitOperator hamiltonian;
  /// Basis index of the Hartree-Fock configuration in the chosen encoding.
  std::uint64_t prep = 0;
  /// Ground energy of the active-space Hamiltonian in the electron sector.
  double exact_energy = 0.0;
};

ActiveSpaceSpec choose_active_space(const IntegralTable& full, const ActiveSpaceSettings& settings,
                                    const std::optional<OccupancyList>& occupancy);

EncodedTautomer encode_tautomer(const std::string& label, const IntegralTable& full, const ActiveSpaceSpec& spec,
                                EncodingKind encoding);

/// Writes summary.json, hamiltonian.coo and (for at most 14 qubits)
/// hamiltonian.pauli into `dir`.
void write_encoded(const EncodedTautomer& e, const std::filesystem::path& dir);
std::string encode_summary_json(const EncodedTautomer& e);

struct LoadedHamiltonian {
  std::string label;
  QubitOperator hamiltonian;
  std::uint64_t prep = 0;
  double exact_energy = 0.0;
  std::string active_space;
  QubitCounts counts;
};

LoadedHamiltonian load_encoded(const std::filesystem::path& dir);

struct LayerRecord {
  VqeResult result;
  std::optional<NoisyEnergy> noisy;
};

struct VqeReport {
  std::string label;
  double exact_energy = 0.0;
  std::vector<LayerRecord> layers;

  bool all_converged() const;
  /// Layer record with the lowest noiseless energy.
  const LayerRecord& best() const;
};

VqeReport run_vqe_report(const LoadedHamiltonian& h, const WorkflowConfig& config,
                         const std::optional<NoiseModel>& noise);

std::string vqe_report_json(const VqeReport& r, const LoadedHamiltonian& h);
/// `layers,energy_hartree,error_hartree,error_kcal,evaluations,converged`,
/// plus `noisy_energy_raw,noisy_energy_renorm` when noise was evaluated.
std::string convergence_csv(const VqeReport& r);

struct TautomerSummary {
  std::string label;
  std::string active_space;
  QubitCounts counts;
  double exact_energy = 0.0;
  double vqe_energy = 0.0;
  std::size_t vqe_layers = 0;
  std::optional<NoisyEnergy> noisy;
};

struct TautomerReport {
  std::string anchor;
  std::vector<TautomerSummary> tautomers;
  std::map<std::string, double> exact_relative_kcal;
  std::map<std::string, double> vqe_relative_kcal;
  std::map<std::string, double> reference_kcal;
  std::string preferred_exact;
  std::string preferred_vqe;
  std::optional<std::string> preferred_reference;
  bool exact_vqe_agree = false;
  std::optional<bool> reference_agrees;

  std::string to_json() const;
  std::string to_text() const;
};

TautomerReport compare_tautomers(const std::vector<TautomerSummary>& tautomers, const std::string& anchor,
                                 const std::map<std::string, double>& reference_kcal = {});

TautomerSummary summarize(const VqeReport& report, const LoadedHamiltonian& h);
/// Reads summary.json and vqe.json back from a tautomer directory.
TautomerSummary read_tautomer_summary(const std::filesystem::path& dir);

std::string ranking_json(const std::vector<RankedCandidate>& ranked);
std::string ranking_text(const std::vector<RankedCandidate>& ranked);

/// Parses {"reference": {...}, "candidates": [{"label": "14-19", "relative_kcal": {...}}, ...]}.
/// Labels of the form "a-b" define the active window a..b.
std::pair<std::vector<CandidateSet>, std::map<std::string, double>> parse_candidates_json(std::string_view text);

}  // namespace qeevqe
