#include "qeevqe/workflow.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qeevqe/errors.hpp"
#include "qeevqe/oracle.hpp"
#include "qeevqe/units.hpp"

namespace qeevqe {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

json parse_json(std::string_view text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

void check_label(const std::string& label) {
  if (label.empty()) throw ConfigError("tautomer label is empty");
  for (char c : label) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) {
      throw ConfigError("tautomer label '" + label + "' may only contain letters, digits, '_', '-' and '.'");
    }
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fixed(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string argmin(const std::map<std::string, double>& m) {
  auto it = std::min_element(m.begin(), m.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
  return it->first;
}

json noisy_json(const std::optional<NoisyEnergy>& n) {
  if (!n) return nullptr;
  return {{"raw_hartree", n->raw}, {"renormalized_hartree", n->renormalized}, {"leakage", n->leakage}};
}

std::optional<NoisyEnergy> noisy_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  return NoisyEnergy{j.at("raw_hartree").get<double>(), j.at("renormalized_hartree").get<double>(),
                     j.at("leakage").get<double>()};
}

}  // namespace

// ---------------------------------------------------------------------------
// Files and config

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
}

std::vector<std::size_t> parse_layer_list(std::string_view csv) {
  std::vector<std::size_t> out;
  std::string item;
  std::istringstream in{std::string(csv)};
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) throw ConfigError("empty entry in layer list '" + std::string(csv) + "'");
    item = item.substr(first, item.find_last_not_of(" \t") - first + 1);
    if (item.find_first_not_of("0123456789") != std::string::npos) {
      throw ConfigError("layer count '" + item + "' is not a non-negative integer");
    }
    out.push_back(std::stoul(item));
  }
  if (out.empty()) throw ConfigError("layer list is empty");
  return out;
}

WorkflowConfig WorkflowConfig::from_json(std::string_view text, const fs::path& base_dir) {
  const json j = parse_json(text, "config");
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  WorkflowConfig c;
  if (j.contains("tautomers")) {
    for (const auto& t : j.at("tautomers")) {
      TautomerInput in;
      in.label = get_or<std::string>(t, "label", "");
      in.fcidump = resolve(base_dir, get_or<std::string>(t, "fcidump", ""));
      if (t.contains("occupancy")) in.occupancy = resolve(base_dir, t.at("occupancy").get<std::string>());
      if (t.contains("noise")) in.noise = resolve(base_dir, t.at("noise").get<std::string>());
      c.tautomers.push_back(std::move(in));
    }
  }
  c.anchor = get_or<std::string>(j, "anchor", c.tautomers.empty() ? "" : c.tautomers.front().label);
  if (j.contains("active_space")) {
    const json& a = j.at("active_space");
    if (a.contains("max_active_mos")) c.active_space.max_active_mos = a.at("max_active_mos").get<std::size_t>();
    if (a.contains("active_electrons")) c.active_space.active_electrons = a.at("active_electrons").get<int>();
    if (a.contains("range")) {
      const auto r = a.at("range").get<std::vector<std::size_t>>();
      if (r.size() != 2) throw ConfigError("active_space.range must be [first, last]");
      c.active_space.range = std::make_pair(r[0], r[1]);
    }
    if (a.contains("active")) {
      ActiveSpaceSpec s;
      s.active = a.at("active").get<std::vector<std::size_t>>();
      s.frozen = get_or<std::vector<std::size_t>>(a, "frozen", {});
      s.removed = get_or<std::vector<std::size_t>>(a, "removed", {});
      c.active_space.explicit_spec = std::move(s);
    }
  }
  c.encoding = encoding_from_string(get_or<std::string>(j, "encoding", "qee"));
  c.ansatz = ansatz_from_string(get_or<std::string>(j, "ansatz", "staggered"));
  if (j.contains("layers")) {
    const json& l = j.at("layers");
    c.layers = l.is_string() ? parse_layer_list(l.get<std::string>()) : l.get<std::vector<std::size_t>>();
  }
  c.init.kind = init_from_string(get_or<std::string>(j, "init", "gaussian"));
  c.init.seed = get_or<std::uint64_t>(j, "seed", 0);
  c.init.variance = get_or<double>(j, "variance", 0.3);
  c.init.spread_is_stddev = get_or<bool>(j, "variance_is_stddev", false);
  c.restarts = get_or<std::size_t>(j, "restarts", 5);
  const std::string gradient = get_or<std::string>(j, "gradient", "adjoint");
  if (gradient == "adjoint") {
    c.vqe.gradient = GradientMethod::kAdjoint;
  } else if (gradient == "parameter_shift") {
    c.vqe.gradient = GradientMethod::kParameterShift;
  } else {
    throw ConfigError("gradient must be adjoint or parameter_shift");
  }
  c.vqe.minimize.grad_tol = get_or<double>(j, "grad_tol", c.vqe.minimize.grad_tol);
  c.vqe.minimize.f_tol = get_or<double>(j, "f_tol", c.vqe.minimize.f_tol);
  c.vqe.minimize.max_evals = get_or<std::size_t>(j, "max_evals", c.vqe.minimize.max_evals);
  c.vqe.threads = get_or<std::size_t>(j, "threads", 0);
  if (j.contains("noise") && !j.at("noise").is_null()) c.noise = resolve(base_dir, j.at("noise").get<std::string>());
  c.out = resolve(base_dir, get_or<std::string>(j, "out", "qeevqe-out"));
  if (j.contains("reference_kcal")) c.reference_kcal = j.at("reference_kcal").get<std::map<std::string, double>>();
  return c;
}

WorkflowConfig WorkflowConfig::read(const fs::path& path) {
  return from_json(read_text_file(path), path.parent_path());
}

void WorkflowConfig::validate() const {
  if (tautomers.empty()) throw ConfigError("config lists no tautomers");
  std::map<std::string, int> seen;
  for (const auto& t : tautomers) {
    check_label(t.label);
    if (++seen[t.label] > 1) throw ConfigError("duplicate tautomer label '" + t.label + "'");
    if (t.fcidump.empty()) throw ConfigError("tautomer '" + t.label + "' has no fcidump path");
  }
  if (!seen.count(anchor)) throw ConfigError("anchor '" + anchor + "' is not one of the tautomers");
  if (layers.empty()) throw ConfigError("layer list is empty");
  if (restarts == 0) throw ConfigError("restarts must be positive");
  if (init.kind == InitKind::kGaussian && !(init.variance > 0.0)) throw ConfigError("variance must be positive");
  if (active_space.max_active_mos && *active_space.max_active_mos == 0) {
    throw ConfigError("max_active_mos must be positive");
  }
}

void WorkflowConfig::check_inputs_exist() const {
  const auto need = [](const fs::path& p) {
    if (!fs::exists(p)) throw ConfigError("input file '" + p.string() + "' does not exist");
  };
  for (const auto& t : tautomers) {
    need(t.fcidump);
    if (t.occupancy) need(*t.occupancy);
    if (t.noise) need(*t.noise);
  }
  if (noise) need(*noise);
}

// ---------------------------------------------------------------------------
// Encoding

ActiveSpaceSpec choose_active_space(const IntegralTable& full, const ActiveSpaceSettings& settings,
                                    const std::optional<OccupancyList>& occupancy) {
  const std::size_t n = full.n_spatial();
  if (settings.explicit_spec) {
    settings.explicit_spec->validate(n);
    return *settings.explicit_spec;
  }
  if (settings.range) return ActiveSpaceSpec::from_range(n, settings.range->first, settings.range->second);
  if (settings.max_active_mos) {
    if (!occupancy) throw ConfigError("max_active_mos needs an occupancy file");
    if (occupancy->entries.size() != n) {
      throw ValidationError("occupancy list has " + std::to_string(occupancy->entries.size()) +
                            " orbitals, integrals have " + std::to_string(n));
    }
    return select_active_by_occupancy(*occupancy, full.n_electrons(), *settings.max_active_mos,
                                      settings.active_electrons);
  }
  return ActiveSpaceSpec::full(n);
}

EncodedTautomer encode_tautomer(const std::string& label, const IntegralTable& full, const ActiveSpaceSpec& spec,
                                EncodingKind encoding) {
  IntegralTable active = freeze_reduce(full, spec);
  ConfigurationSet sector =
      ConfigurationSet::enumerate(active.n_spin_orbitals(), active.n_alpha(), active.n_beta());
  const QubitCounts counts = qubit_counts(active.n_spin_orbitals(), active.n_alpha(), active.n_beta());
  const Configuration hf = aufbau_configuration(active.n_spin_orbitals(), active.n_alpha(), active.n_beta());

  if (encoding == EncodingKind::kJordanWigner) {
    QubitOperator h = jw_encode(active);
    const double exact = hermitian_spectrum(jw_sector_matrix(h.to_pauli(), sector)).ground_energy();
    return {label, spec, std::move(active), std::move(sector), counts, encoding, std::move(h), hf.bits, exact};
  }
  QubitOperator h = qee_hamiltonian(active, sector);
  const double exact = exact_ground(h, true, &sector).ground_energy();
  const std::uint64_t prep = sector.encode_index(hf);
  return {label, spec, std::move(active), std::move(sector), counts, encoding, std::move(h), prep, exact};
}

std::string encode_summary_json(const EncodedTautomer& e) {
  json j;
  j["schema"] = kSchemaVersion;
  j["label"] = e.label;
  j["active_space"] = {{"label", e.spec.label()},
                       {"frozen", e.spec.frozen},
                       {"active", e.spec.active},
                       {"removed", e.spec.removed}};
  j["n_spin_orbitals"] = e.active_table.n_spin_orbitals();
  j["n_alpha"] = e.sector.n_alpha();
  j["n_beta"] = e.sector.n_beta();
  j["sector_size"] = e.sector.size();
  j["qubits"] = {{"jw", e.counts.jw}, {"qee", e.counts.qee}};
  j["encoding"] = to_string(e.encoding);
  j["encoded_qubits"] = e.hamiltonian.n_qubits();
  j["physical_dimension"] = e.hamiltonian.physical_dimension();
  j["prep"] = e.prep;
  j["core_energy_hartree"] = e.active_table.core_energy();
  j["exact_energy_hartree"] = e.exact_energy;
  return j.dump(2) + "\n";
}

void write_encoded(const EncodedTautomer& e, const fs::path& dir) {
  write_text_file(dir / "summary.json", encode_summary_json(e));
  write_text_file(dir / "hamiltonian.coo", to_coordinate_text(e.hamiltonian));
  if (e.hamiltonian.n_qubits() <= kDefaultDenseQubitCap) {
    write_text_file(dir / "hamiltonian.pauli", e.hamiltonian.to_pauli().to_text());
  }
}

LoadedHamiltonian load_encoded(const fs::path& dir) {
  const json s = parse_json(read_text_file(dir / "summary.json"), (dir / "summary.json").string());
  const EncodingKind kind = encoding_from_string(s.at("encoding").get<std::string>());
  QubitOperator h = from_coordinate_text(read_text_file(dir / "hamiltonian.coo"), kind);
  return {s.at("label").get<std::string>(),
          std::move(h),
          s.at("prep").get<std::uint64_t>(),
          s.at("exact_energy_hartree").get<double>(),
          s.at("active_space").at("label").get<std::string>(),
          {s.at("qubits").at("jw").get<std::size_t>(), s.at("qubits").at("qee").get<std::size_t>()}};
}

// ---------------------------------------------------------------------------
// VQE reports

bool VqeReport::all_converged() const {
  return std::all_of(layers.begin(), layers.end(), [](const LayerRecord& r) { return r.result.converged; });
}

const LayerRecord& VqeReport::best() const {
  if (layers.empty()) throw ValidationError("VQE report has no layers");
  return *std::min_element(layers.begin(), layers.end(), [](const LayerRecord& a, const LayerRecord& b) {
    return a.result.energy < b.result.energy;
  });
}

VqeReport run_vqe_report(const LoadedHamiltonian& h, const WorkflowConfig& config,
                         const std::optional<NoiseModel>& noise) {
  VqeConfig vc = config.vqe;
  vc.reference_ground = h.exact_energy;
  const auto results = layer_sweep(h.hamiltonian, config.ansatz, config.layers, h.prep, config.init, config.restarts, vc);
  VqeReport report{h.label, h.exact_energy, {}};
  for (const auto& r : results) {
    LayerRecord rec{r, std::nullopt};
    if (noise) {
      // Optimize noiselessly, then evaluate the optimum under noise.
      const Circuit c = build_ansatz(config.ansatz, h.hamiltonian.n_qubits(), r.layers);
      rec.noisy = noisy_expectation(simulate_density(c, r.params, *noise, h.prep), h.hamiltonian);
    }
    report.layers.push_back(std::move(rec));
  }
  return report;
}

std::string vqe_report_json(const VqeReport& r, const LoadedHamiltonian& h) {
  json j;
  j["schema"] = kSchemaVersion;
  j["label"] = r.label;
  j["active_space"] = h.active_space;
  j["qubits"] = {{"jw", h.counts.jw}, {"qee", h.counts.qee}};
  j["exact_energy_hartree"] = r.exact_energy;
  json layers = json::array();
  for (const auto& rec : r.layers) {
    json l = json::parse(rec.result.to_json());
    l["error_hartree"] = rec.result.energy - r.exact_energy;
    l["error_kcal"] = hartree_to_kcal(rec.result.energy - r.exact_energy);
    l["noisy"] = noisy_json(rec.noisy);
    layers.push_back(std::move(l));
  }
  j["results"] = std::move(layers);
  return j.dump(2) + "\n";
}

std::string convergence_csv(const VqeReport& r) {
  const bool noisy = !r.layers.empty() && r.layers.front().noisy.has_value();
  std::string out = "layers,energy_hartree,error_hartree,error_kcal,evaluations,converged";
  if (noisy) out += ",noisy_energy_raw,noisy_energy_renorm";
  out += "\n";
  for (const auto& rec : r.layers) {
    const double err = rec.result.energy - r.exact_energy;
    out += std::to_string(rec.result.layers) + "," + fmt(rec.result.energy) + "," + fmt(err) + "," +
           fmt(hartree_to_kcal(err)) + "," + std::to_string(rec.result.evaluations) + "," +
           (rec.result.converged ? "true" : "false");
    if (noisy) out += "," + fmt(rec.noisy->raw) + "," + fmt(rec.noisy->renormalized);
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tautomer comparison

TautomerSummary summarize(const VqeReport& report, const LoadedHamiltonian& h) {
  const LayerRecord& best = report.best();
  return {h.label, h.active_space, h.counts, report.exact_energy, best.result.energy, best.result.layers, best.noisy};
}

TautomerSummary read_tautomer_summary(const fs::path& dir) {
  const fs::path path = dir / "vqe.json";
  const json j = parse_json(read_text_file(path), path.string());
  const json& results = j.at("results");
  if (results.empty()) throw ValidationError("'" + path.string() + "' holds no results");
  const json* best = &results.front();
  for (const auto& r : results) {
    if (r.at("energy_hartree").get<double>() < best->at("energy_hartree").get<double>()) best = &r;
  }
  return {j.at("label").get<std::string>(),
          j.at("active_space").get<std::string>(),
          {j.at("qubits").at("jw").get<std::size_t>(), j.at("qubits").at("qee").get<std::size_t>()},
          j.at("exact_energy_hartree").get<double>(),
          best->at("energy_hartree").get<double>(),
          best->at("layers").get<std::size_t>(),
          noisy_from_json(best->at("noisy"))};
}

TautomerReport compare_tautomers(const std::vector<TautomerSummary>& tautomers, const std::string& anchor,
                                 const std::map<std::string, double>& reference_kcal) {
  if (tautomers.size() < 2) throw ConfigError("comparison needs at least two tautomers");
  std::map<std::string, double> exact;
  std::map<std::string, double> vqe;
  for (const auto& t : tautomers) {
    exact[t.label] = t.exact_energy;
    vqe[t.label] = t.vqe_energy;
  }
  if (!exact.count(anchor)) throw ConfigError("anchor '" + anchor + "' is not among the compared tautomers");
  TautomerReport r;
  r.anchor = anchor;
  r.tautomers = tautomers;
  r.exact_relative_kcal = relative_energies(exact, anchor);
  r.vqe_relative_kcal = relative_energies(vqe, anchor);
  r.preferred_exact = argmin(exact);
  r.preferred_vqe = argmin(vqe);
  r.exact_vqe_agree = r.preferred_exact == r.preferred_vqe;
  if (!reference_kcal.empty()) {
    r.reference_kcal = reference_kcal;
    r.preferred_reference = argmin(reference_kcal);
    r.reference_agrees = *r.preferred_reference == r.preferred_vqe;
  }
  return r;
}

std::string TautomerReport::to_json() const {
  json j;
  j["schema"] = kSchemaVersion;
  j["anchor"] = anchor;
  json rows = json::array();
  for (const auto& t : tautomers) {
    rows.push_back({{"label", t.label},
                    {"active_space", t.active_space},
                    {"qubits", {{"jw", t.counts.jw}, {"qee", t.counts.qee}}},
                    {"exact_energy_hartree", t.exact_energy},
                    {"vqe_energy_hartree", t.vqe_energy},
                    {"vqe_layers", t.vqe_layers},
                    {"vqe_error_hartree", t.vqe_energy - t.exact_energy},
                    {"vqe_error_kcal", hartree_to_kcal(t.vqe_energy - t.exact_energy)},
                    {"noisy", noisy_json(t.noisy)}});
  }
  j["tautomers"] = std::move(rows);
  j["relative_kcal"] = {{"exact", exact_relative_kcal}, {"vqe", vqe_relative_kcal}};
  if (!reference_kcal.empty()) j["relative_kcal"]["reference"] = reference_kcal;
  j["preferred"] = {{"exact", preferred_exact}, {"vqe", preferred_vqe}};
  if (preferred_reference) j["preferred"]["reference"] = *preferred_reference;
  j["exact_vqe_agree"] = exact_vqe_agree;
  j["reference_agrees"] = reference_agrees ? json(*reference_agrees) : json(nullptr);
  return j.dump(2) + "\n";
}

std::string TautomerReport::to_text() const {
  std::ostringstream out;
  const bool has_ref = !reference_kcal.empty();
  out << "tautomer      active     exact(kcal/mol)   vqe(kcal/mol)   vqe error(kcal/mol)";
  if (has_ref) out << "   reference(kcal/mol)";
  out << "\n";
  for (const auto& t : tautomers) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-13s %-10s %15s %15s %21s", t.label.c_str(), t.active_space.c_str(),
                  fixed(exact_relative_kcal.at(t.label), 3).c_str(), fixed(vqe_relative_kcal.at(t.label), 3).c_str(),
                  fixed(hartree_to_kcal(t.vqe_energy - t.exact_energy), 3).c_str());
    out << line;
    if (has_ref) {
      auto it = reference_kcal.find(t.label);
      char ref[32];
      std::snprintf(ref, sizeof(ref), " %21s", it == reference_kcal.end() ? "-" : fixed(it->second, 3).c_str());
      out << ref;
    }
    out << "\n";
  }
  out << "preferred (exact): " << preferred_exact << "\n";
  out << "preferred (vqe):   " << preferred_vqe << (exact_vqe_agree ? "" : "  [DISAGREES with exact]") << "\n";
  if (preferred_reference) {
    out << "preferred (reference): " << *preferred_reference << (*reference_agrees ? "  [agrees]" : "  [disagrees]")
        << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Candidate ranking

std::pair<std::vector<CandidateSet>, std::map<std::string, double>> parse_candidates_json(std::string_view text) {
  const json j = parse_json(text, "candidates");
  if (!j.contains("reference") || !j.contains("candidates")) {
    throw ConfigError("candidate file needs 'reference' and 'candidates'");
  }
  const auto reference = j.at("reference").get<std::map<std::string, double>>();
  std::vector<CandidateSet> out;
  for (const auto& c : j.at("candidates")) {
    CandidateSet cs;
    cs.label = c.at("label").get<std::string>();
    cs.relative_kcal = c.at("relative_kcal").get<std::map<std::string, double>>();
    if (c.contains("active")) {
      cs.spec.active = c.at("active").get<std::vector<std::size_t>>();
    } else {
      std::size_t a = 0, b = 0;
      char dash = 0;
      std::istringstream ls(cs.label);
      if (!(ls >> a >> dash >> b) || dash != '-' || b < a) {
        throw ConfigError("candidate label '" + cs.label + "' is not of the form first-last");
      }
      for (std::size_t k = a; k <= b; ++k) cs.spec.active.push_back(k);
    }
    out.push_back(std::move(cs));
  }
  return {std::move(out), reference};
}

std::string ranking_json(const std::vector<RankedCandidate>& ranked) {
  json rows = json::array();
  std::size_t rank = 1;
  for (const auto& r : ranked) {
    rows.push_back({{"rank", rank++},
                    {"label", r.candidate.label},
                    {"active_orbitals", r.candidate.spec.active.size()},
                    {"deviation_kcal", r.deviation_kcal},
                    {"relative_kcal", r.candidate.relative_kcal}});
  }
  return json{{"schema", kSchemaVersion}, {"ranking", rows}}.dump(2) + "\n";
}

std::string ranking_text(const std::vector<RankedCandidate>& ranked) {
  std::ostringstream out;
  out << "rank  active set   orbitals  max deviation (kcal/mol)\n";
  std::size_t rank = 1;
  for (const auto& r : ranked) {
    char line[128];
    std::snprintf(line, sizeof(line), "%4zu  %-11s %9zu  %24s\n", rank++, r.candidate.label.c_str(),
                  r.candidate.spec.active.size(), fixed(r.deviation_kcal, 3).c_str());
    out << line;
  }
  return out.str();
}

}  // namespace qeevqe
