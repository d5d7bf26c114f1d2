// qeevqe: encode active-space Hamiltonians, run VQE layer sweeps and compare
// tautomer energies.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qeevqe/errors.hpp"
#include "qeevqe/fermion.hpp"
#include "qeevqe/workflow.hpp"

namespace fs = std::filesystem;
using namespace qeevqe;

namespace {

struct Overrides {
  std::string config;
  std::string encoding;
  std::string ansatz;
  std::string layers;
  std::string init;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> restarts;
  std::string noise;
  std::string out;
};

void add_common(CLI::App* cmd, Overrides& o, bool vqe_flags) {
  cmd->add_option("--config", o.config, "Workflow config (JSON)");
  cmd->add_option("--encoding", o.encoding, "qee or jw")->check(CLI::IsMember({"qee", "jw"}));
  cmd->add_option("--out", o.out, "Output directory");
  if (!vqe_flags) return;
  cmd->add_option("--ansatz", o.ansatz, "staggered or chain")->check(CLI::IsMember({"staggered", "chain"}));
  cmd->add_option("--layers", o.layers, "Comma-separated layer counts, e.g. 2,4,6");
  cmd->add_option("--init", o.init, "hf or gaussian")->check(CLI::IsMember({"hf", "gaussian"}));
  cmd->add_option("--seed", o.seed, "Base seed; restart i uses seed + i");
  cmd->add_option("--restarts", o.restarts, "Restarts per layer count (Gaussian init)");
  cmd->add_option("--noise", o.noise, "Noise model (JSON); evaluates each optimum under noise");
}

WorkflowConfig load_config(const Overrides& o) {
  if (o.config.empty()) throw ConfigError("--config is required");
  WorkflowConfig c = WorkflowConfig::read(o.config);
  if (!o.encoding.empty()) c.encoding = encoding_from_string(o.encoding);
  if (!o.ansatz.empty()) c.ansatz = ansatz_from_string(o.ansatz);
  if (!o.layers.empty()) c.layers = parse_layer_list(o.layers);
  if (!o.init.empty()) c.init.kind = init_from_string(o.init);
  if (o.seed) c.init.seed = *o.seed;
  if (o.restarts) c.restarts = *o.restarts;
  if (!o.noise.empty()) c.noise = fs::path(o.noise);
  if (!o.out.empty()) c.out = fs::path(o.out);
  c.validate();
  return c;
}

void encode_one(const std::string& label, const fs::path& fcidump, const std::optional<fs::path>& occupancy,
                const ActiveSpaceSettings& settings, EncodingKind encoding, const fs::path& dir) {
  IntegralTable full = [&] {
    try {
      return read_fcidump(fcidump.string());
    } catch (const Error& e) {
      throw ValidationError(fcidump.string() + ": " + e.what());
    }
  }();
  std::optional<OccupancyList> occ;
  if (occupancy) {
    try {
      occ = OccupancyList::read_csv(occupancy->string());
    } catch (const Error& e) {
      throw ValidationError(occupancy->string() + ": " + e.what());
    }
  }
  const ActiveSpaceSpec spec = choose_active_space(full, settings, occ);
  const EncodedTautomer e = encode_tautomer(label, full, spec, encoding);
  write_encoded(e, dir);
  std::printf("%s: active %s (%de, %zuo), sector %zu configurations, JW %zu qubits, QEE %zu qubits, exact %.10f Ha\n",
              label.c_str(), spec.label().c_str(), e.active_table.n_electrons(), spec.active.size(), e.sector.size(),
              e.counts.jw, e.counts.qee, e.exact_energy);
}

void cmd_encode(const WorkflowConfig& c) {
  c.check_inputs_exist();
  for (const auto& t : c.tautomers) encode_one(t.label, t.fcidump, t.occupancy, c.active_space, c.encoding, c.out / t.label);
}

int cmd_vqe(const WorkflowConfig& c) {
  bool all_converged = true;
  for (const auto& t : c.tautomers) {
    const fs::path dir = c.out / t.label;
    if (!fs::exists(dir / "summary.json")) {
      throw ConfigError("no encoded Hamiltonian in '" + dir.string() + "'; run `qeevqe encode` first");
    }
    const LoadedHamiltonian h = load_encoded(dir);
    std::optional<NoiseModel> noise;
    if (t.noise) {
      noise = NoiseModel::read(t.noise->string());
    } else if (c.noise) {
      noise = NoiseModel::read(c.noise->string());
    }
    const VqeReport report = run_vqe_report(h, c, noise);
    write_text_file(dir / "vqe.json", vqe_report_json(report, h));
    write_text_file(dir / "convergence.csv", convergence_csv(report));
    for (const auto& rec : report.layers) {
      std::printf("%s L=%zu: E=%.10f Ha, error %.3e Ha (%.4f kcal/mol), %zu evaluations%s\n", t.label.c_str(),
                  rec.result.layers, rec.result.energy, rec.result.energy - report.exact_energy,
                  (rec.result.energy - report.exact_energy) * 627.509474, rec.result.evaluations,
                  rec.result.converged ? "" : " [NOT CONVERGED]");
      if (rec.result.flat_start) {
        std::printf("%s L=%zu: zero gradient at the start point; the optimizer did not move\n", t.label.c_str(),
                    rec.result.layers);
      }
    }
    if (!report.all_converged()) all_converged = false;
  }
  if (!all_converged) {
    std::fprintf(stderr, "error: at least one optimization hit the evaluation budget\n");
    return 2;
  }
  return 0;
}

void cmd_compare(const WorkflowConfig& c) {
  if (c.tautomers.size() < 2) throw ConfigError("comparison needs at least two tautomers");
  std::vector<TautomerSummary> rows;
  for (const auto& t : c.tautomers) rows.push_back(read_tautomer_summary(c.out / t.label));
  const TautomerReport report = compare_tautomers(rows, c.anchor, c.reference_kcal);
  write_text_file(c.out / "report.json", report.to_json());
  write_text_file(c.out / "report.txt", report.to_text());
  std::fputs(report.to_text().c_str(), stdout);
}

int run(int argc, char** argv) {
  CLI::App app{"Qubit-efficient VQE workflow for tautomer energy comparison"};
  app.require_subcommand(1);

  Overrides enc, vqe, cmp, swp;
  std::string fcidump, occupancy, label = "molecule", range;
  std::optional<std::size_t> max_active;
  std::optional<int> active_electrons;
  CLI::App* encode = app.add_subcommand("encode", "Reduce to the active space and encode onto qubits");
  add_common(encode, enc, false);
  encode->add_option("--fcidump", fcidump, "Single FCIDUMP input instead of --config");
  encode->add_option("--occupancy", occupancy, "Occupancy CSV for --fcidump");
  encode->add_option("--label", label, "Label for --fcidump");
  encode->add_option("--max-active", max_active, "Active orbitals picked by occupancy");
  encode->add_option("--active-electrons", active_electrons, "Electrons in the occupancy-picked active space");
  encode->add_option("--range", range, "Explicit active window first-last (0-based)");

  CLI::App* vqe_cmd = app.add_subcommand("vqe", "Run VQE layer sweeps on encoded Hamiltonians");
  add_common(vqe_cmd, vqe, true);

  CLI::App* compare = app.add_subcommand("compare", "Relative tautomer energies from VQE results");
  add_common(compare, cmp, false);

  CLI::App* sweep = app.add_subcommand("sweep", "encode + vqe + compare");
  add_common(sweep, swp, true);

  std::string candidates, rank_out;
  CLI::App* rank = app.add_subcommand("rank-active", "Rank candidate active sets against reference energies");
  rank->add_option("--candidates", candidates, "Candidate JSON")->required();
  rank->add_option("--out", rank_out, "Write the ranking JSON here");

  std::size_t synth_orbitals = 6;
  int synth_electrons = 4;
  std::uint64_t synth_seed = 0;
  double synth_spread = 1.0, synth_scale = 1.0, synth_core = -1.0;
  std::string synth_out;
  CLI::App* synth = app.add_subcommand("synth", "Write a synthetic spin-restricted FCIDUMP");
  synth->add_option("--orbitals", synth_orbitals, "Spatial orbitals");
  synth->add_option("--electrons", synth_electrons, "Electrons");
  synth->add_option("--seed", synth_seed, "Random seed");
  synth->add_option("--spread", synth_spread, "Orbital-energy ladder spread (Hartree)");
  synth->add_option("--scale", synth_scale, "Overall integral scale");
  synth->add_option("--core", synth_core, "Core energy (Hartree)");
  synth->add_option("--out", synth_out, "Output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*encode) {
    if (!fcidump.empty()) {
      ActiveSpaceSettings settings;
      settings.max_active_mos = max_active;
      settings.active_electrons = active_electrons;
      if (!range.empty()) {
        std::size_t a = 0, b = 0;
        if (std::sscanf(range.c_str(), "%zu-%zu", &a, &b) != 2) throw ConfigError("--range expects first-last");
        settings.range = std::make_pair(a, b);
      }
      std::optional<fs::path> occ;
      if (!occupancy.empty()) occ = fs::path(occupancy);
      const fs::path out = enc.out.empty() ? fs::path("qeevqe-out") : fs::path(enc.out);
      const EncodingKind kind = enc.encoding.empty() ? EncodingKind::kQubitEfficient : encoding_from_string(enc.encoding);
      if (!fs::exists(fcidump)) throw ConfigError("input file '" + fcidump + "' does not exist");
      encode_one(label, fcidump, occ, settings, kind, out / label);
      return 0;
    }
    cmd_encode(load_config(enc));
    return 0;
  }
  if (*vqe_cmd) return cmd_vqe(load_config(vqe));
  if (*compare) {
    cmd_compare(load_config(cmp));
    return 0;
  }
  if (*sweep) {
    const WorkflowConfig c = load_config(swp);
    cmd_encode(c);
    const int code = cmd_vqe(c);
    if (c.tautomers.size() >= 2) cmd_compare(c);
    return code;
  }
  if (*rank) {
    const auto [sets, reference] = parse_candidates_json(read_text_file(candidates));
    const auto ranked = rank_candidate_sets(sets, reference);
    if (!rank_out.empty()) write_text_file(rank_out, ranking_json(ranked));
    std::fputs(ranking_text(ranked).c_str(), stdout);
    return 0;
  }
  if (*synth) {
    SyntheticTableOptions opts;
    opts.orbital_energy_spread = synth_spread;
    opts.core_energy = synth_core;
    const IntegralTable t = scaled(random_restricted_table(synth_orbitals, synth_electrons, synth_seed, opts), synth_scale);
    write_text_file(synth_out, write_fcidump(t));
    return 0;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code(e);
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "error: malformed JSON input: %s\n", e.what());
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
