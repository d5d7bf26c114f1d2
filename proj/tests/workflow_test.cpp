#include <filesystem>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include <gtest/gtest.h>

#include "json.hpp"
#include "qeevqe/errors.hpp"
#include "qeevqe/fermion.hpp"
#include "qeevqe/noise.hpp"
#include "qeevqe/units.hpp"
#include "qeevqe/workflow.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace qeevqe {
namespace {

struct CliResult {
  int code = -1;
  std::string output;
};

CliResult cli(const std::string& args) {
  const std::string cmd = std::string(QEEVQE_CLI) + " " + args + " 2>&1";
  FILE* p = ::popen(cmd.c_str(), "r");
  CliResult r;
  char buf[512];
  while (std::fgets(buf, sizeof(buf), p) != nullptr) r.output += buf;
  const int status = ::pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class Workflow : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qeevqe_workflow_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    write_text_file(dir_ / name, text);
    return dir_ / name;
  }

  // Two synthetic (4e, 6o) tautomers restricted to the 1-3 window (2e, 3o).
  fs::path two_tautomer_config(const std::string& extra = "") {
    SyntheticTableOptions opts;
    opts.orbital_energy_spread = 1.0;
    opts.core_energy = -5.0;
    write("keto.fcidump", write_fcidump(random_restricted_table(6, 4, 1, opts)));
    opts.core_energy = -4.97;
    write("enol.fcidump", write_fcidump(random_restricted_table(6, 4, 2, opts)));
    return write("config.json", R"({
  "tautomers": [{"label": "keto", "fcidump": "keto.fcidump"}, {"label": "enol", "fcidump": "enol.fcidump"}],
  "anchor": "keto",
  "active_space": {"range": [1, 3]},
  "ansatz": "chain",
  "layers": [2, 3],
  "restarts": 2,
  "seed": 4,
  "out": "out")" + extra + "\n}\n");
  }

  fs::path dir_;
};

TEST_F(Workflow, EncodeReportsQubitCounts) {
  const fs::path f = write("mol.fcidump", write_fcidump(random_restricted_table(6, 4, 3)));
  const CliResult r = cli("encode --fcidump " + f.string() + " --label mol --out " + (dir_ / "out").string());
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("JW 12 qubits, QEE 8 qubits"), std::string::npos) << r.output;
  const json s = json::parse(read_text_file(dir_ / "out" / "mol" / "summary.json"));
  EXPECT_EQ(s["schema"], 1);
  EXPECT_EQ(s["qubits"]["jw"], 12);
  EXPECT_EQ(s["qubits"]["qee"], 8);
  EXPECT_EQ(s["sector_size"], 225);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "mol" / "hamiltonian.coo"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "mol" / "hamiltonian.pauli"));
}

TEST_F(Workflow, SingleOrbitalNeedsNoQubits) {
  IntegralTable t = IntegralTable::restricted(1, 2);
  t.set_spatial_h1(0, 0, -1.25);
  t.set_spatial_eri(0, 0, 0, 0, 0.625);
  const fs::path f = write("h.fcidump", write_fcidump(t));
  const CliResult r = cli("encode --fcidump " + f.string() + " --label h --out " + (dir_ / "out").string());
  ASSERT_EQ(r.code, 0) << r.output;
  const json s = json::parse(read_text_file(dir_ / "out" / "h" / "summary.json"));
  EXPECT_EQ(s["qubits"]["qee"], 0);
  EXPECT_EQ(s["qubits"]["jw"], 2);
  EXPECT_NEAR(s["exact_energy_hartree"].get<double>(), 2 * -1.25 + 0.625, 1e-12);
}

TEST_F(Workflow, MalformedInputsExitWithOne) {
  const fs::path f = write("bad.fcidump", "&FCI NORB=2,NELEC=2,MS2=0,\n ORBSYM=1,1,\n ISYM=1,\n&END\n 0.5 1 x 1 1\n");
  const CliResult r = cli("encode --fcidump " + f.string() + " --out " + (dir_ / "out").string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.output.find("line"), std::string::npos) << r.output;

  EXPECT_EQ(cli("encode --fcidump " + (dir_ / "missing.fcidump").string()).code, 1);
  EXPECT_EQ(cli("vqe --config " + write("broken.json", "{\"tautomers\": [").string()).code, 1);
  EXPECT_EQ(cli("frobnicate").code, 1);
}

TEST_F(Workflow, VqeWritesConvergenceCsvAndCompare) {
  const fs::path config = two_tautomer_config();
  ASSERT_EQ(cli("encode --config " + config.string()).code, 0);
  const CliResult v = cli("vqe --config " + config.string());
  ASSERT_EQ(v.code, 0) << v.output;

  const std::string csv = read_text_file(dir_ / "out" / "keto" / "convergence.csv");
  EXPECT_TRUE(csv.starts_with("layers,energy_hartree,error_hartree,error_kcal,evaluations,converged\n")) << csv;
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);

  const json keto = json::parse(read_text_file(dir_ / "out" / "keto" / "vqe.json"));
  const json enol = json::parse(read_text_file(dir_ / "out" / "enol" / "vqe.json"));
  ASSERT_EQ(cli("compare --config " + config.string()).code, 0);
  const json report = json::parse(read_text_file(dir_ / "out" / "report.json"));
  EXPECT_EQ(report["schema"], 1);

  const double exact_gap = hartree_to_kcal(enol["exact_energy_hartree"].get<double>() -
                                           keto["exact_energy_hartree"].get<double>());
  EXPECT_NEAR(report["relative_kcal"]["exact"]["enol"].get<double>(), exact_gap, 1e-6);
  EXPECT_EQ(report["relative_kcal"]["exact"]["keto"].get<double>(), 0.0);
  const json& rows = report["tautomers"];
  ASSERT_EQ(rows.size(), 2u);
  const double vqe_gap = hartree_to_kcal(rows[1]["vqe_energy_hartree"].get<double>() -
                                         rows[0]["vqe_energy_hartree"].get<double>());
  EXPECT_NEAR(report["relative_kcal"]["vqe"]["enol"].get<double>(), vqe_gap, 1e-6);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "report.txt"));
}

TEST_F(Workflow, NoiseAddsColumns) {
  write("noise.json", R"({"t1_ms": [194.24, 230.20, 218.81, 212.36], "t2_ms": [188.28, 219.84, 226.43, 165.82]})");
  const fs::path config = two_tautomer_config(",\n  \"noise\": \"noise.json\"");
  const CliResult r = cli("sweep --config " + config.string() + " --layers 2");
  ASSERT_EQ(r.code, 0) << r.output;
  const std::string csv = read_text_file(dir_ / "out" / "enol" / "convergence.csv");
  EXPECT_TRUE(csv.starts_with(
      "layers,energy_hartree,error_hartree,error_kcal,evaluations,converged,noisy_energy_raw,noisy_energy_renorm\n"))
      << csv;
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
}

TEST_F(Workflow, CompareNeedsTwoTautomers) {
  write("a.fcidump", write_fcidump(random_restricted_table(3, 2, 1)));
  const fs::path config = write("one.json", R"({"tautomers": [{"label": "a", "fcidump": "a.fcidump"}], "out": "out"})");
  const CliResult r = cli("compare --config " + config.string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.output.find("at least two"), std::string::npos) << r.output;

  const fs::path missing = write("missing.json", R"({"tautomers": [{"label": "a", "fcidump": "nope.fcidump"}]})");
  const CliResult m = cli("encode --config " + missing.string());
  EXPECT_EQ(m.code, 1);
  EXPECT_NE(m.output.find("nope.fcidump"), std::string::npos) << m.output;
}

TEST_F(Workflow, ReferenceColumnAgreement) {
  const TautomerReport r = compare_tautomers(
      {{"keto", "14-19", qubit_counts(12, 2, 2), -1.00, -1.00, 4, std::nullopt},
       {"enol", "14-19", qubit_counts(12, 2, 2), -0.96, -0.96, 4, std::nullopt}},
      "keto", {{"keto", 0.0}, {"enol", 24.070}});
  EXPECT_EQ(r.preferred_vqe, "keto");
  EXPECT_TRUE(r.exact_vqe_agree);
  ASSERT_TRUE(r.reference_agrees.has_value());
  EXPECT_TRUE(*r.reference_agrees);
  EXPECT_NEAR(r.vqe_relative_kcal.at("enol"), 0.04 * 627.509474, 1e-9);
  EXPECT_THROW(compare_tautomers({{"a", "", {}, -1.0, -1.0, 1, std::nullopt},
                                  {"b", "", {}, -1.0, -1.0, 1, std::nullopt}},
                                 "keto"),
               ConfigError);
}

TEST_F(Workflow, RankActive) {
  const fs::path data(QEEVQE_TEST_DATA);
  const CliResult r = cli("rank-active --candidates " + (data / "acetone_candidates.json").string() + " --out " +
                          (dir_ / "rank.json").string());
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("   1  14-19"), std::string::npos) << r.output;
  const json j = json::parse(read_text_file(dir_ / "rank.json"));
  ASSERT_TRUE(j.is_object() || j.is_array());

  const fs::path bad = write("bad.json", R"({"reference": {"keto": 0, "enol": 1},
    "candidates": [{"label": "1-3", "relative_kcal": {"keto": 0, "amine": 1}}]})");
  EXPECT_EQ(cli("rank-active --candidates " + bad.string()).code, 1);
}

TEST_F(Workflow, BudgetExhaustionExitsWithTwo) {
  const fs::path config = two_tautomer_config(",\n  \"max_evals\": 3");
  ASSERT_EQ(cli("encode --config " + config.string()).code, 0);
  const CliResult r = cli("vqe --config " + config.string() + " --layers 3");
  EXPECT_EQ(r.code, 2) << r.output;
  EXPECT_NE(r.output.find("NOT CONVERGED"), std::string::npos);
}

TEST_F(Workflow, SweepOutputsAreByteIdentical) {
  const fs::path config = two_tautomer_config();
  ASSERT_EQ(cli("sweep --config " + config.string() + " --out " + (dir_ / "a").string()).code, 0);
  ASSERT_EQ(cli("sweep --config " + config.string() + " --out " + (dir_ / "b").string()).code, 0);
  for (const char* f : {"keto/vqe.json", "enol/vqe.json", "keto/summary.json", "keto/convergence.csv", "report.json"}) {
    EXPECT_EQ(read_text_file(dir_ / "a" / f), read_text_file(dir_ / "b" / f)) << f;
  }
}

}  // namespace
}  // namespace qeevqe
