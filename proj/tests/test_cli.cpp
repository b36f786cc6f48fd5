#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string cli_path() { return QOC_CLI_PATH; }

struct CmdResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

CmdResult run_cmd(const std::string& args, const std::string& env_prefix = "") {
  const std::string out = (fs::temp_directory_path() / "qoc_cli_out.txt").string();
  const std::string cmd = env_prefix + cli_path() + " " + args + " > " + out + " 2>&1";
  const int rc = std::system(cmd.c_str());
  CmdResult r;
  r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  std::ifstream f(out);
  std::stringstream ss;
  ss << f.rdbuf();
  r.output = ss.str();
  std::remove(out.c_str());
  return r;
}

std::string write_temp_config(const char* name, const std::string& body) {
  const std::string path = (fs::temp_directory_path() / name).string();
  std::ofstream f(path);
  f << body;
  return path;
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

const char* kQuickTransfer = R"([problem]
builtin = qubit-transfer
steps = 60

[optimizer]
method = adam
learning_rate = 0.05
max_iterations = 400
seed = 5
)";

}  // namespace

TEST_CASE("describe prints the layout of each builtin") {
  const CmdResult cat = run_cmd("describe cat");
  CHECK(cat.exit_code == 0);
  CHECK(cat.output.find("dim (l): 154") != std::string::npos);
  CHECK(cat.output.find("state_infidelity") != std::string::npos);

  const CmdResult qt = run_cmd("describe qubit-transfer");
  CHECK(qt.exit_code == 0);
  CHECK(qt.output.find("dim (l): 2") != std::string::npos);
  CHECK(qt.output.find("steps (N): 300") != std::string::npos);
  CHECK(qt.output.find("Omega_x") != std::string::npos);

  const CmdResult bad = run_cmd("describe bogus");
  CHECK(bad.exit_code == 1);
  CHECK(bad.output.find("qubit-transfer") != std::string::npos);  // lists builtins
}

TEST_CASE("run: same config and seed give byte-identical pulses.csv") {
  const std::string cfg = write_temp_config("qoc_cli_run.ini", kQuickTransfer);
  const fs::path out1 = fs::temp_directory_path() / "qoc_cli_run1";
  const fs::path out2 = fs::temp_directory_path() / "qoc_cli_run2";
  fs::remove_all(out1);
  fs::remove_all(out2);

  const CmdResult r1 = run_cmd("run " + cfg + " --out-dir " + out1.string());
  const CmdResult r2 = run_cmd("run " + cfg + " --out-dir " + out2.string());
  CHECK((r1.exit_code == 0 || r1.exit_code == 2));
  CHECK(r1.exit_code == r2.exit_code);
  CHECK(r1.output.find("termination:") != std::string::npos);

  for (const char* f : {"pulses.csv", "trace.jsonl", "report.json", "populations.csv"}) {
    CAPTURE(f);
    CHECK(fs::exists(out1 / f));
  }
  const std::string a = read_file(out1 / "pulses.csv");
  const std::string b = read_file(out2 / "pulses.csv");
  CHECK(!a.empty());
  CHECK(a == b);

  // A different seed changes the result.
  const fs::path out3 = fs::temp_directory_path() / "qoc_cli_run3";
  fs::remove_all(out3);
  run_cmd("run " + cfg + " --out-dir " + out3.string() + " --seed 99");
  CHECK(read_file(out3 / "pulses.csv") != a);

  std::remove(cfg.c_str());
  fs::remove_all(out1);
  fs::remove_all(out2);
  fs::remove_all(out3);
}

TEST_CASE("run: malformed config exits 1 and writes nothing") {
  const std::string cfg =
      write_temp_config("qoc_cli_bad.ini", "[problem]\nbuiltin = nonsense\n");
  const fs::path out = fs::temp_directory_path() / "qoc_cli_bad_out";
  fs::remove_all(out);
  const CmdResult r = run_cmd("run " + cfg + " --out-dir " + out.string());
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("config error") != std::string::npos);
  CHECK(!fs::exists(out / "pulses.csv"));
  std::remove(cfg.c_str());
  fs::remove_all(out);

  const CmdResult missing = run_cmd("run /nonexistent/qoc.ini");
  CHECK(missing.exit_code == 1);
}

TEST_CASE("grad-check passes on a small problem and fails when corrupted") {
  const std::string cfg = write_temp_config("qoc_cli_gc.ini",
                                            "[problem]\nbuiltin = random\nseed = 3\n"
                                            "[optimizer]\nseed = 3\n");
  const CmdResult ok = run_cmd("grad-check " + cfg);
  CHECK(ok.exit_code == 0);
  CHECK(ok.output.find("PASS") != std::string::npos);
  CHECK(ok.output.find("variables checked:") != std::string::npos);

  const CmdResult corrupted = run_cmd("grad-check " + cfg, "QOC_CORRUPT_GRAD=1 ");
  CHECK(corrupted.exit_code == 2);
  CHECK(corrupted.output.find("FAIL") != std::string::npos);
  std::remove(cfg.c_str());
}

TEST_CASE("grad-check refuses problems with more than 200 variables") {
  const std::string cfg =
      write_temp_config("qoc_cli_gc_big.ini", "[problem]\nbuiltin = cnot\n");
  const CmdResult r = run_cmd("grad-check " + cfg);  // 3 * 1000 variables
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("200") != std::string::npos);
  std::remove(cfg.c_str());
}

TEST_CASE("bench emits a CSV row per qubit count") {
  const CmdResult r = run_cmd("bench --qubits 2 --steps 20 --iters 1");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("dim,mode,steps,ms_per_iter") != std::string::npos);
  CHECK(r.output.find("4,state,20,") != std::string::npos);

  const CmdResult cap = run_cmd("bench --qubits 12 --steps 5 --iters 1");
  CHECK(cap.exit_code == 1);  // 4096 > dim cap 2048
}

TEST_CASE("usage errors exit nonzero") {
  CHECK(run_cmd("").exit_code == 1);
  CHECK(run_cmd("frobnicate").exit_code == 1);
  CHECK(run_cmd("describe").exit_code == 1);  // missing required name
}
