#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef _WIN32
#include <sys/wait.h>
#endif

#include "doctest.h"

// Drives the installed binary end to end through std::system. The test
// runner exports WINDWARD_CLI with the freshly built executable's path.

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string cli_path() {
  const char* env = std::getenv("WINDWARD_CLI");
  REQUIRE_MESSAGE(env != nullptr, "WINDWARD_CLI must point at the binary");
  return env;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing file: " << path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text) {
    if (c == '\n') ++n;
  }
  return n;
}

RunResult run_cli(const std::string& args) {
  static int invocation = 0;
  const fs::path dir = fs::temp_directory_path() / "windward-cli-io";
  fs::create_directories(dir);
  const fs::path out_file =
      dir / ("out" + std::to_string(invocation) + ".txt");
  const fs::path err_file =
      dir / ("err" + std::to_string(invocation) + ".txt");
  ++invocation;

  const std::string cmd = "\"" + cli_path() + "\" " + args + " > " +
                          out_file.string() + " 2> " + err_file.string();
  const int status = std::system(cmd.c_str());
  RunResult result;
#ifdef _WIN32
  result.exit_code = status;
#else
  result.exit_code = WEXITSTATUS(status);
#endif
  result.out = read_file(out_file);
  result.err = read_file(err_file);
  return result;
}

// A fresh workspace per test case, cleaned up afterwards.
struct Workspace {
  fs::path root;
  explicit Workspace(const std::string& name)
      : root(fs::temp_directory_path() / ("windward-cli-" + name)) {
    fs::remove_all(root);
    fs::create_directories(root);
  }
  ~Workspace() { fs::remove_all(root); }

  std::string dir(const std::string& sub) const {
    return (root / sub).string();
  }

  std::string write_scenario(bool with_seed = true) const {
    const fs::path path = root / "scenario.json";
    std::ofstream out(path);
    out << "{\n"
        << "  \"id\": \"cli-test\",\n";
    if (with_seed) out << "  \"seed\": 11,\n";
    out << "  \"script\": {\"legs\": [\n"
        << "    {\"vx_ms\": 4.0, \"vy_ms\": 2.0, \"duration_s\": 20.0, "
           "\"height_m\": 25.0}\n"
        << "  ]},\n"
        << "  \"field\": {\"model\": \"mean-reverting\", \"mean_north_ms\": "
           "2.0, \"mean_east_ms\": -1.0, \"noise_scale\": 0.5},\n"
        << "  \"plant\": {\"compensation\": 1.0}\n"
        << "}\n";
    return path.string();
  }
};

}  // namespace

TEST_CASE("simulate writes the flight bundle") {
  Workspace ws("simulate");
  const std::string scenario = ws.write_scenario();
  const RunResult r =
      run_cli("simulate --scenario " + scenario + " --out " + ws.dir("sim"));
  CHECK(r.exit_code == 0);
  for (const char* name :
       {"flight.csv", "wind.csv", "record.wr", "truth.csv", "config.json"}) {
    CHECK_MESSAGE(fs::exists(fs::path(ws.dir("sim")) / name), name);
  }
  // 20 s at 0.2 s per sample: 100 rows behind the header.
  CHECK(count_lines(read_file(fs::path(ws.dir("sim")) / "flight.csv")) == 101);
  CHECK(count_lines(read_file(fs::path(ws.dir("sim")) / "truth.csv")) == 102);
  CHECK(read_file(fs::path(ws.dir("sim")) / "config.json").find("\"seed\": 11")
        != std::string::npos);
}

TEST_CASE("missing scenario file exits with a usage error") {
  Workspace ws("missing");
  const RunResult r = run_cli("simulate --scenario " + ws.dir("nope.json") +
                              " --out " + ws.dir("out"));
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("cannot read scenario file") != std::string::npos);
}

TEST_CASE("unknown planner name lists the valid ones") {
  Workspace ws("planner");
  const std::string scenario = ws.write_scenario();
  const RunResult r = run_cli("evaluate --scenario " + scenario +
                              " --planner bogus --out " + ws.dir("out"));
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("valid: weighted, lasso") != std::string::npos);
}

TEST_CASE("same seed reproduces every byte") {
  Workspace ws("determinism");
  const std::string scenario = ws.write_scenario();
  const RunResult a =
      run_cli("simulate --scenario " + scenario + " --out " + ws.dir("a"));
  const RunResult b =
      run_cli("simulate --scenario " + scenario + " --out " + ws.dir("b"));
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  for (const char* name :
       {"flight.csv", "wind.csv", "record.wr", "truth.csv", "config.json"}) {
    CHECK_MESSAGE(read_file(fs::path(ws.dir("a")) / name) ==
                      read_file(fs::path(ws.dir("b")) / name),
                  name);
  }

  SUBCASE("evaluation reports too") {
    const RunResult e1 =
        run_cli("evaluate --scenario " + scenario + " --out " + ws.dir("e1"));
    const RunResult e2 =
        run_cli("evaluate --scenario " + scenario + " --out " + ws.dir("e2"));
    REQUIRE(e1.exit_code == 0);
    REQUIRE(e2.exit_code == 0);
    CHECK(read_file(fs::path(ws.dir("e1")) / "report.csv") ==
          read_file(fs::path(ws.dir("e2")) / "report.csv"));
  }
}

TEST_CASE("reconstruct reports one path row per sample") {
  Workspace ws("reconstruct");
  const std::string scenario = ws.write_scenario();
  REQUIRE(run_cli("simulate --scenario " + scenario + " --out " +
                  ws.dir("sim")).exit_code == 0);
  const RunResult r =
      run_cli("reconstruct --record " + ws.dir("sim") + "/record.wr --out " +
              ws.dir("rec"));
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("reconstructed 100 points") != std::string::npos);
  CHECK(count_lines(read_file(fs::path(ws.dir("rec")) / "path.csv")) == 101);
  CHECK(fs::exists(fs::path(ws.dir("rec")) / "path.svg"));
  CHECK(fs::exists(fs::path(ws.dir("rec")) / "config.json"));
}

TEST_CASE("offline planning emits one command per sample") {
  Workspace ws("plan");
  const std::string scenario = ws.write_scenario();
  REQUIRE(run_cli("simulate --scenario " + scenario + " --out " +
                  ws.dir("sim")).exit_code == 0);
  const RunResult r = run_cli("plan --record " + ws.dir("sim") +
                              "/record.wr --beta 0.1 --out " + ws.dir("plan"));
  CHECK(r.exit_code == 0);
  CHECK(count_lines(read_file(fs::path(ws.dir("plan")) / "commands.csv")) ==
        101);
  CHECK(fs::exists(fs::path(ws.dir("plan")) / "config.json"));
}

TEST_CASE("evaluate prints the arrival error") {
  Workspace ws("evaluate");
  const std::string scenario = ws.write_scenario();
  const RunResult r =
      run_cli("evaluate --scenario " + scenario + " --out " + ws.dir("out"));
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("arrival error") != std::string::npos);
  CHECK(fs::exists(fs::path(ws.dir("out")) / "report.csv"));
  CHECK(fs::exists(fs::path(ws.dir("out")) / "config.json"));
}

TEST_CASE("beta sweep produces one report row per value") {
  Workspace ws("sweep");
  const std::string scenario = ws.write_scenario();
  const RunResult r = run_cli(
      "sweep --scenario " + scenario +
      " --axis alpha_beta --values 0,0.05,0.1,0.15 --out " + ws.dir("out"));
  CHECK(r.exit_code == 0);
  CHECK(count_lines(read_file(fs::path(ws.dir("out")) / "report.csv")) == 5);

  SUBCASE("unknown axis is a usage error") {
    const RunResult bad =
        run_cli("sweep --scenario " + scenario +
                " --axis sideways --values 1 --out " + ws.dir("bad"));
    CHECK(bad.exit_code == 2);
    CHECK(bad.err.find("valid: alpha_beta, gamma, compensation") !=
          std::string::npos);
  }
}

TEST_CASE("malformed gamma flag is a usage error") {
  Workspace ws("gamma");
  const std::string scenario = ws.write_scenario();
  const RunResult r = run_cli("evaluate --scenario " + scenario +
                              " --gamma nonsense --out " + ws.dir("out"));
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("lo:hi") != std::string::npos);
}

TEST_CASE("omitted seed is drawn and echoed") {
  Workspace ws("drawn-seed");
  const std::string scenario = ws.write_scenario(/*with_seed=*/false);
  const RunResult r =
      run_cli("simulate --scenario " + scenario + " --out " + ws.dir("out"));
  CHECK(r.exit_code == 0);
  CHECK(r.err.find("no seed given, drew") != std::string::npos);
  CHECK(read_file(fs::path(ws.dir("out")) / "config.json").find("\"seed\":") !=
        std::string::npos);
}

TEST_CASE("missing required flags exit with usage errors") {
  const RunResult r = run_cli("simulate");
  CHECK(r.exit_code == 2);
  const RunResult none = run_cli("");
  CHECK(none.exit_code == 2);
}
