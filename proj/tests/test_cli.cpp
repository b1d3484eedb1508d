#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const std::string kBin = GLAB_CLI_PATH;
const fs::path kTmp = GLAB_TEST_TMPDIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path write_config(const std::string& name, const std::string& text) {
  fs::create_directories(kTmp);
  fs::path p = kTmp / name;
  std::ofstream out(p, std::ios::binary);
  out << text;
  return p;
}

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  fs::create_directories(kTmp);
  fs::path cap = kTmp / "stdout.txt";
  std::string cmd = kBin + " " + args + " > " + cap.string() + " 2>&1";
  int rc = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = slurp(cap);
  return r;
}

const char* kEntropyCfg = R"json({
  "model": {"period": 1, "alphabets": [3], "matrices": "full"},
  "experiment": {"name": "entropy", "n_max": 12, "window": [4, 12]}
})json";

const char* kVarCfg = R"json({
  "model": {"period": 1, "alphabets": [3], "matrices": "full"},
  "group": {"type": "lattice", "params": {"d": 1}},
  "labeling": [
    {"state": 0, "symbol": 0, "element": "(1)"},
    {"state": 0, "symbol": 1, "element": "(1)"},
    {"state": 0, "symbol": 2, "element": "(-1)"}
  ],
  "experiment": {"name": "variational", "n_max": 12, "window": [6, 12],
                 "correction": 0.5}
})json";

const char* kGapF2Cfg = R"json({
  "model": {"period": 1, "alphabets": [4], "matrices": "full"},
  "group": {"type": "free", "params": {"k": 2}},
  "labeling": [
    {"state": 0, "symbol": 0, "element": "a"},
    {"state": 0, "symbol": 1, "element": "b"},
    {"state": 0, "symbol": 2, "element": "a^-1"},
    {"state": 0, "symbol": 3, "element": "b^-1"}
  ],
  "experiment": {"name": "gap", "n_max": 10, "window": [4, 10],
                 "correction": 1.5, "correction_ab": 1.0}
})json";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("help lists every experiment") {
  auto r = run("--help");
  CHECK(r.code == 0);
  for (const char* name : {"entropy", "gap", "kesten", "folner", "variational",
                           "gibbs-check", "operator-radius", "describe"})
    CHECK(r.out.find(name) != std::string::npos);
}

TEST_CASE("runs are byte-identical across repeats") {
  auto cfg = write_config("det.json", kEntropyCfg);
  fs::path o1 = kTmp / "det1", o2 = kTmp / "det2";
  auto r1 = run("entropy --config " + cfg.string() + " --out " + o1.string());
  auto r2 = run("entropy --config " + cfg.string() + " --out " + o2.string());
  REQUIRE(r1.code == 0);
  REQUIRE(r2.code == 0);
  CHECK(r1.out == r2.out);
  CHECK(slurp(o1 / "result.json") == slurp(o2 / "result.json"));
  CHECK(slurp(o1 / "series.csv") == slurp(o2 / "series.csv"));
  CHECK_FALSE(fs::exists(o1 / "trace.csv"));  // only variational writes one
}

TEST_CASE("result json carries the format tag and the effective config") {
  auto cfg = write_config("ent.json", kEntropyCfg);
  fs::path out = kTmp / "ent_out";
  auto r = run("entropy --config " + cfg.string() + " --out " + out.string());
  REQUIRE(r.code == 0);

  json res = json::parse(slurp(out / "result.json"));
  CHECK(res["format"] == "glab-result v1");
  CHECK(res["experiment"] == "entropy");
  CHECK(res["headline"].contains("relative_entropy"));
  CHECK(res["config"]["experiment"]["n_max"] == 12);

  // the one-line stdout record parses and repeats the headline
  json line = json::parse(r.out.substr(0, r.out.find('\n')));
  CHECK(line["experiment"] == "entropy");
  CHECK(line["headline"]["relative_entropy"] ==
        res["headline"]["relative_entropy"]);
}

TEST_CASE("series files carry the versioned header") {
  auto cfg = write_config("ent2.json", kEntropyCfg);
  fs::path out = kTmp / "ent2_out";
  REQUIRE(run("entropy --config " + cfg.string() + " --out " + out.string())
              .code == 0);
  std::string csv = slurp(out / "series.csv");
  CHECK(csv.rfind("# glab-series v1\n", 0) == 0);
  CHECK(csv.find("state,n,log_Z,overflow_flag") != std::string::npos);
}

TEST_CASE("variational runs also emit a descent trace") {
  auto cfg = write_config("var.json", kVarCfg);
  fs::path out = kTmp / "var_out";
  auto r = run("variational --config " + cfg.string() + " --out " + out.string());
  REQUIRE(r.code == 0);
  CHECK(fs::exists(out / "trace.csv"));
  std::string trace = slurp(out / "trace.csv");
  CHECK(trace.rfind("# glab-series v1\n", 0) == 0);
  CHECK(trace.find("iter,") != std::string::npos);

  json res = json::parse(slurp(out / "result.json"));
  double xst = res["headline"]["xi"][0];
  CHECK(std::fabs(xst + 0.5 * std::log(2.0)) < 1e-5);
}

TEST_CASE("overrides rewrite the effective config") {
  auto cfg = write_config("ent3.json", kEntropyCfg);
  fs::path out = kTmp / "ent3_out";
  auto r = run("entropy --config " + cfg.string() + " --out " + out.string() +
               " --n-max 6 --window 2,6 --seed 11");
  REQUIRE(r.code == 0);
  json res = json::parse(slurp(out / "result.json"));
  CHECK(res["config"]["experiment"]["n_max"] == 6);
  CHECK(res["config"]["experiment"]["window"][0] == 2);
  CHECK(res["config"]["experiment"]["window"][1] == 6);
  CHECK(res["seed"] == 11);

  // n rows stop at the override
  std::string csv = slurp(out / "series.csv");
  CHECK(csv.find("0,6,") != std::string::npos);
  CHECK(csv.find("0,7,") == std::string::npos);

  auto bad = run("entropy --config " + cfg.string() + " --out " +
                 (kTmp / "ent3_bad").string() + " --window 6,2");
  CHECK(bad.code == 2);
}

TEST_CASE("schema failures exit 2 with a machine-readable record") {
  auto cfg = write_config("broken.json", R"json({"model": {"period": 1}})json");
  fs::path out = kTmp / "broken_out";
  auto r = run("entropy --config " + cfg.string() + " --out " + out.string());
  CHECK(r.code == 2);
  json rec = json::parse(r.out.substr(0, r.out.find('\n')));
  CHECK(rec["error"]["kind"] == "schema");
  CHECK(rec["error"]["exit_code"] == 2);
  json file_rec = json::parse(slurp(out / "error.json"));
  CHECK(file_rec["error"]["kind"] == "schema");

  auto missing = run("entropy --config /no/such/file.json --out " +
                     (kTmp / "missing_out").string());
  CHECK(missing.code == 2);
}

TEST_CASE("experiment name and subcommand must agree") {
  auto cfg = write_config("agree.json", kEntropyCfg);
  auto r = run("gap --config " + cfg.string() + " --out " +
               (kTmp / "agree_out").string());
  CHECK(r.code == 2);
  CHECK(r.out.find("entropy") != std::string::npos);
  CHECK(r.out.find("gap") != std::string::npos);
}

TEST_CASE("mixing failures exit 3") {
  auto cfg = write_config("posdrift.json", R"json({
    "model": {"period": 1, "alphabets": [2], "matrices": "full"},
    "group": {"type": "free", "params": {"k": 2}},
    "labeling": [
      {"state": 0, "symbol": 0, "element": "a"},
      {"state": 0, "symbol": 1, "element": "b"}
    ],
    "experiment": {"name": "gap", "n_max": 8, "window": [4, 8]}
  })json");
  auto r = run("gap --config " + cfg.string() + " --out " +
               (kTmp / "posdrift_out").string());
  CHECK(r.code == 3);
  json rec = json::parse(r.out.substr(0, r.out.find('\n')));
  CHECK(rec["error"]["kind"] == "mixing");
}

TEST_CASE("budget failures exit 4") {
  auto cfg = write_config("tiny.json", R"json({
    "model": {"period": 1, "alphabets": [4], "matrices": "full"},
    "group": {"type": "free", "params": {"k": 2}},
    "labeling": [
      {"state": 0, "symbol": 0, "element": "a"},
      {"state": 0, "symbol": 1, "element": "b"},
      {"state": 0, "symbol": 2, "element": "a^-1"},
      {"state": 0, "symbol": 3, "element": "b^-1"}
    ],
    "experiment": {"name": "gap", "n_max": 12, "window": [6, 12],
                   "state_budget": 500}
  })json");
  auto r = run("gap --config " + cfg.string() + " --out " +
               (kTmp / "tiny_out").string());
  CHECK(r.code == 4);
  json rec = json::parse(r.out.substr(0, r.out.find('\n')));
  CHECK(rec["error"]["kind"] == "budget");
}

TEST_CASE("estimation failures exit 5") {
  auto cfg = write_config("runaway.json", R"json({
    "model": {"period": 1, "alphabets": [2], "matrices": "full"},
    "group": {"type": "lattice", "params": {"d": 1}},
    "labeling": [
      {"state": 0, "symbol": 0, "element": "(1)"},
      {"state": 0, "symbol": 1, "element": "(1)"}
    ],
    "experiment": {"name": "variational", "n_max": 10, "window": [5, 10],
                   "xi0": [0.0], "max_iters": 80, "divergence_radius": 25.0}
  })json");
  auto r = run("variational --config " + cfg.string() + " --out " +
               (kTmp / "runaway_out").string());
  CHECK(r.code == 5);
  json rec = json::parse(r.out.substr(0, r.out.find('\n')));
  CHECK(rec["error"]["kind"] == "estimation");
  CHECK(rec["error"]["message"].get<std::string>().find(
            "infimum not attained") != std::string::npos);
}

TEST_CASE("describe previews cost and budget verdicts") {
  auto cfg = write_config("plan.json", kGapF2Cfg);
  auto ok = run("describe --config " + cfg.string() + " --n-max 14");
  CHECK(ok.code == 0);
  CHECK(ok.out.find("ball size 9565937") != std::string::npos);
  CHECK(ok.out.find("within budget") != std::string::npos);

  auto over = run("describe --config " + cfg.string() + " --n-max 24");
  CHECK(over.code == 0);
  CHECK(over.out.find("OVER BUDGET") != std::string::npos);
  CHECK(over.out.find("lower n_max") != std::string::npos);
}

TEST_CASE("free-group gap stays positive at a desk-sized horizon") {
  auto cfg = write_config("gapf2.json", kGapF2Cfg);
  fs::path out = kTmp / "gapf2_out";
  auto r = run("gap --config " + cfg.string() + " --out " + out.string());
  REQUIRE(r.code == 0);
  json res = json::parse(slurp(out / "result.json"));
  CHECK(res["headline"]["gap"].get<double>() > 0.0);
  CHECK(res["headline"]["mixing_certified"] == true);
  std::string csv = slurp(out / "series.csv");
  CHECK(csv.find("log_Z_ab_constrained") != std::string::npos);
}

TEST_CASE("unknown flags and subcommands exit 2") {
  CHECK(run("entropy --config x.json --frobnicate").code == 2);
  CHECK(run("transmogrify --config x.json").code == 2);
  CHECK(run("entropy").code == 2);  // --config is required
}

}  // TEST_SUITE
