#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "commands.hpp"
#include "sbqa/io.hpp"
#include "sbqa/solvers.hpp"

using namespace sbqa;
using sbqa::cli::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "sbqa_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

fs::path write_pair(const fs::path& dir) {
  const auto p = dir / "pair.txt";
  std::ofstream(p) << "ising 2\nc 0 1 1.0\n# reference_energy -1\n";
  return p;
}

// CSV rows with the runtime column removed.
std::vector<std::string> rows_without_runtime(const fs::path& csv) {
  std::vector<std::string> rows;
  for (const auto& line : lines_of(slurp(csv))) {
    if (line.empty() || line[0] == '#') continue;
    rows.push_back(line.substr(0, line.rfind(',')));
  }
  return rows;
}

json bench_config(const fs::path& dir) {
  return json{{"seed", 11},
              {"instances", {{"family", "ring"}, {"sizes", {8, 10, 12}}, {"count", 2}, {"distribution", "normal"}}},
              {"reference", "exact"},
              {"solvers",
               json::array({{{"name", "sbm"}, {"params", {{"n_replicas", 4}}}},
                            {{"name", "sa"}, {"params", {{"n_reads", 2}}}}})},
              {"epsilons", {0.05, 0.01, 0.005, 0.003}},
              {"step_grid", {10, 40}},
              {"runs", 3},
              {"output", dir.string()}};
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("gen writes seeded files reproducibly") {
    const auto dir = fresh_dir("gen");
    const auto r = run({"gen", "--family", "zephyr", "--m", "2", "--count", "3", "--seed", "7", "--out", dir.string()});
    REQUIRE(r.code == 0);
    CHECK(lines_of(r.out).size() == 3);
    const auto first = slurp(dir / "zephyr_m2_s7.txt");
    CHECK(first.find("seed 7") != std::string::npos);
    CHECK(fs::exists(dir / "zephyr_m2_s9.txt"));
    REQUIRE(run({"gen", "--family", "zephyr", "--m", "2", "--count", "3", "--seed", "7", "--out", dir.string()}).code == 0);
    CHECK(slurp(dir / "zephyr_m2_s7.txt") == first);
  }

  TEST_CASE("gen cubic header") {
    const auto dir = fresh_dir("cubic");
    REQUIRE(run({"gen", "--family", "cubic", "--L", "6", "--Lz", "6", "--out", dir.string()}).code == 0);
    for (const auto& line : lines_of(slurp(dir / "cubic_L6x6_s1.txt"))) {
      if (line[0] == '#') continue;
      CHECK(line == "ising 216");
      break;
    }
  }

  TEST_CASE("gen uses the output-directory variable") {
    const auto dir = fresh_dir("envdir");
    setenv("SBQA_OUTPUT_DIR", dir.string().c_str(), 1);
    const auto r = run({"gen", "--family", "ring", "--n", "8"});
    unsetenv("SBQA_OUTPUT_DIR");
    REQUIRE(r.code == 0);
    CHECK(fs::exists(dir / "ring_n8_s1.txt"));
    CHECK(load_instance(dir / "ring_n8_s1.txt").reference_energy.has_value());
  }

  TEST_CASE("gen errors") {
    CHECK(run({"gen", "--family", "wishart", "--n", "4"}).code == cli::kExitUsage);
    CHECK(run({"gen", "--family", "ring"}).code == cli::kExitUsage);
    CHECK(run({"gen", "--family", "ring", "--n", "4", "--out", "/proc/sbqa/forbidden"}).code != 0);
  }

  TEST_CASE("solve a ferromagnetic pair with every solver") {
    const auto pair = write_pair(fresh_dir("pair")).string();
    for (const char* solver : {"sbm", "sbqa", "sa", "dtsqa"}) {
      const auto r = run({"solve", "--instance", pair, "--solver", solver, "--steps", "50"});
      REQUIRE(r.code == 0);
      const auto j = json::parse(r.out);
      CHECK(j["best_energy"].get<double>() == -1.0);
      CHECK(j["gap"].get<double>() == 0.0);
      CHECK(j.contains("runtime_s"));
      CHECK(j["solver"] == solver);
    }
  }

  TEST_CASE("solver and parameter mismatches are usage errors") {
    const auto pair = write_pair(fresh_dir("mismatch")).string();
    CHECK(run({"solve", "--instance", pair, "--solver", "sbm", "--beta", "1"}).code == cli::kExitUsage);
    CHECK(run({"solve", "--instance", pair, "--solver", "sa", "--gamma0", "1"}).code == cli::kExitUsage);
    CHECK(run({"solve", "--instance", pair, "--solver", "sbm", "--autotune"}).code == cli::kExitUsage);
    CHECK(run({"solve", "--instance", pair, "--solver", "sbqa", "--replicas", "1"}).code == cli::kExitUsage);
    CHECK(run({"solve", "--instance", pair, "--solver", "qaoa"}).code == cli::kExitUsage);
    CHECK(run({"solve", "--instance", "/nonexistent/file.txt", "--solver", "sa"}).code == cli::kExitFailure);
    CHECK(run({}).code == cli::kExitUsage);
    CHECK(run({"--help"}).code == cli::kExitOk);
  }

  TEST_CASE("autotune splits samples into repetitions") {
    const auto pair = write_pair(fresh_dir("autotune")).string();
    const auto r = run({"solve", "--instance", pair, "--solver", "sbqa", "--autotune", "--samples", "1024",
                        "--repetitions", "8", "--steps", "20"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["autotune"]["replicas_per_repetition"] == 128);
    CHECK(j["autotune"]["betas"].size() == 8);
    CHECK(j["params"]["replicas"] == 128);
    CHECK(j["params"]["n_sets"] == 1);
  }

  TEST_CASE("solve matches a direct library call") {
    const auto dir = fresh_dir("equiv");
    REQUIRE(run({"gen", "--family", "complete", "--n", "12", "--fields", "normal:0:0.5", "--seed", "4", "--out",
                 dir.string()})
                .code == 0);
    const auto path = dir / "complete_n12_s4.txt";
    const auto r = run({"solve", "--instance", path.string(), "--solver", "sbqa", "--steps", "150", "--replicas", "6",
                        "--sets", "2", "--beta", "0.8", "--seed", "31"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    SbqaParams p;
    p.n_steps = 150;
    p.replicas = 6;
    p.n_sets = 2;
    p.beta = 0.8;
    const auto direct = sbqa_solve(load_instance(path).ising(), p, 31);
    CHECK(j["best_energy"].get<double>() == direct.best_energy);
    CHECK(j["best_spins"].get<SpinConfig>() == direct.best_spins);
  }

  TEST_CASE("params files and flags combine") {
    const auto dir = fresh_dir("params");
    const auto pair = write_pair(dir).string();
    std::ofstream(dir / "p.json") << R"({"params": {"n_reads": 3, "sweeps": 10}})";
    const auto r = run({"solve", "--instance", pair, "--solver", "sa", "--params", (dir / "p.json").string(),
                        "--steps", "25", "--out", (dir / "r.json").string()});
    REQUIRE(r.code == 0);
    const auto j = json::parse(slurp(dir / "r.json"));
    CHECK(j["params"]["sweeps"] == 25);
    CHECK(j["params"]["n_reads"] == 3);
    CHECK(j["command"].get<std::string>().find("--steps 25") != std::string::npos);
  }

  TEST_CASE("bench writes reports and replays deterministically") {
    const auto dir = fresh_dir("bench");
    const auto cfg = bench_config(dir);
    std::ofstream(dir / "config.json") << cfg.dump(2);
    auto r = run({"bench", "--config", (dir / "config.json").string(), "--out", (dir / "a").string()});
    REQUIRE(r.code == 0);
    r = run({"bench", "--config", (dir / "config.json").string(), "--out", (dir / "b").string()});
    REQUIRE(r.code == 0);
    const auto a = rows_without_runtime(dir / "a" / "runs.csv");
    CHECK(a.size() == 1 + 2 * 3 * 2 * 2 * 3);
    CHECK(a == rows_without_runtime(dir / "b" / "runs.csv"));

    const auto report = json::parse(slurp(dir / "a" / "report.json"));
    CHECK(report["master_seed"] == 11);
    CHECK(report["config"] == cfg);
    CHECK(report["reports"].size() == 2 * 4);
    std::set<std::string> solvers;
    for (const auto& block : report["reports"]) {
      solvers.insert(block["solver"].get<std::string>());
      CHECK(block["per_size"].size() == 3);
      CHECK(block.contains("fit"));
    }
    CHECK(solvers == std::set<std::string>{"sbm", "sa"});
    CHECK(slurp(dir / "a" / "runs.csv").find("# master_seed 11") != std::string::npos);

    // Seed override changes the seeds column.
    REQUIRE(run({"bench", "--config", (dir / "config.json").string(), "--out", (dir / "c").string(), "--seed", "12"})
                .code == 0);
    CHECK(rows_without_runtime(dir / "c" / "runs.csv") != a);
  }

  TEST_CASE("bench with one instance and one grid point") {
    const auto dir = fresh_dir("bench_one");
    const auto pair = write_pair(dir);
    const json cfg{{"instance_files", {pair.string()}},
                   {"solvers", json::array({{{"name", "sa"}, {"params", json::object()}}})},
                   {"step_grid", {10}},
                   {"runs", 2},
                   {"fit", false}};
    std::ofstream(dir / "c.json") << cfg.dump();
    REQUIRE(run({"bench", "--config", (dir / "c.json").string(), "--out", dir.string()}).code == 0);
    const auto report = json::parse(slurp(dir / "report.json"));
    REQUIRE(report["reports"].size() == 1);
    const auto& per_size = report["reports"][0]["per_size"];
    REQUIRE(per_size.size() == 1);
    CHECK((per_size[0]["tte_median"].is_null() || per_size[0]["tte_median"].get<double>() > 0.0));
  }

  TEST_CASE("bench fails when every instance is skipped") {
    const auto dir = fresh_dir("bench_skip");
    std::ofstream(dir / "noref.txt") << "ising 2\nc 0 1 1\n";
    const json cfg{{"instance_files", {(dir / "noref.txt").string()}},
                   {"reference", "file"},
                   {"solvers", json::array({{{"name", "sa"}}})},
                   {"step_grid", {10}}};
    std::ofstream(dir / "c.json") << cfg.dump();
    const auto r = run({"bench", "--config", (dir / "c.json").string(), "--out", dir.string()});
    CHECK(r.code != 0);
    CHECK(r.err.find("skipped") != std::string::npos);
  }

  TEST_CASE("sweep emits one row per cell") {
    const auto dir = fresh_dir("sweep");
    REQUIRE(run({"gen", "--family", "ring", "--n", "10", "--out", dir.string()}).code == 0);
    const auto r = run({"sweep", "--instance", (dir / "ring_n10_s1.txt").string(), "--betas", "0.05,1.0", "--alphas",
                        "0.5,1.0", "--runs", "2", "--replicas", "4", "--sets", "1", "--steps", "50", "--out",
                        (dir / "g.csv").string()});
    REQUIRE(r.code == 0);
    std::size_t rows = 0;
    for (const auto& line : lines_of(slurp(dir / "g.csv")))
      if (!line.empty() && line[0] != '#' && line.rfind("alpha", 0) != 0) ++rows;
    CHECK(rows == 4);
    CHECK(slurp(dir / "g.csv").find("master_seed") != std::string::npos);
  }

  TEST_CASE("reduce writes the QUBO and pair map") {
    const auto dir = fresh_dir("reduce");
    std::ofstream(dir / "quad.txt") << "hubo 3\nc 0 1 1\nc 1 2 -2\n";
    auto r = run({"reduce", "--instance", (dir / "quad.txt").string(), "--penalty", "5", "--out",
                  (dir / "quad_red.txt").string()});
    REQUIRE(r.code == 0);
    auto side = json::parse(slurp(dir / "quad_red.txt.pairs.json"));
    CHECK(side["aux_count"] == 0);
    CHECK(load_instance(dir / "quad_red.txt").size() == 3);

    std::ofstream(dir / "cubic.txt") << "hubo 4\nt 0 1 2 1\nt 0 1 3 -1\nc 2 3 0.5\n";
    r = run({"reduce", "--instance", (dir / "cubic.txt").string(), "--out", (dir / "cubic_red.txt").string()});
    REQUIRE(r.code == 0);
    side = json::parse(slurp(dir / "cubic_red.txt.pairs.json"));
    CHECK(side["aux_count"] == 1);
    CHECK(side["pairs"][0] == json::array({4, 0, 1}));
  }

  TEST_CASE("penalty line search over a grid containing 20") {
    const auto dir = fresh_dir("line");
    REQUIRE(run({"gen", "--family", "heavyhex", "--nswap", "1", "--dist", "cauchy", "--count", "2", "--out",
                 dir.string()})
                .code == 0);
    const auto r = run({"reduce", "--instance", (dir / "heavyhex_nswap1_s1.txt").string(), "--instance",
                        (dir / "heavyhex_nswap1_s2.txt").string(), "--line-search", "10,20,30,40", "--solver", "sbm",
                        "--steps", "100", "--replicas", "4"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["candidates"] == json::array({10.0, 20.0, 30.0, 40.0}));
    CHECK(j["mean_energy"].size() == 4);
    const double best = j["best_penalty"].get<double>();
    CHECK((best == 10.0 || best == 20.0 || best == 30.0 || best == 40.0));
  }

  TEST_CASE("hubo solve needs a penalty") {
    const auto dir = fresh_dir("hubo_solve");
    std::ofstream(dir / "h.txt") << "hubo 3\nt 0 1 2 1\n";
    CHECK(run({"solve", "--instance", (dir / "h.txt").string(), "--solver", "sa"}).code == cli::kExitUsage);
    const auto r = run({"solve", "--instance", (dir / "h.txt").string(), "--solver", "sa", "--penalty", "safe"});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["hubo_energy"].get<double>() == -1.0);
  }

  TEST_CASE("fit reads CSV points") {
    const auto dir = fresh_dir("fit");
    std::ofstream(dir / "p.csv") << "n,tte\n10,100\n20,400\n40,1600\n80,inf\n";
    const auto r = run({"fit", "--input", (dir / "p.csv").string()});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["gamma"].get<double>() == doctest::Approx(2.0).epsilon(1e-12));
    std::ofstream(dir / "short.csv") << "n,tte\n10,100\n";
    CHECK(run({"fit", "--input", (dir / "short.csv").string()}).code == cli::kExitFailure);
  }
}
