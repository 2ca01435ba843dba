// Runs the command-line tool as a subprocess.

#include <gtest/gtest.h>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "carshare/instance.hpp"
#include "fixtures.hpp"

namespace fs = std::filesystem;
using carshare::write_instance;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
};

CliResult run(const std::string& args) {
  const std::string cmd = std::string(CARSHARE_CLI) + " " + args + " 2>/dev/null";
  CliResult r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  for (std::size_t k; (k = fread(buf.data(), 1, buf.size(), p)) > 0;) r.out.append(buf.data(), k);
  const int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

fs::path tmp(const std::string& name) {
  const fs::path dir = fs::path(CARSHARE_TEST_TMP) / "cli";
  fs::create_directories(dir);
  return dir / name;
}

fs::path written(const std::string& name, const carshare::Instance& inst) {
  const fs::path p = tmp(name);
  write_instance(inst, p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, GenerateDeterministic) {
  const fs::path a = tmp("gen_a"), b = tmp("gen_b");
  fs::remove_all(a);
  fs::remove_all(b);
  ASSERT_EQ(run("generate --group fc --n 30 --count 2 --seed 7 --out " + a.string()).code, 0);
  ASSERT_EQ(run("generate --group fc --n 30 --count 2 --seed 7 --out " + b.string()).code, 0);
  for (const char* f : {"fc-n30-s7.txt", "fc-n30-s8.txt"}) {
    ASSERT_TRUE(fs::exists(a / f)) << f;
    EXPECT_EQ(slurp(a / f), slurp(b / f));
  }
  EXPECT_NE(slurp(a / "fc-n30-s7.txt"), slurp(a / "fc-n30-s8.txt"));
}

TEST(Cli, GenerateNothing) {
  const fs::path d = tmp("gen_none");
  fs::remove_all(d);
  EXPECT_EQ(run("generate --count 0 --out " + d.string()).code, 0);
  EXPECT_FALSE(fs::exists(d));
}

TEST(Cli, SolveBranchAndBound) {
  const fs::path p = written("interlocked.txt", carshare::testing::interlocked());
  const CliResult r = run("solve --method bb --time-limit 10 " + p.string());
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["value"], 4);
  EXPECT_EQ(j["ub"], 4.0);
  EXPECT_EQ(j["gap_pct"], 0.0);
  EXPECT_EQ(j["status"], "optimal");
  EXPECT_EQ(j["method"], "bb");
  EXPECT_EQ(j["model"], "cs2");
  EXPECT_TRUE(j["construction_value"].is_null());
}

TEST(Cli, SolveHeuristicsOnEmpty) {
  carshare::Instance inst;
  inst.fleet_a = inst.fleet_b = 1;
  const fs::path p = written("empty.txt", inst);
  for (const char* m : {"grasp", "vns", "ts"}) {
    const CliResult r = run(std::string("solve --method ") + m + " --time-limit 2 " + p.string());
    ASSERT_EQ(r.code, 0) << m;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["value"], 0);
    EXPECT_EQ(j["gap_pct"], 0.0);
  }
}

TEST(Cli, SolveCsvAndSeveralFiles) {
  const fs::path a = written("csv_a.txt", carshare::generate_st(40, 1));
  const fs::path b = written("csv_b.txt", carshare::generate_st(40, 2));
  const fs::path csv = tmp("out.csv");
  fs::remove(csv);
  const CliResult r = run("solve --method grasp --time-limit 1 --jobs 2 --csv " + csv.string() + " " + a.string() + " " +
                    b.string());
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 2);
  const std::string text = slurp(csv);
  EXPECT_EQ(text.rfind("set,method,model,instances,opt,", 0), 0u);
  EXPECT_NE(text.find(",grasp,cs2,2,"), std::string::npos);
}

TEST(Cli, Preprocess) {
  const fs::path p = written("four_trips.txt", carshare::testing::four_trips());
  const CliResult r = run("preprocess " + p.string());
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find(p.string() + ",14,6,22,11,"), std::string::npos) << r.out;
}

TEST(Cli, ExportMps) {
  const fs::path p = written("interlocked_x.txt", carshare::testing::interlocked());
  const CliResult r = run("export --format mps " + p.string());
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("ENDATA"), std::string::npos);
  const fs::path out = tmp("interlocked.lp");
  ASSERT_EQ(run("export --format lp --model cs1 -o " + out.string() + " " + p.string()).code, 0);
  EXPECT_NE(slurp(out).find("Maximize"), std::string::npos);
}

TEST(Cli, PriorityStats) {
  const fs::path a = written("ps_a.txt", carshare::generate_st(50, 1));
  const fs::path b = written("ps_b.txt", carshare::generate_st(50, 2));
  const CliResult r = run("priority-stats " + a.string() + " " + b.string());
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("instance,dominance_arcs,reduced_arcs,forest_arcs\n", 0), 0u);
  EXPECT_NE(r.out.find("\naverage,"), std::string::npos);
}

TEST(Cli, InputErrors) {
  const fs::path bad = tmp("bad.txt");
  std::ofstream(bad) << "this is not an instance\n";
  EXPECT_EQ(run("solve " + bad.string()).code, 2);
  EXPECT_EQ(run("solve " + tmp("missing.txt").string()).code, 2);
  EXPECT_EQ(run("preprocess " + bad.string()).code, 2);
  EXPECT_NE(run("solve --method simplex " + bad.string()).code, 0);
  EXPECT_NE(run("").code, 0);
}
