#include <gtest/gtest.h>

#include "balpack/cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace balpack;

namespace {

struct CliResult {
  int code;
  std::string out;
};

CliResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "balpack");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str()};
}

std::string temp_file(const std::string& name, const std::string& body) {
  auto path = std::filesystem::temp_directory_path() / ("balpack-cli-test-" + name);
  std::ofstream(path) << body;
  return path.string();
}

}  // namespace

TEST(Cli, SolveYesEmbedsPassingVerdict) {
  auto input = temp_file("yes.txt", "D 3 0\n0 1 2\n0 2 2\n");
  auto r = run_cli({"solve", "arb", "--k", "2", "--input", input});
  ASSERT_EQ(r.code, 0) << r.out;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["decision"], "YES");
  EXPECT_TRUE(j["verdict"]["valid"].get<bool>());
  EXPECT_FALSE(j.contains("seconds"));
}

TEST(Cli, SolveNoExitsOne) {
  auto input = temp_file("no.txt", "D 3 0\n0 1\n1 2\n");
  auto r = run_cli({"solve", "flow", "--k", "1", "--input", input});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(nlohmann::json::parse(r.out)["decision"], "NO");
}

TEST(Cli, CorruptedWitnessNamesTheFailure) {
  auto input = temp_file("w-inst.txt", "D 3 0\n0 1 2\n0 2 2\n");
  auto witness = temp_file("w.json", R"({"tree1":[0,2],"tree2":[0,3]})");
  auto r = run_cli({"validate", "--input", input, "--witness", witness});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("\"disjoint\""), std::string::npos);
  auto good = temp_file("w-good.json", R"({"tree1":[0,2],"tree2":[1,3]})");
  EXPECT_EQ(run_cli({"validate", "--input", input, "--witness", good}).code, 0);
}

TEST(Cli, UsageErrors) {
  auto input = temp_file("u.txt", "U 3 0\n0 1 2\n0 2 2\n");
  EXPECT_EQ(run_cli({"solve", "tree", "--p", "3", "--k", "1", "--input", input}).code, 2);
  EXPECT_EQ(run_cli({"solve", "tree", "--p", "2", "--k", "1", "--input", input}).code, 0);
  EXPECT_EQ(run_cli({"solve", "tree", "--unknown", "--input", input}).code, 2);
  EXPECT_EQ(run_cli({"solve", "arb", "--k", "1", "--input", input}).code, 2);  // directedness mismatch
  EXPECT_EQ(run_cli({"solve", "tree", "--k", "1", "--input", "/nonexistent/file"}).code, 2);
  auto broken = temp_file("broken.txt", "U 3 0\n0 7\n");
  EXPECT_EQ(run_cli({"solve", "tree", "--input", broken}).code, 2);
  EXPECT_EQ(run_cli({}).code, 2);
}

TEST(Cli, OracleBudgetRefusalIsUndecided) {
  auto input = temp_file("budget.txt", "D 5 0\n0 1 2\n1 2 2\n2 3 2\n3 4 2\n0 4\n");
  auto r = run_cli({"solve", "arb", "--k", "4", "--budget", "1", "--input", input});
  EXPECT_EQ(r.code, 3);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["decision"], "UNKNOWN");
  EXPECT_TRUE(std::filesystem::exists(j["diagnostics"].get<std::string>()));
}

TEST(Cli, ReportsAreByteIdenticalAcrossWorkers) {
  auto input = temp_file("det.txt", "D 6 0\n0 1 2\n0 2 2\n1 3 2\n2 4 2\n3 5 2\n4 5\n1 2\n");
  auto one = run_cli({"solve", "arb", "--k", "2", "--input", input});
  auto four = run_cli({"solve", "arb", "--k", "2", "--workers", "4", "--input", input});
  EXPECT_EQ(one.out, four.out);
  auto timed = run_cli({"solve", "arb", "--k", "2", "--no-deterministic", "--input", input});
  EXPECT_TRUE(nlohmann::json::parse(timed.out).contains("seconds"));
}

TEST(Cli, GeneratorsRoundTrip) {
  auto cnf = temp_file("f.cnf", "p cnf 1 1\n1 0\n");
  auto roles = (std::filesystem::temp_directory_path() / "balpack-cli-test-roles.json").string();
  auto gen = run_cli({"gen", "sat", "--input", cnf, "--copies", "2", "--roles", roles});
  ASSERT_EQ(gen.code, 0);
  auto inst = parse_instance(gen.out);
  EXPECT_EQ(inst.kind, ProblemKind::tree);
  EXPECT_EQ(inst.k, 5);
  EXPECT_EQ(inst.num_vertices(), 13);
  auto role_map = nlohmann::json::parse(cli::detail::read_file(roles));
  EXPECT_EQ(role_map["roles"].size(), 13u);

  auto a = run_cli({"gen", "random", "arb", "--n", "7", "--arcs", "20", "--seed", "5", "--format", "text"});
  auto b = run_cli({"gen", "random", "arb", "--n", "7", "--arcs", "20", "--seed", "5", "--format", "text"});
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(run_cli({"gen", "random", "tree", "--n", "7", "--arcs", "2", "--ensure", "connected"}).code, 2);
}

TEST(Cli, StatsAndOracle) {
  auto input = temp_file("s.txt", "U 4 0\n0 1 2\n0 2 2\n0 3 2\n");
  auto s = run_cli({"stats", "--input", input, "--k", "2"});
  ASSERT_EQ(s.code, 0);
  auto j = nlohmann::json::parse(s.out);
  EXPECT_EQ(j["edges"], 6);
  EXPECT_TRUE(j["twoSpanningTrees"].get<bool>());
  auto o = run_cli({"oracle", "tree", "--input", input, "--k", "2", "--format", "text"});
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("decision: YES"), std::string::npos);
}
