#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>

#include <json.hpp>

#include "roommates/stability.hpp"

using namespace roommates;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
};

Outcome run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " '" + std::string(ROOMMATES_CLI) + "' " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

// Report with the volatile section and per-type timings removed.
std::string stable_part(const std::string& text) {
  json doc = json::parse(text);
  doc.erase("volatile");
  for (auto& row : doc["per_type"]) row.erase("elapsed_s");
  return doc.dump();
}

class TempDir {
public:
  TempDir() : path_(fs::temp_directory_path() / ("roommates-cli-" + std::to_string(std::random_device{}()))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string str() const { return path_.string(); }
  const fs::path& path() const { return path_; }

private:
  fs::path path_;
};

}  // namespace

TEST(Cli, ExactFour) {
  const Outcome r = run("exact --n 4 --no-cache");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(contains(r.out, "26/27"));
  EXPECT_TRUE(contains(r.out, "0.96296296296296296296"));
  EXPECT_TRUE(contains(r.out, "[2^2]"));
}

TEST(Cli, ExactOdd) {
  EXPECT_TRUE(contains(run("exact --n 5 --no-cache").out, "4075/6912"));
  const Outcome both = run("exact --n 3 --route both --no-cache");
  EXPECT_EQ(both.code, 0);
  EXPECT_TRUE(contains(both.out, "p_3 = 3/4"));
  EXPECT_TRUE(contains(both.out, "1 - p_3 = 1/4"));
}

TEST(Cli, Integral) {
  EXPECT_TRUE(contains(run("integral --type \"2^1,4^1\" --no-cache").out, "307841/144000000"));
  EXPECT_TRUE(contains(run("integral --type \"1^2,2^1\" --no-cache").out, "P([1^2,2^1]) = 0"));
  EXPECT_TRUE(contains(run("integral --type \"5^2\" --no-cache").out,
                       "8541874436295301342281403/2065548531480481442562048000000000"));
  EXPECT_EQ(run("integral --type \"2^y\" --no-cache").code, 2);
}

TEST(Cli, Enumerate) {
  const json even12 = json::parse(run("enumerate --n 12 --family even --format json").out);
  EXPECT_EQ(even12["count"], 11);
  EXPECT_EQ(even12["predicted"], 11);
  EXPECT_TRUE(even12["match"].get<bool>());
  const json odd14 = json::parse(run("enumerate --n 14 --family odd --format json").out);
  EXPECT_EQ(odd14["count"], 43);
  const Outcome four = run("enumerate --n 4 --family even");
  EXPECT_TRUE(contains(four.out, "[4^1]"));
  EXPECT_TRUE(contains(four.out, "[2^2]"));
  EXPECT_TRUE(contains(four.out, "count: 2 (predicted 2, match)"));
  EXPECT_EQ(run("enumerate --n 7 --family even").code, 2);
}

TEST(Cli, Verify) {
  const Outcome exhaustive = run("verify --n 4 --mode exhaustive --no-cache");
  EXPECT_EQ(exhaustive.code, 0);
  EXPECT_TRUE(contains(exhaustive.out, "exhaustive: 26/27  exact match"));
  const Outcome mc = run("verify --n 6 --mode mc --samples 1000000 --seed 1 --no-cache --format json");
  EXPECT_EQ(mc.code, 0);
  const json doc = json::parse(mc.out);
  EXPECT_TRUE(doc["ok"].get<bool>());
  EXPECT_LE(std::abs(doc["checks"][0]["sigma_distance"].get<double>()), 4.0);
  EXPECT_EQ(run("verify --n 4 --mode mc --samples 0 --no-cache").code, 2);
  EXPECT_EQ(run("verify --n 6 --mode exhaustive --no-cache").code, 2);
}

TEST(Cli, ContradictionExitCode) {
  EXPECT_EQ(run("verify --n 6 --mode mc --samples 2000 --sigma 0.000001 --no-cache").code, 4);
}

TEST(Cli, ResourceExitCode) {
  const Outcome r = run("exact --n 8 --strategy early --term-limit 5 --no-cache");
  EXPECT_EQ(r.code, 3);
  EXPECT_TRUE(contains(r.out, "incomplete"));
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("exact").code, 2);
  EXPECT_EQ(run("exact --n 4 --bogus").code, 2);
  EXPECT_EQ(run("exact --n 4 --decimals 0").code, 2);
  EXPECT_EQ(run("exact --n 4 --threads 0").code, 2);
  EXPECT_EQ(run("exact --n 4 --format xml").code, 2);
  EXPECT_EQ(run("exact --n 13 --no-cache").code, 2);
  EXPECT_EQ(run("exact --n 1 --no-cache").code, 2);
  EXPECT_EQ(run("mc --n 4 --samples 0").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, JsonRoundTrip) {
  const Outcome r = run("exact --n 8 --route both --no-cache --format json");
  ASSERT_EQ(r.code, 0);
  const json doc = json::parse(r.out);
  const ProbabilityResult expected = probability(8, Route::Both);
  EXPECT_EQ(doc["command"], "exact");
  EXPECT_EQ(doc["n"], 8);
  EXPECT_EQ(BigRational::parse(doc["value"]["fraction"].get<std::string>()), expected.value);
  EXPECT_EQ(doc["value"]["decimal"], expected.value.to_decimal(20));
  EXPECT_EQ(BigRational::parse(doc["complement"]["fraction"].get<std::string>()), expected.complement);
  ASSERT_EQ(doc["per_type"].size(), expected.per_type.size());
  for (size_t i = 0; i < expected.per_type.size(); ++i) {
    const auto& row = doc["per_type"][i];
    const auto& t = expected.per_type[i];
    EXPECT_EQ(row["type"], t.cycle_type.to_string());
    EXPECT_EQ(BigRational::parse(row["P"]["fraction"].get<std::string>()), t.probability);
    EXPECT_EQ(row["c"], t.count.get_str());
    EXPECT_EQ(row["sign"], t.sign);
    EXPECT_EQ(row["f"], t.factor_count);
    EXPECT_TRUE(row.contains("elapsed_s"));
    EXPECT_EQ(row["strategy"], t.strategy);
  }
  EXPECT_TRUE(doc["volatile"].contains("timestamps"));
}

TEST(Cli, ReportsReproducible) {
  const std::string args = "exact --n 7 --route both --no-cache --format json --decimals 30";
  const Outcome a = run(args), b = run(args);
  EXPECT_EQ(stable_part(a.out), stable_part(b.out));
  const std::string mc = "mc --n 6 --samples 40000 --seed 9 --format json";
  EXPECT_EQ(run(mc).out, run(mc + " --threads 3").out);
}

TEST(Cli, CacheHitMatchesColdRun) {
  TempDir dir;
  const std::string args = "exact --n 7 --format json --cache-dir '" + dir.str() + "'";
  const Outcome cold = run(args);
  const Outcome warm = run(args);
  ASSERT_EQ(cold.code, 0);
  EXPECT_EQ(stable_part(cold.out), stable_part(warm.out));
  const json doc = json::parse(warm.out);
  for (const auto& row : doc["volatile"]["per_type"]) EXPECT_TRUE(row["cache_hit"].get<bool>());
  EXPECT_TRUE(fs::exists(dir.path() / "1p1_2p3.json"));
}

TEST(Cli, CacheDirectoryFromEnvironment) {
  TempDir dir;
  const Outcome r = run("integral --type \"3^2\"", "ROOMMATES_CACHE_DIR='" + dir.str() + "'");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(fs::exists(dir.path() / "3p2.json"));
}

TEST(Cli, CsvMirrorsPerType) {
  const Outcome r = run("exact --n 6 --no-cache --format csv");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("type,P,decimal,c,sign,f,elapsed_s,strategy,sum\n", 0), 0u);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 4);
  EXPECT_TRUE(contains(r.out, "\"2^1,4^1\",307841/144000000,0.00213778472222222222,90,-1,10,"));
}
