#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sidonlab/cli.hpp"
#include "sidonlab/json_io.hpp"

using sidonlab::Json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = sidonlab::run(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kOneTwoThree = R"({"spec":{"free_rank":1},"elems":[1,2,3]})";

}  // namespace

TEST(Cli, CheckReportsRelation) {
  const auto r = call({"check", "--set", kOneTwoThree});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = Json::parse(r.out);
  EXPECT_EQ(doc["schema"], "sidonlab/1");
  EXPECT_EQ(doc["command"], "check");
  EXPECT_FALSE(doc["result"]["independent"].get<bool>());
  EXPECT_EQ(doc["result"]["witness"]["exponents"], Json::parse("[1,1,-1]"));
}

TEST(Cli, CountMatchesLibrary) {
  const auto r = call({"count", "--set", R"({"spec":{"free_rank":1},"elems":[3,9,27]})", "--degree", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out)["result"]["count"], 1);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(call({"check", "--set", "{not json"}).code, 2);
  EXPECT_EQ(call({"check", "--set", R"({"spec":{"free_rank":1}})"}).code, 2);
  EXPECT_EQ(call({"check", "--set", "/nonexistent/set.json"}).code, 4);
  EXPECT_EQ(call({"frobnicate"}).code, 2);
  EXPECT_EQ(call({"interpolate", "--set", kOneTwoThree, "--phi", "[0.1,0.1,0.1]", "--classic"}).code, 2);
  EXPECT_EQ(call({"--workcap", "5", "count", "--set", R"({"spec":{"free_rank":1},"elems":[1,2,3,4,5,6,7,8]})",
                  "--degree", "3"})
                .code,
            3);
  const auto bad = call({"secbound", "--p", "1"});
  EXPECT_EQ(bad.code, 2);
  const auto err = Json::parse(bad.err);
  EXPECT_EQ(err["error"], "domain");
}

TEST(Cli, DemosAreDeterministic) {
  const auto a = call({"--seed", "11", "demo", "lacunary"});
  const auto b = call({"--seed", "11", "demo", "lacunary"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto t1 = call({"--seed", "2", "demo", "thinning", "--seeds", "50", "--attempts", "1"});
  const auto t2 = call({"--seed", "2", "demo", "thinning", "--seeds", "50", "--attempts", "1"});
  ASSERT_EQ(t1.code, 0) << t1.err;
  EXPECT_EQ(t1.out, t2.out);
}

TEST(Cli, FileInputAndOutFlag) {
  const auto dir = std::filesystem::temp_directory_path() / "sidonlab_cli_test";
  std::filesystem::create_directories(dir);
  const auto in = dir / "set.json";
  const auto out = dir / "report.json";
  std::ofstream(in) << kOneTwoThree;
  const auto inline_run = call({"check", "--set", kOneTwoThree});
  const auto file_run = call({"--out", out.string(), "check", "--set", in.string()});
  ASSERT_EQ(file_run.code, 0) << file_run.err;
  EXPECT_TRUE(file_run.out.empty());
  std::ifstream f(out);
  std::stringstream ss;
  ss << f.rdbuf();
  EXPECT_EQ(Json::parse(ss.str())["result"], Json::parse(inline_run.out)["result"]);
  std::filesystem::remove_all(dir);
}

TEST(Cli, InterpolateAndConstant) {
  const auto r = call({"interpolate", "--set", R"({"spec":{"free_rank":1},"elems":[5,25]})", "--phi",
                       R"([[0.5,0.0],[0.0,-0.5]])", "--epsilon", "0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto c = call({"constant", "--set", R"({"spec":{"free_rank":1},"elems":[3,9,27]})", "--classic",
                       "--trials", "4"});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_NEAR(Json::parse(c.out)["result"]["upper"].get<double>(), 2.0, 1e-12);
}
