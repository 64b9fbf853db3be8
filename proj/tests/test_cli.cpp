#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "corpus.hpp"
#include "toricdt/cli.hpp"
#include "toricdt/io.hpp"

using namespace toricdt;
namespace fs = std::filesystem;

namespace {

const fs::path samples = TORICDT_SAMPLES_DIR;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(RunConfig c) {
  std::ostringstream out, err;
  const int code = run(c, out, err);
  return {code, out.str(), err.str()};
}

RunConfig cfg(std::string command, const std::string& input) {
  RunConfig c;
  c.command = std::move(command);
  c.inputs = {(samples / input).string()};
  return c;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "toricdt_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Io, FanRoundTrip) {
  for (const Fan& f : {corpus::p2(), corpus::bl3_p2(), corpus::cube_face_fan(), corpus::square_stellar()}) {
    const Fan back = fan_from_json(fan_to_json(f));
    EXPECT_EQ(back.cones(), f.cones());
    EXPECT_EQ(fan_to_json(back).dump(), fan_to_json(f).dump());
  }
}

TEST(Io, FanSchemaErrors) {
  EXPECT_THROW(fan_from_json(Json::parse(R"({"rank": 2, "rays": [[1,0]]})")), InputError);
  EXPECT_THROW(fan_from_json(Json::parse(R"({"rank": 2, "rays": [[1,0],[2,0]], "max_cones": [[0]]})")), FanError);
  EXPECT_THROW(fan_from_json(Json::parse(R"({"rank": 2, "rays": [[1,"x"]], "max_cones": [[0]]})")), InputError);
  const Fan f = fan_from_json(Json::parse(R"({"rank": 2, "rays": [[2,4],[0,1]], "max_cones": [[0,1]]})"));
  EXPECT_EQ(f.rays()[0], corpus::v({1, 2}));
}

TEST(Io, MapWithFileReferences) {
  const MapInput m = map_from_json(read_json_file(samples / "times2_map.json"), samples);
  EXPECT_EQ(m.map.matrix, corpus::mat({{2}}, 1));
  ASSERT_TRUE(m.p);
  EXPECT_EQ(*m.p, 3);
  EXPECT_THROW(map_from_json(Json::parse(R"({"matrix": [[1,0]], "source": "a1.json", "target": "a1.json"})"), samples),
               InputError);
}

TEST(Io, SummandTableRoundTripIsByteStable) {
  const FanMap f = corpus::identity_map(corpus::square_stellar(), corpus::square_cone());
  const DTSummandTable t = deconvolve(f);
  const Json j = table_to_json(t, "stellar");
  const DTSummandTable back = table_from_json(j);
  EXPECT_EQ(dump(table_to_json(back, "stellar")), dump(j));
  EXPECT_EQ(dump(detail::table_reports_json(back, false)), dump(detail::table_reports_json(t, false)));
  const DTSummandTable g = summands_proper(corpus::times_m_a1(6), Int(5));
  const Json jg = table_to_json(g, "x6");
  EXPECT_EQ(dump(table_to_json(table_from_json(jg), "x6")), dump(jg));
  EXPECT_EQ(jg["summands"][0]["ls_rank"], 6);
}

TEST(Io, ReportJsonShape) {
  const CountReport r = verify_map(corpus::identity_map(corpus::bl3_p2(), corpus::p2()), std::nullopt, std::nullopt);
  const Json j = report_to_json(r);
  ASSERT_TRUE(j["checks"].is_array());
  bool saw_poly = false;
  for (const auto& c : j["checks"]) {
    EXPECT_TRUE(c.contains("name") && c.contains("q") && c.contains("expected") && c.contains("observed"));
    if (c["name"] == "global_consistency") {
      saw_poly = true;
      EXPECT_TRUE(c["q"].is_null());
      EXPECT_EQ(c["expected"], Json::parse("[1,4,1]"));
    }
  }
  EXPECT_TRUE(saw_poly);
}

TEST(Cli, DecomposeBlowUp) {
  RunConfig c = cfg("decompose", "blowup_map.json");
  c.format = OutputFormat::json;
  const Result r = run_cli(c);
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  ASSERT_EQ(j["summands"].size(), 2u);
  EXPECT_TRUE(j["p"].is_null());
  const Result t = run_cli(cfg("decompose", "blowup_map.json"));
  EXPECT_EQ(t.code, 0);
  EXPECT_NE(t.out.find("duality: pass"), std::string::npos);
  EXPECT_NE(t.out.find("hard Lefschetz (advisory): pass"), std::string::npos);
}

TEST(Cli, CheckNonProper) {
  const Result r = run_cli(cfg("check", "torus_into_a1_map.json"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("proper: no"), std::string::npos);
  EXPECT_NE(r.out.find("witness (1)"), std::string::npos);
  RunConfig c = cfg("check", "torus_into_a1_map.json");
  c.format = OutputFormat::json;
  const Json j = Json::parse(run_cli(c).out);
  EXPECT_EQ(j["proper"], false);
  EXPECT_EQ(j["witness"], Json::parse("[1]"));
}

TEST(Cli, DecomposeCorruptedFanIsInputError) {
  const Result r = run_cli(cfg("decompose", "overlap_map.json"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("witness"), std::string::npos);
  const Result v = run_cli(cfg("validate", "overlap.json"));
  EXPECT_EQ(v.code, 1);
  EXPECT_NE(v.out.find("NOT a fan"), std::string::npos);
}

TEST(Cli, InputErrors) {
  EXPECT_EQ(run_cli(cfg("decompose", "times6_map.json")).code, 1);  // needs --p
  EXPECT_EQ(run_cli(cfg("decompose", "torus_into_a1_map.json")).code, 1);
  EXPECT_EQ(run_cli(cfg("verify", "missing.json")).code, 1);
  RunConfig c = cfg("verify", "blowup_map.json");
  c.qs = "2,6";
  EXPECT_EQ(run_cli(c).code, 1);
  c = cfg("decompose", "times6_map.json");
  c.p = "4";
  EXPECT_EQ(run_cli(c).code, 1);
  c = cfg("gpoly", "square_cone.json");
  c.cone = "0,9";
  EXPECT_EQ(run_cli(c).code, 1);
  EXPECT_EQ(run_cli(cfg("ih", "a2.json")).code, 0);
  EXPECT_EQ(run_cli(cfg("ih", "blowup_a2.json")).code, 1);
  EXPECT_EQ(run_cli(cfg("frobnicate", "a2.json")).code, 1);
}

TEST(Cli, GpolyAndIh) {
  RunConfig c = cfg("gpoly", "pentagon_cone.json");
  c.cone = "0,1,2,3,4";
  Result r = run_cli(c);
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("1 + 2q"), std::string::npos);
  r = run_cli(cfg("ih", "bl3_p2.json"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("1 + 4q + q^2"), std::string::npos);
}

TEST(Cli, SteinWritesLoadableFiles) {
  RunConfig c = cfg("stein", "p1xp1_double_cover_map.json");
  const fs::path dir = scratch("stein");
  c.out = dir.string();
  ASSERT_EQ(run_cli(c).code, 0);
  const Fan z = fan_from_json(read_json_file(dir / "z_fan.json"));
  EXPECT_EQ(z.rank(), 1u);
  const MapInput g = map_from_json(read_json_file(dir / "g_map.json"));
  const MapInput h = map_from_json(read_json_file(dir / "h_map.json"));
  EXPECT_TRUE(is_fibration(g.map));
  EXPECT_EQ(h.map.matrix * g.map.matrix, corpus::mat({{0, 2}}, 2));
}

TEST(Cli, VerifyGeneralMap) {
  RunConfig c = cfg("verify", "times2_map.json");
  c.format = OutputFormat::json;
  const Result r = run_cli(c);
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  bool saw = false;
  for (const auto& ch : j["checks"])
    if (ch["q"] == 3 && ch["name"].get<std::string>().starts_with("fiber_count_general")) {
      saw = saw || ch["observed"] == 2;
      EXPECT_EQ(ch["pass"], true);
    }
  EXPECT_TRUE(saw);
  EXPECT_EQ(run_cli(cfg("verify", "bl3_p2_map.json")).code, 0);
}

TEST(Cli, DecomposeOutputReverifiesIdentically) {
  for (const char* map : {"stellar_resolution_map.json", "bl3_p2_map.json", "times2_map.json"}) {
    RunConfig c = cfg("decompose", map);
    c.format = OutputFormat::json;
    const fs::path table = scratch(std::string("table_") + map);
    c.out = table.string();
    const Result first = run_cli(c);
    ASSERT_EQ(first.code, 0) << first.err;
    RunConfig v;
    v.command = "verify";
    v.inputs = {table.string()};
    v.format = OutputFormat::json;
    const Result second = run_cli(v);
    EXPECT_EQ(second.code, 0);
    EXPECT_EQ(second.out, first.out) << map;
    // Re-serializing the re-read table is byte-identical.
    EXPECT_EQ(dump(table_to_json(table_from_json(read_json_file(table)), (samples / map).string())),
              slurp(table));
  }
}

TEST(Cli, CorruptedTableIsInvariantViolation) {
  const FanMap f = corpus::identity_map(corpus::square_stellar(), corpus::square_cone());
  DTSummandTable t = deconvolve(f);
  for (auto& e : t.entries)
    if (e.twist_k == 2) e.multiplicity = 3;
  const fs::path p = scratch("corrupt.json");
  std::ofstream(p) << dump(table_to_json(t, "corrupt"));
  RunConfig v;
  v.command = "verify";
  v.inputs = {p.string()};
  const Result r = run_cli(v);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("duality: FAIL"), std::string::npos);
}

TEST(Cli, BinaryExitCodes) {
  const std::string bin = TORICDT_CLI;
  auto status = [&](const std::string& args) {
    const int s = std::system((bin + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(s);
  };
  EXPECT_EQ(status("decompose " + (samples / "blowup_map.json").string()), 0);
  EXPECT_EQ(status("decompose " + (samples / "overlap_map.json").string()), 1);
  EXPECT_EQ(status("decompose " + (samples / "times2_map.json").string() + " --format json"), 0);
  EXPECT_EQ(status("explode " + (samples / "a2.json").string()), 1);
  EXPECT_EQ(status("verify " + (samples / "times6_map.json").string() + " --p 5 --qs 5,25"), 0);
}
