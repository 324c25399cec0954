#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <iterator>
#include <string>

#include "phimod/cli.hpp"
#include "phimod/serialize.hpp"
#include "support.hpp"

using namespace phimod;
using namespace phimod::testing;

namespace {

const std::string kData = PHIMOD_TEST_DATA;

RunResult call(const std::string& command, const std::string& input, bool json = true) {
  JobSpec job;
  job.command = command;
  job.input = input;
  job.json = json;
  return run(job);
}

Json out_json(const RunResult& r) { return Json::parse(r.out); }

const char* kShiftedType = R"({"schema": 1, "type": {"d": 3, "e": 1, "f": 1, "embeddings": [[[3, 1], [2, 2], [1, 3]]]}})";

}  // namespace

TEST_CASE("mu-of-nu prints the thresholds") {
  const auto r = call("mu-of-nu", kData + "/closing_full_flag_type.json");
  REQUIRE(r.exit_code == kExitOk);
  const Json j = out_json(r);
  CHECK(j["schema"] == 1);
  CHECK(j["thresholds"] == Json::array({"0", "1", "3"}));
  CHECK(j["l"] == Json::array({"0", "0", "1", "3"}));
  CHECK(parse_coweight(j["mu"]) == DominantCoweight(std::vector<Rational>{0, -1, -2}));
  CHECK(j["warnings"].empty());
  const auto human = call("mu-of-nu", kData + "/closing_full_flag_type.json", false);
  CHECK(human.exit_code == kExitOk);
  CHECK(human.out.find("0, 1, 3") != std::string::npos);
}

TEST_CASE("nonzero lowest jump raises the tail-term warning") {
  const auto r = call("mu-of-nu", kShiftedType);
  REQUIRE(r.exit_code == kExitOk);
  CHECK(!out_json(r)["warnings"].empty());
  CHECK(r.err.find("warning") != std::string::npos);
}

TEST_CASE("stratum membership and exit codes") {
  const std::string type = R"("type": {"d": 3, "e": 1, "f": 1, "embeddings": [[[2, 1], [1, 2], [0, 3]]]})";
  CHECK(call("stratum", R"({"schema": 1, "point": {"coeff_vals": ["0", "1", "3"]}, )" + type + "}").exit_code == kExitOk);
  CHECK(call("stratum", R"({"schema": 1, "point": {"coeff_vals": ["0", "1", "2"]}, )" + type + "}").exit_code == kExitNegative);
  CHECK(call("stratum", R"({"schema": 1, "point": {"coeff_vals": ["0", "inf", "3"]}, "mu": {"entries": ["0", "-1", "-2"]}})").exit_code ==
        kExitOk);
  JobSpec open;
  open.command = "stratum";
  open.input = R"({"schema": 1, "point": {"coeff_vals": ["1", "1", "3"]}, "mu": {"entries": ["0", "-1", "-2"]}})";
  open.closed = false;
  CHECK(run(open).exit_code == kExitNegative);
  // Exactly one of mu and type.
  CHECK(call("stratum", R"({"schema": 1, "point": {"coeff_vals": ["0"]}})").exit_code == kExitParse);
}

TEST_CASE("newton polygon, adjoint image and slope decomposition") {
  const auto np = call("newton-polygon", R"({"schema": 1, "point": {"coeff_vals": ["inf", "1"]}})");
  REQUIRE(np.exit_code == kExitOk);
  CHECK(out_json(np)["slopes"] == Json::array({"1/2", "1/2"}));

  const std::string phi =
      R"({"schema": 1, "frobenius": {"field": {"p": 5}, "f": 1, "pieces": [{"lambda": "1", "mode": {"block": 1}}, {"lambda": "5", "mode": {"block": 1}}, {"lambda": "10", "mode": {"block": 1}}]}})";
  const auto ai = call("adjoint-image", phi);
  REQUIRE(ai.exit_code == kExitOk);
  CHECK(out_json(ai)["point"]["coeff_vals"] == Json::array({"0", "1", "2"}));
  const auto sd = call("slope-decomp", phi);
  REQUIRE(sd.exit_code == kExitOk);
  CHECK(out_json(sd)["pieces"].size() == 2);
}

TEST_CASE("check-wa exit codes follow the verdict") {
  const auto ok = call("check-wa", kData + "/admissible.json");
  CHECK(ok.exit_code == kExitOk);
  CHECK(out_json(ok)["verdict"]["status"] == "Admissible");
  CHECK(out_json(ok)["verdict"]["rows"].size() == 7);

  const auto bad = call("check-wa", kData + "/inadmissible.json");
  CHECK(bad.exit_code == kExitNegative);
  const Json v = out_json(bad)["verdict"];
  CHECK(v["status"] == "Inadmissible");
  CHECK(v["certificate"]["degree"] == "2");
  CHECK(v["certificate"]["newton"] == "0");

  CHECK(call("check-wa", kData + "/undecided.json").exit_code == kExitUndecided);
}

TEST_CASE("hn prints strictly decreasing slopes") {
  const auto r = call("hn", kData + "/inadmissible.json");
  REQUIRE(r.exit_code == kExitOk);
  CHECK(out_json(r)["hn"]["slopes"] == Json::array({"2", "0", "-2"}));
  CHECK(call("hn", kData + "/undecided.json").exit_code == kExitMath);
}

TEST_CASE("verify-theorem on single inputs") {
  const std::string type = R"("type": {"d": 3, "e": 1, "f": 1, "embeddings": [[[2, 1], [1, 2], [0, 3]]]})";
  const auto yes = call("verify-theorem", R"({"schema": 1, "roots": [{"valuation": "0"}, {"valuation": "1"}, {"valuation": "2"}], )" + type + "}");
  CHECK(yes.exit_code == kExitOk);
  CHECK(out_json(yes)["report"]["predicted"] == true);
  const auto no = call("verify-theorem", R"({"schema": 1, "point": {"coeff_vals": ["0", "0", "3"]}, )" + type + "}");
  CHECK(no.exit_code == kExitNegative);
  CHECK(out_json(no)["report"]["obstruction"]["indices"] == Json::array({1, 2}));
}

TEST_CASE("verify-theorem sweep emits JSON lines and a summary") {
  JobSpec job;
  job.command = "verify-theorem";
  job.json = true;
  job.d = 2;
  job.cells = 20;
  job.threads = 1;
  const auto r = run(job);
  CHECK(r.exit_code == kExitOk);
  std::size_t lines = 0;
  std::size_t start = 0;
  Json last;
  while (start < r.out.size()) {
    const std::size_t end = r.out.find('\n', start);
    last = Json::parse(r.out.substr(start, end - start));
    ++lines;
    start = end + 1;
  }
  CHECK(lines >= 21);
  CHECK(last["summary"]["anomalies"] == 0);
}

TEST_CASE("examples command passes") {
  const auto r = call("examples", "", false);
  CHECK(r.exit_code == kExitOk);
  CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("error exit codes") {
  CHECK(call("check-wa", "{ not json").exit_code == kExitParse);
  CHECK(call("mu-of-nu", R"({"schema": 1, "type": {"d": 1, "e": 1, "f": 1, "embeddings": [[[0, 1]]]}, "extra": 1})").exit_code ==
        kExitParse);
  CHECK(call("mu-of-nu", R"({"schema": 2})").exit_code == kExitParse);
  CHECK(call("frobnicate", "{}").exit_code == kExitParse);
  CHECK(call("mu-of-nu", kData + "/missing.json").exit_code == kExitParse);
  // Ranks not increasing: well-formed but invalid.
  CHECK(call("mu-of-nu", R"({"schema": 1, "type": {"d": 2, "e": 1, "f": 1, "embeddings": [[[1, 2], [0, 2]]]}})").exit_code ==
        kExitValidation);
  // Mixed derogatory piece: unsupported mathematics.
  const auto dup = call("adjoint-image",
                        R"({"schema": 1, "frobenius": {"field": {"p": 5}, "f": 1, "pieces": [{"lambda": "1", "mode": {"block": 2}}, {"lambda": "1", "mode": {"block": 1}}]}})");
  CHECK(dup.exit_code == kExitValidation);
  CHECK(dup.err.find("UnsupportedFrobenius") != std::string::npos);
}

TEST_CASE("JSON output round-trips through the parsers") {
  std::ifstream in(kData + "/inadmissible.json");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto x = parse_filtered(parse_document(text), {"schema"});
  const Json doc = out_json(call("check-wa", kData + "/inadmissible.json"));
  CHECK(emit(parse_verdict(doc["verdict"], x.phi())) == doc["verdict"]);
  const Json hn = out_json(call("hn", kData + "/inadmissible.json"))["hn"];
  CHECK(emit(parse_hn(hn, x.phi())) == hn);
}
