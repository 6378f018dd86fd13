#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "kmsgraph/commands.hpp"
#include "support.hpp"

namespace {

struct CliResult {
  int rc;
  std::string out;
  std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
  std::vector<const char*> argv = {"kmsgraph"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int rc = kmsgraph::cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {rc, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return kmstest::data_path(name); }

}  // namespace

TEST_CASE("version flag") {
  const CliResult r = run_cli({"--version"});
  CHECK(r.rc == 0);
  CHECK(r.out == "kmsgraph 0.1.0\n");
}

TEST_CASE("analyze emits one canonical line") {
  const CliResult r = run_cli({"analyze", "--graph", fixture("two_loops_source.json")});
  REQUIRE(r.rc == 0);
  // canonical form: sorted keys, %.15g numbers, one trailing newline
  CHECK(r.out ==
        "{\"below_critical\":\"unknown\",\"blocks\":{\"core_dim\":1,\"order\":[\"v\",\"w\"],"
        "\"saturated_dim\":1},\"ck_extreme_count\":1,\"critical_beta\":0.693147180559945,"
        "\"critical_state_exists\":true,\"critical_state_unique\":null,\"edges\":3,\"rho\":2,"
        "\"saturation_chain\":[[\"w\"]],\"scc_count\":2,\"sinks\":[],\"sources\":[\"w\"],"
        "\"spectral\":{\"classification\":\"GreaterThanOne\",\"iterations\":0,\"residual\":0,"
        "\"rho\":2},\"strongly_connected\":false,\"structural_class\":\"AtLeastOne\","
        "\"toeplitz_extreme_count\":2,\"vertices\":2}\n");

  // reruns are byte identical
  CHECK(run_cli({"analyze", "--graph", fixture("two_loops_source.json")}).out == r.out);
}

TEST_CASE("analyze of an acyclic graph reports no critical temperature") {
  const CliResult r = run_cli({"analyze", "--graph", fixture("chain3.json")});
  REQUIRE(r.rc == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["critical_beta"] == "-inf");
  CHECK(j["rho"] == 0.0);
  CHECK(j["below_critical"] == "not-applicable");
  CHECK(j["structural_class"] == "Zero");
  CHECK(j["saturation_chain"].size() == 3);
  CHECK(j["blocks"]["core_dim"] == 0);
}

TEST_CASE("simplex output pins the derived example") {
  const CliResult r =
      run_cli({"simplex", "--graph", fixture("single_edge.json"), "--q", "0.5"});
  REQUIRE(r.rc == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["q"] == 0.5);
  CHECK(j["y"]["v"] == 1.0);
  CHECK(j["y"]["w"] == 1.5);
  CHECK(j["toeplitz_dim"] == 1);
  CHECK(j["ck_dim"] == 1);
  REQUIRE(j["extreme_points"].size() == 2);
  CHECK(j["extreme_points"][0]["epsilon"]["v"] == 1.0);
  CHECK(j["extreme_points"][0]["epsilon"]["w"] == 0.0);
  CHECK(std::fabs(j["extreme_points"][1]["epsilon"]["w"].get<double>() - 2.0 / 3.0) < 1e-14);
  CHECK(std::fabs(j["extreme_points"][1]["m"]["v"].get<double>() - 1.0 / 3.0) < 1e-14);
  REQUIRE(j["ck_extreme_points"].size() == 1);
  CHECK(j["ck_extreme_points"][0]["factors_through_ck"] == true);
  CHECK(j["extreme_points"][0]["factors_through_ck"] == false);

  CHECK(run_cli({"simplex", "--graph", fixture("single_edge.json"), "--q", "0.5"}).out == r.out);
}

TEST_CASE("state command evaluates and verifies") {
  const CliResult r = run_cli({"state", "--graph", fixture("single_loop.json"), "--q", "0.5",
                               "--epsilon", "extreme:v"});
  REQUIRE(r.rc == 0);
  CHECK(r.out ==
        "{\"beta\":0.693147180559945,\"epsilon\":{\"v\":0.5},\"factors_through_ck\":false,"
        "\"kind\":\"Toeplitz\",\"m\":{\"v\":1},\"q\":0.5}\n");

  const CliResult verified =
      run_cli({"state", "--graph", fixture("two_loops_source.json"), "--q", "0.1", "--epsilon",
               "uniform", "--verify"});
  REQUIRE(verified.rc == 0);
  const nlohmann::json j = nlohmann::json::parse(verified.out);
  CHECK(j["verification"]["all_pass"] == true);
  CHECK(j["verification"]["tail_target_met"] == true);
  CHECK(j["verification"]["tail_mass"].get<double>() < kmsgraph::tol::oracle_tail);
}

TEST_CASE("state accepts inline epsilon and files") {
  const CliResult inline_eps =
      run_cli({"state", "--graph", fixture("single_edge.json"), "--q", "0.5", "--epsilon",
               R"({"v": 0.0, "w": 0.6666666666666666})"});
  REQUIRE(inline_eps.rc == 0);
  const nlohmann::json j = nlohmann::json::parse(inline_eps.out);
  CHECK(std::fabs(j["m"]["w"].get<double>() - 2.0 / 3.0) < 1e-12);

  const std::string path = "/tmp/kmsgraph_test_eps.json";
  {
    std::ofstream f(path);
    f << R"({"v": 0.0, "w": 0.6666666666666666})";
  }
  const CliResult file_eps = run_cli(
      {"state", "--graph", fixture("single_edge.json"), "--q", "0.5", "--epsilon", path});
  CHECK(file_eps.rc == 0);
  CHECK(file_eps.out == inline_eps.out);
  std::remove(path.c_str());
}

TEST_CASE("critical command picks the right construction") {
  const CliResult o2 = run_cli({"critical", "--graph", fixture("two_loops.json")});
  REQUIRE(o2.rc == 0);
  CHECK(o2.out ==
        "{\"beta\":0.693147180559945,\"epsilon\":{\"v\":0},\"factors_through_ck\":true,"
        "\"kind\":\"Critical\",\"m\":{\"v\":1},\"q\":0.5}\n");

  const CliResult tls = run_cli({"critical", "--graph", fixture("two_loops_source.json")});
  REQUIRE(tls.rc == 0);
  const nlohmann::json j = nlohmann::json::parse(tls.out);
  CHECK(j["q"] == 0.5);
  CHECK(j["m"]["v"] == 1.0);
  CHECK(j["m"]["w"] == 0.0);
  CHECK(j["factors_through_ck"] == true);

  // a user-supplied subinvariant measure is accepted
  const CliResult user = run_cli({"critical", "--graph", fixture("two_loops.json"), "--measure",
                                  R"({"v": 1.0})"});
  CHECK(user.rc == 0);
}

TEST_CASE("ground command reports the zero temperature state") {
  const CliResult r = run_cli(
      {"ground", "--graph", fixture("two_isolated.json"), "--epsilon", "uniform"});
  REQUIRE(r.rc == 0);
  CHECK(r.out ==
        "{\"beta\":\"inf\",\"epsilon\":{\"v\":0.5,\"w\":0.5},\"factors_through_ck\":true,"
        "\"kind\":\"Ground\",\"m\":{\"v\":0.5,\"w\":0.5},\"q\":0}\n");

  const CliResult verified = run_cli({"ground", "--graph", fixture("two_loops_source.json"),
                                      "--epsilon", "extreme:w", "--verify"});
  REQUIRE(verified.rc == 0);
  const nlohmann::json j = nlohmann::json::parse(verified.out);
  CHECK(j["verification"]["all_pass"] == true);
}

TEST_CASE("verify command reports and gates on the checks") {
  const CliResult ok = run_cli({"verify", "--graph", fixture("two_loops.json"), "--q", "0.1",
                                "--epsilon", "extreme:v"});
  REQUIRE(ok.rc == 0);
  const nlohmann::json j = nlohmann::json::parse(ok.out);
  CHECK(j["all_pass"] == true);
  CHECK(j["tck"]["all_pass"] == true);
  CHECK(j["kms"]["all_pass"] == true);
  CHECK(j["tail_mass"].get<double>() < kmsgraph::tol::oracle_tail);

  // an unreachable tail target under the basis cap is an honest failure
  const CliResult unreachable = run_cli({"verify", "--graph", fixture("two_loops.json"), "--q",
                                         "0.4", "--epsilon", "extreme:v", "--tol", "1e-12"});
  CHECK(unreachable.rc == 4);
  const nlohmann::json ju = nlohmann::json::parse(unreachable.out);
  CHECK(ju["all_pass"] == false);
  CHECK(ju["tail_target_met"] == false);
}

TEST_CASE("sweep tabulates the barycenter") {
  const CliResult r = run_cli({"sweep", "--graph", fixture("single_edge.json"), "--from", "0.5",
                               "--to", "1.5", "--steps", "3"});
  REQUIRE(r.rc == 0);
  std::istringstream lines(r.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "beta,q,admissible,y_v,y_w,m_v,m_w,note");
  int rows = 0;
  std::string row;
  while (std::getline(lines, row)) {
    if (row.empty()) continue;
    ++rows;
    std::istringstream cells(row);
    std::string beta_s, q_s, adm, yv, yw, mv, mw, note;
    std::getline(cells, beta_s, ',');
    std::getline(cells, q_s, ',');
    std::getline(cells, adm, ',');
    std::getline(cells, yv, ',');
    std::getline(cells, yw, ',');
    std::getline(cells, mv, ',');
    std::getline(cells, mw, ',');
    std::getline(cells, note, ',');
    CHECK(adm == "1");
    const double q = std::stod(q_s);
    CHECK(std::fabs(std::stod(beta_s) + std::log(q)) < 1e-12);
    // y_v = 1, y_w = 1 + q, barycenter m_w = 1/(2(1+q)), m_v = 1 - m_w
    CHECK(std::stod(yv) == 1.0);
    CHECK(std::fabs(std::stod(yw) - (1.0 + q)) < 1e-12);
    CHECK(std::fabs(std::stod(mw) - 0.5 / (1.0 + q)) < 1e-12);
    CHECK(std::fabs(std::stod(mv) - (1.0 - 0.5 / (1.0 + q))) < 1e-12);
    CHECK(note.empty());
  }
  CHECK(rows == 3);

  // a sweep crossing the critical temperature marks rows inadmissible
  const CliResult crossing = run_cli({"sweep", "--graph", fixture("two_loops.json"), "--from",
                                      "0.2", "--to", "1.2", "--steps", "2"});
  REQUIRE(crossing.rc == 0);
  CHECK(crossing.out.find("inadmissible") != std::string::npos);

  // json format round trips
  const CliResult js = run_cli({"sweep", "--graph", fixture("single_edge.json"), "--from", "0.5",
                                "--to", "1.5", "--steps", "3", "--format", "json"});
  REQUIRE(js.rc == 0);
  const nlohmann::json rows_json = nlohmann::json::parse(js.out);
  CHECK(rows_json.size() == 3);
  CHECK(rows_json[0]["admissible"] == true);
}

TEST_CASE("usage and parse failures exit 2") {
  CHECK(run_cli({"bogus"}).rc == 2);
  CHECK(run_cli({"analyze"}).rc == 2);  // --graph missing
  CHECK(run_cli({"analyze", "--graph", "/nonexistent/graph.json"}).rc == 2);
  CHECK(run_cli({"simplex", "--graph", fixture("two_loops.json")}).rc == 2);  // no temperature
  CHECK(run_cli({"simplex", "--graph", fixture("two_loops.json"), "--q", "0.1", "--beta", "1"})
            .rc == 2);
  CHECK(run_cli({"state", "--graph", fixture("two_loops.json"), "--q", "0.1", "--epsilon",
                 "extreme:nope"})
            .rc == 2);
  CHECK(run_cli({"sweep", "--graph", fixture("two_loops.json"), "--from", "1", "--to", "2",
                 "--format", "yaml"})
            .rc == 2);
  // the oracle's domain excludes the critical temperature, so critical has
  // no --verify flag
  CHECK(run_cli({"critical", "--graph", fixture("two_loops.json"), "--verify"}).rc == 2);

  // malformed graph documents are parse errors
  const std::string path = "/tmp/kmsgraph_test_badgraph.json";
  {
    std::ofstream f(path);
    f << R"({"vertices": ["v"], "edges": [], "comment": "?"})";
  }
  const CliResult bad = run_cli({"analyze", "--graph", path});
  CHECK(bad.rc == 2);
  CHECK(bad.err.find("error:") == 0);
  std::remove(path.c_str());
}

TEST_CASE("inadmissible requests exit 3") {
  CHECK(run_cli({"simplex", "--graph", fixture("two_loops.json"), "--q", "0.5"}).rc == 3);
  CHECK(run_cli({"simplex", "--graph", fixture("two_loops.json"), "--q", "0.7"}).rc == 3);
  CHECK(run_cli({"simplex", "--graph", fixture("two_loops.json"), "--beta", "0.2"}).rc == 3);
  // epsilon off the simplex
  CHECK(run_cli({"state", "--graph", fixture("single_edge.json"), "--q", "0.5", "--epsilon",
                 R"({"v": 0.5, "w": 0.5})"})
            .rc == 3);
  // ground distribution that is not a probability vector
  CHECK(run_cli({"ground", "--graph", fixture("two_isolated.json"), "--epsilon",
                 R"({"v": 0.25, "w": 0.25})"})
            .rc == 3);
  // critical measure that is not subinvariant
  CHECK(run_cli({"critical", "--graph", fixture("cycle2.json"), "--measure",
                 R"({"v": 0.9, "w": 0.1})"})
            .rc == 3);
}

TEST_CASE("output lands in a file when requested") {
  const std::string path = "/tmp/kmsgraph_test_out.json";
  const CliResult r =
      run_cli({"analyze", "--graph", fixture("two_loops.json"), "--out", path});
  REQUIRE(r.rc == 0);
  CHECK(r.out.empty());
  std::ifstream f(path);
  REQUIRE(f.good());
  std::stringstream buf;
  buf << f.rdbuf();
  CHECK(buf.str() == run_cli({"analyze", "--graph", fixture("two_loops.json")}).out);
  std::remove(path.c_str());
}
