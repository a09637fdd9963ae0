#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "support.hpp"
#include "tierslice/cli.hpp"
#include "tierslice/frontend.hpp"

using namespace tierslice;
using namespace tierslice::testing;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Outcome o;
  o.code = cli::run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string tempFile(const std::string& name, const std::string& text) {
  const auto dir = std::filesystem::temp_directory_path() / "tierslice_cli_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / name).string();
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

std::size_t countOf(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1))
    ++n;
  return n;
}

}  // namespace

TEST_CASE("parse summary") {
  const auto r = invoke({"parse", fixturePath("tasks.tjs")});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("slices: 4 (2 fixed)") == 0);
  CHECK(r.out.find("sharing 2") != std::string::npos);

  const auto v1 = invoke({"parse", fixturePath("planner/v1.tjs")});
  CHECK(v1.out.find("annotations: placement 3, communication 5, sharing 0") != std::string::npos);

  const auto empty = invoke({"parse", tempFile("empty.tjs", "")});
  CHECK(empty.code == cli::kExitOk);
  CHECK(empty.out.find("slices: 0 (0 fixed)") == 0);

  const auto bad = invoke({"parse", tempFile("config.tjs",
                                          "/* @config ghost : server, a : client */\n"
                                          "/* @slice a */\n{\n  var x = 1;\n}\n")});
  CHECK(bad.code == cli::kExitParse);
  CHECK(bad.err.find("config.tjs:1:") != std::string::npos);

  const auto syntax = invoke({"parse", tempFile("syntax.tjs", "var = ;\n")});
  CHECK(syntax.code == cli::kExitParse);
  CHECK(syntax.err.find("syntax.tjs:1:5: error:") != std::string::npos);
}

TEST_CASE("usage errors") {
  CHECK(invoke({}).code == cli::kExitUsage);
  CHECK(invoke({"assign"}).code == cli::kExitUsage);
  CHECK(invoke({"parse", "/no/such/file.tjs"}).code == cli::kExitUsage);
  CHECK(invoke({"assign", fixturePath("tasks.tjs"), "--pop", "1"}).code == cli::kExitUsage);
  CHECK(invoke({"advise", fixturePath("tasks.tjs"), "--threshold", "2"}).code == cli::kExitUsage);
  const auto help = invoke({"--help"});
  CHECK(help.code == cli::kExitOk);
  for (const char* sub : {"parse", "graph", "assign", "oracle", "advise", "refine", "split", "stats"})
    CHECK(help.out.find(sub) != std::string::npos);
  const auto assignHelp = invoke({"assign", "--help"});
  for (const char* flag : {"--pop", "--gens", "--pc", "--pm", "--tournament", "--seed", "--runs"})
    CHECK(assignHelp.out.find(flag) != std::string::npos);
}

TEST_CASE("graph export") {
  const auto dot = invoke({"graph", fixturePath("tasks.tjs"), "--dot"});
  CHECK(dot.code == cli::kExitOk);
  CHECK(dot.out.find("digraph slices {") == 0);
  CHECK(countOf(dot.out, "[label=\"") >= 4);
  for (const char* s : {"\n  \"data\" [", "\n  \"sorting\" [", "\n  \"statistics\" [",
                        "\n  \"browser\" ["})
    CHECK(countOf(dot.out, s) == 1);

  const auto single = invoke({"graph", tempFile("one.tjs", "/* @slice a */\n{\n  var x = 1;\n}\n")});
  CHECK(countOf(single.out, " [label=") == 1);
  CHECK(countOf(single.out, "->") == 0);

  const auto json = invoke({"graph", fixturePath("tasks.tjs"), "--json"});
  const auto imported = dependenceGraphFromJson(json.out);
  CHECK(collapseToSliceGraph(imported) == fixtureGraph("tasks.tjs"));
  const auto path = tempFile("tasks.json", json.out);
  CHECK(invoke({"graph", path, "--json"}).out == json.out);
  CHECK(invoke({"graph", path}).out == dot.out);
}

TEST_CASE("assign and oracle") {
  const auto file = fixturePath("counterexample.tjs");
  const auto a = invoke({"assign", file, "--seed", "11", "--json"});
  CHECK(a.code == cli::kExitOk);
  const auto j = nlohmann::json::parse(a.out);
  CHECK(j["fitness"]["valid"] == true);
  CHECK(j["placement"]["searched"]["formatting"] != "client");

  const auto o = invoke({"oracle", file, "--json"});
  const auto oj = nlohmann::json::parse(o.out);
  CHECK(oj["enumerated"] == 27);
  CHECK(oj["validCount"] == 14);
  CHECK(oj["fitness"]["program"].get<double>() >= j["fitness"]["program"].get<double>());
  CHECK(invoke({"oracle", file, "--oracle-cap", "2"}).code == cli::kExitSearchFailure);

  const auto text = invoke({"assign", fixturePath("tasks.tjs"), "--seed", "1"});
  CHECK(text.out.find("offline availability: 100.00 % (2 of 2 calls local)") !=
        std::string::npos);
  CHECK(text.out.find("generations: 1") != std::string::npos);
}

TEST_CASE("advise") {
  const auto golden = readFile(std::string(TIERSLICE_SOURCE_DIR) + "/tests/golden/meetings_advice.txt");
  const auto r = invoke({"advise", fixturePath("meetings.tjs")});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out == golden);

  const auto placement = tempFile("l9placement.json",
                                  "{\"fixed\": {\"data\": \"server\", \"browser\": \"client\"}, "
                                  "\"searched\": {}}");
  CHECK(invoke({"advise", fixturePath("meetings.tjs"), "--placement", placement}).out == golden);
  CHECK(invoke({"advise", fixturePath("meetings.tjs"), "--placement", placement, "--search"}).code ==
        cli::kExitUsage);

  const auto graph = tempFile("l9.json", invoke({"graph", fixturePath("meetings.tjs"), "--json"}).out);
  CHECK(invoke({"advise", graph}).out == golden);

  const auto missing = tempFile("l9missing.json", "{\"fixed\": {\"data\": \"server\"}}");
  CHECK(invoke({"advise", fixturePath("meetings.tjs"), "--placement", missing}).code ==
        cli::kExitInvalidPlacement);
}

TEST_CASE("refine") {
  const auto file = fixturePath("planner/v1.tjs");
  CHECK(invoke({"refine", file}).out == invoke({"advise", file}).out);

  const auto out = (std::filesystem::temp_directory_path() / "tierslice_cli_test" / "v1r.tjs").string();
  const auto r = invoke({"refine", file, "--apply", "-o", out, "--seed", "4"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("1          15      100.00 %") != std::string::npos);
  const auto refined = analyze(readFile(out));
  CHECK(refined.slices.size() == 15);

  const auto piped = invoke({"refine", file, "--apply", "--seed", "4"});
  CHECK(piped.out == readFile(out));
  CHECK(piped.err == r.out);

  const auto graph = tempFile("v1.json", invoke({"graph", file, "--json"}).out);
  CHECK(invoke({"refine", graph, "--apply"}).code == cli::kExitUsage);
}

TEST_CASE("split") {
  const auto file = fixturePath("counterexample.tjs");
  const auto allBoth = tempFile("both.json",
                                "{\"fixed\": {\"store\": \"server\", \"ui\": \"client\"}, "
                                "\"searched\": {\"formatting\": \"both\", \"summary\": \"both\", "
                                "\"counting\": \"both\"}}");
  const auto r = invoke({"split", file, "--placement", allBoth});
  REQUIRE(r.code == cli::kExitOk);
  const auto serverAt = r.out.find("\nserver\n");
  const auto remoteAt = r.out.find("remote calls\n");
  REQUIRE(serverAt != std::string::npos);
  std::string client = r.out.substr(0, serverAt + 1);
  std::string server = r.out.substr(serverAt + 1, remoteAt - serverAt - 1);
  client.erase(0, client.find('\n'));
  server.erase(0, server.find('\n'));
  CHECK(client.find("slice formatting") != std::string::npos);
  CHECK(server.find("slice formatting") != std::string::npos);
  // Only the fixed slices differ; every call stays local except those made by
  // the fixed slices into each other.
  CHECK(r.out.substr(remoteAt).find("formatting") == std::string::npos);

  const auto invalid = tempFile("invalid.json",
                                "{\"fixed\": {\"store\": \"server\", \"ui\": \"client\"}, "
                                "\"searched\": {\"formatting\": \"client\", \"summary\": \"both\", "
                                "\"counting\": \"both\"}}");
  const auto bad = invoke({"split", file, "--placement", invalid});
  CHECK(bad.code == cli::kExitInvalidPlacement);
  CHECK(bad.err.find("server-to-client") != std::string::npos);

  SUBCASE("remote calls match the classification") {
    const auto oraclePlacement = (std::filesystem::temp_directory_path() / "tierslice_cli_test" /
                                  "l6oracle.json").string();
    invoke({"oracle", file, "-o", oraclePlacement});
    const auto s = invoke({"split", file, "--placement", oraclePlacement});
    const auto classification =
        classifyCalls(fixtureGraph("counterexample.tjs"), placementFromJson(readFile(oraclePlacement)));
    std::size_t remote = 0;
    for (const auto& v : classification.calls) {
      if (v.locality != Locality::Remote) continue;
      ++remote;
      CHECK(s.out.find(file + ":" + std::to_string(v.call.pos.line) + ":" +
                       std::to_string(v.call.pos.column)) != std::string::npos);
    }
    CHECK(remote > 0);
    CHECK(countOf(s.out.substr(s.out.find("remote calls\n")), "\n  ") == remote);
  }
}

TEST_CASE("all-Both split gives identical tier listings") {
  const auto file = tempFile("open.tjs",
                             "/* @slice a */\n{\n  function f() { return g(); }\n}\n"
                             "/* @slice b */\n{\n  function g() { return 1; }\n}\n"
                             "var shared = f();\n");
  const auto placement =
      tempFile("open.json", "{\"fixed\": {}, \"searched\": {\"a\": \"both\", \"b\": \"both\"}}");
  const auto r = invoke({"split", file, "--placement", placement});
  REQUIRE(r.code == cli::kExitOk);
  const auto serverAt = r.out.find("\nserver\n");
  const auto remoteAt = r.out.find("remote calls\n");
  CHECK(r.out.substr(std::string("client").size(), serverAt + 1 - std::string("client").size()) ==
        r.out.substr(serverAt + 1 + std::string("server").size(),
                     remoteAt - serverAt - 1 - std::string("server").size()));
  CHECK(r.out.substr(remoteAt) == "remote calls\n");
  CHECK(r.out.find("shared declaration shared") != std::string::npos);
}

TEST_CASE("stats") {
  const std::vector<std::string> base = {"stats", fixturePath("planner/v2.tjs"),
                                         fixturePath("planner/v6.tjs"), "--runs", "12"};
  auto with = [&](std::vector<std::string> extra) {
    auto args = base;
    args.insert(args.end(), extra.begin(), extra.end());
    return invoke(args);
  };
  const auto one = with({"--threads", "1"});
  CHECK(one.code == cli::kExitOk);
  CHECK(one.out == with({"--threads", "4"}).out);
  const auto csv = with({"--csv", "--threads", "3"});
  CHECK(countOf(csv.out, "\n") == 3);
  CHECK(csv.out.find("fixture,slices,unplaced,runs,medC,minC,maxC") == 0);
  CHECK(csv.out.find(",100.00,0,0\n") != std::string::npos);

  const auto assignStats = invoke({"assign", fixturePath("planner/v2.tjs"), "--runs", "5", "--csv"});
  CHECK(countOf(assignStats.out, "\n") == 2);
}

TEST_CASE("run statistics") {
  const auto graph = buildPdg(analyze(readFixture("counterexample.tjs")));
  const auto s = cli::runStats("x", graph, GaConfig{}, AdvisorConfig{}, 9, 2);
  CHECK(s.unplaced == 3);
  CHECK(s.runs == 9);
  for (const auto* t : {&s.client, &s.server, &s.both}) {
    CHECK(t->min <= t->med);
    CHECK(t->med <= t->max);
  }
  CHECK(s.client.med + s.server.med + s.both.med <= 3);
  CHECK_THROWS_AS(cli::runStats("x", graph, GaConfig{}, AdvisorConfig{}, 0), Error);
}

TEST_CASE("every subcommand is deterministic") {
  const auto placement = (std::filesystem::temp_directory_path() / "tierslice_cli_test" /
                          "det.json").string();
  invoke({"oracle", fixturePath("counterexample.tjs"), "-o", placement});
  const std::vector<std::vector<std::string>> commands = {
      {"parse", fixturePath("planner/v3.tjs")},
      {"graph", fixturePath("planner/v3.tjs")},
      {"graph", fixturePath("planner/v3.tjs"), "--json"},
      {"assign", fixturePath("planner/v3.tjs"), "--seed", "5"},
      {"oracle", fixturePath("planner/v3.tjs")},
      {"advise", fixturePath("planner/v3.tjs"), "--seed", "5", "--json"},
      {"refine", fixturePath("planner/v3.tjs"), "--apply", "--seed", "5"},
      {"split", fixturePath("counterexample.tjs"), "--placement", placement},
      {"stats", fixturePath("planner/v3.tjs"), "--runs", "8", "--seed", "5"},
  };
  for (const auto& c : commands) {
    const auto a = invoke(c);
    const auto b = invoke(c);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
    CHECK(a.err == b.err);
  }
}
