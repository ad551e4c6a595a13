#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "test_util.hpp"

using namespace ehrkit;
using nlohmann::json;
using testutil::iv;
using testutil::thrown_code;
using testutil::unit_square_example;

TEST_SUITE("cli_io") {

TEST_CASE("polytope json roundtrip keeps the exact representation") {
  HPolytope p = unit_square_example();
  std::string text = polytope_to_json(p);
  HPolytope q = polytope_from_json(text);
  CHECK(q.dim == p.dim);
  REQUIRE(q.ineqs.size() == p.ineqs.size());
  for (size_t i = 0; i < p.ineqs.size(); ++i) {
    CHECK(q.ineqs[i].a == p.ineqs[i].a);
    CHECK(q.ineqs[i].b == p.ineqs[i].b);
  }

  json doc = json::parse(text);
  CHECK(doc["dim"] == 2);
  // Integral values render as JSON integers, others as exact strings.
  CHECK(doc["ineqs"][0]["b"] == 1);
  CHECK(doc["ineqs"][1]["b"] == "-2/3");
}

TEST_CASE("polytope parsing rejects malformed documents") {
  CHECK(thrown_code([] { polytope_from_json("nonsense"); }) == "ParseError");
  CHECK(thrown_code([] { polytope_from_json("[1,2]"); }) == "ParseError");
  CHECK(thrown_code([] { polytope_from_json("{\"dim\": 2}"); }) == "ParseError");
  CHECK(thrown_code([] {
          polytope_from_json("{\"dim\": 2, \"ineqs\": [{\"a\": [1, 0]}]}");
        }) == "ParseError");
  CHECK(thrown_code([] {
          polytope_from_json(
              "{\"dim\": 2, \"ineqs\": [{\"a\": [1, 0], \"b\": \"1/0\"}]}");
        }) == "ParseError");
  CHECK(thrown_code([] {
          polytope_from_json(
              "{\"dim\": 2, \"ineqs\": [{\"a\": [0, 0], \"b\": 1}]}");
        }) == "ZeroNormal");
  CHECK(thrown_code([] {
          polytope_from_json(
              "{\"dim\": 2, \"ineqs\": [{\"a\": [1, 0], \"b\": 1}]}");
        }) == "UnboundedPolytope");
}

TEST_CASE("step function serialization carries the breakpoint table") {
  QStepFunction f = step_function(unit_square_example(), Rat(7, 2));
  json doc = json::parse(stepfn_to_json(f));
  CHECK(doc["lo"] == 0);
  CHECK(doc["hi"] == "7/2");
  CHECK(doc["base_value"] == 0);
  REQUIRE(doc["breaks"].size() == 4);
  CHECK(doc["breaks"][1]["s"] == "3/2");
  CHECK(doc["breaks"][1]["value_at"] == 1);
  CHECK(doc["breaks"][1]["value_after"] == 0);
  CHECK(doc["breaks"][3]["entering"] == 3);
  CHECK(doc["breaks"][3]["leaving"] == 2);

  std::string csv = stepfn_to_csv(f);
  CHECK(csv.rfind("s,value,s_approx,value_approx\n", 0) == 0);
  CHECK(csv.find("3/2,1,") != std::string::npos);
  size_t lines = 0;
  for (char c : csv)
    if (c == '\n') ++lines;
  // Header, one row per breakpoint, one midpoint row per constancy interval.
  CHECK(lines >= 9);
}

TEST_CASE("jump reports serialize with facet cross-checks left to callers") {
  QStepFunction f = step_function(unit_square_example(), Rat(7, 2));
  json doc = json::parse(jumps_to_json(jumps(f)));
  REQUIRE(doc.is_array());
  REQUIRE(doc.size() == 4);
  CHECK(doc[3]["s"] == 3);
  CHECK(doc[3]["left_jump"] == 3);
  CHECK(doc[3]["right_jump"] == 2);
}

TEST_CASE("volume and translate reports serialize") {
  json pv = json::parse(ppyr_volumes_to_json(ppyr_volume(unit_square_example())));
  CHECK(pv["via_decomposition"] == "2/9");
  CHECK(pv["via_hull"] == "2/9");

  HPolytope p = unit_square_example();
  TranslateCheck tc =
      check_translates_distinct(p, find_translation_witness(p), 2, Rat(3));
  json tj = json::parse(translate_check_to_json(tc));
  CHECK(tj["all_distinct"] == true);
  CHECK(tj["k_max"] == 2);
  REQUIRE(tj["pairs"].size() == 3);

  std::vector<Rat> s_list = {Rat(1), Rat(2)};
  HPolytope seg = validate(2, {{iv({1, 0}), Rat(1)},
                               {iv({-1, 0}), Rat(-1)},
                               {iv({0, 1}), Rat(1)},
                               {iv({0, -1}), Rat(0)}});
  json rv = json::parse(
      rvol_report_to_json(rvol_limit_check(seg, {Rat(0), Rat(0)}, s_list)));
  CHECK(rv["rvol"] == 1);
  REQUIRE(rv["samples"].size() == 2);
}

TEST_CASE("reconstruction reports serialize verdicts in input order") {
  HPolytope p = unit_square_example();
  HiddenPolytopeOracle oracle(p);
  ReconstructionReport rep = recover(
      oracle, {iv({1, 0}), iv({-1, 0}), iv({0, 1}), iv({0, -1})});
  json doc = json::parse(report_to_json(rep));
  CHECK(doc["verification"] == "passed");
  REQUIRE(doc["verdicts"].size() == 4);
  CHECK(doc["verdicts"][0]["kind"] == "facet");
  CHECK(doc["verdicts"][0]["b"] == 1);
  CHECK(doc["verdicts"][1]["b"] == "-2/3");
  CHECK(doc["verdicts"][2]["b"] == "1/3");
  CHECK(doc["verdicts"][3]["b"] == 0);
  CHECK(doc.contains("stages"));
  CHECK(doc.contains("oracle_calls"));
}

TEST_CASE("suite results serialize as json lines") {
  InstanceSpec spec;
  spec.dim = 2;
  spec.count = 2;
  spec.seed = 21;
  SuiteResult res = run_suite(generate_instances(spec), Rat(2));
  std::string lines = suite_to_json_lines(res);
  std::istringstream in(lines);
  std::string line;
  std::vector<json> docs;
  while (std::getline(in, line))
    if (!line.empty()) docs.push_back(json::parse(line));
  REQUIRE(docs.size() == 3);
  CHECK(docs[0]["instance"] == 0);
  CHECK(docs[1]["instance"] == 1);
  CHECK(docs[0].contains("checks"));
  CHECK(docs[2]["total"] == 2);
  CHECK(docs[2].contains("all_passed"));

  json full = json::parse(suite_to_json(res));
  CHECK(full["instances"].size() == 2);
}

TEST_CASE("instance specifications parse with defaults and strict keys") {
  InstanceSpec spec = instance_spec_from_json(
      "{\"dim\": 3, \"count\": 7, \"seed\": 99, \"normal_bound\": 2, "
      "\"den_bound\": 5}");
  CHECK(spec.dim == 3);
  CHECK(spec.count == 7);
  CHECK(spec.seed == 99);
  CHECK(spec.normal_bound == 2);
  CHECK(spec.den_bound == 5);

  InstanceSpec partial = instance_spec_from_json("{\"dim\": 3}");
  CHECK(partial.dim == 3);
  CHECK(partial.count == InstanceSpec{}.count);

  CHECK(thrown_code([] { instance_spec_from_json("[]"); }) == "ParseError");
  CHECK(thrown_code([] { instance_spec_from_json("{\"dimension\": 2}"); }) ==
        "ParseError");
  CHECK(thrown_code([] { instance_spec_from_json("{\"dim\": \"two\"}"); }) ==
        "ParseError");
}

TEST_CASE("normal lists parse as arrays of integer vectors") {
  auto normals = normals_from_json("[[1, 0], [0, -1], [2, 3]]");
  REQUIRE(normals.size() == 3);
  CHECK(normals[0] == iv({1, 0}));
  CHECK(normals[2] == iv({2, 3}));

  CHECK(thrown_code([] { normals_from_json("{}"); }) == "ParseError");
  CHECK(thrown_code([] { normals_from_json("[[1, \"1/2\"]]"); }) == "ParseError");
  CHECK(thrown_code([] { normals_from_json("[[1.5, 0]]"); }) == "ParseError");
}

}  // TEST_SUITE
