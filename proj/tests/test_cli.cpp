#include "coh/cli.hpp"
#include "coh/json_io.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace coh;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content) {
  const std::string path = "coh_cli_test_" + name + ".json";
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST_CASE("check: coherent book with witness") {
  const Run r = run({"--json", "check", "--events", "x|y", "x+y", "--book", "1/2", "1"});
  REQUIRE(r.code == 0);
  CHECK(r.out == R"({"coherent":true,"witness":{"points":[["1/2","1/2"]],"weights":["1"]}})" "\n");
  // the shipped witness re-verifies
  const Json j = r.json();
  StateWitness w;
  for (const auto& p : j["witness"]["points"]) w.points.push_back(point_from_json(p));
  w.weights = point_from_json(j["witness"]["weights"]);
  CHECK(verify_witness(EventList({parse_event("x|y"), parse_event("x+y")}),
                       Book{{ExactRational(1, 2), 1}}, w));
}

TEST_CASE("check: incoherent book with Dutch book that re-verifies") {
  const Run r = run({"--json", "check", "--events", "x|~x", "--book", "1/4"});
  REQUIRE(r.code == 0);
  const Json j = r.json();
  CHECK(j["coherent"] == false);
  CHECK_FALSE(j.contains("witness"));
  DutchBook d{point_from_json(j["dutch_book"]["stakes"]),
              rational_from_json(j["dutch_book"]["guaranteed_loss"])};
  const EventList e({parse_event("x|~x")});
  CHECK(verify_dutch_book(coherent_set(e), Book{{ExactRational(1, 4)}}, d));
}

TEST_CASE("fp prove, entail, ldt") {
  CHECK(run({"--json", "fp", "prove", "P(x+y) <-> (P(x) -> P(x*y)) -> P(y)"}).out ==
        "{\"holds\":true}\n");
  const Run fails = run({"--json", "fp", "prove", "P(y)^2 <-> (~P(y))^2 | P(y)^2"});
  CHECK(fails.code == 0);
  CHECK(fails.json()["holds"] == false);
  CHECK(rational_from_json(fails.json()["countermodel"]["y"]) < ExactRational(1, 2));
  CHECK(run({"--json", "fp", "entail", "--premise", "P(x)", "--premise", "P(y)", "--conclusion",
             "P(x*y)"})
            .out == "{\"holds\":true}\n");
  CHECK(run({"--json", "ldt", "--premise", "P(x)", "--conclusion", "P(x)*P(x)"}).out ==
        "{\"holds\":true,\"exponent\":2}\n");
  CHECK(run({"--json", "ldt", "--premise", "P(x)", "--conclusion", "P(y)"}).out ==
        "{\"holds\":false}\n");
}

TEST_CASE("extend and set") {
  CHECK(run({"--json", "extend", "--events", "x", "--book", "1/3", "--new", "~x"}).out ==
        "{\"lo\":\"2/3\",\"hi\":\"2/3\"}\n");
  const Run bad = run({"--json", "extend", "--events", "x|~x", "--book", "0", "--new", "x"});
  CHECK(bad.code == 0);
  CHECK(bad.json()["coherent"] == false);
  const Json s = run({"--json", "set", "--events", "x|y", "x+y"}).json();
  CHECK(s["vertices"] == Json::parse(R"([["0","0"],["1/2","1"],["1","1"]])"));
  CHECK(s["dimension"] == 2);
  const Run text = run({"set", "--events", "x|y", "x+y"});
  CHECK(text.out.find("-2*x1 + x2 <= 0") != std::string::npos);
}

TEST_CASE("chi") {
  const Json j = run({"--json", "chi", "--events", "x|~x"}).json();
  CHECK(j["formula"] == "(p1 + p1)");
  CHECK(j["variables"]["p1"] == "(x | ~x)");
  CHECK(run({"--json", "chi", "--points", "1/2", "1"}).json()["formula"] == "(x1 + x1)");
  CHECK(run({"chi"}).code == 2);
}

TEST_CASE("unify") {
  CHECK(run({"--json", "unify", "verify", "--identity", "P(x1)|~P(x1)|P(x2)|~P(x2) = 1",
             "--sigma", "x1=1", "--sigma", "P(x2)=1"})
            .out == "{\"holds\":true}\n");
  CHECK(run({"--json", "unify", "verify", "--identity", "P(x1)|~P(x1)|P(x2)|~P(x2) = 1",
             "--sigma", "x1=P(x1)", "--sigma", "x2=P(x1)"})
            .out == "{\"holds\":false}\n");
  const Json w = run({"--json", "unify", "verify", "--identity", "P(x|~x)=P(x|~x)", "--sigma",
                      "x|~x=P(y)"})
                     .json();
  CHECK(w["holds"] == false);
  CHECK(rational_from_json(w["witness"][0]) < ExactRational(1, 2));
  CHECK(run({"--json", "unify", "generality", "--atom", "x", "--sigma", "x=1", "--tau",
             "x=P(y|~y)+P(y|~y)", "--delta", "y|~y=P(y|~y)"})
            .out == "{\"holds\":true}\n");
  CHECK(run({"--json", "unify", "generality", "--atom", "x", "--sigma", "x=P(y)", "--tau", "x=1"})
            .out == "{\"holds\":false}\n");
  CHECK(run({"unify", "generality", "--atom", "x", "--sigma", "x=P(y)", "--tau", "x=P(z)"}).code ==
        2);
  CHECK(run({"unify", "verify", "--identity", "P(x)", "--sigma", "x=1"}).code == 2);
}

TEST_CASE("input errors exit 2, caps exit 3") {
  const Run dec = run({"--json", "check", "--events", "x", "--book", "0.5"});
  CHECK(dec.code == 2);
  CHECK(dec.json()["exit_code"] == 2);
  CHECK(dec.err.find("0.5") != std::string::npos);
  CHECK(run({"check", "--events", "x +", "--book", "1"}).code == 2);
  CHECK(run({"check", "--events", "x", "--book", "3/2"}).code == 2);
  CHECK(run({"check", "--events", "x", "y", "--book", "1"}).code == 2);
  CHECK(run({"fp", "prove", "P(P(x))"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"set", "--events", "a", "b", "c", "d", "e", "f", "g"}).code == 3);
  CHECK(run({"set", "--events", "a+b+c+d+e"}).code == 3);
  CHECK(run({"set", "--events", "x^14"}).code == 3);  // unfolds to depth 13
  CHECK(run({"set", "--events", "x^13"}).code == 0);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("human-readable output") {
  const Run r = run({"check", "--events", "x|y", "x+y", "--book", "1/2", "1"});
  CHECK(r.out == "coherent\nwitness:\n  1 at (x=1/2, y=1/2)\n");
  const Run d = run({"check", "--events", "x|y", "x+y", "--book", "1", "1/2"});
  CHECK(d.out == "incoherent\nDutch book stakes: -1 1\nguaranteed loss: 1/2\n");
  CHECK(run({"fp", "prove", "P(x)"}).out == "fails\ncountermodel:\n  P(x) = 0\n");
}

TEST_CASE("batch files, sequential and concurrent, are deterministic") {
  const std::string path = temp_file("batch", R"js([
    {"events": ["x|y", "x+y"], "book": {"x|y": "1/2", "x+y": "1"}},
    {"events": ["x"], "book": ["1/3"], "new": "~x"},
    {"events": ["x+y", "x*y", "x&y"]},
    {"conclusion": "~P(x) <-> P(~x)"},
    {"premise": "P(x)", "conclusion": "P(x)*P(x)", "query": "ldt"},
    {"identities": [["P(x1)|~P(x1)", "1"]], "substitution": {"P(x1)": "1"}},
    {"events": ["x"], "book": {"x": "0.5"}},
    {"events": ["x"], "query": "chi"}
  ])js");
  const Run one = run({"--json", "batch", path});
  const Run many = run({"--json", "batch", path, "--jobs", "3"});
  CHECK(one.code == 2);
  CHECK(one.out == many.out);
  const Json j = one.json();
  REQUIRE(j.size() == 8);
  CHECK(j[0]["coherent"] == true);
  CHECK(j[1] == Json::parse(R"({"lo":"2/3","hi":"2/3"})"));
  CHECK(j[2]["vertices"].size() == 4);
  CHECK(j[3]["holds"] == true);
  CHECK(j[4]["exponent"] == 2);
  CHECK(j[5]["holds"] == true);
  CHECK(j[6]["exit_code"] == 2);
  CHECK(j[7]["formula"] == "1");
  CHECK(run({"--json", "batch", path}).out == one.out);
  std::remove(path.c_str());

  const std::string broken = temp_file("broken", "{ nope");
  CHECK(run({"batch", broken}).code == 2);
  std::remove(broken.c_str());
}

TEST_CASE("identical invocations give byte-identical output") {
  const std::vector<std::string> args{"--json", "check", "--events", "x*y", "x|y", "~x",
                                      "--book", "1/5", "3/5", "1/2"};
  const Run a = run(args), b = run(args);
  CHECK(a.out == b.out);
  CHECK(a.code == 0);
}
