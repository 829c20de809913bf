#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "symkit/cli/driver.hpp"
#include "symkit/cli/model.hpp"
#include "symkit/cli/problem.hpp"

using namespace symkit;
using namespace symkit::cli;
using Json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string problem(const std::string& name) { return std::string(SYMKIT_PROBLEMS_DIR) + "/" + name; }

ProblemFile load(const std::string& name) {
  std::ifstream in(problem(name));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

/// pr Q1[eta2] - pr Q2[eta1] for evolutionary fields, written out with
/// total derivatives: pr Q[f] = sum_J D_J(eta) df/du_J.
ExpPoly evolutionary_bracket(const JetContext& ctx, const ExpPoly& eta1, const ExpPoly& eta2) {
  auto pr = [&](const ExpPoly& eta, const ExpPoly& f) {
    ExpPoly out(ctx.vars());
    for (std::size_t v = ctx.m(); v < ctx.vars()->size(); ++v) {
      if (!f.depends_on(v)) continue;
      out += total_derivative(ctx, eta, ctx.vars()->var(v).multiindex) * f.partial(v);
    }
    return out;
  };
  return pr(eta1, eta2) - pr(eta2, eta1);
}

std::string temp_path(const std::string& name) {
  return std::string(SYMKIT_TEST_TMP_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("schrodinger dimension table") {
  Run r = invoke({"schrodinger", "--qmax", "4", "--json", "-"});
  REQUIRE(r.code == 0);
  Json doc = Json::parse(r.out);
  CHECK(doc["schema"] == 1);
  std::vector<std::size_t> dims;
  for (const auto& row : doc["dimensions"]) dims.push_back(row["dimension"].get<std::size_t>());
  CHECK(dims == std::vector<std::size_t>{1, 3, 6, 10, 15});
  CHECK(doc["basis"].size() == 15);
  CHECK(doc["verification"]["formula_holds"] == true);
  REQUIRE(doc["structure"]["blocks"].size() == 1);
  CHECK(doc["structure"]["blocks"][0]["r"] == 15);
  CHECK(doc["structure"]["blocks"][0]["lambda"] == Json::array({"0", "0"}));
}

TEST_CASE("table output") {
  Run r = invoke({"schrodinger", "--qmax", "2", "--verify"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("   2       6             6") != std::string::npos);
  CHECK(r.out.find("[ok]") != std::string::npos);
  CHECK(r.err.empty());
}

TEST_CASE("JSON output is byte-stable") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"schrodinger", "--qmax", "3", "--json", "-"},
           {"solve", problem("schrodinger.pde"), "--lambda", "(0,0), (1,0)", "--json", "-"},
           {"evolution", problem("heat.pde"), "-q", "2", "--json", "-"},
           {"adjoint", problem("schrodinger.pde"), "--json", "-"}}) {
    Run a = invoke(args);
    Run b = invoke(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(Json::parse(a.out)["schema"] == 1);
  }
}

TEST_CASE("numbers are exact strings") {
  Run r = invoke({"solve", problem("schrodinger.pde"), "-q", "1", "--json", "-"});
  REQUIRE(r.code == 0);
  Json doc = Json::parse(r.out);
  const Json& basis = doc["runs"][0]["basis"];
  REQUIRE(basis.size() == 3);
  bool saw_fraction = false;
  for (const auto& op : basis) {
    for (const auto& term : op["terms"]) {
      for (const auto& c : term["coefficient"]) {
        REQUIRE(c["coeff"].is_string());
        if (c["coeff"] == "-1/2*i") saw_fraction = true;
      }
    }
  }
  CHECK(saw_fraction);
}

TEST_CASE("config precedence") {
  // The file asks for order 2; the flag wins.
  Json flag = Json::parse(invoke({"solve", problem("schrodinger.pde"), "-q", "1", "--json", "-"}).out);
  CHECK(flag["order"] == 1);
  Json file = Json::parse(invoke({"solve", problem("schrodinger.pde"), "--json", "-"}).out);
  CHECK(file["order"] == 2);
  CHECK(file["runs"][0]["dimension"] == 6);
  Json caps = Json::parse(invoke({"evolution", problem("heat.pde"), "--caps", "1,1", "--json", "-"}).out);
  CHECK(caps["caps"]["poly_degree"] == 1);
  CHECK(caps["order"] == 1);
}

TEST_CASE("exponential weights give no operators") {
  Run r = invoke({"solve", problem("schrodinger.pde"), "--lambda", "(1,0), (0,i)", "--verify", "--json", "-"});
  REQUIRE(r.code == 0);
  Json doc = Json::parse(r.out);
  REQUIRE(doc["runs"].size() == 2);
  for (const auto& run : doc["runs"]) CHECK(run["dimension"] == 0);
}

TEST_CASE("evolution route") {
  Run r = invoke({"evolution", problem("heat.pde"), "-q", "1", "--verify", "--json", "-"});
  REQUIRE(r.code == 0);
  Json doc = Json::parse(r.out);
  CHECK(doc["verification"]["all_verified"] == true);
  std::vector<std::string> texts;
  for (const auto& c : doc["runs"][0]["characteristics"]) texts.push_back(c["text"]);
  CHECK(std::find(texts.begin(), texts.end(), "u_y") != texts.end());
  CHECK(std::find(texts.begin(), texts.end(), "t*u_y + 1/2*y*u") != texts.end());

  Run nonlinear = invoke({"solve", problem("burgers.pde"), "--json", "-"});
  REQUIRE(nonlinear.code == 0);
  CHECK(Json::parse(nonlinear.out)["route"] == "evolution");
}

TEST_CASE("adjoint matrices") {
  Run r = invoke({"adjoint", problem("schrodinger.pde"), "-q", "1", "--json", "-"});
  REQUIRE(r.code == 0);
  Json doc = Json::parse(r.out);
  REQUIRE(doc["matrices"].size() == 2);
  CHECK(doc["matrices"][0]["variable"] == "t");
  CHECK(doc["matrices"][0]["char_poly"] == "lambda^3");
  CHECK(doc["structure"]["checks"]["matrices_commute"] == true);
}

TEST_CASE("operator bracket matches the direct commutator") {
  Run r = invoke({"bracket", problem("galilei.pde"), problem("dilation.pde"), "--verify", "--json", "-"});
  REQUIRE(r.code == 0);
  Json doc = Json::parse(r.out);
  ProblemFile a = load("galilei.pde");
  ProblemFile b = load("dilation.pde");
  ContextPtr ctx = operator_context(a);
  LinDiffOp ra = evaluate_operator(*a.op, a, ctx);
  LinDiffOp rb = evaluate_operator(*b.op, b, ctx);
  LinDiffOp direct = compose(ra, rb) - compose(rb, ra);
  CHECK(doc["bracket"]["text"] == direct.to_string());
  CHECK(doc["verification"]["passed"] == true);
}

TEST_CASE("field bracket matches the prolongation formula") {
  Run r = invoke({"bracket", problem("heat_galilei.pde"), problem("heat_shift.pde"), "--verify", "--json", "-"});
  REQUIRE(r.code == 0);
  Json doc = Json::parse(r.out);
  ProblemFile a = load("heat_galilei.pde");
  ProblemFile b = load("heat_shift.pde");
  JetContextPtr ctx = jet_context(a, 8);
  ExpPoly direct = evolutionary_bracket(*ctx, field_of(a, ctx).eta[0], field_of(b, ctx).eta[0]);
  CHECK_FALSE(direct.is_zero());
  GenVectorField expected = GenVectorField::evolutionary(ctx, {direct});
  CHECK(doc["bracket"]["text"] == expected.to_string());
  CHECK(doc["verification"]["passed"] == true);
}

TEST_CASE("JSON to a file keeps the table") {
  std::string path = temp_path("symkit_driver_test.json");
  Run r = invoke({"schrodinger", "--qmax", "1", "--json", path});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("q") != std::string::npos);
  std::ifstream in(path);
  Json doc = Json::parse(in);
  CHECK(doc["qmax"] == 1);
  std::remove(path.c_str());
}

TEST_CASE("exit codes") {
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"frobnicate"}).code == 2);
  CHECK(invoke({"schrodinger", "--qmax", "x"}).code == 2);
  CHECK(invoke({"solve", problem("missing.pde")}).code == 2);
  CHECK(invoke({"--help"}).code == 0);

  std::string bad = temp_path("symkit_bad.pde");
  {
    std::ofstream f(bad);
    f << "vars t, y;\nunknowns u;\neq D[u,t] = ;\n";
  }
  Run r = invoke({"solve", bad});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 3, column 13") != std::string::npos);
  {
    std::ofstream f(bad);
    f << "vars t, y;\nunknowns u;\neq D[u,t] = D[u,y,y];\n";
  }
  CHECK(invoke({"solve", bad, "--lambda", "(1, 2)"}).code == 2);
  CHECK(invoke({"solve", bad, "--caps", "1,2,3"}).code == 2);
  CHECK(invoke({"bracket", problem("galilei.pde"), problem("heat_shift.pde")}).code == 2);
  std::remove(bad.c_str());
}
