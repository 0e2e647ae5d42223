#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hoq/cli.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out, err;
  json doc() const { return json::parse(out); }
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = hoq::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("hoq_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_file(const std::string& name, const json& content) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << content.dump();
  return p.string();
}

json real_matrix(const std::vector<std::vector<double>>& rows, std::vector<int> dims) {
  json m = json::array();
  for (const auto& r : rows) {
    json row = json::array();
    for (double v : r) row.push_back(json::array({v, 0.0}));
    m.push_back(row);
  }
  return {{"dims", dims}, {"matrix", m}};
}

json scaled_identity(int n, double s, std::vector<int> dims) {
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) rows[i][i] = s;
  return real_matrix(rows, std::move(dims));
}

}  // namespace

TEST_CASE("sem") {
  const auto r = run({"sem", "A:2->B:2"});
  CHECK(r.code == 0);
  const json d = r.doc();
  CHECK(d["lambda"] == "1/2");
  CHECK(d["delta"] == json::array({"00", "10"}));
  CHECK(d["dims"] == json::array({2, 2}));
}

TEST_CASE("parse") {
  const auto r = run({"parse", "(A->B)->C"});
  CHECK(r.code == 0);
  CHECK(r.doc()["canonical"] == "(A:2->B:2)->C:2");
  const auto bad = run({"parse", "A->"});
  CHECK(bad.code == 2);
  CHECK_FALSE(bad.err.empty());
}

TEST_CASE("equiv") {
  CHECK(run({"equiv", "((A:2->I)->I)", "A:2"}).code == 0);
  CHECK(run({"equiv", "((A:2->I)->I)", "A:2"}).doc()["equivalent"] == true);
  CHECK(run({"equiv", "A:2->B:2", "A:2*B:2"}).code == 1);
  const auto perm = run({"equiv", "(A1->B1)->(A2->B2)", "((A2->A1)->B1)->B2", "--perm", "1,2,0,3"});
  CHECK(perm.code == 0);
  CHECK(run({"equiv", "(A1->B1)->(A2->B2)", "((A2->A1)->B1)->B2"}).code == 1);
  CHECK(run({"equiv", "(A1->B1)->(A2->B2)", "((A2->A1)->B1)->B2", "--search"}).code == 0);
  CHECK(run({"equiv", "A->B", "A->B", "--perm", "0,1,2"}).code == 2);
}

TEST_CASE("check-det") {
  const std::string depol = write_file("depol.json", scaled_identity(4, 0.25, {2, 2}));
  const auto r = run({"check-det", "--type", "A:2->B:2", "--matrix", depol});
  CHECK(r.code == 1);
  CHECK(r.doc()["verdict"] == false);
  const std::string good = write_file("half.json", scaled_identity(4, 0.5, {2, 2}));
  CHECK(run({"check-det", "--type", "A:2->B:2", "--matrix", good}).code == 0);
  CHECK(run({"check-det", "--type", "A:3->B:2", "--matrix", good}).code == 2);
  CHECK(run({"check-det", "--type", "A:2->B:2", "--matrix", (scratch() / "missing.json").string()}).code == 2);
}

TEST_CASE("check-adm") {
  const std::string ok = write_file("adm_ok.json", scaled_identity(4, 0.25, {2, 2}));
  const auto r = run({"check-adm", "--type", "A:2->B:2", "--matrix", ok});
  CHECK(r.code == 0);
  CHECK(r.doc()["feasible"] == "yes");
  const std::string neg = write_file("adm_neg.json", real_matrix({{1, 0}, {0, -0.5}}, {2}));
  const auto n = run({"check-adm", "--type", "A:2", "--matrix", neg});
  CHECK(n.code == 1);
  CHECK(n.doc()["rejected_at_precheck"] == true);
}

TEST_CASE("sample-det and oracle-det are seed-deterministic") {
  const auto a = run({"sample-det", "--type", "(A->B)->C", "--seed", "7"});
  const auto b = run({"sample-det", "--type", "(A->B)->C", "--seed", "7"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out != run({"sample-det", "--type", "(A->B)->C", "--seed", "8"}).out);
  const std::string sampled = write_file("sampled.json", a.doc());
  CHECK(run({"check-det", "--type", "(A->B)->C", "--matrix", sampled}).code == 0);

  const std::string id = write_file("id.json", real_matrix({{1, 0, 0, 1}, {0, 0, 0, 0}, {0, 0, 0, 0}, {1, 0, 0, 1}},
                                                           {2, 2}));
  CHECK(run({"oracle-det", "--type", "A:2", "--cotype", "A:2", "--matrix", id, "--samples", "50"}).code == 0);
  const std::string depol = write_file("depol4.json", scaled_identity(4, 0.25, {2, 2}));
  CHECK(run({"oracle-det", "--type", "A:2", "--cotype", "B:2", "--matrix", depol, "--samples", "20"}).code == 1);
}

TEST_CASE("comb") {
  const auto d = run({"comb", "delta", "--base", "A->B", "--n", "3"});
  CHECK(d.code == 0);
  CHECK(d.doc()["agrees_with_recursion"] == true);
  const auto l = run({"comb", "lambda", "--base", "A->B", "--n", "2"});
  CHECK(l.doc()["lambda"] == "1/4");
  const auto p = run({"comb", "equiv-perm", "--n", "2"});
  CHECK(p.code == 0);
  CHECK(p.doc()["permutation"] == json::array({1, 2, 0, 3}));
  const std::string half = write_file("comb1.json", scaled_identity(4, 0.5, {2, 2}));
  CHECK(run({"comb", "norm", "--base", "A->B", "--n", "1", "--matrix", half}).code == 0);
  const std::string quarter = write_file("comb1q.json", scaled_identity(4, 0.25, {2, 2}));
  CHECK(run({"comb", "norm", "--base", "A->B", "--n", "1", "--matrix", quarter}).code == 1);
  CHECK(run({"comb", "bogus", "--n", "1"}).code == 2);
}

TEST_CASE("inverse") {
  const std::string nogo = write_file("t00.json", json::array({"00"}));
  const auto r = run({"inverse", "--dims", "2,2", "--delta", nogo, "--max-depth", "3"});
  CHECK(r.code == 1);
  CHECK(r.doc()["matches"].empty());
  CHECK(r.doc()["exhausted"] == true);
  const std::string chan = write_file("tchan.json", json::array({"00", "10"}));
  const auto c = run({"inverse", "--dims", "2,2", "--delta", chan, "--max-depth", "2", "--trivial-leaves", "0"});
  CHECK(c.code == 0);
  CHECK(c.doc()["matches"] == json::array({"A:2->B:2"}));
}

TEST_CASE("usage errors and text output") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"sem"}).code == 2);
  const auto t = run({"--format", "text", "sem", "A:2->B:2"});
  CHECK(t.code == 0);
  CHECK(t.out.find("1/2") != std::string::npos);
  CHECK_THROWS(json::parse(t.out));
}

TEST_CASE("byte-identical output for fixed argv") {
  const std::vector<std::vector<std::string>> cases = {
      {"sem", "((A->B)->C)->D"},
      {"equiv", "(A1->B1)->(A2->B2)", "((A2->A1)->B1)->B2", "--search"},
      {"sample-det", "--type", "A:3->B:2", "--seed", "11", "--spread", "0.5"},
      {"comb", "delta", "--base", "(A->B)->C", "--n", "2"},
  };
  for (const auto& c : cases) CHECK(run(c).out == run(c).out);
}
