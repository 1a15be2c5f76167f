#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fmlab/cli.hpp"

using namespace fmlab;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("fmlab_cli_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }

  std::string file(const std::string& name, const std::string& content) const {
    auto p = path / name;
    std::ofstream f(p, std::ios::binary);
    f << content;
    return p.string();
  }
};

struct CliRun {
  int code;
  std::string out, err;
  Json json() const { return Json::parse(out); }
};

CliRun cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

const char* succ4 =
    R"({"universe":4,"relations":[{"name":"r","arity":2,"tuples":[[0,1],[1,2],[2,3],[3,0]]}]})";

}  // namespace

TEST_CASE("eval reports the truth value and exits cleanly") {
  TempDir tmp;
  auto in = tmp.file("m.json", succ4);
  auto r = cli({"eval", "--in", in, "--formula", "E x. r(x,x)"});
  CHECK(r.code == 0);
  CHECK(r.json()["result"]["value"] == false);

  auto r2 = cli({"eval", "--in", in, "--formula", "r(x,y)", "--assign", "x=0,y=1"});
  CHECK(r2.code == 0);
  CHECK(r2.json()["result"]["value"] == true);
}

TEST_CASE("usage and input errors exit with 2") {
  TempDir tmp;
  auto in = tmp.file("m.json", succ4);
  CHECK(cli({"probe", "--family", (tmp.path / "missing.json").string(), "--delta",
             tmp.file("d.txt", "r(x,y) :: x ; y\n")})
            .code == 2);
  CHECK(cli({"eval", "--in", in, "--formula", "r(x,"}).code == 2);
  CHECK(cli({"eval", "--in", in}).code == 2);  // missing required flag
  CHECK(cli({"nonsense"}).code == 2);
  CHECK(cli({"eval", "--in", tmp.file("bad.json", "{\"universe\": 3, \"junk\": 1}"),
             "--formula", "x=x"})
            .code == 2);
}

TEST_CASE("decompose verifies and emits artifacts") {
  TempDir tmp;
  auto in = tmp.file("m.json", succ4);
  auto model_path = (tmp.path / "model.json").string();
  auto formula_path = (tmp.path / "phi.txt").string();
  auto r = cli({"decompose", "--in", in, "--auto", "--emit-model", model_path,
                "--emit-formula", formula_path});
  CHECK(r.code == 0);
  auto j = r.json();
  CHECK(j["result"]["verified"] == true);
  CHECK(j["result"]["stats"]["k"] == 1);

  // the emitted model loads and the emitted formula defines r over it
  auto sf = read_structure(load_json_file(model_path));
  std::ifstream f(formula_path);
  std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  auto phi = parse_formula(text);
  auto defined = definable_relation(sf.model, phi, {"x", "y"});
  CHECK(defined.tuples == RelationTable(2, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}).tuples);
}

TEST_CASE("decompose with an explicit undersized k fails verification politely") {
  TempDir tmp;
  // 2x4 equivalence: k=1 runs into a majority tie, reported as input error? no:
  // the pipeline throws a tie, surfaced as a verification failure exit
  std::string eq =
      R"({"universe":8,"relations":[{"name":"r","arity":2,"tuples":[)";
  bool first = true;
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y)
      if (x / 4 == y / 4) {
        if (!first) eq += ",";
        eq += "[" + std::to_string(x) + "," + std::to_string(y) + "]";
        first = false;
      }
  eq += "]}]}";
  auto in = tmp.file("eq.json", eq);
  auto r = cli({"decompose", "--in", in, "--k", "1"});
  CHECK(r.code == 1);
  CHECK(r.err.find("majority") != std::string::npos);
  auto r2 = cli({"decompose", "--in", in, "--auto"});
  CHECK(r2.code == 0);
}

TEST_CASE("analyze agrees with its own partition") {
  TempDir tmp;
  auto in = tmp.file("m.json", succ4);
  auto d = tmp.file("d.txt", "r(x,y) :: x ; y\n");
  auto r = cli({"analyze", "--in", in, "--delta", d, "--lambda0", "2"});
  CHECK(r.code == 0);
  auto j = r.json();
  CHECK(j["result"]["k"] == 1);
  CHECK(j["result"]["psi_agrees"] == true);
}

TEST_CASE("sunflower subcommand extracts, codes, and verifies") {
  TempDir tmp;
  auto seq = tmp.file("seq.json", R"({"n":2,"tuples":[[1,2],[1,3],[1,4],[1,2],[5,6]]})");
  auto r = cli({"sunflower", "--extract", seq, "--m", "3", "--code", "--verify"});
  CHECK(r.code == 0);
  auto j = r.json();
  CHECK(j["result"]["found"] == true);
  CHECK(j["result"]["indices"] == Json::array({0, 1, 2}));
  CHECK(j["result"]["codes"] == Json::array({2, 3, 4}));
  CHECK(j["result"]["coding_verified"] == true);
}

TEST_CASE("probe families by generator") {
  TempDir tmp;
  auto fam = tmp.file("fam.json",
                      R"({"instances":[{"generator":"balanced-equivalence","size":4},
                          {"generator":"balanced-equivalence","size":9},
                          {"generator":"balanced-equivalence","size":16}],
                          "lambda0":"sqrt"})");
  auto d = tmp.file("d.txt", "r(x,y) :: x ; y\n");
  auto r = cli({"probe", "--family", fam, "--delta", d});
  CHECK(r.code == 0);
  auto j = r.json();
  CHECK(j["result"]["verdict"] == "growing");
  CHECK(j["result"]["instances"][2]["k"] == 4);
}

TEST_CASE("config-search and census subcommands") {
  TempDir tmp;
  std::string order = R"({"universe":5,"relations":[{"name":"r","arity":2,"tuples":[)";
  bool first = true;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) {
      if (!first) order += ",";
      order += "[" + std::to_string(i) + "," + std::to_string(j) + "]";
      first = false;
    }
  order += "]}]}";
  auto in = tmp.file("order.json", order);
  auto r = cli({"config-search", "--in", in, "--formula", "(r(x,y) | x=y)", "--mode", "order"});
  CHECK(r.code == 0);
  CHECK(r.json()["result"]["length"] == 5);

  auto c = cli({"census", "--n", "1", "--m", "2"});
  CHECK(c.code == 0);
  CHECK(c.json()["result"]["relation_least_n"] == 3);
}

TEST_CASE("reports are byte-identical across runs") {
  TempDir tmp;
  auto in = tmp.file("m.json", succ4);
  auto d = tmp.file("d.txt", "r(x,y) :: x ; y\n");
  for (auto args : std::vector<std::vector<std::string>>{
           {"decompose", "--in", in, "--auto"},
           {"analyze", "--in", in, "--delta", d, "--lambda0", "2"},
           {"census", "--n", "2", "--m", "3"},
           {"arith-search", "--n", "2"}}) {
    auto r1 = cli(args);
    auto r2 = cli(args);
    CHECK(r1.code == r2.code);
    CHECK(r1.out == r2.out);
  }
}
