#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "mksys/laws/generators.hpp"
#include "mksys/model/model.hpp"

using namespace mksys;
namespace fs = std::filesystem;

namespace {

const std::string chain_path = std::string(MKSYS_MODELS_DIR) + "/chain.json";

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "mksys");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// A scratch directory removed when the test ends.
struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("mksys_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name, std::ios::binary) << text;
    return (path / name).string();
  }
};

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("check accepts the bundled model") {
  const auto r = run({"check", chain_path});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "PASS"));
}

TEST_CASE("check names the row that does not sum to one") {
  TempDir tmp;
  auto doc = Model::load(chain_path).doc();
  doc["kernels"]["chain_update"]["rows"][0] = {"1/2", "2/5"};
  const auto r = run({"check", tmp.write("bad.json", doc.dump(2))});
  CHECK(r.code == 1);
  CHECK(contains(r.out + r.err, "chain_update"));
  CHECK(contains(r.out + r.err, "row 0"));
}

TEST_CASE("dangling references are parse errors") {
  TempDir tmp;
  auto doc = Model::load(chain_path).doc();
  doc["systems"]["chain"]["update"] = "nope";
  const auto r = run({"check", tmp.write("dangling.json", doc.dump(2))});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "nope"));
  CHECK(run({"check", tmp.write("garbage.json", "{not json")}).code == 2);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"unroll", chain_path, "--format", "xml"}).code == 2);
  CHECK(run({"unroll", chain_path}).code == 2);  // two systems, none chosen
}

TEST_CASE("unroll the chain") {
  const auto r = run({"unroll", chain_path, "--system", "chain", "--horizon", "2"});
  REQUIRE(r.code == 0);
  CHECK(contains(r.out, "table,n,s0,s1,s2,prob,decimal\n"));
  CHECK(contains(r.out, "phi,2,0,0,0,1/4,0.250000\n"));
  CHECK(contains(r.out, "phi,2,0,0,1,1/4,0.250000\n"));
  CHECK(contains(r.out, "phi,2,0,1,1,1/2,0.500000\n"));
  CHECK_FALSE(contains(r.out, "phi,2,1,"));

  const auto zero = run({"unroll", chain_path, "--system", "chain", "--horizon", "0"});
  REQUIRE(zero.code == 0);
  CHECK(zero.out == "table,n,s0,prob,decimal\nphi,0,0,1/1,1.000000\n");

  const auto clock = run({"unroll", chain_path, "--system", "clock", "--format", "json"});
  REQUIRE(clock.code == 0);
  const auto j = Json::parse(clock.out);
  for (const auto& t : j["phi"]) {
    REQUIRE(t["rows"].size() == 1);
    CHECK(t["rows"][0]["prob"] == "1/1");
  }
}

TEST_CASE("unroll writes to a file") {
  TempDir tmp;
  const auto out = (tmp.path / "phi.csv").string();
  const auto r = run({"unroll", chain_path, "--system", "chain", "--out", out});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  CHECK(contains(slurp(out), "phi,2,0,1,1,1/2"));
}

TEST_CASE("models round trip byte for byte") {
  CHECK(Model::load(chain_path).dump() == slurp(chain_path));
  TempDir tmp;
  const auto composed = run({"compose", chain_path, "chain", "relabel", "--name", "wired"});
  REQUIRE(composed.code == 0);
  CHECK(Model::parse(composed.out).dump() == composed.out);
  const auto saved = (tmp.path / "again.json").string();
  Model::parse(composed.out).save(saved);
  CHECK(slurp(saved) == composed.out);
}

TEST_CASE("compose through the identity wiring keeps the system data") {
  const auto r = run({"compose", chain_path, "chain", "identity", "--name", "same"});
  REQUIRE(r.code == 0);
  const auto m = Model::parse(r.out);
  CHECK(system_to_json(m.system("same").sys).dump() == system_to_json(m.system("chain").sys).dump());
}

TEST_CASE("compose through the relabeling lens matches the hand-built system") {
  const auto r = run({"compose", chain_path, "chain", "relabel", "--name", "wired"});
  REQUIRE(r.code == 0);
  const auto m = Model::parse(r.out);
  const FiniteObject bit({"0", "1"}), flag({"lo", "hi"});
  const auto update = Morphism::stochastic(bit, bit, {{Rational(1, 2), Rational(1, 2)}, {0, 1}});
  const auto hand = make_open_markov_system(bit, FiniteObject::unit(), flag,
                                            Morphism::function(bit, flag, std::vector<Index>{1, 0}), update, 2);
  CHECK(system_to_json(m.system("wired").sys) == system_to_json(hand));
}

TEST_CASE("tensor behavior from the command line") {
  Rng rng(3);
  TempDir tmp;
  auto inst = random_nabla_instance(rng, 2);
  Model m;
  m.put("sys_squares", "s1", sys_xy_to_json(inst.s1));
  m.put("sys_squares", "s2", sys_xy_to_json(inst.s2));
  m.put("charts", "g", chart_to_json(inst.g012));
  const auto good = tmp.write("nabla.json", m.dump());
  const auto r = run({"compose", good, "--nabla", "s1", "s2", "g", "--name", "both"});
  REQUIRE(r.code == 0);
  CHECK(validate_sys_xy(Model::parse(r.out).sys_square("both")));

  // Squares from an unrelated instance do not share the left lens.
  const auto other = random_nabla_instance(rng, 2);
  m.put("sys_squares", "s2", sys_xy_to_json(other.s2));
  const auto bad = run({"compose", tmp.write("bad.json", m.dump()), "--nabla", "s1", "s2", "g"});
  CHECK(bad.code == 1);
  CHECK_MESSAGE(contains(bad.err, "precondition violated: s1 and s2 must share the left system lens"), bad.err);
}

TEST_CASE("law runs are reproducible") {
  const std::vector<std::string> args{"laws", "--suite", "conditional", "--suite", "lens-assoc", "--cases", "20",
                                      "--seed", "42", "--json"};
  auto a = args, b = args;
  a.insert(a.end(), {"--threads", "1"});
  b.insert(b.end(), {"--threads", "3"});
  const auto r1 = run(a), r2 = run(b), r3 = run(a);
  CHECK(r1.code == 0);
  CHECK(r1.out == r2.out);
  CHECK(r1.out == r3.out);
  const auto j = Json::parse(r1.out);
  CHECK(j.size() == 2);
  CHECK(j[0]["suite"] == "conditional");
}

TEST_CASE("law runner edge cases") {
  const auto unknown = run({"laws", "--suite", "no-such-suite"});
  CHECK(unknown.code == 2);
  CHECK(contains(unknown.err, "semigraphoid"));
  const auto zero = run({"laws", "--suite", "semigraphoid", "--cases", "0"});
  CHECK(zero.code == 0);
  CHECK(contains(zero.err, "zero cases"));
  const auto sg = run({"laws", "--suite", "semigraphoid", "--cases", "30"});
  CHECK(sg.code == 0);
  CHECK(contains(sg.out, "30/30"));
}

TEST_CASE("trajectory diagnosis") {
  const auto r = run({"trajectory-diagnose", chain_path, "--system", "chain", "--wiring", "relabel"});
  CHECK(r.code == 0);
  CHECK_FALSE(contains(r.out, "FAIL"));
  const auto j = run({"trajectory-diagnose", chain_path, "--system", "chain", "--json"});
  CHECK(j.code == 0);
  CHECK(Json::parse(j.out).is_object());
}

TEST_CASE("color is opt-in through the environment") {
  ::setenv("MKSYS_COLOR", "1", 1);
  const auto colored = run({"check", chain_path});
  ::setenv("MKSYS_COLOR", "never", 1);
  const auto plain = run({"check", chain_path});
  ::unsetenv("MKSYS_COLOR");
  CHECK(contains(colored.out, "\x1b["));
  CHECK_FALSE(contains(plain.out, "\x1b["));
}
