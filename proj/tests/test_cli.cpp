#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "galmon/cli.hpp"
#include "galmon/monodromy.hpp"

using namespace galmon;
namespace fs = std::filesystem;

namespace {

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string line_value(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind(key + ": ", 0) == 0) return line.substr(key.size() + 2);
  return {};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class TempDir {
public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("galmon_cli_" + std::to_string(::getpid()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
  fs::path path_;
};

const std::string kReference = std::string(GALMON_TEST_DATA_DIR) + "/fivepoint_reference.g";

}  // namespace

TEST_CASE("fabricate") {
  const auto five = call({"fabricate", "fivepoint", "--seed", "2025"});
  CHECK(five.code == cli::kOk);
  CHECK(std::stod(line_value(five.out, "residual")) <= 1e-12);

  const auto p3p = call({"fabricate", "p3p", "--seed", "1"});
  CHECK(p3p.code == cli::kOk);
  const SolutionSet set = solutions_from_json(p3p.out.substr(0, p3p.out.find('\n')));
  CHECK(set.parameters.size() == 6);
  REQUIRE(set.solutions.size() == 1);
  CHECK(set.solutions[0].size() == 3);

  CHECK(call({"fabricate", "nosuch"}).code == cli::kUsage);
  CHECK(call({"fabricate", "p3p", "--seed", "1"}).out == p3p.out);
}

TEST_CASE("usage errors") {
  CHECK(call({}).code == cli::kUsage);
  CHECK(call({"frobnicate"}).code == cli::kUsage);
  CHECK(call({"monodromy", "p3p", "--nodes", "1"}).code == cli::kUsage);
  CHECK(call({"monodromy", "p3p", "--equivalencer", "translation"}).code == cli::kUsage);
  CHECK(call({"group", "/nonexistent/file.g"}).code == cli::kUsage);
  CHECK(call({"--help"}).code == cli::kOk);
}

TEST_CASE("ransac-trials") {
  const auto r = call({"ransac-trials", "--n", "10", "--k", "3", "--p-inlier", "0.5", "--s", "0.95"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out == "35\n");
  CHECK(call({"ransac-trials", "--n", "100", "--k", "3"}).out == "24\n");
  CHECK(call({"ransac-trials", "--n", "10", "--k", "3", "--s", "1.0"}).code == cli::kUsage);
  CHECK(call({"ransac-trials", "--n", "10", "--k", "6"}).code == cli::kUsage);

  const auto t = call({"ransac-trials", "--table", "10", "100"});
  CHECK(t.code == cli::kOk);
  std::istringstream in(t.out);
  std::string line;
  std::size_t rows = 0;
  std::getline(in, line);
  CHECK(line == "n,k=3,k=4,k=5,k=6");
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 4);
  }
  CHECK(rows == 91);
}

TEST_CASE("group") {
  const auto r = call({"group", kReference});
  CHECK(r.code == cli::kOk);
  CHECK(line_value(r.out, "degree") == "20");
  CHECK(line_value(r.out, "generators") == "19");
  CHECK(line_value(r.out, "order") == "1857945600");
  CHECK(line_value(r.out, "blocks") ==
        "[ [ 1, 15 ], [ 2, 12 ], [ 3, 14 ], [ 4, 16 ], [ 5, 13 ], [ 6, 8 ], [ 7, 10 ], [ 9, 11 ], [ 17, 18 ], "
        "[ 19, 20 ] ]");
  CHECK(line_value(r.out, "width") == "10");

  const auto w = call({"group", kReference, "--width"});
  CHECK(line_value(w.out, "width") == "10");
  CHECK(line_value(w.out, "order").empty());

  TempDir dir;
  {
    std::ofstream(dir.file("c4.g")) << "p0:= PermList([2, 3, 4, 1]);\nG:=Group(p0);\n";
    std::ofstream(dir.file("bad.g")) << "p0:= PermList([2, 3, 4, 1);\n";
    std::ofstream(dir.file("psl.g")) << "p0:= PermList([2, 3, 4, 5, 1, 6]);\np1:= PermList([6, 5, 3, 4, 2, 1]);\n";
  }
  CHECK(line_value(call({"group", dir.file("c4.g"), "--width"}).out, "width") == "2");
  CHECK(call({"group", dir.file("bad.g")}).code == cli::kUsage);
  const auto psl = call({"group", dir.file("psl.g")});
  CHECK(psl.code == cli::kUnsupportedGroup);
  CHECK(line_value(psl.out, "order") == "60");
}

TEST_CASE("monodromy p3p") {
  TempDir dir;
  const auto r = call({"monodromy", "p3p", "--seed", "3", "--out-group", dir.file("p3p.g"), "--out-solutions",
                       dir.file("p3p.json")});
  CHECK(r.code == cli::kOk);
  CHECK(line_value(r.out, "solutions") == "8");
  CHECK(line_value(r.out, "width") == "3");
  CHECK(line_value(r.out, "even") == "true");
  const auto saved = call({"group", dir.file("p3p.g")});
  CHECK(line_value(saved.out, "order") == line_value(r.out, "order"));
  CHECK(solutions_from_json(slurp(dir.file("p3p.json"))).solutions.size() == 8);

  CHECK(call({"monodromy", "p3p", "--seed", "3"}).out == r.out);
}

TEST_CASE("monodromy on a system file") {
  TempDir dir;
  std::ofstream(dir.file("cube.sys")) << "params a; unknowns x; eqs x^3 - a;\n";
  std::ofstream(dir.file("start.json")) << solutions_to_json({{8.0}, {{2.0}}, {0.0}});
  const auto r = call({"monodromy", dir.file("cube.sys"), "--start", dir.file("start.json"), "--saturate"});
  CHECK(r.code == cli::kOk);
  CHECK(line_value(r.out, "solutions") == "3");
  CHECK(line_value(r.out, "order") == "3");
  CHECK(call({"monodromy", dir.file("cube.sys")}).code == cli::kUsage);

  std::ofstream(dir.file("singular.json")) << solutions_to_json({{0.0}, {{0.0}}, {0.0}});
  CHECK(call({"monodromy", dir.file("cube.sys"), "--start", dir.file("singular.json")}).code ==
        cli::kRankDeficient);
}

TEST_CASE("track") {
  TempDir dir;
  REQUIRE(call({"monodromy", "p3p", "--seed", "5", "--out-solutions", dir.file("base.json")}).code == cli::kOk);
  const SolutionSet base = solutions_from_json(slurp(dir.file("base.json")));

  const auto same = call({"track", "p3p", "--start", dir.file("base.json"), "--target", dir.file("base.json"),
                          "--out", dir.file("same.json")});
  CHECK(same.code == cli::kOk);
  CHECK(line_value(same.out, "succeeded") == "8");
  const SolutionSet end = solutions_from_json(slurp(dir.file("same.json")));
  REQUIRE(end.solutions.size() == base.solutions.size());
  for (std::size_t i = 0; i < end.solutions.size(); ++i)
    for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(end.solutions[i][k] - base.solutions[i][k]) < 1e-8);

  const auto real = call({"track", "p3p", "--start", dir.file("base.json"), "--random-real-target"});
  CHECK(real.code == cli::kOk);
  CHECK(std::stod(line_value(real.out, "max-residual")) < 1e-8);

  SolutionSet bad = base;
  bad.solutions[0] = {Complex(1e6, 1e6), Complex(-1e6, 3.0), Complex(0.0, 1e6)};
  std::ofstream(dir.file("bad.json")) << solutions_to_json(bad);
  const auto failed = call({"track", "p3p", "--start", dir.file("bad.json"), "--random-real-target"});
  CHECK(failed.code == cli::kTrackingFailure);

  CHECK(call({"track", "p3p", "--start", dir.file("base.json")}).code == cli::kUsage);
}
