#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "boussinesq/catalog.hpp"
#include "cli.hpp"
#include "doctest.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result ebf(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = ebflow::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  static const fs::path root = fs::temp_directory_path() / ("ebflow_cli_test_" + std::to_string(::getpid()));
  const fs::path p = root / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

json manifest(const fs::path& dir) { return json::parse(slurp(dir / "manifest.json")); }

fs::path write(const fs::path& dir, const std::string& name, const std::string& text) {
  std::ofstream(dir / name) << text;
  return dir / name;
}

std::vector<std::vector<double>> csv_rows(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> r;
    std::istringstream cells(line);
    std::string c;
    while (std::getline(cells, c, ',')) r.push_back(std::stod(c));
    rows.push_back(r);
  }
  return rows;
}

}  // namespace

TEST_CASE("list prints every family and filters by group label") {
  const Result all = ebf({"list", "--json"});
  REQUIRE(all.code == 0);
  const json rows = json::parse(all.out);
  CHECK(rows.size() == 20);
  for (const auto& r : rows) {
    CAPTURE(r["family"]);
    CHECK(boussinesq::schema_problem(r["schema"], r["defaults"]).empty());
    // Round trip: the schema accepts the resolved params and rejects a stray key.
    json bad = r["defaults"];
    bad["not_a_param"] = 1;
    CHECK_FALSE(boussinesq::schema_problem(r["schema"], bad).empty());
  }
  const Result sec = ebf({"list", "--section", "5.3", "--json"});
  std::set<std::string> names;
  for (const auto& r : json::parse(sec.out)) names.insert(r["family"]);
  CHECK(names == std::set<std::string>{"M6Case1", "M6Case1Example"});
  const Result table = ebf({"list"});
  CHECK(table.code == 0);
  CHECK(table.out.find("M4Case1Gerstner") != std::string::npos);
}

TEST_CASE("verify exit codes") {
  const fs::path dir = scratch("verify");
  const fs::path gerstner = write(dir, "g.json", R"({"family": "M4Case1Gerstner"})");
  const auto out = [&](const std::string& n) { return (dir / n).string(); };

  const Result ok = ebf({"verify", gerstner.string(), "--out", out("ok")});
  CHECK(ok.code == 0);
  CHECK(manifest(dir / "ok")["exit_status"] == 0);
  CHECK(fs::exists(dir / "ok" / "report.json"));

  const Result bad_mu = ebf({"verify", gerstner.string(), "--param", "mu0_scale=1.01", "--out", out("mu")});
  CHECK(bad_mu.code == 1);
  CHECK(manifest(dir / "mu")["exit_status"] == 1);

  const fs::path broken = write(dir, "broken.json", "{\"family\": ");
  const Result malformed = ebf({"verify", broken.string(), "--out", out("bad")});
  CHECK(malformed.code == 2);
  CHECK_FALSE(malformed.err.empty());
  CHECK(manifest(dir / "bad")["exit_status"] == 2);

  CHECK(ebf({"verify", out("missing.json"), "--out", out("x1")}).code == 2);
  CHECK(ebf({"verify", write(dir, "u.json", R"({"family": "Nope"})").string(), "--out", out("x2")}).code == 2);
  CHECK(ebf({"verify", gerstner.string(), "--param", "c1=1.0", "--out", out("x3")}).code == 2);
  CHECK(ebf({"verify", gerstner.string(), "--param", "bogus=1", "--out", out("x4")}).code == 2);
  CHECK(ebf({"verify", gerstner.string(), "--grid", "5x", "--out", out("x5")}).code == 2);
  CHECK(ebf({"verify", gerstner.string(), "--grid", "5x5x5x7", "--out", out("x6")}).code == 2);
  CHECK(ebf({"verify", "--out", out("x7")}).code == 2);
  CHECK(ebf({"verify", gerstner.string(), "--preset", "fig1", "--out", out("x8")}).code == 2);
  CHECK(ebf({"verify", gerstner.string(), "--no-such-flag"}).code == 2);
  CHECK(ebf({}).code == 2);

  const Result grid = ebf({"verify", gerstner.string(), "--grid", "3x4x5", "--tol-h", "1e-7", "--json", "--out",
                           out("grid")});
  CHECK(grid.code == 0);
  const json report = json::parse(grid.out);
  CHECK(report["tolerances"]["h"] == 1e-7);
  const json m = manifest(dir / "grid");
  CHECK(m["grid"] == "3x4x5");
  CHECK(m["tolerance_overrides"]["tol_h"] == 1e-7);

  // A manifest re-executes the same check.
  CHECK(ebf({"verify", "--manifest", (dir / "mu" / "manifest.json").string(), "--out", out("mu2")}).code == 1);
  CHECK(ebf({"verify", "--manifest", (dir / "grid" / "manifest.json").string(), "--out", out("grid2")}).code == 0);
  CHECK(manifest(dir / "grid2")["grid"] == "3x4x5");
}

TEST_CASE("every family preset reproduces the catalog defaults and verifies") {
  const fs::path dir = scratch("presets");
  for (const auto& f : boussinesq::family_catalog()) {
    CAPTURE(f.name);
    const json preset = ebflow::load_preset(f.name);
    CHECK(preset["family"] == f.name);
    CHECK(preset["params"] == f.defaults);
    CHECK(ebf({"verify", "--preset", f.name, "--grid", "3x5", "--out", (dir / f.name).string()}).code == 0);
  }
}

TEST_CASE("trace presets: ellipses, closed path, identity, truncation") {
  const fs::path dir = scratch("trace");
  SUBCASE("ellipses and one isopycnal") {
    const Result r = ebf({"trace", "--preset", "fig1", "--out", (dir / "fig1").string()});
    REQUIRE(r.code == 0);
    int paths = 0, curves = 0;
    for (const auto& e : fs::directory_iterator(dir / "fig1")) {
      const std::string name = e.path().filename().string();
      paths += name.rfind("path_", 0) == 0;
      curves += name.rfind("isopycnal_", 0) == 0;
    }
    CHECK(paths == 5);
    CHECK(curves == 1);
    CHECK(fs::exists(dir / "fig1" / "trace.svg"));
    const json m = manifest(dir / "fig1");
    for (const auto& s : m["summary"]) {
      if (s.contains("z0")) {
        REQUIRE(s.contains("period"));
        CHECK(s["period"].get<double>() == doctest::Approx(2 * std::numbers::pi / std::sqrt(0.8 / (1 - std::pow(0.8, 4)))));
      }
    }
  }
  SUBCASE("closed m=6 path") {
    const Result r = ebf({"trace", "--preset", "fig4", "--out", (dir / "fig4").string()});
    REQUIRE(r.code == 0);
    const json m = manifest(dir / "fig4");
    REQUIRE(m["summary"].size() == 1);
    CHECK(m["summary"][0].contains("period"));
    const auto rows = csv_rows(dir / "fig4" / "path_000.csv");
    CHECK(rows.size() == 2000);
  }
  SUBCASE("identity rows are constant") {
    REQUIRE(ebf({"trace", "--preset", "identity", "--out", (dir / "id").string()}).code == 0);
    const auto rows = csv_rows(dir / "id" / "path_000.csv");
    REQUIRE(rows.size() == 11);
    for (const auto& r : rows) {
      CHECK(r[1] == 0.25);
      CHECK(r[2] == -0.5);
    }
  }
  SUBCASE("truncation is a warning") {
    const Result r = ebf({"trace", "--preset", "fig3", "--param", "delta=-0.01", "--samples", "50", "--out",
                          (dir / "trunc").string()});
    CHECK(r.code == 0);
    CHECK(r.err.find("warning") != std::string::npos);
    const json m = manifest(dir / "trunc");
    CHECK(m["warnings"].size() == 3);
    CHECK(m["summary"][0]["truncated"] == true);
  }
  SUBCASE("seeds file, window and random labels") {
    const fs::path seeds = write(dir, "seeds.json", "[[0.0, -1.0], [0.5, -0.5]]");
    const Result r = ebf({"trace", "--preset", "M4Case1Gerstner", "--seeds", seeds.string(), "--t-window", "0", "2",
                          "--samples", "21", "--random-seeds", "2", "--seed", "9", "--out", (dir / "s").string()});
    REQUIRE(r.code == 0);
    const json m = manifest(dir / "s");
    CHECK(m["document"]["trace"]["seeds"].size() == 4);
    CHECK(m["seed"] == 9);
    CHECK(csv_rows(dir / "s" / "path_003.csv").size() == 21);
    CHECK(ebf({"trace", "--preset", "M4Case1Gerstner", "--seeds", seeds.string(), "--t-window", "2", "1", "--out",
               (dir / "bad").string()})
              .code == 2);
    CHECK(ebf({"trace", "--preset", "M4Case1Gerstner", "--seeds", write(dir, "far.json", "[[0, 5]]").string(), "--out",
               (dir / "far").string()})
              .code == 2);
  }
}

TEST_CASE("trace output is byte-identical across runs and manifest replays") {
  const fs::path dir = scratch("determinism");
  const auto run = [&](const std::vector<std::string>& extra, const std::string& name) {
    std::vector<std::string> args = {"trace"};
    args.insert(args.end(), extra.begin(), extra.end());
    args.push_back("--out");
    args.push_back((dir / name).string());
    REQUIRE(ebf(args).code == 0);
  };
  run({"--preset", "fig1", "--random-seeds", "3", "--seed", "17"}, "a");
  run({"--preset", "fig1", "--random-seeds", "3", "--seed", "17"}, "b");
  run({"--manifest", (dir / "a" / "manifest.json").string()}, "c");
  const auto outputs = manifest(dir / "a")["outputs"];
  REQUIRE(outputs.size() == 10);
  for (const auto& f : outputs) {
    const std::string name = f.get<std::string>();
    CAPTURE(name);
    CHECK(slurp(dir / "a" / name) == slurp(dir / "b" / name));
    CHECK(slurp(dir / "a" / name) == slurp(dir / "c" / name));
  }
}

TEST_CASE("sweep reproduces the stability tables") {
  const fs::path dir = scratch("sweep");
  const Result stable = ebf({"sweep", "--preset", "fig2", "--json", "--out", (dir / "f2").string()});
  REQUIRE(stable.code == 0);
  for (const auto& r : json::parse(stable.out)) CHECK(r["outcome"] == "bounded");

  const Result mixed = ebf({"sweep", "--preset", "fig3", "--json", "--out", (dir / "f3").string()});
  REQUIRE(mixed.code == 0);
  for (const auto& r : json::parse(mixed.out)) {
    CAPTURE(r);
    if (r["value"].get<double>() < 0) {
      CHECK(r["blowup_time"].get<double>() < 100.0);
    } else {
      CHECK(r["outcome"] == "bounded");
    }
  }
  CHECK(fs::exists(dir / "f3" / "sweep.csv"));

  const Result flags = ebf({"sweep", "--preset", "M4Case1General", "--param", "b11=0.65", "--vary", "delta", "--values",
                            "-0.01,0.01", "--t-window", "0", "100", "--json", "--out", (dir / "flags").string()});
  REQUIRE(flags.code == 0);
  const json rows = json::parse(flags.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0]["outcome"].get<std::string>().rfind("blowup", 0) == 0);
  CHECK(rows[1]["outcome"] == "bounded");

  CHECK(ebf({"sweep", "--preset", "fig1", "--values", "0.1", "--out", (dir / "e1").string()}).code == 2);
  CHECK(ebf({"sweep", "--preset", "fig2", "--vary", "f1", "--out", (dir / "e2").string()}).code == 2);
  CHECK(ebf({"sweep", "--preset", "M4Case1General", "--out", (dir / "e3").string()}).code == 2);
}
