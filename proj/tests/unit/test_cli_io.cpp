#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "nullwave/config.hpp"
#include "nullwave/io.hpp"

using namespace nullwave;
using nlohmann::json;

namespace {

json minimal() { return {{"schema_version", kSchemaVersion}}; }

std::string config_error_path(const json& j) {
  try {
    parse_config(j);
  } catch (const ConfigError& e) {
    return e.path;
  }
  return "<none>";
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("nullwave_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("defaults parse and validate") {
  const RunConfig c = parse_config(minimal());
  CHECK(c.grid.mode == AngularMode::Axisym);
  CHECK(c.E0.has_value());
  CHECK(c.worker_count == 1);
  CHECK(c.sweep.mode == SweepMode::Theorem2FixedCap);
  CHECK_NOTHROW(validate(c));
}

TEST_CASE("configuration errors name the offending field") {
  CHECK(config_error_path(json::object()) == "schema_version");
  CHECK(config_error_path({{"schema_version", 99}}) == "schema_version");

  json j = minimal();
  j["grid"] = {{"bogus", 1}};
  CHECK(config_error_path(j) == "grid.bogus");

  j = minimal();
  j["experiment"] = {{"u0_study", {{"colour", 1}}}};
  CHECK(config_error_path(j) == "experiment.u0_study.colour");

  j = minimal();
  j["grid"] = {{"n_u", "many"}};
  CHECK(config_error_path(j) == "grid.n_u");

  j = minimal();
  j["worker_count"] = 0;
  CHECK(config_error_path(j) == "worker_count");

  j = minimal();
  j["grid"] = {{"mode", "spherical"}};
  j["profile"] = {{"cap_mode", "none"}};
  j["null_form"] = {{"c0", 0.0}, {"c", {{1, 2, 1.0}}}};
  try {
    parse_config(j);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.path == "null_form");
    CHECK(std::string(e.what()).find("null form not admissible in spherical mode") !=
          std::string::npos);
  }
}

TEST_CASE("config hash") {
  json j = minimal();
  const std::string h = config_hash(parse_config(j));
  CHECK(h.size() == 16);
  CHECK(config_hash(parse_config(j)) == h);
  j["output_dir"] = "elsewhere";
  j["worker_count"] = 8;
  CHECK(config_hash(parse_config(j)) == h);
  j["grid"] = {{"delta", 0.025}};
  CHECK(config_hash(parse_config(j)) != h);

  const RunConfig c = parse_config(minimal());
  CHECK(config_hash(parse_config(to_json(c))) == config_hash(c));
  // Published FNV-1a 64 test vectors.
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(hex64(0xabcull) == "0000000000000abc");
}

TEST_CASE("config files") {
  const fs::path dir = scratch("cfg");
  {
    std::ofstream(dir / "ok.json") << R"({"schema_version": 1, "grid": {"delta": 0.1}})";
    std::ofstream(dir / "broken.json") << "{ nope";
  }
  CHECK(load_config(dir / "ok.json").grid.delta == doctest::Approx(0.1));
  CHECK_THROWS_AS(load_config(dir / "broken.json"), ConfigError);
  CHECK_THROWS_AS(load_config(dir / "missing.json"), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("snapshot round trip is bit exact") {
  const fs::path dir = scratch("snap");
  GridSpec s;
  s.u0 = -2.0;
  s.delta = 0.1;
  s.n_u = 3;
  s.n_ubar = 4;
  s.n_theta = 9;
  const DoubleNullGrid g(s);
  Field3 f(g.nodes_u(), g.nodes_ubar(), g.nodes_theta());
  for (std::size_t m = 0; m < f.size(); ++m) f.data()[m] = std::sin(1.0 + m) / 3.0;
  const fs::path bin = write_snapshot(dir, "psi", f, g, "psi", "abc");
  CHECK(fs::file_size(bin) == f.size() * sizeof(double));
  SnapshotHeader h;
  const Field3 back = read_snapshot(bin, &h);
  CHECK(back == f);
  CHECK(h.dims == std::array<int, 3>{4, 5, 9});
  CHECK(h.config_hash == "abc");
  CHECK(h.mode == "axisym");
  CHECK(h.delta == doctest::Approx(0.1));
  fs::remove_all(dir);
}

TEST_CASE("CSV output") {
  const fs::path dir = scratch("csv");
  {
    CsvWriter w(dir / "t.csv", "ff00", {"a", "b"});
    w.row(std::vector<double>{0.1, 0.25});
    w.row(std::vector<std::string>{"x", "y"});
    CHECK_THROWS_AS(w.row(std::vector<double>{1.0}), std::invalid_argument);
  }
  std::ifstream in(dir / "t.csv");
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "# config_hash=ff00\na,b\n0.10000000000000001,0.25\nx,y\n");
  CHECK(std::stod(format_number(0.1)) == 0.1);
  CHECK(format_number(std::nan("")) == "nan");

  write_loglog_svg(dir / "p.svg", "t", {{"s", {0.1, 0.2}, {1.0, 2.0}}});
  std::ifstream svg(dir / "p.svg");
  std::string first;
  std::getline(svg, first);
  CHECK(first.rfind("<svg", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("output directories") {
  const fs::path root = scratch("out");
  ::setenv("NULLWAVE_OUTPUT_ROOT", root.c_str(), 1);
  CHECK(resolve_output_dir("run1") == root / "run1");
  CHECK(resolve_output_dir("/abs/run2") == root / "run2");
  ::unsetenv("NULLWAVE_OUTPUT_ROOT");
  CHECK(resolve_output_dir("run1") == fs::path("run1"));

  const fs::path d = root / "d";
  CHECK_NOTHROW(prepare_output_dir(d, false));
  CHECK(fs::is_directory(d));
  std::ofstream(d / "f") << "x";
  try {
    prepare_output_dir(d, false);
    FAIL("expected refusal");
  } catch (const ConfigError& e) {
    CHECK(e.path == "output_dir");
  }
  CHECK_NOTHROW(prepare_output_dir(d, true));
  fs::remove_all(root);
}
