#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "driftfluid/errors.hpp"
#include "driftfluid/runner.hpp"

using namespace driftfluid;
namespace fs = std::filesystem;
namespace {

std::string message_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigurationError& e) {
    return e.what();
  }
  return "";
}

bool has_level(const std::vector<Finding>& f, const std::string& level) {
  return std::any_of(f.begin(), f.end(), [&](const Finding& x) { return x.level == level; });
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / name;
  fs::remove_all(p);
  return p;
}

const char* kSmallRun = R"({
  "experiment": "eps_run",
  "grid": [4, 4, 8],
  "epsilons": [0.05],
  "t_end": 0.1,
  "initial": {"preset": "random_band", "kmax": 1, "amplitude": 0.05, "velocity_amplitude": 0.05, "seed": 4}
})";

}  // namespace

TEST_CASE("parse_config reads nested keys") {
  RunConfig c = parse_config(kSmallRun);
  CHECK(c.experiment == "eps_run");
  CHECK(c.grid == std::array<int, 3>{4, 4, 8});
  CHECK(c.initial.seed == 4);
  CHECK(c.initial.kmax == 1);
  CHECK_FALSE(c.dt.has_value());
}

TEST_CASE("parse_config names the offending key path") {
  CHECK(message_of(R"({"initial": {"bogus": 1}})").find("initial.bogus") != std::string::npos);
  CHECK(message_of(R"({"initial": {"seed": "three"}})").find("initial.seed") != std::string::npos);
  CHECK(message_of(R"({"t_end": 1, "colour": 2})").find("colour") != std::string::npos);
  CHECK(message_of(R"({"experiment": "nope"})").find("experiment") != std::string::npos);
  CHECK_THROWS_AS(parse_config("{not json"), ConfigurationError);
}

TEST_CASE("validate: admissible, imbalanced and oversized dt") {
  RunConfig ok = parse_config(kSmallRun);
  auto f = validate(ok);
  CHECK(has_level(f, "info"));
  CHECK_FALSE(has_level(f, "error"));
  CHECK_FALSE(has_level(f, "warning"));

  RunConfig bad = parse_config(R"({
    "experiment": "eps_run", "grid": [4, 4, 8], "epsilons": [1e-4],
    "initial": {"preset": "random_band", "kmax": 1, "amplitude": 0.3, "well_prepared": false, "seed": 2}
  })");
  CHECK(has_level(validate(bad), "error"));

  RunConfig fast = ok;
  fast.dt = 0.1;  // far above 2π√0.05/40
  CHECK(has_level(validate(fast), "warning"));
}

TEST_CASE("reference mode output is reproducible byte for byte") {
  RunConfig c = parse_config(kSmallRun);
  const fs::path a = fresh_dir("driftfluid_det_a"), b = fresh_dir("driftfluid_det_b");
  RunManifest ma = run(c, RunOptions{a, true, 1});
  RunManifest mb = run(c, RunOptions{b, true, 1});
  REQUIRE(ma.ok());
  REQUIRE(mb.ok());
  REQUIRE(ma.files == mb.files);
  int csv = 0;
  for (const auto& f : ma.files)
    if (fs::path(f).extension() == ".csv") {
      ++csv;
      CHECK(slurp(a / f) == slurp(b / f));
    }
  CHECK(csv > 0);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("manifest lists every file, itself included") {
  RunConfig c = parse_config(kSmallRun);
  const fs::path out = fresh_dir("driftfluid_manifest");
  RunManifest m = run(c, RunOptions{out, true, 1});
  REQUIRE(m.ok());
  auto doc = nlohmann::json::parse(slurp(out / "manifest.json"));
  std::vector<std::string> listed = doc["files"];
  CHECK(std::find(listed.begin(), listed.end(), "manifest.json") != listed.end());
  for (const auto& f : listed) CHECK(fs::exists(out / f));
  std::size_t on_disk = 0;
  for (const auto& e : fs::recursive_directory_iterator(out))
    if (e.is_regular_file()) ++on_disk;
  CHECK(on_disk == listed.size());
  CHECK(doc["status"] == "ok");
  CHECK(doc["execution_mode"] == "reference");
  fs::remove_all(out);
}

TEST_CASE("failed runs still write a manifest with the error") {
  RunConfig c = parse_config(kSmallRun);
  c.initial.preset = "two_stream";
  const fs::path out = fresh_dir("driftfluid_fail");
  RunManifest m = run(c, RunOptions{out, true, 1});
  CHECK_FALSE(m.ok());
  CHECK_FALSE(m.error.empty());
  auto doc = nlohmann::json::parse(slurp(out / "manifest.json"));
  CHECK(doc["status"] == "failed");
  fs::remove_all(out);
}

TEST_CASE("preset and experiment listings") {
  auto names = [](const std::vector<PresetInfo>& v) {
    std::vector<std::string> n;
    for (const auto& p : v) {
      CHECK_FALSE(p.description.empty());
      n.push_back(p.name);
    }
    return n;
  };
  auto presets = names(list_presets());
  for (const char* p : {"equilibrium", "single_mode", "shear", "two_stream", "random_band"})
    CHECK(std::find(presets.begin(), presets.end(), p) != presets.end());
  auto exps = names(list_experiments());
  for (const char* e : {"eps_run", "eps_sweep", "limit_run", "contraction", "growth", "dichotomy"})
    CHECK(std::find(exps.begin(), exps.end(), e) != exps.end());
  CHECK_FALSE(version_string().empty());
}
