#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "qs2l/io.hpp"

namespace fs = std::filesystem;
using qs2l::io::json;

namespace {

struct Sandbox {
  fs::path dir;
  explicit Sandbox(const std::string& name) : dir(fs::temp_directory_path() / ("qs2l_cli_" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Sandbox() { fs::remove_all(dir); }

  int run(const std::string& args) const {
    const std::string cmd =
        "cd '" + dir.string() + "' && '" QS2L_CLI_PATH "' " + args + " > stdout.txt 2> stderr.txt";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  [[nodiscard]] std::string read(const std::string& rel) const { return qs2l::io::read_file(dir / rel); }
  [[nodiscard]] json read_json(const std::string& rel) const { return json::parse(read(rel)); }
};

const std::string kUnit = "--delta 1 --lambda 1 --b1 1 --b2 1 ";
const std::string kUnequal = "--delta 1 --lambda 1 --b1 1 --b2 0.7 ";

}  // namespace

TEST_CASE("spectrum at equal radii") {
  Sandbox box("spectrum");
  REQUIRE(box.run("spectrum " + kUnit + "--nmax 8 --out a") == 0);
  const json doc = box.read_json("a/spectrum.json");
  CHECK(doc["schema_version"] == 1);
  CHECK(doc["proven_regime"] == true);
  REQUIRE(doc["rows"].size() == 8);
  for (const auto& row : doc["rows"]) {
    const int n = row["n"];
    CHECK(std::abs(row["omega_minus"].get<double>() - (0.5 - 0.5 / n)) <= 1e-12);
  }
  REQUIRE(box.run("spectrum " + kUnit + "--nmax 8 --out b") == 0);
  CHECK(box.read("a/spectrum.csv") == box.read("b/spectrum.csv"));
  CHECK(box.read("a/spectrum.json") == box.read("b/spectrum.json"));

  REQUIRE(box.run("spectrum " + kUnit + "--nmax 1 --out c") == 0);
  const std::string csv = box.read("c/spectrum.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
}

TEST_CASE("spectrum reports p0") {
  Sandbox box("p0");
  REQUIRE(box.run("spectrum " + kUnequal + "--nmax 4 --first-free --out a") == 0);
  CHECK(box.read_json("a/spectrum.json")["first_collision_free_m"].get<int>() > 0);
}

TEST_CASE("config file with flag overrides") {
  Sandbox box("config");
  qs2l::io::write_file(box.dir / "run.ini", "delta = 1\nlambda = 1\nb1 = 1\nb2 = 0.5\nnmax = 3\n");
  REQUIRE(box.run("spectrum --config run.ini --b2 1 --out a") == 0);
  const json doc = box.read_json("a/spectrum.json");
  CHECK(doc["params"]["b2"].get<double>() == 1.0);
  CHECK(doc["rows"].size() == 3);
}

TEST_CASE("configuration errors exit 2 and write nothing") {
  Sandbox box("bad");
  qs2l::io::write_file(box.dir / "bad.ini", "delta = 1\nbogus_key = 3\n");
  CHECK(box.run("collide --config bad.ini --m 2 --out a") == 2);
  qs2l::io::write_file(box.dir / "bad2.ini", "delta = one\n");
  CHECK(box.run("collide --config bad2.ini --m 2 --out b") == 2);
  CHECK(box.run("spectrum --delta -1 --out c") == 2);
  CHECK(box.run("spectrum --b1 1 --b2 2 --out d") == 2);
  CHECK(box.run("frobnicate --out e") == 2);
  CHECK(box.run("vstate " + kUnequal + "--m 2 --sign x --out f") == 2);
  for (const char* d : {"a", "b", "c", "d", "e", "f"}) CHECK_FALSE(fs::exists(box.dir / d));
}

TEST_CASE("collide") {
  Sandbox box("collide");
  REQUIRE(box.run("collide --delta 1 --b1 1 --equal-radii --nmax 3 --out a") == 0);
  const json er = box.read_json("a/collisions.json");
  REQUIRE(er["roots"].size() == 2);
  for (const auto& r : er["roots"]) {
    CHECK(std::abs(r["residual"].get<double>()) <= 1e-12);
    CHECK(std::abs(r["omega_gap"].get<double>()) <= 1e-10);
  }
  // large screening: the m = 6 scan is empty
  REQUIRE(box.run("collide --delta 2 --lambda 4 --b1 1 --b2 1 --m 6 --out b") == 0);
  const json empty = box.read_json("b/collisions.json");
  CHECK(empty["records"].empty());
  CHECK(empty["proven_regime"] == true);
  REQUIRE(box.run("collide " + kUnit + "--m 3 --out c") == 0);
  CHECK(box.read_json("c/collisions.json")["records"].size() == 1);
}

TEST_CASE("vstate") {
  Sandbox box("vstate");
  REQUIRE(box.run("vstate " + kUnequal + "--m 2 --sign - --s-grid 1e-3 --out minus") == 0);
  REQUIRE(box.run("vstate " + kUnequal + "--m 2 --sign + --s-grid 1e-3 --out plus") == 0);
  const json a = box.read_json("minus/vstate.json");
  const json b = box.read_json("plus/vstate.json");
  CHECK(a["complete"] == true);
  const double wa = a["solutions"][0]["omega"].get<double>();
  const double wb = b["solutions"][0]["omega"].get<double>();
  CHECK(std::abs(wa - a["omega_linear"].get<double>()) <= 1e-5 * 1e-3);
  CHECK(std::abs(wa - wb) > 1e-3);
  CHECK(fs::exists(box.dir / "minus" / a["boundary_files"][0].get<std::string>()));

  // on the equal-radii collision of (m, n) = (2, 1) the solver refuses
  const std::string lam = qs2l::io::format_double(1.2053318523075902);
  CHECK(box.run("vstate " + std::string("--delta 1 --b1 1 --b2 1 --lambda ") + lam + " --m 2 --sign - --out r") == 3);
  const json refusal = json::parse(box.read("stdout.txt"));
  CHECK(refusal["status"] == "refused");
  CHECK(refusal["reason"].get<std::string>().size() > 0);
}

TEST_CASE("evolve") {
  Sandbox box("evolve");
  REQUIRE(box.run("evolve " + kUnequal + "--nodes 64 --t-end 0.1 --dt 0.01 --out discs") == 0);
  const json m = box.read_json("discs/manifest.json");
  CHECK(m["completed"] == true);
  CHECK(m["steps"] == 10);
  for (const auto& d : m["diagnostics"]["hausdorff_drift"]) CHECK(d.get<double>() <= 1e-6);
  CHECK(m["times"].back().get<double>() == 0.1);
  for (const auto& f : m["snapshot_files"]) CHECK(fs::exists(box.dir / "discs" / f.get<std::string>()));

  REQUIRE(box.run("evolve " + kUnit + "--nodes 64 --t-end 0.1 --dt 0.01 --out twin") == 0);
  CHECK(box.read_json("twin/manifest.json")["diagnostics"]["layer_difference"].get<double>() <= 1e-10);

  REQUIRE(box.run("vstate " + kUnequal + "--m 2 --sign - --s-grid 1e-3 --nodes 128 --modes 16 --out vs") == 0);
  REQUIRE(box.run("evolve " + kUnequal + "--init vs/vstate.json --t-end 0.2 --dt 0.01 --check-rotation --out rot") == 0);
  const json r = box.read_json("rot/manifest.json");
  CHECK(r["rigid_rotation_residual"].get<double>() <= 1e-6);
  CHECK(box.run("evolve " + kUnit + "--init vs/vstate.json --t-end 0.2 --out mismatch") == 2);
  CHECK(box.run("evolve " + kUnequal + "--t-end 0.2 --check-rotation --out norot") == 2);
}

TEST_CASE("verify") {
  Sandbox box("verify");
  CHECK(box.run("verify") == 0);
  CHECK(box.run("verify --inject-gamma 1e-3") == 1);
  CHECK(box.read("stdout.txt").find("FAIL") != std::string::npos);
  CHECK(box.run("verify --suite bessel") == 0);
  const std::string out = box.read("stdout.txt");
  CHECK(out.find("bessel") != std::string::npos);
  CHECK(out.find("spectrum") == std::string::npos);
  CHECK(box.run("verify --suite nonsense") == 2);
}
