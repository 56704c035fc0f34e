#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>
#include <sstream>

#include "qs2l/errors.hpp"
#include "qs2l/io.hpp"

using namespace qs2l;
namespace fs = std::filesystem;

TEST_CASE("format_double round-trips") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double v = std::exp(u(rng)) * (i % 2 ? -1.0 : 1.0);
    CHECK(std::stod(io::format_double(v)) == v);
  }
  CHECK(io::format_double(0.1) == "0.10000000000000001");
  CHECK(io::format_double(2.0) == "2");
}

TEST_CASE("dump prints full precision") {
  io::json j;
  j["x"] = std::numbers::pi;
  j["list"] = {1.0, 0.5};
  j["name"] = "a";
  const std::string text = io::dump(j);
  CHECK(text.find("3.1415926535897931") != std::string::npos);
  CHECK(text.find("[1, 0.5]") != std::string::npos);
  const auto back = io::json::parse(text);
  CHECK(back["x"].get<double>() == std::numbers::pi);
  CHECK(back["name"] == "a");
}

TEST_CASE("params round-trip") {
  const LayerParams p = LayerParams::make(0.3, 1.0 / 3.0, 2.0 / 7.0, 0.1);
  const LayerParams q = io::params_from_json(io::json::parse(io::dump(io::params_json(p))));
  CHECK(q.delta == p.delta);
  CHECK(q.lambda == p.lambda);
  CHECK(q.b1 == p.b1);
  CHECK(q.b2 == p.b2);
  CHECK(q.mu == p.mu);
  CHECK_THROWS_AS(io::params_from_json(io::json::parse(R"({"delta": 1})")), ConfigError);
}

TEST_CASE("spectrum serialization") {
  const auto rows = spectrum::spectrum_table(LayerParams::make(1.0, 1.0, 1.0, 0.5), 3);
  const std::string csv = io::spectrum_csv(rows);
  CHECK(csv.rfind("n,a_n,b_n,gamma_n,omega_minus,omega_plus\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  const auto j = io::spectrum_json(rows);
  REQUIRE(j.size() == 3);
  CHECK(j[2]["n"] == 3);
  CHECK(j[1]["omega_plus"].get<double>() == rows[1].omega_plus);
  // csv fields parse back exactly
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  const auto last = line.substr(line.rfind(',') + 1);
  CHECK(std::stod(last) == rows[0].omega_plus);
}

TEST_CASE("collision serialization") {
  const std::vector<spectrum::CollisionRecord> recs{{3, 2, 0.7777, 1e-13, false}};
  const std::string csv = io::collisions_csv(recs);
  CHECK(csv.rfind("m,n,b2_root,residual,tangency\n", 0) == 0);
  const auto j = io::collisions_json(recs);
  CHECK(j[0]["b2_root"].get<double>() == 0.7777);
  CHECK(j[0]["tangency"] == false);
  CHECK(io::collisions_json({}).empty());
}

TEST_CASE("vstate round-trip") {
  contour::VStateSolution sol;
  sol.params = LayerParams::make(1.0, 1.0, 1.0, 0.7);
  sol.m = 3;
  sol.sign = spectrum::Branch::plus;
  sol.amplitude = 1e-3;
  sol.omega = 0.38370555396140501;
  sol.deformation = contour::RadialDeformation::from_coeffs(3, 128, {1e-3, 1.0 / 3e6}, {-7e-4, 2.0 / 9e6});
  sol.residual_norm = 1.7e-13;
  sol.iterations = 4;
  const auto j = io::json::parse(io::dump(io::vstate_json(sol)));
  CHECK(j["sign"] == "+");
  const auto back = io::vstate_from_json(j);
  CHECK(back.m == 3);
  CHECK(back.sign == spectrum::Branch::plus);
  CHECK(back.omega == sol.omega);
  CHECK(back.amplitude == sol.amplitude);
  CHECK(back.deformation.nodes == 128);
  CHECK(back.deformation.coeffs[0] == sol.deformation.coeffs[0]);
  CHECK(back.deformation.coeffs[1] == sol.deformation.coeffs[1]);
  CHECK(back.deformation.nodal[1] == sol.deformation.nodal[1]);

  const std::string csv = io::boundary_csv(sol);
  CHECK(csv.rfind("theta,R1,R2,x1,y1,x2,y2\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 129);
  CHECK(io::sign_name(spectrum::Branch::minus) == "-");
}

TEST_CASE("snapshot round-trip and validation") {
  auto state = dynamics::disc_state(LayerParams::make(1.0, 1.0, 1.0, 0.5), 64);
  state.boundaries[0].nodes[5].x += 1.0 / 3.0;
  const std::string csv = io::snapshot_csv(state);
  CHECK(csv.rfind("layer,node_index,x,y\n", 0) == 0);
  const auto back = io::snapshot_from_csv(csv);
  for (int k = 0; k < 2; ++k) {
    REQUIRE(back.boundaries[k].nodes.size() == 64);
    CHECK(back.boundaries[k].layer == k + 1);
    for (int i = 0; i < 64; ++i) {
      CHECK(back.boundaries[k].nodes[i].x == state.boundaries[k].nodes[i].x);
      CHECK(back.boundaries[k].nodes[i].y == state.boundaries[k].nodes[i].y);
    }
  }
  CHECK_THROWS_AS(io::snapshot_from_csv("layer,node_index,x,y\n1,0,abc,0\n"), ConfigError);
  CHECK_THROWS_AS(io::snapshot_from_csv("nonsense\n"), ConfigError);
  CHECK_THROWS_AS(io::snapshot_from_csv("layer,node_index,x,y\n3,0,1,0\n"), ConfigError);
}

TEST_CASE("files") {
  const fs::path dir = fs::temp_directory_path() / "qs2l_test_io";
  fs::create_directories(dir);
  io::write_file(dir / "a.txt", "hello\n");
  CHECK(io::read_file(dir / "a.txt") == "hello\n");
  CHECK_THROWS_AS(io::read_file(dir / "missing.txt"), ConfigError);
  fs::remove_all(dir);
}
