#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "ftiss/errors.hpp"
#include "ftiss/io.hpp"
#include "ftiss/sim.hpp"
#include "support.hpp"

using namespace ftiss;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string tetrahedron_text() { return read_file(testing::scenario_path("tetrahedron.scn")); }

std::string replace(std::string text, const std::string& from, const std::string& to) {
  const auto at = text.find(from);
  REQUIRE(at != std::string::npos);
  return text.replace(at, from.size(), to);
}

int parse_error_line(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  FAIL("no parse error");
  return -1;
}

std::vector<std::string> violations(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ValidationError& e) {
    return e.violations();
  }
  FAIL("no validation error");
  return {};
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ftiss_io_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("bundled tetrahedron file") {
  const Scenario s = testing::bundled("tetrahedron");
  CHECK(s.name == "tetrahedron");
  CHECK(s.params.mode == ElevationMode::Spatial3D);
  CHECK(s.agent_count() == 4);
  CHECK(s.graph.leader_count() == 2);
  CHECK(s.gains == ControlGains{0.5, 0.1, 0.5});
  Positions p0(12);
  p0 << -0.5, 0, 0, 0.5, 0, 0, -0.1, -0.1, 0.8, -0.2, 0.9, 0.5;
  CHECK(s.p0 == p0);
  CHECK(s.disturbance_global(2) == Vec3(2, 2, 2));
  CHECK(s.disturbance_global(3) == Vec3(2, 2, 2));
  CHECK(s.v_star == Vec3::Zero());
  CHECK(s.dt == 1e-3);
  CHECK(s.integrator == Integrator::Rk4);
}

TEST_CASE("bundled hexagon file") {
  const Scenario s = testing::bundled("hexagon");
  CHECK(s.params.mode == ElevationMode::Planar2D);
  CHECK(s.agent_count() == 6);
  CHECK(s.gains == ControlGains{1.0, 0.5, 0.5});
  CHECK(s.v_star == Vec3(0.1, 0.1, 0));
  for (int i = 2; i < 6; ++i) CHECK(s.disturbance_global(i) == Vec3(-1, -1, 0));
  CHECK(s.graph.edges().front() == Edge{0, 1});
}

TEST_CASE("validation errors list every problem") {
  const auto bad_alpha = violations(replace(tetrahedron_text(), "alpha = 0.5", "alpha = 1.5"));
  REQUIRE(bad_alpha.size() == 1);
  CHECK(bad_alpha[0].find("alpha") != std::string::npos);

  auto text = replace(tetrahedron_text(), "alpha = 0.5", "alpha = 1.5");
  text = replace(text, "dt = 0.001", "dt = -1");
  text = replace(text, "w3 = 2 2 2", "w3 = 2 2 2\nw1 = 1 1 1");
  CHECK(violations(text).size() == 3);

  CHECK(violations(replace(tetrahedron_text(), "1 2, 1 3, 1 4, 2 3, 2 4, 3 4", "1 2, 1 3, 2 3"))
            .size() >= 1);
  CHECK(violations(replace(tetrahedron_text(), "p4 = -0.2 0.9 0.5", "p4 = -0.1 -0.1 0.85"))
            .size() >= 1);
  // The leaders sit 1 m apart, so a different leader-edge length is impossible.
  CHECK(violations(replace(tetrahedron_text(), "distances = 1,", "distances = 1.2,")).size() >= 1);
}

TEST_CASE("parse errors carry the offending line") {
  CHECK(parse_error_line(replace(tetrahedron_text(), "kp = 0.5", "kp 0.5")) == 14);
  CHECK(parse_error_line(replace(tetrahedron_text(), "kp = 0.5", "kp = half")) == 14);
  CHECK(parse_error_line(replace(tetrahedron_text(), "ke = 0.1", "ke = 0.1\nkp = 1")) == 16);
  CHECK(parse_error_line(replace(tetrahedron_text(), "[sim]", "[simulation]")) == 32);
  CHECK(parse_error_line(replace(tetrahedron_text(), "integrator = rk4", "integrator = rk45")) == 35);
  CHECK(parse_error_line(replace(tetrahedron_text(), "p3 = -0.1 -0.1 0.8", "p3 = -0.1 -0.1")) == 21);
  CHECK(parse_error_line(replace(tetrahedron_text(), "t_end = 30", "t_end = 30\nspeed = 2")) == 35);
  CHECK_THROWS_AS(load_scenario("/nonexistent/file.scn"), ParseError);
}

TEST_CASE("echo round trip") {
  for (const char* name : {"tetrahedron", "hexagon"}) {
    const Scenario s = testing::bundled(name);
    const std::string once = format_scenario(s);
    const Scenario back = parse_scenario(once, name);
    CHECK(back == s);
    CHECK(format_scenario(back) == once);
  }

  // Frames, local disturbances and the Euler integrator survive as well.
  Scenario s = testing::bundled("tetrahedron");
  s.frames[1] = AgentFrame::from_axis_angle(0.3, Vec3(1, 2, 3), Vec3(0.1, -0.2, 0.3));
  s.frames[3] = AgentFrame::from_axis_angle(-2.1, Vec3(0, 1, 0), Vec3::Zero());
  s.disturbance_frame = DisturbanceFrame::Local;
  s.disturbance[2] = Vec3(0.1, 1.0 / 3.0, -2);
  s.integrator = Integrator::Euler;
  s.sample_stride = 7;
  const Scenario back = parse_scenario(format_scenario(s));
  CHECK(back == s);
}

TEST_CASE("CSV header and dialect") {
  CHECK(csv_header(2, 1) == "t,p_1_x,p_1_y,p_1_z,p_2_x,p_2_y,p_2_z,ze_1,V1,V,gate,bound");
  Scenario s = testing::bundled("hexagon");
  s.t_end = 0.05;
  const auto log = run(s);
  std::ostringstream os;
  write_csv(log, os);
  const std::string text = os.str();
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.substr(0, text.find('\n')) == csv_header(6, 9));
  const std::string first = text.substr(text.find('\n') + 1);
  const std::string row = first.substr(0, first.find('\n'));
  CHECK(std::count(row.begin(), row.end(), ',') == 1 + 18 + 9 + 4 - 1);
}

TEST_CASE("CSV round trip keeps every bit") {
  Scenario s = testing::bundled("tetrahedron");
  s.t_end = 0.5;
  s.sample_stride = 3;
  const auto log = run(s);
  const fs::path dir = scratch_dir("csv");
  emit_csv(log, dir / "run.csv");
  const auto back = read_csv(dir / "run.csv");
  REQUIRE(back.samples.size() == log.samples.size());
  CHECK(back.agent_count == 4);
  CHECK(back.edge_count == 6);
  for (std::size_t k = 0; k < log.samples.size(); ++k) {
    const auto& a = log.samples[k];
    const auto& b = back.samples[k];
    CHECK(a.t == b.t);
    CHECK(a.p == b.p);
    CHECK(a.z == b.z);
    CHECK(a.V1 == b.V1);
    CHECK(a.V == b.V);
    CHECK(a.gate == b.gate);
    CHECK(a.bound == b.bound);
  }

  // Random values, including awkward magnitudes.
  TrajectoryLog synthetic{2, 3, {}};
  for (int k = 0; k < 50; ++k) {
    Sample smp;
    smp.t = testing::uniform(0, 1e3);
    smp.p = Eigen::VectorXd::NullaryExpr(6, [] { return testing::uniform(-1, 1) * 1e-7; });
    smp.z = Eigen::VectorXd::NullaryExpr(3, [] { return testing::uniform(-1, 1) * 1e9; });
    smp.V1 = testing::uniform(0, 1) / 3.0;
    smp.V = smp.V1 + 1e-300;
    smp.gate = k % 2 == 0;
    smp.bound = -testing::uniform(0, 1);
    synthetic.samples.push_back(smp);
  }
  std::stringstream ss;
  write_csv(synthetic, ss);
  const auto again = read_csv(ss);
  REQUIRE(again.samples.size() == 50);
  for (std::size_t k = 0; k < 50; ++k) {
    CHECK(again.samples[k].p == synthetic.samples[k].p);
    CHECK(again.samples[k].z == synthetic.samples[k].z);
    CHECK(again.samples[k].V == synthetic.samples[k].V);
    CHECK(again.samples[k].bound == synthetic.samples[k].bound);
    CHECK(again.samples[k].gate == synthetic.samples[k].gate);
  }

  std::istringstream wrong("t,x\n0,1\n");
  CHECK_THROWS(read_csv(wrong));
}

TEST_CASE("plot data and summary") {
  Scenario s = testing::bundled("hexagon");
  s.t_end = 0.1;
  const auto log = run(s);
  const fs::path dir = scratch_dir("plot");
  emit_plot_data(log, dir, "hex");
  const std::string traj = read_file(dir / "hex_trajectories.csv");
  const std::string err = read_file(dir / "hex_errors.csv");
  CHECK(traj.rfind("t,p_1_x,", 0) == 0);
  CHECK(err.rfind("t,ze_1,", 0) == 0);
  CHECK(std::count(traj.begin(), traj.end(), '\n') == static_cast<long>(log.samples.size()) + 1);
  CHECK(std::count(err.begin(), err.end(), '\n') == static_cast<long>(log.samples.size()) + 1);

  const auto rep = rigidity_report(s);
  const auto consts = ftiss_constants(rigidity_matrix(rep.desired, s.graph, s.params), s.graph,
                                      s.gains, s.params.rho);
  const std::string summary = emit_summary(log, s, consts);
  CHECK(summary.find("hexagon") != std::string::npos);
  CHECK(summary.find("lambda+") != std::string::npos);
}

TEST_CASE("format_double round-trips") {
  for (int k = 0; k < 1000; ++k) {
    const double v = testing::uniform(-1, 1) * std::pow(10.0, testing::uniform(-300, 300));
    CHECK(std::stod(format_double(v)) == v);
  }
}
