#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "doctest.h"
#include "quadclip/sweep.hpp"

using namespace quadclip;

namespace {

std::string csv_of(const SweepReport& r) {
  std::ostringstream os;
  write_csv(os, r);
  return os.str();
}

std::vector<std::string> split(const std::string& s, char d) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, d)) out.push_back(cur);
  if (!s.empty() && s.back() == d) out.emplace_back();
  return out;
}

double num_or_zero(const std::string& s) { return s.empty() ? 0.0 : std::strtod(s.c_str(), nullptr); }

Moments read_moments(const std::vector<std::string>& f, std::size_t at) {
  return {num_or_zero(f[at]), {num_or_zero(f[at + 1]), num_or_zero(f[at + 2]), num_or_zero(f[at + 3])}};
}

// rows and "# key=value" aggregates read back from a case CSV
SweepReport parse_csv(const std::string& text, Campaign c, std::map<std::string, double>& aggs) {
  SweepReport r;
  r.campaign = c;
  std::istringstream is(text);
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (header && eq != std::string::npos) aggs[line.substr(2, eq - 2)] = std::strtod(line.c_str() + eq + 1, nullptr);
      continue;
    }
    if (!header) {
      header = true;
      continue;
    }
    const auto f = split(line, ',');
    REQUIRE(f.size() == 26);
    CaseRow row;
    row.case_id = std::stoull(f[0]);
    row.geometry = parse_shape(f[1]);
    row.alpha = num_or_zero(f[2]);
    row.beta = num_or_zero(f[3]);
    for (int k = 0; k < 3; ++k) row.center[k] = num_or_zero(f[4 + k]);
    for (int k = 0; k < 3; ++k) row.angles[k] = num_or_zero(f[7 + k]);
    row.m = read_moments(f, 10);
    row.ref_kind = f[14];
    row.ref = read_moments(f, 15);
    row.err0 = num_or_zero(f[19]);
    row.err1 = num_or_zero(f[20]);
    row.has_additivity = !f[21].empty();
    row.additivity = num_or_zero(f[21]);
    row.nudge_count = std::stoi(f[22]);
    row.wall_us = num_or_zero(f[23]);
    row.status = f[24];
    row.has_mc = !f[25].empty();
    row.mc_sigma = num_or_zero(f[25]);
    r.rows.push_back(row);
  }
  return r;
}

SweepConfig base_config(Campaign c) {
  SweepConfig cfg;
  cfg.campaign = c;
  cfg.amr_levels = 0;
  cfg.threads = 2;
  cfg.zero_wall_time = true;
  return cfg;
}

}  // namespace

TEST_CASE("config validation") {
  SweepConfig cfg = base_config(Campaign::Random);
  cfg.count = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.count = 1;
  cfg.delta_k = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.delta_k = 1e-3;
  CHECK_NOTHROW(cfg.validate());
  CHECK(parse_campaign("graded") == Campaign::Graded);
  CHECK_THROWS_AS(parse_campaign("sideways"), Error);
  CHECK(parse_cylinder_type("hyperbolic") == CylinderType::Hyperbolic);
}

TEST_CASE("translation with delta_k = 1") {
  SweepConfig cfg = base_config(Campaign::Translation);
  cfg.delta_k = 1;
  const SweepReport r = run_sweep(cfg);
  REQUIRE(r.rows.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(r.rows[i].center.z == doctest::Approx(1.5 - 0.5 * double(i)));
  CHECK(r.rows[2].m.m0 == doctest::Approx(M_PI / 4).epsilon(1e-15));
  CHECK(r.rows[2].ref.m0 == doctest::Approx(M_PI / 4).epsilon(1e-15));
  for (const auto& row : r.rows) CHECK(row.status == "ok");
}

TEST_CASE("translation with delta_k = 1e-3") {
  SweepConfig cfg = base_config(Campaign::Translation);
  const SweepReport r = run_sweep(cfg);
  CHECK(r.rows.size() == 3001);
  CHECK(r.aggregate("failures") == 0);
  CHECK(r.aggregate("max_err0") <= 1e-13);
  CHECK(r.aggregate("max_err1") <= 1e-13);
}

TEST_CASE("same config gives identical bytes") {
  for (Campaign c : {Campaign::Random, Campaign::Nudged, Campaign::Graded}) {
    SweepConfig cfg = base_config(c);
    cfg.count = 60;
    cfg.stride = 5000;
    cfg.geometries = {ShapeKind::Tetrahedron, ShapeKind::HollowCube};
    const std::string a = csv_of(run_sweep(cfg));
    cfg.threads = 1;  // schedule must not matter
    const std::string b = csv_of(run_sweep(cfg));
    CHECK(a == b);
    cfg.seed = 2;
    if (c != Campaign::Graded) CHECK(csv_of(run_sweep(cfg)) != a);
  }
}

TEST_CASE("aggregates recompute from the CSV rows") {
  SweepConfig cfg = base_config(Campaign::Random);
  cfg.count = 40;
  cfg.geometries = {ShapeKind::Cube, ShapeKind::Dodecahedron};
  cfg.amr_levels = 6;
  cfg.mc_samples = 20000;
  cfg.ref_every = 7;
  cfg.zero_wall_time = false;
  const SweepReport r = run_sweep(cfg);
  const std::string text = csv_of(r);
  std::map<std::string, double> printed;
  SweepReport back = parse_csv(text, Campaign::Random, printed);
  CHECK(back.rows.size() == r.rows.size());
  compute_aggregates(back);
  CHECK(printed.size() == back.aggregates.size());
  for (const auto& [k, v] : back.aggregates) {
    INFO(k);
    REQUIRE(printed.count(k) == 1);
    CHECK(printed[k] == v);
  }
  CHECK(r.aggregate("ref_cases") == 12);  // ids 0, 7, ..., 35 per geometry
  CHECK(r.aggregate("mc_cases") == 12);
}

TEST_CASE("random rows respect the parameter ranges") {
  SweepConfig cfg = base_config(Campaign::Random);
  cfg.count = 300;
  cfg.cylinder = CylinderType::Elliptic;
  SweepReport r = run_sweep(cfg);
  for (const auto& row : r.rows) {
    CHECK(row.alpha >= 1e-3);
    CHECK(row.alpha <= 1.2);
    CHECK(row.beta > 0);
    CHECK(row.beta <= 10);
    for (int k = 0; k < 3; ++k) {
      CHECK(std::fabs(row.center[k]) <= 0.5);
      CHECK(std::fabs(row.angles[k]) <= M_PI);
    }
  }
  CHECK(r.aggregate("max_additivity") <= 1e-12);
  CHECK(r.aggregate("avg_additivity") <= 1e-14);
  cfg.cylinder = CylinderType::Hyperbolic;
  r = run_sweep(cfg);
  for (const auto& row : r.rows) CHECK(row.beta < 0);
}

TEST_CASE("graded traversal") {
  std::set<uint64_t> seen;
  for (uint64_t i = 0; i < kGradedGridSize; ++i) {
    uint64_t g;
    graded_case(i, &g);
    seen.insert(g);
  }
  CHECK(seen.size() == kGradedGridSize);

  // stride 100 walks 7032 points that still touch every value of each parameter
  std::set<double> alphas, betas, cx, thz;
  uint64_t n = 0;
  for (uint64_t i = 0; i < kGradedGridSize; i += 100, ++n) {
    const GradedCase c = graded_case(i);
    alphas.insert(c.alpha);
    betas.insert(c.beta);
    cx.insert(c.center.x);
    thz.insert(c.angles.z);
  }
  CHECK(n == 7032);
  CHECK(alphas.size() == 5);
  CHECK(betas.size() == 9);
  CHECK(cx.size() == 5);
  CHECK(thz.size() == 5);

  SweepConfig cfg = base_config(Campaign::Graded);
  cfg.stride = 2000;
  const SweepReport r = run_sweep(cfg);
  CHECK(r.rows.size() == (kGradedGridSize + 1999) / 2000);
  CHECK(r.aggregate("failures") == 0);
  cfg.cylinder = CylinderType::Hyperbolic;
  for (const auto& row : run_sweep(cfg).rows) CHECK(row.beta < 0);
}

TEST_CASE("nudged cases always nudge") {
  SweepConfig cfg = base_config(Campaign::Nudged);
  cfg.count = 100;
  cfg.geometries = {ShapeKind::Tetrahedron, ShapeKind::Cube, ShapeKind::Dodecahedron, ShapeKind::HollowCube};
  const SweepReport r = run_sweep(cfg);
  CHECK(r.rows.size() == 400);
  CHECK(r.aggregate("failures") == 0);
  CHECK(r.aggregate("min_nudge") >= 1);
  CHECK(r.aggregate("max_additivity") <= 1e-11);
}

TEST_CASE("timing report schema") {
  SweepConfig cfg = base_config(Campaign::Timing);
  cfg.count = 200;
  const SweepReport r = run_sweep(cfg);
  std::set<std::string> modes;
  for (const auto& t : r.timing) {
    CHECK(t.geometry == ShapeKind::Cube);
    CHECK(t.calls == 200);
    CHECK(t.mean_us > 0);
    modes.insert(t.mode);
  }
  CHECK(modes == std::set<std::string>{"zeroth", "both", "plane"});
  CHECK(std::isfinite(r.aggregate("cube_both_us")));
  CHECK(std::isfinite(r.aggregate("cube_ratio")));
  const std::string text = csv_of(r);
  CHECK(text.find("geometry,mode,calls,mean_us\n") != std::string::npos);
}

TEST_CASE("unwritable output path") {
  SweepConfig cfg = base_config(Campaign::Translation);
  cfg.delta_k = 1;
  const SweepReport r = run_sweep(cfg);
  try {
    write_report(r, "/nonexistent-dir/out.csv");
    FAIL("expected IoFailure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IoFailure);
  }
}
