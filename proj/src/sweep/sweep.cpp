#include "quadclip/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

#include "quadclip/philox.hpp"

namespace quadclip {

namespace {

constexpr double kPi = 3.14159265358979323846;

using Clock = std::chrono::steady_clock;

double elapsed_us(Clock::time_point t0) {
  return std::chrono::duration<double, std::micro>(Clock::now() - t0).count();
}

bool finite(const Moments& m) {
  for (int k = 0; k < 4; ++k)
    if (!std::isfinite(m[k])) return false;
  return true;
}

// rows come back in index order whatever the schedule
std::vector<CaseRow> run_pool(std::size_t n, int threads, const std::function<CaseRow(std::size_t)>& f) {
  std::vector<CaseRow> rows(n);
  int nt = threads > 0 ? threads : int(std::max(1u, std::thread::hardware_concurrency()));
  nt = int(std::min<std::size_t>(nt, std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) rows[i] = f(i);
  };
  if (nt == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return rows;
}

uint64_t stream_id(ShapeKind g, uint64_t i) { return (uint64_t(g) + 1) << 40 | i; }

Vec3 unit_vector(PhiloxStream& r) {
  const double z = r.uniform(-1, 1), t = r.uniform(0, 2 * kPi);
  const double s = std::sqrt(std::max(0.0, 1 - z * z));
  return {s * std::cos(t), s * std::sin(t), z};
}

double draw_beta(PhiloxStream& r, CylinderType type) {
  const double mag = 10 * (1 - r.uniform());  // (0, 10]
  bool neg = type == CylinderType::Hyperbolic;
  if (type == CylinderType::Both) neg = r.uniform() < 0.5;
  return neg ? -mag : mag;
}

double relative_residual(const Moments& parts, const Moments& whole) {
  double e = 0;
  for (int k = 0; k < 4; ++k) e = std::max(e, std::fabs(parts[k] - whole[k]) / std::max(1.0, std::fabs(whole[k])));
  return e;
}

void scaled_errors(CaseRow& row) {
  row.err0 = std::fabs(row.m.m0 - row.ref.m0) / std::max(1.0, std::fabs(row.ref.m0));
  double s1 = 0, e1 = 0;
  for (int k = 0; k < 3; ++k) s1 = std::max(s1, std::fabs(row.ref.m1[k]));
  for (int k = 0; k < 3; ++k) e1 = std::max(e1, std::fabs(row.m.m1[k] - row.ref.m1[k]));
  row.err1 = e1 / std::max(1.0, s1);
}

/* Everything after placement: closed form, invariants, optional references. */
void evaluate(CaseRow& row, const Polyhedron& p, const SweepConfig& cfg, PhiloxStream& rng) {
  const Cylinder c(row.alpha, row.beta);
  ClipStats st;
  try {
    const auto t0 = Clock::now();
    row.m = clip_moments(p, c, cfg.robustness, &st);
    row.wall_us = cfg.zero_wall_time ? 0.0 : elapsed_us(t0);
  } catch (const Error& e) {
    row.status = to_string(e.code());
    row.m = {};
    return;
  }
  row.nudge_count = st.nudge_count;
  if (!finite(row.m)) {
    row.status = "nonfinite";
    row.m = {};
    return;
  }

  const Moments pm = polyhedron_moments(p);
  Vec3 lo, hi;
  p.bounds(lo, hi);
  bool ok = row.m.m0 >= -1e-15 && row.m.m0 <= pm.m0 * (1 + 1e-12) + 1e-15;
  if (ok && row.m.m0 > 1e-10) {
    const Vec3 g = row.m.centroid();
    const double tol = 1e-9 * p.diameter();
    for (int k = 0; k < 3; ++k) ok = ok && g[k] >= lo[k] - tol && g[k] <= hi[k] + tol;
  }
  if (!ok) row.status = "bounds";

  if (cfg.additivity_every && row.case_id % cfg.additivity_every == 0) {
    const Vec3 n = unit_vector(rng);
    const Vec3 q{rng.uniform(lo.x, hi.x), rng.uniform(lo.y, hi.y), rng.uniform(lo.z, hi.z)};
    const Plane pl{n, dot(n, q)};
    try {
      ClipStats sa, sb;
      const Moments a = clip_moments(clip_by_halfspace(p, pl), c, cfg.robustness, &sa);
      const Moments b = clip_moments(clip_by_halfspace(p, pl.flipped()), c, cfg.robustness, &sb);
      row.has_additivity = true;
      row.additivity = relative_residual(a + b, row.m);
      if (!std::isfinite(row.additivity)) row.status = "nonfinite";
    } catch (const Error& e) {
      row.status = std::string("split:") + to_string(e.code());
    }
  }

  if (cfg.ref_every && row.case_id % cfg.ref_every == 0) {
    if (cfg.amr_levels > 0) {
      row.ref = amr_moments(p, c, {cfg.amr_levels, true});
      row.ref_kind = "amr";
    }
    if (cfg.mc_samples > 0) {
      const McResult r = mc_moments(p, c, {cfg.mc_samples, cfg.seed, stream_id(row.geometry, row.case_id)});
      double z = 0;
      for (int k = 0; k < 4; ++k) {
        const double d = std::fabs(row.m[k] - r.m[k]);
        if (r.stderr_[k] > 0)
          z = std::max(z, d / r.stderr_[k]);
        else if (d > 1e-15)
          z = std::numeric_limits<double>::max();
      }
      row.has_mc = true;
      row.mc_sigma = z;
      if (row.ref_kind == "none") {
        row.ref = r.m;
        row.ref_kind = "mc";
      }
    }
    if (row.ref_kind != "none") scaled_errors(row);
  }
}

Polyhedron place(ShapeKind g, bool unit_volume, const Vec3& center, const Vec3& angles) {
  return transform(make_shape(g, unit_volume), RigidTransform::from_angles(angles.x, angles.y, angles.z, center));
}

SweepReport finish(Campaign c, std::vector<CaseRow> rows, std::vector<std::string> notes) {
  SweepReport r;
  r.campaign = c;
  r.rows = std::move(rows);
  r.notes = std::move(notes);
  compute_aggregates(r);
  return r;
}

std::string geometry_list(const SweepConfig& cfg) {
  std::string s;
  for (auto g : cfg.geometries) s += (s.empty() ? "" : " ") + std::string(shape_name(g));
  return s;
}

std::vector<std::string> common_notes(const SweepConfig& cfg) {
  return {std::string("campaign=") + campaign_name(cfg.campaign), "geometry=" + geometry_list(cfg),
          std::string("cylinder=") + cylinder_type_name(cfg.cylinder), "seed=" + std::to_string(cfg.seed)};
}

}  // namespace

Campaign parse_campaign(const std::string& s) {
  if (s == "translation") return Campaign::Translation;
  if (s == "random") return Campaign::Random;
  if (s == "graded") return Campaign::Graded;
  if (s == "nudged") return Campaign::Nudged;
  if (s == "timing") return Campaign::Timing;
  throw Error(ErrorCode::BadConfig, "unknown campaign '" + s + "'");
}

CylinderType parse_cylinder_type(const std::string& s) {
  if (s == "elliptic") return CylinderType::Elliptic;
  if (s == "hyperbolic") return CylinderType::Hyperbolic;
  if (s == "both") return CylinderType::Both;
  throw Error(ErrorCode::BadConfig, "unknown cylinder type '" + s + "'");
}

const char* campaign_name(Campaign c) {
  switch (c) {
    case Campaign::Translation: return "translation";
    case Campaign::Random: return "random";
    case Campaign::Graded: return "graded";
    case Campaign::Nudged: return "nudged";
    case Campaign::Timing: return "timing";
  }
  return "?";
}

const char* cylinder_type_name(CylinderType c) {
  switch (c) {
    case CylinderType::Elliptic: return "elliptic";
    case CylinderType::Hyperbolic: return "hyperbolic";
    case CylinderType::Both: return "both";
  }
  return "?";
}

void SweepConfig::validate() const {
  auto bad = [](const std::string& w) { throw Error(ErrorCode::BadConfig, w); };
  if (count < 1) bad("count must be >= 1");
  if (!(delta_k > 0)) bad("delta_k must be > 0");
  if (stride < 1) bad("stride must be >= 1");
  if (amr_levels < 0) bad("amr_levels must be >= 0");
  if (geometries.empty()) bad("no geometry selected");
  if (robustness.max_nudge_attempts < 0) bad("max_nudge_attempts must be >= 0");
}

double SweepReport::aggregate(const std::string& key) const {
  for (const auto& [k, v] : aggregates)
    if (k == key) return v;
  return std::numeric_limits<double>::quiet_NaN();
}

namespace {

// invertible on 20-bit words: odd multiplies and xor-shifts
uint64_t mix20(uint64_t x) {
  constexpr uint64_t mask = (1u << 20) - 1;
  x = (x * 0x9E3779B1u) & mask;
  x ^= x >> 11;
  x = (x * 0x85EBCA6Bu) & mask;
  x ^= x >> 9;
  x = (x * 0xC2B2AE35u) & mask;
  x ^= x >> 13;
  return x;
}

}  // namespace

GradedCase graded_case(uint64_t i, uint64_t* grid_index) {
  // cycle-walking the 20-bit mix permutes [0, grid); a multiplicative map would keep
  // i = 0 mod 5 on one alpha for every stride divisible by 5
  uint64_t g = i % kGradedGridSize;
  do g = mix20(g);
  while (g >= kGradedGridSize);
  if (grid_index) *grid_index = g;
  static const double lin[5] = {-0.5, -0.25, 0, 0.25, 0.5};
  static const double ang[5] = {-kPi, -kPi / 2, 0, kPi / 2, kPi};
  static const double betas[9] = {9.0 / 10, 1, 16.0 / 9, 2, 9.0 / 4, 4, -3.0 / 4, -1, -5.0 / 4};
  static const double alphas[5] = {0.25, 0.5, 0.70710678118654752, 0.75, 1};
  GradedCase c;
  c.alpha = alphas[g % 5];
  g /= 5;
  c.beta = betas[g % 9];
  g /= 9;
  c.angles = {ang[g % 5], ang[g / 5 % 5], ang[g / 25 % 5]};
  g /= 125;
  c.center = {lin[g % 5], lin[g / 5 % 5], lin[g / 25 % 5]};
  return c;
}

SweepReport run_translation(const SweepConfig& cfg) {
  cfg.validate();
  const uint64_t n = uint64_t(std::floor(3 / cfg.delta_k + 1e-9)) + 1;
  std::vector<CaseRow> rows = run_pool(n, cfg.threads, [&](std::size_t i) {
    CaseRow row;
    row.case_id = i;
    row.geometry = ShapeKind::Cube;
    row.alpha = row.beta = 1;
    const double k = std::min(3.0, double(i) * cfg.delta_k);
    row.center = {0.5, 0.5, 1.5 - k / 2};
    const Polyhedron p = place(ShapeKind::Cube, false, row.center, {0, 0, 0});
    PhiloxStream rng(cfg.seed, stream_id(ShapeKind::Cube, i));
    SweepConfig local = cfg;
    local.ref_every = 0;
    evaluate(row, p, local, rng);
    row.ref = unit_cube_reference(k);
    row.ref_kind = "unit_cube";
    return row;
  });
  // errors scaled by the per-component maximum over the sweep
  double scale[4] = {0, 0, 0, 0};
  for (const auto& r : rows)
    for (int k = 0; k < 4; ++k) scale[k] = std::max(scale[k], std::fabs(r.ref[k]));
  for (auto& r : rows) {
    r.err0 = scale[0] > 0 ? std::fabs(r.m.m0 - r.ref.m0) / scale[0] : 0.0;
    double e1 = 0;
    for (int k = 1; k < 4; ++k)
      if (scale[k] > 0) e1 = std::max(e1, std::fabs(r.m[k] - r.ref[k]) / scale[k]);
    r.err1 = e1;
  }
  auto notes = common_notes(cfg);
  notes.push_back("delta_k=" + std::to_string(cfg.delta_k));
  notes.push_back("errors scaled by the per-component maximum of the reference over the sweep");
  return finish(Campaign::Translation, std::move(rows), std::move(notes));
}

SweepReport run_random(const SweepConfig& cfg) {
  cfg.validate();
  std::vector<CaseRow> all;
  for (ShapeKind g : cfg.geometries) {
    auto rows = run_pool(cfg.count, cfg.threads, [&](std::size_t i) {
      CaseRow row;
      row.case_id = i;
      row.geometry = g;
      PhiloxStream rng(cfg.seed, stream_id(g, i));
      row.center = {rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
      row.angles = {rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi)};
      row.alpha = rng.uniform(1e-3, 1.2);
      row.beta = draw_beta(rng, cfg.cylinder);
      evaluate(row, place(g, true, row.center, row.angles), cfg, rng);
      return row;
    });
    all.insert(all.end(), rows.begin(), rows.end());
  }
  auto notes = common_notes(cfg);
  notes.push_back("alpha in [1e-3, 6/5], beta magnitude in (0, 10], shapes scaled to unit volume");
  notes.push_back("errors scaled by max(1, |ref m0|) and max(1, |ref m1|_inf)");
  return finish(Campaign::Random, std::move(all), std::move(notes));
}

SweepReport run_graded(const SweepConfig& cfg) {
  cfg.validate();
  std::vector<uint64_t> picks;
  for (uint64_t i = 0; i < kGradedGridSize; i += cfg.stride) {
    const GradedCase gc = graded_case(i);
    if (cfg.cylinder == CylinderType::Elliptic && gc.beta < 0) continue;
    if (cfg.cylinder == CylinderType::Hyperbolic && gc.beta > 0) continue;
    picks.push_back(i);
  }
  std::vector<CaseRow> all;
  for (ShapeKind g : cfg.geometries) {
    auto rows = run_pool(picks.size(), cfg.threads, [&](std::size_t j) {
      uint64_t gi;
      const GradedCase gc = graded_case(picks[j], &gi);
      CaseRow row;
      row.case_id = gi;
      row.geometry = g;
      row.center = gc.center;
      row.angles = gc.angles;
      row.alpha = gc.alpha;
      row.beta = gc.beta;
      PhiloxStream rng(cfg.seed, stream_id(g, gi));
      evaluate(row, place(g, false, row.center, row.angles), cfg, rng);
      return row;
    });
    all.insert(all.end(), rows.begin(), rows.end());
  }
  auto notes = common_notes(cfg);
  notes.push_back("stride=" + std::to_string(cfg.stride) + " over a fixed permutation of the 703125-point grid");
  notes.push_back("shapes are not scaled to unit volume: edge length 1 (outer side 1 for the hollow cube)");
  return finish(Campaign::Graded, std::move(all), std::move(notes));
}

SweepReport run_nudged(const SweepConfig& cfg) {
  cfg.validate();
  std::vector<CaseRow> all;
  for (ShapeKind g : cfg.geometries) {
    const Polyhedron base = make_shape(g, true);
    auto rows = run_pool(cfg.count, cfg.threads, [&](std::size_t i) {
      CaseRow row;
      row.case_id = i;
      row.geometry = g;
      PhiloxStream rng(cfg.seed, stream_id(g, i));
      row.angles = {rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi)};
      row.alpha = rng.uniform(1e-3, 1.2);
      row.beta = draw_beta(rng, cfg.cylinder);
      const auto& v = base.vertices();
      const std::size_t k = std::min(v.size() - 1, std::size_t(rng.uniform() * double(v.size())));
      // vertex k lands exactly on (0, 0, alpha)
      const RigidTransform R = RigidTransform::from_angles(row.angles.x, row.angles.y, row.angles.z);
      const Vec3 top{0, 0, row.alpha};
      std::vector<Vec3> w(v.size());
      for (std::size_t j = 0; j < v.size(); ++j) w[j] = j == k ? top : R.rotate(v[j] - v[k]) + top;
      row.center = R.rotate(-v[k]) + top;
      evaluate(row, with_vertices(base, std::move(w)), cfg, rng);
      if (!row.failed() && row.nudge_count < 1) row.status = "no_nudge";
      return row;
    });
    all.insert(all.end(), rows.begin(), rows.end());
  }
  auto notes = common_notes(cfg);
  notes.push_back("one vertex per case placed exactly at (0, 0, alpha)");
  return finish(Campaign::Nudged, std::move(all), std::move(notes));
}

SweepReport run_timing(const SweepConfig& cfg) {
  cfg.validate();
  SweepReport rep;
  rep.campaign = Campaign::Timing;
  rep.notes = common_notes(cfg);
  rep.notes.push_back("reference timings: cube 9.20 us (zeroth) / 10.13 us (both), cylinder/plane ratio about 28x");
  constexpr std::size_t pool = 256;
  for (ShapeKind g : cfg.geometries) {
    std::vector<Polyhedron> polys;
    std::vector<Cylinder> cyls;
    std::vector<Plane> planes;
    for (std::size_t i = 0; i < pool; ++i) {
      PhiloxStream rng(cfg.seed, stream_id(g, i));
      const Vec3 ctr{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
      const Vec3 ang{rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi)};
      const double a = rng.uniform(1e-3, 1.2);
      cyls.emplace_back(a, draw_beta(rng, cfg.cylinder));
      polys.push_back(place(g, true, ctr, ang));
      const Vec3 n = unit_vector(rng);
      planes.push_back({n, dot(n, Vec3{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)})});
    }
    double sink = 0;
    auto measure = [&](const char* mode, auto&& call) {
      for (std::size_t i = 0; i < std::min<uint64_t>(cfg.count, 1000); ++i) sink += call(i % pool);
      const auto t0 = Clock::now();
      for (uint64_t i = 0; i < cfg.count; ++i) sink += call(i % pool);
      rep.timing.push_back({g, mode, cfg.count, elapsed_us(t0) / double(cfg.count)});
    };
    auto clip = [&](std::size_t i, bool zeroth) {
      try {
        return clip_moments(polys[i], cyls[i], cfg.robustness, nullptr, zeroth).m0;
      } catch (const Error&) {
        return 0.0;
      }
    };
    measure("zeroth", [&](std::size_t i) { return clip(i, true); });
    measure("both", [&](std::size_t i) { return clip(i, false); });
    measure("plane", [&](std::size_t i) { return polyhedron_moments(clip_by_halfspace(polys[i], planes[i])).m0; });
    if (!std::isfinite(sink)) rep.notes.push_back("nonfinite timing checksum");
  }
  compute_aggregates(rep);
  return rep;
}

SweepReport run_sweep(const SweepConfig& cfg) {
  switch (cfg.campaign) {
    case Campaign::Translation: return run_translation(cfg);
    case Campaign::Random: return run_random(cfg);
    case Campaign::Graded: return run_graded(cfg);
    case Campaign::Nudged: return run_nudged(cfg);
    case Campaign::Timing: return run_timing(cfg);
  }
  throw Error(ErrorCode::BadConfig, "unknown campaign");
}

void compute_aggregates(SweepReport& r) {
  auto& a = r.aggregates;
  a.clear();
  if (r.campaign == Campaign::Timing) {
    for (const auto& t : r.timing) a.push_back({std::string(shape_name(t.geometry)) + "_" + t.mode + "_us", t.mean_us});
    for (const auto& t : r.timing) {
      if (t.mode != "both") continue;
      for (const auto& q : r.timing)
        if (q.geometry == t.geometry && q.mode == "plane" && q.mean_us > 0)
          a.push_back({std::string(shape_name(t.geometry)) + "_ratio", t.mean_us / q.mean_us});
    }
    return;
  }
  double n_ref = 0, s0 = 0, m0 = 0, s1 = 0, m1 = 0, n_add = 0, sa = 0, ma = 0, wall = 0;
  double fails = 0, nonfinite = 0, bounds = 0, nmin = std::numeric_limits<double>::infinity(), nmax = 0;
  double n_mc = 0, mc_in = 0, mc_max = 0;
  for (const auto& row : r.rows) {
    wall += row.wall_us;
    if (row.failed()) ++fails;
    if (row.status == "nonfinite") ++nonfinite;
    if (row.status == "bounds") ++bounds;
    nmin = std::min(nmin, double(row.nudge_count));
    nmax = std::max(nmax, double(row.nudge_count));
    if (row.ref_kind != "none") {
      ++n_ref;
      s0 += row.err0;
      s1 += row.err1;
      m0 = std::max(m0, row.err0);
      m1 = std::max(m1, row.err1);
    }
    if (row.has_additivity) {
      ++n_add;
      sa += row.additivity;
      ma = std::max(ma, row.additivity);
    }
    if (row.has_mc) {
      ++n_mc;
      mc_in += row.mc_sigma <= 4;
      mc_max = std::max(mc_max, row.mc_sigma);
    }
  }
  const double n = double(r.rows.size());
  a.push_back({"rows", n});
  a.push_back({"failures", fails});
  a.push_back({"nonfinite", nonfinite});
  a.push_back({"bounds_violations", bounds});
  a.push_back({"ref_cases", n_ref});
  a.push_back({"avg_err0", n_ref ? s0 / n_ref : 0});
  a.push_back({"max_err0", m0});
  a.push_back({"avg_err1", n_ref ? s1 / n_ref : 0});
  a.push_back({"max_err1", m1});
  a.push_back({"additivity_cases", n_add});
  a.push_back({"avg_additivity", n_add ? sa / n_add : 0});
  a.push_back({"max_additivity", ma});
  a.push_back({"min_nudge", n ? nmin : 0});
  a.push_back({"max_nudge", nmax});
  a.push_back({"mc_cases", n_mc});
  a.push_back({"mc_within_4sigma", mc_in});
  a.push_back({"max_mc_sigma", mc_max});
  a.push_back({"mean_wall_us", n ? wall / n : 0});
}

}  // namespace quadclip
