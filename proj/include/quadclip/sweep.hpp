#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "oracles.hpp"

namespace quadclip {

enum class Campaign { Translation, Random, Graded, Nudged, Timing };
enum class CylinderType { Elliptic, Hyperbolic, Both };

Campaign parse_campaign(const std::string& s);           // BadConfig
CylinderType parse_cylinder_type(const std::string& s);  // BadConfig
const char* campaign_name(Campaign c);
const char* cylinder_type_name(CylinderType c);

struct SweepConfig {
  Campaign campaign = Campaign::Random;
  std::vector<ShapeKind> geometries{ShapeKind::Cube};
  CylinderType cylinder = CylinderType::Both;
  uint64_t count = 1000;  // cases per geometry; calls per mode for timing
  uint64_t seed = 1;
  int amr_levels = 12;        // 0 disables the AMR reference
  uint64_t mc_samples = 0;    // 0 disables the MC reference
  uint64_t ref_every = 0;     // references on every n-th case, 0 = never
  uint64_t stride = 100;      // graded: 1 walks the full grid
  uint64_t additivity_every = 1;  // 0 = off
  double delta_k = 1e-3;
  int threads = 0;  // 0 = hardware concurrency
  bool zero_wall_time = false;  // wall_us written as 0, output then byte-stable
  std::string output_path;
  RobustnessConfig robustness;

  void validate() const;  // BadConfig
};

struct CaseRow {
  uint64_t case_id = 0;
  ShapeKind geometry = ShapeKind::Cube;
  double alpha = 0, beta = 0;
  Vec3 center, angles;
  Moments m;
  std::string ref_kind = "none";
  Moments ref;
  double err0 = 0, err1 = 0;
  bool has_additivity = false;
  double additivity = 0;
  int nudge_count = 0;
  double wall_us = 0;
  std::string status = "ok";  // an ErrorCode name, "nonfinite" or "bounds" otherwise
  bool has_mc = false;
  double mc_sigma = 0;  // max over components of |m - mc| / stderr

  bool failed() const { return status != "ok"; }
};

struct TimingRow {
  ShapeKind geometry = ShapeKind::Cube;
  std::string mode;  // "both", "zeroth" or "plane"
  uint64_t calls = 0;
  double mean_us = 0;
};

struct SweepReport {
  Campaign campaign = Campaign::Random;
  std::vector<std::string> notes;
  std::vector<CaseRow> rows;
  std::vector<TimingRow> timing;
  std::vector<std::pair<std::string, double>> aggregates;

  double aggregate(const std::string& key) const;  // NaN when absent
};

SweepReport run_translation(const SweepConfig& cfg);
SweepReport run_random(const SweepConfig& cfg);
SweepReport run_graded(const SweepConfig& cfg);
SweepReport run_nudged(const SweepConfig& cfg);
SweepReport run_timing(const SweepConfig& cfg);
SweepReport run_sweep(const SweepConfig& cfg);

/* Rebuilds report.aggregates from the rows alone. */
void compute_aggregates(SweepReport& report);

void write_csv(std::ostream& os, const SweepReport& report);
void write_report(const SweepReport& report, const std::string& path);  // IoFailure

/* The graded grid: centers and angles on 5-point sets, 9 betas, 5 alphas. */
inline constexpr uint64_t kGradedGridSize = 703125;
struct GradedCase {
  Vec3 center, angles;
  double alpha = 0, beta = 0;
};
/* Grid point for traversal position i; the traversal is a fixed bijection of the grid so
   that strided subsets cover every parameter value. */
GradedCase graded_case(uint64_t i, uint64_t* grid_index = nullptr);

}  // namespace quadclip
