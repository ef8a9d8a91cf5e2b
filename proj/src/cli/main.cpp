#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "quadclip/sweep.hpp"

using namespace quadclip;

namespace {

int run_sweep_command(const SweepConfig& cfg_in, const std::string& campaign, const std::vector<std::string>& geoms,
                      const std::string& cyl, bool full_grid) {
  SweepConfig cfg = cfg_in;
  cfg.campaign = parse_campaign(campaign);
  cfg.cylinder = parse_cylinder_type(cyl);
  cfg.geometries.clear();
  for (const auto& g : geoms) {
    if (g == "all") {
      for (int k = 0; k < 4; ++k) cfg.geometries.push_back(ShapeKind(k));
    } else {
      cfg.geometries.push_back(parse_shape(g));
    }
  }
  if (full_grid) cfg.stride = 1;
  const SweepReport rep = run_sweep(cfg);
  if (cfg.output_path.empty() || cfg.output_path == "-")
    write_csv(std::cout, rep);
  else
    write_report(rep, cfg.output_path);
  for (const auto& [k, v] : rep.aggregates) std::fprintf(stderr, "%s=%.6g\n", k.c_str(), v);
  return rep.aggregate("nonfinite") > 0 ? 2 : 0;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") + 1 - b);
}

/* key=value lines become extra arguments for every option the command line left unset. */
std::vector<std::string> config_args(CLI::App& sub, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::IoFailure, "cannot open config '" + path + "'");
  std::vector<std::string> out;
  std::string line;
  for (int no = 1; std::getline(f, line); ++no) {
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::BadConfig, path + ":" + std::to_string(no) + ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    std::replace(key.begin(), key.end(), '_', '-');
    if (key == "config") throw Error(ErrorCode::BadConfig, "config files do not nest");
    CLI::Option* opt = nullptr;
    try {
      opt = sub.get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      throw Error(ErrorCode::BadConfig, path + ":" + std::to_string(no) + ": unknown key '" + key + "'");
    }
    if (opt->count() > 0) continue;
    if (opt->get_expected_min() == 0) {
      if (value == "true" || value == "1" || value == "yes" || value == "on" || value.empty()) out.push_back("--" + key);
      else if (!(value == "false" || value == "0" || value == "no" || value == "off"))
        throw Error(ErrorCode::BadConfig, path + ":" + std::to_string(no) + ": bad flag value '" + value + "'");
    } else {
      out.push_back("--" + key + "=" + value);
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Volume and first moments of polyhedra clipped by quadratic cylinders"};
  app.require_subcommand(1);

  SweepConfig cfg;
  std::string campaign = "random", cyl = "both";
  std::vector<std::string> geoms{"cube"};
  bool full_grid = false, extended_off = false;
  auto* sweep = app.add_subcommand("sweep", "run a verification campaign and write a CSV report");
  std::string config_path;
  sweep->add_option("--config", config_path, "flat key=value file; command-line flags take precedence");
  sweep->add_option("--campaign", campaign, "translation|random|graded|nudged|timing")->capture_default_str();
  sweep->add_option("--geometry", geoms, "tetra|cube|dodeca|hollow|all (repeatable or comma-separated)")
      ->delimiter(',')
      ->capture_default_str();
  sweep->add_option("--cylinder", cyl, "elliptic|hyperbolic|both")->capture_default_str();
  sweep->add_option("--count", cfg.count, "cases per geometry (calls per mode for timing)")->capture_default_str();
  sweep->add_option("--seed", cfg.seed)->capture_default_str();
  sweep->add_option("--amr-levels", cfg.amr_levels, "AMR depth for reference cases, 0 = off")->capture_default_str();
  sweep->add_option("--mc-samples", cfg.mc_samples, "MC samples for reference cases, 0 = off")->capture_default_str();
  sweep->add_option("--ref-every", cfg.ref_every, "compute references on every n-th case, 0 = never")->capture_default_str();
  sweep->add_option("--stride", cfg.stride, "graded grid stride")->capture_default_str();
  sweep->add_flag("--full-grid", full_grid, "graded: walk all 703125 grid points");
  sweep->add_option("--additivity-every", cfg.additivity_every, "plane-split check on every n-th case, 0 = off")
      ->capture_default_str();
  sweep->add_option("--delta-k", cfg.delta_k, "translation step")->capture_default_str();
  sweep->add_option("--threads", cfg.threads, "worker threads, 0 = all cores")->capture_default_str();
  sweep->add_flag("--zero-wall-time", cfg.zero_wall_time, "write wall_us as 0 for byte-stable output");
  sweep->add_option("--max-nudge-attempts", cfg.robustness.max_nudge_attempts)->capture_default_str();
  sweep->add_flag("--no-extended-precision", extended_off, "stay in double for ill-posed cases");
  sweep->add_option("--out", cfg.output_path, "CSV path, '-' for stdout");

  std::string shape = "cube", mesh_out;
  bool unit_volume = false;
  auto* shp = app.add_subcommand("shape", "write a canonical shape as a mesh file");
  shp->add_option("--geometry", shape)->capture_default_str();
  shp->add_flag("--unit-volume", unit_volume);
  shp->add_option("--out", mesh_out, "mesh path, stdout when empty");

  std::string mesh_in;
  double alpha = 1, beta = 1;
  auto* clip = app.add_subcommand("clip", "moments of a mesh clipped by the cylinder beta y^2 + z^2 <= alpha^2");
  clip->add_option("--mesh", mesh_in, "mesh file (v/f/h lines)")->required();
  clip->add_option("--alpha", alpha)->capture_default_str();
  clip->add_option("--beta", beta)->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*sweep && !config_path.empty()) {
      std::vector<std::string> args(argv + 1, argv + argc);
      const auto extra = config_args(*sweep, config_path);
      args.insert(args.end(), extra.begin(), extra.end());
      std::reverse(args.begin(), args.end());
      geoms.clear();
      app.clear();
      try {
        app.parse(args);
      } catch (const CLI::ParseError& e) {
        return app.exit(e);
      }
      if (geoms.empty()) geoms = {"cube"};
    }
    if (*sweep) {
      cfg.robustness.extended_precision = !extended_off;
      return run_sweep_command(cfg, campaign, geoms, cyl, full_grid);
    }
    if (*shp) {
      const Polyhedron p = make_shape(parse_shape(shape), unit_volume);
      if (mesh_out.empty()) {
        write_mesh(std::cout, p);
      } else {
        std::ofstream f(mesh_out);
        if (!f) throw Error(ErrorCode::IoFailure, "cannot open '" + mesh_out + "'");
        write_mesh(f, p);
      }
      return 0;
    }
    if (*clip) {
      std::ifstream f(mesh_in);
      if (!f) throw Error(ErrorCode::IoFailure, "cannot open '" + mesh_in + "'");
      const Polyhedron p = read_mesh(f);
      ClipStats st;
      const Moments m = clip_moments(p, Cylinder(alpha, beta), {}, &st);
      std::printf("m0=%.17g\nmx=%.17g\nmy=%.17g\nmz=%.17g\nnudge_count=%d\n", m.m0, m.m1.x, m.m1.y, m.m1.z,
                  st.nudge_count);
      return 0;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", to_string(e.code()), e.what());
    return 1;
  }
  return 0;
}
