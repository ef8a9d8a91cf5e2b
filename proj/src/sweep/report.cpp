#include <cstdio>
#include <fstream>
#include <ostream>

#include "quadclip/sweep.hpp"

namespace quadclip {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_csv(std::ostream& os, const SweepReport& r) {
  for (const auto& n : r.notes) os << "# " << n << '\n';
  if (r.campaign == Campaign::Timing) {
    os << "geometry,mode,calls,mean_us\n";
    for (const auto& t : r.timing) os << shape_name(t.geometry) << ',' << t.mode << ',' << t.calls << ',' << fmt17(t.mean_us) << '\n';
  } else {
    os << "case_id,geometry,alpha,beta,cx,cy,cz,thx,thy,thz,m0,mx,my,mz,ref_kind,ref_m0,ref_mx,ref_my,ref_mz,"
          "err0,err1,additivity_resid,nudge_count,wall_us,status,mc_sigma\n";
    for (const auto& row : r.rows) {
      os << row.case_id << ',' << shape_name(row.geometry) << ',' << fmt17(row.alpha) << ',' << fmt17(row.beta);
      for (int k = 0; k < 3; ++k) os << ',' << fmt17(row.center[k]);
      for (int k = 0; k < 3; ++k) os << ',' << fmt17(row.angles[k]);
      for (int k = 0; k < 4; ++k) os << ',' << fmt17(row.m[k]);
      os << ',' << row.ref_kind;
      const bool ref = row.ref_kind != "none";
      for (int k = 0; k < 4; ++k) os << ',' << (ref ? fmt17(row.ref[k]) : "");
      os << ',' << (ref ? fmt17(row.err0) : "") << ',' << (ref ? fmt17(row.err1) : "");
      os << ',' << (row.has_additivity ? fmt17(row.additivity) : "");
      os << ',' << row.nudge_count << ',' << fmt17(row.wall_us) << ',' << row.status;
      os << ',' << (row.has_mc ? fmt17(row.mc_sigma) : "") << '\n';
    }
  }
  for (const auto& [k, v] : r.aggregates) os << "# " << k << '=' << fmt17(v) << '\n';
}

void write_report(const SweepReport& r, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoFailure, "cannot open '" + path + "' for writing");
  write_csv(f, r);
  f.flush();
  if (!f) throw Error(ErrorCode::IoFailure, "write to '" + path + "' failed");
}

}  // namespace quadclip
