#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "quadclip/polytope.hpp"

namespace quadclip {

void write_mesh(std::ostream& os, const Polyhedron& p) {
  os << std::setprecision(17);
  for (const auto& v : p.vertices()) os << "v " << v.x << ' ' << v.y << ' ' << v.z << '\n';
  for (const auto& f : p.faces())
    for (std::size_t l = 0; l < f.loops.size(); ++l) {
      os << (l == 0 ? 'f' : 'h');
      for (int i : f.loops[l]) os << ' ' << i + 1;
      os << '\n';
    }
  if (!os) throw Error(ErrorCode::IoFailure, "mesh write failed");
}

Polyhedron read_mesh(std::istream& is) {
  std::vector<Vec3> v;
  std::vector<Face> faces;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      Vec3 x;
      if (!(ls >> x.x >> x.y >> x.z)) throw Error(ErrorCode::IoFailure, "bad vertex at line " + std::to_string(lineno));
      v.push_back(x);
    } else if (tag == "f" || tag == "h") {
      std::vector<int> loop;
      long i;
      while (ls >> i) loop.push_back(int(i - 1));
      if (tag == "f") faces.emplace_back();
      else if (faces.empty()) throw Error(ErrorCode::IoFailure, "'h' before any 'f' at line " + std::to_string(lineno));
      faces.back().loops.push_back(std::move(loop));
    } else {
      throw Error(ErrorCode::IoFailure, "unknown record '" + tag + "' at line " + std::to_string(lineno));
    }
  }
  for (const auto& f : faces)
    for (const auto& l : f.loops)
      for (int i : l)
        if (i < 0 || std::size_t(i) >= v.size()) throw Error(ErrorCode::DegenerateFace, "vertex index out of range");
  Polyhedron p = Polyhedron::from_trusted(std::move(v), std::move(faces));
  validate(p);
  return p;
}

}  // namespace quadclip
