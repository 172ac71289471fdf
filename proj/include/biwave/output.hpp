#pragma once

// On-disk outputs: the per-step CSV history, legacy ASCII VTK snapshots and a
// plain-text sidecar that stores nodal values with 17 significant digits so
// they can be read back exactly.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include "biwave/diagnostics.hpp"
#include "biwave/errors.hpp"
#include "biwave/field.hpp"
#include "biwave/mesh.hpp"
#include "biwave/scheme_types.hpp"

namespace biwave {

inline constexpr const char* kCsvHeader =
    "step,time,e_h,e_stab,e_cons,damping_accum,constraint_violation,grad_linf,grad_w_l2,"
    "fp_iterations,cg_iterations";

/// %.17g formatting (round-trips every double).
inline std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string csv_row(const EnergyRecord& r) {
  std::string s = std::to_string(r.step);
  for (double x : {r.time, r.e_h, r.e_stab, r.e_cons, r.damping_accum, r.constraint_violation,
                   r.grad_linf, r.grad_w_l2}) {
    s += ',';
    s += format_real(x);
  }
  s += ',' + std::to_string(r.fp_iterations) + ',' + std::to_string(r.cg_iterations);
  return s;
}

/// Writes the header on construction and flushes after each row.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path) {
    if (!out_) throw ConfigError("cannot open CSV output " + path);
    out_ << kCsvHeader << '\n';
    out_.flush();
  }

  void write(const EnergyRecord& r) {
    out_ << csv_row(r) << '\n';
    out_.flush();
  }

 private:
  std::ofstream out_;
};

/// VTK cell type of the mesh simplices (line, triangle, tetrahedron).
inline int vtk_cell_type(const Mesh& mesh) {
  switch (mesh.dim()) {
    case 1: return 3;
    case 2: return 5;
    default: return 10;
  }
}

/// Legacy ASCII unstructured grid with U, V and W as point vectors.
inline void write_vtk(std::ostream& out, const Mesh& mesh, const SimState& s) {
  out << "# vtk DataFile Version 3.0\n";
  out << "biwave step " << s.step_index << " time " << format_real(s.time) << '\n';
  out << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_nodes() << " double\n";
  for (std::size_t z = 0; z < mesh.num_nodes(); ++z) {
    const Point& p = mesh.node(z);
    out << format_real(p[0]) << ' ' << format_real(p[1]) << ' ' << format_real(p[2]) << '\n';
  }
  const int nv = mesh.vertices_per_simplex();
  out << "CELLS " << mesh.num_simplices() << ' ' << mesh.num_simplices() * (nv + 1) << '\n';
  for (std::size_t t = 0; t < mesh.num_simplices(); ++t) {
    out << nv;
    for (int a = 0; a < nv; ++a) out << ' ' << mesh.simplex(t)[a];
    out << '\n';
  }
  out << "CELL_TYPES " << mesh.num_simplices() << '\n';
  const int type = vtk_cell_type(mesh);
  for (std::size_t t = 0; t < mesh.num_simplices(); ++t) out << type << '\n';

  out << "POINT_DATA " << mesh.num_nodes() << '\n';
  auto vectors = [&](const char* name, const VectorField& f) {
    out << "VECTORS " << name << " double\n";
    for (std::size_t z = 0; z < f.size(); ++z)
      out << format_real(f[z][0]) << ' ' << format_real(f[z][1]) << ' ' << format_real(f[z][2])
          << '\n';
  };
  vectors("U", s.u_curr);
  vectors("V", s.v_curr);
  vectors("W", s.w_curr);
}

/// Nodal U and V of one time level, as stored in the sidecar.
struct FieldSnapshot {
  MeshKind kind{MeshKind::Interval1D};
  std::size_t n{0};
  double lower{0.0};
  double upper{0.0};
  long step{0};
  double time{0.0};
  VectorField u;
  VectorField v;
};

inline void write_field_snapshot(std::ostream& out, const Mesh& mesh, const SimState& s) {
  out << "biwave-fields 1\n";
  out << "mesh " << to_string(mesh.kind()) << ' ' << mesh.cells_per_axis() << ' '
      << format_real(mesh.box().lower[0]) << ' ' << format_real(mesh.box().upper[0]) << '\n';
  out << "step " << s.step_index << " time " << format_real(s.time) << '\n';
  out << "nodes " << mesh.num_nodes() << '\n';
  for (std::size_t z = 0; z < mesh.num_nodes(); ++z) {
    const Vec3& u = s.u_curr[z];
    const Vec3& v = s.v_curr[z];
    out << format_real(u[0]) << ' ' << format_real(u[1]) << ' ' << format_real(u[2]) << ' '
        << format_real(v[0]) << ' ' << format_real(v[1]) << ' ' << format_real(v[2]) << '\n';
  }
}

inline FieldSnapshot read_field_snapshot(std::istream& in, const std::string& name = "snapshot") {
  auto fail = [&](const std::string& what) {
    return ConfigError("malformed field file " + name + ": " + what);
  };
  std::string tag, kind;
  int version = 0;
  if (!(in >> tag >> version) || tag != "biwave-fields" || version != 1)
    throw fail("bad header");
  FieldSnapshot f;
  if (!(in >> tag >> kind >> f.n >> f.lower >> f.upper) || tag != "mesh")
    throw fail("bad mesh line");
  if (kind == "Interval1D") f.kind = MeshKind::Interval1D;
  else if (kind == "Type1Triangles2D") f.kind = MeshKind::Type1Triangles2D;
  else if (kind == "Type2Tetrahedra3D") f.kind = MeshKind::Type2Tetrahedra3D;
  else throw fail("unknown mesh kind " + kind);
  std::string time_tag;
  if (!(in >> tag >> f.step >> time_tag >> f.time) || tag != "step" || time_tag != "time")
    throw fail("bad step line");
  std::size_t nodes = 0;
  if (!(in >> tag >> nodes) || tag != "nodes") throw fail("bad node count");
  f.u = VectorField(nodes);
  f.v = VectorField(nodes);
  for (std::size_t z = 0; z < nodes; ++z) {
    Vec3& u = f.u[z];
    Vec3& v = f.v[z];
    if (!(in >> u[0] >> u[1] >> u[2] >> v[0] >> v[1] >> v[2]))
      throw fail("truncated at node " + std::to_string(z));
  }
  return f;
}

inline FieldSnapshot read_field_snapshot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open field file " + path);
  return read_field_snapshot(in, path);
}

/// Checks that a snapshot was written on a mesh identical to `mesh`.
inline void require_compatible(const FieldSnapshot& f, const Mesh& mesh) {
  if (f.kind != mesh.kind() || f.n != mesh.cells_per_axis() || f.lower != mesh.box().lower[0] ||
      f.upper != mesh.box().upper[0] || f.u.size() != mesh.num_nodes())
    throw ConfigError("field file was written on a different mesh (" + to_string(f.kind) + ", n=" +
                      std::to_string(f.n) + ")");
}

/// Writes step_XXXXXX.vtk and step_XXXXXX.fields into `dir`.
inline void write_snapshot_pair(const std::filesystem::path& dir, const Mesh& mesh,
                                const SimState& s) {
  char stem[32];
  std::snprintf(stem, sizeof stem, "step_%06ld", s.step_index);
  std::ofstream vtk(dir / (std::string(stem) + ".vtk"));
  std::ofstream raw(dir / (std::string(stem) + ".fields"));
  if (!vtk || !raw) throw ConfigError("cannot write snapshot into " + dir.string());
  write_vtk(vtk, mesh, s);
  write_field_snapshot(raw, mesh, s);
}

}  // namespace biwave
