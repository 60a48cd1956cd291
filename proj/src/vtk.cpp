#include "mdfc/harness.hpp"

#include <filesystem>
#include <fstream>

namespace mdfc {

namespace {

int vtk_cell_type(int dim, size_t nodes) {
  if (dim == 0) return 1;
  if (dim == 1) return 3;
  if (nodes == 3) return 5;
  if (nodes == 4) return 9;
  return 7;
}

std::ofstream open(const std::string& dir, const std::string& name) {
  std::ofstream out(std::filesystem::path(dir) / name);
  if (!out) throw std::runtime_error("cannot write " + name + " in " + dir);
  out.precision(17);
  return out;
}

}  // namespace

void write_vtk(const std::string& dir, const Discretization& disc, const Solution& sol) {
  std::filesystem::create_directories(dir);
  const MixedDimMesh& mesh = *disc.mesh;
  std::ofstream index = open(dir, "fields_index.csv");
  index << "subdomain,name,dim,file\n";
  for (const SubdomainGrid& g : mesh.subdomains()) {
    const std::string file = "fields_" + std::to_string(g.id) + ".vtk";
    index << g.id << ',' << g.name << ',' << g.dim << ',' << file << '\n';
    std::ofstream out = open(dir, file);
    out << "# vtk DataFile Version 3.0\n" << g.name << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << g.num_nodes() << " double\n";
    for (const Point& p : g.nodes) out << p.x() << ' ' << p.y() << " 0\n";
    size_t total = 0;
    for (const auto& c : g.cells) total += c.size() + 1;
    out << "CELLS " << g.num_cells() << ' ' << total << '\n';
    for (const auto& c : g.cells) {
      out << c.size();
      for (int v : c) out << ' ' << v;
      out << '\n';
    }
    out << "CELL_TYPES " << g.num_cells() << '\n';
    for (const auto& c : g.cells) out << vtk_cell_type(g.dim, c.size()) << '\n';
    out << "CELL_DATA " << g.num_cells() << "\nSCALARS pressure double 1\nLOOKUP_TABLE default\n";
    const auto& p = sol.cell_pressure[static_cast<size_t>(g.id)];
    for (int c = 0; c < g.num_cells(); ++c) out << p(c) << '\n';
  }

  std::ofstream out = open(dir, "mortars.vtk");
  int cells = 0;
  for (const MortarInterface& m : disc.mortars) cells += m.num_cells();
  out << "# vtk DataFile Version 3.0\nmortar fluxes\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << 2 * cells << " double\n";
  for (const MortarInterface& m : disc.mortars)
    for (const auto& seg : m.segments)
      for (const Point& p : seg) out << p.x() << ' ' << p.y() << " 0\n";
  out << "CELLS " << cells << ' ' << 3 * cells << '\n';
  for (int k = 0; k < cells; ++k) out << "2 " << 2 * k << ' ' << 2 * k + 1 << '\n';
  out << "CELL_TYPES " << cells << '\n';
  for (const MortarInterface& m : disc.mortars)
    for (int k = 0; k < m.num_cells(); ++k) out << (m.lower_dim == 0 ? 2 : 3) << '\n';
  out << "CELL_DATA " << cells << "\nSCALARS mortar_flux double 1\nLOOKUP_TABLE default\n";
  for (const MortarInterface& m : disc.mortars)
    for (int k = 0; k < m.num_cells(); ++k) out << sol.lambda[static_cast<size_t>(m.id)](k) << '\n';
  out << "SCALARS interface int 1\nLOOKUP_TABLE default\n";
  for (const MortarInterface& m : disc.mortars)
    for (int k = 0; k < m.num_cells(); ++k) out << m.id << '\n';
  out << "SCALARS side int 1\nLOOKUP_TABLE default\n";
  for (const MortarInterface& m : disc.mortars)
    for (int k = 0; k < m.num_cells(); ++k) out << m.side << '\n';
}

}  // namespace mdfc
