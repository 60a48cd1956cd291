#include "mdfc/errors.hpp"
#include "mdfc/mesh.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>

namespace mdfc {

namespace {

enum class Section { None, Nodes, Cells, FractureFaces, Boundary, Fractures };

std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

PlanarMesh parse_planar_mesh(const std::string& text) {
  PlanarMesh pm;
  std::map<long, int> node_index;
  Section section = Section::None;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;

  auto lookup = [&](long label, int line) {
    auto it = node_index.find(label);
    if (it == node_index.end()) throw ParseError(line, "reference to missing node " + std::to_string(label));
    return it->second;
  };

  while (std::getline(in, raw)) {
    ++line_no;
    std::istringstream ls(strip_comment(raw));
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "NODES") { section = Section::Nodes; continue; }
    if (head == "CELLS") { section = Section::Cells; continue; }
    if (head == "FRACTURE_FACES") { section = Section::FractureFaces; continue; }
    if (head == "BOUNDARY") { section = Section::Boundary; continue; }
    if (head == "FRACTURES") { section = Section::Fractures; continue; }

    std::istringstream rs(strip_comment(raw));
    switch (section) {
      case Section::None:
        throw ParseError(line_no, "data before the first section header");
      case Section::Nodes: {
        long label;
        double x, y;
        std::string extra;
        if (!(rs >> label >> x >> y) || (rs >> extra)) throw ParseError(line_no, "expected 'index x y'");
        if (label < 0) throw ParseError(line_no, "negative node index");
        if (!node_index.emplace(label, static_cast<int>(pm.nodes.size())).second)
          throw ParseError(line_no, "duplicate node index " + std::to_string(label));
        pm.nodes.emplace_back(x, y);
        break;
      }
      case Section::Cells: {
        long label;
        if (!(rs >> label)) throw ParseError(line_no, "expected 'index node-list'");
        std::vector<int> cell;
        long n;
        while (rs >> n) cell.push_back(lookup(n, line_no));
        if (!rs.eof()) throw ParseError(line_no, "non-integer node reference");
        if (cell.size() < 3) throw ParseError(line_no, "cell needs at least 3 nodes");
        pm.cells.push_back(std::move(cell));
        break;
      }
      case Section::FractureFaces: {
        long a, b;
        int branch;
        std::string extra;
        if (!(rs >> a >> b >> branch) || (rs >> extra)) throw ParseError(line_no, "expected 'a b branch-id'");
        if (branch < 0) throw ParseError(line_no, "negative branch id");
        pm.fracture_edges.push_back({lookup(a, line_no), lookup(b, line_no), branch});
        break;
      }
      case Section::Boundary: {
        long a, b;
        std::string kind, extra;
        double value;
        if (!(rs >> a >> b >> kind >> value) || (rs >> extra))
          throw ParseError(line_no, "expected 'a b dirichlet|neumann value'");
        if (kind != "dirichlet" && kind != "neumann") throw ParseError(line_no, "unknown boundary kind '" + kind + "'");
        pm.boundary.push_back({lookup(a, line_no), lookup(b, line_no), kind == "dirichlet", value});
        break;
      }
      case Section::Fractures: {
        int id;
        std::string name, key;
        if (!(rs >> id >> name) || id < 0) throw ParseError(line_no, "expected 'id name [tip value]'");
        if (static_cast<size_t>(id) >= pm.fractures.size()) pm.fractures.resize(static_cast<size_t>(id) + 1);
        pm.fractures[static_cast<size_t>(id)].name = name;
        if (rs >> key) {
          double v;
          if (key != "tip" || !(rs >> v)) throw ParseError(line_no, "expected 'tip value'");
          pm.fractures[static_cast<size_t>(id)].tip_pressure = v;
        }
        break;
      }
    }
  }
  if (pm.cells.empty()) throw ParseError(line_no, "mesh has no CELLS");
  int max_branch = -1;
  for (const auto& e : pm.fracture_edges) max_branch = std::max(max_branch, e.fracture);
  if (static_cast<size_t>(max_branch + 1) > pm.fractures.size()) pm.fractures.resize(static_cast<size_t>(max_branch + 1));
  for (size_t i = 0; i < pm.fractures.size(); ++i)
    if (pm.fractures[i].name.empty()) pm.fractures[i].name = "fracture" + std::to_string(i);
  return pm;
}

BoundaryEvaluator planar_evaluator(const PlanarMesh& mesh) {
  auto table = std::make_shared<std::map<std::pair<double, double>, std::pair<bool, double>>>();
  // keyed by edge midpoint; mesh edges have distinct midpoints
  for (const auto& e : mesh.boundary) {
    const Point m = 0.5 * (mesh.nodes[static_cast<size_t>(e.a)] + mesh.nodes[static_cast<size_t>(e.b)]);
    (*table)[{m.x(), m.y()}] = {e.dirichlet, e.value};
  }
  BoundaryEvaluator ev;
  ev.edge = [table](const Point& a, const Point& b) -> std::pair<bool, double> {
    const Point m = 0.5 * (a + b);
    auto it = table->find({m.x(), m.y()});
    return it == table->end() ? std::make_pair(false, 0.0) : it->second;
  };
  ev.dirichlet_at = [table](const Point& a, const Point& b, const Point&) {
    const Point m = 0.5 * (a + b);
    auto it = table->find({m.x(), m.y()});
    return it == table->end() ? 0.0 : it->second.second;
  };
  return ev;
}

MixedDimMesh read_mesh_text(const std::string& text) {
  const PlanarMesh pm = parse_planar_mesh(text);
  return split_planar_mesh(pm, planar_evaluator(pm));
}

MixedDimMesh read_mesh_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError(0, "cannot open mesh file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return read_mesh_text(ss.str());
}

std::string format_planar_mesh(const PlanarMesh& mesh) {
  std::ostringstream out;
  out << "NODES\n";
  for (size_t i = 0; i < mesh.nodes.size(); ++i)
    out << i << ' ' << format_double(mesh.nodes[i].x()) << ' ' << format_double(mesh.nodes[i].y()) << '\n';
  out << "CELLS\n";
  for (size_t c = 0; c < mesh.cells.size(); ++c) {
    out << c;
    for (int n : mesh.cells[c]) out << ' ' << n;
    out << '\n';
  }
  if (!mesh.fractures.empty()) {
    out << "FRACTURES\n";
    for (size_t i = 0; i < mesh.fractures.size(); ++i) {
      out << i << ' ' << (mesh.fractures[i].name.empty() ? "fracture" + std::to_string(i) : mesh.fractures[i].name);
      if (mesh.fractures[i].tip_pressure) out << " tip " << format_double(*mesh.fractures[i].tip_pressure);
      out << '\n';
    }
  }
  out << "FRACTURE_FACES\n";
  for (const auto& e : mesh.fracture_edges) out << e.a << ' ' << e.b << ' ' << e.fracture << '\n';
  out << "BOUNDARY\n";
  for (const auto& e : mesh.boundary)
    out << e.a << ' ' << e.b << ' ' << (e.dirichlet ? "dirichlet" : "neumann") << ' ' << format_double(e.value)
        << '\n';
  return out.str();
}

void write_mesh_file(const std::string& path, const PlanarMesh& mesh) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write mesh file " + path);
  f << format_planar_mesh(mesh);
}

}  // namespace mdfc
