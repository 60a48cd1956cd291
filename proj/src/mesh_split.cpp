#include "mdfc/errors.hpp"
#include "mdfc/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <string>

namespace mdfc {

namespace {

class UnionFind {
 public:
  explicit UnionFind(size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), size_t{0}); }
  size_t find(size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(size_t a, size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent_[a] = b;  // keep the smaller index as root
  }

 private:
  std::vector<size_t> parent_;
};

double signed_area(const std::vector<Point>& nodes, const std::vector<int>& cell) {
  double a2 = 0.0;
  for (size_t k = 0; k < cell.size(); ++k) {
    const Point& p = nodes[static_cast<size_t>(cell[k])];
    const Point& q = nodes[static_cast<size_t>(cell[(k + 1) % cell.size()])];
    a2 += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a2;
}

std::pair<int, int> edge_key(int a, int b) { return a < b ? std::make_pair(a, b) : std::make_pair(b, a); }

struct Branch {
  int fracture = -1;
  std::vector<int> nodes;  // base node ids along the chain
  std::vector<int> edges;  // base edge ids, edges[k] joins nodes[k], nodes[k+1]
};

}  // namespace

MixedDimMesh split_planar_mesh(const PlanarMesh& input, const BoundaryEvaluator& bc) {
  const auto& nodes = input.nodes;
  const size_t nn = nodes.size();
  if (input.cells.empty()) throw EmptyDomain("mesh has no cells");

  // Orient cells counter-clockwise.
  std::vector<std::vector<int>> cells = input.cells;
  double domain_measure = 0.0;
  for (size_t c = 0; c < cells.size(); ++c) {
    if (cells[c].size() < 3) throw TopologyError("cell " + std::to_string(c) + " has fewer than 3 nodes");
    for (int n : cells[c])
      if (n < 0 || static_cast<size_t>(n) >= nn)
        throw TopologyError("cell " + std::to_string(c) + " references missing node " + std::to_string(n));
    double a = signed_area(nodes, cells[c]);
    if (a < 0.0) {
      std::reverse(cells[c].begin(), cells[c].end());
      a = -a;
    }
    if (a <= 0.0) throw TopologyError("cell " + std::to_string(c) + " has zero area");
    domain_measure += a;
  }
  const size_t nc = cells.size();

  // Edges.
  std::map<std::pair<int, int>, int> edge_id;
  std::vector<std::array<int, 2>> edge_nodes;
  std::vector<std::vector<int>> edge_cells;
  std::vector<std::vector<int>> cell_edges(nc);
  for (size_t c = 0; c < nc; ++c) {
    const auto& cn = cells[c];
    for (size_t k = 0; k < cn.size(); ++k) {
      const int a = cn[k], b = cn[(k + 1) % cn.size()];
      auto [it, inserted] = edge_id.try_emplace(edge_key(a, b), static_cast<int>(edge_nodes.size()));
      if (inserted) {
        edge_nodes.push_back({a, b});
        edge_cells.emplace_back();
      }
      edge_cells[static_cast<size_t>(it->second)].push_back(static_cast<int>(c));
      cell_edges[c].push_back(it->second);
    }
  }
  const size_t ne = edge_nodes.size();
  for (size_t e = 0; e < ne; ++e)
    if (edge_cells[e].size() > 2) throw TopologyError("edge shared by more than two cells");

  // Fracture edges.
  std::vector<int> edge_fracture(ne, -1);
  std::vector<std::vector<int>> node_fracture_edges(nn);
  std::vector<int> tagged_order;
  for (const auto& te : input.fracture_edges) {
    auto it = edge_id.find(edge_key(te.a, te.b));
    if (it == edge_id.end())
      throw TopologyError("fracture face (" + std::to_string(te.a) + ", " + std::to_string(te.b) +
                          ") is not a mesh edge");
    const auto e = static_cast<size_t>(it->second);
    if (edge_cells[e].size() != 2)
      throw TopologyError("fracture face (" + std::to_string(te.a) + ", " + std::to_string(te.b) +
                          ") lies on the domain boundary");
    if (edge_fracture[e] >= 0) throw TopologyError("fracture face tagged twice");
    if (te.fracture < 0) throw TopologyError("fracture face without a fracture id");
    edge_fracture[e] = te.fracture;
    node_fracture_edges[static_cast<size_t>(te.a)].push_back(static_cast<int>(e));
    node_fracture_edges[static_cast<size_t>(te.b)].push_back(static_cast<int>(e));
    tagged_order.push_back(static_cast<int>(e));
  }

  std::vector<char> junction(nn, 0);
  for (size_t n = 0; n < nn; ++n) {
    const auto& fe = node_fracture_edges[n];
    if (fe.size() >= 3) junction[n] = 1;
    if (fe.size() == 2 && edge_fracture[static_cast<size_t>(fe[0])] != edge_fracture[static_cast<size_t>(fe[1])])
      junction[n] = 1;
  }
  auto chain_continues = [&](int n) {
    return node_fracture_edges[static_cast<size_t>(n)].size() == 2 && !junction[static_cast<size_t>(n)];
  };
  auto other_node = [&](int e, int n) {
    const auto& en = edge_nodes[static_cast<size_t>(e)];
    return en[0] == n ? en[1] : en[0];
  };
  auto other_edge = [&](int n, int e) {
    const auto& fe = node_fracture_edges[static_cast<size_t>(n)];
    return fe[0] == e ? fe[1] : fe[0];
  };

  // Branches: maximal chains between chain ends, oriented like the first
  // tagged edge encountered.
  std::vector<Branch> branches;
  std::vector<char> edge_visited(ne, 0);
  for (size_t t = 0; t < tagged_order.size(); ++t) {
    const int e0 = tagged_order[t];
    if (edge_visited[static_cast<size_t>(e0)]) continue;
    const auto& te = input.fracture_edges[t];
    std::deque<int> chain_nodes{te.a, te.b};
    std::deque<int> chain_edges{e0};
    edge_visited[static_cast<size_t>(e0)] = 1;
    int n = te.b, e = e0;
    while (chain_continues(n)) {
      e = other_edge(n, e);
      if (edge_visited[static_cast<size_t>(e)]) throw TopologyError("fracture branch forms a closed loop");
      edge_visited[static_cast<size_t>(e)] = 1;
      n = other_node(e, n);
      chain_edges.push_back(e);
      chain_nodes.push_back(n);
    }
    n = te.a;
    e = e0;
    while (chain_continues(n)) {
      e = other_edge(n, e);
      if (edge_visited[static_cast<size_t>(e)]) throw TopologyError("fracture branch forms a closed loop");
      edge_visited[static_cast<size_t>(e)] = 1;
      n = other_node(e, n);
      chain_edges.push_front(e);
      chain_nodes.push_front(n);
    }
    Branch b;
    b.fracture = edge_fracture[static_cast<size_t>(e0)];
    b.nodes.assign(chain_nodes.begin(), chain_nodes.end());
    b.edges.assign(chain_edges.begin(), chain_edges.end());
    if (b.nodes.front() == b.nodes.back() && junction[static_cast<size_t>(b.nodes.front())])
      throw TopologyError("fracture branch starts and ends at the same intersection");
    branches.push_back(std::move(b));
  }
  std::stable_sort(branches.begin(), branches.end(),
                   [](const Branch& x, const Branch& y) { return x.fracture < y.fracture; });

  std::vector<int> edge_branch(ne, -1), edge_branch_pos(ne, -1);
  for (size_t b = 0; b < branches.size(); ++b)
    for (size_t k = 0; k < branches[b].edges.size(); ++k) {
      edge_branch[static_cast<size_t>(branches[b].edges[k])] = static_cast<int>(b);
      edge_branch_pos[static_cast<size_t>(branches[b].edges[k])] = static_cast<int>(k);
    }

  // Node splitting: corners (cell, local node) of the same base node are
  // merged across non-fracture interior edges.
  std::vector<size_t> corner_offset(nc + 1, 0);
  for (size_t c = 0; c < nc; ++c) corner_offset[c + 1] = corner_offset[c] + cells[c].size();
  auto corner = [&](int c, int node) {
    const auto& cn = cells[static_cast<size_t>(c)];
    const auto k = static_cast<size_t>(std::find(cn.begin(), cn.end(), node) - cn.begin());
    return corner_offset[static_cast<size_t>(c)] + k;
  };
  UnionFind corners(corner_offset[nc]);
  UnionFind components(nc);
  for (size_t e = 0; e < ne; ++e) {
    if (edge_cells[e].size() != 2 || edge_fracture[e] >= 0) continue;
    const int c1 = edge_cells[e][0], c2 = edge_cells[e][1];
    components.unite(static_cast<size_t>(c1), static_cast<size_t>(c2));
    for (int n : edge_nodes[e]) corners.unite(corner(c1, n), corner(c2, n));
  }
  // split node id per corner root, ordered by (base node, smallest corner)
  std::vector<std::pair<int, size_t>> roots;
  for (size_t c = 0; c < nc; ++c)
    for (size_t k = 0; k < cells[c].size(); ++k) {
      const size_t idx = corner_offset[c] + k;
      if (corners.find(idx) == idx) roots.emplace_back(cells[c][k], idx);
    }
  std::sort(roots.begin(), roots.end());
  std::map<size_t, int> split_of_root;
  std::vector<int> split_base;
  for (const auto& [base, root] : roots) {
    split_of_root[root] = static_cast<int>(split_base.size());
    split_base.push_back(base);
  }
  auto split_node = [&](int c, int node) { return split_of_root.at(corners.find(corner(c, node))); };

  // 2D components ordered by first cell.
  std::map<size_t, int> comp_of_root;
  std::vector<int> cell_comp(nc);
  for (size_t c = 0; c < nc; ++c) {
    const size_t r = components.find(c);
    auto [it, inserted] = comp_of_root.try_emplace(r, static_cast<int>(comp_of_root.size()));
    cell_comp[c] = it->second;
  }
  const int n2d = static_cast<int>(comp_of_root.size());
  const int nbranch = static_cast<int>(branches.size());

  std::vector<int> junction_id(nn, -1);
  int n0d = 0;
  for (size_t n = 0; n < nn; ++n)
    if (junction[n]) junction_id[n] = n2d + nbranch + n0d++;

  // Base boundary edges at each node, for 1D end conditions.
  std::vector<std::vector<int>> node_boundary_edges(nn);
  for (size_t e = 0; e < ne; ++e)
    if (edge_cells[e].size() == 1)
      for (int n : edge_nodes[e]) node_boundary_edges[static_cast<size_t>(n)].push_back(static_cast<int>(e));

  // Side of each cell adjacent to a fracture edge: +1 if it lies to the left
  // of the branch direction.
  auto cell_side = [&](size_t e, int c) {
    const Branch& b = branches[static_cast<size_t>(edge_branch[e])];
    const auto k = static_cast<size_t>(edge_branch_pos[e]);
    const Point& p = nodes[static_cast<size_t>(b.nodes[k])];
    const Point& q = nodes[static_cast<size_t>(b.nodes[k + 1])];
    const Point tangent = q - p;
    const Point normal(-tangent.y(), tangent.x());
    Point centroid = Point::Zero();
    for (int n : cells[static_cast<size_t>(c)]) centroid += nodes[static_cast<size_t>(n)];
    centroid /= static_cast<double>(cells[static_cast<size_t>(c)].size());
    return (centroid - 0.5 * (p + q)).dot(normal) > 0.0 ? 1 : -1;
  };

  std::vector<SubdomainGrid> grids(static_cast<size_t>(n2d + nbranch + n0d));

  // fracture edge copy: (edge, cell) -> face index in the cell's 2D grid
  std::map<std::pair<size_t, int>, int> fracture_face_copy;

  // 2D grids.
  std::vector<std::vector<int>> comp_cells(static_cast<size_t>(n2d));
  for (size_t c = 0; c < nc; ++c) comp_cells[static_cast<size_t>(cell_comp[c])].push_back(static_cast<int>(c));
  std::vector<int> cell_local(nc, -1);
  for (int comp = 0; comp < n2d; ++comp) {
    SubdomainGrid& g = grids[static_cast<size_t>(comp)];
    g.id = comp;
    g.dim = 2;
    g.name = "matrix_" + std::to_string(comp);
    const auto& cl = comp_cells[static_cast<size_t>(comp)];
    std::map<int, int> node_local;
    for (int c : cl)
      for (int n : cells[static_cast<size_t>(c)]) node_local.emplace(split_node(c, n), 0);
    for (auto& [split, local] : node_local) {
      local = static_cast<int>(g.nodes.size());
      g.nodes.push_back(nodes[static_cast<size_t>(split_base[static_cast<size_t>(split)])]);
    }
    for (size_t lc = 0; lc < cl.size(); ++lc) cell_local[static_cast<size_t>(cl[lc])] = static_cast<int>(lc);

    std::vector<int> edge_face(ne, -1);
    std::vector<std::vector<double>> node_values(g.nodes.size());
    for (size_t lc = 0; lc < cl.size(); ++lc) {
      const int c = cl[lc];
      const auto& cn = cells[static_cast<size_t>(c)];
      std::vector<int> local_nodes;
      for (int n : cn) local_nodes.push_back(node_local.at(split_node(c, n)));
      g.cells.push_back(local_nodes);
      g.cell_faces.emplace_back();
      for (size_t k = 0; k < cn.size(); ++k) {
        const auto e = static_cast<size_t>(cell_edges[static_cast<size_t>(c)][k]);
        const int la = local_nodes[k], lb = local_nodes[(k + 1) % cn.size()];
        const bool interior = edge_cells[e].size() == 2 && edge_fracture[e] < 0;
        if (interior && edge_face[e] >= 0) {
          g.face_cells[static_cast<size_t>(edge_face[e])][1] = static_cast<int>(lc);
          g.cell_faces.back().push_back(edge_face[e]);
          continue;
        }
        const int f = g.num_faces();
        g.face_nodes.push_back({la, lb});
        g.face_cells.push_back({static_cast<int>(lc), -1});
        FaceTag tag;
        if (interior) {
          edge_face[e] = f;
        } else if (edge_fracture[e] >= 0) {
          tag.kind = BoundaryKind::Interface;
          tag.side = cell_side(e, c);
          tag.lower = n2d + edge_branch[e];
          fracture_face_copy[{e, c}] = f;
        } else {
          const Point& pa = nodes[static_cast<size_t>(cn[k])];
          const Point& pb = nodes[static_cast<size_t>(cn[(k + 1) % cn.size()])];
          const auto [is_dirichlet, value] = bc.edge(pa, pb);
          tag.kind = is_dirichlet ? BoundaryKind::Dirichlet : BoundaryKind::NeumannExterior;
          tag.value = value;
          if (is_dirichlet) {
            node_values[static_cast<size_t>(la)].push_back(bc.dirichlet_at(pa, pb, pa));
            node_values[static_cast<size_t>(lb)].push_back(bc.dirichlet_at(pa, pb, pb));
          }
        }
        g.face_tags.push_back(tag);
        g.cell_faces.back().push_back(f);
      }
    }
    g.node_dirichlet.assign(g.nodes.size(), std::nullopt);
    for (size_t n = 0; n < g.nodes.size(); ++n)
      if (!node_values[n].empty())
        g.node_dirichlet[n] = std::accumulate(node_values[n].begin(), node_values[n].end(), 0.0) /
                              static_cast<double>(node_values[n].size());
    g.compute_geometry();
  }

  // 1D grids and 2D-1D pairings.
  std::vector<InterfacePairing> pairings;
  std::vector<int> branch_counter(input.fractures.size() + 1, 0);
  for (int b = 0; b < nbranch; ++b) {
    const Branch& br = branches[static_cast<size_t>(b)];
    SubdomainGrid& g = grids[static_cast<size_t>(n2d + b)];
    g.id = n2d + b;
    g.dim = 1;
    g.fracture = br.fracture;
    const std::string fname = static_cast<size_t>(br.fracture) < input.fractures.size() &&
                                      !input.fractures[static_cast<size_t>(br.fracture)].name.empty()
                                  ? input.fractures[static_cast<size_t>(br.fracture)].name
                                  : "fracture" + std::to_string(br.fracture);
    const auto counter_slot = std::min(static_cast<size_t>(br.fracture), input.fractures.size());
    g.name = fname + "_" + std::to_string(branch_counter[counter_slot]++);
    const int m = static_cast<int>(br.edges.size());
    for (int n : br.nodes) g.nodes.push_back(nodes[static_cast<size_t>(n)]);
    for (int k = 0; k < m; ++k) {
      g.cells.push_back({k, k + 1});
      g.cell_faces.push_back({k, k + 1});
    }
    for (int k = 0; k <= m; ++k) {
      g.face_nodes.push_back({k});
      if (k == 0)
        g.face_cells.push_back({0, -1});
      else if (k == m)
        g.face_cells.push_back({m - 1, -1});
      else
        g.face_cells.push_back({k - 1, k});
    }
    g.face_tags.assign(static_cast<size_t>(m + 1), FaceTag{});
    g.node_dirichlet.assign(static_cast<size_t>(m + 1), std::nullopt);
    for (int end : {0, m}) {
      const int n = br.nodes[static_cast<size_t>(end)];
      FaceTag tag;
      if (junction[static_cast<size_t>(n)]) {
        tag.kind = BoundaryKind::Interface;
        tag.side = 0;
        tag.lower = junction_id[static_cast<size_t>(n)];
      } else if (!node_boundary_edges[static_cast<size_t>(n)].empty()) {
        std::vector<double> values;
        for (int e : node_boundary_edges[static_cast<size_t>(n)]) {
          const Point& pa = nodes[static_cast<size_t>(edge_nodes[static_cast<size_t>(e)][0])];
          const Point& pb = nodes[static_cast<size_t>(edge_nodes[static_cast<size_t>(e)][1])];
          if (bc.edge(pa, pb).first) values.push_back(bc.dirichlet_at(pa, pb, nodes[static_cast<size_t>(n)]));
        }
        if (!values.empty()) {
          tag.kind = BoundaryKind::Dirichlet;
          tag.value = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
        } else {
          tag.kind = BoundaryKind::NeumannExterior;
        }
      } else {
        const auto& tip = static_cast<size_t>(br.fracture) < input.fractures.size()
                              ? input.fractures[static_cast<size_t>(br.fracture)].tip_pressure
                              : std::nullopt;
        tag.kind = tip ? BoundaryKind::Dirichlet : BoundaryKind::NeumannExterior;
        tag.value = tip.value_or(0.0);
      }
      g.face_tags[static_cast<size_t>(end)] = tag;
      if (tag.kind == BoundaryKind::Dirichlet) g.node_dirichlet[static_cast<size_t>(end)] = tag.value;
    }
    g.compute_geometry();

    for (int side : {1, -1}) {
      InterfacePairing p;
      p.lower = g.id;
      p.side = side;
      for (int k = 0; k < m; ++k) {
        const auto e = static_cast<size_t>(br.edges[static_cast<size_t>(k)]);
        int found = -1;
        for (int c : edge_cells[e])
          if (cell_side(e, c) == side) found = c;
        if (found < 0) throw TopologyError("fracture cell without a neighbor on side " + std::to_string(side));
        const int comp = cell_comp[static_cast<size_t>(found)];
        if (p.higher < 0) p.higher = comp;
        if (p.higher != comp)
          throw TopologyError("branch " + g.name + " borders several matrix components on one side");
        p.higher_faces.push_back(fracture_face_copy.at({e, found}));
      }
      pairings.push_back(std::move(p));
    }
  }

  // 0D grids and 1D-0D pairings.
  for (size_t n = 0; n < nn; ++n) {
    if (!junction[n]) continue;
    const int id = junction_id[n];
    SubdomainGrid& g = grids[static_cast<size_t>(id)];
    g.id = id;
    g.dim = 0;
    g.name = "intersection_" + std::to_string(id - n2d - nbranch);
    g.nodes.push_back(nodes[n]);
    g.cells.push_back({0});
    g.cell_faces.emplace_back();
    g.compute_geometry();
    for (int b = 0; b < nbranch; ++b) {
      const Branch& br = branches[static_cast<size_t>(b)];
      const int m = static_cast<int>(br.edges.size());
      for (int end : {0, m})
        if (br.nodes[static_cast<size_t>(end)] == static_cast<int>(n)) {
          InterfacePairing p;
          p.lower = id;
          p.higher = n2d + b;
          p.side = 0;
          p.higher_faces = {end};
          pairings.push_back(std::move(p));
        }
    }
  }

  return MixedDimMesh(std::move(grids), std::move(pairings), domain_measure, input);
}

}  // namespace mdfc
