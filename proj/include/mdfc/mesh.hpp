#pragma once

/// @file mesh.hpp
/// @brief Mixed-dimensional conforming meshes: 2D matrix grids split along
/// fractures, 1D fracture branch grids and 0D intersection points.
///
/// Conventions:
///  - Subdomain ids are dense: 2D components first (ordered by their first
///    cell), then 1D branches (fracture order, then position along the
///    fracture), then 0D intersections (ordered by base node index).
///  - 2D cells are counter-clockwise node loops. Face f of a 2D grid has
///    nodes face_nodes[f] = {a, b} in the order of the cell that created it,
///    and its normal points out of face_cells[f][0].
///  - 1D grids are chains: cell c joins nodes c and c+1, face k is node k
///    (measure 1). Arclength increases along the chain.
///  - A 0D grid has a single node, a single cell of unit weight and no faces.

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace mdfc {

using Point = Eigen::Vector2d;

enum class BoundaryKind { Interior, Dirichlet, NeumannExterior, Interface };

/// Boundary condition attached to a face.
///  - Dirichlet: value is the pressure at the face center.
///  - NeumannExterior: value is the outward flux density (integrated flux is
///    value * face area).
///  - Interface: side is +1/-1 for 2D-1D couplings and 0 for 1D-0D couplings;
///    lower is the id of the lower-dimensional subdomain.
struct FaceTag {
  BoundaryKind kind = BoundaryKind::Interior;
  double value = 0.0;
  int side = 0;
  int lower = -1;
};

struct SubdomainGrid {
  int id = -1;
  int dim = 2;
  std::string name;
  /// Source fracture index for 1D grids, -1 otherwise.
  int fracture = -1;

  std::vector<Point> nodes;
  std::vector<std::vector<int>> cells;       // node lists
  std::vector<std::vector<int>> cell_faces;  // face lists, cell_faces[c][k] joins cells[c][k], cells[c][k+1]
  std::vector<std::vector<int>> face_nodes;
  std::vector<std::array<int, 2>> face_cells;  // second entry -1 on boundary faces
  std::vector<double> face_areas;
  std::vector<Point> face_centers;
  std::vector<Point> face_normals;  // unit, outward from face_cells[f][0]
  std::vector<double> cell_volumes;
  std::vector<Point> cell_centers;
  std::vector<FaceTag> face_tags;
  /// Dirichlet pressure at nodes lying on a Dirichlet boundary (nodal methods).
  std::vector<std::optional<double>> node_dirichlet;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_cells() const { return static_cast<int>(cells.size()); }
  int num_faces() const { return static_cast<int>(face_nodes.size()); }
  bool is_boundary_face(int f) const { return face_cells[f][1] < 0; }
  bool is_simplicial() const;
  bool has_dirichlet() const;
  double measure() const;
  /// Cumulative arclength at chain nodes (1D grids only).
  std::vector<double> arclength() const;
  /// Recompute face/cell geometry from nodes and connectivity.
  void compute_geometry();
};

/// Geometric coincidence between a lower-dimensional subdomain and one side
/// of a higher-dimensional neighbor. higher_faces[c] is the face of the higher
/// grid coincident with lower cell c (for a 0D lower: the branch end face).
struct InterfacePairing {
  int lower = -1;
  int higher = -1;
  int side = 0;
  std::vector<int> higher_faces;
};

struct Rectangle {
  double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
  double area() const { return (x1 - x0) * (y1 - y0); }
};

enum class GridKind { CartesianQuads, StructuredTriangles };

/// One fracture: a polyline of axis-aligned segments (builder) or a chain of
/// tagged mesh edges (file import).
struct Fracture {
  std::string name;
  std::vector<Point> polyline;
  /// Immersed tips get zero-flux Neumann closure unless a pressure is given.
  std::optional<double> tip_pressure;
};

struct FractureSpec {
  std::vector<Fracture> fractures;
  /// Number of segments, and the domain sides touched by each segment
  /// (bit 0 left, 1 right, 2 bottom, 3 top).
  std::vector<std::pair<int, unsigned>> segment_boundary_flags(const Rectangle& domain) const;
};

/// Condition of one rectangle side: Dirichlet p = a + b x + c y, or outward
/// Neumann flux density a.
struct SideCondition {
  bool dirichlet = false;
  double a = 0.0, b = 0.0, c = 0.0;
  double value_at(const Point& p) const { return a + b * p.x() + c * p.y(); }
  static SideCondition pressure(double a, double b = 0.0, double c = 0.0) { return {true, a, b, c}; }
  static SideCondition flux(double density) { return {false, density, 0.0, 0.0}; }
};

struct BoundarySpec {
  SideCondition left = SideCondition::flux(0.0);
  SideCondition right = SideCondition::flux(0.0);
  SideCondition bottom = SideCondition::flux(0.0);
  SideCondition top = SideCondition::flux(0.0);
};

/// Unsplit planar mesh with fracture edge tags; the common input of the
/// structured generator and the file reader.
struct PlanarMesh {
  struct TaggedEdge {
    int a = -1, b = -1;
    int fracture = -1;
  };
  struct BoundaryEdge {
    int a = -1, b = -1;
    bool dirichlet = false;
    double value = 0.0;
  };
  std::vector<Point> nodes;
  std::vector<std::vector<int>> cells;
  std::vector<TaggedEdge> fracture_edges;
  std::vector<Fracture> fractures;  // indexed by TaggedEdge::fracture (polyline may be empty)
  /// Explicit boundary conditions; edges not listed are zero-flux Neumann.
  std::vector<BoundaryEdge> boundary;
};

/// Evaluates boundary conditions on boundary edges of a planar mesh.
struct BoundaryEvaluator {
  /// Condition for the edge (a, b): {is_dirichlet, value at edge midpoint}.
  std::function<std::pair<bool, double>(const Point& a, const Point& b)> edge;
  /// Dirichlet value at point p on the Dirichlet edge (a, b).
  std::function<double(const Point& a, const Point& b, const Point& p)> dirichlet_at;
};

class MixedDimMesh {
 public:
  MixedDimMesh() = default;
  MixedDimMesh(std::vector<SubdomainGrid> subdomains, std::vector<InterfacePairing> pairings,
               double domain_measure, PlanarMesh source = {});

  const std::vector<SubdomainGrid>& subdomains() const { return subdomains_; }
  const SubdomainGrid& subdomain(int i) const { return subdomains_.at(static_cast<size_t>(i)); }
  int size() const { return static_cast<int>(subdomains_.size()); }
  int count(int dim) const;

  /// Higher-dimensional neighbors (one entry per neighbor subdomain).
  const std::vector<int>& up_neighbors(int i) const { return up_.at(static_cast<size_t>(i)); }
  const std::vector<int>& down_neighbors(int i) const { return down_.at(static_cast<size_t>(i)); }

  const std::vector<InterfacePairing>& pairings() const { return pairings_; }
  /// Geometric measure of the ambient domain (sum of base cell areas).
  double domain_measure() const { return domain_measure_; }
  const PlanarMesh& source() const { return source_; }

 private:
  std::vector<SubdomainGrid> subdomains_;
  std::vector<InterfacePairing> pairings_;
  std::vector<std::vector<int>> up_, down_;
  double domain_measure_ = 0.0;
  PlanarMesh source_;
};

/// Split a planar mesh along its fracture edges into the mixed-dimensional
/// hierarchy. Nodes where three or more fracture edges meet, or where two
/// different fractures meet, become 0D subdomains.
MixedDimMesh split_planar_mesh(const PlanarMesh& mesh, const BoundaryEvaluator& bc);

/// Structured generator for rectangles with axis-aligned lattice fractures.
/// Throws EmptyDomain for nx*ny == 0 and NonConformingFracture when a
/// segment is not axis-aligned or an endpoint is off the lattice.
MixedDimMesh build_structured_mesh(const Rectangle& domain, int nx, int ny, GridKind kind,
                                   const FractureSpec& fractures, const BoundarySpec& boundary = {});

/// Evaluator that reads per-side conditions of a rectangle.
BoundaryEvaluator rectangle_evaluator(const Rectangle& domain, const BoundarySpec& spec);

/// Evaluator backed by PlanarMesh::boundary (constant value per edge).
BoundaryEvaluator planar_evaluator(const PlanarMesh& mesh);

/// Read the plain-text mesh format (NODES / CELLS / FRACTURE_FACES / BOUNDARY).
/// Throws ParseError with the offending line number.
PlanarMesh parse_planar_mesh(const std::string& text);
MixedDimMesh read_mesh_file(const std::string& path);
MixedDimMesh read_mesh_text(const std::string& text);
/// Serialize a planar mesh in the format read by read_mesh_file.
std::string format_planar_mesh(const PlanarMesh& mesh);
void write_mesh_file(const std::string& path, const PlanarMesh& mesh);

enum class FindingKind {
  NegativeVolume,
  ZeroFaceArea,
  NonUnitNormal,
  VolumeMismatch,
  DanglingInterfaceTag,
  BadPointGrid,
  DimensionMismatch,
  NeighborAsymmetry,
  UncoveredFractureCell,
  DisconnectedFromDirichlet,
};

struct Finding {
  FindingKind kind;
  int subdomain = -1;
  int entity = -1;
  std::string message;
};

struct ValidationReport {
  std::vector<Finding> findings;
  /// Sum of 2D cell volumes (signed areas recomputed from node order).
  double total_volume = 0.0;
  bool ok() const { return findings.empty(); }
  bool contains(FindingKind kind, int subdomain = -1, int entity = -1) const;
};

ValidationReport validate_mesh(const MixedDimMesh& mesh);

const char* to_string(FindingKind kind);

}  // namespace mdfc
