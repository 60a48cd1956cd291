#include "mdfc/disc.hpp"
#include "mdfc/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace mdfc;
using linalg::DenseMatrix;
using linalg::SparseMatrix;
using linalg::Vector;

namespace {

const Rectangle kUnit{0.0, 0.0, 1.0, 1.0};

GridKind grid_for(Method m) { return m == Method::TPFA ? GridKind::CartesianQuads : GridKind::StructuredTriangles; }

MixedDimMesh linear_square(Method m, int n) {
  BoundarySpec bc;
  bc.left = bc.right = bc.bottom = bc.top = SideCondition::pressure(0.5, -1.0, 0.25);
  return build_structured_mesh(kUnit, n, n, grid_for(m), {}, bc);
}

MixedDimMesh column(Method m, int n) {
  FractureSpec f;
  f.fractures.push_back({"cut", {{0.5, 0.0}, {0.5, 1.0}}, std::nullopt});
  BoundarySpec bc;
  bc.left = SideCondition::pressure(1.0);
  bc.right = SideCondition::pressure(0.0);
  return build_structured_mesh(kUnit, n, n, grid_for(m), f, bc);
}

MixedDimMesh middle_strip(Method m, int n) {
  FractureSpec f;
  f.fractures.push_back({"a", {{0.25, 0.0}, {0.25, 1.0}}, std::nullopt});
  f.fractures.push_back({"b", {{0.75, 0.0}, {0.75, 1.0}}, std::nullopt});
  BoundarySpec bc;
  bc.left = SideCondition::pressure(1.0);
  bc.right = SideCondition::pressure(0.0);
  return build_structured_mesh(kUnit, n, n, grid_for(m), f, bc);
}

double hat_integral(const SubdomainGrid& g, const BasisFunction& b) {
  double s = 0.0;
  for (const BasisPiece& pc : b.pieces) s += 0.5 * (pc.v0 + pc.v1) * g.face_areas[static_cast<size_t>(pc.entity)];
  return s;
}

double min_nonzero_eigenvalue(const SparseMatrix& a) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es{DenseMatrix(a)};
  const double top = es.eigenvalues().cwiseAbs().maxCoeff();
  for (long k = 0; k < es.eigenvalues().size(); ++k)
    if (es.eigenvalues()(k) > 1e-10 * top) return es.eigenvalues()(k);
  return 0.0;
}

}  // namespace

TEST(Tpfa, TwoCellHarmonicFormula) {
  const MixedDimMesh m = build_structured_mesh({0.0, 0.0, 2.0, 1.0}, 2, 1, GridKind::CartesianQuads, {});
  const SubdomainGrid& g = m.subdomain(0);
  const SubdomainOperator op = assemble_tpfa(g, SubdomainParams::uniform(g, 1.0));
  DenseMatrix expect(2, 2);
  expect << 1, -1, -1, 1;
  EXPECT_LE((DenseMatrix(op.stiffness) - expect).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_FALSE(op.has_dirichlet);
}

TEST(Tpfa, FractureTransmissibilities) {
  const MixedDimMesh m = column(Method::TPFA, 4);
  const SubdomainGrid& fr = m.subdomain(2);
  ASSERT_EQ(fr.dim, 1);
  ASSERT_EQ(fr.num_cells(), 4);
  const SubdomainOperator op = assemble_tpfa(fr, SubdomainParams::uniform(fr, 1.0));
  for (int c = 0; c + 1 < 4; ++c) EXPECT_NEAR(op.stiffness.coeff(c, c + 1), -4.0, 1e-14);
}

TEST(Disc, PureNeumannRowsSumToZero) {
  const MixedDimMesh m = build_structured_mesh(kUnit, 4, 4, GridKind::StructuredTriangles, {});
  for (Method method : {Method::TPFA, Method::P1, Method::RT0H}) {
    const SubdomainGrid& g = m.subdomain(0);
    const SubdomainOperator op = assemble_operator(method, g, SubdomainParams::uniform(g, 2.0));
    EXPECT_FALSE(op.has_dirichlet);
    const Vector rs = op.stiffness * Vector::Ones(op.num_dofs());
    EXPECT_LE(rs.cwiseAbs().maxCoeff(), 1e-13) << to_string(method);
    EXPECT_EQ(DenseMatrix(op.stiffness), DenseMatrix(SparseMatrix(op.stiffness.transpose()))) << to_string(method);
  }
}

TEST(P1, UnitRightTriangleStiffness) {
  const MixedDimMesh m = read_mesh_text("NODES\n0 0 0\n1 1 0\n2 0 1\nCELLS\n0 0 1 2\n");
  const SubdomainGrid& g = m.subdomain(0);
  const SubdomainOperator op = assemble_p1(g, SubdomainParams::uniform(g, 1.0));
  DenseMatrix expect(3, 3);
  expect << 1, -0.5, -0.5, -0.5, 0.5, 0, -0.5, 0, 0.5;
  EXPECT_LE((DenseMatrix(op.stiffness) - expect).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(P1, EigenvalueScalesWithKappa) {
  const MixedDimMesh m = build_structured_mesh(kUnit, 4, 4, GridKind::StructuredTriangles, {});
  const SubdomainGrid& g = m.subdomain(0);
  const double e1 = min_nonzero_eigenvalue(assemble_p1(g, SubdomainParams::uniform(g, 1.0)).stiffness);
  const double e10 = min_nonzero_eigenvalue(assemble_p1(g, SubdomainParams::uniform(g, 10.0)).stiffness);
  EXPECT_NEAR(e10 / e1, 10.0, 1e-9);
}

TEST(Disc, RefinementEigenvalueBound) {
  for (Method method : {Method::TPFA, Method::P1, Method::RT0H}) {
    double prev = 0.0;
    for (int n : {4, 8, 16}) {
      const MixedDimMesh m = build_structured_mesh(kUnit, n, n, grid_for(method), {});
      const SubdomainGrid& g = m.subdomain(0);
      const double e = min_nonzero_eigenvalue(assemble_operator(method, g, SubdomainParams::uniform(g, 1.0)).stiffness);
      if (prev > 0.0) EXPECT_GE(e, prev / 8.0) << to_string(method) << " n=" << n;
      prev = e;
    }
  }
}

TEST(Disc, Errors) {
  const MixedDimMesh quads = build_structured_mesh(kUnit, 2, 2, GridKind::CartesianQuads, {});
  const SubdomainGrid& q = quads.subdomain(0);
  EXPECT_THROW(assemble_p1(q, SubdomainParams::uniform(q, 1.0)), NonSimplicialGrid);
  EXPECT_THROW(assemble_rt0h(q, SubdomainParams::uniform(q, 1.0)), NonSimplicialGrid);
  EXPECT_THROW(assemble_tpfa(q, SubdomainParams::uniform(q, 0.0)), std::invalid_argument);

  SubdomainGrid bad = q;
  bad.cell_centers[0] = bad.face_centers[static_cast<size_t>(bad.cell_faces[0][0])];
  EXPECT_THROW(assemble_tpfa(bad, SubdomainParams::uniform(bad, 1.0)), ZeroDistance);

  EXPECT_THROW(parse_method("mpfa"), std::invalid_argument);
  EXPECT_EQ(parse_method("rt0h"), Method::RT0H);
}

TEST(Disc, PatchExactness) {
  for (Method method : {Method::TPFA, Method::P1, Method::RT0H}) {
    const MixedDimMesh m = linear_square(method, 6);
    const SubdomainGrid& g = m.subdomain(0);
    const SubdomainParams params = SubdomainParams::uniform(g, 3.0);
    const SubdomainOperator op = assemble_operator(method, g, params);
    ASSERT_TRUE(op.has_dirichlet);
    const LocalSolution s = apply_solution_operator(op, Vector(), Vector());
    auto exact = [](const Point& x) { return 0.5 - x.x() + 0.25 * x.y(); };
    if (method == Method::P1) {
      // nodal values
      const Vector cp = op.cell_pressures(s.p);
      for (int c = 0; c < g.num_cells(); ++c) EXPECT_NEAR(cp(c), exact(g.cell_centers[static_cast<size_t>(c)]), 1e-12);
    } else {
      const Vector cp = op.cell_pressures(s.p);
      for (int c = 0; c < g.num_cells(); ++c) EXPECT_NEAR(cp(c), exact(g.cell_centers[static_cast<size_t>(c)]), 1e-10);
      const FluxReport r = recover_fluxes(g, params, op, s.p, Vector(), Vector());
      for (int c = 0; c < g.num_cells(); ++c) {
        double sum = 0.0;
        const auto& faces = g.cell_faces[static_cast<size_t>(c)];
        for (size_t k = 0; k < faces.size(); ++k) {
          const int f = faces[k];
          Point n = g.face_normals[static_cast<size_t>(f)];
          if (g.face_cells[static_cast<size_t>(f)][0] != c) n = -n;
          // q = -kappa grad p = -3 (-1, 0.25)
          const double expect = 3.0 * (n.x() - 0.25 * n.y()) * g.face_areas[static_cast<size_t>(f)];
          EXPECT_NEAR(r.cell_face_flux[static_cast<size_t>(c)][k], expect, 1e-10);
          sum += r.cell_face_flux[static_cast<size_t>(c)][k];
        }
        EXPECT_NEAR(sum, 0.0, 1e-12);
      }
    }
  }
}

TEST(Disc, ZeroDataGivesZero) {
  BoundarySpec bc;
  bc.left = bc.right = SideCondition::pressure(0.0);
  for (Method method : {Method::TPFA, Method::P1, Method::RT0H}) {
    const MixedDimMesh m = column(method, 4);
    const SubdomainGrid& g = m.subdomain(0);
    SubdomainGrid hom = g;
    for (auto& t : hom.face_tags)
      if (t.kind == BoundaryKind::Dirichlet) t.value = 0.0;
    for (auto& v : hom.node_dirichlet)
      if (v) v = 0.0;
    const SubdomainOperator op = assemble_operator(method, hom, SubdomainParams::uniform(hom, 1.0));
    const LocalSolution s = apply_solution_operator(op, Vector(), Vector());
    EXPECT_EQ(s.p.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(s.t.cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(Disc, QuasiOneDimensionalHalfSquare) {
  const double q = 0.7;
  for (Method method : {Method::TPFA, Method::P1, Method::RT0H}) {
    const MixedDimMesh m = column(method, 8);
    const SubdomainGrid& g = m.subdomain(0);
    ASSERT_NEAR(g.cell_centers[0].x(), method == Method::TPFA ? 1.0 / 16 : 1.0 / 12, 1e-12);
    const double kappa = 2.0;
    const SubdomainOperator op = assemble_operator(method, g, SubdomainParams::uniform(g, kappa));
    Vector theta(op.num_trace());
    for (int b = 0; b < op.num_trace(); ++b) theta(b) = q * hat_integral(g, op.trace.functions[static_cast<size_t>(b)]);
    const LocalSolution s = apply_solution_operator(op, Vector(), theta);
    const Vector cp = op.cell_pressures(s.p);
    for (int c = 0; c < g.num_cells(); ++c)
      EXPECT_NEAR(cp(c), 1.0 - q / kappa * g.cell_centers[static_cast<size_t>(c)].x(), 1e-12) << to_string(method);
    for (long b = 0; b < s.t.size(); ++b) EXPECT_NEAR(s.t(b), 1.0 - q / kappa * 0.5, 1e-12) << to_string(method);
  }
}

TEST(Disc, PureNeumannThroughflowZeroMean) {
  const double q = 1.5;
  for (Method method : {Method::TPFA, Method::P1, Method::RT0H}) {
    const MixedDimMesh m = middle_strip(method, 8);
    int mid = -1;
    for (const auto& g : m.subdomains())
      if (g.dim == 2 && !g.has_dirichlet()) mid = g.id;
    ASSERT_GE(mid, 0);
    const SubdomainGrid& g = m.subdomain(mid);
    const SubdomainOperator op = assemble_operator(method, g, SubdomainParams::uniform(g, 1.0));
    Vector theta(op.num_trace());
    for (int b = 0; b < op.num_trace(); ++b) {
      const auto& fn = op.trace.functions[static_cast<size_t>(b)];
      const double x = g.face_centers[static_cast<size_t>(fn.pieces.front().entity)].x();
      theta(b) = (x > 0.5 ? q : -q) * hat_integral(g, fn);
    }
    const LocalSolution s = apply_solution_operator(op, Vector(), theta);
    EXPECT_NEAR(op.mean_weights.dot(s.p), 0.0, 1e-12);
    const Vector cp = op.cell_pressures(s.p);
    const double shift = cp(0) + q * g.cell_centers[0].x();
    for (int c = 0; c < g.num_cells(); ++c)
      EXPECT_NEAR(cp(c), shift - q * g.cell_centers[static_cast<size_t>(c)].x(), 1e-11) << to_string(method);

    Vector unbalanced = theta;
    unbalanced(0) += 0.1;
    EXPECT_THROW(apply_solution_operator(op, Vector(), unbalanced), IncompatibleData);
  }
}

TEST(Rt0h, SingleTriangleCompatibleNeumann) {
  const MixedDimMesh m = read_mesh_text(
      "NODES\n0 0 0\n1 1 0\n2 0 1\nCELLS\n0 0 1 2\nBOUNDARY\n0 1 neumann 0.5\n1 2 neumann -1\n2 0 neumann 0.25\n");
  const SubdomainGrid& g = m.subdomain(0);
  double out = 0.0;
  for (int f = 0; f < g.num_faces(); ++f) out += g.face_tags[static_cast<size_t>(f)].value * g.face_areas[static_cast<size_t>(f)];
  SubdomainParams p = SubdomainParams::uniform(g, 1.0);
  p.source = {-out};
  const SubdomainOperator op = assemble_rt0h(g, p);
  Vector psi(1);
  psi(0) = -out;
  const LocalSolution s = apply_solution_operator(op, psi, Vector());
  EXPECT_NEAR(op.mean_weights.dot(s.p), 0.0, 1e-13);
  const FluxReport r = recover_fluxes(g, p, op, s.p, psi, Vector());
  double sum = psi(0);
  for (double v : r.cell_face_flux[0]) sum += v;
  EXPECT_NEAR(sum, 0.0, 1e-13);
  for (int f = 0; f < 3; ++f) {
    const int k = static_cast<int>(std::find(g.cell_faces[0].begin(), g.cell_faces[0].end(), f) - g.cell_faces[0].begin());
    EXPECT_NEAR(r.cell_face_flux[0][static_cast<size_t>(k)], g.face_tags[static_cast<size_t>(f)].value * g.face_areas[static_cast<size_t>(f)], 1e-13);
  }
  psi(0) += 1.0;
  EXPECT_THROW(apply_solution_operator(op, psi, Vector()), IncompatibleData);
}

TEST(Disc, Reciprocity) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (Method method : {Method::TPFA, Method::P1, Method::RT0H}) {
    const MixedDimMesh m = column(method, 6);
    SubdomainGrid g = m.subdomain(0);
    for (auto& t : g.face_tags)
      if (t.kind == BoundaryKind::Dirichlet) t.value = 0.0;
    for (auto& v : g.node_dirichlet)
      if (v) v = 0.0;
    const SubdomainOperator op = assemble_operator(method, g, SubdomainParams::uniform(g, 1.7));
    const LocalSolver solver(op);
    auto random = [&](long n) {
      Vector v(n);
      for (long k = 0; k < n; ++k) v(k) = u(rng);
      return v;
    };
    const Vector psi1 = random(g.num_cells()), psi2 = random(g.num_cells());
    const Vector th1 = random(op.num_trace()), th2 = random(op.num_trace());
    const LocalSolution s1 = apply_solution_operator(op, solver, psi1, th1);
    const LocalSolution s2 = apply_solution_operator(op, solver, psi2, th2);
    const double a = s1.p.dot(op.load(psi2, th2));
    const double b = s2.p.dot(op.load(psi1, th1));
    EXPECT_NEAR(a, b, 1e-12 * std::max(1.0, std::abs(a))) << to_string(method);
  }
}

TEST(Disc, LocalConservationWithSources) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (Method method : {Method::TPFA, Method::RT0H}) {
    const MixedDimMesh m = column(method, 8);
    const SubdomainGrid& g = m.subdomain(0);
    SubdomainParams p = SubdomainParams::uniform(g, 1.0);
    for (auto& k : p.kappa) k = std::exp(u(rng));
    Vector psi(g.num_cells());
    for (int c = 0; c < g.num_cells(); ++c) psi(c) = u(rng) * g.cell_volumes[static_cast<size_t>(c)];
    Vector theta(assemble_operator(method, g, p).num_trace());
    for (long b = 0; b < theta.size(); ++b) theta(b) = u(rng) * 0.1;
    const SubdomainOperator op = assemble_operator(method, g, p);
    const LocalSolution s = apply_solution_operator(op, psi, theta);
    const FluxReport r = recover_fluxes(g, p, op, s.p, psi, theta);
    double scale = 0.0;
    for (const auto& faces : r.cell_face_flux)
      for (double v : faces) scale = std::max(scale, std::abs(v));
    for (int c = 0; c < g.num_cells(); ++c) {
      double sum = psi(c);
      for (double v : r.cell_face_flux[static_cast<size_t>(c)]) sum += v;
      EXPECT_LE(std::abs(sum), 1e-10 * scale) << to_string(method) << " cell " << c;
    }
  }
}

TEST(PointOperator, PointAndBlocking) {
  FractureSpec f;
  f.fractures.push_back({"h", {{0.25, 0.5}, {0.75, 0.5}}, std::nullopt});
  f.fractures.push_back({"v", {{0.5, 0.25}, {0.5, 0.75}}, std::nullopt});
  const MixedDimMesh m = build_structured_mesh(kUnit, 8, 8, GridKind::CartesianQuads, f);
  for (const auto& g : m.subdomains()) {
    if (g.dim == 0) {
      const SubdomainOperator op = assemble_point_or_blocking(g, SubdomainParams::uniform(g, 1.0));
      EXPECT_EQ(op.kind, OperatorKind::POINT);
      EXPECT_EQ(op.num_dofs(), 1);
      EXPECT_EQ(op.stiffness.nonZeros(), 0);
    }
    if (g.dim == 1) {
      const SubdomainOperator op = assemble_point_or_blocking(g, SubdomainParams::uniform(g, 0.0), {0.0, 0.1, 0.25});
      EXPECT_EQ(op.kind, OperatorKind::BLOCKING);
      EXPECT_EQ(op.num_dofs(), 2);
      EXPECT_EQ(op.stiffness.nonZeros(), 0);
      EXPECT_NEAR(op.source_injection.sum(), g.num_cells(), 1e-14);
    }
  }
}

TEST(Tpfa, PolylineCornerTransmissibility) {
  FractureSpec f;
  f.fractures.push_back({"corner", {{0.75, 0.0}, {0.75, 0.25}, {1.0, 0.25}}, std::nullopt});
  const MixedDimMesh m = build_structured_mesh(kUnit, 16, 16, GridKind::CartesianQuads, f);
  for (const auto& g : m.subdomains()) {
    if (g.dim != 1) continue;
    ASSERT_EQ(g.num_cells(), 8);
    const SubdomainOperator op = assemble_tpfa(g, SubdomainParams::uniform(g, 1.0));
    for (int c = 0; c + 1 < 8; ++c) EXPECT_NEAR(op.stiffness.coeff(c, c + 1), -16.0, 1e-12) << c;
  }
}
