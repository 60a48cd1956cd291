#include "mdfc/disc.hpp"
#include "mdfc/errors.hpp"
#include "mdfc/mortar.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace mdfc;
using linalg::SparseMatrix;
using linalg::Vector;

namespace {

const Rectangle kUnit{0.0, 0.0, 1.0, 1.0};

MixedDimMesh column(int n, GridKind kind) {
  FractureSpec f;
  f.fractures.push_back({"cut", {{0.5, 0.0}, {0.5, 1.0}}, std::nullopt});
  BoundarySpec bc;
  bc.left = SideCondition::pressure(1.0);
  bc.right = SideCondition::pressure(0.0);
  return build_structured_mesh(kUnit, n, n, kind, f, bc);
}

MixedDimMesh crossing(int n) {
  FractureSpec f;
  f.fractures.push_back({"h", {{0.25, 0.5}, {0.75, 0.5}}, std::nullopt});
  f.fractures.push_back({"v", {{0.5, 0.25}, {0.5, 0.75}}, std::nullopt});
  return build_structured_mesh(kUnit, n, n, GridKind::CartesianQuads, f);
}

struct Layouts {
  std::vector<BasisLayout> trace, pressure;
};

Layouts layouts(const MixedDimMesh& m, Method method) {
  Layouts l;
  for (const auto& g : m.subdomains()) {
    const SubdomainParams p = SubdomainParams::uniform(g, 1.0);
    const SubdomainOperator op = g.dim == 0 ? assemble_point_or_blocking(g, p) : assemble_operator(method, g, p);
    l.trace.push_back(op.trace);
    l.pressure.push_back(op.pressure);
  }
  return l;
}

std::vector<ProjectionPair> projections(const MixedDimMesh& m, const std::vector<MortarInterface>& mortars,
                                        Method method) {
  const Layouts l = layouts(m, method);
  return assemble_projections(m, mortars, l.trace, l.pressure);
}

double overlap(double a0, double a1, double b0, double b1) { return std::max(0.0, std::min(a1, b1) - std::max(a0, b0)); }

}  // namespace

TEST(MortarGrid, CoarseningRatio) {
  const MixedDimMesh m = column(8, GridKind::CartesianQuads);
  const auto coarse = build_mortar_grids(m, 0.75);
  ASSERT_EQ(coarse.size(), 2u);
  for (const auto& g : coarse) {
    ASSERT_EQ(g.num_cells(), 6);
    for (double v : g.measures) EXPECT_NEAR(v, 1.0 / 6.0, 1e-15);
    EXPECT_NEAR(g.measure(), 1.0, 1e-12);
  }
  EXPECT_EQ(coarse[0].breaks, coarse[1].breaks);
  EXPECT_EQ(coarse[0].side, -coarse[1].side);

  const auto matching = build_mortar_grids(m, 1.0);
  const std::vector<double> s = m.subdomain(matching[0].lower).arclength();
  ASSERT_EQ(matching[0].num_cells(), 8);
  for (size_t k = 0; k < s.size(); ++k) EXPECT_NEAR(matching[0].breaks[k], s[k], 1e-15);

  EXPECT_EQ(build_mortar_grids(m, 1e-6)[0].num_cells(), 1);
  EXPECT_EQ(build_mortar_grids(m, 2.0)[0].num_cells(), 16);
  EXPECT_THROW(build_mortar_grids(m, 0.0), std::invalid_argument);
  EXPECT_THROW(build_mortar_grids(m, -1.0), std::invalid_argument);
}

TEST(MortarGrid, PointInterfaces) {
  const MixedDimMesh m = crossing(8);
  int points = 0;
  for (const auto& g : build_mortar_grids(m, 0.75))
    if (g.lower_dim == 0) {
      ++points;
      ASSERT_EQ(g.num_cells(), 1);
      EXPECT_EQ(g.measures[0], 1.0);
      EXPECT_EQ(g.side, 0);
    }
  EXPECT_EQ(points, 4);
}

TEST(Projection, MatchingTpfaIsDiagonal) {
  const MixedDimMesh m = column(4, GridKind::CartesianQuads);
  const auto mortars = build_mortar_grids(m, 1.0);
  for (const auto& pp : projections(m, mortars, Method::TPFA)) {
    ASSERT_EQ(pp.higher_overlap.rows(), 4);
    ASSERT_EQ(pp.higher_overlap.nonZeros(), 4);
    for (int k = 0; k < pp.higher_overlap.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(pp.higher_overlap, k); it; ++it) EXPECT_NEAR(it.value(), 0.25, 1e-15);
    const Eigen::MatrixXd pi = Eigen::MatrixXd(pp.pi_trace());
    // one trace function per face; each mortar cell sees exactly one with weight 1
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(pi.row(k).sum(), 1.0, 1e-15);
    EXPECT_NEAR((pi * pi.transpose() - Eigen::MatrixXd::Identity(4, 4)).norm(), 0.0, 1e-15);
  }
}

TEST(Projection, CoarseCellOverTwoFaces) {
  const MixedDimMesh m = column(4, GridKind::CartesianQuads);
  const auto mortars = build_mortar_grids(m, 0.5);
  const auto pps = projections(m, mortars, Method::TPFA);
  const Layouts l = layouts(m, Method::TPFA);
  for (const auto& mi : mortars) {
    const ProjectionPair& pp = pps[static_cast<size_t>(mi.id)];
    const Eigen::MatrixXd pn = Eigen::MatrixXd(pp.pi_neumann());
    const SubdomainGrid& hi = m.subdomain(mi.higher);
    const auto& trace = l.trace[static_cast<size_t>(mi.higher)];
    for (int k = 0; k < mi.num_cells(); ++k)
      for (size_t b = 0; b < trace.functions.size(); ++b) {
        // interval oracle along the fracture (y coordinate)
        const int f = trace.functions[b].pieces.front().entity;
        const auto& fn = hi.face_nodes[static_cast<size_t>(f)];
        const double y0 = std::min(hi.nodes[static_cast<size_t>(fn[0])].y(), hi.nodes[static_cast<size_t>(fn[1])].y());
        const double y1 = std::max(hi.nodes[static_cast<size_t>(fn[0])].y(), hi.nodes[static_cast<size_t>(fn[1])].y());
        const double s0 = std::min(mi.segments[static_cast<size_t>(k)][0].y(), mi.segments[static_cast<size_t>(k)][1].y());
        const double s1 = std::max(mi.segments[static_cast<size_t>(k)][0].y(), mi.segments[static_cast<size_t>(k)][1].y());
        EXPECT_NEAR(pn(static_cast<long>(b), k), -overlap(y0, y1, s0, s1), 1e-15);
      }
    for (int k = 0; k < 2; ++k) {
      int hits = 0;
      for (long b = 0; b < pn.rows(); ++b)
        if (pn(b, k) != 0.0) {
          EXPECT_NEAR(pn(b, k), -0.25, 1e-15);
          ++hits;
        }
      EXPECT_EQ(hits, 2);
    }
  }
}

TEST(Projection, P1HatInsideOneMortarCell) {
  const MixedDimMesh m = column(4, GridKind::StructuredTriangles);
  const auto mortars = build_mortar_grids(m, 0.25);
  const auto pps = projections(m, mortars, Method::P1);
  const Layouts l = layouts(m, Method::P1);
  const MortarInterface& mi = mortars[0];
  ASSERT_EQ(mi.num_cells(), 1);
  const auto& trace = l.trace[static_cast<size_t>(mi.higher)];
  const SubdomainGrid& hi = m.subdomain(mi.higher);
  int interior_hats = 0;
  for (size_t b = 0; b < trace.functions.size(); ++b) {
    const auto& fnc = trace.functions[b];
    if (fnc.pieces.size() != 2) continue;
    ++interior_hats;
    // composite Simpson quadrature of the hat over its pieces
    double quad = 0.0;
    for (const BasisPiece& pc : fnc.pieces) {
      const double len = hi.face_areas[static_cast<size_t>(pc.entity)];
      quad += len / 6.0 * (pc.v0 + 4.0 * 0.5 * (pc.v0 + pc.v1) + pc.v1);
    }
    EXPECT_NEAR(quad, 0.25, 1e-15);
    EXPECT_NEAR(pps[0].higher_overlap.coeff(0, static_cast<long>(b)), 0.25, 1e-15);
  }
  EXPECT_EQ(interior_hats, 3);
}

TEST(Projection, DualityAndConstants) {
  for (Method method : {Method::TPFA, Method::P1, Method::RT0H})
    for (double ratio : {1.0, 0.5, 0.75}) {
      const MixedDimMesh m = column(8, method == Method::TPFA ? GridKind::CartesianQuads : GridKind::StructuredTriangles);
      const auto mortars = build_mortar_grids(m, ratio);
      for (const ProjectionPair& pp : projections(m, mortars, method)) {
        const SparseMatrix pn_t = SparseMatrix(pp.pi_neumann().transpose());
        const SparseMatrix minus_b = -pp.higher_overlap;
        EXPECT_EQ(Eigen::MatrixXd(pn_t), Eigen::MatrixXd(minus_b));
        const Eigen::MatrixXd dual = pp.mass.asDiagonal() * Eigen::MatrixXd(pp.pi_trace()) + Eigen::MatrixXd(pn_t);
        EXPECT_LE(dual.cwiseAbs().maxCoeff(), 1e-15);

        const Vector ones = Vector::Ones(pp.higher_overlap.cols());
        const Vector pt = pp.pi_trace() * ones;
        for (long k = 0; k < pt.size(); ++k) EXPECT_NEAR(pt(k), 1.0, 1e-12);

        Vector lam(pp.mass.size());
        for (long k = 0; k < lam.size(); ++k) lam(k) = std::sin(1.0 + k);
        const double integrated = lam.dot(pp.mass);
        const double injected = -(pp.pi_neumann() * lam).sum();
        EXPECT_NEAR(integrated, injected, 1e-12);
      }
    }
}

TEST(Projection, GeometryMismatch) {
  const MixedDimMesh m = column(4, GridKind::CartesianQuads);
  const auto mortars = build_mortar_grids(m, 1.0);
  Layouts l = layouts(m, Method::TPFA);
  l.trace[static_cast<size_t>(mortars[0].higher)].functions.pop_back();
  EXPECT_THROW(assemble_projections(m, mortars, l.trace, l.pressure), GeometryMismatch);
}

TEST(Divergence, ImmersedFractureSinkRow) {
  FractureSpec f;
  f.fractures.push_back({"slit", {{0.25, 0.5}, {0.75, 0.5}}, std::nullopt});
  const MixedDimMesh m = build_structured_mesh(kUnit, 4, 4, GridKind::CartesianQuads, f);
  const auto mortars = build_mortar_grids(m, 0.5);
  ASSERT_EQ(mortars.size(), 2u);
  ASSERT_EQ(mortars[0].num_cells(), 1);
  const DivergenceOperator d = assemble_divergence(m, mortars);
  ASSERT_EQ(d.num_neumann_rows, 2);
  ASSERT_EQ(d.num_sink_rows, 1);
  const Eigen::MatrixXd dm = Eigen::MatrixXd(d.matrix);
  EXPECT_EQ(dm.row(2), Eigen::RowVector2d(-1.0, -1.0));
  EXPECT_EQ(dm.topRows(2), Eigen::Matrix2d::Identity());
  EXPECT_EQ(d.matrix * Vector::Zero(2), Vector::Zero(3));
}

TEST(Divergence, PointSumsFourBranches) {
  const MixedDimMesh m = crossing(8);
  const auto mortars = build_mortar_grids(m, 0.75);
  const DivergenceOperator d = assemble_divergence(m, mortars);
  const Eigen::MatrixXd dm = Eigen::MatrixXd(d.matrix);
  for (size_t r = 0; r < d.rows.size(); ++r) {
    if (!d.rows[r].sink || m.subdomain(d.rows[r].subdomain).dim != 0) continue;
    int count = 0;
    for (const auto& mi : mortars)
      if (mi.lower_dim == 0) {
        EXPECT_EQ(dm(static_cast<long>(r), mortar_offsets(mortars)[static_cast<size_t>(mi.id)]), -1.0);
        ++count;
      }
    EXPECT_EQ(count, 4);
    EXPECT_EQ(dm.row(static_cast<long>(r)).sum(), -4.0);
    EXPECT_EQ(dm.row(static_cast<long>(r)).cwiseAbs().sum(), 4.0);
  }
  // every mortar unknown: +1 once in a Neumann row, -1 once in a sink row
  for (long c = 0; c < dm.cols(); ++c) {
    EXPECT_EQ(dm.col(c).head(d.num_neumann_rows).sum(), 1.0);
    EXPECT_EQ(dm.col(c).head(d.num_neumann_rows).cwiseAbs().sum(), 1.0);
    EXPECT_EQ(dm.col(c).tail(d.num_sink_rows).sum(), -1.0);
    EXPECT_EQ(dm.col(c).tail(d.num_sink_rows).cwiseAbs().sum(), 1.0);
  }
}

TEST(PerpMass, Entries) {
  const MixedDimMesh m = column(4, GridKind::CartesianQuads);
  const auto mortars = build_mortar_grids(m, 1.0);
  const Vector k1 = assemble_perp_mass(mortars, {1.0, 1.0});
  EXPECT_DOUBLE_EQ(k1(0), 0.25);
  const Vector k4 = assemble_perp_mass(mortars, {1e4, 1e4});
  EXPECT_NEAR(k4(0), 2.5e-5, 1e-20);
  const auto single = build_mortar_grids(m, 0.25);
  EXPECT_DOUBLE_EQ(assemble_perp_mass(single, {1.0, 1.0})(0), 1.0);
  const MixedDimMesh x = crossing(8);
  const auto xm = build_mortar_grids(x, 0.75);
  std::vector<double> kp(xm.size(), 1.0);
  const Vector kx = assemble_perp_mass(xm, kp);
  for (const auto& mi : xm)
    if (mi.lower_dim == 0) EXPECT_EQ(kx(mortar_offsets(xm)[static_cast<size_t>(mi.id)]), 1.0);
  EXPECT_THROW(assemble_perp_mass(mortars, {0.0, 1.0}), DegenerateKappaPerp);
  EXPECT_THROW(assemble_perp_mass(mortars, {1.0, -2.0}), DegenerateKappaPerp);
}
