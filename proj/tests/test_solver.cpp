#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "biwave/check.hpp"
#include "biwave/initial_data.hpp"
#include "biwave/solver.hpp"
#include "biwave/stepper.hpp"

using namespace biwave;

namespace {

using Matrix = std::vector<std::vector<double>>;

Matrix multiply(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size();
  Matrix c(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

/// Gaussian elimination with partial pivoting.
std::vector<double> dense_solve(Matrix a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    std::swap(b[col], b[piv]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

/// Substep matrix on a 1D mesh, built from the hand-written tridiagonal stiffness.
Matrix dense_substep(const Mesh& m, double tau, double stab, const ScalarField& lambda) {
  const std::size_t n = m.num_nodes();
  const double h = m.cell_h();
  Matrix K(n, std::vector<double>(n, 0.0)), Minv(n, std::vector<double>(n, 0.0));
  std::vector<double> beta(n, h);
  beta.front() = beta.back() = h / 2.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    K[i][i] += 1.0 / h;
    K[i + 1][i + 1] += 1.0 / h;
    K[i][i + 1] -= 1.0 / h;
    K[i + 1][i] -= 1.0 / h;
  }
  for (std::size_t i = 0; i < n; ++i) Minv[i][i] = 1.0 / beta[i];
  const Matrix kmk = multiply(K, multiply(Minv, K));
  const Matrix kmkmk = multiply(kmk, multiply(Minv, K));
  Matrix a(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      a[i][j] = 0.5 * tau * (kmk[i][j] + stab * kmkmk[i][j]);
      if (i == j) a[i][j] += beta[i] / tau - 0.5 * tau * beta[i] * lambda[i];
    }
  return a;
}

double relative_distance(const VectorField& a, const VectorField& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t z = 0; z < a.size(); ++z) {
    num += dot(a[z] - b[z], a[z] - b[z]);
    den += dot(b[z], b[z]);
  }
  return std::sqrt(num / den);
}

Mesh interval(std::size_t n) { return build_mesh(MeshKind::Interval1D, n, Box::cube(-1.0, 1.0)); }

}  // namespace

TEST(Projection, Cases) {
  VectorField u(4);
  u[0] = Vec3{0, 0, 2};
  u[1] = Vec3{3, 4, 0};
  u[2] = Vec3{1, 0, 0};
  u[3] = Vec3{-1e-3, 0, 0};
  const VectorField p = project_to_sphere(u);
  EXPECT_EQ(p[0], (Vec3{0, 0, 1}));
  EXPECT_NEAR(p[1][0], 0.6, 1e-15);
  EXPECT_NEAR(p[1][1], 0.8, 1e-15);
  EXPECT_EQ(p[2], (Vec3{1, 0, 0}));
  EXPECT_EQ(p[3], (Vec3{-1, 0, 0}));
  EXPECT_TRUE(p.sphere_valued());
}

TEST(Projection, DegenerateNodeIsReported) {
  VectorField u(3, Vec3{0, 1, 0});
  u[1] = Vec3{1e-12, 0, 0};
  try {
    project_to_sphere(u);
    FAIL() << "expected DegenerateNode";
  } catch (const DegenerateNode& e) {
    ASSERT_EQ(e.nodes().size(), 1u);
    EXPECT_EQ(e.nodes()[0], 1u);
  }
  u[1] = Vec3{};
  EXPECT_THROW(project_to_sphere(u), DegenerateNode);
}

TEST(SubstepOperator, Symmetric) {
  for (MeshKind kind : kAllMeshKinds) {
    const Mesh m = build_mesh(kind, kind == MeshKind::Type2Tetrahedra3D ? 3 : 6,
                              Box::cube(-1.0, 1.0));
    CheckRng rng(5, static_cast<std::uint64_t>(kind));
    SchemeParams p;
    p.tau = 0.01;
    p.variant = SchemeVariant::stabilized(1.0, 0.3);
    const ScalarField lambda = random_scalar_field(m, rng);
    const SubstepOperator op(m, p, lambda);
    const VectorField x = random_vector_field(m, rng);
    const VectorField y = random_vector_field(m, rng);
    double xay = 0.0, yax = 0.0, scale = 0.0;
    const VectorField ax = op.apply(x), ay = op.apply(y);
    for (std::size_t z = 0; z < m.num_nodes(); ++z) {
      xay += dot(x[z], ay[z]);
      yax += dot(y[z], ax[z]);
      scale += std::abs(dot(x[z], ay[z]));
    }
    EXPECT_LE(std::abs(xay - yax), 1e-13 * scale) << to_string(kind);
  }
}

TEST(SubstepSolve, MatchesDenseOracle) {
  const Mesh m = interval(8);
  CheckRng rng(11, 0);
  for (const SchemeVariant& v : {SchemeVariant::dissipative(), SchemeVariant::stabilized(2.0, 0.5)}) {
    SchemeParams p;
    p.variant = v;
    p.tau = 0.02;
    for (int trial = 0; trial < 20; ++trial) {
      const ScalarField lambda = random_scalar_field(m, rng);
      const VectorField rhs = random_vector_field(m, rng);
      const VectorField x = solve_substep_system(m, lambda, rhs, p, VectorField(m));
      const Matrix a = dense_substep(m, p.tau, p.stabilization_weight(m), lambda);
      VectorField ref(m);
      for (int k = 0; k < 3; ++k) {
        const ScalarField rk = component(rhs, k);
        const auto col = dense_solve(a, rk.values());
        for (std::size_t z = 0; z < m.num_nodes(); ++z) ref[z][k] = col[z];
      }
      EXPECT_LE(relative_distance(x, ref), 1e-10) << to_string(v.kind) << " trial " << trial;
    }
  }
}

TEST(SubstepSolve, DirichletMatchesEliminatedDenseSystem) {
  const Mesh m = interval(8);
  CheckRng rng(13, 0);
  SchemeParams p;
  p.tau = 0.02;
  VectorField bc(m, Vec3{0, 0, 1});
  bc[8] = Vec3{1, 0, 0};
  p.bc = BoundaryCondition::dirichlet(bc);
  const ScalarField lambda = random_scalar_field(m, rng);
  const VectorField rhs = random_vector_field(m, rng);
  const VectorField x = solve_substep_system(m, lambda, rhs, p, random_vector_field(m, rng));
  EXPECT_EQ(x[0], bc[0]);
  EXPECT_EQ(x[8], bc[8]);

  const Matrix a = dense_substep(m, p.tau, 0.0, lambda);
  const std::size_t n = m.num_nodes();
  Matrix ai(n - 2, std::vector<double>(n - 2));
  for (std::size_t i = 1; i + 1 < n; ++i)
    for (std::size_t j = 1; j + 1 < n; ++j) ai[i - 1][j - 1] = a[i][j];
  for (int k = 0; k < 3; ++k) {
    std::vector<double> b(n - 2);
    for (std::size_t i = 1; i + 1 < n; ++i)
      b[i - 1] = rhs[i][k] - a[i][0] * bc[0][k] - a[i][n - 1] * bc[n - 1][k];
    const auto xi = dense_solve(ai, b);
    for (std::size_t i = 1; i + 1 < n; ++i) EXPECT_NEAR(x[i][k], xi[i - 1], 1e-10 * (1.0 + std::abs(xi[i - 1])));
  }
}

TEST(SubstepSolve, ComponentsAreDecoupled) {
  const Mesh m = build_mesh(MeshKind::Type1Triangles2D, 8, Box::cube(-1.0, 1.0));
  CheckRng rng(17, 0);
  SchemeParams p;
  p.tau = 0.01;
  const ScalarField lambda = random_scalar_field(m, rng);
  const VectorField rhs = random_vector_field(m, rng);
  const VectorField coupled = solve_substep_system(m, lambda, rhs, p, VectorField(m));
  for (int k = 0; k < 3; ++k) {
    VectorField single(m);
    for (std::size_t z = 0; z < m.num_nodes(); ++z) single[z][k] = rhs[z][k];
    const VectorField x = solve_substep_system(m, lambda, single, p, VectorField(m));
    for (std::size_t z = 0; z < m.num_nodes(); ++z) {
      EXPECT_EQ(x[z][k], coupled[z][k]);
      EXPECT_EQ(x[z][(k + 1) % 3], 0.0);
      EXPECT_EQ(x[z][(k + 2) % 3], 0.0);
    }
  }
}

TEST(SubstepSolve, IndefiniteOperatorFails) {
  const Mesh m = interval(8);
  SchemeParams p;
  p.tau = 0.1;
  const ScalarField lambda(m, 10.0 / (p.tau * p.tau));
  EXPECT_THROW(solve_substep_system(m, lambda, VectorField(m, Vec3{1, 1, 1}), p, VectorField(m)),
               LinearSolveFailure);
}

TEST(SubstepSolve, IterationCapFails) {
  const Mesh m = build_mesh(MeshKind::Type1Triangles2D, 16, Box::cube(-1.0, 1.0));
  CheckRng rng(19, 0);
  SchemeParams p;
  p.tau = 0.01;
  p.linear_max_iters = 2;
  EXPECT_THROW(solve_substep_system(m, ScalarField(m), random_vector_field(m, rng), p,
                                    VectorField(m)),
               LinearSolveFailure);
}

TEST(LinearSubstep, ReproducesStationaryState) {
  const Mesh m = build_mesh(MeshKind::Type1Triangles2D, 6, Box::cube(-1.0, 1.0));
  SchemeParams p;
  p.tau = 0.01;
  SimState s;
  s.u_curr = s.u_prev = VectorField(m, Vec3{0, 0, 1});
  s.v_curr = VectorField(m);
  s.w_curr = VectorField(m);
  const VectorField u = linear_substep(m, s, ScalarField(m), p);
  EXPECT_LE(max_nodal_distance(u, s.u_curr), 1e-14);
}

TEST(FixedPoint, StationaryStateConvergesImmediately) {
  const Mesh m = interval(16);
  SchemeParams p;
  p.tau = 0.01;
  const SimState s = init_state(m, VectorField(m, Vec3{1, 0, 0}), VectorField(m), p);
  const FixedPointResult r = fixed_point_step(m, s, p);
  EXPECT_TRUE(r.report.converged);
  EXPECT_EQ(r.report.iterations, 1);
  EXPECT_EQ(r.u_next, s.u_curr);
}

TEST(FixedPoint, LimitIsAFixedPointOfTheSubstep) {
  const Mesh m = interval(64);
  const InitialData d = builtin_initial(InitialKind::Smooth1D, m, 1);
  SchemeParams p;
  p.tau = m.cell_h() / 10.0;
  SimState s = init_state(m, d.u0, d.v0, p);
  s = advance(m, s, p).state;
  const FixedPointResult r = fixed_point_step(m, s, p);
  ASSERT_TRUE(r.report.converged);
  EXPECT_LE(r.report.iterations, 50);
  const ScalarField lambda = lambda_multiplier(m, s, r.u_next, p);
  const VectorField again = project_to_sphere(linear_substep(m, s, lambda, p, r.u_next));
  EXPECT_LE(max_nodal_distance(again, r.u_next), p.fp_tolerance);
  for (std::size_t i = 1; i < r.report.increments.size(); ++i)
    EXPECT_LT(r.report.increments[i], r.report.increments[i - 1]);
}

TEST(FixedPoint, NonConvergenceCarriesIncrements) {
  const Mesh m = interval(64);
  const InitialData d = builtin_initial(InitialKind::Smooth1D, m, 1);
  SchemeParams p;
  p.tau = m.cell_h() / 10.0;
  p.fp_max_iters = 2;
  const SimState s = init_state(m, d.u0, d.v0, p);
  try {
    fixed_point_step(m, s, p);
    FAIL() << "expected NonConvergence";
  } catch (const NonConvergence& e) {
    ASSERT_EQ(e.increment_tail().size(), 2u);
    EXPECT_GT(e.increment_tail().back(), p.fp_tolerance);
  }
}

TEST(FixedPoint, OversizedStepOnBubbleFails) {
  const Mesh m = build_mesh(MeshKind::Type1Triangles2D, 16, Box::cube(-1.0, 1.0));
  const InitialData d = builtin_initial(InitialKind::Bubble2D, m);
  SchemeParams p;
  p.tau = 10.0;
  const SimState s = init_state(m, d.u0, d.v0, p);
  EXPECT_THROW(fixed_point_step(m, s, p), SolverError);
}

TEST(FixedPoint, DirichletValuesImposed) {
  const Mesh m = build_mesh(MeshKind::Type1Triangles2D, 8, Box::cube(-1.0, 1.0));
  const InitialData d = builtin_initial(InitialKind::Singular2D, m);
  SchemeParams p;
  p.tau = 1e-3;
  p.bc = BoundaryCondition::dirichlet(d.u0);
  const SimState s = init_state(m, d.u0, d.v0, p);
  const FixedPointResult r = fixed_point_step(m, s, p);
  for (std::size_t z = 0; z < m.num_nodes(); ++z) {
    if (m.boundary_node(z)) {
      EXPECT_EQ(r.u_next[z], d.u0[z]);
    }
    EXPECT_NEAR(norm(r.u_next[z]), 1.0, 1e-14);
  }
}
