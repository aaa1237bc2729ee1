#include "pshc/lie_models.hpp"
#include "test_util.hpp"

#include <array>

using namespace pshc;

namespace {

using M2 = std::array<std::array<double, 2>, 2>;

M2 mul(const M2& a, const M2& b) {
  M2 c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}
M2 bracket(const M2& a, const M2& b) {
  M2 x = mul(a, b), y = mul(b, a);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) x[i][j] -= y[i][j];
  return x;
}

// Independent su(1,1) computation in the basis
//   K = [[0,1],[-1,0]] / 2 (compact), P1 = [[1,0],[0,-1]] / 2, P2 = [[0,1],[1,0]] / 2,
// with [K,P1] = -P2, [K,P2] = P1, [P1,P2] = -K.  Coordinates are read off by hand.
struct Su11Oracle {
  double r_1212 = 0;
  double s = 0;
  double norm2 = 0;
};

Su11Oracle su11_oracle() {
  const M2 K{{{0, 0.5}, {-0.5, 0}}};
  const M2 P1{{{0.5, 0}, {0, -0.5}}};
  const M2 P2{{{0, 0.5}, {0.5, 0}}};
  auto coord = [&](const M2& x) {
    // x = a K + b P1 + c P2
    return std::array<double, 3>{x[0][1] - x[1][0], x[0][0] - x[1][1], x[0][1] + x[1][0]};
  };
  const std::array<M2, 3> basis{K, P1, P2};
  double ad[3][3][3];
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      auto c = coord(bracket(basis[a], basis[b]));
      for (int r = 0; r < 3; ++r) ad[a][r][b] = c[r];
    }
  double beta[3][3];
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      double t = 0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t += ad[a][i][j] * ad[b][j][i];
      beta[a][b] = t;
    }
  // beta(P1,P1) = beta(P2,P2) = 2, so e1 = P1/sqrt2 and J e1 = [xi*, e1] is a multiple of P2.
  const double e = 1.0 / std::sqrt(beta[1][1]);
  auto kc = coord(bracket(basis[1], basis[2]));
  // R(e1,Je1,e1,Je1) = beta([e1,Je1],[e1,Je1]) with [e1,Je1] = e^2 [P1,P2]
  double r = 0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) r += e * e * kc[a] * beta[a][b] * e * e * kc[b];
  Su11Oracle o;
  o.r_1212 = r;
  // In dimension 2: ric = R(e1,Je1,e1,Je1) g, s = 2R, |R|^2 = (1/8) * 4 R^2.
  o.s = 2 * r;
  o.norm2 = 0.5 * r * r;
  return o;
}

}  // namespace

TEST_CASE("su(1,1) normalization oracle") {
  Su11Oracle o = su11_oracle();
  CHECK(o.r_1212 == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(o.s == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(o.norm2 == doctest::Approx(0.125).epsilon(1e-14));

  LieModel m = build_model(Family::su_pq, {1, 1});
  Curv4 rw = model_curvature(m);
  CHECK(m.d == 1);
  CHECK(std::abs(rw(0, 1, 0, 1) - o.r_1212) < 1e-10);
  CHECK(std::abs(ricci_contraction(rw).m.trace() - o.s) < 1e-10);
  CHECK(std::abs(norm2(rw) - o.norm2) < 1e-10);
  CHECK(std::abs(c0_prime(rw) - 0.5) < 1e-10);
  CHECK(std::abs(kappa(rw) + 0.5) < 1e-10);
}

TEST_CASE("model structure") {
  LieModel m = build_model(Family::su_pq, {2, 1});
  CHECK(m.d == 2);
  CHECK(m.dim_l + m.dim_p == 8);
  CHECK(m.dim_p == 4);
  ModelDiagnostics dg = diagnose(m);
  CHECK(dg.complex_structure < kTol);
  CHECK(dg.bracket_lp < kTol);
  CHECK(dg.bracket_pp < kTol);
  CHECK(dg.frame_orthonormality < kTol);
  CHECK(dg.min_beta_p > 0);
  CHECK(dg.max_beta_l < 0);
  CHECK(build_model(Family::sp_p_R, {2}).d == 3);
  CHECK(build_model(Family::so_star_2p, {4}).d == 6);

  LieModel h = build_model(Family::heisenberg, {3});
  CHECK(h.flat);
  CHECK(model_curvature(h).max_abs() == 0.0);
  CHECK_FALSE(closed_form(Family::heisenberg, {3}));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(build_model(Family::su_pq, {0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(build_model(Family::so_p_2, {2}), std::invalid_argument);
  CHECK_THROWS_AS(build_model(Family::so_star_2p, {2}), std::invalid_argument);
  CHECK_THROWS_AS(build_model(Family::sp_p_R, {1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(parse_family("e6"), std::invalid_argument);
  CHECK(parse_family("so_p_2") == Family::so_p_2);
}

TEST_CASE("model curvature tensors") {
  Curv4 su21 = model_curvature(build_model(Family::su_pq, {2, 1}));
  CHECK(invariants(su21).cm_norm2 < 1e-18);
  CHECK(max_abs_diff(su21, space_form(su21.space(), ricci_contraction(su21).m.trace())) < kTol);

  Curv4 so32 = model_curvature(build_model(Family::so_p_2, {3}));
  CHECK(bianchi_map(so32).max_abs() < kTol);
  CHECK(j_project(so32, -1).max_abs() < kTol);

  Curv4 su22 = model_curvature(build_model(Family::su_pq, {2, 2}));
  InvariantReport inv = invariants(su22);
  CHECK(inv.pseudo_einstein);
  CHECK(inv.cm_norm2 > 1e-3);
}

TEST_CASE("rigidity constants against the closed forms") {
  struct Row {
    Family f;
    std::vector<int> p;
    double c0;
    double k;
  };
  const std::vector<Row> rows{{Family::su_pq, {2, 1}, 1.0 / 3, -1.0 / 3},
                              {Family::so_p_2, {3}, 7.0 / 18, -1.0 / 3},
                              {Family::so_p_2, {4}, 5.0 / 16, -0.25},
                              {Family::sp_p_R, {2}, 0.25 + 5.0 / 36, -1.0 / 3}};
  for (const auto& r : rows) {
    Curv4 rw = model_curvature(build_model(r.f, r.p));
    CHECK(c0_prime(rw) == doctest::Approx(r.c0).epsilon(1e-8));
    CHECK(kappa(rw) == doctest::Approx(r.k).epsilon(1e-8));
    auto cf = closed_form(r.f, r.p);
    REQUIRE(cf);
    CHECK(cf->c0_prime == doctest::Approx(r.c0));
    CHECK(cf->kappa == doctest::Approx(r.k));
  }
}

TEST_CASE("lemma tensor") {
  auto s = make_space(2, false);
  Curv4 sf = space_form(s, -6.0);
  CHECK(std::abs(c0_constant(sf)) < kExactTol);
  CHECK(parallel_q_tensor(sf).max_abs() < kExactTol);

  Curv4 su22 = model_curvature(build_model(Family::su_pq, {2, 2}));
  CHECK(c0_constant(su22) > 0);
  Curv4 q = parallel_q_tensor(su22);
  CHECK(std::abs(scalar_product(q, primitive_part(su22))) < kTol);

  Curv4 so32 = model_curvature(build_model(Family::so_p_2, {3}));
  Mat c = ricci_contraction(parallel_q_tensor(so32)).m;
  c -= (c.trace() / c.rows()) * Mat::Identity(c.rows(), c.cols());
  CHECK(c.cwiseAbs().maxCoeff() < kTol);
}

TEST_CASE("holonomy commutant") {
  CHECK(holonomy_commutant_dim(model_curvature(build_model(Family::su_pq, {2, 2}))) == 2);
  CHECK(holonomy_commutant_dim(model_curvature(build_model(Family::so_p_2, {3}))) == 2);
}
