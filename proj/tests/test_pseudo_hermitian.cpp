#include "pshc/pseudo_hermitian.hpp"
#include "test_util.hpp"

using namespace pshc;
using testutil::mat_diff;

TEST_CASE("invariants of a space form") {
  auto s = make_space(2, false);
  Curv4 rw = space_form(s, -6.0);
  InvariantReport inv = invariants(rw);
  CHECK(inv.cm.max_abs() < kExactTol);
  CHECK(inv.scalar == doctest::Approx(-6.0));
  CHECK(mat_diff(inv.ric.m, -1.5 * s->g) < kExactTol);
  CHECK(mat_diff(inv.rho.m, 1.5 * s->omega) < kExactTol);
  CHECK(inv.pseudo_einstein);
  CHECK(inv.reconstruction_residual < kExactTol);
  CHECK(space_form(s, 0.0).max_abs() == 0.0);
}

TEST_CASE("invariants of the zero tensor") {
  auto s = make_space(3, false);
  Curv4 z = Curv4::from(Tensor4(s), {Tag::pair_symmetric, Tag::bianchi_closed, Tag::j_plus});
  InvariantReport inv = invariants(z);
  CHECK(inv.scalar == 0.0);
  CHECK(inv.cm_norm2 == 0.0);
  CHECK(inv.pseudo_einstein);
}

TEST_CASE("invariants reject tensors without the curvature tags") {
  auto s = make_space(2, false);
  Curv4 q = random_curv4(s, {Tag::pair_symmetric}, 3);
  CHECK_THROWS_AS(invariants(q), std::invalid_argument);
}

TEST_CASE("decomposition of a random Kaehler curvature tensor") {
  for (int d = 2; d <= 4; ++d) {
    auto s = make_space(d, false);
    Curv4 rw = random_curv4(s, {Tag::pair_symmetric, Tag::bianchi_closed, Tag::j_plus}, 40 + d);
    InvariantReport inv = invariants(rw);
    CHECK(inv.reconstruction_residual < kTol);
    CHECK(ricci_contraction(inv.cm).m.cwiseAbs().maxCoeff() < kTol);
    CHECK(inv.cm.tags().has(Tag::primitive));
    CHECK_FALSE(inv.pseudo_einstein);
  }
}

TEST_CASE("holomorphic sectional curvature of a space form is constant") {
  auto s = make_space(2, false);
  Curv4 rw = space_form(s, -6.0);
  for (int k = 0; k < 10; ++k) {
    Vec x = Vec::Random(4);
    CHECK(holomorphic_sectional(rw, x) == doctest::Approx(-1.0));
  }
  CurvatureRanges r = sample_curvatures(rw, 200, 5);
  CHECK(r.holomorphic.min == doctest::Approx(-1.0));
  CHECK(r.holomorphic.max == doctest::Approx(-1.0));
  CHECK(r.complex_sectional.max <= 1e-10);
  CurvatureRanges z = sample_curvatures(space_form(s, 0.0), 20, 1);
  CHECK(z.sectional.min == 0.0);
  CHECK(z.complex_sectional.max == 0.0);
}

TEST_CASE("sectional curvature matches a direct evaluation") {
  auto s = make_space(2, false);
  Curv4 rw = random_curv4(s, {Tag::pair_symmetric, Tag::bianchi_closed, Tag::j_plus}, 17);
  Vec x = Vec::Unit(4, 0), y = Vec::Unit(4, 1);
  CHECK(sectional(rw, x, y) == doctest::Approx(rw(0, 1, 0, 1)));
  CHECK(sectional(rw, 2.0 * x, x + 3.0 * y) == doctest::Approx(rw(0, 1, 0, 1)));
}

TEST_CASE("torsion model") {
  for (int d = 2; d <= 3; ++d) {
    auto s = make_space(d, true);
    TorsionModel z = torsion_curvature(s, 0.0);
    CHECK(z.rw.max_abs() == 0.0);
    const double sc = -4.0;
    TorsionModel tm = torsion_curvature(s, sc);
    InvariantReport inv = invariants(tm.rw);
    CHECK(inv.scalar == doctest::Approx(sc));
    CHECK(mat_diff(inv.rho.m, -(sc / (2 * d)) * s->omega) < kExactTol);
    CHECK(max_abs_diff(inv.cm, tm.cm) < kTol);
    CHECK(first_bianchi_residual(assemble_rh(tm.rw), s) < kTol);
    CHECK(tau_conjugation_residual(tm.rw, sc) < kTol);
    CHECK(max_abs_diff(assemble_rh(tm.rw) - tm.rw, torsion_part_closed_form(s)) < kExactTol);
  }
}

TEST_CASE("first Bianchi residual") {
  auto s = make_space(2, false);
  Curv4 rw = random_curv4(s, {Tag::pair_symmetric, Tag::bianchi_closed}, 2);
  CHECK(first_bianchi_residual(assemble_rh(rw), s) < kExactTol);
  Curv4 bad = random_curv4(s, {Tag::pair_symmetric}, 2);
  CHECK(first_bianchi_residual(assemble_rh(bad), s) > 1e-3);
}
