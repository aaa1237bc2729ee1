#include "pshc/msy_identities.hpp"
#include "test_util.hpp"

using namespace pshc;
using testutil::mat_diff;

TEST_CASE("canonical Q traces and contractions") {
  for (int d = 2; d <= 4; ++d) {
    auto s = make_space(d, true);
    const double dd = d;
    Curv4 sm = canonical_Q(s, QVariant::gg_minus);
    Curv4 sp = canonical_Q(s, QVariant::gg_plus_primitive);
    Curv4 pm = canonical_Q(s, QVariant::gg_minus_tau_plus);
    Curv4 pp = canonical_Q(s, QVariant::ic_primitive_tau_minus);
    CHECK(std::abs(trace_hat(sm) - 2 * dd * (dd - 1)) < kExactTol);
    CHECK(std::abs(trace_hat(sp) - 2 * (dd * dd - 1)) < kExactTol);
    CHECK(std::abs(trace_hat(pm) - dd * (dd - 1)) < kExactTol);
    CHECK(std::abs(trace_hat(pp) - (dd - 1) * (dd + 2) / 4) < kExactTol);
    CHECK(mat_diff(ricci_contraction(sm).m, 2 * (dd - 1) * s->g) < kExactTol);
    CHECK(mat_diff(ricci_contraction(sp).m, 2 * dd * (1 - 1 / (dd * dd)) * s->g) < kExactTol);
    CHECK(mat_diff(ricci_contraction(pm).m, (dd - 1) * s->g) < kExactTol);
    CHECK(mat_diff(ricci_contraction(pp).m, (dd - 1) * (dd + 2) / (4 * dd) * s->g) < kExactTol);
  }
  auto s3 = make_space(3, false);
  CHECK(trace_hat(canonical_Q(s3, QVariant::gg_minus)) == doctest::Approx(12.0));
  CHECK(trace_hat(canonical_Q(make_space(2, true), QVariant::ic_primitive_tau_minus)) == doctest::Approx(1.0));
  CHECK(mat_diff(ricci_contraction(canonical_Q(make_space(2, false), QVariant::gg_plus_primitive)).m,
                 3.0 * Mat::Identity(4, 4)) < kExactTol);
  CHECK_THROWS_AS(canonical_Q(s3, QVariant::gg_minus_tau_plus), std::invalid_argument);
  CHECK_THROWS_AS(canonical_Q(s3, QVariant::parallel_cm), std::invalid_argument);
  CHECK_THROWS_AS(canonical_Q(make_space(1, false), QVariant::gg_plus_primitive), std::invalid_argument);
}

TEST_CASE("constrained random Q") {
  auto s = make_space(3, true);
  Curv4 qm = random_constrained_Q(s, QSubspace::minus, true, 4);
  CHECK(j_project(qm, +1).max_abs() < kTol);
  Mat c = ricci_contraction(qm).m;
  CHECK(mat_diff(c, (c.trace() / 6) * s->g) < kTol);
  Curv4 qp = random_constrained_Q(s, QSubspace::plus_primitive, false, 5);
  CHECK(j_project(qp, -1).max_abs() < kTol);
  CHECK(hat_form(qp, fundamental_form(s)).m.cwiseAbs().maxCoeff() < kTol);
}

TEST_CASE("pullbacks") {
  auto s = make_space(2, true);
  MapDatum id;
  id.source = s;
  id.target = s;
  id.dphi = Mat::Identity(4, 4);
  Bil2 t = random_bil2(s, Symmetry::symmetric, 1);
  CHECK(mat_diff(pullback2(t, id).m, t.m) < kExactTol);
  Curv4 q = random_curv4(s, {Tag::pair_symmetric}, 2);
  CHECK(max_abs_diff(pullback4(q, id), q) < kExactTol);

  MapDatum scaled = id;
  scaled.dphi *= 1.5;
  CHECK(mat_diff(pullback2(metric(s), scaled).m, 2.25 * s->g) < kExactTol);

  auto tgt = make_space(3, true);
  for (double f : {0.5, 1.0, 2.0}) {
    MapDatum m = cr_map_datum(s, tgt, f, 9);
    CHECK(mat_diff(pullback2(metric(tgt), m).m, f * s->g) < kTol);
    CHECK(mat_diff(tgt->J * m.dphi, m.dphi * s->J) < kTol);
    const double sp = -6.0;
    Curv4 p = pullback4(space_form(tgt, sp), m);
    Curv4 expect = (f * f * sp / 12.0) * canonical_tensors(s).Ic;
    CHECK(max_abs_diff(p, expect) < kTol);
  }
  CHECK_THROWS_AS(cr_map_datum(tgt, s, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(pullback2(t, cr_map_datum(s, tgt, 1.0, 1)), std::invalid_argument);
}

TEST_CASE("curvature terms") {
  auto s = make_space(2, true);
  MapDatum m = cr_map_datum(s, s, 1.0, 3);
  Curv4 zero = Curv4::from(Tensor4(s), {Tag::pair_symmetric});
  MsyTermReport z = curvature_terms(zero, m);
  CHECK(z.r20 == 0.0);
  CHECK(z.r11 == 0.0);
  CHECK(z.hbk == 0.0);
  CHECK(z.k == 0.0);

  const double sc = -6.0;
  MsyTermReport t = curvature_terms(space_form(s, sc), m);
  CHECK(t.hbk == doctest::Approx(sc / 2));
  CHECK((0.5 * t.hbk - t.k) == doctest::Approx(0.25 * 4.0 / 6.0 * sc));
}

TEST_CASE("codifferential of a CR datum") {
  auto s = make_space(2, true);
  auto tgt = make_space(3, true);
  MapDatum m = cr_map_datum(s, tgt, 1.3, 17);
  Vec delta = codifferential(m);
  CHECK((tgt->J * delta - 2.0 * m.dphi_xi).cwiseAbs().maxCoeff() < kTol);
  EValued n = covariant_derivative(m);
  for (std::size_t k = 0; k < n.size(); ++k)
    CHECK(mat_diff(n[k] - n[k].transpose(), -m.dphi_xi(static_cast<Eigen::Index>(k)) * s->omega) < kTol);
}

TEST_CASE("pointwise identity suite") {
  SuiteReport r = identity_suite(2, 3, 3, 5, 4);
  for (const auto& x : r.results) {
    INFO(x.name);
    CHECK(x.pass);
  }
  SuiteReport neg = identity_suite(2, 3, 3, 5, 4, true);
  for (const auto& x : neg.results) {
    INFO(x.name);
    CHECK(x.max_residual >= 1e-3);
  }
  CHECK_THROWS_AS(identity_suite(1, 1, 3, 1, 1), std::invalid_argument);
}

TEST_CASE("operator relations") {
  for (int d = 2; d <= 4; ++d) {
    auto s = make_space(d, true);
    CHECK(operator_relation_residual(s, 3, 100 + d) < kExactTol);
    CHECK(torsion_relation_residual(s, 3, 200 + d) < kExactTol);
    CHECK(operator_relation_residual(s, 3, 100 + d, true) > 1e-3);
  }
}

TEST_CASE("scaled residual") {
  CHECK(scaled_residual(1.0, 1.0) == 0.0);
  CHECK(scaled_residual(0.0, 0.5) == doctest::Approx(0.5));
  CHECK(scaled_residual(100.0, 101.0) == doctest::Approx(1.0 / 101));
}
