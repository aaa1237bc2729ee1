#include "pshc/curvature_algebra.hpp"
#include "test_util.hpp"

using namespace pshc;
using testutil::mat_diff;

TEST_CASE("frame structure for d = 1 without torsion") {
  auto s = make_space(1, false);
  Mat J(2, 2);
  J << 0, -1, 1, 0;
  CHECK(mat_diff(s->J, J) == 0.0);
  CHECK(s->omega(0, 1) == doctest::Approx(1.0));
  CHECK_FALSE(s->has_torsion());
}

TEST_CASE("space invariants") {
  for (int d = 1; d <= 4; ++d)
    for (bool t : {false, true}) {
      auto s = make_space(d, t);
      Mat I = Mat::Identity(2 * d, 2 * d);
      CHECK(mat_diff(s->J * s->J, -I) < kExactTol);
      CHECK(mat_diff(s->J.transpose() * s->g * s->J, s->g) < kExactTol);
      CHECK(mat_diff(s->omega, -s->omega.transpose()) < kExactTol);
      // omega(X,Y) = g(JX,Y)
      CHECK(mat_diff(s->omega, (s->J).transpose() * s->g) < kExactTol);
      if (t) {
        const Mat& tau = *s->tau;
        CHECK(mat_diff(tau * s->J + s->J * tau, Mat::Zero(2 * d, 2 * d)) < kExactTol);
        CHECK(std::abs(tau.trace()) < kExactTol);
        CHECK((tau.transpose() * tau).trace() == doctest::Approx(2.0 * d));
        CHECK(mat_diff(*s->B, s->B->transpose()) < kExactTol);
      }
    }
}

TEST_CASE("complex frame") {
  auto s1 = make_space(1, false);
  auto f1 = complexify(s1);
  CHECK(std::abs(cmetric(s1, f1.Z[0], f1.Z[0].conjugate()) - 1.0) < kExactTol);
  CHECK(std::abs(f1.Z[0](0) - 1.0 / std::sqrt(2.0)) < kExactTol);

  auto s = make_space(2, false);
  auto f = complexify(s);
  CHECK(std::abs(cmetric(s, f.Z[0], f.Z[1])) < kExactTol);
  CHECK(std::abs(cmetric(s, f.Z[0], f.Z[0])) < kExactTol);
  CVec jz = s->J.cast<std::complex<double>>() * f.Z[0];
  CHECK((jz - std::complex<double>(0, 1) * f.Z[0]).cwiseAbs().maxCoeff() < kExactTol);
}

TEST_CASE("bilinear forms validate their symmetry") {
  auto s = make_space(2, false);
  Mat m = Mat::Random(4, 4);
  CHECK_THROWS_AS(Bil2(s, m, Symmetry::symmetric), std::invalid_argument);
  CHECK_THROWS_AS(Bil2(s, Mat::Zero(3, 3), Symmetry::general), std::invalid_argument);
  CHECK_NOTHROW(Bil2(s, m + m.transpose(), Symmetry::symmetric));
  CHECK_THROWS_AS(torsion_form_A(s), std::invalid_argument);
}

TEST_CASE("random tensors are deterministic and carry their tags") {
  auto s = make_space(2, true);
  Curv4 a = random_curv4(s, {Tag::pair_symmetric}, 7);
  Curv4 b = random_curv4(s, {Tag::pair_symmetric}, 7);
  CHECK(a.data() == b.data());

  Curv4 q = random_curv4(s, {Tag::pair_symmetric, Tag::bianchi_closed}, 1);
  CHECK(bianchi_map(q).max_abs() < kExactTol);

  Curv4 r = random_curv4(s, {Tag::pair_symmetric, Tag::j_plus}, 3);
  const Mat& J = s->J;
  double worst = 0;
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y)
      for (int z = 0; z < 4; ++z)
        for (int w = 0; w < 4; ++w) {
          double v = 0;
          for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) v += J(i, x) * J(j, y) * r(i, j, z, w);
          worst = std::max(worst, std::abs(v - r(x, y, z, w)));
        }
  CHECK(worst < kExactTol);

  CHECK(random_curv4(s, {Tag::pair_symmetric, Tag::primitive, Tag::tau_minus}, 5).tags().has(Tag::primitive));
  CHECK_THROWS_AS(random_curv4(s, {Tag::j_plus, Tag::j_minus}, 1), std::invalid_argument);
  CHECK_THROWS_AS(random_curv4(make_space(2, false), {Tag::tau_plus}, 1), std::invalid_argument);
}

TEST_CASE("tag claims are checked") {
  auto s = make_space(2, false);
  Curv4 q = random_curv4(s, {Tag::pair_symmetric}, 11);
  CHECK_THROWS_AS(Curv4::from(q, {Tag::bianchi_closed}), std::invalid_argument);
  Tensor4 bad(s);
  bad(0, 1, 2, 3) = 1.0;
  CHECK_THROWS_AS(Curv4::from(bad, {}), std::invalid_argument);
  CHECK(Curv4::detect(q).tags().has(Tag::pair_symmetric));
}

TEST_CASE("slot permutation and endomorphism action") {
  auto s = make_space(2, false);
  Curv4 q = random_curv4(s, {Tag::pair_symmetric}, 2);
  Tensor4 p = q.permuted(2, 3, 0, 1);
  CHECK(max_abs_diff(p, q) < kExactTol);
  Tensor4 t = q.act_first(Mat::Identity(4, 4));
  CHECK(max_abs_diff(t, q) < kExactTol);
  CHECK(wedge_pairs(4).size() == 6);
  CHECK(wedge_index(4, 1, 3) == 4);
}
