#include "pshc/pseudo_hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace pshc {

namespace {

Scalar max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

InvariantReport invariants(const Curv4& rw, Scalar tol) {
  const auto& s = rw.space();
  for (Tag t : {Tag::pair_symmetric, Tag::bianchi_closed, Tag::j_plus})
    if (!rw.tags().has(t)) throw std::invalid_argument("invariants: missing tag " + tag_name(t));
  const int d = s->d;
  if (d < 2) throw std::invalid_argument("invariants: Chern-Moser split needs d >= 2");

  InvariantReport r;
  Bil2 g = metric(s), w = fundamental_form(s);
  Mat ric = ricci_contraction(rw).m;
  ric = 0.5 * (ric + ric.transpose()).eval();
  r.ric = Bil2(s, ric, Symmetry::symmetric);
  r.scalar = ric.trace();
  Mat rho = -hat_form(rw, w).m;
  rho = 0.5 * (rho - rho.transpose()).eval();
  r.rho = Bil2(s, rho, Symmetry::antisymmetric);
  r.ric0 = Bil2(s, ric - (r.scalar / (2.0 * d)) * s->g, Symmetry::symmetric);
  r.rho0 = primitive_form(r.rho);

  CanonicalTensors ct = canonical_tensors(s);
  Tensor4 scalar_part = (r.scalar / (d * (d + 1.0))) * Tensor4(ct.Ic);
  Tensor4 ricci_part = (1.0 / (d + 2.0)) *
                       (0.5 * (kulkarni(r.ric0, g) - kulkarni(r.rho0, w)) - sym_product(r.rho0, w));
  Tensor4 cm = rw - scalar_part - ricci_part;
  Scalar scale = std::max<Scalar>(1.0, rw.max_abs());
  // Tag check with a tolerance relative to the input scale.
  r.cm = Curv4::from(cm, {Tag::pair_symmetric, Tag::bianchi_closed, Tag::j_plus, Tag::primitive},
                     tol * scale);
  if (max_abs(ricci_contraction(r.cm).m) > tol * scale)
    throw std::runtime_error("invariants: Chern-Moser part is not Ricci-free");
  r.cm_norm2 = norm2(r.cm);
  r.reconstruction_residual = max_abs_diff(scalar_part + ricci_part + r.cm, rw);
  r.pseudo_einstein = max_abs(r.rho0.m) <= tol * scale && max_abs(r.ric0.m) <= tol * scale;
  return r;
}

bool is_pseudo_einstein(const Curv4& rw, Scalar tol) {
  const auto& s = rw.space();
  Mat rho = -hat_form(rw, fundamental_form(s)).m;
  Scalar sc = ricci_contraction(rw).m.trace();
  Scalar scale = std::max<Scalar>(1.0, rw.max_abs());
  return max_abs(rho + (sc / (2.0 * s->d)) * s->omega) <= tol * scale;
}

Curv4 space_form(const SpacePtr& s, Scalar scalar) {
  const int d = s->d;
  return (scalar / (d * (d + 1.0))) * canonical_tensors(s).Ic;
}

TorsionModel torsion_curvature(const SpacePtr& s, Scalar scalar) {
  if (!s->has_torsion()) throw std::invalid_argument("torsion_curvature: space has no torsion");
  if (s->d < 2) throw std::invalid_argument("torsion_curvature: needs d >= 2");
  const Scalar d = s->d;
  CanonicalTensors ct = canonical_tensors(s);
  // |tau|^2 = 2d, so the 2d/|tau|^2 weight is 1.
  Curv4 rw = (scalar / (d * d)) * (ct.Ic + *ct.T);
  Curv4 cm = (scalar / (d * d)) * ((1.0 / (d + 1.0)) * ct.Ic0 + *ct.T0);
  rw.set_tags_unchecked({Tag::pair_symmetric, Tag::bianchi_closed, Tag::j_plus});
  return {rw, cm};
}

Tensor4 assemble_rh(const Curv4& rw) {
  const auto& s = rw.space();
  if (!s->has_torsion()) return rw;
  Bil2 g = metric(s), w = fundamental_form(s);
  Bil2 A = torsion_form_A(s), B = torsion_form_B(s);
  return rw - 0.5 * (kulkarni(w, A) - kulkarni(g, B));
}

Tensor4 torsion_part_closed_form(const SpacePtr& s) {
  if (!s->has_torsion()) throw std::invalid_argument("torsion_part_closed_form: no torsion");
  const int n = s->n;
  const Mat& J = s->J;
  const Mat& tau = *s->tau;
  Mat Jt = J * tau;
  Tensor4 t(s);
  auto wedge = [](const Vec& u, const Vec& v) -> Mat {
    return u * v.transpose() - v * u.transpose();
  };
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      Mat m = wedge(tau.col(x), J.col(y)) - wedge(tau.col(y), J.col(x)) - wedge(Jt.col(x), Mat::Identity(n, n).col(y)) +
              wedge(Jt.col(y), Mat::Identity(n, n).col(x));
      m *= -0.5;
      for (int z = 0; z < n; ++z)
        for (int w = 0; w < n; ++w) t(x, y, z, w) = m(z, w);
    }
  return t;
}

Scalar first_bianchi_residual(const Tensor4& rh, const SpacePtr& s) {
  Tensor4 b = bianchi_map(rh);
  if (s->has_torsion()) {
    const Mat& w = s->omega;
    const Mat& A = *s->A;
    const int n = s->n;
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z)
          for (int v = 0; v < n; ++v)
            b(x, y, z, v) -= w(x, y) * A(z, v) + w(z, x) * A(y, v) + w(y, z) * A(x, v);
  }
  return b.max_abs();
}

Scalar tau_conjugation_residual(const Curv4& rw, Scalar scalar) {
  const auto& s = rw.space();
  if (!s->has_torsion()) throw std::invalid_argument("tau_conjugation_residual: no torsion");
  const Scalar d = s->d;
  Bil2 w = fundamental_form(s);
  Tensor4 lhs = rw.act_first(*s->tau) - rw;
  Tensor4 rhs = (-scalar / (2.0 * d * d)) * sym_product(w, w);
  return max_abs_diff(lhs, rhs);
}

std::complex<Scalar> ceval(const Tensor4& q, const CVec& a, const CVec& b, const CVec& c,
                           const CVec& d) {
  using C = std::complex<Scalar>;
  const int n = q.dim();
  const std::size_t n3 = static_cast<std::size_t>(n) * n * n;
  std::vector<C> v1(n3, C(0));
  const Scalar* p = q.data().data();
  for (int i = 0; i < n; ++i) {
    C ai = a(i);
    if (ai == C(0)) continue;
    for (std::size_t k = 0; k < n3; ++k) v1[k] += ai * p[i * n3 + k];
  }
  C total(0);
  for (int j = 0; j < n; ++j) {
    if (b(j) == C(0)) continue;
    for (int k = 0; k < n; ++k) {
      if (c(k) == C(0)) continue;
      C acc(0);
      for (int l = 0; l < n; ++l) acc += v1[(static_cast<std::size_t>(j) * n + k) * n + l] * d(l);
      total += b(j) * c(k) * acc;
    }
  }
  return total;
}

Scalar sectional(const Tensor4& rw, const Vec& x, const Vec& y) {
  Scalar den = x.squaredNorm() * y.squaredNorm() - std::pow(x.dot(y), 2);
  if (den <= 1e-14 * x.squaredNorm() * y.squaredNorm())
    throw std::invalid_argument("sectional: degenerate plane");
  CVec cx = x.cast<std::complex<Scalar>>(), cy = y.cast<std::complex<Scalar>>();
  return ceval(rw, cx, cy, cx, cy).real() / den;
}

Scalar holomorphic_sectional(const Tensor4& rw, const Vec& x) {
  if (x.squaredNorm() == 0) throw std::invalid_argument("holomorphic_sectional: zero vector");
  Vec jx = rw.space()->J * x;
  return sectional(rw, x, jx);
}

Scalar complex_sectional(const Tensor4& rw, const CVec& z, const CVec& w) {
  Scalar zz = z.squaredNorm(), ww = w.squaredNorm();
  // |Z ^ W|^2 = |Z|^2 |W|^2 - |h(Z,W)|^2 for the hermitian extension h
  Scalar den = zz * ww - std::norm(z.dot(w));
  if (den <= 1e-14 * zz * ww) throw std::invalid_argument("complex_sectional: degenerate plane");
  return ceval(rw, z, w, z.conjugate(), w.conjugate()).real() / den;
}

CurvatureRanges sample_curvatures(const Tensor4& rw, int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("sample_curvatures: samples must be >= 1");
  const int n = rw.dim();
  std::mt19937_64 rng(seed);
  std::normal_distribution<Scalar> N(0.0, 1.0);
  auto rvec = [&] {
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = N(rng);
    return v;
  };
  auto cvec = [&] {
    CVec v(n);
    for (int i = 0; i < n; ++i) v(i) = {N(rng), N(rng)};
    return v;
  };
  constexpr Scalar inf = std::numeric_limits<Scalar>::infinity();
  CurvatureRanges r{{inf, -inf}, {inf, -inf}, {inf, -inf}, samples};
  auto upd = [](Range& rg, Scalar v) {
    rg.min = std::min(rg.min, v);
    rg.max = std::max(rg.max, v);
  };
  for (int k = 0; k < samples; ++k) {
    upd(r.sectional, sectional(rw, rvec(), rvec()));
    upd(r.holomorphic, holomorphic_sectional(rw, rvec()));
    upd(r.complex_sectional, complex_sectional(rw, cvec(), cvec()));
  }
  return r;
}

}  // namespace pshc
