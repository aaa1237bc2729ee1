#include "pshc/curvature_algebra.hpp"

#include <cmath>
#include <stdexcept>

namespace pshc {

Tensor4 sym_product(const Bil2& h, const Bil2& k) {
  require_same_space(h.space, k.space);
  Tensor4 t(h.space);
  const int n = t.dim();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) t(a, b, c, d) = h(a, b) * k(c, d) + h(c, d) * k(a, b);
  return t;
}

Tensor4 tensor_product(const Bil2& h, const Bil2& k) {
  require_same_space(h.space, k.space);
  Tensor4 t(h.space);
  const int n = t.dim();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) t(a, b, c, d) = h(a, b) * k(c, d);
  return t;
}

Curv4 kulkarni(const Bil2& h, const Bil2& k) {
  require_same_space(h.space, k.space);
  Tensor4 t(h.space);
  const int n = t.dim();
  auto s = [&](int a, int b, int c, int d) { return h(a, b) * k(c, d) + h(c, d) * k(a, b); };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) t(a, b, c, d) = s(a, c, b, d) - s(a, d, b, c);
  TagSet tags;
  bool hs = h.symmetry == Symmetry::symmetric, ks = k.symmetry == Symmetry::symmetric;
  bool ha = h.symmetry == Symmetry::antisymmetric, ka = k.symmetry == Symmetry::antisymmetric;
  if ((hs && ks) || (ha && ka)) tags.add(Tag::pair_symmetric);
  if (hs && ks) tags.add(Tag::bianchi_closed);
  return Curv4::from(t, tags);
}

Tensor4 bianchi_map(const Tensor4& q) {
  Tensor4 t(q.space());
  const int n = t.dim();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        for (int w = 0; w < n; ++w) t(x, y, z, w) = q(x, y, z, w) + q(z, x, y, w) + q(y, z, x, w);
  return t;
}

Bil2 ricci_contraction(const Tensor4& q) {
  const int n = q.dim();
  Mat m = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) m(a, b) += q(i, a, i, b);
  return Bil2(q.space(), m, Symmetry::general);
}

Endo2Forms hat(const Tensor4& q) {
  const int n = q.dim();
  const auto& P = wedge_pairs(n);
  const int m = static_cast<int>(P.size());
  Mat M(m, m);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) M(r, c) = q(P[c].first, P[c].second, P[r].first, P[r].second);
  return {q.space(), M};
}

Curv4 unhat(const Endo2Forms& e) {
  Tensor4 t(e.space);
  const int n = t.dim();
  const auto& P = wedge_pairs(n);
  const int m = static_cast<int>(P.size());
  if (e.m.rows() != m || e.m.cols() != m) throw std::invalid_argument("unhat: wrong grid size");
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) {
      auto [a, b] = P[c];
      auto [cc, dd] = P[r];
      Scalar v = e.m(r, c);
      t(a, b, cc, dd) = v;
      t(b, a, cc, dd) = -v;
      t(a, b, dd, cc) = -v;
      t(b, a, dd, cc) = v;
    }
  Curv4 out = Curv4::from(t, {});
  Scalar scale = std::max<Scalar>(1.0, e.m.cwiseAbs().maxCoeff());
  if ((e.m - e.m.transpose()).cwiseAbs().maxCoeff() <= kTol * scale)
    out.set_tags_unchecked({Tag::pair_symmetric});
  return out;
}

Scalar trace_hat(const Tensor4& q) {
  Scalar s = 0;
  for (auto [a, b] : wedge_pairs(q.dim())) s += q(a, b, a, b);
  return s;
}

Scalar scalar_product(const Curv4& p, const Curv4& q) {
  require_same_space(p.space(), q.space());
  if (!p.tags().has(Tag::pair_symmetric) || !q.tags().has(Tag::pair_symmetric))
    throw std::invalid_argument("scalar_product: arguments must be pair symmetric");
  Scalar s = 0;
  const auto& a = p.data();
  const auto& b = q.data();
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  // 1/2 tr(P^ Q^) over a<b, c<d equals one eighth of the full sum.
  return s / 8.0;
}

Scalar norm2(const Curv4& q) { return scalar_product(q, q); }

static Curv4 with_tags(const Tensor4& t, TagSet tags) {
  Curv4 c = Curv4::from(t, {});
  c.set_tags_unchecked(tags);
  return c;
}

Tensor4 pair_symmetrize(const Tensor4& q) {
  Tensor4 t = q + q.permuted(2, 3, 0, 1);
  return 0.5 * t;
}

Tensor4 antisymmetrize(const Tensor4& q) {
  Tensor4 t = q - q.permuted(1, 0, 2, 3);
  Tensor4 u = t - t.permuted(0, 1, 3, 2);
  return 0.25 * u;
}

Tensor4 bianchi_project(const Tensor4& q) { return q - (1.0 / 3.0) * bianchi_map(q); }

static Tensor4 split_project(const Tensor4& q, const Mat& T, int sign) {
  Tensor4 a = q.act_first(T);
  Tensor4 b = q.act_second(T);
  Tensor4 c = a.act_second(T);
  Tensor4 out = q + c;
  if (sign > 0) {
    out += a;
    out += b;
  } else {
    out -= a;
    out -= b;
  }
  return 0.25 * out;
}

Tensor4 j_project(const Tensor4& q, int sign) { return split_project(q, q.space()->J, sign); }

Tensor4 tau_project(const Tensor4& q, int sign) {
  if (!q.space()->has_torsion()) throw std::invalid_argument("tau_split: space has no torsion");
  return split_project(q, *q.space()->tau, sign);
}

std::pair<Curv4, Curv4> j_split(const Curv4& q) {
  TagSet base = q.tags().intersect({Tag::pair_symmetric, Tag::tau_plus, Tag::tau_minus});
  TagSet plus = base, minus = base;
  plus.add(Tag::j_plus);
  minus.add(Tag::j_minus);
  return {with_tags(j_project(q, +1), plus), with_tags(j_project(q, -1), minus)};
}

std::pair<Curv4, Curv4> tau_split(const Curv4& q) {
  TagSet base = q.tags().intersect({Tag::pair_symmetric, Tag::j_plus, Tag::j_minus});
  TagSet plus = base, minus = base;
  plus.add(Tag::tau_plus);
  minus.add(Tag::tau_minus);
  return {with_tags(tau_project(q, +1), plus), with_tags(tau_project(q, -1), minus)};
}

Bil2 hat_form(const Tensor4& q, const Bil2& gamma) {
  const int n = q.dim();
  Mat m = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Scalar gij = gamma(i, j);
      if (gij == 0) continue;
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) m(x, y) += 0.5 * q(i, j, x, y) * gij;
    }
  return Bil2(q.space(), m, Symmetry::general);
}

Scalar wedge_adjoint(const Bil2& gamma) {
  // 1/2 sum_i gamma(e_i, J e_i)
  return 0.5 * (gamma.m * gamma.space->J).trace();
}

Bil2 primitive_form(const Bil2& gamma) {
  const auto& s = gamma.space;
  return Bil2(s, gamma.m - (wedge_adjoint(gamma) / s->d) * s->omega, gamma.symmetry);
}

Tensor4 primitive_project(const Tensor4& q) {
  const auto& s = q.space();
  const int d = s->d;
  Bil2 w = fundamental_form(s);
  Bil2 a = hat_form(q, w);
  Scalar la = wedge_adjoint(a);
  Tensor4 t = q - (1.0 / d) * sym_product(a, w);
  t += (la / (2.0 * d * d)) * sym_product(w, w);
  return t;
}

Curv4 primitive_part(const Curv4& q) {
  if (!q.tags().has(Tag::pair_symmetric))
    throw std::invalid_argument("primitive_part: argument must be pair symmetric");
  TagSet tags = q.tags().intersect({Tag::pair_symmetric, Tag::j_plus});
  tags.add(Tag::primitive);
  return Curv4::from(primitive_project(q), tags);
}

Bil2 traceless_part(const Bil2& s) {
  const auto& sp = s.space;
  return Bil2(sp, s.m - (s.m.trace() / sp->n) * sp->g, s.symmetry);
}

Mat ring(const Tensor4& q, const Mat& s) {
  const int n = q.dim();
  Mat out = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Scalar sij = s(i, j);
      if (sij == 0) continue;
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) out(x, y) += q(i, x, y, j) * sij;
    }
  return out;
}

EValued ring(const Tensor4& q, const EValued& s) {
  EValued out;
  out.reserve(s.size());
  for (const Mat& m : s) out.push_back(ring(q, m));
  return out;
}

Mat pull(const Mat& s, const Mat& T) { return T.transpose() * s * T; }

EValued pull(const EValued& s, const Mat& T) {
  EValued out;
  for (const Mat& m : s) out.push_back(pull(m, T));
  return out;
}

Scalar sym_inner(const Mat& s, const Mat& t) { return 0.5 * s.cwiseProduct(t).sum(); }

Scalar sym_inner(const EValued& s, const EValued& t) {
  if (s.size() != t.size()) throw std::invalid_argument("sym_inner: fiber mismatch");
  Scalar r = 0;
  for (std::size_t k = 0; k < s.size(); ++k) r += sym_inner(s[k], t[k]);
  return r;
}

CanonicalTensors canonical_tensors(const SpacePtr& s) {
  const int d = s->d;
  Bil2 g = metric(s), w = fundamental_form(s);
  CanonicalTensors c;
  c.gkg = kulkarni(g, g);
  c.wkw = kulkarni(w, w);
  Tensor4 wsw = sym_product(w, w);
  c.wsw = Curv4::from(wsw, {Tag::pair_symmetric, Tag::j_plus});
  Tensor4 ic = (1.0 / 8.0) * (c.gkg + c.wkw + 2.0 * wsw);
  c.Ic = Curv4::from(ic, {Tag::pair_symmetric, Tag::bianchi_closed, Tag::j_plus});
  Tensor4 ic0 = (1.0 / 8.0) * (c.gkg + c.wkw - (2.0 / d) * wsw);
  c.Ic0 = Curv4::from(ic0, {Tag::pair_symmetric, Tag::j_plus, Tag::primitive});
  if (s->has_torsion()) {
    Bil2 A = torsion_form_A(s), B = torsion_form_B(s);
    Tensor4 tt = (1.0 / 8.0) * (kulkarni(A, A) + kulkarni(B, B));
    c.T = Curv4::from(tt, {Tag::pair_symmetric, Tag::bianchi_closed, Tag::j_plus});
    Tensor4 t0 = tt + (1.0 / (4.0 * d)) * wsw;
    c.T0 = Curv4::from(t0, {Tag::pair_symmetric, Tag::j_plus, Tag::primitive});
  }
  return c;
}

}  // namespace pshc
