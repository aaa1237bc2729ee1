#include "pshc/msy_identities.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>

namespace pshc {

namespace {

using Rng = std::mt19937_64;

Mat gaussian(Rng& rng, int r, int c) {
  std::normal_distribution<Scalar> N(0.0, 1.0);
  Mat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = N(rng);
  return m;
}

Mat sym_gaussian(Rng& rng, int n) {
  Mat m = gaussian(rng, n, n);
  return 0.5 * (m + m.transpose());
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Scalar max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

Scalar scaled_matrix_residual(const Mat& a, const Mat& b) {
  return max_abs(a - b) / std::max<Scalar>({1.0, max_abs(a), max_abs(b)});
}

Scalar full_inner8(const Tensor4& p, const Tensor4& q) {
  Scalar s = 0;
  for (std::size_t i = 0; i < p.data().size(); ++i) s += p.data()[i] * q.data()[i];
  return s / 8.0;
}

// Contract slot `slot` of q (dimension n') with D (n' x n): result dimension n in that slot.
std::vector<Scalar> contract_slot(const std::vector<Scalar>& q, const int dims[4], int slot, const Mat& D,
                                  int new_dim) {
  int out_dims[4] = {dims[0], dims[1], dims[2], dims[3]};
  out_dims[slot] = new_dim;
  std::size_t total = 1;
  for (int k = 0; k < 4; ++k) total *= static_cast<std::size_t>(out_dims[k]);
  std::vector<Scalar> out(total, 0.0);
  std::size_t stride_in = 1, stride_out = 1;
  for (int k = 3; k > slot; --k) {
    stride_in *= static_cast<std::size_t>(dims[k]);
    stride_out *= static_cast<std::size_t>(out_dims[k]);
  }
  std::size_t outer = 1;
  for (int k = 0; k < slot; ++k) outer *= static_cast<std::size_t>(dims[k]);
  for (std::size_t o = 0; o < outer; ++o)
    for (int a = 0; a < dims[slot]; ++a) {
      const Scalar* src = &q[(o * dims[slot] + a) * stride_in];
      for (int i = 0; i < new_dim; ++i) {
        Scalar c = D(a, i);
        if (c == 0) continue;
        Scalar* dst = &out[(o * new_dim + i) * stride_out];
        for (std::size_t r = 0; r < stride_in; ++r) dst[r] += c * src[r];
      }
    }
  return out;
}

Mat plus_part(const Mat& t, const Mat& J) { return 0.5 * (t + J.transpose() * t * J); }
Mat minus_part(const Mat& t, const Mat& J) { return 0.5 * (t - J.transpose() * t * J); }

// c(P^ o Q^)^S with ^S = X + X^T
Mat composed_ricci_sym(const Tensor4& P, const Tensor4& Q) {
  Endo2Forms e{P.space(), hat(P).m * hat(Q).m};
  Mat c = ricci_contraction(unhat(e)).m;
  return c + c.transpose();
}

Scalar bianchi_defect_pairing(const Tensor4& Q, const Vec& v) {
  const auto& s = Q.space();
  Mat grid = hat(bianchi_map(Q) - Q).m;
  const auto& P = wedge_pairs(s->n);
  Vec w(static_cast<Eigen::Index>(P.size()));
  for (std::size_t r = 0; r < P.size(); ++r) w(static_cast<Eigen::Index>(r)) = s->omega(P[r].first, P[r].second);
  // D = -omega (x) v, so each fiber contributes v_k^2 w^T grid w.
  return v.squaredNorm() * w.dot(grid * w);
}

Mat lambda2_projector(const SpacePtr& s, QSubspace sub) {
  const auto& P = wedge_pairs(s->n);
  const int m = static_cast<int>(P.size());
  if (sub == QSubspace::all) return Mat::Identity(m, m);
  Mat proj(m, m);
  for (int c = 0; c < m; ++c) {
    Mat gam = Mat::Zero(s->n, s->n);
    gam(P[c].first, P[c].second) = 1.0;
    gam(P[c].second, P[c].first) = -1.0;
    Mat img = (sub == QSubspace::minus) ? minus_part(gam, s->J) : plus_part(gam, s->J);
    for (int r = 0; r < m; ++r) proj(r, c) = img(P[r].first, P[r].second);
  }
  if (sub == QSubspace::plus_primitive) {
    Vec w(m);
    for (int r = 0; r < m; ++r) w(r) = s->omega(P[r].first, P[r].second);
    w.normalize();
    proj = (Mat::Identity(m, m) - w * w.transpose()) * proj;
  }
  return proj;
}

}  // namespace

Scalar scaled_residual(Scalar a, Scalar b) {
  return std::abs(a - b) / std::max<Scalar>({1.0, std::abs(a), std::abs(b)});
}

MapDatum random_map_datum(const SpacePtr& source, const SpacePtr& target, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<Scalar> U(0.5, 2.0);
  MapDatum m;
  m.source = source;
  m.target = target;
  m.f = U(rng);
  m.dphi = gaussian(rng, target->n, source->n);
  m.dphi_xi = gaussian(rng, target->n, 1).col(0);
  for (int k = 0; k < target->n; ++k) m.nabla_sym.push_back(sym_gaussian(rng, source->n));
  m.is_cr = false;
  return m;
}

MapDatum cr_map_datum(const SpacePtr& source, const SpacePtr& target, Scalar f, std::uint64_t seed) {
  const int d = source->d, dp = target->d;
  if (dp < d) throw std::invalid_argument("cr_map_datum: needs d' >= d");
  if (!(f > 0)) throw std::invalid_argument("cr_map_datum: f must be positive");
  using CMat = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
  Rng rng(seed);
  Mat re = gaussian(rng, dp, d), im = gaussian(rng, dp, d);
  CMat Z(dp, d);
  Z.real() = re;
  Z.imag() = im;
  Eigen::HouseholderQR<CMat> qr(Z);
  CMat U = qr.householderQ() * CMat::Identity(dp, d);
  MapDatum m;
  m.source = source;
  m.target = target;
  m.f = f;
  m.is_cr = true;
  m.dphi.resize(2 * dp, 2 * d);
  m.dphi << U.real(), -U.imag(), U.imag(), U.real();
  m.dphi *= std::sqrt(f);
  m.dphi_xi = gaussian(rng, 2 * dp, 1).col(0);

  const Mat& J = source->J;
  const Mat& Jp = target->J;
  Vec jv = Jp * m.dphi_xi;
  EValued S;
  for (int k = 0; k < 2 * dp; ++k) S.push_back(minus_part(sym_gaussian(rng, 2 * d), J));
  for (int k = 0; k < 2 * dp; ++k) {
    // g (x) J'v + 2 P(S^-),  P(S)(X,Y) = 1/2 (S(X,Y) - J' S(X,JY))
    Mat p = S[k];
    for (int l = 0; l < 2 * dp; ++l)
      if (Jp(k, l) != 0) p -= Jp(k, l) * (S[l] * J);
    m.nabla_sym.push_back(jv(k) * source->g + p);
  }
  return m;
}

EValued covariant_derivative(const MapDatum& m) {
  EValued N;
  for (std::size_t k = 0; k < m.nabla_sym.size(); ++k)
    N.push_back(0.5 * m.nabla_sym[k] - 0.5 * m.dphi_xi(static_cast<Eigen::Index>(k)) * m.source->omega);
  return N;
}

Vec codifferential(const MapDatum& m) {
  Vec delta(static_cast<Eigen::Index>(m.nabla_sym.size()));
  for (std::size_t k = 0; k < m.nabla_sym.size(); ++k)
    delta(static_cast<Eigen::Index>(k)) = -0.5 * m.nabla_sym[k].trace();
  return delta;
}

std::string variant_name(QVariant v) {
  switch (v) {
    case QVariant::gg_minus: return "gg_minus";
    case QVariant::gg_plus_primitive: return "gg_plus_primitive";
    case QVariant::parallel_cm: return "parallel_cm";
    case QVariant::gg_minus_tau_plus: return "gg_minus_tau_plus";
    case QVariant::ic_primitive_tau_minus: return "ic_primitive_tau_minus";
  }
  return "unknown";
}

Curv4 canonical_Q(const SpacePtr& s, QVariant v, const Curv4* rw) {
  const int d = s->d;
  Bil2 g = metric(s), w = fundamental_form(s);
  CanonicalTensors ct = canonical_tensors(s);
  switch (v) {
    case QVariant::gg_minus: {
      Curv4 q = 0.5 * (ct.gkg - ct.wkw);
      return Curv4::from(q, {Tag::pair_symmetric, Tag::j_minus});
    }
    case QVariant::gg_plus_primitive: {
      if (d < 2) throw std::invalid_argument("canonical_Q: primitive variants need d >= 2");
      Tensor4 q = 0.5 * (Tensor4(ct.gkg) + ct.wkw - (2.0 / d) * Tensor4(ct.wsw));
      return Curv4::from(q, {Tag::pair_symmetric, Tag::j_plus, Tag::primitive});
    }
    case QVariant::parallel_cm: {
      if (!rw) throw std::invalid_argument("canonical_Q: parallel_cm needs a curvature tensor");
      return parallel_q_tensor(*rw);
    }
    case QVariant::gg_minus_tau_plus: {
      if (!s->has_torsion()) throw std::invalid_argument("canonical_Q: tau variants need torsion");
      Bil2 A = torsion_form_A(s), B = torsion_form_B(s);
      Tensor4 q = 0.25 * (Tensor4(ct.gkg) - ct.wkw + kulkarni(A, A) - kulkarni(B, B));
      return Curv4::from(q, {Tag::pair_symmetric, Tag::j_minus, Tag::tau_plus});
    }
    case QVariant::ic_primitive_tau_minus: {
      if (!s->has_torsion()) throw std::invalid_argument("canonical_Q: tau variants need torsion");
      if (d < 2) throw std::invalid_argument("canonical_Q: primitive variants need d >= 2");
      Tensor4 q = 0.5 * (Tensor4(ct.Ic0) - *ct.T0);
      return Curv4::from(q, {Tag::pair_symmetric, Tag::j_plus, Tag::tau_minus, Tag::primitive});
    }
  }
  throw std::invalid_argument("canonical_Q: unknown variant");
}

Curv4 random_constrained_Q(const SpacePtr& s, QSubspace sub, bool ricci_traceless, std::uint64_t seed) {
  Mat proj = lambda2_projector(s, sub);
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (proj + proj.transpose()));
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
    if (es.eigenvalues()(k) > 0.5) keep.push_back(k);
  const int m = static_cast<int>(proj.rows());
  const int k = static_cast<int>(keep.size());
  Mat U(m, k);
  for (int i = 0; i < k; ++i) U.col(i) = es.eigenvectors().col(keep[i]);

  // Coordinates: upper triangle of a symmetric k x k grid.
  std::vector<std::pair<int, int>> coords;
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) coords.emplace_back(i, j);
  const int nc = static_cast<int>(coords.size());
  auto grid_of = [&](const Vec& x) {
    Mat S = Mat::Zero(k, k);
    for (int t = 0; t < nc; ++t) {
      S(coords[t].first, coords[t].second) += x(t);
      if (coords[t].first != coords[t].second) S(coords[t].second, coords[t].first) += x(t);
    }
    return Mat(U * S * U.transpose());
  };

  Rng rng(seed);
  Vec x = gaussian(rng, nc, 1).col(0);
  if (ricci_traceless) {
    const int n = s->n;
    Mat L(n * n, nc);
    for (int t = 0; t < nc; ++t) {
      Mat c = ricci_contraction(unhat({s, grid_of(Vec::Unit(nc, t))})).m;
      c -= (c.trace() / n) * s->g;
      L.col(t) = Eigen::Map<const Vec>(c.data(), n * n);
    }
    Eigen::JacobiSVD<Mat> svd(L, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    Scalar top = sv.size() ? sv(0) : 1.0;
    Vec y = Vec::Zero(nc);
    for (int t = 0; t < nc; ++t) {
      Scalar sval = t < sv.size() ? sv(t) : 0.0;
      if (sval <= 1e-10 * std::max<Scalar>(1.0, top)) {
        Vec col = svd.matrixV().col(t);
        y += col.dot(x) * col;
      }
    }
    x = y;
  }
  Curv4 q = unhat({s, grid_of(x)});
  Scalar nrm = q.frobenius();
  if (nrm < 1e-12) throw std::runtime_error("random_constrained_Q: empty constraint set");
  q *= 1.0 / nrm;
  return Curv4::detect(q);
}

Bil2 pullback2(const Bil2& t, const MapDatum& m) {
  require_same_space(t.space, m.target);
  Symmetry sym = t.symmetry;
  return Bil2(m.source, m.dphi.transpose() * t.m * m.dphi, sym);
}

Tensor4 pullback4(const Tensor4& q, const MapDatum& m) {
  require_same_space(q.space(), m.target);
  const int np = m.target->n, n = m.source->n;
  int dims[4] = {np, np, np, np};
  std::vector<Scalar> cur = q.data();
  for (int slot = 0; slot < 4; ++slot) {
    cur = contract_slot(cur, dims, slot, m.dphi, n);
    dims[slot] = n;
  }
  Tensor4 out(m.source);
  out.data() = std::move(cur);
  return out;
}

Curv4 pullback4(const Curv4& q, const MapDatum& m) {
  Tensor4 t = pullback4(static_cast<const Tensor4&>(q), m);
  TagSet tags = q.tags().intersect({Tag::pair_symmetric, Tag::bianchi_closed});
  if (m.is_cr && q.tags().has(Tag::j_plus)) tags.add(Tag::j_plus);
  return Curv4::from(t, tags);
}

MsyTermReport curvature_terms(const Curv4& q_target, const MapDatum& m) {
  MsyTermReport r;
  const auto& s = m.source;
  const int d = s->d, n = s->n;
  Tensor4 pulled = pullback4(static_cast<const Tensor4&>(q_target), m);
  ComplexFrame cf = complexify(s);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const CVec& zi = cf.Z[i];
      const CVec& zj = cf.Z[j];
      r.r20 += ceval(pulled, zi, zj, zi.conjugate(), zj.conjugate()).real();
      r.r11 += ceval(pulled, zi, zj.conjugate(), zi.conjugate(), zj).real();
    }
  const Mat& Jp = m.target->J;
  auto q4 = [&](const Vec& a, const Vec& b, const Vec& c, const Vec& e) {
    return ceval(q_target, a.cast<std::complex<Scalar>>(), b.cast<std::complex<Scalar>>(),
                 c.cast<std::complex<Scalar>>(), e.cast<std::complex<Scalar>>())
        .real();
  };
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Vec ui = m.dphi.col(i), uj = m.dphi.col(j);
      r.hbk += q4(ui, Jp * ui, uj, Jp * uj);
      r.k += q4(ui, uj, ui, uj);
    }
  Curv4 qm = canonical_Q(s, QVariant::gg_minus);
  r.pair_gg_minus = full_inner8(qm, pulled);
  if (d >= 2) r.pair_gg_plus_primitive = full_inner8(canonical_Q(s, QVariant::gg_plus_primitive), pulled);
  r.trace_plus = trace_hat(j_project(pulled, +1));
  r.trace_minus = trace_hat(j_project(pulled, -1));
  Vec delta = codifferential(m);
  r.delta_norm2 = delta.squaredNorm();
  r.dphi_xi_norm2 = m.dphi_xi.squaredNorm();
  EValued s0 = m.nabla_sym;
  for (std::size_t k = 0; k < s0.size(); ++k) s0[k] += (delta(static_cast<Eigen::Index>(k)) / d) * s->g;
  r.ring_gg_minus = sym_inner(ring(qm, s0), s0);
  if (d >= 2) r.ring_gg_plus_primitive = sym_inner(ring(canonical_Q(s, QVariant::gg_plus_primitive), s0), s0);
  if (m.target->has_torsion()) r.tau_term_norm2 = (m.f * (*m.target->tau) * m.dphi).squaredNorm();
  (void)n;
  return r;
}

Scalar operator_relation_residual(const SpacePtr& s, int fiber_dim, std::uint64_t seed, bool perturb) {
  Rng rng(seed);
  const int n = s->n, d = s->d;
  Bil2 g = metric(s), w = fundamental_form(s);
  CanonicalTensors ct = canonical_tensors(s);
  Scalar res = 0;
  for (int k = 0; k < fiber_dim; ++k) {
    Mat sk = perturb ? gaussian(rng, n, n) : sym_gaussian(rng, n);
    Mat sp = plus_part(sk, s->J), sm = minus_part(sk, s->J);
    res = std::max(res, max_abs(ring(ct.gkg, sk) - 2.0 * (sk - sk.trace() * s->g)));
    res = std::max(res, max_abs(ring(ct.wkw, sk) + 2.0 * (sp - sm)));
    res = std::max(res, max_abs(ring(ct.wsw, sk) + 2.0 * (sp - sm)));
  }
  res = std::max(res, max_abs(ricci_contraction(ct.gkg).m - 2.0 * (2 * d - 1) * s->g));
  res = std::max(res, max_abs(ricci_contraction(ct.wkw).m - 2.0 * s->g));
  res = std::max(res, max_abs(ricci_contraction(ct.wsw).m - 2.0 * s->g));
  res = std::max(res, std::abs(trace_hat(ct.gkg) - 2.0 * d * (2 * d - 1)));
  (void)g;
  (void)w;
  return res;
}

Scalar torsion_relation_residual(const SpacePtr& s, int fiber_dim, std::uint64_t seed, bool perturb) {
  if (!s->has_torsion()) throw std::invalid_argument("torsion_relation_residual: needs torsion");
  Rng rng(seed);
  const int n = s->n, d = s->d;
  Bil2 A = torsion_form_A(s), B = torsion_form_B(s);
  Curv4 AA = kulkarni(A, A), BB = kulkarni(B, B);
  const Mat& tau = *s->tau;
  Mat Jt = s->J * tau;
  const Scalar tau2 = (tau * tau.transpose()).trace();
  Scalar res = 0;
  for (int k = 0; k < fiber_dim; ++k) {
    Mat sk = perturb ? gaussian(rng, n, n) : sym_gaussian(rng, n);
    Scalar ta = A.m.cwiseProduct(sk).sum(), tb = B.m.cwiseProduct(sk).sum();
    res = std::max(res, max_abs(ring(AA, sk) - 2.0 * (pull(sk, tau) - ta * A.m)));
    res = std::max(res, max_abs(ring(BB, sk) - 2.0 * (pull(sk, Jt) - tb * B.m)));
  }
  res = std::max(res, max_abs(ricci_contraction(AA).m + (tau2 / d) * s->g));
  res = std::max(res, max_abs(ricci_contraction(BB).m + (tau2 / d) * s->g));
  res = std::max(res, std::abs(trace_hat(AA) + tau2));
  res = std::max(res, std::abs(trace_hat(BB) + tau2));
  return res;
}

bool SuiteReport::all_pass() const {
  return std::all_of(results.begin(), results.end(), [](const IdentityResult& r) { return r.pass; });
}

SuiteReport identity_suite(int d, int d_prime, int fiber_dim, std::uint64_t seed, int trials,
                           bool negative_control, Scalar tol) {
  if (d < 2) throw std::invalid_argument("identity_suite: needs d >= 2");
  if (d_prime < d) throw std::invalid_argument("identity_suite: needs d' >= d");
  if (trials < 1) throw std::invalid_argument("identity_suite: trials must be >= 1");
  if (fiber_dim < 1) throw std::invalid_argument("identity_suite: fiber dimension must be >= 1");
  SpacePtr src = make_space(d, true);
  SpacePtr tgt = make_space(d_prime, true);
  const bool neg = negative_control;

  SuiteReport rep;
  rep.d = d;
  rep.d_prime = d_prime;
  rep.fiber_dim = fiber_dim;
  rep.seed = seed;
  rep.negative_control = neg;
  rep.tol = tol;

  // Each identity maps a trial seed to a residual.
  using Check = std::function<Scalar(std::uint64_t)>;
  std::vector<std::pair<std::string, Check>> checks;

  auto traceless_split = [=](const Curv4& Q, const MapDatum& m) {
    Vec delta = codifferential(m);
    EValued s0 = m.nabla_sym;
    for (std::size_t k = 0; k < s0.size(); ++k) s0[k] += (delta(static_cast<Eigen::Index>(k)) / d) * src->g;
    Scalar lhs = sym_inner(ring(Q, m.nabla_sym), m.nabla_sym);
    Scalar rhs = sym_inner(ring(Q, s0), s0) - trace_hat(Q) / (d * d) * delta.squaredNorm();
    return scaled_residual(lhs, rhs);
  };
  auto perturbed = [=](const Curv4& Q, std::uint64_t sd) {
    return Q + random_curv4(src, {Tag::pair_symmetric}, mix(sd, 99));
  };
  for (QVariant v : {QVariant::gg_minus, QVariant::gg_plus_primitive, QVariant::gg_minus_tau_plus, QVariant::ic_primitive_tau_minus}) {
    checks.emplace_back("traceless_split_" + variant_name(v), [=](std::uint64_t sd) {
      Curv4 Q = canonical_Q(src, v);
      if (neg) Q = perturbed(Q, sd);
      return traceless_split(Q, random_map_datum(src, tgt, sd));
    });
  }
  checks.emplace_back("traceless_split_random", [=](std::uint64_t sd) {
    Curv4 Q = random_constrained_Q(src, QSubspace::all, !neg, mix(sd, 1));
    return traceless_split(Q, random_map_datum(src, tgt, sd));
  });

  checks.emplace_back("bianchi_defect_plus_primitive", [=](std::uint64_t sd) {
    Curv4 Q = neg ? random_curv4(src, {Tag::pair_symmetric}, mix(sd, 2))
                  : random_constrained_Q(src, QSubspace::plus_primitive, false, mix(sd, 2));
    Vec v = random_map_datum(src, tgt, sd).dphi_xi;
    return scaled_residual(bianchi_defect_pairing(Q, v), -trace_hat(Q) * v.squaredNorm());
  });
  checks.emplace_back("bianchi_defect_gg_plus0", [=](std::uint64_t sd) {
    Curv4 Q = canonical_Q(src, QVariant::gg_plus_primitive);
    if (neg) Q = perturbed(Q, sd);
    Vec v = random_map_datum(src, tgt, sd).dphi_xi;
    return scaled_residual(bianchi_defect_pairing(Q, v), -2.0 * (d * d - 1.0) * v.squaredNorm());
  });
  checks.emplace_back("bianchi_defect_minus", [=](std::uint64_t sd) {
    Curv4 Q = neg ? random_curv4(src, {Tag::pair_symmetric}, mix(sd, 3))
                  : random_constrained_Q(src, QSubspace::minus, false, mix(sd, 3));
    Vec v = random_map_datum(src, tgt, sd).dphi_xi;
    return scaled_residual(bianchi_defect_pairing(Q, v), trace_hat(Q) * v.squaredNorm());
  });
  checks.emplace_back("bianchi_defect_general", [=](std::uint64_t sd) {
    // <b(Q) - Q, w.w> = tr Q^- - tr Q^+ for any pair-symmetric Q
    Curv4 Q = random_curv4(src, {Tag::pair_symmetric}, mix(sd, 4));
    auto [qp, qm] = j_split(Q);
    Scalar rhs = trace_hat(qm) - trace_hat(qp);
    if (neg) rhs = -rhs;
    Tensor4 wsw = sym_product(fundamental_form(src), fundamental_form(src));
    return scaled_residual(full_inner8(bianchi_map(Q) - Q, wsw), rhs);
  });

  checks.emplace_back("curvature_pairing", [=](std::uint64_t sd) {
    MapDatum m = random_map_datum(src, tgt, sd);
    Curv4 rw_t = random_curv4(tgt, {Tag::bianchi_closed, Tag::j_plus}, mix(sd, 5));
    Curv4 Q = random_curv4(src, {Tag::pair_symmetric}, mix(sd, 6));
    Tensor4 prh = pullback4(assemble_rh(rw_t), m);
    Scalar lhs = 0;
    for (std::size_t i = 0; i < prh.data().size(); ++i) lhs += 0.5 * Q.data()[i] * prh.data()[i];
    Curv4 prw = pullback4(rw_t, m);
    Mat pB = pullback2(torsion_form_B(tgt), m).m;
    Mat pg = pullback2(metric(tgt), m).m;
    Scalar rhs = 4.0 * scalar_product(Q, prw);
    if (!neg) rhs -= 2.0 * sym_inner(ring(Q, pB), pg);
    return scaled_residual(lhs, rhs);
  });

  auto source_rw = [=](std::uint64_t sd) {
    return random_curv4(src, {Tag::bianchi_closed, Tag::j_plus}, mix(sd, 7));
  };
  checks.emplace_back("composed_ricci_plus_primitive", [=](std::uint64_t sd) {
    Curv4 rw = source_rw(sd);
    Tensor4 rh = assemble_rh(rw);
    Curv4 Q = neg ? random_curv4(src, {Tag::pair_symmetric}, mix(sd, 8))
                  : random_constrained_Q(src, QSubspace::plus_primitive, true, mix(sd, 8));
    Mat h = pullback2(metric(tgt), random_map_datum(src, tgt, sd)).m;
    return scaled_residual(sym_inner(composed_ricci_sym(rh, Q), h), sym_inner(composed_ricci_sym(rw, Q), h));
  });
  checks.emplace_back("composed_ricci_kaehler", [=](std::uint64_t sd) {
    Curv4 rw = source_rw(sd);
    Curv4 Q = canonical_Q(src, QVariant::gg_plus_primitive);
    if (neg) Q = perturbed(Q, sd);
    Mat ric = ricci_contraction(rw).m;
    return scaled_matrix_residual(composed_ricci_sym(rw, Q), 4.0 * (1.0 - 1.0 / d) * ric);
  });
  checks.emplace_back("composed_ricci_minus", [=](std::uint64_t sd) {
    Curv4 rw = source_rw(sd);
    Tensor4 rh = assemble_rh(rw);
    Curv4 Q = random_constrained_Q(src, neg ? QSubspace::all : QSubspace::minus, !neg, mix(sd, 9));
    Mat h = pullback2(metric(tgt), random_map_datum(src, tgt, sd)).m;
    const Mat& B = *src->B;
    Scalar rhs = 2.0 * sym_inner((trace_hat(Q) / d) * B - ring(Q, B), h);
    return scaled_residual(sym_inner(composed_ricci_sym(rh, Q), h), rhs);
  });
  checks.emplace_back("composed_ricci_gg_minus_tau_plus", [=](std::uint64_t sd) {
    Curv4 rw = source_rw(sd);
    Tensor4 rh = assemble_rh(rw);
    Curv4 Q = canonical_Q(src, QVariant::gg_minus_tau_plus);
    if (neg) Q = perturbed(Q, sd);
    Mat h = pullback2(metric(tgt), random_map_datum(src, tgt, sd)).m;
    const Mat& B = *src->B;
    Scalar rhs = 2.0 * sym_inner((trace_hat(Q) / d) * B - ring(Q, B), h);
    return scaled_residual(sym_inner(composed_ricci_sym(rh, Q), h), rhs);
  });

  checks.emplace_back("cr_codifferential", [=](std::uint64_t sd) {
    std::uniform_real_distribution<Scalar> U(0.5, 2.0);
    Rng rng(sd);
    MapDatum m = neg ? random_map_datum(src, tgt, sd) : cr_map_datum(src, tgt, U(rng), sd);
    EValued N = covariant_derivative(m);
    const Mat& J = src->J;
    const Mat& Jp = tgt->J;
    Vec v = m.dphi_xi;
    Scalar res = 0;
    Vec delta = codifferential(m);
    Vec lhs1 = Jp * delta;
    Vec lhs2(v.size());
    for (Eigen::Index k = 0; k < v.size(); ++k) lhs2(k) = -(N[k] * J).trace();
    res = std::max(res, scaled_matrix_residual(lhs1, d * v));
    res = std::max(res, scaled_matrix_residual(lhs2, d * v));
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      Mat rhs = Mat::Zero(src->n, src->n);
      for (Eigen::Index l = 0; l < v.size(); ++l) rhs += Jp(k, l) * N[l];
      res = std::max(res, scaled_matrix_residual(N[k] * J, rhs));
      res = std::max(res, scaled_matrix_residual(N[k] - N[k].transpose(), -v(k) * src->omega));
    }
    return res;
  });

  checks.emplace_back("complex_terms", [=](std::uint64_t sd) {
    MapDatum m = random_map_datum(src, tgt, sd);
    TagSet tags = neg ? TagSet{Tag::pair_symmetric} : TagSet{Tag::bianchi_closed, Tag::j_plus};
    Curv4 rw_t = random_curv4(tgt, tags, mix(sd, 10));
    MsyTermReport t = curvature_terms(rw_t, m);
    Scalar res = scaled_residual(t.pair_gg_minus, t.r20);
    res = std::max(res, scaled_residual(t.pair_gg_plus_primitive, t.r20 / d + (1.0 - 1.0 / d) * t.r11));
    res = std::max(res, scaled_residual(t.trace_minus, t.r20));
    res = std::max(res, scaled_residual(t.trace_plus, t.r11));
    return res;
  });

  checks.emplace_back("cr_pullback", [=](std::uint64_t sd) {
    std::uniform_real_distribution<Scalar> U(0.5, 2.0);
    Rng rng(sd);
    Scalar f = U(rng);
    MapDatum m = neg ? random_map_datum(src, tgt, sd) : cr_map_datum(src, tgt, f, sd);
    Mat pg = pullback2(metric(tgt), m).m;
    Mat pB = pullback2(torsion_form_B(tgt), m).m;
    Scalar res = scaled_matrix_residual(pg, m.f * src->g);
    res = std::max(res, max_abs(plus_part(pB, src->J)) / std::max<Scalar>(1.0, max_abs(pB)));
    res = std::max(res, scaled_matrix_residual(tgt->J * m.dphi, m.dphi * src->J));
    return res;
  });

  checks.emplace_back("cm_spaceform_orthogonal", [=](std::uint64_t sd) {
    std::uniform_real_distribution<Scalar> U(0.5, 2.0);
    Rng rng(sd);
    Scalar f = U(rng);
    MapDatum m = cr_map_datum(src, tgt, f, sd);
    Curv4 cm = invariants(source_rw(sd)).cm;
    Curv4 rt = neg ? random_curv4(tgt, {Tag::bianchi_closed, Tag::j_plus}, mix(sd, 11))
                   : space_form(tgt, -2.0 * d_prime);
    Curv4 prt = pullback4(rt, m);
    Scalar scale = std::max<Scalar>(1.0, std::sqrt(norm2(cm) * norm2(prt)));
    return std::abs(scalar_product(cm, prt)) / scale;
  });

  checks.emplace_back("cr_spaceform_constants", [=](std::uint64_t sd) {
    std::uniform_real_distribution<Scalar> U(0.5, 2.0);
    Rng rng(sd);
    Scalar f = U(rng);
    MapDatum m = neg ? random_map_datum(src, tgt, sd) : cr_map_datum(src, tgt, f, sd);
    const Scalar sp = -2.0 * d_prime;
    MsyTermReport t = curvature_terms(space_form(tgt, sp), m);
    const Scalar dd = d, ddp = d_prime;
    Scalar hbk = f * f / 2.0 * dd * (dd + 1) / (ddp * (ddp + 1)) * sp;
    Scalar comb = f * f / 4.0 * (dd - 1) * (dd + 2) / (ddp * (ddp + 1)) * sp;
    return std::max(scaled_residual(t.hbk, hbk), scaled_residual((1 - 1 / dd) * t.hbk - t.k, comb));
  });

  checks.emplace_back("operator_relations", [=](std::uint64_t sd) {
    return operator_relation_residual(src, fiber_dim, sd, neg);
  });
  checks.emplace_back("torsion_operator_relations", [=](std::uint64_t sd) {
    return torsion_relation_residual(src, fiber_dim, sd, neg);
  });

  for (std::size_t c = 0; c < checks.size(); ++c) {
    IdentityResult r;
    r.name = checks[c].first;
    r.trials = trials;
    r.min_residual = std::numeric_limits<Scalar>::infinity();
    for (int t = 0; t < trials; ++t) {
      std::uint64_t sd = mix(seed, static_cast<std::uint64_t>(t) * 1000 + c);
      Scalar res = checks[c].second(sd);
      if (!(res == res)) res = std::numeric_limits<Scalar>::infinity();
      if (res > r.max_residual || t == 0) {
        r.max_residual = res;
        r.worst_seed = sd;
      }
      r.min_residual = std::min(r.min_residual, res);
    }
    r.pass = r.max_residual <= tol;
    rep.results.push_back(r);
  }
  return rep;
}

}  // namespace pshc
