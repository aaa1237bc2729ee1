#include "pshc/lie_models.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace pshc {

namespace {

using CMat = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
const std::complex<Scalar> kI(0.0, 1.0);

// Z = P + iQ acting on C^n becomes [[P,-Q],[Q,P]] on R^{2n}.
Mat realize(const CMat& Z) {
  const int n = static_cast<int>(Z.rows());
  Mat M(2 * n, 2 * n);
  M.topLeftCorner(n, n) = Z.real();
  M.topRightCorner(n, n) = -Z.imag();
  M.bottomLeftCorner(n, n) = Z.imag();
  M.bottomRightCorner(n, n) = Z.real();
  return M;
}

CMat cunit(int n, int i, int j) {
  CMat M = CMat::Zero(n, n);
  M(i, j) = 1.0;
  return M;
}

Mat unit(int n, int i, int j) {
  Mat M = Mat::Zero(n, n);
  M(i, j) = 1.0;
  return M;
}

struct Split {
  std::vector<Mat> l, p;
};

Split su_pq(int p, int q) {
  const int n = p + q;
  Split s;
  auto same_block = [&](int i, int j) { return (i < p) == (j < p); };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      CMat a = cunit(n, i, j) - cunit(n, j, i);
      CMat b = kI * (cunit(n, i, j) + cunit(n, j, i));
      if (same_block(i, j)) {
        s.l.push_back(realize(a));
        s.l.push_back(realize(b));
      } else {
        s.p.push_back(realize(cunit(n, i, j) + cunit(n, j, i)));
        s.p.push_back(realize(kI * (cunit(n, i, j) - cunit(n, j, i))));
      }
    }
  for (int i = 0; i + 1 < n; ++i) s.l.push_back(realize(kI * (cunit(n, i, i) - cunit(n, i + 1, i + 1))));
  return s;
}

Split sp_R(int p) {
  const int n = 2 * p;
  Split s;
  auto block = [&](const Mat& A, const Mat& B, const Mat& C) {
    Mat M(n, n);
    M << A, B, C, -A.transpose();
    return M;
  };
  Mat Z = Mat::Zero(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = i; j < p; ++j) {
      if (i < j) s.l.push_back(block(unit(p, i, j) - unit(p, j, i), Z, Z));
      Mat S = (i == j) ? unit(p, i, i) : Mat(unit(p, i, j) + unit(p, j, i));
      s.l.push_back(block(Z, S, -S));
      s.p.push_back(block(S, Z, Z));
      s.p.push_back(block(Z, S, S));
    }
  return s;
}

Split so_p2(int p) {
  const int n = p + 2;
  Split s;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if ((i < p) == (j < p))
        s.l.push_back(unit(n, i, j) - unit(n, j, i));
      else
        s.p.push_back(unit(n, i, j) + unit(n, j, i));
    }
  return s;
}

Split so_star(int p) {
  Split s;
  auto block = [&](const CMat& Z1, const CMat& Z2) {
    CMat M(2 * p, 2 * p);
    M << Z1, Z2, -Z2.conjugate(), Z1.conjugate();
    return realize(M);
  };
  CMat Z = CMat::Zero(p, p);
  for (int i = 0; i < p; ++i) {
    s.l.push_back(block(kI * cunit(p, i, i), Z));
    for (int j = i + 1; j < p; ++j) {
      s.l.push_back(block(cunit(p, i, j) - cunit(p, j, i), Z));
      s.l.push_back(block(kI * (cunit(p, i, j) + cunit(p, j, i)), Z));
      s.p.push_back(block(Z, cunit(p, i, j) - cunit(p, j, i)));
      s.p.push_back(block(Z, kI * (cunit(p, i, j) - cunit(p, j, i))));
    }
  }
  return s;
}

Mat flatten(const std::vector<Mat>& ms) {
  const Eigen::Index sz = ms.front().size();
  Mat V(sz, static_cast<Eigen::Index>(ms.size()));
  for (std::size_t k = 0; k < ms.size(); ++k)
    V.col(static_cast<Eigen::Index>(k)) = Eigen::Map<const Vec>(ms[k].data(), sz);
  return V;
}

// Frobenius-orthonormal basis of span(ms).
std::vector<Mat> orthonormalize(const std::vector<Mat>& ms) {
  Mat V = flatten(ms);
  Eigen::JacobiSVD<Mat> svd(V, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  std::vector<Mat> out;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) <= 1e-10 * sv(0)) continue;
    Vec u = svd.matrixU().col(k);
    out.push_back(Eigen::Map<const Mat>(u.data(), ms.front().rows(), ms.front().cols()));
  }
  return out;
}

Mat null_space(const Mat& M, Scalar rel_tol) {
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Scalar top = sv.size() ? sv(0) : 0.0;
  std::vector<Eigen::Index> cols;
  for (Eigen::Index k = 0; k < M.cols(); ++k) {
    Scalar s = k < sv.size() ? sv(k) : 0.0;
    if (s <= rel_tol * std::max<Scalar>(1.0, top)) cols.push_back(k);
  }
  Mat N(M.cols(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) N.col(static_cast<Eigen::Index>(i)) = svd.matrixV().col(cols[i]);
  return N;
}

Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }

struct Coords {
  Mat V;  // columns: flattened orthonormal basis
  Vec operator()(const Mat& M) const {
    return V.transpose() * Eigen::Map<const Vec>(M.data(), M.size());
  }
};

void validate(Family f, const std::vector<int>& params) {
  auto need = [&](std::size_t k) {
    if (params.size() != k) throw std::invalid_argument("build_model: wrong number of parameters");
  };
  switch (f) {
    case Family::heisenberg:
      need(1);
      if (params[0] < 1) throw std::invalid_argument("heisenberg: d >= 1");
      break;
    case Family::su_pq:
      need(2);
      if (params[0] < 1 || params[1] < 1) throw std::invalid_argument("su(p,q): p,q >= 1");
      break;
    case Family::sp_p_R:
      need(1);
      if (params[0] < 1) throw std::invalid_argument("sp(p,R): p >= 1");
      break;
    case Family::so_p_2:
      need(1);
      if (params[0] < 3) throw std::invalid_argument("so(p,2): p >= 3");
      break;
    case Family::so_star_2p:
      need(1);
      if (params[0] < 3) throw std::invalid_argument("so*(2p): p >= 3");
      break;
  }
}

LieModel build_heisenberg(int d) {
  LieModel m;
  m.family = Family::heisenberg;
  m.params = {d};
  m.d = d;
  m.flat = true;
  const int N = d + 2;
  for (int i = 1; i <= d; ++i) m.p_frame.push_back(unit(N, 0, i));
  for (int i = 1; i <= d; ++i) m.p_frame.push_back(unit(N, i, d + 1));
  m.basis = m.p_frame;
  m.xi_star = unit(N, 0, d + 1);
  m.basis.push_back(m.xi_star);
  m.dim_l = 0;
  m.dim_p = 2 * d;
  // Nilpotent: every ad is nilpotent, so the trace form vanishes.
  m.killing = Mat::Zero(static_cast<Eigen::Index>(m.basis.size()), static_cast<Eigen::Index>(m.basis.size()));
  m.space = make_space(d, false);
  return m;
}

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::heisenberg: return "heisenberg";
    case Family::su_pq: return "su_pq";
    case Family::sp_p_R: return "sp_p_R";
    case Family::so_p_2: return "so_p_2";
    case Family::so_star_2p: return "so_star_2p";
  }
  return "unknown";
}

Family parse_family(const std::string& s) {
  for (Family f : {Family::heisenberg, Family::su_pq, Family::sp_p_R, Family::so_p_2, Family::so_star_2p})
    if (family_name(f) == s) return f;
  throw std::invalid_argument("unknown family: " + s);
}

int expected_d(Family family, const std::vector<int>& params) {
  validate(family, params);
  const int p = params[0];
  switch (family) {
    case Family::heisenberg: return p;
    case Family::su_pq: return p * params[1];
    case Family::sp_p_R: return p * (p + 1) / 2;
    case Family::so_p_2: return p;
    case Family::so_star_2p: return p * (p - 1) / 2;
  }
  return 0;
}

LieModel build_model(Family family, const std::vector<int>& params, Scalar metric_scale) {
  validate(family, params);
  if (!(metric_scale > 0)) throw std::invalid_argument("build_model: metric scale must be positive");
  if (family == Family::heisenberg) {
    LieModel m = build_heisenberg(params[0]);
    m.metric_scale = metric_scale;
    return m;
  }

  Split raw;
  switch (family) {
    case Family::su_pq: raw = su_pq(params[0], params[1]); break;
    case Family::sp_p_R: raw = sp_R(params[0]); break;
    case Family::so_p_2: raw = so_p2(params[0]); break;
    case Family::so_star_2p: raw = so_star(params[0]); break;
    default: break;
  }

  LieModel m;
  m.family = family;
  m.params = params;
  m.metric_scale = metric_scale;
  std::vector<Mat> L = orthonormalize(raw.l);
  std::vector<Mat> P = orthonormalize(raw.p);
  m.dim_l = static_cast<int>(L.size());
  m.dim_p = static_cast<int>(P.size());
  m.basis = L;
  m.basis.insert(m.basis.end(), P.begin(), P.end());
  const int dim = m.dim_l + m.dim_p;

  Coords coord{flatten(m.basis)};
  std::vector<Mat> ad(dim, Mat(dim, dim));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) ad[i].col(j) = coord(commutator(m.basis[i], m.basis[j]));
  m.killing.resize(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) m.killing(i, j) = m.killing(j, i) = (ad[i] * ad[j]).trace();

  // Center of l: x with [x, l_b] = 0 for every b.
  const int nl = m.dim_l;
  Mat C(nl * nl, nl);
  for (int b = 0; b < nl; ++b)
    for (int a = 0; a < nl; ++a) C.block(b * nl, a, nl, 1) = ad[a].block(0, b, nl, 1);
  Mat center = null_space(C, 1e-9);
  if (center.cols() != 1) throw std::runtime_error("build_model: center of l is not one-dimensional");
  Vec xc = center.col(0);
  Eigen::Index imax;
  xc.cwiseAbs().maxCoeff(&imax);
  if (xc(imax) < 0) xc = -xc;

  Mat adxi = Mat::Zero(m.dim_p, m.dim_p);
  for (int a = 0; a < nl; ++a) adxi += xc(a) * ad[a].block(nl, nl, m.dim_p, m.dim_p);
  Scalar lam = -(adxi * adxi).trace() / m.dim_p;
  if (!(lam > 0)) throw std::runtime_error("build_model: ad xi is not a complex structure");
  adxi /= std::sqrt(lam);
  xc /= std::sqrt(lam);
  if ((adxi * adxi + Mat::Identity(m.dim_p, m.dim_p)).cwiseAbs().maxCoeff() > 1e-9)
    throw std::runtime_error("build_model: (ad xi*)^2 != -Id on p");
  m.xi_star = Mat::Zero(m.basis[0].rows(), m.basis[0].cols());
  for (int a = 0; a < nl; ++a) m.xi_star += xc(a) * L[a];

  // J-adapted frame, orthonormal for metric_scale * beta restricted to p.
  Mat Bp = metric_scale * m.killing.block(nl, nl, m.dim_p, m.dim_p);
  const int d = m.dim_p / 2;
  std::vector<Vec> es, span;
  for (int k = 0; k < m.dim_p && static_cast<int>(es.size()) < d; ++k) {
    Vec v = Vec::Unit(m.dim_p, k);
    for (const Vec& w : span) v -= w.dot(Bp * v) * w;
    Scalar nv = v.dot(Bp * v);
    if (nv < 1e-8) continue;
    v /= std::sqrt(nv);
    es.push_back(v);
    span.push_back(v);
    span.push_back(adxi * v);
  }
  if (static_cast<int>(es.size()) != d) throw std::runtime_error("build_model: frame construction failed");
  std::vector<Vec> frame = es;
  for (const Vec& v : es) frame.push_back(adxi * v);
  for (const Vec& v : frame) {
    Mat F = Mat::Zero(m.basis[0].rows(), m.basis[0].cols());
    for (int k = 0; k < m.dim_p; ++k) F += v(k) * P[k];
    m.p_frame.push_back(F);
  }
  m.d = d;
  m.space = make_space(d, false);
  return m;
}

Curv4 model_curvature(const LieModel& m) {
  if (m.flat) return Curv4::from(Tensor4(m.space), {Tag::pair_symmetric, Tag::bianchi_closed, Tag::j_plus});
  const int n = 2 * m.d;
  const int dim = m.dim_l + m.dim_p;
  Coords coord{flatten(m.basis)};
  const auto& pairs = wedge_pairs(n);
  const int np = static_cast<int>(pairs.size());
  Mat G(dim, np);
  for (int r = 0; r < np; ++r)
    G.col(r) = coord(commutator(m.p_frame[pairs[r].first], m.p_frame[pairs[r].second]));
  // R(X1,X2,X3,X4) = metric_scale * beta([X1,X2],[X3,X4])
  Mat grid = m.metric_scale * (G.transpose() * m.killing * G);
  grid = 0.5 * (grid + grid.transpose()).eval();
  Curv4 r = unhat({m.space, grid});
  return Curv4::detect(r);
}

Scalar c0_prime(const Curv4& rw) {
  Scalar s = ricci_contraction(rw).m.trace();
  if (std::abs(s) < 1e-12) throw std::domain_error("c0_prime: zero scalar curvature");
  return -4.0 * norm2(rw) / s;
}

Scalar kappa(const Curv4& rw) {
  const int n = rw.dim();
  const int n2 = n * n;
  // Op maps s to ring(R, s) on flattened n x n grids.
  Mat op(n2, n2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) op(x + n * y, i + n * j) = rw(i, x, y, j);
  // Orthonormal basis of traceless symmetric tensors.
  const int k = n * (n + 1) / 2 - 1;
  Mat B = Mat::Zero(n2, k);
  int col = 0;
  const Scalar r2 = 1.0 / std::sqrt(2.0);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      B(a + n * b, col) = r2;
      B(b + n * a, col) = r2;
      ++col;
    }
  for (int t = 1; t < n; ++t) {
    Scalar nrm = std::sqrt(static_cast<Scalar>(t) + static_cast<Scalar>(t) * t);
    for (int i = 0; i < t; ++i) B(i + n * i, col) = 1.0 / nrm;
    B(t + n * t, col) = -static_cast<Scalar>(t) / nrm;
    ++col;
  }
  Mat M = B.transpose() * op * B;
  M = 0.5 * (M + M.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Mat> es(M, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Scalar c0_constant(const Curv4& rw) {
  const int d = rw.space()->d;
  if (d < 2) throw std::invalid_argument("c0_constant: needs d >= 2");
  InvariantReport inv = invariants(rw);
  if (std::abs(inv.scalar) < 1e-12) throw std::domain_error("c0_constant: zero scalar curvature");
  return -(8.0 * d / (d - 1.0)) * inv.cm_norm2 / inv.scalar;
}

Curv4 parallel_q_tensor(const Curv4& rw) {
  Scalar c0 = c0_constant(rw);
  InvariantReport inv = invariants(rw);
  return c0 * canonical_tensors(rw.space()).Ic0 + inv.cm;
}

int holonomy_commutant_dim(const Curv4& rw, Scalar tol) {
  const int n = rw.dim();
  const int n2 = n * n;
  Mat normal = Mat::Zero(n2, n2);
  Mat I = Mat::Identity(n, n);
  for (auto [a, b] : wedge_pairs(n)) {
    Mat E(n, n);
    for (int c = 0; c < n; ++c)
      for (int e = 0; e < n; ++e) E(c, e) = rw(a, b, c, e);
    // vec(E T - T E) = (I (x) E - E^T (x) I) vec(T), column-major vec
    Mat C = Mat::Zero(n2, n2);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        C.block(i * n, j * n, n, n) += I(i, j) * E;
        C.block(i * n, j * n, n, n) -= E(j, i) * I;
      }
    normal += C.transpose() * C;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(normal, Eigen::EigenvaluesOnly);
  Scalar top = std::max<Scalar>(1e-300, es.eigenvalues().cwiseAbs().maxCoeff());
  int count = 0;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
    if (std::abs(es.eigenvalues()(k)) <= tol * top) ++count;
  return count;
}

std::optional<ClosedForm> closed_form(Family family, const std::vector<int>& params) {
  validate(family, params);
  const Scalar p = params[0];
  switch (family) {
    case Family::heisenberg: return std::nullopt;
    case Family::su_pq: {
      const Scalar q = params[1];
      return ClosedForm{(p * q + 1) / ((p + q) * (p + q)), -1.0 / (p + q)};
    }
    case Family::sp_p_R: return ClosedForm{0.25 + (3 + p) / (4 * (p + 1) * (p + 1)), -1.0 / (p + 1)};
    case Family::so_p_2: return ClosedForm{3.0 / (2 * p) - 1.0 / (p * p), -1.0 / p};
    case Family::so_star_2p:
      return ClosedForm{0.25 + (3 - p) / (4 * (p - 1) * (p - 1)), -1.0 / (2 * (p - 1))};
  }
  return std::nullopt;
}

ModelDiagnostics diagnose(const LieModel& m) {
  ModelDiagnostics dg;
  if (m.flat) return dg;
  const int nl = m.dim_l, np = m.dim_p, dim = nl + np;
  Coords coord{flatten(m.basis)};
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      bool il = i < nl, jl = j < nl;
      if (il == jl && !il) {
        Vec c = coord(commutator(m.basis[i], m.basis[j]));
        dg.bracket_pp = std::max(dg.bracket_pp, c.tail(np).cwiseAbs().maxCoeff());
      } else if (il != jl) {
        Vec c = coord(commutator(m.basis[i], m.basis[j]));
        dg.bracket_lp = std::max(dg.bracket_lp, c.head(nl).cwiseAbs().maxCoeff());
      }
    }
  Mat adxi(np, np);
  for (int j = 0; j < np; ++j) adxi.col(j) = coord(commutator(m.xi_star, m.basis[nl + j])).tail(np);
  dg.complex_structure = (adxi * adxi + Mat::Identity(np, np)).cwiseAbs().maxCoeff();
  const int n = 2 * m.d;
  Mat gram(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      gram(a, b) = m.metric_scale * coord(m.p_frame[a]).dot(m.killing * coord(m.p_frame[b]));
  dg.frame_orthonormality = (gram - Mat::Identity(n, n)).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Mat> ep(m.killing.block(nl, nl, np, np), Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Mat> el(m.killing.block(0, 0, nl, nl), Eigen::EigenvaluesOnly);
  dg.min_beta_p = ep.eigenvalues().minCoeff();
  dg.max_beta_l = el.eigenvalues().maxCoeff();
  return dg;
}

}  // namespace pshc
