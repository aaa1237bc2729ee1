#include "pshc/tensor_space.hpp"

#include "pshc/curvature_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>

namespace pshc {

SpacePtr make_space(int d, bool with_torsion) {
  if (d < 1) throw std::invalid_argument("make_space: d must be >= 1");
  auto s = std::make_shared<HorizontalSpace>();
  s->d = d;
  s->n = 2 * d;
  const int n = s->n;
  s->g = Mat::Identity(n, n);
  s->J = Mat::Zero(n, n);
  for (int i = 0; i < d; ++i) {
    s->J(i + d, i) = 1.0;
    s->J(i, i + d) = -1.0;
  }
  s->omega = s->J.transpose();
  if (with_torsion) {
    Mat tau = Mat::Zero(n, n);
    for (int i = 0; i < d; ++i) {
      tau(i, i) = 1.0;
      tau(i + d, i + d) = -1.0;
    }
    s->tau = tau;
    s->A = (s->g * tau).transpose();
    s->B = (s->J * tau).transpose();
  }
  return s;
}

void require_same_space(const SpacePtr& a, const SpacePtr& b) {
  if (!a || !b) throw std::invalid_argument("null space");
  if (a == b) return;
  if (a->d != b->d || a->has_torsion() != b->has_torsion())
    throw std::invalid_argument("space mismatch");
}

Bil2::Bil2(SpacePtr s, Mat entries, Symmetry sym)
    : space(std::move(s)), m(std::move(entries)), symmetry(sym) {
  if (m.rows() != space->n || m.cols() != space->n)
    throw std::invalid_argument("Bil2: wrong grid size");
  Scalar scale = std::max<Scalar>(1.0, m.cwiseAbs().maxCoeff());
  if (sym == Symmetry::symmetric && (m - m.transpose()).cwiseAbs().maxCoeff() > kTol * scale)
    throw std::invalid_argument("Bil2: not symmetric");
  if (sym == Symmetry::antisymmetric && (m + m.transpose()).cwiseAbs().maxCoeff() > kTol * scale)
    throw std::invalid_argument("Bil2: not antisymmetric");
}

Bil2 metric(const SpacePtr& s) { return Bil2(s, s->g, Symmetry::symmetric); }
Bil2 fundamental_form(const SpacePtr& s) { return Bil2(s, s->omega, Symmetry::antisymmetric); }

Bil2 torsion_form_A(const SpacePtr& s) {
  if (!s->A) throw std::invalid_argument("space has no torsion");
  return Bil2(s, *s->A, Symmetry::symmetric);
}

Bil2 torsion_form_B(const SpacePtr& s) {
  if (!s->B) throw std::invalid_argument("space has no torsion");
  return Bil2(s, *s->B, Symmetry::symmetric);
}

TagSet::TagSet(std::initializer_list<Tag> tags) {
  for (Tag t : tags) add(t);
}

TagSet& TagSet::add(Tag t) {
  bits_ |= static_cast<std::uint32_t>(t);
  return *this;
}

TagSet& TagSet::remove(Tag t) {
  bits_ &= ~static_cast<std::uint32_t>(t);
  return *this;
}

TagSet TagSet::intersect(TagSet o) const {
  TagSet r;
  r.bits_ = bits_ & o.bits_;
  return r;
}

static constexpr Tag kAllTags[] = {Tag::pair_symmetric, Tag::bianchi_closed, Tag::j_plus,
                                   Tag::j_minus,        Tag::tau_plus,       Tag::tau_minus,
                                   Tag::primitive};

std::vector<Tag> TagSet::list() const {
  std::vector<Tag> out;
  for (Tag t : kAllTags)
    if (has(t)) out.push_back(t);
  return out;
}

std::string tag_name(Tag t) {
  switch (t) {
    case Tag::pair_symmetric: return "pair_symmetric";
    case Tag::bianchi_closed: return "bianchi_closed";
    case Tag::j_plus: return "j_plus";
    case Tag::j_minus: return "j_minus";
    case Tag::tau_plus: return "tau_plus";
    case Tag::tau_minus: return "tau_minus";
    case Tag::primitive: return "primitive";
  }
  return "unknown";
}

Tensor4::Tensor4(SpacePtr s) : space_(std::move(s)) {
  n_ = space_->n;
  v_.assign(static_cast<std::size_t>(n_) * n_ * n_ * n_, 0.0);
}

Scalar Tensor4::max_abs() const {
  Scalar m = 0;
  for (Scalar x : v_) m = std::max(m, std::abs(x));
  return m;
}

Scalar Tensor4::frobenius() const {
  Scalar s = 0;
  for (Scalar x : v_) s += x * x;
  return std::sqrt(s);
}

Tensor4 Tensor4::act_first(const Mat& T) const {
  // out(a,b,c,d) = sum_xy T(x,a) T(y,b) Q(x,y,c,d)
  const int n = n_;
  const std::size_t n2 = static_cast<std::size_t>(n) * n;
  Tensor4 tmp(space_), out(space_);
  for (int x = 0; x < n; ++x)
    for (int b = 0; b < n; ++b)
      for (int y = 0; y < n; ++y) {
        Scalar t = T(y, b);
        if (t == 0) continue;
        const Scalar* src = &v_[idx(x, y, 0, 0)];
        Scalar* dst = &tmp.v_[tmp.idx(x, b, 0, 0)];
        for (std::size_t k = 0; k < n2; ++k) dst[k] += t * src[k];
      }
  for (int a = 0; a < n; ++a)
    for (int x = 0; x < n; ++x) {
      Scalar t = T(x, a);
      if (t == 0) continue;
      for (int b = 0; b < n; ++b) {
        const Scalar* src = &tmp.v_[tmp.idx(x, b, 0, 0)];
        Scalar* dst = &out.v_[out.idx(a, b, 0, 0)];
        for (std::size_t k = 0; k < n2; ++k) dst[k] += t * src[k];
      }
    }
  return out;
}

Tensor4 Tensor4::act_second(const Mat& T) const {
  return permuted(2, 3, 0, 1).act_first(T).permuted(2, 3, 0, 1);
}

Tensor4 Tensor4::permuted(int p0, int p1, int p2, int p3) const {
  Tensor4 out(space_);
  const int n = n_;
  int x[4];
  for (x[0] = 0; x[0] < n; ++x[0])
    for (x[1] = 0; x[1] < n; ++x[1])
      for (x[2] = 0; x[2] < n; ++x[2])
        for (x[3] = 0; x[3] < n; ++x[3])
          out(x[0], x[1], x[2], x[3]) = (*this)(x[p0], x[p1], x[p2], x[p3]);
  return out;
}

Tensor4& Tensor4::operator+=(const Tensor4& o) {
  require_same_space(space_, o.space_);
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
  return *this;
}

Tensor4& Tensor4::operator-=(const Tensor4& o) {
  require_same_space(space_, o.space_);
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
  return *this;
}

Tensor4& Tensor4::operator*=(Scalar s) {
  for (Scalar& x : v_) x *= s;
  return *this;
}

Tensor4 operator+(Tensor4 a, const Tensor4& b) { return a += b; }
Tensor4 operator-(Tensor4 a, const Tensor4& b) { return a -= b; }
Tensor4 operator*(Scalar s, Tensor4 a) { return a *= s; }

Scalar max_abs_diff(const Tensor4& a, const Tensor4& b) {
  require_same_space(a.space(), b.space());
  Scalar m = 0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

Scalar antisymmetry_defect(const Tensor4& t) {
  const int n = t.dim();
  Scalar m = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          Scalar v = t(a, b, c, d);
          m = std::max(m, std::abs(v + t(b, a, c, d)));
          m = std::max(m, std::abs(v + t(a, b, d, c)));
        }
  return m;
}

bool check_tag(const Tensor4& t, Tag tag, Scalar tol) {
  Scalar scale = std::max<Scalar>(1.0, t.max_abs());
  Scalar lim = tol * scale;
  switch (tag) {
    case Tag::pair_symmetric: return max_abs_diff(pair_symmetrize(t), t) <= lim;
    case Tag::bianchi_closed: return bianchi_map(t).max_abs() <= lim;
    case Tag::j_plus: return max_abs_diff(j_project(t, +1), t) <= lim;
    case Tag::j_minus: return max_abs_diff(j_project(t, -1), t) <= lim;
    case Tag::tau_plus:
      return t.space()->has_torsion() && max_abs_diff(tau_project(t, +1), t) <= lim;
    case Tag::tau_minus:
      return t.space()->has_torsion() && max_abs_diff(tau_project(t, -1), t) <= lim;
    case Tag::primitive:
      return hat_form(t, fundamental_form(t.space())).m.cwiseAbs().maxCoeff() <= lim;
  }
  return false;
}

Curv4 Curv4::from(const Tensor4& t, TagSet claimed, Scalar tol) {
  Scalar scale = std::max<Scalar>(1.0, t.max_abs());
  if (antisymmetry_defect(t) > tol * scale)
    throw std::invalid_argument("Curv4: not antisymmetric in (1,2) and (3,4)");
  for (Tag tag : claimed.list())
    if (!check_tag(t, tag, tol)) throw std::invalid_argument("Curv4: tag fails: " + tag_name(tag));
  Curv4 c(t.space());
  c.data() = t.data();
  c.tags_ = claimed;
  return c;
}

Curv4 Curv4::detect(const Tensor4& t, Scalar tol) {
  Curv4 c = from(t, {}, tol);
  for (Tag tag : kAllTags)
    if (check_tag(t, tag, tol)) c.tags_.add(tag);
  return c;
}

Curv4& Curv4::operator+=(const Curv4& o) {
  Tensor4::operator+=(o);
  tags_ = tags_.intersect(o.tags_);
  return *this;
}

Curv4& Curv4::operator-=(const Curv4& o) {
  Tensor4::operator-=(o);
  tags_ = tags_.intersect(o.tags_);
  return *this;
}

Curv4& Curv4::operator*=(Scalar s) {
  Tensor4::operator*=(s);
  return *this;
}

Curv4 operator+(Curv4 a, const Curv4& b) { return a += b; }
Curv4 operator-(Curv4 a, const Curv4& b) { return a -= b; }
Curv4 operator*(Scalar s, Curv4 a) { return a *= s; }

const std::vector<std::pair<int, int>>& wedge_pairs(int n) {
  static std::mutex mu;
  static std::map<int, std::vector<std::pair<int, int>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<std::pair<int, int>> p;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) p.emplace_back(a, b);
  return cache.emplace(n, std::move(p)).first->second;
}

int wedge_index(int n, int a, int b) {
  // rows before a: sum_{k<a} (n-1-k)
  return a * (2 * n - a - 1) / 2 + (b - a - 1);
}

ComplexFrame complexify(const SpacePtr& s) {
  ComplexFrame f{s, {}};
  const std::complex<Scalar> I(0, 1);
  const Scalar r = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < s->d; ++i) {
    CVec z = CVec::Zero(s->n);
    z(i) = r;
    z(i + s->d) = -I * r;
    f.Z.push_back(z);
  }
  return f;
}

std::complex<Scalar> cmetric(const SpacePtr& s, const CVec& x, const CVec& y) {
  return (x.transpose() * s->g.cast<std::complex<Scalar>>() * y)(0, 0);
}

Bil2 random_bil2(const SpacePtr& s, Symmetry sym, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<Scalar> N(0.0, 1.0);
  Mat m(s->n, s->n);
  for (int a = 0; a < s->n; ++a)
    for (int b = 0; b < s->n; ++b) m(a, b) = N(rng);
  if (sym == Symmetry::symmetric) m = 0.5 * (m + m.transpose()).eval();
  if (sym == Symmetry::antisymmetric) m = 0.5 * (m - m.transpose()).eval();
  return Bil2(s, m, sym);
}

Curv4 random_curv4(const SpacePtr& s, TagSet tags, std::uint64_t seed) {
  if (tags.has(Tag::j_plus) && tags.has(Tag::j_minus))
    throw std::invalid_argument("random_curv4: j_plus and j_minus are contradictory");
  if (tags.has(Tag::tau_plus) && tags.has(Tag::tau_minus))
    throw std::invalid_argument("random_curv4: tau_plus and tau_minus are contradictory");
  if ((tags.has(Tag::tau_plus) || tags.has(Tag::tau_minus)) && !s->has_torsion())
    throw std::invalid_argument("random_curv4: tau tags need torsion");
  if (tags.has(Tag::bianchi_closed) || tags.has(Tag::primitive)) tags.add(Tag::pair_symmetric);

  std::mt19937_64 rng(seed);
  std::normal_distribution<Scalar> N(0.0, 1.0);
  Tensor4 t(s);
  for (Scalar& x : t.data()) x = N(rng);
  t = antisymmetrize(t);

  auto project_all = [&](const Tensor4& in) {
    Tensor4 q = in;
    if (tags.has(Tag::pair_symmetric)) q = pair_symmetrize(q);
    if (tags.has(Tag::j_plus)) q = j_project(q, +1);
    if (tags.has(Tag::j_minus)) q = j_project(q, -1);
    if (tags.has(Tag::tau_plus)) q = tau_project(q, +1);
    if (tags.has(Tag::tau_minus)) q = tau_project(q, -1);
    if (tags.has(Tag::primitive)) q = primitive_project(q);
    if (tags.has(Tag::bianchi_closed)) q = bianchi_project(q);
    return q;
  };

  for (int it = 0; it < 2000; ++it) {
    Tensor4 next = project_all(t);
    Scalar delta = max_abs_diff(next, t);
    t = std::move(next);
    if (delta <= 1e-15 * std::max<Scalar>(1.0, t.max_abs())) break;
  }
  if (t.max_abs() < 1e-8) throw std::invalid_argument("random_curv4: tag set only admits zero");
  // Normalize to unit Frobenius norm so magnitudes are comparable across d.
  t *= 1.0 / t.frobenius();
  return Curv4::from(t, tags, kExactTol * 10);
}

}  // namespace pshc
