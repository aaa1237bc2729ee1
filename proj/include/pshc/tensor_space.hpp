#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pshc {

using Scalar = double;
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using CVec = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

// Componentwise tolerance for identities built from O(d^2)-term sums.
inline constexpr Scalar kExactTol = 1e-12;
inline constexpr Scalar kTol = 1e-9;

/// Horizontal space H of dimension n = 2d in the adapted frame
/// e_1..e_d, Je_1..Je_d.  Matrices act on column vectors, so J(:,a) is J e_a.
/// Bilinear forms are grids, omega(a,b) = g(J e_a, e_b).
struct HorizontalSpace {
  int d = 0;
  int n = 0;
  Mat g;
  Mat J;
  Mat omega;
  std::optional<Mat> tau;
  std::optional<Mat> A;
  std::optional<Mat> B;

  bool has_torsion() const { return tau.has_value(); }
};

using SpacePtr = std::shared_ptr<const HorizontalSpace>;

SpacePtr make_space(int d, bool with_torsion);

// Throws std::invalid_argument when the two spaces differ in d or torsion.
void require_same_space(const SpacePtr& a, const SpacePtr& b);

enum class Symmetry { symmetric, antisymmetric, general };

struct Bil2 {
  SpacePtr space;
  Mat m;
  Symmetry symmetry = Symmetry::general;

  Bil2() = default;
  Bil2(SpacePtr s, Mat entries, Symmetry sym);

  Scalar operator()(int a, int b) const { return m(a, b); }
  Scalar eval(const Vec& x, const Vec& y) const { return x.dot(m * y); }
};

Bil2 metric(const SpacePtr& s);
Bil2 fundamental_form(const SpacePtr& s);
Bil2 torsion_form_A(const SpacePtr& s);
Bil2 torsion_form_B(const SpacePtr& s);

enum class Tag : std::uint32_t {
  pair_symmetric = 1u << 0,
  bianchi_closed = 1u << 1,
  j_plus = 1u << 2,
  j_minus = 1u << 3,
  tau_plus = 1u << 4,
  tau_minus = 1u << 5,
  primitive = 1u << 6,
};

class TagSet {
 public:
  TagSet() = default;
  TagSet(std::initializer_list<Tag> tags);

  bool has(Tag t) const { return (bits_ & static_cast<std::uint32_t>(t)) != 0; }
  TagSet& add(Tag t);
  TagSet& remove(Tag t);
  TagSet intersect(TagSet o) const;
  bool empty() const { return bits_ == 0; }
  std::uint32_t bits() const { return bits_; }
  std::vector<Tag> list() const;
  bool operator==(const TagSet&) const = default;

 private:
  std::uint32_t bits_ = 0;
};

std::string tag_name(Tag t);

/// Dense 4-index tensor on H, index order (a,b,c,d) row major.
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(SpacePtr s);

  const SpacePtr& space() const { return space_; }
  int dim() const { return n_; }

  Scalar& operator()(int a, int b, int c, int d) { return v_[idx(a, b, c, d)]; }
  Scalar operator()(int a, int b, int c, int d) const { return v_[idx(a, b, c, d)]; }

  const std::vector<Scalar>& data() const { return v_; }
  std::vector<Scalar>& data() { return v_; }

  Scalar max_abs() const;
  Scalar frobenius() const;

  // Q(T.,T.,Z,W) and Q(X,Y,T.,T.) for an endomorphism T.
  Tensor4 act_first(const Mat& T) const;
  Tensor4 act_second(const Mat& T) const;
  // Slot permutation: result(x0,x1,x2,x3) = this(x[p0],x[p1],x[p2],x[p3]).
  Tensor4 permuted(int p0, int p1, int p2, int p3) const;

  Tensor4& operator+=(const Tensor4& o);
  Tensor4& operator-=(const Tensor4& o);
  Tensor4& operator*=(Scalar s);

 protected:
  std::size_t idx(int a, int b, int c, int d) const {
    return ((static_cast<std::size_t>(a) * n_ + b) * n_ + c) * n_ + d;
  }
  SpacePtr space_;
  int n_ = 0;
  std::vector<Scalar> v_;
};

Tensor4 operator+(Tensor4 a, const Tensor4& b);
Tensor4 operator-(Tensor4 a, const Tensor4& b);
Tensor4 operator*(Scalar s, Tensor4 a);
Scalar max_abs_diff(const Tensor4& a, const Tensor4& b);

/// Tensor antisymmetric in slots (1,2) and (3,4) with verified tags.
class Curv4 : public Tensor4 {
 public:
  Curv4() = default;
  explicit Curv4(SpacePtr s) : Tensor4(std::move(s)) {}

  // Checks antisymmetry and every claimed tag; throws std::invalid_argument.
  static Curv4 from(const Tensor4& t, TagSet claimed, Scalar tol = kTol);
  // Keeps the antisymmetry check, records whichever tags hold.
  static Curv4 detect(const Tensor4& t, Scalar tol = kTol);

  TagSet tags() const { return tags_; }
  void set_tags_unchecked(TagSet t) { tags_ = t; }

  Curv4& operator+=(const Curv4& o);
  Curv4& operator-=(const Curv4& o);
  Curv4& operator*=(Scalar s);

 private:
  TagSet tags_;
};

Curv4 operator+(Curv4 a, const Curv4& b);
Curv4 operator-(Curv4 a, const Curv4& b);
Curv4 operator*(Scalar s, Curv4 a);

bool check_tag(const Tensor4& t, Tag tag, Scalar tol = kTol);
Scalar antisymmetry_defect(const Tensor4& t);

/// Operator on Lambda^2 H in the lexicographic basis e_a ^ e_b, a < b.
struct Endo2Forms {
  SpacePtr space;
  Mat m;
};

// Lexicographic enumeration of pairs a<b and its inverse.
const std::vector<std::pair<int, int>>& wedge_pairs(int n);
int wedge_index(int n, int a, int b);

struct ComplexFrame {
  SpacePtr space;
  std::vector<CVec> Z;
};

ComplexFrame complexify(const SpacePtr& s);
// Bilinear complexified metric (no conjugation).
std::complex<Scalar> cmetric(const SpacePtr& s, const CVec& x, const CVec& y);

Bil2 random_bil2(const SpacePtr& s, Symmetry sym, std::uint64_t seed);
Curv4 random_curv4(const SpacePtr& s, TagSet tags, std::uint64_t seed);

}  // namespace pshc
