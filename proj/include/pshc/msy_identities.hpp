#pragma once

#include "pshc/lie_models.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pshc {

/// Pointwise data of a horizontal map H -> H'.  Fiber index of nabla_sym
/// runs over the target frame.
struct MapDatum {
  SpacePtr source;
  SpacePtr target;
  Scalar f = 1.0;
  Mat dphi;          // 2d' x 2d
  Vec dphi_xi;       // horizontal part of dphi(xi), length 2d'
  EValued nabla_sym; // N + N^T, 2d' grids of size 2d x 2d
  bool is_cr = false;
};

MapDatum random_map_datum(const SpacePtr& source, const SpacePtr& target, std::uint64_t seed);
// CR datum with J' dphi = dphi J and pullback metric f g; needs d' >= d.
MapDatum cr_map_datum(const SpacePtr& source, const SpacePtr& target, Scalar f, std::uint64_t seed);

// Full covariant derivative N = 1/2 nabla_sym - 1/2 omega (x) dphi_xi.
EValued covariant_derivative(const MapDatum& m);
// delta = -1/2 tr(nabla_sym) = -tr(N), a vector in H'.
Vec codifferential(const MapDatum& m);

enum class QVariant { gg_minus, gg_plus_primitive, parallel_cm, gg_minus_tau_plus, ic_primitive_tau_minus };
std::string variant_name(QVariant v);
// parallel_cm needs rw; the tau variants need torsion on the space.
Curv4 canonical_Q(const SpacePtr& s, QVariant v, const Curv4* rw = nullptr);

enum class QSubspace { all, plus, minus, plus_primitive };
// Random Q with hat(Q) supported on the chosen Lambda^2 subspace, optionally with (c Q)_0 = 0.
Curv4 random_constrained_Q(const SpacePtr& s, QSubspace sub, bool ricci_traceless,
                           std::uint64_t seed);

Bil2 pullback2(const Bil2& t, const MapDatum& m);
Curv4 pullback4(const Curv4& q, const MapDatum& m);
Tensor4 pullback4(const Tensor4& q, const MapDatum& m);

struct MsyTermReport {
  Scalar r20 = 0;
  Scalar r11 = 0;
  Scalar hbk = 0;
  Scalar k = 0;
  Scalar pair_gg_minus = 0;   // <(g^g)^-, phi*R>
  Scalar pair_gg_plus_primitive = 0;   // <(g^g)_0^+, phi*R>
  Scalar trace_plus = 0;       // tr hat((phi*R)^+)
  Scalar trace_minus = 0;      // tr hat((phi*R)^-)
  Scalar delta_norm2 = 0;
  Scalar dphi_xi_norm2 = 0;
  Scalar ring_gg_minus = 0;   // <Q ring (nabla)_0, (nabla)_0> for Q = (g^g)^-
  Scalar ring_gg_plus_primitive = 0;
  Scalar tau_term_norm2 = 0;   // |f tau' o dphi|^2, zero without target torsion
};

MsyTermReport curvature_terms(const Curv4& q_target, const MapDatum& m);

struct IdentityResult {
  std::string name;
  int trials = 0;
  Scalar max_residual = 0;
  Scalar min_residual = 0;
  std::uint64_t worst_seed = 0;
  bool pass = false;
};

struct SuiteReport {
  int d = 0;
  int d_prime = 0;
  int fiber_dim = 0;
  std::uint64_t seed = 0;
  bool negative_control = false;
  Scalar tol = kTol;
  std::vector<IdentityResult> results;
  bool all_pass() const;
};

// Negative-control mode evaluates every identity on inputs that violate its
// hypothesis; residuals are then expected to be large.
SuiteReport identity_suite(int d, int d_prime, int fiber_dim, std::uint64_t seed, int trials,
                           bool negative_control = false, Scalar tol = kTol);

// Scaled residual |a - b| / max(1, |a|, |b|).
Scalar scaled_residual(Scalar a, Scalar b);

// Operator relations on random E-valued symmetric tensors;
// returns the max-abs componentwise residual.
Scalar operator_relation_residual(const SpacePtr& s, int fiber_dim, std::uint64_t seed, bool perturb = false);
Scalar torsion_relation_residual(const SpacePtr& s, int fiber_dim, std::uint64_t seed, bool perturb = false);

}  // namespace pshc
