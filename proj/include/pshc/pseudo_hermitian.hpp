#pragma once

#include "pshc/curvature_algebra.hpp"

#include <cstdint>
#include <utility>

namespace pshc {

struct Range {
  Scalar min = 0;
  Scalar max = 0;
};

struct CurvatureRanges {
  Range sectional;
  Range holomorphic;
  Range complex_sectional;
  int samples = 0;
};

struct InvariantReport {
  Bil2 ric;
  Scalar scalar = 0;
  Bil2 rho;
  Bil2 ric0;
  Bil2 rho0;
  Curv4 cm;
  Scalar cm_norm2 = 0;
  bool pseudo_einstein = false;
  // Max-abs defect of rw - (scalar part + Ricci part + cm).
  Scalar reconstruction_residual = 0;
};

// Requires rw pair_symmetric, bianchi_closed, j_plus and d >= 2.
InvariantReport invariants(const Curv4& rw, Scalar tol = kTol);
bool is_pseudo_einstein(const Curv4& rw, Scalar tol = kTol);

Curv4 space_form(const SpacePtr& s, Scalar scalar);

struct TorsionModel {
  Curv4 rw;
  Curv4 cm;
};
TorsionModel torsion_curvature(const SpacePtr& s, Scalar scalar);

// R_H = R^W - 1/2 (omega ^ A - g ^ B); equals R^W without torsion.
Tensor4 assemble_rh(const Curv4& rw);
// R^- from the closed form in tau and J, slot by slot.
Tensor4 torsion_part_closed_form(const SpacePtr& s);
// max |b(R_H) - (omega(X,Y)A(Z,W) + cyclic)| over frame slots
Scalar first_bianchi_residual(const Tensor4& rh, const SpacePtr& s);
// max |R(tau X, tau Y, Z, W) - R(X,Y,Z,W) + (s/(2d^2)) (omega . omega)(X,Y,Z,W)|
Scalar tau_conjugation_residual(const Curv4& rw, Scalar scalar);

Scalar sectional(const Tensor4& rw, const Vec& x, const Vec& y);
Scalar holomorphic_sectional(const Tensor4& rw, const Vec& x);
Scalar complex_sectional(const Tensor4& rw, const CVec& z, const CVec& w);
CurvatureRanges sample_curvatures(const Tensor4& rw, int samples, std::uint64_t seed);

// Evaluate a 4-tensor on complex vectors, multilinear without conjugation.
std::complex<Scalar> ceval(const Tensor4& q, const CVec& a, const CVec& b, const CVec& c,
                           const CVec& d);

}  // namespace pshc
