#pragma once

#include "pshc/tensor_space.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace pshc {

/// E-valued symmetric 2-tensor, one grid per fiber component.
using EValued = std::vector<Mat>;

// (h . k)(X,Y,Z,W) = h(X,Y)k(Z,W) + h(Z,W)k(X,Y)
Tensor4 sym_product(const Bil2& h, const Bil2& k);
// (h x k)(X,Y,Z,W) = h(X,Y)k(Z,W)
Tensor4 tensor_product(const Bil2& h, const Bil2& k);
Curv4 kulkarni(const Bil2& h, const Bil2& k);
Tensor4 bianchi_map(const Tensor4& q);
Bil2 ricci_contraction(const Tensor4& q);

Endo2Forms hat(const Tensor4& q);
Curv4 unhat(const Endo2Forms& e);
Scalar trace_hat(const Tensor4& q);
// <P,Q> = 1/2 tr(P^ Q^); both arguments must carry pair_symmetric.
Scalar scalar_product(const Curv4& p, const Curv4& q);
Scalar norm2(const Curv4& q);

std::pair<Curv4, Curv4> j_split(const Curv4& q);
std::pair<Curv4, Curv4> tau_split(const Curv4& q);

// Q^ gamma (X,Y) = 1/2 sum Q(e_i,e_j,X,Y) gamma(e_i,e_j)
Bil2 hat_form(const Tensor4& q, const Bil2& gamma);
Scalar wedge_adjoint(const Bil2& gamma);
Bil2 primitive_form(const Bil2& gamma);
Curv4 primitive_part(const Curv4& q);
Bil2 traceless_part(const Bil2& s);

// (Q ring s)(X,Y) = sum Q(e_i,X,Y,e_j) s(e_i,e_j)
Mat ring(const Tensor4& q, const Mat& s);
EValued ring(const Tensor4& q, const EValued& s);
// (T^* s)(X,Y) = s(TX,TY)
Mat pull(const Mat& s, const Mat& T);
EValued pull(const EValued& s, const Mat& T);

// <s,t> = 1/2 sum s_ab t_ab, summed over fibers for E-valued tensors.
Scalar sym_inner(const Mat& s, const Mat& t);
Scalar sym_inner(const EValued& s, const EValued& t);

struct CanonicalTensors {
  Curv4 gkg;
  Curv4 wkw;
  Curv4 wsw;
  Curv4 Ic;
  Curv4 Ic0;
  std::optional<Curv4> T;
  std::optional<Curv4> T0;
};

CanonicalTensors canonical_tensors(const SpacePtr& s);

// Projectors used for tag checks and random generation.
Tensor4 pair_symmetrize(const Tensor4& q);
Tensor4 antisymmetrize(const Tensor4& q);
Tensor4 bianchi_project(const Tensor4& q);
Tensor4 j_project(const Tensor4& q, int sign);
Tensor4 tau_project(const Tensor4& q, int sign);
Tensor4 primitive_project(const Tensor4& q);

}  // namespace pshc
