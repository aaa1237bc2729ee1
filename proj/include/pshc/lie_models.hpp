#pragma once

#include "pshc/pseudo_hermitian.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pshc {

enum class Family { heisenberg, su_pq, sp_p_R, so_p_2, so_star_2p };

std::string family_name(Family f);
Family parse_family(const std::string& s);

struct LieModel {
  Family family = Family::heisenberg;
  std::vector<int> params;
  // Real matrix realization; basis[0..dim_l) spans l, the rest spans p.
  std::vector<Mat> basis;
  int dim_l = 0;
  int dim_p = 0;
  Mat killing;       // beta(E_i, E_j) = tr(ad E_i ad E_j)
  Mat xi_star;       // central element of l, (ad xi*)^2 = -Id on p
  std::vector<Mat> p_frame;  // e_1..e_d, J e_1..J e_d, orthonormal for metric_scale * beta
  Scalar metric_scale = 1.0;
  int d = 0;
  bool flat = false;
  SpacePtr space;
};

LieModel build_model(Family family, const std::vector<int>& params, Scalar metric_scale = 1.0);

// Expected half-dimension of p from the family parameters.
int expected_d(Family family, const std::vector<int>& params);

Curv4 model_curvature(const LieModel& m);

Scalar c0_prime(const Curv4& rw);
Scalar kappa(const Curv4& rw);
Scalar c0_constant(const Curv4& rw);
Curv4 parallel_q_tensor(const Curv4& rw);

// Dimension of the commutant of {R(X,Y)} acting on H.
int holonomy_commutant_dim(const Curv4& rw, Scalar tol = 1e-9);

struct ClosedForm {
  Scalar c0_prime;
  Scalar kappa;
};
// Table values; nullopt for the flat family.
std::optional<ClosedForm> closed_form(Family family, const std::vector<int>& params);

// Structural defects of a model, all expected to vanish.
struct ModelDiagnostics {
  Scalar bracket_lp = 0;   // [l,p] outside p
  Scalar bracket_pp = 0;   // [p,p] outside l
  Scalar complex_structure = 0;  // |(ad xi*)^2 + Id| on p
  Scalar frame_orthonormality = 0;
  Scalar min_beta_p = 0;   // smallest eigenvalue of beta on p
  Scalar max_beta_l = 0;   // largest eigenvalue of beta on l
};
ModelDiagnostics diagnose(const LieModel& m);

}  // namespace pshc
