#pragma once

#include <Eigen/Dense>

#include "ample/errors.hpp"
#include "ample/pointwise/curvature.hpp"

namespace ample::pointwise {

/// alpha ^ beta against sqrt(-1)dz1 dz1bar ^ sqrt(-1)dz2 dz2bar.
inline cplx wedge_density(const Form11& alpha, const Form11& beta) {
  return alpha(0, 0) * beta(1, 1) + alpha(1, 1) * beta(0, 0) - alpha(0, 1) * beta(1, 0) -
         alpha(1, 0) * beta(0, 1);
}

struct ChernDensities {
  double c1sq = 0;
  double c2 = 0;
};

/// c1^2 = (tr Theta)^2 and c2 = 1/2 [(tr Theta)^2 - tr(Theta ^ Theta)].
inline ChernDensities chern_densities(const PointCurvature& pc) {
  require_consistent(pc);
  const int r = pc.rank();
  Form11 tr = Form11::Zero();
  for (int i = 0; i < r; ++i) tr += pc.block(i, i);
  const cplx c1sq = wedge_density(tr, tr);
  cplx tr_sq = 0;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) tr_sq += wedge_density(pc.block(i, j), pc.block(j, i));
  return {c1sq.real(), 0.5 * (c1sq - tr_sq).real()};
}

/// <v, Theta v> = sum_ij conj(v_i) Theta_i^j v_j, a Hermitian 2x2 form.
inline Form11 pair_form(const PointCurvature& pc, const Eigen::VectorXcd& v) {
  const int r = pc.rank();
  Form11 out = Form11::Zero();
  for (int i = 0; i < r; ++i) {
    const cplx vi = std::conj(v(i));
    if (vi == cplx(0)) continue;
    for (int j = 0; j < r; ++j) out += (vi * v(j)) * pc.block(i, j);
  }
  return out;
}

}  // namespace ample::pointwise
