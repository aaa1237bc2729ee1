#pragma once

#include "pshc/tensor_space.hpp"

#include <doctest.h>

#include <cmath>

namespace testutil {

inline double mat_diff(const pshc::Mat& a, const pshc::Mat& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Brute-force value of h^k on frame slots, written out from the defining formula.
inline double kn_slot(const pshc::Mat& h, const pshc::Mat& k, int x, int y, int z, int w) {
  auto s = [&](int a, int b, int c, int d) { return h(a, b) * k(c, d) + h(c, d) * k(a, b); };
  return s(x, z, y, w) - s(x, w, y, z);
}

}  // namespace testutil
