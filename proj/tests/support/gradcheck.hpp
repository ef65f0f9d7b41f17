#pragma once

// Central finite differences against analytic gradients, in double
// precision. Used for both the classifier cross-entropy and the embedder
// InfoNCE oracle checks.

#include <cmath>
#include <functional>

namespace gradcheck {

// Relative error between an analytic derivative and a central difference of
// the loss functional; the denominator guards near-zero gradients.
inline double relative_error(double analytic, double numeric) {
  double scale = std::max({std::fabs(analytic), std::fabs(numeric), 1e-8});
  return std::fabs(analytic - numeric) / scale;
}

// Perturbs a single parameter through set(), evaluating loss() at +/-h.
inline double central_difference(const std::function<void(double)>& set,
                                 const std::function<double()>& loss,
                                 double x0, double h = 1e-4) {
  set(x0 + h);
  double up = loss();
  set(x0 - h);
  double down = loss();
  set(x0);
  return (up - down) / (2 * h);
}

}  // namespace gradcheck
