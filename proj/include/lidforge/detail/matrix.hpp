#pragma once

#include <cstddef>
#include <vector>

#include "lidforge/detail/rng.hpp"

namespace lidforge::detail {

// Dense row-major matrix. Templated on the scalar so the production models
// run float32 while gradient-oracle tests instantiate double.
template <typename Real>
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Real> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, Real(0)) {}

  Real* row(std::size_t i) { return data.data() + i * cols; }
  const Real* row(std::size_t i) const { return data.data() + i * cols; }

  Real& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  Real at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  void fill_uniform(Rng& rng, double lo, double hi) {
    for (auto& v : data) v = static_cast<Real>(rng.real(lo, hi));
  }

  bool operator==(const Matrix&) const = default;
};

template <typename Real>
Real dot(const Real* a, const Real* b, std::size_t n) {
  Real acc = 0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

template <typename Real>
void axpy(Real alpha, const Real* x, Real* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace lidforge::detail
