#include "kernels_impl.hpp"

#include <cmath>

namespace fairprice::simd::detail {

namespace {

void contract_scalar(const double* next, double* out, std::size_t n_out, double w_up, double w_down) {
  for (std::size_t i = 0; i < n_out; ++i) {
    out[i] = w_up * next[2 * i] + w_down * next[2 * i + 1];
  }
}

void expand_scalar(const double* parent, double* out, std::size_t n_parent, double w_up, double w_down) {
  for (std::size_t i = 0; i < n_parent; ++i) {
    out[2 * i] = parent[i] * w_up;
    out[2 * i + 1] = parent[i] * w_down;
  }
}

void hedge_ratio_scalar(const double* value, const double* price, double* out, std::size_t n_out) {
  for (std::size_t i = 0; i < n_out; ++i) {
    out[i] = (value[2 * i] - value[2 * i + 1]) / (price[2 * i] - price[2 * i + 1]);
  }
}

void multiply_accumulate_scalar(double* acc, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    acc[i] += a[i] * b[i];
  }
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    lane[i & 3] += a[i] * b[i];
  }
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double max_abs_diff_scalar(const double* a, const double* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::fabs(a[i] - b[i]);
    if (d > m) m = d;
  }
  return m;
}

}  // namespace

const KernelTable kScalarTable{
    Isa::scalar,
    "scalar",
    contract_scalar,
    expand_scalar,
    hedge_ratio_scalar,
    multiply_accumulate_scalar,
    dot_scalar,
    max_abs_diff_scalar,
};

}  // namespace fairprice::simd::detail
