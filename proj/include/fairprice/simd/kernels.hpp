#pragma once

// Level-wise arithmetic on a non-recombining binary lattice.
//
// A lattice level n is stored as a contiguous array of 2^n values in
// lexicographic path order (up before down), so the two children of node i
// sit at 2i (up) and 2i + 1 (down) of level n + 1. Every kernel below works on
// that layout.
//
// Each kernel has a scalar reference and, where the target allows it, an AVX2
// variant. Variants are required to be bit-identical to the reference: the
// vector code uses the same operation order and never fuses multiply-add.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace fairprice::simd {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  const char* name;

  // out[i] = w_up * next[2i] + w_down * next[2i + 1],  i < n_out
  void (*contract)(const double* next, double* out, std::size_t n_out, double w_up, double w_down);
  // out[2i] = parent[i] * w_up, out[2i + 1] = parent[i] * w_down,  i < n_parent
  void (*expand)(const double* parent, double* out, std::size_t n_parent, double w_up, double w_down);
  // out[i] = (value[2i] - value[2i + 1]) / (price[2i] - price[2i + 1]),  i < n_out
  void (*hedge_ratio)(const double* value, const double* price, double* out, std::size_t n_out);
  // acc[i] += a[i] * b[i]
  void (*multiply_accumulate)(double* acc, const double* a, const double* b, std::size_t n);
  // Sum of a[i] * b[i] accumulated in four interleaved lanes (lane = i mod 4),
  // combined as (l0 + l1) + (l2 + l3).
  double (*dot)(const double* a, const double* b, std::size_t n);
  // max |a[i] - b[i]|, 0 for empty input.
  double (*max_abs_diff)(const double* a, const double* b, std::size_t n);
};

const KernelTable& scalar_kernels();

// nullptr when the variant was not compiled in or the CPU lacks the feature.
const KernelTable* kernels_for(Isa isa);

// Variants usable on this machine, scalar first.
std::vector<Isa> available_isas();

// The table used by the library. Picks the widest supported variant once;
// setting FAIRPRICE_SIMD=scalar in the environment forces the reference.
const KernelTable& active_kernels();

std::string_view to_string(Isa isa);

// Checked span front-ends over active_kernels().
void contract(std::span<const double> next, std::span<double> out, double w_up, double w_down);
void expand(std::span<const double> parent, std::span<double> out, double w_up, double w_down);
void hedge_ratio(std::span<const double> value, std::span<const double> price, std::span<double> out);
void multiply_accumulate(std::span<double> acc, std::span<const double> a, std::span<const double> b);
double dot(std::span<const double> a, std::span<const double> b);
double max_abs_diff(std::span<const double> a, std::span<const double> b);

}  // namespace fairprice::simd
