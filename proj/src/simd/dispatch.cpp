#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_impl.hpp"

namespace fairprice::simd {

namespace {

bool cpu_has_avx2() {
#if defined(FAIRPRICE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable& select_kernels() {
  if (const char* forced = std::getenv("FAIRPRICE_SIMD"); forced != nullptr) {
    const std::string name{forced};
    if (name == "scalar") return detail::kScalarTable;
  }
  if (const KernelTable* avx2 = kernels_for(Isa::avx2)) return *avx2;
  return detail::kScalarTable;
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

const KernelTable& scalar_kernels() { return detail::kScalarTable; }

const KernelTable* kernels_for(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return &detail::kScalarTable;
    case Isa::avx2:
#if defined(FAIRPRICE_HAVE_AVX2)
      if (cpu_has_avx2()) return &detail::kAvx2Table;
#endif
      return nullptr;
  }
  return nullptr;
}

std::vector<Isa> available_isas() {
  std::vector<Isa> isas{Isa::scalar};
  if (kernels_for(Isa::avx2) != nullptr) isas.push_back(Isa::avx2);
  return isas;
}

const KernelTable& active_kernels() {
  static const KernelTable& table = select_kernels();
  return table;
}

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

void contract(std::span<const double> next, std::span<double> out, double w_up, double w_down) {
  require(next.size() == 2 * out.size(), "contract: child level must be twice the parent level");
  active_kernels().contract(next.data(), out.data(), out.size(), w_up, w_down);
}

void expand(std::span<const double> parent, std::span<double> out, double w_up, double w_down) {
  require(out.size() == 2 * parent.size(), "expand: child level must be twice the parent level");
  active_kernels().expand(parent.data(), out.data(), parent.size(), w_up, w_down);
}

void hedge_ratio(std::span<const double> value, std::span<const double> price, std::span<double> out) {
  require(value.size() == 2 * out.size() && price.size() == value.size(),
          "hedge_ratio: child levels must be twice the output level");
  active_kernels().hedge_ratio(value.data(), price.data(), out.data(), out.size());
}

void multiply_accumulate(std::span<double> acc, std::span<const double> a, std::span<const double> b) {
  require(a.size() == acc.size() && b.size() == acc.size(), "multiply_accumulate: size mismatch");
  active_kernels().multiply_accumulate(acc.data(), a.data(), b.data(), acc.size());
}

double dot(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), "dot: size mismatch");
  return active_kernels().dot(a.data(), b.data(), a.size());
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), "max_abs_diff: size mismatch");
  return active_kernels().max_abs_diff(a.data(), b.data(), a.size());
}

}  // namespace fairprice::simd
