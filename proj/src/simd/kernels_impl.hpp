#pragma once

#include "fairprice/simd/kernels.hpp"

namespace fairprice::simd::detail {

extern const KernelTable kScalarTable;

#if defined(FAIRPRICE_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif

}  // namespace fairprice::simd::detail
