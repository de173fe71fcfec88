#pragma once

#include "coincidia/kernels.hpp"

namespace coincidia::kernels {

namespace scalar {
extern const KernelTable table;
}
#if defined(COINCIDIA_HAVE_AVX2)
namespace avx2 {
extern const KernelTable table;
}
#endif
#if defined(COINCIDIA_HAVE_NEON)
namespace neon {
extern const KernelTable table;
}
#endif

}  // namespace coincidia::kernels
