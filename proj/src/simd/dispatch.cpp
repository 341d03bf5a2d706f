#include "cubefm/simd/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace cubefm::simd {

const char* to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

const Kernels* kernels_for(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return &detail::kScalarKernels;
    case Isa::Avx2:
#if defined(CUBEFM_WITH_AVX2) && (defined(__GNUC__) || defined(__clang__))
      if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
        return &detail::kAvx2Kernels;
      }
#endif
      return nullptr;
  }
  return nullptr;
}

namespace {

const Kernels& select() {
  const char* forced = std::getenv("CUBEFM_ISA");
  if (forced != nullptr && std::strcmp(forced, "scalar") == 0) return detail::kScalarKernels;
  if (const Kernels* k = kernels_for(Isa::Avx2)) return *k;
  return detail::kScalarKernels;
}

}  // namespace

const Kernels& kernels() {
  static const Kernels& active = select();
  return active;
}

}  // namespace cubefm::simd
