#include "kernels_impl.hpp"

#include <cstdlib>
#include <cstring>

namespace mcf::simd {

const char *to_string(Isa isa) noexcept {
  switch (isa) {
  case Isa::scalar:
    return "scalar";
  case Isa::avx2:
    return "avx2";
  }
  return "?";
}

namespace {

bool cpu_has(Isa isa) noexcept {
  switch (isa) {
  case Isa::scalar:
    return true;
  case Isa::avx2:
#if defined(MCF_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
  }
  return false;
}

const KernelTable &select() noexcept {
  if (const char *env = std::getenv("MCF_SIMD")) {
    if (std::strcmp(env, "scalar") == 0)
      return scalar_kernels();
    if (std::strcmp(env, "avx2") == 0)
      if (const auto *t = kernels_for(Isa::avx2))
        return *t;
  }
  if (const auto *t = kernels_for(Isa::avx2))
    return *t;
  return scalar_kernels();
}

} // namespace

const KernelTable *kernels_for(Isa isa) noexcept {
  if (!cpu_has(isa))
    return nullptr;
  switch (isa) {
  case Isa::scalar:
    return &scalar_kernels();
  case Isa::avx2:
#if defined(MCF_HAVE_AVX2)
    return &detail::avx2_table();
#else
    return nullptr;
#endif
  }
  return nullptr;
}

const KernelTable &active_kernels() noexcept {
  static const KernelTable &table = select();
  return table;
}

} // namespace mcf::simd
