#include <atomic>
#include <string>

#include "kkscatter/errors.hpp"
#include "kkscatter/simd/kernels.hpp"

namespace kkscatter::simd {

#if !defined(KKSCATTER_HAVE_AVX2)
namespace detail {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace detail
#endif

namespace {

bool cpu_has_avx2() {
#if defined(KKSCATTER_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

std::atomic<Isa>& active_slot() {
  static std::atomic<Isa> slot{detected_isa()};
  return slot;
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

Isa parse_isa(std::string_view text) {
  if (text == "scalar") return Isa::kScalar;
  if (text == "avx2") return Isa::kAvx2;
  if (text == "auto") return detected_isa();
  throw ConfigError("unknown SIMD target '" + std::string(text) + "' (expected auto|scalar|avx2)");
}

Isa detected_isa() {
  static const Isa detected = cpu_has_avx2() ? Isa::kAvx2 : Isa::kScalar;
  return detected;
}

bool isa_supported(Isa isa) {
  return isa == Isa::kScalar || (isa == Isa::kAvx2 && detected_isa() == Isa::kAvx2);
}

Isa active_isa() { return active_slot().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!isa_supported(isa)) {
    throw DomainError("SIMD target '" + std::string(to_string(isa)) + "' is not supported here");
  }
  active_slot().store(isa, std::memory_order_relaxed);
}

const KernelTable& kernels_for(Isa isa) {
  if (isa == Isa::kAvx2) {
    if (!isa_supported(isa)) throw DomainError("avx2 kernels are not available");
    return *detail::avx2_table();
  }
  return detail::scalar_table();
}

const KernelTable& kernels() { return kernels_for(active_isa()); }

}  // namespace kkscatter::simd
