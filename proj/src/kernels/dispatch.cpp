#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "maxgap/kernels.hpp"

namespace maxgap::kernels {

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

std::optional<Isa> parse_isa(std::string_view name) {
  if (name == "scalar") return Isa::scalar;
  if (name == "avx2") return Isa::avx2;
  return std::nullopt;
}

bool supported(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(MAXGAP_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") != 0;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Isa isa) {
  if (!supported(isa)) throw std::runtime_error("kernel set not supported here: " + std::string(to_string(isa)));
#if defined(MAXGAP_HAVE_AVX2)
  if (isa == Isa::avx2) return detail::avx2_table;
#endif
  return detail::scalar_table;
}

namespace {

Isa detect() {
  if (const char* forced = std::getenv("MAXGAP_KERNELS")) {
    if (auto isa = parse_isa(forced); isa && supported(*isa)) return *isa;
  }
  return supported(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

const KernelTable& active() { return table(current().load(std::memory_order_relaxed)); }

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!supported(isa)) throw std::runtime_error("kernel set not supported here: " + std::string(to_string(isa)));
  current().store(isa, std::memory_order_relaxed);
}

}  // namespace maxgap::kernels
