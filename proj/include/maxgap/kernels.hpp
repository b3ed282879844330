#pragma once

// Data-parallel reductions behind the gap bounds. Every kernel works on
// structure-of-arrays interval data (lowers[k], uppers[k]) and comes in a
// scalar reference form and, where the CPU allows, an AVX2 form selected at
// runtime. The kernels only compare, select, subtract and take min/max, so
// both forms return bit-identical results.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace maxgap::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);
std::optional<Isa> parse_isa(std::string_view name);

struct KernelTable {
  /// min{ values[k] : keys[k] > x }, or +inf when no key exceeds x.
  double (*min_where_key_above)(const double* keys, const double* values, std::size_t n, double x);
  /// max{ values[k] : keys[k] < x }, or -inf when no key is below x.
  double (*max_where_key_below)(const double* keys, const double* values, std::size_t n, double x);
  /// max over j with lo <= anchors[j] <= hi of (nearest[j] == +inf ? fallback : nearest[j]) - anchors[j];
  /// -inf when the range holds no anchor.
  double (*right_gap_scan)(const double* anchors, const double* nearest, std::size_t n, double lo, double hi,
                           double fallback);
  /// max over j with lo <= anchors[j] <= hi of anchors[j] - (nearest[j] == -inf ? fallback : nearest[j]);
  /// -inf when the range holds no anchor.
  double (*left_gap_scan)(const double* anchors, const double* nearest, std::size_t n, double lo, double hi,
                          double fallback);
};

bool supported(Isa isa);

/// Table for a specific instruction set; throws std::runtime_error if unsupported.
const KernelTable& table(Isa isa);

/// The table chosen at startup: AVX2 when supported, unless the environment
/// variable MAXGAP_KERNELS=scalar overrides it.
const KernelTable& active();
Isa active_isa();

/// Overrides the runtime choice for the whole process.
void set_active_isa(Isa isa);

// Span wrappers over a chosen table.

inline double min_where_key_above(const KernelTable& t, std::span<const double> keys, std::span<const double> values,
                                  double x) {
  return t.min_where_key_above(keys.data(), values.data(), keys.size(), x);
}

inline double max_where_key_below(const KernelTable& t, std::span<const double> keys, std::span<const double> values,
                                  double x) {
  return t.max_where_key_below(keys.data(), values.data(), keys.size(), x);
}

namespace detail {
extern const KernelTable scalar_table;
#if defined(MAXGAP_HAVE_AVX2)
extern const KernelTable avx2_table;
#endif
}  // namespace detail

}  // namespace maxgap::kernels
