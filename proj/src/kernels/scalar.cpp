#include <algorithm>
#include <limits>

#include "maxgap/kernels.hpp"

namespace maxgap::kernels {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double min_where_key_above(const double* keys, const double* values, std::size_t n, double x) {
  double best = kInf;
  for (std::size_t k = 0; k < n; ++k) {
    if (keys[k] > x) best = std::min(best, values[k]);
  }
  return best;
}

double max_where_key_below(const double* keys, const double* values, std::size_t n, double x) {
  double best = -kInf;
  for (std::size_t k = 0; k < n; ++k) {
    if (keys[k] < x) best = std::max(best, values[k]);
  }
  return best;
}

double right_gap_scan(const double* anchors, const double* nearest, std::size_t n, double lo, double hi,
                      double fallback) {
  double best = -kInf;
  for (std::size_t j = 0; j < n; ++j) {
    if (anchors[j] >= lo && anchors[j] <= hi) {
      const double partner = nearest[j] == kInf ? fallback : nearest[j];
      best = std::max(best, partner - anchors[j]);
    }
  }
  return best;
}

double left_gap_scan(const double* anchors, const double* nearest, std::size_t n, double lo, double hi,
                     double fallback) {
  double best = -kInf;
  for (std::size_t j = 0; j < n; ++j) {
    if (anchors[j] >= lo && anchors[j] <= hi) {
      const double partner = nearest[j] == -kInf ? fallback : nearest[j];
      best = std::max(best, anchors[j] - partner);
    }
  }
  return best;
}

}  // namespace

namespace detail {
const KernelTable scalar_table{&min_where_key_above, &max_where_key_below, &right_gap_scan, &left_gap_scan};
}  // namespace detail

}  // namespace maxgap::kernels
