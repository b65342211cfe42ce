#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "cbbc/interval.hpp"

namespace cbbc {

// Sampled points are rationals with denominator 2^20: exact membership tests
// stay cheap and evaluation denominators stay bounded.
inline constexpr long kSampleDenom = 1 << 20;

inline Rat lerp_rat(const Interval& iv, long num, long den) {
  return *iv.lo + (*iv.hi - *iv.lo) * Rat(num, den);
}

/// Axis-aligned grid with `res` points per dimension (res >= 2 unless the
/// interval is a point).
inline std::vector<std::vector<Rat>> grid_points(const Box& box, size_t res) {
  std::vector<std::vector<Rat>> out;
  if (box.empty()) return out;
  for (const auto& iv : box)
    if (!iv.bounded() || !iv.valid()) return out;
  std::vector<size_t> counts(box.size());
  size_t total = 1;
  for (size_t i = 0; i < box.size(); ++i) {
    counts[i] = (box[i].width() == 0) ? 1 : res;
    total *= counts[i];
  }
  out.reserve(total);
  std::vector<size_t> idx(box.size(), 0);
  for (size_t n = 0; n < total; ++n) {
    std::vector<Rat> p(box.size());
    for (size_t i = 0; i < box.size(); ++i)
      p[i] = counts[i] == 1 ? *box[i].lo
                            : lerp_rat(box[i], static_cast<long>(idx[i]),
                                       static_cast<long>(counts[i] - 1));
    out.push_back(std::move(p));
    for (size_t i = box.size(); i-- > 0;) {
      if (++idx[i] < counts[i]) break;
      idx[i] = 0;
    }
  }
  return out;
}

/// Seeded uniform points with dyadic coordinates.
inline std::vector<std::vector<Rat>> random_points(const Box& box, size_t n,
                                                   uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> dist(0, kSampleDenom);
  std::vector<std::vector<Rat>> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    std::vector<Rat> p(box.size());
    for (size_t d = 0; d < box.size(); ++d)
      p[d] = lerp_rat(box[d], dist(rng), kSampleDenom);
    out.push_back(std::move(p));
  }
  return out;
}

/// Halton low-discrepancy sequence (bases 2,3,5,7,...), dyadically rounded;
/// deterministic and seedless.
inline std::vector<std::vector<Rat>> halton_points(const Box& box, size_t n) {
  static const unsigned bases[] = {2, 3, 5, 7, 11, 13, 17, 19};
  std::vector<std::vector<Rat>> out;
  out.reserve(n);
  for (size_t i = 1; i <= n; ++i) {
    std::vector<Rat> p(box.size());
    for (size_t d = 0; d < box.size(); ++d) {
      unsigned base = bases[d % 8];
      double u = 0, f = 1.0 / base;
      size_t k = i;
      while (k) {
        u += f * (k % base);
        k /= base;
        f /= base;
      }
      long num = static_cast<long>(u * kSampleDenom);
      p[d] = lerp_rat(box[d], num, kSampleDenom);
    }
    out.push_back(std::move(p));
  }
  return out;
}

/// Nearest dyadic rational point (denominator 2^40) to a double vector;
/// keeps refined points exactly representable.
inline std::vector<Rat> rationalize(const std::vector<double>& p) {
  std::vector<Rat> out(p.size());
  for (size_t i = 0; i < p.size(); ++i) out[i] = rat_from_double(p[i]);
  return out;
}

}  // namespace cbbc
