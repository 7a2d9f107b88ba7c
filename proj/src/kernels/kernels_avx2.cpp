// Compiled with -mavx2 only. FMA stays disabled so every lane rounds exactly
// like the scalar reference.

#include <immintrin.h>

#include <limits>

#include "dcpoly/kernels.hpp"

namespace dcpoly::kernels::avx2 {

void affine_residuals(const double* const* columns, std::size_t dim, const double* heights,
                      std::size_t count, const double* gradient, double offset, double* out) {
  const __m256d off = _mm256_set1_pd(offset);
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    __m256d v = off;
    for (std::size_t j = 0; j < dim; ++j) {
      const __m256d g = _mm256_set1_pd(gradient[j]);
      v = _mm256_add_pd(v, _mm256_mul_pd(g, _mm256_loadu_pd(columns[j] + i)));
    }
    _mm256_storeu_pd(out + i, _mm256_sub_pd(v, _mm256_loadu_pd(heights + i)));
  }
  for (; i < count; ++i) {
    double v = offset;
    for (std::size_t j = 0; j < dim; ++j) v += gradient[j] * columns[j][i];
    out[i] = v - heights[i];
  }
}

double max_affine(const double* const* columns, std::size_t dim, const double* offsets,
                  std::size_t count, const double* x) {
  double best = -std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  if (count >= 4) {
    __m256d acc = _mm256_set1_pd(best);
    for (; i + 4 <= count; i += 4) {
      __m256d v = _mm256_loadu_pd(offsets + i);
      for (std::size_t j = 0; j < dim; ++j) {
        const __m256d xj = _mm256_set1_pd(x[j]);
        v = _mm256_add_pd(v, _mm256_mul_pd(_mm256_loadu_pd(columns[j] + i), xj));
      }
      acc = _mm256_max_pd(acc, v);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    for (double lane : lanes)
      if (lane > best) best = lane;
  }
  for (; i < count; ++i) {
    double v = offsets[i];
    for (std::size_t j = 0; j < dim; ++j) v += columns[j][i] * x[j];
    if (v > best) best = v;
  }
  return best;
}

}  // namespace dcpoly::kernels::avx2
