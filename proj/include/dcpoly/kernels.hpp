#pragma once

// Data-parallel inner loops of the vertex engine. Every kernel has a scalar
// reference and an AVX2 variant; the variant is picked once at startup from
// CPUID and can be forced back to scalar with DCPOLY_SIMD=scalar.
//
// Both variants evaluate each lane with the same operation order and without
// fused multiply-add, so their results are bitwise identical.

#include <cstddef>
#include <string_view>

namespace dcpoly::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

/// True when the CPU supports AVX2 and the AVX2 kernels were compiled in.
bool avx2_available() noexcept;

/// ISA used by the dispatching entry points below.
Isa active_isa() noexcept;

// Columns are structure-of-arrays: columns[j][i] is coordinate j of item i.

/// out[i] = offset + sum_j gradient[j] * columns[j][i] - heights[i]
using AffineResidualsFn = void (*)(const double* const* columns, std::size_t dim,
                                   const double* heights, std::size_t count,
                                   const double* gradient, double offset, double* out);

/// max_i (offsets[i] + sum_j columns[j][i] * x[j]); -inf when count == 0.
using MaxAffineFn = double (*)(const double* const* columns, std::size_t dim,
                               const double* offsets, std::size_t count, const double* x);

namespace scalar {
void affine_residuals(const double* const* columns, std::size_t dim, const double* heights,
                      std::size_t count, const double* gradient, double offset, double* out);
double max_affine(const double* const* columns, std::size_t dim, const double* offsets,
                  std::size_t count, const double* x);
}  // namespace scalar

#if defined(DCPOLY_HAVE_AVX2)
namespace avx2 {
void affine_residuals(const double* const* columns, std::size_t dim, const double* heights,
                      std::size_t count, const double* gradient, double offset, double* out);
double max_affine(const double* const* columns, std::size_t dim, const double* offsets,
                  std::size_t count, const double* x);
}  // namespace avx2
#endif

void affine_residuals(const double* const* columns, std::size_t dim, const double* heights,
                      std::size_t count, const double* gradient, double offset, double* out);
double max_affine(const double* const* columns, std::size_t dim, const double* offsets,
                  std::size_t count, const double* x);

}  // namespace dcpoly::kernels
