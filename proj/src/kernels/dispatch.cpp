#include <cstdlib>
#include <string_view>

#include "dcpoly/kernels.hpp"

namespace dcpoly::kernels {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(DCPOLY_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa select_isa() noexcept {
  if (const char* forced = std::getenv("DCPOLY_SIMD"); forced && std::string_view(forced) == "scalar")
    return Isa::scalar;
  return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

struct Table {
  Isa isa;
  AffineResidualsFn residuals;
  MaxAffineFn max_affine;
};

Table make_table() noexcept {
#if defined(DCPOLY_HAVE_AVX2)
  if (select_isa() == Isa::avx2) return {Isa::avx2, &avx2::affine_residuals, &avx2::max_affine};
#endif
  return {Isa::scalar, &scalar::affine_residuals, &scalar::max_affine};
}

const Table& table() noexcept {
  static const Table t = make_table();
  return t;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool avx2_available() noexcept { return cpu_has_avx2(); }

Isa active_isa() noexcept { return table().isa; }

void affine_residuals(const double* const* columns, std::size_t dim, const double* heights,
                      std::size_t count, const double* gradient, double offset, double* out) {
  table().residuals(columns, dim, heights, count, gradient, offset, out);
}

double max_affine(const double* const* columns, std::size_t dim, const double* offsets,
                  std::size_t count, const double* x) {
  return table().max_affine(columns, dim, offsets, count, x);
}

}  // namespace dcpoly::kernels
