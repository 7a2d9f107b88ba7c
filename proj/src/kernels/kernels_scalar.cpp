#include <limits>

#include "dcpoly/kernels.hpp"

namespace dcpoly::kernels::scalar {

void affine_residuals(const double* const* columns, std::size_t dim, const double* heights,
                      std::size_t count, const double* gradient, double offset, double* out) {
  for (std::size_t i = 0; i < count; ++i) {
    double v = offset;
    for (std::size_t j = 0; j < dim; ++j) v += gradient[j] * columns[j][i];
    out[i] = v - heights[i];
  }
}

double max_affine(const double* const* columns, std::size_t dim, const double* offsets,
                  std::size_t count, const double* x) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < count; ++i) {
    double v = offsets[i];
    for (std::size_t j = 0; j < dim; ++j) v += columns[j][i] * x[j];
    if (v > best) best = v;
  }
  return best;
}

}  // namespace dcpoly::kernels::scalar
