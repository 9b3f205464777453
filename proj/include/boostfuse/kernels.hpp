#pragma once

#include <cstddef>
#include <string_view>

// Reduction kernels used by the numeric hot paths (correlation sums,
// error metrics, gradient totals). Each kernel has a scalar reference
// implementation and, on x86-64 with AVX2, a vectorized variant chosen
// at runtime. Set BOOSTFUSE_SIMD=scalar to force the reference path.

namespace boostfuse::kernels {

// Sum of x[0..n).
double reduce_sum(const double* x, std::size_t n);

// Dot product of x and y.
double dot(const double* x, const double* y, std::size_t n);

// Sum of (x[i] - mx) * (y[i] - my); the centered cross-moment.
double centered_dot(const double* x, double mx,
                    const double* y, double my, std::size_t n);

// Sum of |a[i] - b[i]|.
double sum_abs_diff(const double* a, const double* b, std::size_t n);

// Sum of (a[i] - b[i])^2.
double sum_sq_diff(const double* a, const double* b, std::size_t n);

// Name of the active backend: "avx2", "neon", or "scalar".
std::string_view active_backend();

// Reference implementations, always available for equivalence testing.
namespace scalar {
double reduce_sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double centered_dot(const double* x, double mx,
                    const double* y, double my, std::size_t n);
double sum_abs_diff(const double* a, const double* b, std::size_t n);
double sum_sq_diff(const double* a, const double* b, std::size_t n);
}  // namespace scalar

}  // namespace boostfuse::kernels
