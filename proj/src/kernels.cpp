#include "boostfuse/kernels.hpp"

#include <cstdlib>

#if defined(__x86_64__) || defined(_M_X64)
#define BOOSTFUSE_X86 1
#include <immintrin.h>
#else
#define BOOSTFUSE_X86 0
#endif

#if defined(__aarch64__) || defined(__ARM_NEON)
#define BOOSTFUSE_NEON 1
#include <arm_neon.h>
#else
#define BOOSTFUSE_NEON 0
#endif

namespace boostfuse::kernels {

namespace scalar {

double reduce_sum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double dot(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double centered_dot(const double* x, double mx,
                    const double* y, double my, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += (x[i] - mx) * (y[i] - my);
  return acc;
}

double sum_abs_diff(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = a[i] - b[i];
    acc += d < 0 ? -d : d;
  }
  return acc;
}

double sum_sq_diff(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

}  // namespace scalar

#if BOOSTFUSE_X86

namespace avx2 {

__attribute__((target("avx2,fma")))
static inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

__attribute__((target("avx2,fma")))
double reduce_sum(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  }
  double out = hsum(acc);
  for (; i < n; ++i) out += x[i];
  return out;
}

__attribute__((target("avx2,fma")))
double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  }
  double out = hsum(acc);
  for (; i < n; ++i) out += x[i] * y[i];
  return out;
}

__attribute__((target("avx2,fma")))
double centered_dot(const double* x, double mx,
                    const double* y, double my, std::size_t n) {
  const __m256d vmx = _mm256_set1_pd(mx);
  const __m256d vmy = _mm256_set1_pd(my);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d cx = _mm256_sub_pd(_mm256_loadu_pd(x + i), vmx);
    __m256d cy = _mm256_sub_pd(_mm256_loadu_pd(y + i), vmy);
    acc = _mm256_fmadd_pd(cx, cy, acc);
  }
  double out = hsum(acc);
  for (; i < n; ++i) out += (x[i] - mx) * (y[i] - my);
  return out;
}

__attribute__((target("avx2,fma")))
double sum_abs_diff(const double* a, const double* b, std::size_t n) {
  const __m256d signmask = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, _mm256_andnot_pd(signmask, d));
  }
  double out = hsum(acc);
  for (; i < n; ++i) {
    double d = a[i] - b[i];
    out += d < 0 ? -d : d;
  }
  return out;
}

__attribute__((target("avx2,fma")))
double sum_sq_diff(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double out = hsum(acc);
  for (; i < n; ++i) {
    double d = a[i] - b[i];
    out += d * d;
  }
  return out;
}

}  // namespace avx2

#endif  // BOOSTFUSE_X86

#if BOOSTFUSE_NEON

namespace neon {

double reduce_sum(const double* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(x + i));
  double out = vaddvq_f64(acc);
  for (; i < n; ++i) out += x[i];
  return out;
}

double dot(const double* x, const double* y, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    acc = vfmaq_f64(acc, vld1q_f64(x + i), vld1q_f64(y + i));
  double out = vaddvq_f64(acc);
  for (; i < n; ++i) out += x[i] * y[i];
  return out;
}

double centered_dot(const double* x, double mx,
                    const double* y, double my, std::size_t n) {
  const float64x2_t vmx = vdupq_n_f64(mx);
  const float64x2_t vmy = vdupq_n_f64(my);
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t cx = vsubq_f64(vld1q_f64(x + i), vmx);
    float64x2_t cy = vsubq_f64(vld1q_f64(y + i), vmy);
    acc = vfmaq_f64(acc, cx, cy);
  }
  double out = vaddvq_f64(acc);
  for (; i < n; ++i) out += (x[i] - mx) * (y[i] - my);
  return out;
}

double sum_abs_diff(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    acc = vaddq_f64(acc, vabdq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  double out = vaddvq_f64(acc);
  for (; i < n; ++i) {
    double d = a[i] - b[i];
    out += d < 0 ? -d : d;
  }
  return out;
}

double sum_sq_diff(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    acc = vfmaq_f64(acc, d, d);
  }
  double out = vaddvq_f64(acc);
  for (; i < n; ++i) {
    double d = a[i] - b[i];
    out += d * d;
  }
  return out;
}

}  // namespace neon

#endif  // BOOSTFUSE_NEON

namespace {

struct Dispatch {
  double (*reduce_sum)(const double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  double (*centered_dot)(const double*, double, const double*, double, std::size_t);
  double (*sum_abs_diff)(const double*, const double*, std::size_t);
  double (*sum_sq_diff)(const double*, const double*, std::size_t);
  std::string_view name;
};

Dispatch select_backend() {
  const char* force = std::getenv("BOOSTFUSE_SIMD");
  bool want_scalar = force && std::string_view(force) == "scalar";
#if BOOSTFUSE_X86
  if (!want_scalar && __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    return {avx2::reduce_sum, avx2::dot, avx2::centered_dot,
            avx2::sum_abs_diff, avx2::sum_sq_diff, "avx2"};
  }
#elif BOOSTFUSE_NEON
  if (!want_scalar) {
    return {neon::reduce_sum, neon::dot, neon::centered_dot,
            neon::sum_abs_diff, neon::sum_sq_diff, "neon"};
  }
#endif
  (void)want_scalar;
  return {scalar::reduce_sum, scalar::dot, scalar::centered_dot,
          scalar::sum_abs_diff, scalar::sum_sq_diff, "scalar"};
}

const Dispatch& dispatch() {
  static const Dispatch d = select_backend();
  return d;
}

}  // namespace

double reduce_sum(const double* x, std::size_t n) {
  return dispatch().reduce_sum(x, n);
}
double dot(const double* x, const double* y, std::size_t n) {
  return dispatch().dot(x, y, n);
}
double centered_dot(const double* x, double mx,
                    const double* y, double my, std::size_t n) {
  return dispatch().centered_dot(x, mx, y, my, n);
}
double sum_abs_diff(const double* a, const double* b, std::size_t n) {
  return dispatch().sum_abs_diff(a, b, n);
}
double sum_sq_diff(const double* a, const double* b, std::size_t n) {
  return dispatch().sum_sq_diff(a, b, n);
}
std::string_view active_backend() { return dispatch().name; }

}  // namespace boostfuse::kernels
