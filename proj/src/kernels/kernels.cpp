#include "dagsched/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace dagsched::kernels {

namespace scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void vadd(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

void vscale(double alpha, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

double vsum(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i];
  return s;
}

void relu(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void relu_grad(const double* y, const double* dy, double* dx, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (y[i] > 0.0) dx[i] += dy[i];
}

void orw(std::uint64_t* dst, const std::uint64_t* src, std::size_t nwords) {
  for (std::size_t i = 0; i < nwords; ++i) dst[i] |= src[i];
}

}  // namespace scalar

#if defined(DAGSCHED_HAVE_AVX2)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void vadd(const double* a, const double* b, double* out, std::size_t n);
void vscale(double alpha, double* x, std::size_t n);
double vsum(const double* x, std::size_t n);
void relu(const double* x, double* out, std::size_t n);
void relu_grad(const double* y, const double* dy, double* dx, std::size_t n);
void orw(std::uint64_t* dst, const std::uint64_t* src, std::size_t nwords);
bool supported();
}  // namespace avx2
#endif

namespace {

struct Vtable {
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*vadd)(const double*, const double*, double*, std::size_t);
  void (*vscale)(double, double*, std::size_t);
  double (*vsum)(const double*, std::size_t);
  void (*relu)(const double*, double*, std::size_t);
  void (*relu_grad)(const double*, const double*, double*, std::size_t);
  void (*orw)(std::uint64_t*, const std::uint64_t*, std::size_t);
};

constexpr Vtable kScalar{scalar::dot,  scalar::axpy, scalar::vadd,
                         scalar::vscale, scalar::vsum, scalar::relu,
                         scalar::relu_grad, scalar::orw};

#if defined(DAGSCHED_HAVE_AVX2)
constexpr Vtable kAvx2{avx2::dot,  avx2::axpy, avx2::vadd,
                       avx2::vscale, avx2::vsum, avx2::relu,
                       avx2::relu_grad, avx2::orw};
#endif

struct Dispatch {
  const Vtable* table = &kScalar;
  Backend backend = Backend::Scalar;

  Dispatch() {
    const char* env = std::getenv("DAGSCHED_KERNELS");
    bool want_scalar = env && std::strcmp(env, "scalar") == 0;
#if defined(DAGSCHED_HAVE_AVX2)
    if (!want_scalar && avx2::supported()) {
      table = &kAvx2;
      backend = Backend::Avx2;
    }
#else
    (void)want_scalar;
#endif
  }
};

Dispatch& dispatch() {
  static Dispatch d;
  return d;
}

}  // namespace

Backend active_backend() { return dispatch().backend; }

const char* backend_name() {
  return dispatch().backend == Backend::Avx2 ? "avx2" : "scalar";
}

bool avx2_supported() {
#if defined(DAGSCHED_HAVE_AVX2)
  return avx2::supported();
#else
  return false;
#endif
}

bool set_backend(Backend b) {
  if (b == Backend::Scalar) {
    dispatch().table = &kScalar;
    dispatch().backend = Backend::Scalar;
    return true;
  }
#if defined(DAGSCHED_HAVE_AVX2)
  if (avx2::supported()) {
    dispatch().table = &kAvx2;
    dispatch().backend = Backend::Avx2;
    return true;
  }
#endif
  return false;
}

double dot(const double* a, const double* b, std::size_t n) {
  return dispatch().table->dot(a, b, n);
}
void axpy(double alpha, const double* x, double* y, std::size_t n) {
  dispatch().table->axpy(alpha, x, y, n);
}
void vadd(const double* a, const double* b, double* out, std::size_t n) {
  dispatch().table->vadd(a, b, out, n);
}
void vscale(double alpha, double* x, std::size_t n) {
  dispatch().table->vscale(alpha, x, n);
}
double vsum(const double* x, std::size_t n) { return dispatch().table->vsum(x, n); }
void relu(const double* x, double* out, std::size_t n) {
  dispatch().table->relu(x, out, n);
}
void relu_grad(const double* y, const double* dy, double* dx, std::size_t n) {
  dispatch().table->relu_grad(y, dy, dx, n);
}
void orw(std::uint64_t* dst, const std::uint64_t* src, std::size_t nwords) {
  dispatch().table->orw(dst, src, nwords);
}

}  // namespace dagsched::kernels
