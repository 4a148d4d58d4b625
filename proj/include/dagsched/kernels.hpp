#pragma once

#include <cstddef>
#include <cstdint>

// Low-level arithmetic kernels used by the tensor and reachability code.
// Every kernel has a scalar reference implementation and, on x86-64 with
// AVX2/FMA, a vectorized variant selected at runtime. The two variants are
// equivalence-tested against each other; FMA reassociates sums, so floating
// results agree to rounding, not bitwise.
namespace dagsched::kernels {

enum class Backend { Scalar, Avx2 };

// Backend chosen at startup (env DAGSCHED_KERNELS=scalar|avx2 overrides).
Backend active_backend();
const char* backend_name();

// Force a backend; returns false if unsupported on this machine.
bool set_backend(Backend b);
bool avx2_supported();

double dot(const double* a, const double* b, std::size_t n);

// y += alpha * x
void axpy(double alpha, const double* x, double* y, std::size_t n);

void vadd(const double* a, const double* b, double* out, std::size_t n);
void vscale(double alpha, double* x, std::size_t n);
double vsum(const double* x, std::size_t n);

// out = max(x, 0)
void relu(const double* x, double* out, std::size_t n);

// dx += dy where y > 0 (y is the relu output)
void relu_grad(const double* y, const double* dy, double* dx, std::size_t n);

// dst |= src over bit-packed reachability rows
void orw(std::uint64_t* dst, const std::uint64_t* src, std::size_t nwords);

}  // namespace dagsched::kernels
