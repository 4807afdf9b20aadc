#pragma once

// Arithmetic kernels behind the statistics code: reductions and elementwise
// scaling over contiguous doubles. Scalar reference implementations always
// exist; on x86-64 an AVX2 variant of each is selected at runtime when the
// CPU supports it. The two variants are equivalence-tested against each
// other (results differ only by floating-point reassociation).
//
// Selection order: EBIKECAST_KERNEL env var ("scalar", "avx2", "auto"),
// then CPU detection. The choice is made once per process.

#include <cstddef>
#include <span>

namespace ebikecast::kernels {

/// Sum of all elements (0 for an empty span).
double sum(std::span<const double> x);

/// Inner product of a and b over min(a.size(), b.size()) elements.
double dot(std::span<const double> a, std::span<const double> b);

/// out[i] = k * x[i]; out may alias x. Requires out.size() >= x.size().
void scale(std::span<const double> x, double k, std::span<double> out);

/// Name of the backend in use ("scalar" or "avx2").
const char* active_backend();

// Reference implementations, public so tests can compare backends directly.
namespace scalar {
double sum(std::span<const double> x);
double dot(std::span<const double> a, std::span<const double> b);
void scale(std::span<const double> x, double k, std::span<double> out);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define EBIKECAST_HAVE_AVX2_KERNELS 1
namespace avx2 {
double sum(std::span<const double> x);
double dot(std::span<const double> a, std::span<const double> b);
void scale(std::span<const double> x, double k, std::span<double> out);
}  // namespace avx2

/// True when the running CPU can execute the AVX2 variants.
bool cpu_has_avx2();
#else
#define EBIKECAST_HAVE_AVX2_KERNELS 0
#endif

}  // namespace ebikecast::kernels
