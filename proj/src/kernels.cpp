#include "ebikecast/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace ebikecast::kernels {

// ============================================================================
// Scalar reference kernels
// ============================================================================

namespace scalar {

double sum(std::span<const double> x) {
    double acc = 0.0;
    for (double v : x) acc += v;
    return acc;
}

double dot(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size() < b.size() ? a.size() : b.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void scale(std::span<const double> x, double k, std::span<double> out) {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = k * x[i];
}

}  // namespace scalar

// ============================================================================
// Runtime dispatch
// ============================================================================

namespace {

struct Backend {
    double (*sum)(std::span<const double>);
    double (*dot)(std::span<const double>, std::span<const double>);
    void (*scale)(std::span<const double>, double, std::span<double>);
    const char* name;
};

constexpr Backend kScalar{scalar::sum, scalar::dot, scalar::scale, "scalar"};

#if EBIKECAST_HAVE_AVX2_KERNELS
constexpr Backend kAvx2{avx2::sum, avx2::dot, avx2::scale, "avx2"};
#endif

Backend select_backend() {
    const char* pref = std::getenv("EBIKECAST_KERNEL");
    if (pref != nullptr && std::strcmp(pref, "scalar") == 0) return kScalar;
#if EBIKECAST_HAVE_AVX2_KERNELS
    if (pref != nullptr && std::strcmp(pref, "avx2") == 0 && cpu_has_avx2()) return kAvx2;
    if ((pref == nullptr || std::strcmp(pref, "auto") == 0) && cpu_has_avx2()) return kAvx2;
#endif
    return kScalar;
}

const Backend& backend() {
    static const Backend chosen = select_backend();
    return chosen;
}

}  // namespace

double sum(std::span<const double> x) { return backend().sum(x); }

double dot(std::span<const double> a, std::span<const double> b) {
    return backend().dot(a, b);
}

void scale(std::span<const double> x, double k, std::span<double> out) {
    backend().scale(x, k, out);
}

const char* active_backend() { return backend().name; }

#if EBIKECAST_HAVE_AVX2_KERNELS
bool cpu_has_avx2() { return __builtin_cpu_supports("avx2") != 0; }
#endif

}  // namespace ebikecast::kernels
