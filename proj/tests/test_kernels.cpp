#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "ebikecast/kernels.hpp"
#include "ebikecast/rng.hpp"

using namespace ebikecast;

TEST_CASE("kernels: scalar reference values") {
    const std::vector<double> a{1.0, 2.0, 3.0, 4.0};
    const std::vector<double> b{2.0, -1.0, 0.5, 3.0};
    CHECK(kernels::scalar::sum(a) == doctest::Approx(10.0));
    CHECK(kernels::scalar::dot(a, b) == doctest::Approx(2.0 - 2.0 + 1.5 + 12.0));
    std::vector<double> out(4);
    kernels::scalar::scale(a, 2.5, out);
    CHECK(out == std::vector<double>{2.5, 5.0, 7.5, 10.0});
    CHECK(kernels::scalar::sum({}) == 0.0);
}

TEST_CASE("kernels: dot runs over the shorter span") {
    const std::vector<double> a{1.0, 2.0, 3.0};
    const std::vector<double> b{10.0, 20.0};
    CHECK(kernels::scalar::dot(a, b) == 50.0);
    CHECK(kernels::scalar::dot(b, a) == 50.0);
    CHECK(kernels::scalar::dot(a, {}) == 0.0);
}

TEST_CASE("kernels: dispatch reports a known backend") {
    const std::string name = kernels::active_backend();
    CHECK((name == "scalar" || name == "avx2"));
    // The dispatched entry points agree with the scalar reference.
    const std::vector<double> x{0.25, -1.5, 3.75, 2.0, -0.125};
    CHECK(kernels::sum(x) == doctest::Approx(kernels::scalar::sum(x)).epsilon(1e-14));
}

#if EBIKECAST_HAVE_AVX2_KERNELS
TEST_CASE("kernels: avx2 matches scalar over many shapes") {
    if (!kernels::cpu_has_avx2()) return;
    Rng rng(9001);
    for (std::size_t n : {0UL, 1UL, 2UL, 3UL, 4UL, 5UL, 7UL, 8UL, 9UL, 15UL, 16UL, 17UL,
                          31UL, 63UL, 64UL, 67UL, 1000UL, 10001UL}) {
        std::vector<double> a(n);
        std::vector<double> b(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = rng.uniform(-10.0, 10.0);
            b[i] = rng.uniform(-10.0, 10.0);
        }
        // Tolerance scales with the magnitude of the terms, since the two
        // variants associate additions differently.
        double abs_dot = 0.0;
        double abs_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            abs_dot += std::abs(a[i] * b[i]);
            abs_sum += std::abs(a[i]);
        }
        const double tol_sum = 1e-13 * (abs_sum + 1.0);
        const double tol_dot = 1e-13 * (abs_dot + 1.0);
        CHECK(std::abs(kernels::avx2::sum(a) - kernels::scalar::sum(a)) <= tol_sum);
        CHECK(std::abs(kernels::avx2::dot(a, b) - kernels::scalar::dot(a, b)) <= tol_dot);

        std::vector<double> out_scalar(n);
        std::vector<double> out_avx2(n);
        kernels::scalar::scale(a, 3.25, out_scalar);
        kernels::avx2::scale(a, 3.25, out_avx2);
        CHECK(out_scalar == out_avx2);  // multiplication is exact per lane
    }
}
#endif
