#include <cmath>
#include <random>

#include "doctest.h"
#include "lyapcert/dynamics.hpp"
#include "oracles.hpp"

using namespace lyapcert;

namespace {

bool holds(const Interval& x, const Bracket& b) { return x.lo() <= b.lo && b.hi <= x.hi(); }

// decimal reference values are truncated; compare to their stated accuracy
bool near(const Interval& x, double v, double tol) { return x.lo() - tol <= v && v <= x.hi() + tol; }

}  // namespace

TEST_CASE("parameter validation") {
    CHECK_NOTHROW((MapParams{3.0, 1.0}.validate()));
    CHECK_THROWS_AS((MapParams{0.5, 1.0}.validate()), DomainError);
    CHECK_THROWS_AS((MapParams{3.0, -1.0}.validate()), DomainError);
    CHECK_THROWS_AS((MapParams{3.0, 1.5}.validate()), DomainError);
    CHECK_THROWS_AS((NoiseParams{0.0}.validate()), DomainError);
    CHECK_THROWS_AS((NoiseParams{-0.1}.validate()), DomainError);
}

TEST_CASE("map evaluation") {
    MapParams p{3.0, 1.0};
    CHECK(map_eval(p, Interval(0.5)).contains(0.75));
    CHECK(map_eval(p, Interval(0.0)).contains(1.0));
    CHECK(map_eval(MapParams{2.5, 0.3}, Interval(0.0)).contains(0.3));
    CHECK(map_eval(p, Interval(-1.0)).contains(-1.0));
    CHECK(map_eval(p, Interval(1.0)).contains(-1.0));
    CHECK(map_eval(p, Interval(-1.0, 1.0)).contains(Interval(-1.0, 1.0)));

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        MapParams q{1.0 + 4.0 * (u(rng) + 1.0) / 2.0, u(rng) * 0.99};
        double x = u(rng);
        Interval a = map_eval(q, Interval(x));
        Interval b = map_eval(q, Interval(-x));
        CHECK_NOTHROW(intersect(a, b));
        CHECK(a.contains(map_point(q, x)));
    }
}

TEST_CASE("boundary fold") {
    CHECK(boundary_fold(Interval(1.5)).contains(-0.5));
    CHECK(boundary_fold(Interval(0.3)).contains(0.3));
    Interval h = boundary_fold(Interval(0.9, 1.1));
    CHECK(h.lo() == -1.0);
    CHECK(h.hi() == 1.0);
    CHECK(boundary_fold(Interval(1.0)).contains(-1.0));
    CHECK(boundary_fold(Interval(2.2, 2.4)).contains(Interval(0.2000001, 0.3999999)));
    CHECK(boundary_fold(Interval(-3.5)).contains(0.5));

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    for (int i = 0; i < 10000; ++i) {
        double x = u(rng);
        Interval f = boundary_fold(Interval(x));
        CHECK(f.lo() >= -1.0);
        CHECK(f.hi() <= 1.0);
        double y = fold_point(x);
        CHECK(y >= -1.0);
        CHECK(y < 1.0);
        CHECK(fold_point(y) == y);
        CHECK(f.contains(y));
        Interval ff = boundary_fold(f);
        CHECK(ff.contains(f));
    }
}

TEST_CASE("log of the derivative") {
    MapParams p{3.0, 1.0};
    Interval ln6 = log_abs_derivative(p, Interval(1.0));
    CHECK(near(ln6, 1.791759469228, 1e-12));
    // at x = 1/e the value is ln 6 - 2
    CHECK(holds(log_abs_derivative(p, exp(Interval(-1.0))), oracle::ln6_minus_2));
    CHECK(holds(log_abs_derivative(MapParams{1.0, 0.5}, Interval(0.0)), oracle::ln1p5));
    CHECK(holds(log_abs_derivative(MapParams{1.0, 1.0}, Interval(-1.0, 1.0)), oracle::ln2));
    CHECK_THROWS_AS(log_abs_derivative(p, Interval(0.0)), SingularityError);
    CHECK_THROWS_AS(log_abs_derivative(p, Interval(-0.1, 0.2)), SingularityError);
}

TEST_CASE("kernel constants") {
    CHECK(holds(doeblin_constant(NoiseParams{1.0}), oracle::doeblin_sigma1));
    CHECK(holds(doeblin_constant(NoiseParams{0.5}), oracle::doeblin_sigma05));
    CHECK(near(doeblin_constant(NoiseParams{0.5}), 0.1079819330, 1e-10));
    CHECK(near(doeblin_constant(NoiseParams{1.0}), 0.2419707245, 1e-10));
    auto k = kernel_constants(NoiseParams{0.2});
    CHECK(holds(k.rho0, oracle::rho0_sigma02));
    CHECK(holds(k.l2norm, oracle::l2norm_sigma02));
    CHECK(kernel_constants(NoiseParams{4.0}).rho0.hi() < kernel_constants(NoiseParams{2.0}).rho0.lo());
    CHECK(kernel_constants(NoiseParams{4.0}).l2norm.hi() < kernel_constants(NoiseParams{2.0}).l2norm.lo());

    for (double s = 0.05; s <= 4.0; s += 0.01) {
        NoiseParams n{s};
        Interval c = doeblin_constant(n);
        CHECK(c.hi() < kernel_constants(n).rho0.lo());
        if (s >= 1.0 / 40) CHECK(c.lo() > 0.0);
    }
    // far below the documented range the lower end may underflow, the upper end may not
    Interval tiny = doeblin_constant(NoiseParams{0.01});
    CHECK(tiny.lo() >= 0.0);
    CHECK(tiny.hi() > 0.0);
}

TEST_CASE("observable norm") {
    // the commonly quoted 2.8437140 is off in the sixth digit; the exact value is 2.84371732725...
    CHECK(near(upsilon(MapParams{3.0, 1.0}), 2.84371732725, 1e-11));
    CHECK(near(upsilon(MapParams{3.0, 1.0}), 2.8437140, 5e-6));
    CHECK(holds(upsilon(MapParams{3.25, 1.0}), oracle::upsilon_325_1));
    CHECK(holds(upsilon(MapParams{3.0, 0.875}), oracle::upsilon_3_0875));
    Interval z = upsilon(MapParams{1.0, 0.0});
    CHECK(z.lo() == 0.0);
    CHECK(z.hi() == 0.0);
    CHECK(upsilon(MapParams{1.0, 1.0}).contains(std::sqrt(2.0) * std::log(2.0)));

    // Upsilon^2 = 2 int_0^1 (c + (a-1) ln x)^2 dx = 2 (c^2 - 2c(a-1) + 2(a-1)^2)
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        MapParams p{1.0 + 4.0 * u(rng), -0.9 + 1.9 * u(rng)};
        long double c = std::log(static_cast<long double>(p.alpha) * (1.0L + p.beta));
        long double a1 = p.alpha - 1.0L;
        long double quad = 2.0L * (c * c - 2.0L * c * a1 + 2.0L * a1 * a1);
        Interval u2 = sqr(upsilon(p));
        CHECK(u2.lo() <= static_cast<double>(quad) * (1 + 1e-15) + 1e-300);
        CHECK(u2.hi() >= static_cast<double>(quad) * (1 - 1e-15));
    }
}

TEST_CASE("test maps") {
    TestMap f = TestMap::family(MapParams{3.0, 1.0});
    CHECK(f.eval(Interval(0.5)).contains(0.75));
    CHECK(f.is_even());
    CHECK_FALSE(f.branch_at_zero());
    CHECK(TestMap::family(MapParams{3.5, 1.0}).branch_at_zero());
    CHECK(TestMap::identity().eval(Interval(0.25)).contains(0.25));
    CHECK(TestMap::constant(0.4).eval(Interval(-1.0, 1.0)).contains(0.4));
    CHECK(TestMap::tent().eval(Interval(0.5)).contains(0.0));
    CHECK(f.derivative_magnitude(Interval(1.0)).contains(6.0));
    CHECK(TestMap::identity().derivative_magnitude(Interval(0.3)).contains(1.0));
    CHECK(TestMap::family(MapParams{3.5, 1.0}).complex_derivative_bound(0.0, 0.1, 0.1) == std::nullopt);
    auto b = f.complex_derivative_bound(0.5, 0.1, 0.1);
    REQUIRE(b.has_value());
    CHECK(*b >= 6.0 * (0.36 + 0.01));
    CHECK_THROWS_AS(TestMap::family(MapParams{0.5, 1.0}), DomainError);
    CHECK(f.describe() != TestMap::family(MapParams{3.0, 0.9}).describe());
}
