#include <cmath>

#include "doctest.h"
#include "xnt/error.hpp"
#include "xnt/variety_probe.hpp"

using namespace xnt;

namespace {

int legendre(std::int64_t a, std::uint32_t p) {
    const auto r = reduce_mod(a, p);
    if (r == 0) return 0;
    return pow_mod(r, (p - 1) / 2, p) == 1 ? 1 : -1;
}

} // namespace

TEST_CASE("affine fiber counts") {
    const auto f5 = build_ext_field(5, 1);
    CHECK(count_affine_fiber(parse_multi("X1^2 + X2^2"), 0, f5).count == 9);
    for (std::uint32_t p : {3u, 7u, 11u}) {
        const auto f = build_ext_field(p, 1);
        const auto rec = count_affine_fiber(parse_multi("X1"), 3 % p, f);
        CHECK(rec.count == 1);
        CHECK(rec.deviation == doctest::Approx(0.0));
    }
    // x1^2 + x2^2 + x3^2 = a has p^2 + p * legendre(-a) solutions for a != 0.
    const auto quad = parse_multi("X1^2 + X2^2 + X3^2");
    for (std::uint32_t p : {3u, 5u, 7u, 13u, 17u}) {
        const auto f = build_ext_field(p, 1);
        const auto all = fiber_counts(quad, f);
        for (Elem a = 1; a < p; ++a) {
            const std::int64_t expected = std::int64_t{p} * p + std::int64_t{p} * legendre(-std::int64_t{a}, p);
            CHECK(count_affine_fiber(quad, a, f).count == static_cast<std::uint64_t>(expected));
            CHECK(all[a] == static_cast<std::uint64_t>(expected));
        }
    }
    CHECK_THROWS_AS(count_affine_fiber(quad, 0, f5, 100), BudgetError);
}

TEST_CASE("pair counts sum to the single count") {
    const auto F = parse_multi("X1^2 + X2^2 + X3^2");
    MultiPoly g(3);
    g.add_term({1, 1, 0}, 1);
    const auto f7 = build_ext_field(7, 1);
    const auto single = count_affine_fiber(F, 1, f7);
    const auto table = pair_fiber_counts(F, g, f7);
    std::uint64_t total = 0;
    for (Elem b = 0; b < 7; ++b) {
        const auto rec = count_pair_fiber(F, g, 1, b, f7);
        CHECK(rec.count == table[1 * 7 + b]);
        CHECK(rec.deviation == doctest::Approx(static_cast<double>(rec.count) - 7.0));
        total += rec.count;
    }
    CHECK(total == single.count);
    for (Elem a = 0; a < 7; ++a) {
        std::uint64_t row = 0;
        for (Elem b = 0; b < 7; ++b) row += table[a * 7 + b];
        CHECK(row == count_affine_fiber(F, a, f7).count);
    }
    CHECK_THROWS_AS(count_pair_fiber(F, parse_multi("X1*X2"), 1, 0, f7), InputError);
}

TEST_CASE("smoothness scan") {
    const auto sphere = smoothness_scan(parse_multi("X0^2 + X1^2 + X2^2"), 7, 2);
    CHECK(sphere.smooth);
    CHECK(sphere.k_max == 2);
    CHECK(sphere.points_scanned == 57 + 2451);

    const auto F = parse_multi("X0^2", 3);
    const auto doubled = smoothness_scan(F, 5, 1);
    REQUIRE_FALSE(doubled.smooth);
    REQUIRE(doubled.witness);
    const auto field = build_ext_field(5, 1);
    CHECK(F.eval(field, doubled.witness->coords) == 0);
    for (const auto& g : F.gradient()) CHECK(g.eval(field, doubled.witness->coords) == 0);

    const auto fermat = smoothness_scan(parse_multi("X0^3 + X1^3 + X2^3"), 3, 1);
    CHECK_FALSE(fermat.smooth);
    CHECK(fermat.char_divides_degree);

    CHECK_FALSE(smoothness_scan(parse_multi("X0*X1", 3), 11, 1).smooth);
    CHECK(smoothness_scan(parse_multi("X0*X1 - X2^2"), 11, 2).smooth);
    CHECK_THROWS_AS(smoothness_scan(parse_multi("X0^2 + X1"), 5, 1), InputError);
    CHECK_THROWS_AS(smoothness_scan(parse_multi("X0^2 + X1^2 + X2^2"), 97, 4), BudgetError);
}

TEST_CASE("classify_u examples") {
    const auto F = parse_multi("X0^2 + X1^2 + X2^2");
    const std::vector<std::int64_t> zero{5, 10, 0};
    CHECK(classify_u(F, zero, 5, 2).kind == UKind::ZeroType);

    const std::vector<std::int64_t> tangent{1, 2, 0};
    const auto bad = classify_u(F, tangent, 5, 2);
    REQUIRE(bad.kind == UKind::Bad);
    REQUIRE(bad.witness);
    CHECK(bad.witness->coords == std::vector<Elem>{1, 2, 0});
    CHECK(bad.witness->field_degree == 1);

    const std::vector<std::int64_t> axis{1, 0, 0};
    CHECK(classify_u(F, axis, 5, 2).kind == UKind::Good);

    CHECK(diagonal_dual_oracle(std::vector<std::int64_t>{1, 1, 1}, 2, tangent, 5) == UKind::Bad);
    CHECK(diagonal_dual_oracle(std::vector<std::int64_t>{1, 1, 1}, 2, axis, 5) == UKind::Good);
    CHECK(diagonal_dual_oracle(F, zero, 5) == UKind::ZeroType);
    CHECK_THROWS_AS(diagonal_dual_oracle(parse_multi("X0^2 + X0*X1 + X2^2"), axis, 5), InputError);
    CHECK_THROWS_AS(diagonal_dual_oracle(F, axis, 2), InputError);
    CHECK_THROWS_AS(classify_u(F, std::vector<std::int64_t>{1, 0}, 5, 1), InputError);
}

TEST_CASE("witnesses satisfy the tangency conditions") {
    const auto F = parse_multi("X0^3 + 2*X1^3 + X2^3");
    for (std::uint32_t p : {5u, 7u, 13u}) {
        for (std::int64_t a = -2; a <= 2; ++a)
            for (std::int64_t b = -2; b <= 2; ++b) {
                const std::vector<std::int64_t> u{1, a, b};
                const auto cls = classify_u(F, u, p, 2);
                if (cls.kind != UKind::Bad) continue;
                const auto field = build_ext_field(p, cls.witness->field_degree);
                const auto& x = cls.witness->coords;
                CHECK(F.eval(field, x) == 0);
                Elem dot = 0;
                for (std::size_t i = 0; i < 3; ++i) dot = field.add(dot, field.mul(field.from_int(u[i]), x[i]));
                CHECK(dot == 0);
                const auto grad = F.gradient();
                for (std::size_t i = 0; i < 3; ++i)
                    CHECK(field.mul(grad[i].eval(field, x), field.from_int(u[0])) ==
                          field.mul(grad[0].eval(field, x), field.from_int(u[i])));
            }
    }
}

TEST_CASE("classify_u agrees with the diagonal oracle") {
    const std::vector<std::vector<std::int64_t>> coeff_sets{{1, 1, 1}, {1, 2, 3}, {1, -1, 5}};
    int bad_seen = 0, good_seen = 0;
    for (unsigned d : {2u, 3u}) {
        for (std::uint32_t p : primes_in_range(2, 31)) {
            if (d % p == 0) continue;
            for (std::size_t nv : {2u, 3u}) {
                for (const auto& full : coeff_sets) {
                    std::vector<std::int64_t> c(full.begin(), full.begin() + nv);
                    if (std::any_of(c.begin(), c.end(), [&](auto v) { return reduce_mod(v, p) == 0; })) continue;
                    MultiPoly F(nv);
                    for (std::size_t i = 0; i < nv; ++i) {
                        Exponents e(nv, 0);
                        e[i] = d;
                        F.add_term(e, c[i]);
                    }
                    std::vector<std::int64_t> u(nv, -3);
                    while (true) {
                        const auto oracle = diagonal_dual_oracle(c, d, u, p);
                        const auto scan = classify_u(F, u, p, 2);
                        CHECK(scan.kind == oracle);
                        bad_seen += oracle == UKind::Bad;
                        good_seen += oracle == UKind::Good;
                        std::size_t i = 0;
                        while (i < nv && ++u[i] > 3) u[i++] = -3;
                        if (i == nv) break;
                    }
                }
            }
        }
    }
    CHECK(bad_seen > 100);
    CHECK(good_seen > 100);
}

TEST_CASE("singular fiber scan") {
    const auto circle = singular_fiber_scan(parse_multi("X1^2 + X2^2"), nullptr, 5, 2);
    REQUIRE(circle.size() == 1);
    CHECK(circle[0].lambda == 0);
    CHECK(singular_fiber_scan(parse_multi("X1"), nullptr, 7, 2).empty());

    const auto f = parse_multi("X1^2 + X2^2 + X3^2");
    const auto g = parse_multi("X1", 3);
    const auto sliced = singular_fiber_scan(f, &g, 5, 2);
    REQUIRE(sliced.size() == 1);
    CHECK(sliced[0].lambda == 0);

    // Critical values of a cubic in one variable: T^3 - 3T has critical values +-2.
    const auto cubic = singular_fiber_scan(parse_multi("X1^3 - 3*X1"), nullptr, 7, 1);
    REQUIRE(cubic.size() == 2);
    CHECK(cubic[0].lambda == 2);
    CHECK(cubic[1].lambda == 5);

    // x^4 - 6x^2 has critical points 0 and +-sqrt(3); 3 is not a square mod 7,
    // but the critical value -9 = 5 is rational.
    const auto quartic = parse_multi("X1^4 - 6*X1^2");
    const auto hidden = singular_fiber_scan(quartic, nullptr, 7, 1);
    const auto found = singular_fiber_scan(quartic, nullptr, 7, 2);
    REQUIRE(hidden.size() == 1);
    CHECK(hidden[0].lambda == 0);
    REQUIRE(found.size() == 2);
    CHECK(found[1].lambda == 5);
    CHECK(found[1].field_degree == 2);
}

TEST_CASE("deviation profile of a smooth affine quadric") {
    const std::vector<std::uint32_t> primes{5, 7, 11, 13, 17};
    const auto prof = deviation_profile(parse_multi("X1^2 + X2^2 + X3^2"), 1, primes);
    REQUIRE(prof.counts.size() == primes.size());
    for (double v : prof.normalized) CHECK(v == doctest::Approx(1.0));
    CHECK(prof.fitted_constant == doctest::Approx(1.0));
}
