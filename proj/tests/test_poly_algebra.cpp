#include <random>

#include "doctest.h"
#include "xnt/error.hpp"
#include "xnt/poly_algebra.hpp"

using namespace xnt;

namespace {

// Sylvester-matrix determinant by Gaussian elimination mod p; independent of
// the Euclidean path in the library.
std::int64_t sylvester_det_mod_p(const UniPoly& a, const UniPoly& b, std::uint32_t p) {
    const std::size_t m = a.degree(), n = b.degree(), size = m + n;
    std::vector<std::vector<std::int64_t>> mat(size, std::vector<std::int64_t>(size, 0));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t i = 0; i <= m; ++i) mat[r][r + i] = a.coeff(m - i);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t i = 0; i <= n; ++i) mat[n + r][r + i] = b.coeff(n - i);
    std::int64_t det = 1;
    for (std::size_t k = 0; k < size; ++k) {
        std::size_t piv = k;
        while (piv < size && mat[piv][k] % p == 0) ++piv;
        if (piv == size) return 0;
        if (piv != k) {
            std::swap(mat[piv], mat[k]);
            det = (p - det) % p;
        }
        det = det * mat[k][k] % p;
        const auto inv = static_cast<std::int64_t>(inv_mod(mat[k][k], p));
        for (std::size_t i = k + 1; i < size; ++i) {
            const std::int64_t f = mat[i][k] * inv % p;
            for (std::size_t j = k; j < size; ++j) mat[i][j] = ((mat[i][j] - f * mat[k][j]) % static_cast<std::int64_t>(p) + p) % p;
        }
    }
    return det;
}

bool has_common_root(const UniPoly& a, const UniPoly& b, std::uint32_t p, std::uint32_t max_degree) {
    for (std::uint32_t k = 1; k <= max_degree; ++k) {
        const auto f = build_ext_field(p, k);
        for (Elem x = 0; x < f.size(); ++x)
            if (a.eval(f, x) == 0 && b.eval(f, x) == 0) return true;
    }
    return false;
}

UniPoly random_poly(std::mt19937_64& rng, int degree, std::uint32_t p) {
    std::uniform_int_distribution<std::int64_t> dist(0, p - 1);
    std::vector<std::int64_t> c(degree + 1);
    for (auto& x : c) x = dist(rng);
    if (c.back() == 0) c.back() = 1;
    return UniPoly(c, p);
}

} // namespace

TEST_CASE("multivariate evaluation") {
    const auto sum_sq = parse_multi("X1^2 + X2^2");
    CHECK(sum_sq.n_vars() == 2);
    CHECK(sum_sq.eval(std::vector<std::int64_t>{0, 0}) == 0);
    CHECK(sum_sq.reduce_mod(5).eval(std::vector<std::int64_t>{1, 2}) == 0);
    CHECK(parse_multi("X1*X2*X3").eval(std::vector<std::int64_t>{1, 1, 1}) == 1);
    CHECK_THROWS_AS(sum_sq.eval(std::vector<std::int64_t>{1}), InputError);

    // Reducing then evaluating equals evaluating then reducing.
    const auto f = parse_multi("3*X0^3 - 7*X0*X1^2 + 11*X2 - 5");
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::int64_t> dist(-50, 50);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::int64_t> x{dist(rng), dist(rng), dist(rng)};
        for (std::uint32_t p : {2u, 3u, 13u, 101u}) {
            const std::int64_t over_z = f.eval(x);
            CHECK(f.reduce_mod(p).eval(x) == reduce_mod(over_z, p));
            const auto field = build_ext_field(p, 1);
            std::vector<Elem> xe{reduce_mod(x[0], p), reduce_mod(x[1], p), reduce_mod(x[2], p)};
            CHECK(f.eval(field, xe) == reduce_mod(over_z, p));
        }
    }
}

TEST_CASE("overflow is detected") {
    const auto f = parse_multi("X0^5");
    CHECK_THROWS_AS(f.eval(std::vector<std::int64_t>{10'000'000}), OverflowError);
}

TEST_CASE("gradient") {
    const auto g = parse_multi("X1^2 + X2^2").gradient();
    CHECK(to_string(g[0]) == "2*X1");
    CHECK(to_string(g[1]) == "2*X2");
    const auto cube = parse_multi("X1^3").reduce_mod(3).gradient();
    CHECK(cube[0].is_zero());
    const auto mixed = parse_multi("X1*X2").gradient();
    CHECK(to_string(mixed[0]) == "X2");
    CHECK(to_string(mixed[1]) == "X1");
}

TEST_CASE("homogenize") {
    const auto h = parse_multi("X1^2 + X2^2 - 1").homogenize(0);
    CHECK(h.n_vars() == 3);
    CHECK(to_string(h) == "-X0^2 + X1^2 + X2^2");
    CHECK(h.is_homogeneous());
    CHECK(h.dehomogenize(0) == parse_multi("X1^2 + X2^2 - 1"));

    const auto already = parse_multi("X0^2 + X1*X2");
    CHECK(already.homogenize(0).dehomogenize(0) == already);
    CHECK(already.homogenize(0).terms().size() == already.terms().size());

    const auto cubic = parse_multi("X1^3 + X1").homogenize(0);
    CHECK(to_string(cubic) == "X0^2*X1 + X1^3");
}

TEST_CASE("text format round trip and parse errors") {
    for (const char* s : {"X1^2 + 3*X2^2 - 1", "X0^2 + X1^2 + X2^2", "-X0^3 + 2*X0*X1*X2 - 7", "X1^3 + X2^3 + X3^3"}) {
        const auto p = parse_multi(s);
        CHECK(to_string(p) == s);
        CHECK(parse_multi(to_string(p)) == p);
    }
    CHECK(parse_multi("3X1 X2 + 2*X1*X2") == parse_multi("5*X1*X2"));
    CHECK(to_string(parse_uni("T^3-3*T")) == "T^3 - 3*T");
    CHECK(to_string(parse_uni("2T^3+1")) == "2*T^3 + 1");

    try {
        parse_multi("X1^^2");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 3);
    }
    CHECK_THROWS_AS(parse_multi(""), ParseError);
    CHECK_THROWS_AS(parse_multi("X1 +"), ParseError);
    CHECK_THROWS_AS(parse_multi("Y1"), ParseError);
    CHECK_THROWS_AS(parse_uni("X^2"), ParseError);
}

TEST_CASE("diagonal coefficients") {
    CHECK(parse_multi("X0^2 + 3*X1^2 - X2^2").diagonal_coefficients() == std::vector<std::int64_t>{1, 3, -1});
    CHECK_FALSE(parse_multi("X0^2 + X0*X1").diagonal_coefficients());
    CHECK_FALSE(parse_multi("X0^2 + X1^3").diagonal_coefficients());
}

TEST_CASE("univariate resultant against Sylvester convention") {
    const UniPoly a({-3, 1}), b({-8, 1});  // T-3, T-8
    CHECK(resultant_uni(a, b) == Int128{3 - 8});
    for (std::int64_t s : {-5, 0, 2, 6, 11}) {
        const UniPoly t2({-s, 0, 1}), two_t({0, 2});
        CHECK(resultant_uni(t2, two_t) == Int128{-4 * s});
    }
    const UniPoly sq({1, 0, 1});
    CHECK(resultant_uni(sq, sq) == 0);
    CHECK_THROWS_AS(resultant_uni(sq, UniPoly{}), InputError);

    std::mt19937_64 rng(11);
    for (std::uint32_t p : {3u, 5u, 7u, 13u}) {
        for (int trial = 0; trial < 60; ++trial) {
            std::uniform_int_distribution<int> deg(0, 4);
            const auto x = random_poly(rng, deg(rng), p), y = random_poly(rng, deg(rng), p);
            CHECK(resultant_uni(x, y) == Int128{sylvester_det_mod_p(x, y, p)});
        }
    }
    // Integer path agrees with the mod-p path after reduction.
    std::uniform_int_distribution<std::int64_t> coeff(-9, 9);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::int64_t> ca(4), cb(3);
        for (auto& c : ca) c = coeff(rng);
        for (auto& c : cb) c = coeff(rng);
        ca.back() = ca.back() == 0 ? 1 : ca.back();
        cb.back() = cb.back() == 0 ? -1 : cb.back();
        const UniPoly za(ca), zb(cb);
        const Int128 r = resultant_uni(za, zb);
        for (std::uint32_t p : {11u, 13u, 17u}) {
            if (za.lead() % p == 0 || zb.lead() % p == 0) continue;
            Int128 red = r % p;
            if (red < 0) red += p;
            CHECK(resultant_uni(za.reduce_mod(p), zb.reduce_mod(p)) == red);
        }
    }
}

TEST_CASE("resultant vanishes iff a common root exists over small extensions") {
    std::mt19937_64 rng(5);
    int zero_hits = 0;
    for (std::uint32_t p : {2u, 3u, 5u}) {
        for (int trial = 0; trial < 80; ++trial) {
            std::uniform_int_distribution<int> deg(1, 2);
            const auto a = random_poly(rng, deg(rng), p), b = random_poly(rng, deg(rng), p);
            const bool zero = resultant_uni(a, b) == 0;
            zero_hits += zero;
            CHECK(zero == has_common_root(a, b, p, 4));
        }
    }
    CHECK(zero_hits > 0);
}

TEST_CASE("discriminant") {
    for (std::int64_t b = -4; b <= 4; ++b)
        for (std::int64_t c = -4; c <= 4; ++c) CHECK(discriminant_uni(UniPoly({c, b, 1})) == Int128{b * b - 4 * c});
    CHECK(discriminant_uni(parse_uni("T^2 - 6")) == 24);
    CHECK(discriminant_uni(parse_uni("T^2 - 2*T + 1")) == 0);
    CHECK(discriminant_uni(parse_uni("T^3 - 1")) == -27);
    // p | deg: derivative drops degree mod 3; classical -4a^3 - 27b^2 = -31.
    CHECK(discriminant_mod(parse_uni("T^3 + T + 1"), 3) == 2);
    CHECK(discriminant_mod(parse_uni("T^3 + T + 1"), 7) == Int128{(-31 % 7 + 7) % 7});
    CHECK_THROWS_AS(discriminant_mod(parse_uni("3*T^2 + 1"), 3), DomainError);
}

TEST_CASE("critical value polynomial") {
    const auto r = critical_value_poly(parse_uni("T^2").reduce_mod(5));
    CHECK(r == UniPoly({0, -4}, 5));
    CHECK(roots_mod_p(r) == std::vector<Elem>{0});
    CHECK(roots_mod_p(critical_value_poly(parse_uni("T^3 - 3*T").reduce_mod(5))) == std::vector<Elem>{2, 3});
    CHECK(roots_mod_p(critical_value_poly(parse_uni("T^2 + 1").reduce_mod(7))) == std::vector<Elem>{1});
    CHECK_THROWS_AS(critical_value_poly(parse_uni("T^3 + 1").reduce_mod(3)), DegenerateError);
    CHECK_THROWS_AS(critical_value_poly(parse_uni("T^2")), InputError);

    // Roots in F_p equal the F_p-rational values h(x) at critical points over F_{p^j}, j <= 4.
    std::mt19937_64 rng(3);
    for (std::uint32_t p : {7u, 11u}) {
        for (int trial = 0; trial < 12; ++trial) {
            std::uniform_int_distribution<int> deg(2, 5);
            const auto h = random_poly(rng, deg(rng), p);
            if (h.derivative().is_zero()) continue;
            std::vector<Elem> expected;
            for (std::uint32_t k = 1; k <= 4; ++k) {
                const auto f = build_ext_field(p, k);
                const auto dh = h.derivative();
                for (Elem x = 0; x < f.size(); ++x) {
                    if (dh.eval(f, x) != 0) continue;
                    const Elem v = h.eval(f, x);
                    if (f.in_base_field(v)) expected.push_back(v);
                }
            }
            std::sort(expected.begin(), expected.end());
            expected.erase(std::unique(expected.begin(), expected.end()), expected.end());
            CHECK(roots_mod_p(critical_value_poly(h)) == expected);
        }
    }
}
