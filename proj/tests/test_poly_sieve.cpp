#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "xnt/error.hpp"
#include "xnt/poly_sieve.hpp"

using namespace xnt;

namespace {

UniPoly T_pow(unsigned d) {
    std::vector<std::int64_t> c(d + 1, 0);
    c[d] = 1;
    return UniPoly(c);
}

std::vector<UniPoly> bank() {
    return {parse_uni("T^2"), parse_uni("T^3"), parse_uni("T^3 - 3*T"), parse_uni("T^4 + T"), parse_uni("2*T^3 + 1")};
}

// Values h(x) at critical points x in F_{p^k}, k < deg h, that land in F_p.
std::set<Elem> critical_values_oracle(const UniPoly& h, std::uint32_t p) {
    std::set<Elem> out;
    const UniPoly dh = h.derivative();
    const unsigned top = std::min<unsigned>(h.degree() - 1, ExtField::kMaxDegree);
    for (unsigned k = 1; k <= top; ++k) {
        const auto f = build_ext_field(p, k);
        for (Elem x = 0; x < f.size(); ++x) {
            if (dh.eval(f, x) != 0) continue;
            const Elem v = h.eval(f, x);
            if (f.in_base_field(v)) out.insert(v);
        }
    }
    return out;
}

std::vector<std::uint32_t> bank_primes(const UniPoly& h) { return nonsurjective_primes(h, 2, 200); }

} // namespace

TEST_CASE("prime data examples") {
    const auto sq = build_prime_data(parse_uni("T^2"), 7);
    CHECK(sq.image == std::vector<std::uint8_t>{1, 1, 1, 0, 1, 0, 0});
    CHECK(sq.image_size == 4);
    CHECK(sq.bound_tight());
    CHECK(sq.exceptional == std::vector<Elem>{0});
    CHECK(sq.nu == std::vector<std::uint32_t>{1, 2, 2, 0, 2, 0, 0});

    const auto cub = build_prime_data(parse_uni("T^3 - 3*T"), 5);
    CHECK(cub.exceptional == std::vector<Elem>{2, 3});

    CHECK_THROWS_AS(build_prime_data(parse_uni("T^3"), 3), InputError);
    CHECK_THROWS_AS(build_prime_data(parse_uni("T^3"), 2), InputError);
    CHECK_THROWS_AS(build_prime_data(parse_uni("5*T^2 + 1"), 5), InputError);
}

TEST_CASE("prime data invariants and image bound") {
    for (const auto& h : bank()) {
        const auto ph = bank_primes(h);
        CHECK(!ph.empty());
        for (auto p : primes_in_range(h.degree() + 1, 200)) {
            if (reduce_mod(h.lead(), p) == 0) continue;
            const auto data = build_prime_data(h, p);
            std::uint64_t total = 0;
            for (Elem n = 0; n < p; ++n) {
                total += data.nu[n];
                CHECK((data.image[n] != 0) == (data.nu[n] >= 1));
            }
            CHECK(total == p);
            CHECK(data.image_size == std::count(data.image.begin(), data.image.end(), 1));
            const bool in_ph = std::find(ph.begin(), ph.end(), p) != ph.end();
            CHECK(in_ph == (data.image_size < p));
            if (in_ph) CHECK(std::uint64_t{data.image_size} * h.degree() <= std::uint64_t{p} * h.degree() - (p - 1));
        }
    }
    const auto squares = bank_primes(parse_uni("T^2"));
    CHECK(std::find(squares.begin(), squares.end(), 2u) == squares.end());
}

TEST_CASE("exceptional sets match critical values in extensions") {
    for (const auto& h : bank())
        for (auto p : primes_in_range(h.degree() + 1, 13)) {
            if (reduce_mod(h.lead(), p) == 0) continue;
            const auto data = build_prime_data(h, p);
            const auto expect = critical_values_oracle(h, p);
            CHECK(std::set<Elem>(data.exceptional.begin(), data.exceptional.end()) == expect);
        }
}

TEST_CASE("detector") {
    const auto sq = build_prime_data(parse_uni("T^2"), 7);
    CHECK(detector(sq, 3) == doctest::Approx(-4.0 / 7));
    CHECK(detector(sq, 4) == doctest::Approx(3.0 / 7));
    CHECK(detector(sq, 4) >= 6.0 / 14 - 1e-15);
    for (std::int64_t n = -30; n < 30; ++n) {
        CHECK(detector(sq, n) == detector(sq, n + 7));
        CHECK(std::abs(detector(sq, n)) < 1.0);
    }
    for (const auto& h : bank())
        for (auto p : bank_primes(h)) {
            const auto data = build_prime_data(h, p);
            for (Elem n = 0; n < p; ++n)
                if (data.in_image(n))
                    CHECK(detector(data, n) >= (p - 1.0) / (h.degree() * static_cast<double>(p)) - 1e-12);
        }
}

TEST_CASE("power decomposition") {
    const PrimeField f5(5);
    const auto chi = mult_char(f5, 2, 1);
    CHECK(0.5 * (1.0 + chi(2).real()) == doctest::Approx(0.0));
    CHECK(0.5 * (1.0 + chi(4).real()) == doctest::Approx(1.0));
    CHECK(power_decomposition_check(3, 7) <= 1e-9);
    for (unsigned d : {2u, 3u, 4u, 5u})
        for (auto p : primes_in_range(2, 200))
            if ((p - 1) % d == 0) CHECK(power_decomposition_check(d, p) <= 1e-9);
    CHECK_THROWS_AS(power_decomposition_check(3, 5), InputError);
    CHECK_THROWS_AS(power_decomposition_check(2, 9), InputError);
}

TEST_CASE("detector agrees with the character expansion for T^d") {
    for (unsigned d : {2u, 3u, 4u})
        for (auto p : primes_in_range(3, 120)) {
            if ((p - 1) % d != 0) continue;
            const auto data = build_prime_data(T_pow(d), p);
            CHECK(data.image_size == 1 + (p - 1) / d);
            const PrimeField field(p);
            const double shift = 1.0 / d - static_cast<double>(data.image_size) / p;
            for (Elem n = 1; n < p; ++n) {
                Complex sum = 0.0;
                for (unsigned j = 1; j < d; ++j) sum += mult_char(field, d, j)(n);
                CHECK(std::abs(detector(data, n) - (sum / static_cast<double>(d) + shift)) < 1e-9);
            }
        }
}

TEST_CASE("Browning weights") {
    const auto sq = build_prime_data(parse_uni("T^2"), 5);
    CHECK(browning_weight(sq, 4, 0.0) == 0.0);
    CHECK(browning_weight(sq, 2, 1.0) == -1.0);
    CHECK(browning_weight(sq, 0, 2.5) == 2.5);
}

TEST_CASE("membership filter") {
    const auto config = make_sieve_config(parse_uni("T^2"), {3, 7});
    const auto data = build_prime_data(config);
    CHECK_FALSE(membership_filter(data, 10));
    CHECK(membership_filter(data, 9));
    CHECK(membership_filter(data, 0));
    CHECK(membership_filter(std::span<const SievePrimeData>{}, 12345));
}

TEST_CASE("zero false negatives on the bank") {
    for (const auto& h : bank()) {
        std::vector<SievePrimeData> all;
        for (auto p : bank_primes(h)) all.push_back(build_prime_data(h, p));
        for (std::int64_t t = -10000; t <= 10000; ++t) {
            const std::int64_t n = h.eval(t);
            if (!membership_filter(all, n)) {
                FAIL("false negative for " << to_string(h) << " at t = " << t);
            }
        }
    }
}

TEST_CASE("false-positive rate does not grow with more primes") {
    const UniPoly h = parse_uni("T^2");
    std::vector<std::int64_t> nonvalues;
    for (std::int64_t n = 1; nonvalues.size() < 100000; ++n) {
        const auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(n))));
        if (r * r != n) nonvalues.push_back(n);
    }
    const auto primes = bank_primes(h);
    REQUIRE(primes.size() >= 8);
    std::size_t previous = nonvalues.size() + 1;
    for (std::size_t k = 1; k <= 8; ++k) {
        const auto config = make_sieve_config(h, {primes.begin(), primes.begin() + k});
        const auto data = build_prime_data(config);
        const auto passed = static_cast<std::size_t>(
            std::count_if(nonvalues.begin(), nonvalues.end(), [&](auto n) { return membership_filter(data, n); }));
        CHECK(passed <= previous);
        previous = passed;
    }
}

TEST_CASE("sieve configuration") {
    const auto config = make_sieve_config(parse_uni("T^2"), {3, 5, 7, 11});
    CHECK(config.threshold() == doctest::Approx(1.0));
    const auto logp = make_sieve_config(parse_uni("T^2"), {3, 5, 7, 11}, ThresholdMode::LogP);
    CHECK(logp.threshold() == doctest::Approx(1.0 / std::log(4.0)));
    CHECK_THROWS_AS(make_sieve_config(parse_uni("T^2"), {3, 3}), InputError);
    CHECK_THROWS_AS(make_sieve_config(parse_uni("T^2"), {2}), InputError);
    CHECK_THROWS_AS(make_sieve_config(parse_uni("T^3"), {5}), InputError);
    CHECK_THROWS_AS(make_sieve_config(parse_uni("T"), {5}), InputError);
    const auto data = build_prime_data(config);
    CHECK(exceptional_count(data, 0) == 4);
    CHECK(exceptional_count(data, 15) == 2);
}

TEST_CASE("integer image table agrees with direct root search") {
    std::mt19937_64 rng(20261018);
    for (const auto& h : bank()) {
        const Int128 bound = 2'000'000'000;
        const IntegerImage image(h, bound);
        const auto T = value_radius(h, bound);
        for (std::int64_t t = T + 1; t < T + 50; ++t) {
            CHECK(std::abs(static_cast<double>(h.eval_wide(t))) > static_cast<double>(bound));
            CHECK(std::abs(static_cast<double>(h.eval_wide(-t))) > static_cast<double>(bound));
        }
        std::uniform_int_distribution<std::int64_t> any(-2'000'000'000, 2'000'000'000);
        std::uniform_int_distribution<std::int64_t> small(-1200, 1200);
        for (int i = 0; i < 2000; ++i) {
            const std::int64_t n = i % 2 == 0 ? any(rng) : static_cast<std::int64_t>(h.eval_wide(small(rng)));
            if (n < -2'000'000'000 || n > 2'000'000'000) continue;
            CHECK(image.contains(n) == has_integer_root_direct(h, n));
        }
        CHECK_THROWS_AS(image.contains(bound + 1), DomainError);
    }
}

TEST_CASE("sieve inequality on squares") {
    std::vector<std::uint32_t> primes;
    for (auto p : primes_in_range(20, 60))
        if (primes.size() < 8) primes.push_back(p);
    const auto config = make_sieve_config(parse_uni("T^2"), primes);
    const auto data = build_prime_data(config);
    Sequence a;
    for (std::int64_t k = 1; k <= 50; ++k) a[k * k] = 1.0;
    const auto led = sieve_bound_eval(config, data, a);
    CHECK(led.V_h == 50.0);
    CHECK(led.support_ok);
    CHECK(led.hypothesis_ok);
    CHECK(led.inequality_holds);

    double sigma = 0.0, diag = 0.0;
    for (std::int64_t k = 1; k <= 50; ++k) {
        double s = 0.0;
        for (auto p : primes) {
            // k^2 is a square mod p; there are (p+1)/2 squares.
            const double D = 1.0 - (p + 1.0) / (2.0 * p);
            s += D;
            diag += D * D;
        }
        sigma += s * s;
    }
    CHECK(led.sigma == doctest::Approx(sigma));
    CHECK(led.diagonal == doctest::Approx(diag));
    CHECK(led.cross == doctest::Approx(sigma - diag));
    CHECK(led.diagonal <= 8.0 * led.total_weight);
    CHECK(64.0 * 50.0 <= 16.0 * sigma);

    Sequence non;
    for (std::int64_t n : {2, 3, 5, 6, 7}) non[n] = 2.0;
    const auto zero = sieve_bound_eval(config, data, non);
    CHECK(zero.V_h == 0.0);
    CHECK(zero.inequality_holds);

    Sequence bad{{4, 1.0}, {9, -0.5}};
    CHECK_THROWS_AS(sieve_bound_eval(config, data, bad), InputError);
}

TEST_CASE("support condition flags") {
    const auto config = make_sieve_config(parse_uni("T^2"), {3, 5});
    const auto data = build_prime_data(config);
    CHECK_FALSE(sieve_bound_eval(config, data, Sequence{{0, 1.0}}).support_ok);
    CHECK_FALSE(sieve_bound_eval(config, data, Sequence{{9, 1.0}}).support_ok);
    CHECK(sieve_bound_eval(config, data, Sequence{{4, 1.0}}).support_ok);
}

TEST_CASE("power sieve character terms") {
    const std::vector<std::uint32_t> primes{7, 13, 19, 31};
    const auto one = power_sieve_terms(3, primes, Sequence{{2, 1.0}});
    CHECK(one.V == 0.0);
    CHECK(one.first_term == doctest::Approx(0.25));
    CHECK(one.cross_term == doctest::Approx(4.0 * 3.0 * 4.0 / 16.0));

    // n = 0 kills every nontrivial character, leaving only the 1/P term.
    const auto origin = power_sieve_terms(3, primes, Sequence{{0, 1.0}});
    CHECK(origin.V == 1.0);
    CHECK(origin.cross_term == 0.0);
    CHECK(origin.rhs == doctest::Approx(0.25));
    CHECK_FALSE(origin.support_ok);

    const std::int64_t m = 7 * 13;
    const auto big = power_sieve_terms(3, {primes.begin(), primes.begin() + 2}, Sequence{{m * m * m, 1.0}});
    CHECK(big.V == 1.0);
    CHECK(big.rhs == doctest::Approx(0.5));
    CHECK_FALSE(big.support_ok);

    CHECK_THROWS_AS(power_sieve_terms(3, std::vector<std::uint32_t>{5}, Sequence{}), InputError);
}
