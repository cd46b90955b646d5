#include "xnt/poly_sieve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "xnt/error.hpp"

namespace xnt {

namespace {

std::vector<std::uint32_t> values_mod_p(const UniPoly& h, std::uint32_t p) {
    std::vector<std::uint32_t> c;
    for (auto a : h.coeffs()) c.push_back(reduce_mod(a, p));
    std::vector<std::uint32_t> out(p);
    for (std::uint32_t x = 0; x < p; ++x) {
        std::uint64_t acc = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = (acc * x + *it) % p;
        out[x] = static_cast<std::uint32_t>(acc);
    }
    return out;
}

void check_prime_for(const UniPoly& h, std::uint32_t p) {
    if (h.modulus() != 0) throw InputError("sieve polynomial must have integer coefficients");
    if (h.degree() < 1) throw InputError("sieve polynomial must be nonconstant");
    if (!is_prime(p)) throw InputError(std::to_string(p) + " is not prime");
    if (p <= static_cast<std::uint32_t>(h.degree()))
        throw InputError("prime " + std::to_string(p) + " does not exceed deg h = " + std::to_string(h.degree()));
    if (reduce_mod(h.lead(), p) == 0)
        throw InputError("prime " + std::to_string(p) + " divides the leading coefficient of h");
}

bool log_at_least(std::int64_t n, double P) {
    if (n == 0) return true;
    const double mag = std::abs(static_cast<double>(n));
    return std::log(mag) >= P;
}

} // namespace

bool SievePrimeData::is_exceptional(std::int64_t n) const noexcept {
    const Elem r = reduce_mod(n, p);
    return std::binary_search(exceptional.begin(), exceptional.end(), r);
}

double SievePrimeData::image_bound() const noexcept {
    return static_cast<double>(p) - static_cast<double>(p - 1) / degree;
}

bool SievePrimeData::bound_tight() const noexcept {
    return std::uint64_t{image_size} * degree == std::uint64_t{p} * degree - (p - 1);
}

SievePrimeData build_prime_data(const UniPoly& h, std::uint32_t p) {
    check_prime_for(h, p);
    SievePrimeData data;
    data.p = p;
    data.degree = static_cast<unsigned>(h.degree());
    data.image.assign(p, 0);
    data.nu.assign(p, 0);
    for (auto v : values_mod_p(h, p)) {
        data.image[v] = 1;
        ++data.nu[v];
    }
    data.image_size = static_cast<std::uint32_t>(std::count(data.image.begin(), data.image.end(), 1));
    if (h.degree() >= 2) data.exceptional = roots_mod_p(critical_value_poly(h.reduce_mod(p)));
    return data;
}

bool is_nonsurjective(const UniPoly& h, std::uint32_t p) {
    auto v = values_mod_p(h, p);
    std::sort(v.begin(), v.end());
    return std::unique(v.begin(), v.end()) - v.begin() < static_cast<std::ptrdiff_t>(p);
}

std::vector<std::uint32_t> nonsurjective_primes(const UniPoly& h, std::uint32_t lo, std::uint32_t hi) {
    std::vector<std::uint32_t> out;
    for (auto p : primes_in_range(lo, hi)) {
        if (p <= static_cast<std::uint32_t>(std::max(h.degree(), 0)) || reduce_mod(h.lead(), p) == 0) continue;
        if (is_nonsurjective(h, p)) out.push_back(p);
    }
    return out;
}

double SieveConfig::threshold() const noexcept {
    const double P = static_cast<double>(primes.size());
    const double base = P / (2.0 * degree());
    if (mode == ThresholdMode::Lemma) return base;
    const double lp = std::log(P);
    return lp > 0.0 ? base / lp : std::numeric_limits<double>::infinity();
}

SieveConfig make_sieve_config(UniPoly h, std::vector<std::uint32_t> primes, ThresholdMode mode) {
    if (h.modulus() != 0) throw InputError("sieve polynomial must have integer coefficients");
    if (h.degree() < 2) throw InputError("sieve polynomial must have degree >= 2");
    std::set<std::uint32_t> seen;
    for (auto p : primes) {
        if (!seen.insert(p).second) throw InputError("prime " + std::to_string(p) + " listed twice");
        check_prime_for(h, p);
        if (!is_nonsurjective(h, p))
            throw InputError("h is surjective on F_" + std::to_string(p) + ", so p is not in P_h");
    }
    return SieveConfig{std::move(h), std::move(primes), mode};
}

std::vector<SievePrimeData> build_prime_data(const SieveConfig& config) {
    std::vector<SievePrimeData> out;
    out.reserve(config.primes.size());
    for (auto p : config.primes) out.push_back(build_prime_data(config.h, p));
    return out;
}

double detector(const SievePrimeData& data, std::int64_t n) noexcept {
    return (data.in_image(n) ? 1.0 : 0.0) - static_cast<double>(data.image_size) / data.p;
}

double power_decomposition_check(unsigned d, std::uint32_t p) {
    if (d < 1) throw InputError("order must be positive");
    if (!is_prime(p)) throw InputError(std::to_string(p) + " is not prime");
    if ((p - 1) % d != 0)
        throw InputError(std::to_string(d) + " does not divide " + std::to_string(p) + " - 1");
    const PrimeField field(p);
    std::vector<TraceFunction> chars;
    for (unsigned j = 1; j < d; ++j) chars.push_back(mult_char(field, d, j));
    const std::uint64_t cofactor = (p - 1) / d;
    double worst = 0.0;
    for (Elem x = 1; x < p; ++x) {
        const double lhs = field.pow(x, cofactor) == 1 ? 1.0 : 0.0;
        Complex rhs = 1.0;
        for (const auto& chi : chars) rhs += chi(x);
        rhs /= static_cast<double>(d);
        worst = std::max(worst, std::abs(rhs - lhs));
    }
    return worst;
}

double browning_weight(const SievePrimeData& data, std::int64_t n, double alpha) noexcept {
    const double nu = data.nu_at(n);
    return alpha + (nu - 1.0) * (static_cast<double>(data.degree) - nu);
}

bool membership_filter(std::span<const SievePrimeData> data, std::int64_t n) noexcept {
    return std::all_of(data.begin(), data.end(), [n](const SievePrimeData& d) { return d.in_image(n); });
}

unsigned exceptional_count(std::span<const SievePrimeData> data, std::int64_t n) noexcept {
    return static_cast<unsigned>(
        std::count_if(data.begin(), data.end(), [n](const SievePrimeData& d) { return d.is_exceptional(n); }));
}

std::int64_t value_radius(const UniPoly& h, Int128 max_abs) {
    if (h.degree() < 1) throw InputError("value table needs a nonconstant polynomial");
    if (max_abs < 0) throw InputError("value bound must be nonnegative");
    const int d = h.degree();
    const long double lead = std::abs(static_cast<long double>(h.lead()));
    long double lower = 0.0L;
    for (int i = 0; i < d; ++i) lower += std::abs(static_cast<long double>(h.coeff(i)));
    long double T = 1.0L;
    T = std::max(T, 2.0L * lower / lead);
    T = std::max(T, std::pow(2.0L * static_cast<long double>(max_abs) / lead, 1.0L / d));
    if (T > 1e12L) throw OverflowError("value table radius too large");
    return static_cast<std::int64_t>(std::ceil(T)) + 1;
}

IntegerImage::IntegerImage(const UniPoly& h, Int128 max_abs) : max_abs_(max_abs), radius_(value_radius(h, max_abs)) {
    for (std::int64_t t = -radius_; t <= radius_; ++t) {
        Int128 v;
        try {
            v = h.eval_wide(t);
        } catch (const OverflowError&) {
            continue;
        }
        if (v >= -max_abs_ && v <= max_abs_) values_.push_back(v);
    }
    std::sort(values_.begin(), values_.end());
    values_.erase(std::unique(values_.begin(), values_.end()), values_.end());
}

bool IntegerImage::contains(Int128 n) const {
    if (n > max_abs_ || n < -max_abs_) throw DomainError("value " + to_string(n) + " is outside the table range");
    return std::binary_search(values_.begin(), values_.end(), n);
}

bool has_integer_root_direct(const UniPoly& h, Int128 n) {
    if (h.degree() < 1) throw InputError("root search needs a nonconstant polynomial");
    const auto hits = [&](Int128 t) {
        try {
            return h.eval_wide(t) == n;
        } catch (const OverflowError&) {
            return false;
        }
    };
    Int128 c0 = Int128{h.coeff(0)} - n;
    if (c0 == 0) return true;
    if (c0 < 0) c0 = -c0;
    for (Int128 t = 1; t * t <= c0; ++t) {
        if (c0 % t != 0) continue;
        const Int128 other = c0 / t;
        if (hits(t) || hits(-t) || hits(other) || hits(-other)) return true;
    }
    return false;
}

SieveLedger sieve_bound_eval(const SieveConfig& config, std::span<const SievePrimeData> data, const Sequence& a) {
    if (data.size() != config.primes.size()) throw InputError("prime data does not match the configuration");
    SieveLedger led;
    led.prime_count = data.size();
    led.degree = config.degree();
    led.threshold = config.threshold();
    const double P = static_cast<double>(led.prime_count);
    const double hyp_floor = P / (2.0 * led.degree);

    Int128 max_abs = 0;
    for (const auto& [n, w] : a) {
        if (w < 0.0 || std::isnan(w)) throw InputError("sequence weight at n = " + std::to_string(n) + " is negative");
        if (w > 0.0) max_abs = std::max<Int128>(max_abs, n < 0 ? -Int128{n} : Int128{n});
    }
    const IntegerImage image(config.h, max_abs);

    for (const auto& [n, w] : a) {
        if (w == 0.0) continue;
        ++led.supported;
        led.total_weight += w;
        double sum = 0.0, sum_sq = 0.0;
        for (const auto& d : data) {
            const double D = detector(d, n);
            sum += D;
            sum_sq += D * D;
        }
        led.sigma += w * sum * sum;
        led.diagonal += w * sum_sq;
        if (log_at_least(n, P)) led.support_ok = false;
        const bool exceptional = exceptional_count(data, n) >= led.threshold;
        if (exceptional) led.exceptional_ok = false;
        if (image.contains(n)) {
            ++led.in_image;
            led.V_h += w;
            if (!exceptional && sum < hyp_floor - 1e-12) led.hypothesis_ok = false;
        }
    }
    led.cross = led.sigma - led.diagonal;
    led.lhs = P * P * led.V_h;
    led.rhs = 4.0 * led.degree * led.degree * led.sigma;
    led.inequality_holds = led.lhs <= led.rhs * (1.0 + 1e-12) + 1e-12;
    if (led.hypothesis_ok && !led.inequality_holds)
        throw AssertionFailure("sieve inequality P^2 V_h <= (2d)^2 sigma failed under its hypothesis");
    return led;
}

PowerSieveTerms power_sieve_terms(unsigned d, std::span<const std::uint32_t> primes, const Sequence& a) {
    if (d < 2) throw InputError("power sieve needs d >= 2");
    std::set<std::uint32_t> seen;
    for (auto p : primes) {
        if (!is_prime(p) || (p - 1) % d != 0)
            throw InputError("power sieve prime " + std::to_string(p) + " must be prime with d | p - 1");
        if (!seen.insert(p).second) throw InputError("prime " + std::to_string(p) + " listed twice");
    }
    PowerSieveTerms out;
    const double P = static_cast<double>(primes.size());
    Int128 max_abs = 0;
    for (const auto& [n, w] : a) {
        if (w < 0.0 || std::isnan(w)) throw InputError("sequence weight at n = " + std::to_string(n) + " is negative");
        if (w > 0.0) max_abs = std::max<Int128>(max_abs, n < 0 ? -Int128{n} : Int128{n});
    }
    std::vector<std::int64_t> power(d + 1, 0);
    power[d] = 1;
    const IntegerImage image(UniPoly(power), max_abs);

    double total = 0.0;
    for (const auto& [n, w] : a) {
        if (w == 0.0) continue;
        total += w;
        if (image.contains(n)) out.V += w;
        if (log_at_least(n, P)) out.support_ok = false;
    }
    out.first_term = P > 0 ? total / P : 0.0;

    std::vector<double> weights;
    for (const auto& [n, w] : a)
        if (w != 0.0) weights.push_back(w);
    // chars[i][j-1][s]: the j-th character mod primes[i] at the s-th supported n.
    std::vector<std::vector<std::vector<Complex>>> chars(primes.size());
    for (std::size_t i = 0; i < primes.size(); ++i) {
        const PrimeField field(primes[i]);
        for (unsigned j = 1; j < d; ++j) {
            const auto chi = mult_char(field, d, j);
            std::vector<Complex> vals;
            for (const auto& [n, w] : a)
                if (w != 0.0) vals.push_back(chi(field.reduce(n)));
            chars[i].push_back(std::move(vals));
        }
    }
    double cross = 0.0;
    for (std::size_t i = 0; i < primes.size(); ++i)
        for (std::size_t k = 0; k < primes.size(); ++k) {
            if (i == k) continue;
            for (const auto& x : chars[i])
                for (const auto& y : chars[k]) {
                    Complex acc = 0.0;
                    for (std::size_t s = 0; s < weights.size(); ++s) acc += weights[s] * x[s] * std::conj(y[s]);
                    cross += std::abs(acc);
                }
        }
    out.cross_term = P > 0 ? cross / (P * P) : 0.0;
    out.rhs = out.first_term + out.cross_term;
    return out;
}

} // namespace xnt
