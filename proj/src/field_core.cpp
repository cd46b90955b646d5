#include "xnt/field_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <tuple>

#include "xnt/error.hpp"

namespace xnt {

bool is_prime(std::uint64_t n) noexcept {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d != 0) continue;
        out.push_back(d);
        while (n % d == 0) n /= d;
    }
    if (n > 1) out.push_back(n);
    return out;
}

std::vector<std::uint32_t> primes_in_range(std::uint32_t lo, std::uint32_t hi) {
    std::vector<std::uint32_t> out;
    for (std::uint64_t n = std::max<std::uint32_t>(lo, 2); n <= hi; ++n)
        if (is_prime(n)) out.push_back(static_cast<std::uint32_t>(n));
    return out;
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) noexcept {
    if (mod == 1) return 0;
    unsigned __int128 r = 1, b = base % mod;
    while (exp) {
        if (exp & 1) r = r * b % mod;
        b = b * b % mod;
        exp >>= 1;
    }
    return static_cast<std::uint64_t>(r);
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t mod) {
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = static_cast<std::int64_t>(mod), new_r = static_cast<std::int64_t>(a % mod);
    while (new_r != 0) {
        std::int64_t quot = r / new_r;
        std::tie(t, new_t) = std::make_pair(new_t, t - quot * new_t);
        std::tie(r, new_r) = std::make_pair(new_r, r - quot * new_r);
    }
    if (r != 1)
        throw DomainError("no inverse of " + std::to_string(a) + " mod " + std::to_string(mod));
    return static_cast<std::uint64_t>(t < 0 ? t + static_cast<std::int64_t>(mod) : t);
}

std::uint32_t reduce_mod(std::int64_t value, std::uint32_t p) noexcept {
    std::int64_t r = value % static_cast<std::int64_t>(p);
    return static_cast<std::uint32_t>(r < 0 ? r + p : r);
}

std::uint32_t find_primitive_root(std::uint32_t p) {
    if (!is_prime(p)) throw InputError(std::to_string(p) + " is not prime");
    if (p == 2) return 1;
    const auto factors = distinct_prime_factors(p - 1);
    for (std::uint32_t g = 2; g < p; ++g) {
        bool ok = std::all_of(factors.begin(), factors.end(),
                              [&](std::uint64_t l) { return pow_mod(g, (p - 1) / l, p) != 1; });
        if (ok) return g;
    }
    throw DegenerateError("no primitive root found mod " + std::to_string(p));
}

Complex root_of_unity(std::int64_t num, std::int64_t den) {
    std::int64_t r = num % den;
    if (r < 0) r += den;
    if (r == 0) return {1.0, 0.0};
    if (4 * r == den) return {0.0, 1.0};
    if (2 * r == den) return {-1.0, 0.0};
    if (4 * r == 3 * den) return {0.0, -1.0};
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(den);
    return {std::cos(angle), std::sin(angle)};
}

// ---------------------------------------------------------------------------

PrimeField::PrimeField(std::uint32_t p) : p_(p), g_(0) {
    if (!is_prime(p)) throw InputError(std::to_string(p) + " is not prime");
    if (p > kMaxPrime) throw UnsupportedError("prime exceeds dlog table cap");
    g_ = find_primitive_root(p);
    const std::uint32_t order = p - 1;
    dlog_.assign(p, 0);
    exp_.resize(std::max<std::uint32_t>(order, 1));
    std::uint64_t x = 1;
    for (std::uint32_t k = 0; k < std::max<std::uint32_t>(order, 1); ++k) {
        exp_[k] = static_cast<Elem>(x);
        dlog_[x] = k;
        x = x * g_ % p;
    }
}

Elem PrimeField::inv(Elem a) const {
    if (a % p_ == 0) throw DomainError("inverse of 0 in F_" + std::to_string(p_));
    if (p_ == 2) return 1;
    return exp_[(p_ - 1 - dlog_[a]) % (p_ - 1)];
}

std::uint32_t PrimeField::dlog(Elem u) const {
    if (u % p_ == 0) throw DomainError("discrete log of 0");
    return dlog_[u % p_];
}

// ---------------------------------------------------------------------------

ExtField::ExtField(std::uint32_t p, std::vector<std::uint32_t> modulus)
    : p_(p), k_(0), q_(1), modulus_(std::move(modulus)) {
    if (!is_prime(p)) throw InputError(std::to_string(p) + " is not prime");
    if (modulus_.size() < 2 || modulus_.back() != 1)
        throw InputError("extension modulus must be monic of degree >= 1");
    k_ = static_cast<std::uint32_t>(modulus_.size() - 1);
    if (k_ > kMaxDegree) throw UnsupportedError("extension degree above cap");
    for (auto& c : modulus_) c %= p_;
    pow_p_.resize(k_ + 1);
    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i <= k_; ++i) {
        pow_p_[i] = static_cast<std::uint32_t>(q);
        if (i < k_) q *= p_;
    }
    if (q > 0xFFFFFFFFull) throw UnsupportedError("field too large");
    q_ = static_cast<std::uint32_t>(q);
    build_tables();
}

std::vector<std::uint32_t> ExtField::coefficients(Elem x) const {
    std::vector<std::uint32_t> c(k_);
    for (std::uint32_t i = 0; i < k_; ++i) {
        c[i] = x % p_;
        x /= p_;
    }
    return c;
}

Elem ExtField::from_coefficients(std::span<const std::uint32_t> c) const {
    Elem x = 0;
    for (std::size_t i = 0; i < c.size() && i < k_; ++i) x += (c[i] % p_) * pow_p_[i];
    return x;
}

Elem ExtField::add(Elem a, Elem b) const noexcept {
    if (k_ == 1) return static_cast<Elem>((std::uint64_t{a} + b) % p_);
    Elem r = 0;
    for (std::uint32_t i = 0; i < k_; ++i) {
        r += ((a % p_ + b % p_) % p_) * pow_p_[i];
        a /= p_;
        b /= p_;
    }
    return r;
}

Elem ExtField::neg(Elem a) const noexcept {
    Elem r = 0;
    for (std::uint32_t i = 0; i < k_; ++i) {
        r += ((p_ - a % p_) % p_) * pow_p_[i];
        a /= p_;
    }
    return r;
}

Elem ExtField::sub(Elem a, Elem b) const noexcept { return add(a, neg(b)); }

Elem ExtField::mul_slow(Elem a, Elem b) const noexcept {
    if (k_ == 1) return static_cast<Elem>(std::uint64_t{a} * b % p_);
    const auto ca = coefficients(a), cb = coefficients(b);
    std::vector<std::uint64_t> prod(2 * k_ - 1, 0);
    for (std::uint32_t i = 0; i < k_; ++i)
        for (std::uint32_t j = 0; j < k_; ++j) prod[i + j] = (prod[i + j] + std::uint64_t{ca[i]} * cb[j]) % p_;
    for (std::uint32_t top = 2 * k_ - 2; top >= k_; --top) {
        const std::uint64_t lead = prod[top];
        if (lead == 0) continue;
        for (std::uint32_t i = 0; i <= k_; ++i) {
            auto& slot = prod[top - k_ + i];
            slot = (slot + (p_ - lead) * modulus_[i]) % p_;
        }
    }
    Elem r = 0;
    for (std::uint32_t i = 0; i < k_; ++i) r += static_cast<Elem>(prod[i]) * pow_p_[i];
    return r;
}

void ExtField::build_tables() {
    basis_tr_.assign(k_, 0);
    if (k_ == 1) {
        basis_tr_[0] = 1;
        return;
    }
    auto slow_pow = [&](Elem a, std::uint64_t e) {
        Elem r = 1, b = a;
        while (e) {
            if (e & 1) r = mul_slow(r, b);
            b = mul_slow(b, b);
            e >>= 1;
        }
        return r;
    };
    for (std::uint32_t i = 0; i < k_; ++i) {
        Elem x = pow_p_[i];  // T^i
        Elem acc = 0;
        for (std::uint32_t j = 0; j < k_; ++j) {
            acc = add(acc, x);
            x = slow_pow(x, p_);
        }
        basis_tr_[i] = acc;  // lands in F_p when the modulus is irreducible
    }
    if (q_ > kTableLimit) return;
    const std::uint32_t order = q_ - 1;
    const auto factors = distinct_prime_factors(order);
    Elem gen = 0;
    for (Elem g = 2; g < q_; ++g) {
        bool ok = std::all_of(factors.begin(), factors.end(),
                              [&](std::uint64_t l) { return slow_pow(g, order / l) != 1; });
        if (ok) {
            gen = g;
            break;
        }
    }
    if (gen == 0) return;  // reducible modulus; keep the slow path
    exp_.resize(2 * std::size_t{order});
    log_.assign(q_, 0);
    Elem x = 1;
    for (std::uint32_t i = 0; i < order; ++i) {
        exp_[i] = exp_[i + order] = x;
        log_[x] = i;
        x = mul_slow(x, gen);
    }
}

Elem ExtField::mul(Elem a, Elem b) const noexcept {
    if (a == 0 || b == 0) return 0;
    if (k_ == 1) return static_cast<Elem>(std::uint64_t{a} * b % p_);
    if (!exp_.empty()) return exp_[log_[a] + log_[b]];
    return mul_slow(a, b);
}

Elem ExtField::pow(Elem a, std::uint64_t e) const noexcept {
    if (e == 0) return 1;
    if (a == 0) return 0;
    if (k_ == 1) return static_cast<Elem>(pow_mod(a, e, p_));
    if (!exp_.empty()) return exp_[static_cast<std::uint64_t>(log_[a]) * (e % (q_ - 1)) % (q_ - 1)];
    Elem r = 1, b = a;
    while (e) {
        if (e & 1) r = mul_slow(r, b);
        b = mul_slow(b, b);
        e >>= 1;
    }
    return r;
}

Elem ExtField::inv(Elem a) const {
    if (a == 0) throw DomainError("inverse of 0 in F_" + std::to_string(q_));
    if (k_ == 1) return static_cast<Elem>(inv_mod(a, p_));
    if (!exp_.empty()) return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
    return pow(a, q_ - 2);
}

std::uint32_t ExtField::trace(Elem x) const noexcept {
    if (k_ == 1) return x;
    std::uint64_t acc = 0;
    for (std::uint32_t i = 0; i < k_; ++i) {
        acc += std::uint64_t{x % p_} * basis_tr_[i];
        x /= p_;
    }
    return static_cast<std::uint32_t>(acc % p_);
}

bool is_irreducible_mod_p(std::span<const std::uint32_t> monic, std::uint32_t p) {
    const std::size_t k = monic.size() - 1;
    if (k <= 1) return k == 1;
    // Divisibility by each monic polynomial of degree m <= k/2.
    for (std::size_t m = 1; m <= k / 2; ++m) {
        std::uint64_t count = 1;
        for (std::size_t i = 0; i < m; ++i) count *= p;
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            std::vector<std::uint64_t> divisor(m + 1);
            std::uint64_t t = idx;
            for (std::size_t i = 0; i < m; ++i) {
                divisor[i] = t % p;
                t /= p;
            }
            divisor[m] = 1;
            std::vector<std::uint64_t> rem(monic.begin(), monic.end());
            for (std::size_t top = k; top >= m; --top) {
                const std::uint64_t lead = rem[top] % p;
                if (lead != 0)
                    for (std::size_t i = 0; i <= m; ++i)
                        rem[top - m + i] = (rem[top - m + i] + (p - lead) * divisor[i]) % p;
                if (top == m) break;
            }
            bool zero = true;
            for (std::size_t i = 0; i < m; ++i) zero = zero && rem[i] % p == 0;
            if (zero) return false;
        }
    }
    return true;
}

ExtField build_ext_field(std::uint32_t p, std::uint32_t k) {
    if (!is_prime(p)) throw InputError(std::to_string(p) + " is not prime");
    if (k < 1 || k > ExtField::kMaxDegree)
        throw UnsupportedError("extension degree " + std::to_string(k) + " outside [1, 4]");
    if (k == 1) return ExtField(p, {0, 1});
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < k; ++i) count *= p;
    // Index order is lexicographic on (c_{k-1}, ..., c_0).
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        std::vector<std::uint32_t> modulus(k + 1);
        std::uint64_t t = idx;
        for (std::uint32_t i = 0; i < k; ++i) {
            modulus[i] = static_cast<std::uint32_t>(t % p);
            t /= p;
        }
        modulus[k] = 1;
        if (is_irreducible_mod_p(modulus, p)) return ExtField(p, std::move(modulus));
    }
    throw DegenerateError("no irreducible modulus found");
}

Complex additive_char(const PrimeField& field, Elem x) { return root_of_unity(x % field.p(), field.p()); }

Complex additive_char(const ExtField& field, Elem x) { return root_of_unity(field.trace(x), field.p()); }

TraceFunction mult_char(const PrimeField& field, std::uint32_t order, std::uint32_t index) {
    const std::uint32_t p = field.p();
    if (order == 0 || (p - 1) % order != 0)
        throw InputError("character order " + std::to_string(order) + " does not divide p-1 = " +
                         std::to_string(p - 1));
    std::vector<Complex> values(p, Complex{0.0, 0.0});
    for (Elem x = 1; x < p; ++x)
        values[x] = root_of_unity(static_cast<std::int64_t>(index % order) * field.dlog(x), order);
    return TraceFunction("chi[order=" + std::to_string(order) + ",index=" + std::to_string(index) + "]",
                         std::move(values), 1.0);
}

// ---------------------------------------------------------------------------

TraceFunction::TraceFunction(std::string label, std::vector<Complex> values, double sup_bound)
    : label_(std::move(label)), values_(std::move(values)), sup_bound_(sup_bound) {
    if (values_.empty()) throw InputError("trace function table is empty");
    if (max_abs() > sup_bound_ + 1e-9)
        throw InputError("trace function '" + label_ + "' exceeds its declared sup bound");
}

double TraceFunction::max_abs() const noexcept {
    double m = 0.0;
    for (const auto& v : values_) m = std::max(m, std::abs(v));
    return m;
}

TraceFunction TraceFunction::conjugate() const {
    std::vector<Complex> out(values_.size());
    std::transform(values_.begin(), values_.end(), out.begin(), [](Complex z) { return std::conj(z); });
    return TraceFunction("conj(" + label_ + ")", std::move(out), sup_bound_);
}

} // namespace xnt
