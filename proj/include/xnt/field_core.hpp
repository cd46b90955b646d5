#ifndef XNT_FIELD_CORE_HPP
#define XNT_FIELD_CORE_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "xnt/trace_function.hpp"

namespace xnt {

/// Field elements are encoded as integers. In F_p this is the residue in
/// [0, p); in F_{p^k} it is sum c_i p^i for the coefficient vector (c_0..c_{k-1})
/// in the power basis of the modulus, so F_p sits inside as [0, p).
using Elem = std::uint32_t;

bool is_prime(std::uint64_t n) noexcept;
std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n);
std::vector<std::uint32_t> primes_in_range(std::uint32_t lo, std::uint32_t hi);

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) noexcept;
std::uint64_t inv_mod(std::uint64_t a, std::uint64_t mod);
std::uint32_t reduce_mod(std::int64_t value, std::uint32_t p) noexcept;

/// Smallest generator of F_p^x. Throws InputError if p is not prime.
std::uint32_t find_primitive_root(std::uint32_t p);

/// e^{2 pi i num/den}, exact at the quarter points.
Complex root_of_unity(std::int64_t num, std::int64_t den);

/// Arithmetic mod p with a full discrete-log table against the smallest
/// primitive root. Immutable after construction.
class PrimeField {
public:
    static constexpr std::uint32_t kMaxPrime = 1'000'003;

    explicit PrimeField(std::uint32_t p);

    std::uint32_t p() const noexcept { return p_; }
    std::uint32_t size() const noexcept { return p_; }
    std::uint32_t generator() const noexcept { return g_; }

    Elem reduce(std::int64_t v) const noexcept { return reduce_mod(v, p_); }
    Elem add(Elem a, Elem b) const noexcept { return static_cast<Elem>((std::uint64_t{a} + b) % p_); }
    Elem sub(Elem a, Elem b) const noexcept { return static_cast<Elem>((std::uint64_t{a} + p_ - b) % p_); }
    Elem neg(Elem a) const noexcept { return a == 0 ? 0 : p_ - a; }
    Elem mul(Elem a, Elem b) const noexcept { return static_cast<Elem>(std::uint64_t{a} * b % p_); }
    Elem inv(Elem a) const;
    Elem pow(Elem a, std::uint64_t e) const noexcept { return static_cast<Elem>(pow_mod(a, e, p_)); }

    /// k in [0, p-2] with g^k = u. Throws DomainError for u = 0.
    std::uint32_t dlog(Elem u) const;
    Elem exp(std::uint64_t k) const noexcept { return exp_[k % (p_ - 1 == 0 ? 1 : p_ - 1)]; }

private:
    std::uint32_t p_;
    std::uint32_t g_;
    std::vector<std::uint32_t> dlog_;
    std::vector<Elem> exp_;
};

/// F_{p^k} = F_p[T]/(modulus). For q up to kTableLimit multiplication goes
/// through exp/log tables against a primitive element; beyond that it falls
/// back to schoolbook reduction.
class ExtField {
public:
    static constexpr std::uint32_t kMaxDegree = 4;
    static constexpr std::uint32_t kTableLimit = 1u << 22;

    /// `modulus` is monic of degree k, low-to-high coefficients (length k+1).
    /// Irreducibility is the caller's responsibility; build_ext_field checks it.
    ExtField(std::uint32_t p, std::vector<std::uint32_t> modulus);

    std::uint32_t p() const noexcept { return p_; }
    std::uint32_t degree() const noexcept { return k_; }
    std::uint32_t size() const noexcept { return q_; }
    const std::vector<std::uint32_t>& modulus() const noexcept { return modulus_; }

    Elem from_int(std::int64_t v) const noexcept { return reduce_mod(v, p_); }
    bool in_base_field(Elem x) const noexcept { return x < p_; }
    std::vector<std::uint32_t> coefficients(Elem x) const;
    Elem from_coefficients(std::span<const std::uint32_t> c) const;

    Elem add(Elem a, Elem b) const noexcept;
    Elem sub(Elem a, Elem b) const noexcept;
    Elem neg(Elem a) const noexcept;
    Elem mul(Elem a, Elem b) const noexcept;
    Elem inv(Elem a) const;
    Elem pow(Elem a, std::uint64_t e) const noexcept;
    Elem frobenius(Elem a) const noexcept { return pow(a, p_); }

    /// Absolute trace Tr_{F_q/F_p}, returned as an element of [0, p).
    std::uint32_t trace(Elem x) const noexcept;

private:
    Elem mul_slow(Elem a, Elem b) const noexcept;
    void build_tables();

    std::uint32_t p_;
    std::uint32_t k_;
    std::uint32_t q_;
    std::vector<std::uint32_t> modulus_;
    std::vector<std::uint32_t> pow_p_;     // p^i
    std::vector<std::uint32_t> basis_tr_;  // Tr(T^i)
    std::vector<std::uint32_t> log_;
    std::vector<Elem> exp_;
};

/// Lexicographically smallest monic irreducible modulus of degree k over F_p,
/// found by exhaustive factor search. k in [1, 4].
ExtField build_ext_field(std::uint32_t p, std::uint32_t k);

/// True iff the monic polynomial (low-to-high, leading 1) has no factor of
/// degree <= deg/2 over F_p. Exhaustive; intended for deg <= 4.
bool is_irreducible_mod_p(std::span<const std::uint32_t> monic, std::uint32_t p);

Complex additive_char(const PrimeField& field, Elem x);
Complex additive_char(const ExtField& field, Elem x);

/// chi(x) = e(j dlog(x) / r) on units, chi(0) = 0. Requires r | p-1.
TraceFunction mult_char(const PrimeField& field, std::uint32_t order, std::uint32_t index);

} // namespace xnt

#endif
