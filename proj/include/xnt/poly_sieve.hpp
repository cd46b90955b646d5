#ifndef XNT_POLY_SIEVE_HPP
#define XNT_POLY_SIEVE_HPP

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "xnt/field_core.hpp"
#include "xnt/poly_algebra.hpp"

namespace xnt {

/// Per-prime sieve state for h: the image h(F_p), the fiber sizes nu and the
/// F_p-rational critical values S_{h,p}.
struct SievePrimeData {
    std::uint32_t p = 0;
    unsigned degree = 0;
    std::vector<std::uint8_t> image;
    std::uint32_t image_size = 0;
    std::vector<Elem> exceptional;
    std::vector<std::uint32_t> nu;

    bool in_image(std::int64_t n) const noexcept { return image[reduce_mod(n, p)] != 0; }
    bool is_exceptional(std::int64_t n) const noexcept;
    std::uint32_t nu_at(std::int64_t n) const noexcept { return nu[reduce_mod(n, p)]; }
    /// p - (p-1)/d
    double image_bound() const noexcept;
    bool bound_tight() const noexcept;
};

/// Requires p > deg h.
SievePrimeData build_prime_data(const UniPoly& h, std::uint32_t p);

bool is_nonsurjective(const UniPoly& h, std::uint32_t p);
/// Primes p in [lo, hi] with p > deg h and h(F_p) != F_p.
std::vector<std::uint32_t> nonsurjective_primes(const UniPoly& h, std::uint32_t lo, std::uint32_t hi);

enum class ThresholdMode {
    Lemma,  // P / (2d)
    LogP,   // P / (2d log P)
};

struct SieveConfig {
    UniPoly h;
    std::vector<std::uint32_t> primes;
    ThresholdMode mode = ThresholdMode::Lemma;

    unsigned degree() const noexcept { return static_cast<unsigned>(h.degree()); }
    /// Cut-off on the number of primes at which n is exceptional.
    double threshold() const noexcept;
};

/// Checks deg h >= 2 and that the primes are distinct members of P_h.
SieveConfig make_sieve_config(UniPoly h, std::vector<std::uint32_t> primes,
                              ThresholdMode mode = ThresholdMode::Lemma);
std::vector<SievePrimeData> build_prime_data(const SieveConfig& config);

/// D_p(n) = 1_{h(F_p)}(n mod p) - |h(F_p)| / p
double detector(const SievePrimeData& data, std::int64_t n) noexcept;

/// max over x in F_p^x of |1_{d-th powers}(x) - (1/d) sum_{chi^d = 1} chi(x)|.
double power_decomposition_check(unsigned d, std::uint32_t p);

/// alpha + (nu(n) - 1)(d - nu(n))
double browning_weight(const SievePrimeData& data, std::int64_t n, double alpha) noexcept;

/// False proves n is not a value of h on Z.
bool membership_filter(std::span<const SievePrimeData> data, std::int64_t n) noexcept;

/// Number of primes in `data` at which n mod p is an exceptional value.
unsigned exceptional_count(std::span<const SievePrimeData> data, std::int64_t n) noexcept;

/// Smallest T with |h(t)| > max_abs for every |t| > T.
std::int64_t value_radius(const UniPoly& h, Int128 max_abs);

/// Exact test for n in h(Z), valid for |n| <= max_abs.
class IntegerImage {
public:
    IntegerImage(const UniPoly& h, Int128 max_abs);

    bool contains(Int128 n) const;
    std::int64_t radius() const noexcept { return radius_; }
    std::size_t size() const noexcept { return values_.size(); }

private:
    Int128 max_abs_;
    std::int64_t radius_;
    std::vector<Int128> values_;
};

/// Root search through the divisors of h(0) - n; independent of IntegerImage.
bool has_integer_root_direct(const UniPoly& h, Int128 n);

using Sequence = std::map<std::int64_t, double>;

struct SieveLedger {
    std::size_t prime_count = 0;
    unsigned degree = 0;
    double threshold = 0.0;
    std::size_t supported = 0;
    std::size_t in_image = 0;
    double total_weight = 0.0;
    double V_h = 0.0;
    /// sum_n a(n) |sum_p D_p(n)|^2, split into p = q and p != q parts.
    double sigma = 0.0;
    double diagonal = 0.0;
    double cross = 0.0;
    double lhs = 0.0;  // P^2 V_h
    double rhs = 0.0;  // (2d)^2 sigma
    bool support_ok = true;      // a(n) = 0 when n = 0 or |n| >= e^P
    bool exceptional_ok = true;  // a(n) = 0 when n is exceptional at >= threshold primes
    bool hypothesis_ok = true;   // sum_p D_p(n) >= P/(2d) on supported non-exceptional values
    bool inequality_holds = true;
};

/// Evaluates both sides of P^2 V_h <= (2d)^2 sigma with the exact detectors.
/// Throws AssertionFailure if the hypothesis holds but the inequality fails.
SieveLedger sieve_bound_eval(const SieveConfig& config, std::span<const SievePrimeData> data, const Sequence& a);

/// The power-sieve right-hand side for h = T^d with characters of order d:
/// first = P^{-1} sum a(n), cross = P^{-2} sum_{p != q} sum_{chi_p, chi_q != 1}
/// |sum_n a(n) chi_p(n) conj(chi_q(n))|.
struct PowerSieveTerms {
    double V = 0.0;
    double first_term = 0.0;
    double cross_term = 0.0;
    double rhs = 0.0;
    bool support_ok = true;
};

PowerSieveTerms power_sieve_terms(unsigned d, std::span<const std::uint32_t> primes, const Sequence& a);

} // namespace xnt

#endif
