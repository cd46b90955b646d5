#ifndef XNT_BOX_COUNT_HPP
#define XNT_BOX_COUNT_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xnt/poly_algebra.hpp"
#include "xnt/poly_sieve.hpp"
#include "xnt/trace_function.hpp"
#include "xnt/variety_probe.hpp"

namespace xnt {

inline constexpr std::uint64_t kDefaultBoxBudget = 50'000'000;

/// Count x in Z^{n+1}, max |x_i| <= B, with f(t) = F(x) solvable in t in Z.
/// F has n+1 variables.
struct BoxProblem {
    UniPoly f;
    MultiPoly F;
    std::int64_t B = 0;

    unsigned d() const noexcept { return static_cast<unsigned>(f.degree()); }
    unsigned e() const noexcept { return F.degree(); }
    std::size_t n_vars() const noexcept { return F.n_vars(); }
    std::size_t n() const noexcept { return F.n_vars() - 1; }
    std::int64_t height_f() const noexcept { return f.height(); }
    std::int64_t height_F() const noexcept { return F.height(); }
    std::uint64_t box_points() const;
    /// sum |c| B^deg, an upper bound for |F| on the box.
    Int128 value_bound() const;
};

/// Checks d, e >= 2, F homogeneous over Z, B >= 0.
BoxProblem make_box_problem(UniPoly f, MultiPoly F, std::int64_t B);

/// Integer evaluation of F on a coordinate range [lo, hi] through cached powers.
class IntEvaluator {
public:
    IntEvaluator(const MultiPoly& F, std::int64_t lo, std::int64_t hi);
    Int128 operator()(std::span<const std::int64_t> x) const;

private:
    std::int64_t lo_;
    unsigned deg_;
    std::size_t n_vars_;
    std::vector<Int128> coeffs_;
    std::vector<unsigned> exps_;
    std::vector<Int128> powers_;  // (x - lo) * (deg + 1) + k -> x^k
};

struct CountResult {
    std::uint64_t count = 0;
    std::uint64_t points = 0;
    std::uint64_t rejected_by_sieve = 0;
    std::uint64_t verified_exactly = 0;
    double rejection_ratio = 0.0;
};

std::uint64_t brute_count(const BoxProblem& problem, std::uint64_t budget = kDefaultBoxBudget, unsigned threads = 1);

/// Membership filter first, exact table lookup on survivors.
CountResult sieve_filtered_count(const BoxProblem& problem, const SieveConfig& config,
                                 std::uint64_t budget = kDefaultBoxBudget, unsigned threads = 1);

/// Random box points where the f-value table and direct root search disagree.
std::uint64_t table_spot_check(const BoxProblem& problem, std::size_t samples, std::uint64_t seed);

struct PrimeRejection {
    std::uint32_t p = 0;
    std::string reason;
};

struct PrimeSelection {
    double Q = 0.0;
    std::uint32_t lo = 0;
    std::uint32_t hi = 0;
    std::vector<std::uint32_t> primes;
    std::vector<PrimeRejection> rejected;
    /// Good reduction came from a bounded smoothness scan, not an exact test.
    bool semi_decided = false;
    unsigned k_max = 0;
};

/// Primes in [Q, 2Q], Q = B^{(n+1)/(n+2)} (log B)^{1/(n+2)}, with f(F_p) != F_p
/// and V(F) smooth mod p.
PrimeSelection select_primes(const BoxProblem& problem);

struct ExceptionalSet {
    std::int64_t range = 0;
    double threshold = 0.0;
    std::vector<std::int64_t> members;
};

/// k in [-M, M], M = value_bound(), exceptional at >= threshold primes.
ExceptionalSet exceptional_set(const BoxProblem& problem, std::span<const std::uint32_t> primes,
                               ThresholdMode mode = ThresholdMode::Lemma);

struct DiscriminantProfile {
    Int128 disc = 0;
    bool zero = false;
    std::vector<std::uint64_t> factors;
    unsigned omega() const noexcept { return static_cast<unsigned>(factors.size()); }
};

DiscriminantProfile discriminant_profile(const UniPoly& f, std::int64_t k);

/// g(u, t) = sum_{a in F_p^{n+1}} t(F(a)) e(<a, u>/p).
Complex complete_sum_g(const MultiPoly& F, const TraceFunction& t, std::span<const std::int64_t> u, std::uint32_t p,
                       bool group_fibers = true, std::uint64_t budget = kDefaultScanBudget);

struct CrtCheck {
    Complex lhs;
    Complex rhs;
    double error = 0.0;
    double relative = 0.0;
};

/// Direct sum over (Z/pqZ)^{n+1} against g(q'u, t_p) g(p'u, conj t_q).
CrtCheck crt_factor_check(const MultiPoly& F, std::span<const std::int64_t> u, std::uint32_t p, std::uint32_t q,
                          const TraceFunction& t_p, const TraceFunction& t_q,
                          std::uint64_t budget = kDefaultScanBudget);

/// W(x) = prod w(x_i / B), w(t) = exp(-1/(1-t^2)) on (-1, 1).
class SmoothWeight {
public:
    SmoothWeight(double B, std::size_t dims, double tolerance = 1e-10);

    static double bump(double t) noexcept;
    /// i-th derivative of the bump, i <= 4.
    static double bump_derivative(double t, unsigned i) noexcept;

    double B() const noexcept { return B_; }
    std::size_t dims() const noexcept { return dims_; }
    double tolerance() const noexcept { return tol_; }
    double value(std::span<const double> x) const;
    /// w-hat(eta) = int w(t) e(-t eta) dt, real since w is even.
    double bump_hat(double eta) const;
    /// W-hat(u) = prod B w-hat(B u_i).
    double hat(std::span<const double> u) const;
    double bump_l1() const noexcept { return l1_; }
    /// L1 norm of the 4th derivative, padded upward by the quadrature error.
    double bump_d4_l1() const noexcept { return d4_l1_; }

private:
    double B_;
    std::size_t dims_;
    double tol_;
    double l1_ = 0.0;
    double d4_l1_ = 0.0;
};

struct PoissonResult {
    double B = 0.0;
    std::uint32_t p = 0;
    std::uint32_t q = 0;
    int u_cutoff = 0;
    Complex direct;
    Complex poisson;
    double error = 0.0;
    double tail_bound = 0.0;
    bool within = false;
};

/// sum_x W(x) t_p(F(x)) conj t_q(F(x)) against the truncated dual sum. A
/// negative cutoff picks the smallest one whose tail bound is below 1e-4 W-hat(0).
PoissonResult poisson_compare(const MultiPoly& F, const SmoothWeight& W, std::uint32_t p, std::uint32_t q,
                              const TraceFunction& t_p, const TraceFunction& t_q, int u_cutoff = -1);

/// Tail of the dual sum outside |u_i| <= U with decay exponent 4.
double poisson_tail_bound(const SmoothWeight& W, std::uint32_t p, std::uint32_t q, int U, double sup_p, double sup_q);

struct RatioRow {
    std::int64_t B = 0;
    std::uint64_t N = 0;
    double theorem_ratio = 0.0;  // N / (B^{n+1/(n+2)} (log B)^{(n+1)/(n+2)})
    double serre_ratio = 0.0;    // N / B^{n+1/2}
    double seconds = 0.0;
};

struct RatioScan {
    std::vector<RatioRow> rows;
    double spread = 1.0;  // max/min theorem ratio
    bool bounded = true;  // spread <= 10
    bool serre_nonincreasing = true;
};

RatioScan bound_ratio_scan(const UniPoly& f, const MultiPoly& F, std::span<const std::int64_t> Bs,
                           std::uint64_t budget = kDefaultBoxBudget, unsigned threads = 1);

struct ClassificationTally {
    std::uint32_t p = 0;
    std::string method;  // "diagonal-oracle" or "scan"
    unsigned k_max = 0;
    std::uint64_t zero = 0;
    std::uint64_t good = 0;
    std::uint64_t bad = 0;
};

/// Every u mod p when F is diagonal; otherwise `samples` seeded random u
/// classified by classify_u up to k_max.
ClassificationTally classification_tally(const MultiPoly& F, std::uint32_t p, std::size_t samples, std::uint64_t seed,
                                         unsigned k_max);

} // namespace xnt

#endif
