#ifndef XNT_VARIETY_PROBE_HPP
#define XNT_VARIETY_PROBE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xnt/field_core.hpp"
#include "xnt/poly_algebra.hpp"

namespace xnt {

/// Default cap on polynomial evaluations per scan.
inline constexpr std::uint64_t kDefaultScanBudget = 100'000'000;

struct FiberCountRecord {
    Elem a = 0;
    std::optional<Elem> b;
    std::uint64_t count = 0;
    /// count - q^{n-1} for a single fiber, count - q^{n-2} for a pair.
    double deviation = 0.0;
};

/// A point given by coordinates in F_{p^field_degree}, first nonzero entry 1.
struct ProjectivePoint {
    unsigned field_degree = 1;
    std::vector<Elem> coords;
};

std::string to_string(const ProjectivePoint& point);

FiberCountRecord count_affine_fiber(const MultiPoly& F, Elem a, const ExtField& field,
                                    std::uint64_t budget = kDefaultScanBudget);
FiberCountRecord count_pair_fiber(const MultiPoly& F, const MultiPoly& G, Elem a, Elem b, const ExtField& field,
                                  std::uint64_t budget = kDefaultScanBudget);

/// N(a, F) for every a in F_q in one pass.
std::vector<std::uint64_t> fiber_counts(const MultiPoly& F, const ExtField& field,
                                        std::uint64_t budget = kDefaultScanBudget);
/// N(a, b, F, G) stored at index a * q + b.
std::vector<std::uint64_t> pair_fiber_counts(const MultiPoly& F, const MultiPoly& G, const ExtField& field,
                                             std::uint64_t budget = kDefaultScanBudget);

/// Result of searching P^{n-1}(F_{p^j}), j <= k_max, for a common zero of F
/// and its partials. `smooth` only means no witness was found up to k_max.
struct SmoothnessResult {
    bool smooth = true;
    unsigned k_max = 0;
    std::optional<ProjectivePoint> witness;
    bool char_divides_degree = false;
    std::uint64_t points_scanned = 0;
};

SmoothnessResult smoothness_scan(const MultiPoly& F, std::uint32_t p, unsigned k_max,
                                 std::uint64_t budget = kDefaultScanBudget);

enum class UKind { ZeroType, Good, Bad };
const char* to_string(UKind kind) noexcept;

struct UClass {
    UKind kind = UKind::Good;
    std::optional<ProjectivePoint> witness;
    unsigned k_max = 0;
};

/// Tangency of the hyperplane <x, u> = 0 to V(F) mod p. Only points on the
/// hyperplane are scanned: a witness x has F(x) = 0 and grad F(x) parallel to u.
UClass classify_u(const MultiPoly& F, std::span<const std::int64_t> u, std::uint32_t p, unsigned k_max,
                  std::uint64_t budget = kDefaultScanBudget);

/// Exact verdict for F = sum c_i X_i^d over the algebraic closure of F_p.
/// d = 2: bad iff sum u_i^2 / c_i = 0. d > 2: bad iff some choice of roots
/// x_i^{d-1} = u_i / (d c_i) satisfies sum u_i x_i = 0, decided in the
/// smallest F_{p^k} (k <= 4) holding all those roots.
UKind diagonal_dual_oracle(std::span<const std::int64_t> coeffs, unsigned d, std::span<const std::int64_t> u,
                           std::uint32_t p);
UKind diagonal_dual_oracle(const MultiPoly& F, std::span<const std::int64_t> u, std::uint32_t p);

struct SingularFiber {
    Elem lambda = 0;
    unsigned field_degree = 1;
    std::vector<Elem> witness;
};

/// lambda in F_p for which V(f - lambda) (or V(g) n V(f - lambda) when g is
/// given) has a singular point over F_{p^j}, j <= k_max. With g the 2x2
/// minors of the Jacobian of (f, g) are built once; they do not involve lambda.
std::vector<SingularFiber> singular_fiber_scan(const MultiPoly& f, const MultiPoly* g, std::uint32_t p,
                                               unsigned k_max, std::uint64_t budget = kDefaultScanBudget);

struct DeviationProfile {
    std::vector<std::uint32_t> primes;
    std::vector<std::uint64_t> counts;
    std::vector<double> normalized;  // |count - p^{n-1}| / p^{(n-1)/2}
    double fitted_constant = 0.0;    // max of normalized
};

/// Affine fiber F = a over F_p for each prime, normalized by p^{(n-1)/2}.
DeviationProfile deviation_profile(const MultiPoly& F, std::int64_t a, std::span<const std::uint32_t> primes,
                                   std::uint64_t budget = kDefaultScanBudget);

} // namespace xnt

#endif
