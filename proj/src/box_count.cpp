#include "xnt/box_count.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "xnt/error.hpp"

namespace xnt {

namespace {

constexpr long double kInt128Safe = 1e36L;

std::uint64_t checked_power(std::uint64_t base, std::size_t exp, std::uint64_t cap) {
    std::uint64_t out = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (out > cap / base) return cap + 1;
        out *= base;
    }
    return out;
}

void check_budget(std::uint64_t points, std::uint64_t budget, const char* what) {
    if (points > budget)
        throw BudgetError(std::string(what) + " needs " + std::to_string(points) + " points, budget is " +
                          std::to_string(budget));
}

// Visits every x in [-B, B]^m, splitting on x[0] across threads. Each thread
// owns one accumulator; they are merged with +=.
template <class Acc, class Visit>
Acc box_reduce(std::size_t m, std::int64_t B, unsigned threads, Visit visit) {
    threads = std::max(1u, threads);
    std::atomic<std::int64_t> next{-B};
    std::vector<Acc> partial(threads);
    auto worker = [&](unsigned id) {
        std::vector<std::int64_t> x(m, -B);
        for (;;) {
            const std::int64_t lead = next.fetch_add(1);
            if (lead > B) return;
            x[0] = lead;
            std::fill(x.begin() + 1, x.end(), -B);
            for (;;) {
                visit(std::span<const std::int64_t>(x), partial[id]);
                std::size_t i = 1;
                while (i < m && x[i] == B) x[i++] = -B;
                if (i >= m) break;
                ++x[i];
            }
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned id = 0; id < threads; ++id) pool.emplace_back(worker, id);
        for (auto& t : pool) t.join();
    }
    Acc total{};
    for (const auto& a : partial) total += a;
    return total;
}

std::int64_t to_int64(Int128 v, const char* what) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw OverflowError(std::string(what) + " does not fit 64 bits");
    return static_cast<std::int64_t>(v);
}

struct SieveAcc {
    std::uint64_t count = 0, points = 0, rejected = 0, verified = 0;
    SieveAcc& operator+=(const SieveAcc& o) {
        count += o.count;
        points += o.points;
        rejected += o.rejected;
        verified += o.verified;
        return *this;
    }
};

// Index of (c * u mod p) in a base-p table, first coordinate most significant.
std::size_t scaled_index(std::span<const std::int64_t> u, std::uint64_t c, std::uint32_t p) {
    std::size_t idx = 0;
    for (auto v : u) idx = idx * p + static_cast<std::size_t>(reduce_mod(v, p) * c % p);
    return idx;
}

std::vector<Complex> unit_roots(std::uint64_t m) {
    std::vector<Complex> out(m);
    for (std::uint64_t r = 0; r < m; ++r) out[r] = root_of_unity(static_cast<std::int64_t>(r), static_cast<std::int64_t>(m));
    return out;
}

void check_trace(const TraceFunction& t, std::uint32_t p, const char* name) {
    if (t.q() != p)
        throw InputError(std::string(name) + " is defined on F_" + std::to_string(t.q()) + ", expected F_" +
                         std::to_string(p));
}

// g(v) for every v in F_p^k, base-p indexed.
std::vector<Complex> all_complete_sums(const MultiPoly& F, const TraceFunction& t, std::uint32_t p) {
    const std::size_t k = F.n_vars();
    const auto field = build_ext_field(p, 1);
    const FieldEvaluator eval(F, field);
    std::size_t total = 1;
    for (std::size_t i = 0; i < k; ++i) total *= p;
    std::vector<Complex> tf(total);
    std::vector<std::vector<Elem>> points(total, std::vector<Elem>(k));
    std::vector<Elem> a(k, 0);
    for (std::size_t idx = 0; idx < total; ++idx) {
        points[idx] = a;
        tf[idx] = t(eval(a));
        std::size_t i = k;
        while (i > 0 && ++a[i - 1] == p) a[--i] = 0;
    }
    const auto roots = unit_roots(p);
    std::vector<Complex> g(total);
    for (std::size_t v = 0; v < total; ++v) {
        const auto& vv = points[v];
        Complex acc = 0.0;
        for (std::size_t idx = 0; idx < total; ++idx) {
            if (tf[idx] == Complex(0.0, 0.0)) continue;
            std::uint64_t phase = 0;
            for (std::size_t i = 0; i < k; ++i) phase += std::uint64_t{points[idx][i]} * vv[i];
            acc += tf[idx] * roots[phase % p];
        }
        g[v] = acc;
    }
    return g;
}

} // namespace

std::uint64_t BoxProblem::box_points() const {
    return checked_power(static_cast<std::uint64_t>(2 * B + 1), n_vars(), std::numeric_limits<std::uint64_t>::max() / 2);
}

Int128 BoxProblem::value_bound() const {
    long double approx = 0.0L;
    Int128 total = 0;
    for (const auto& [exps, c] : F.terms()) {
        unsigned deg = 0;
        for (auto v : exps) deg += v;
        approx += std::abs(static_cast<long double>(c)) * std::pow(static_cast<long double>(B), deg);
        if (approx > kInt128Safe) throw OverflowError("box values exceed 128-bit range");
        Int128 term = c < 0 ? -Int128{c} : Int128{c};
        for (unsigned i = 0; i < deg; ++i) term *= B;
        total += term;
    }
    return total;
}

BoxProblem make_box_problem(UniPoly f, MultiPoly F, std::int64_t B) {
    if (f.modulus() != 0 || F.modulus() != 0) throw InputError("box problems use integer coefficients");
    if (f.degree() < 2) throw InputError("f must have degree >= 2");
    if (F.is_zero() || F.degree() < 2) throw InputError("F must have degree >= 2");
    if (!F.is_homogeneous()) throw InputError("F must be homogeneous");
    if (B < 0) throw InputError("box radius must be nonnegative");
    BoxProblem problem{std::move(f), std::move(F), B};
    (void)problem.value_bound();
    return problem;
}

IntEvaluator::IntEvaluator(const MultiPoly& F, std::int64_t lo, std::int64_t hi)
    : lo_(lo), deg_(F.degree()), n_vars_(F.n_vars()) {
    if (F.modulus() != 0) throw InputError("integer evaluation needs integer coefficients");
    if (hi < lo) throw InputError("empty evaluation range");
    const long double R = std::max(std::abs(static_cast<long double>(lo)), std::abs(static_cast<long double>(hi)));
    long double bound = 0.0L;
    for (const auto& [exps, c] : F.terms()) {
        unsigned deg = 0;
        for (auto v : exps) deg += v;
        bound += std::abs(static_cast<long double>(c)) * std::pow(R, deg);
        coeffs_.push_back(c);
        exps_.insert(exps_.end(), exps.begin(), exps.end());
    }
    if (bound > kInt128Safe) throw OverflowError("polynomial values exceed 128-bit range on the box");
    const auto width = static_cast<std::size_t>(hi - lo + 1);
    powers_.resize(width * (deg_ + 1));
    for (std::size_t j = 0; j < width; ++j) {
        Int128 acc = 1;
        for (unsigned k = 0; k <= deg_; ++k) {
            powers_[j * (deg_ + 1) + k] = acc;
            acc *= static_cast<Int128>(lo + static_cast<std::int64_t>(j));
        }
    }
}

Int128 IntEvaluator::operator()(std::span<const std::int64_t> x) const {
    Int128 total = 0;
    const unsigned stride = deg_ + 1;
    for (std::size_t t = 0; t < coeffs_.size(); ++t) {
        Int128 term = coeffs_[t];
        const unsigned* e = &exps_[t * n_vars_];
        for (std::size_t i = 0; i < n_vars_; ++i)
            if (e[i] != 0) term *= powers_[static_cast<std::size_t>(x[i] - lo_) * stride + e[i]];
        total += term;
    }
    return total;
}

std::uint64_t brute_count(const BoxProblem& problem, std::uint64_t budget, unsigned threads) {
    check_budget(problem.box_points(), budget, "box enumeration");
    const IntegerImage image(problem.f, problem.value_bound());
    const IntEvaluator eval(problem.F, -problem.B, problem.B);
    return box_reduce<std::uint64_t>(problem.n_vars(), problem.B, threads,
                                     [&](std::span<const std::int64_t> x, std::uint64_t& acc) {
                                         if (image.contains(eval(x))) ++acc;
                                     });
}

CountResult sieve_filtered_count(const BoxProblem& problem, const SieveConfig& config, std::uint64_t budget,
                                 unsigned threads) {
    if (!(config.h == problem.f)) throw InputError("sieve configuration is for a different f");
    check_budget(problem.box_points(), budget, "box enumeration");
    to_int64(problem.value_bound(), "box value bound");
    const IntegerImage image(problem.f, problem.value_bound());
    const IntEvaluator eval(problem.F, -problem.B, problem.B);
    const auto data = build_prime_data(config);
    const auto acc = box_reduce<SieveAcc>(problem.n_vars(), problem.B, threads,
                                          [&](std::span<const std::int64_t> x, SieveAcc& a) {
                                              const Int128 v = eval(x);
                                              ++a.points;
                                              if (!membership_filter(data, static_cast<std::int64_t>(v))) {
                                                  ++a.rejected;
                                                  return;
                                              }
                                              ++a.verified;
                                              if (image.contains(v)) ++a.count;
                                          });
    CountResult out;
    out.count = acc.count;
    out.points = acc.points;
    out.rejected_by_sieve = acc.rejected;
    out.verified_exactly = acc.verified;
    out.rejection_ratio = acc.points ? static_cast<double>(acc.rejected) / static_cast<double>(acc.points) : 0.0;
    return out;
}

std::uint64_t table_spot_check(const BoxProblem& problem, std::size_t samples, std::uint64_t seed) {
    const IntegerImage image(problem.f, problem.value_bound());
    const IntEvaluator eval(problem.F, -problem.B, problem.B);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> coord(-problem.B, problem.B);
    std::vector<std::int64_t> x(problem.n_vars());
    std::uint64_t mismatches = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        for (auto& c : x) c = coord(rng);
        const Int128 v = eval(x);
        if (image.contains(v) != has_integer_root_direct(problem.f, v)) ++mismatches;
    }
    return mismatches;
}

PrimeSelection select_primes(const BoxProblem& problem) {
    if (problem.B < 3) throw InputError("prime window needs B >= 3");
    const double n = static_cast<double>(problem.n());
    const double B = static_cast<double>(problem.B);
    PrimeSelection sel;
    sel.Q = std::pow(B, (n + 1.0) / (n + 2.0)) * std::pow(std::log(B), 1.0 / (n + 2.0));
    sel.lo = static_cast<std::uint32_t>(std::ceil(sel.Q));
    sel.hi = static_cast<std::uint32_t>(std::floor(2.0 * sel.Q));
    const auto diag = problem.F.diagonal_coefficients();
    for (auto p : primes_in_range(sel.lo, sel.hi)) {
        if (p <= problem.d() || reduce_mod(problem.f.lead(), p) == 0) {
            sel.rejected.push_back({p, "p <= deg f or p divides lc(f)"});
            continue;
        }
        if (!is_nonsurjective(problem.f, p)) {
            sel.rejected.push_back({p, "f is surjective mod p"});
            continue;
        }
        if (diag) {
            const bool bad = problem.e() % p == 0 ||
                             std::any_of(diag->begin(), diag->end(), [p](std::int64_t c) { return reduce_mod(c, p) == 0; });
            if (bad) {
                sel.rejected.push_back({p, "bad reduction: p divides e or a diagonal coefficient"});
                continue;
            }
        } else {
            sel.semi_decided = true;
            sel.k_max = 2;
            const auto scan = smoothness_scan(problem.F, p, 2);
            if (!scan.smooth) {
                sel.rejected.push_back({p, "bad reduction: singular point " + to_string(*scan.witness)});
                continue;
            }
        }
        sel.primes.push_back(p);
    }
    if (sel.primes.empty())
        throw InputError("no admissible prime in the window [" + std::to_string(sel.lo) + ", " +
                         std::to_string(sel.hi) + "]; increase B or pass an explicit prime list");
    return sel;
}

ExceptionalSet exceptional_set(const BoxProblem& problem, std::span<const std::uint32_t> primes, ThresholdMode mode) {
    if (primes.empty()) throw InputError("exceptional set needs at least one prime");
    const std::int64_t M = to_int64(problem.value_bound(), "box value bound");
    if (M > 100'000'000) throw BudgetError("value range too large for the exceptional scan");
    SieveConfig config{problem.f, {primes.begin(), primes.end()}, mode};
    ExceptionalSet out;
    out.range = M;
    out.threshold = config.threshold();
    std::vector<std::uint32_t> hits(static_cast<std::size_t>(2 * M + 1), 0);
    for (auto p : primes) {
        const auto data = build_prime_data(problem.f, p);
        for (Elem r : data.exceptional) {
            std::int64_t k = -M + static_cast<std::int64_t>((r + p - reduce_mod(-M, p)) % p);
            for (; k <= M; k += p) ++hits[static_cast<std::size_t>(k + M)];
        }
    }
    for (std::int64_t k = -M; k <= M; ++k)
        if (hits[static_cast<std::size_t>(k + M)] >= out.threshold) out.members.push_back(k);
    return out;
}

DiscriminantProfile discriminant_profile(const UniPoly& f, std::int64_t k) {
    DiscriminantProfile out;
    out.disc = discriminant_uni(f.minus_constant(k));
    out.zero = out.disc == 0;
    if (out.zero) return out;
    const Int128 mag = out.disc < 0 ? -out.disc : out.disc;
    if (mag > Int128{10'000'000'000'000'000LL}) throw BudgetError("discriminant too large for trial division");
    out.factors = distinct_prime_factors(static_cast<std::uint64_t>(mag));
    return out;
}

Complex complete_sum_g(const MultiPoly& F, const TraceFunction& t, std::span<const std::int64_t> u, std::uint32_t p,
                       bool group_fibers, std::uint64_t budget) {
    if (!is_prime(p)) throw InputError(std::to_string(p) + " is not prime");
    check_trace(t, p, "trace function");
    const std::size_t k = F.n_vars();
    if (u.size() != k) throw InputError("frequency vector has the wrong length");
    const std::uint64_t points = checked_power(p, k, budget);
    check_budget(points, budget, "complete sum");
    const auto field = build_ext_field(p, 1);
    const bool zero = std::all_of(u.begin(), u.end(), [p](std::int64_t v) { return reduce_mod(v, p) == 0; });
    if (zero && group_fibers) {
        const auto counts = fiber_counts(F, field, budget);
        Complex acc = 0.0;
        for (Elem a = 0; a < p; ++a) acc += static_cast<double>(counts[a]) * t(a);
        return acc;
    }
    std::vector<Elem> ur(k);
    for (std::size_t i = 0; i < k; ++i) ur[i] = reduce_mod(u[i], p);
    const FieldEvaluator eval(F, field);
    const auto roots = unit_roots(p);
    std::vector<Elem> a(k, 0);
    Complex acc = 0.0;
    for (std::uint64_t s = 0; s < points; ++s) {
        std::uint64_t phase = 0;
        for (std::size_t i = 0; i < k; ++i) phase += std::uint64_t{a[i]} * ur[i];
        acc += t(eval(a)) * roots[phase % p];
        std::size_t i = 0;
        while (i < k && ++a[i] == p) a[i++] = 0;
    }
    return acc;
}

CrtCheck crt_factor_check(const MultiPoly& F, std::span<const std::int64_t> u, std::uint32_t p, std::uint32_t q,
                          const TraceFunction& t_p, const TraceFunction& t_q, std::uint64_t budget) {
    if (p == q) throw InputError("CRT check needs distinct primes");
    if (!is_prime(p) || !is_prime(q)) throw InputError("CRT check needs primes");
    check_trace(t_p, p, "t_p");
    check_trace(t_q, q, "t_q");
    const std::size_t k = F.n_vars();
    if (u.size() != k) throw InputError("frequency vector has the wrong length");
    const std::uint64_t m = std::uint64_t{p} * q;
    const std::uint64_t points = checked_power(m, k, budget);
    check_budget(points, budget, "CRT direct sum");

    const IntEvaluator eval(F, 0, static_cast<std::int64_t>(m) - 1);
    const auto roots = unit_roots(m);
    std::vector<std::uint64_t> um(k);
    for (std::size_t i = 0; i < k; ++i) um[i] = static_cast<std::uint64_t>(((u[i] % static_cast<std::int64_t>(m)) + m) % m);
    std::vector<std::int64_t> a(k, 0);
    CrtCheck out;
    Complex lhs = 0.0;
    for (std::uint64_t s = 0; s < points; ++s) {
        const Int128 v = eval(a);
        const auto rp = static_cast<Elem>(((v % p) + p) % p);
        const auto rq = static_cast<Elem>(((v % q) + q) % q);
        std::uint64_t phase = 0;
        for (std::size_t i = 0; i < k; ++i) phase += static_cast<std::uint64_t>(a[i]) * um[i] % m;
        lhs += t_p(rp) * std::conj(t_q(rq)) * roots[phase % m];
        std::size_t i = 0;
        while (i < k && ++a[i] == static_cast<std::int64_t>(m)) a[i++] = 0;
    }
    const std::uint64_t qbar = inv_mod(q % p, p);
    const std::uint64_t pbar = inv_mod(p % q, q);
    std::vector<std::int64_t> up(k), uq(k);
    for (std::size_t i = 0; i < k; ++i) {
        up[i] = static_cast<std::int64_t>(reduce_mod(u[i], p) * qbar % p);
        uq[i] = static_cast<std::int64_t>(reduce_mod(u[i], q) * pbar % q);
    }
    out.lhs = lhs;
    out.rhs = complete_sum_g(F, t_p, up, p, true, budget) * complete_sum_g(F, t_q.conjugate(), uq, q, true, budget);
    out.error = std::abs(out.lhs - out.rhs);
    out.relative = out.error / std::max({std::abs(out.lhs), std::abs(out.rhs), 1.0});
    return out;
}

SmoothWeight::SmoothWeight(double B, std::size_t dims, double tolerance) : B_(B), dims_(dims), tol_(tolerance) {
    if (!(B > 0.0)) throw InputError("weight radius must be positive");
    if (dims == 0) throw InputError("weight needs at least one dimension");
    if (!(tolerance > 0.0)) throw InputError("quadrature tolerance must be positive");
    using boost::math::quadrature::gauss_kronrod;
    double err = 0.0;
    l1_ = gauss_kronrod<double, 61>::integrate([](double t) { return bump(t); }, -1.0, 1.0, 15, 1e-12, &err);
    if (err > tol_) throw DegenerateError("quadrature for the bump norm did not converge");
    auto d4 = [](double t) { return std::abs(bump_derivative(t, 4)); };
    double d4_err = 0.0;
    const double left = gauss_kronrod<double, 61>::integrate(d4, -1.0, 0.0, 15, 1e-10, &d4_err);
    double right_err = 0.0;
    const double right = gauss_kronrod<double, 61>::integrate(d4, 0.0, 1.0, 15, 1e-10, &right_err);
    d4_l1_ = (left + right + d4_err + right_err) * (1.0 + 1e-9);
}

double SmoothWeight::bump(double t) noexcept {
    if (t <= -1.0 || t >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - t * t));
}

double SmoothWeight::bump_derivative(double t, unsigned i) noexcept {
    const double w = bump(t);
    if (w == 0.0) return 0.0;
    // phi = -1/(1 - t^2); phi^(k) = -(k!/2) [(1-t)^{-(k+1)} + (-1)^k (1+t)^{-(k+1)}].
    double phi[5];
    double fact = 1.0;
    for (unsigned k = 1; k <= 4; ++k) {
        fact *= k;
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        phi[k] = -0.5 * fact * (std::pow(1.0 - t, -static_cast<double>(k + 1)) + sign * std::pow(1.0 + t, -static_cast<double>(k + 1)));
    }
    const double p1 = phi[1], p2 = phi[2], p3 = phi[3], p4 = phi[4];
    switch (i) {
    case 0: return w;
    case 1: return p1 * w;
    case 2: return (p2 + p1 * p1) * w;
    case 3: return (p3 + 3 * p1 * p2 + p1 * p1 * p1) * w;
    case 4: return (p4 + 4 * p1 * p3 + 3 * p2 * p2 + 6 * p1 * p1 * p2 + p1 * p1 * p1 * p1) * w;
    default: return 0.0;
    }
}

double SmoothWeight::value(std::span<const double> x) const {
    if (x.size() != dims_) throw InputError("point has the wrong dimension");
    double out = 1.0;
    for (double v : x) out *= bump(v / B_);
    return out;
}

double SmoothWeight::bump_hat(double eta) const {
    using boost::math::quadrature::gauss_kronrod;
    const double w = 2.0 * std::numbers::pi * eta;
    double err = 0.0;
    const double half = gauss_kronrod<double, 61>::integrate(
        [w](double t) { return bump(t) * std::cos(w * t); }, 0.0, 1.0, 15, 1e-12, &err);
    if (2.0 * err > tol_) throw DegenerateError("quadrature for the bump transform did not converge");
    return 2.0 * half;
}

double SmoothWeight::hat(std::span<const double> u) const {
    if (u.size() != dims_) throw InputError("frequency has the wrong dimension");
    double out = 1.0;
    for (double v : u) out *= B_ * bump_hat(B_ * v);
    return out;
}

namespace {

// B |w-hat(B m / pq)| for m >= 1 is at most B min(|w|_1, |w''''|_1 (2 pi B m / pq)^{-4}).
double one_side_tail(const SmoothWeight& W, double pq, int U) {
    const double c = W.B() * W.bump_d4_l1() * std::pow(pq / (2.0 * std::numbers::pi * W.B()), 4);
    const double cap = W.B() * W.bump_l1();
    const int stop = U + 100000;
    double sum = 0.0;
    for (int m = U + 1; m <= stop; ++m) sum += std::min(cap, c / std::pow(static_cast<double>(m), 4));
    return sum + c / (3.0 * std::pow(static_cast<double>(stop), 3));
}

double tail_from(double I, double T, std::size_t k, double sup) {
    return sup * (std::pow(I + T, static_cast<double>(k)) - std::pow(I, static_cast<double>(k)));
}

} // namespace

double poisson_tail_bound(const SmoothWeight& W, std::uint32_t p, std::uint32_t q, int U, double sup_p, double sup_q) {
    if (U < 0) throw InputError("cutoff must be nonnegative");
    const double pq = static_cast<double>(p) * q;
    double I = 0.0;
    for (int m = -U; m <= U; ++m) I += std::abs(W.B() * W.bump_hat(W.B() * m / pq));
    return tail_from(I, 2.0 * one_side_tail(W, pq, U), W.dims(), sup_p * sup_q);
}

PoissonResult poisson_compare(const MultiPoly& F, const SmoothWeight& W, std::uint32_t p, std::uint32_t q,
                              const TraceFunction& t_p, const TraceFunction& t_q, int u_cutoff) {
    const std::size_t k = F.n_vars();
    if (k != W.dims()) throw InputError("weight dimension does not match F");
    if (W.B() > 30.0 || p > 13 || q > 13 || k > 3)
        throw InputError("Poisson comparison is limited to B <= 30, p, q <= 13 and at most 3 variables");
    if (p == q || !is_prime(p) || !is_prime(q)) throw InputError("Poisson comparison needs distinct primes");
    check_trace(t_p, p, "t_p");
    check_trace(t_q, q, "t_q");
    const std::uint64_t m = std::uint64_t{p} * q;
    const double pq = static_cast<double>(m);
    const double sup = t_p.sup_bound() * t_q.sup_bound();

    PoissonResult out;
    out.B = W.B();
    out.p = p;
    out.q = q;

    // Direct side over the integer points strictly inside the box.
    const auto R = static_cast<std::int64_t>(std::ceil(W.B())) - 1;
    std::vector<double> w1(static_cast<std::size_t>(2 * R + 1));
    for (std::int64_t x = -R; x <= R; ++x) w1[static_cast<std::size_t>(x + R)] = SmoothWeight::bump(x / W.B());
    const IntEvaluator eval(F, -R, R);
    {
        std::vector<std::int64_t> x(k, -R);
        Complex acc = 0.0;
        for (;;) {
            double wx = 1.0;
            for (auto c : x) wx *= w1[static_cast<std::size_t>(c + R)];
            if (wx != 0.0) {
                const Int128 v = eval(x);
                const auto rp = static_cast<Elem>(((v % p) + p) % p);
                const auto rq = static_cast<Elem>(((v % q) + q) % q);
                acc += wx * t_p(rp) * std::conj(t_q(rq));
            }
            std::size_t i = 0;
            while (i < k && x[i] == R) x[i++] = -R;
            if (i == k) break;
            ++x[i];
        }
        out.direct = acc;
    }

    // Dual side: h[m] = B w-hat(B m / pq), extended until the tail is small.
    std::vector<double> h;
    auto extend = [&](int U) {
        while (static_cast<int>(h.size()) <= U) {
            const int j = static_cast<int>(h.size());
            h.push_back(W.B() * W.bump_hat(W.B() * j / pq));
        }
    };
    auto I_of = [&](int U) {
        extend(U);
        double I = std::abs(h[0]);
        for (int j = 1; j <= U; ++j) I += 2.0 * std::abs(h[j]);
        return I;
    };
    int U = u_cutoff;
    if (U < 0) {
        const double main = std::pow(W.B() * W.bump_l1(), static_cast<double>(k));
        for (U = 1;; U = U < 16 ? U + 1 : U + U / 4) {
            if (U > 4000) throw BudgetError("no Poisson cutoff below 4000 meets the tail target");
            if (tail_from(I_of(U), 2.0 * one_side_tail(W, pq, U), k, sup) <= 1e-4 * main) break;
        }
    }
    out.u_cutoff = U;
    out.tail_bound = tail_from(I_of(U), 2.0 * one_side_tail(W, pq, U), k, sup);

    const auto gp = all_complete_sums(F, t_p, p);
    const auto gq = all_complete_sums(F, t_q.conjugate(), q);
    const std::uint64_t qbar = inv_mod(q % p, p);
    const std::uint64_t pbar = inv_mod(p % q, q);
    std::vector<std::int64_t> u(k, -U);
    Complex acc = 0.0;
    for (;;) {
        double hu = 1.0;
        for (auto c : u) hu *= h[static_cast<std::size_t>(std::abs(c))];
        if (hu != 0.0) acc += hu * gp[scaled_index(u, qbar, p)] * gq[scaled_index(u, pbar, q)];
        std::size_t i = 0;
        while (i < k && u[i] == U) u[i++] = -U;
        if (i == k) break;
        ++u[i];
    }
    out.poisson = acc / std::pow(pq, static_cast<double>(k));
    out.error = std::abs(out.direct - out.poisson);
    out.within = out.error <= out.tail_bound + 1e-6;
    return out;
}

RatioScan bound_ratio_scan(const UniPoly& f, const MultiPoly& F, std::span<const std::int64_t> Bs, std::uint64_t budget,
                           unsigned threads) {
    if (Bs.empty()) throw InputError("empty B grid");
    std::vector<std::int64_t> grid(Bs.begin(), Bs.end());
    std::sort(grid.begin(), grid.end());
    RatioScan scan;
    for (auto B : grid) {
        if (B < 2) throw InputError("ratio scan needs B >= 2");
        const auto problem = make_box_problem(f, F, B);
        const double n = static_cast<double>(problem.n());
        const auto start = std::chrono::steady_clock::now();
        RatioRow row;
        row.B = B;
        row.N = brute_count(problem, budget, threads);
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const double b = static_cast<double>(B);
        row.theorem_ratio = static_cast<double>(row.N) /
                            (std::pow(b, n + 1.0 / (n + 2.0)) * std::pow(std::log(b), (n + 1.0) / (n + 2.0)));
        row.serre_ratio = static_cast<double>(row.N) / std::pow(b, n + 0.5);
        scan.rows.push_back(row);
    }
    double lo = scan.rows[0].theorem_ratio, hi = lo;
    for (const auto& r : scan.rows) {
        lo = std::min(lo, r.theorem_ratio);
        hi = std::max(hi, r.theorem_ratio);
    }
    scan.spread = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    scan.bounded = scan.spread <= 10.0;
    for (std::size_t i = 1; i + 1 < scan.rows.size(); ++i)
        if (scan.rows[i + 1].serre_ratio > scan.rows[i].serre_ratio) scan.serre_nonincreasing = false;
    return scan;
}

ClassificationTally classification_tally(const MultiPoly& F, std::uint32_t p, std::size_t samples, std::uint64_t seed,
                                         unsigned k_max) {
    ClassificationTally out;
    out.p = p;
    const std::size_t k = F.n_vars();
    auto record = [&](UKind kind) {
        switch (kind) {
        case UKind::ZeroType: ++out.zero; break;
        case UKind::Good: ++out.good; break;
        case UKind::Bad: ++out.bad; break;
        }
    };
    const auto diag = F.diagonal_coefficients();
    const bool exact = diag && F.degree() % p != 0 &&
                       std::none_of(diag->begin(), diag->end(), [p](std::int64_t c) { return reduce_mod(c, p) == 0; });
    if (exact) {
        out.method = "diagonal-oracle";
        const std::uint64_t total = checked_power(p, k, kDefaultScanBudget);
        check_budget(total, kDefaultScanBudget, "classification tally");
        std::vector<std::int64_t> u(k, 0);
        for (std::uint64_t s = 0; s < total; ++s) {
            record(diagonal_dual_oracle(F, u, p));
            std::size_t i = 0;
            while (i < k && ++u[i] == static_cast<std::int64_t>(p)) u[i++] = 0;
        }
        return out;
    }
    out.method = "scan";
    out.k_max = k_max;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> coord(0, p - 1);
    std::vector<std::int64_t> u(k);
    for (std::size_t s = 0; s < samples; ++s) {
        for (auto& c : u) c = coord(rng);
        record(classify_u(F, u, p, k_max).kind);
    }
    return out;
}

} // namespace xnt
