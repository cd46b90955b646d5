#include "xnt/variety_probe.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "xnt/error.hpp"

namespace xnt {

namespace {

std::uint64_t scan_cost(std::uint64_t q, std::size_t dims, std::uint64_t per_point, std::uint64_t budget) {
    unsigned __int128 total = per_point;
    for (std::size_t i = 0; i < dims; ++i) {
        total *= q;
        if (total > budget) break;
    }
    if (total > budget)
        throw BudgetError("scan of " + std::to_string(q) + "^" + std::to_string(dims) + " points exceeds budget " +
                          std::to_string(budget));
    return static_cast<std::uint64_t>(total);
}

bool advance(std::vector<Elem>& x, Elem q, std::size_t from = 0) {
    for (std::size_t i = from; i < x.size(); ++i) {
        if (++x[i] < q) return true;
        x[i] = 0;
    }
    return false;
}

// Calls visit(x) for one representative of each point of P^{n-1}(F_q): the
// first nonzero coordinate is 1. Stops early when visit returns true.
template <class Visit>
bool for_each_projective(std::size_t n, Elem q, Visit&& visit) {
    std::vector<Elem> x(n, 0);
    for (std::size_t lead = 0; lead < n; ++lead) {
        std::fill(x.begin(), x.end(), 0);
        x[lead] = 1;
        do {
            if (visit(x)) return true;
        } while (advance(x, q, lead + 1));
    }
    return false;
}

std::uint64_t projective_count(std::uint64_t q, std::size_t n) {
    std::uint64_t total = 0, pw = 1;
    for (std::size_t i = 0; i < n; ++i) {
        total += pw;
        pw *= q;
    }
    return total;
}

std::vector<Elem> normalized(const ExtField& f, std::vector<Elem> x) {
    for (Elem v : x) {
        if (v == 0) continue;
        const Elem s = f.inv(v);
        for (auto& c : x) c = f.mul(c, s);
        break;
    }
    return x;
}

double power(double base, double e) { return std::pow(base, e); }

} // namespace

std::string to_string(const ProjectivePoint& point) {
    std::string out = "[";
    for (std::size_t i = 0; i < point.coords.size(); ++i) {
        if (i) out += ":";
        out += std::to_string(point.coords[i]);
    }
    out += "]";
    if (point.field_degree > 1) out += " over F_p^" + std::to_string(point.field_degree);
    return out;
}

FiberCountRecord count_affine_fiber(const MultiPoly& F, Elem a, const ExtField& field, std::uint64_t budget) {
    const std::size_t n = F.n_vars();
    scan_cost(field.size(), n, 1, budget);
    const FieldEvaluator eval(F, field);
    std::vector<Elem> x(n, 0);
    std::uint64_t count = 0;
    do {
        count += eval(x) == a;
    } while (advance(x, field.size()));
    FiberCountRecord rec;
    rec.a = a;
    rec.count = count;
    rec.deviation = static_cast<double>(count) - power(field.size(), static_cast<double>(n) - 1.0);
    return rec;
}

FiberCountRecord count_pair_fiber(const MultiPoly& F, const MultiPoly& G, Elem a, Elem b, const ExtField& field,
                                  std::uint64_t budget) {
    if (F.n_vars() != G.n_vars()) throw InputError("F and G must have the same arity");
    const std::size_t n = F.n_vars();
    scan_cost(field.size(), n, 2, budget);
    const FieldEvaluator ef(F, field), eg(G, field);
    std::vector<Elem> x(n, 0);
    std::uint64_t count = 0;
    do {
        count += ef(x) == a && eg(x) == b;
    } while (advance(x, field.size()));
    FiberCountRecord rec;
    rec.a = a;
    rec.b = b;
    rec.count = count;
    rec.deviation = static_cast<double>(count) - power(field.size(), static_cast<double>(n) - 2.0);
    return rec;
}

std::vector<std::uint64_t> fiber_counts(const MultiPoly& F, const ExtField& field, std::uint64_t budget) {
    scan_cost(field.size(), F.n_vars(), 1, budget);
    const FieldEvaluator eval(F, field);
    std::vector<std::uint64_t> counts(field.size(), 0);
    std::vector<Elem> x(F.n_vars(), 0);
    do {
        ++counts[eval(x)];
    } while (advance(x, field.size()));
    return counts;
}

std::vector<std::uint64_t> pair_fiber_counts(const MultiPoly& F, const MultiPoly& G, const ExtField& field,
                                             std::uint64_t budget) {
    if (F.n_vars() != G.n_vars()) throw InputError("F and G must have the same arity");
    scan_cost(field.size(), F.n_vars(), 2, budget);
    const FieldEvaluator ef(F, field), eg(G, field);
    const std::uint64_t q = field.size();
    std::vector<std::uint64_t> counts(q * q, 0);
    std::vector<Elem> x(F.n_vars(), 0);
    do {
        ++counts[ef(x) * q + eg(x)];
    } while (advance(x, field.size()));
    return counts;
}

SmoothnessResult smoothness_scan(const MultiPoly& F, std::uint32_t p, unsigned k_max, std::uint64_t budget) {
    if (!F.is_homogeneous()) throw InputError("smoothness_scan expects a homogeneous polynomial");
    if (k_max < 1) throw InputError("k_max must be >= 1");
    const std::size_t n = F.n_vars();
    const auto grad = F.gradient();
    SmoothnessResult result;
    result.k_max = k_max;
    result.char_divides_degree = F.degree() % p == 0;

    std::uint64_t total = 0;
    for (unsigned j = 1; j <= k_max; ++j) {
        const double q = std::pow(static_cast<double>(p), j);
        if (q > 4e9) throw BudgetError("field too large for scan");
        total += projective_count(static_cast<std::uint64_t>(q), n) * (n + 1);
        if (total > budget) throw BudgetError("smoothness scan exceeds budget " + std::to_string(budget));
    }

    for (unsigned j = 1; j <= k_max; ++j) {
        const auto field = build_ext_field(p, j);
        const FieldEvaluator ef(F, field);
        std::vector<FieldEvaluator> eg;
        for (const auto& g : grad) eg.emplace_back(g, field);
        const bool found = for_each_projective(n, field.size(), [&](const std::vector<Elem>& x) {
            ++result.points_scanned;
            if (ef(x) != 0) return false;
            for (const auto& e : eg)
                if (e(x) != 0) return false;
            result.witness = ProjectivePoint{j, x};
            return true;
        });
        if (found) {
            result.smooth = false;
            return result;
        }
    }
    return result;
}

const char* to_string(UKind kind) noexcept {
    switch (kind) {
    case UKind::ZeroType: return "zero";
    case UKind::Good: return "good";
    case UKind::Bad: return "bad";
    }
    return "?";
}

UClass classify_u(const MultiPoly& F, std::span<const std::int64_t> u, std::uint32_t p, unsigned k_max,
                  std::uint64_t budget) {
    if (u.size() != F.n_vars()) throw InputError("frequency vector has wrong arity");
    if (!F.is_homogeneous()) throw InputError("classify_u expects a homogeneous polynomial");
    if (k_max < 1) throw InputError("k_max must be >= 1");
    const std::size_t n = F.n_vars();
    std::vector<Elem> ur(n);
    for (std::size_t i = 0; i < n; ++i) ur[i] = reduce_mod(u[i], p);
    UClass out;
    out.k_max = k_max;
    const auto pivot_it = std::find_if(ur.begin(), ur.end(), [](Elem v) { return v != 0; });
    if (pivot_it == ur.end()) {
        out.kind = UKind::ZeroType;
        return out;
    }
    const std::size_t pivot = static_cast<std::size_t>(pivot_it - ur.begin());

    std::uint64_t total = 0;
    for (unsigned j = 1; j <= k_max; ++j) {
        const double q = std::pow(static_cast<double>(p), j);
        total += projective_count(static_cast<std::uint64_t>(q), n - 1) * (n + 1);
        if (total > budget) throw BudgetError("tangency scan exceeds budget " + std::to_string(budget));
    }

    const auto grad = F.gradient();
    for (unsigned j = 1; j <= k_max; ++j) {
        const auto field = build_ext_field(p, j);
        const FieldEvaluator ef(F, field);
        std::vector<FieldEvaluator> eg;
        for (const auto& g : grad) eg.emplace_back(g, field);
        const Elem neg_inv_pivot = field.neg(field.inv(ur[pivot]));
        std::vector<Elem> x(n), g(n);
        const bool found = for_each_projective(n - 1, field.size(), [&](const std::vector<Elem>& y) {
            // Solve <x, u> = 0 for the pivot coordinate.
            Elem s = 0;
            for (std::size_t i = 0, k = 0; i < n; ++i) {
                if (i == pivot) continue;
                x[i] = y[k++];
                s = field.add(s, field.mul(ur[i], x[i]));
            }
            x[pivot] = field.mul(neg_inv_pivot, s);
            if (ef(x) != 0) return false;
            for (std::size_t i = 0; i < n; ++i) g[i] = eg[i](x);
            for (std::size_t i = 0; i < n; ++i)
                if (field.mul(g[i], ur[pivot]) != field.mul(g[pivot], ur[i])) return false;
            out.witness = ProjectivePoint{j, normalized(field, x)};
            return true;
        });
        if (found) {
            out.kind = UKind::Bad;
            return out;
        }
    }
    out.kind = UKind::Good;
    return out;
}

UKind diagonal_dual_oracle(std::span<const std::int64_t> coeffs, unsigned d, std::span<const std::int64_t> u,
                           std::uint32_t p) {
    if (coeffs.size() != u.size()) throw InputError("coefficient and frequency vectors differ in length");
    if (!is_prime(p)) throw InputError(std::to_string(p) + " is not prime");
    if (d < 2) throw InputError("diagonal oracle needs degree >= 2");
    if (d % p == 0) throw InputError("p divides the degree");
    for (auto c : coeffs)
        if (reduce_mod(c, p) == 0) throw InputError("p divides a diagonal coefficient");
    const std::size_t n = u.size();
    std::vector<Elem> ur(n), cr(n);
    for (std::size_t i = 0; i < n; ++i) {
        ur[i] = reduce_mod(u[i], p);
        cr[i] = reduce_mod(coeffs[i], p);
    }
    if (std::all_of(ur.begin(), ur.end(), [](Elem v) { return v == 0; })) return UKind::ZeroType;

    if (d == 2) {
        std::uint64_t s = 0;
        for (std::size_t i = 0; i < n; ++i)
            s = (s + std::uint64_t{ur[i]} * ur[i] % p * inv_mod(cr[i], p)) % p;
        return s == 0 ? UKind::Bad : UKind::Good;
    }

    // Number of distinct roots of x^{d-1} = v over the closure.
    std::uint32_t m = d - 1, distinct = m;
    while (distinct % p == 0) distinct /= p;
    for (std::uint32_t k = 1; k <= ExtField::kMaxDegree; ++k) {
        if (std::pow(static_cast<double>(p), k) > ExtField::kTableLimit) break;
        const auto field = build_ext_field(p, k);
        const Elem dd = field.from_int(d);
        std::vector<Elem> target(n, 0);
        for (std::size_t i = 0; i < n; ++i)
            if (ur[i]) target[i] = field.mul(ur[i], field.inv(field.mul(dd, cr[i])));
        std::vector<std::vector<Elem>> roots(n);
        for (Elem x = 1; x < field.size(); ++x) {
            const Elem xm = field.pow(x, m);
            for (std::size_t i = 0; i < n; ++i)
                if (ur[i] && xm == target[i]) roots[i].push_back(x);
        }
        bool complete = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (ur[i] == 0) roots[i] = {0};
            else complete = complete && roots[i].size() == distinct;
        }
        if (!complete) continue;
        std::vector<std::size_t> pick(n, 0);
        while (true) {
            Elem s = 0;
            for (std::size_t i = 0; i < n; ++i) s = field.add(s, field.mul(ur[i], roots[i][pick[i]]));
            if (s == 0) return UKind::Bad;
            std::size_t i = 0;
            while (i < n && ++pick[i] == roots[i].size()) pick[i++] = 0;
            if (i == n) break;
        }
        return UKind::Good;
    }
    throw UnsupportedError("roots of x^" + std::to_string(m) + " not reachable within F_p^4 tables");
}

UKind diagonal_dual_oracle(const MultiPoly& F, std::span<const std::int64_t> u, std::uint32_t p) {
    const auto c = F.diagonal_coefficients();
    if (!c) throw InputError("diagonal_dual_oracle needs a diagonal form sum c_i X_i^d");
    return diagonal_dual_oracle(*c, F.degree(), u, p);
}

std::vector<SingularFiber> singular_fiber_scan(const MultiPoly& f, const MultiPoly* g, std::uint32_t p,
                                               unsigned k_max, std::uint64_t budget) {
    if (g && g->n_vars() != f.n_vars()) throw InputError("f and g must have the same arity");
    if (k_max < 1) throw InputError("k_max must be >= 1");
    const std::size_t n = f.n_vars();
    const auto df = f.gradient();
    std::vector<MultiPoly> conditions;
    if (g) {
        conditions.push_back(*g);
        const auto dg = g->gradient();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) conditions.push_back(df[i] * dg[j] - df[j] * dg[i]);
    } else {
        conditions = df;
    }

    std::uint64_t total = 0;
    for (unsigned j = 1; j <= k_max; ++j) {
        total += scan_cost(static_cast<std::uint64_t>(std::pow(static_cast<double>(p), j)), n, conditions.size() + 1,
                           budget);
        if (total > budget) throw BudgetError("fiber scan exceeds budget " + std::to_string(budget));
    }

    std::map<Elem, SingularFiber> found;
    for (unsigned j = 1; j <= k_max; ++j) {
        const auto field = build_ext_field(p, j);
        const FieldEvaluator ef(f, field);
        std::vector<FieldEvaluator> ec;
        for (const auto& c : conditions) ec.emplace_back(c, field);
        std::vector<Elem> x(n, 0);
        do {
            bool hit = true;
            for (const auto& e : ec)
                if (e(x) != 0) {
                    hit = false;
                    break;
                }
            if (!hit) continue;
            const Elem lambda = ef(x);
            if (!field.in_base_field(lambda) || found.count(lambda)) continue;
            found.emplace(lambda, SingularFiber{lambda, j, x});
        } while (advance(x, field.size()));
    }
    std::vector<SingularFiber> out;
    for (auto& [l, s] : found) out.push_back(std::move(s));
    return out;
}

DeviationProfile deviation_profile(const MultiPoly& F, std::int64_t a, std::span<const std::uint32_t> primes,
                                   std::uint64_t budget) {
    DeviationProfile prof;
    const double half = (static_cast<double>(F.n_vars()) - 1.0) / 2.0;
    for (std::uint32_t p : primes) {
        const auto field = build_ext_field(p, 1);
        const auto rec = count_affine_fiber(F, field.from_int(a), field, budget);
        prof.primes.push_back(p);
        prof.counts.push_back(rec.count);
        const double norm = std::abs(rec.deviation) / std::pow(static_cast<double>(p), half);
        prof.normalized.push_back(norm);
        prof.fitted_constant = std::max(prof.fitted_constant, norm);
    }
    return prof;
}

} // namespace xnt
