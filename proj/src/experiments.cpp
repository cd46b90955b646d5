#include "xnt/experiments.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "xnt/box_count.hpp"
#include "xnt/error.hpp"
#include "xnt/field_core.hpp"
#include "xnt/poly_algebra.hpp"
#include "xnt/poly_sieve.hpp"
#include "xnt/trace_lab.hpp"
#include "xnt/variety_probe.hpp"

namespace xnt {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

const std::string& need(const std::string& value, const char* flag) {
    if (value.empty()) throw InputError(std::string("missing --") + flag);
    return value;
}

std::uint32_t need_prime(std::uint32_t p, const char* flag) {
    if (p == 0) throw InputError(std::string("missing --") + flag);
    if (!is_prime(p)) throw InputError("--" + std::string(flag) + " " + std::to_string(p) + " is not prime");
    return p;
}

Json complex_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

std::string join(const std::vector<Elem>& v, const char* sep = " ") {
    std::ostringstream out;
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? sep : "") << v[i];
    return out.str();
}

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

unsigned parse_unsigned(const std::string& text, const std::string& context) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
        v = std::stoul(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (text.empty() || used != text.size()) throw InputError("bad number '" + text + "' in " + context);
    return static_cast<unsigned>(v);
}

// kl<m> | legendre | psi | const | chi<r>.<j> | ft:<t> | conj:<t> | pow<d>:<t> | te<e>:<t>
TraceFunction make_trace(const std::string& name, std::uint32_t p, unsigned k) {
    const auto field = build_ext_field(p, k);
    const auto colon = name.find(':');
    if (colon != std::string::npos) {
        const std::string head = name.substr(0, colon);
        const auto inner = make_trace(name.substr(colon + 1), p, k);
        if (head == "ft") return fourier_transform(inner, field);
        if (head == "conj") return inner.conjugate();
        if (starts_with(head, "pow")) return pullback_power(inner, parse_unsigned(head.substr(3), name), field);
        if (starts_with(head, "te")) return te_transform(inner, parse_unsigned(head.substr(2), name), field);
        throw InputError("unknown trace transform '" + head + "'");
    }
    if (starts_with(name, "kl")) return kloosterman(parse_unsigned(name.substr(2), name), field);
    if (name == "psi") return additive_trace(field);
    if (name == "const") return constant_trace(field, 1.0);
    if (name == "legendre" || starts_with(name, "chi")) {
        if (k != 1) throw InputError("multiplicative characters are provided over F_p only");
        const PrimeField pf(p);
        if (name == "legendre") return legendre_symbol(pf);
        const auto dot = name.find('.');
        if (dot == std::string::npos) throw InputError("character names look like chi<order>.<index>");
        return mult_char(pf, parse_unsigned(name.substr(3, dot - 3), name), parse_unsigned(name.substr(dot + 1), name));
    }
    throw InputError("unknown trace function '" + name + "'");
}

std::vector<std::int64_t> need_u(const RunConfig& c, std::size_t n) {
    auto u = parse_int_list(need(c.u, "u"));
    if (u.size() != n)
        throw InputError("--u has " + std::to_string(u.size()) + " entries, F has " + std::to_string(n) + " variables");
    return u;
}

void classify_into(Report& r, const MultiPoly& F, const std::vector<std::int64_t>& u, std::uint32_t p, const RunConfig& c) {
    if (!F.is_homogeneous()) return;
    const auto cls = classify_u(F, u, p, c.kmax, c.budget);
    r.disclose_kmax(cls.k_max, "classify_u");
    auto& res = r.result();
    res["u_class"] = to_string(cls.kind);
    if (cls.witness) res["u_witness"] = to_string(*cls.witness);
    try {
        const auto exact = diagonal_dual_oracle(F, u, p);
        res["u_class_exact"] = to_string(exact);
        const bool consistent = !(cls.kind == UKind::Bad && exact != UKind::Bad) &&
                                !(exact == UKind::ZeroType) == !(cls.kind == UKind::ZeroType);
        r.invariant("scan witness is confirmed by the diagonal oracle", consistent);
    } catch (const InputError&) {
    }
}

void exponential_sum(Report& r, const RunConfig& c, const TraceFunction& t) {
    const auto F = parse_multi(need(c.F, "F"));
    const std::uint32_t p = need_prime(c.p, "p");
    const auto field = build_ext_field(p, c.k);
    const double q = field.size();
    const double n = static_cast<double>(F.n_vars());
    auto& res = r.result();
    res["trace"] = t.label();
    res["sup_bound"] = t.sup_bound();
    res["q"] = field.size();
    res["n_vars"] = F.n_vars();
    Complex S;
    if (!c.u.empty()) {
        if (c.k != 1) throw InputError("twisted sums are provided over F_p only");
        const auto u = need_u(c, F.n_vars());
        res["u"] = u;
        S = complete_sum_g(F, t, u, p, true, c.budget);
        classify_into(r, F, u, p, c);
    } else {
        const auto counts = fiber_counts(F, field, c.budget);
        Json rows = Json::array();
        for (Elem a = 0; a < field.size(); ++a) {
            S += static_cast<double>(counts[a]) * t(a);
            rows.push_back(Json::array({a, counts[a], t(a).real(), t(a).imag()}));
        }
        r.table("fibers", {"a", "count", "t_re", "t_im"}, std::move(rows));
    }
    res["sum"] = complex_json(S);
    res["abs"] = std::abs(S);
    res["normalized"] = std::abs(S) / std::pow(q, n / 2.0);
    res["normalization"] = "q^(n/2)";
}

void run_mixsum(Report& r, const RunConfig& c) {
    const auto F = parse_multi(need(c.F, "F"));
    const auto G = parse_multi(need(c.G, "G"), F.n_vars());
    const std::uint32_t p = need_prime(c.p, "p");
    const auto field = build_ext_field(p, c.k);
    const auto t = make_trace(c.trace, p, c.k);
    const Elem q = field.size();
    const double n = static_cast<double>(F.n_vars());
    const auto pairs = pair_fiber_counts(F, G, field, c.budget);
    const auto single = fiber_counts(F, field, c.budget);
    bool marginal = true;
    Complex S = 0.0;
    double worst = 0.0;
    const double expect = std::pow(static_cast<double>(q), n - 2.0);
    Json rows = Json::array();
    for (Elem a = 0; a < q; ++a) {
        std::uint64_t total = 0;
        for (Elem b = 0; b < q; ++b) {
            const auto N = pairs[std::size_t{a} * q + b];
            total += N;
            S += static_cast<double>(N) * t(a) * additive_char(field, b);
            worst = std::max(worst, std::abs(static_cast<double>(N) - expect));
            rows.push_back(Json::array({a, b, N}));
        }
        if (total != single[a]) marginal = false;
    }
    r.invariant("sum over b of N(a,b,F,G) equals N(a,F)", marginal);
    r.table("pairs", {"a", "b", "count"}, std::move(rows));
    auto& res = r.result();
    res["trace"] = t.label();
    res["q"] = q;
    res["n_vars"] = F.n_vars();
    res["mixed_sum"] = complex_json(S);
    res["normalized"] = std::abs(S) / std::pow(static_cast<double>(q), n / 2.0);
    res["pair_deviation_max"] = worst;
    res["pair_deviation_normalized"] = worst / std::pow(static_cast<double>(q), (n - 1.0) / 2.0);
}

void run_sieve_check(Report& r, const RunConfig& c) {
    std::vector<std::uint32_t> primes;
    if (c.p != 0) {
        primes.push_back(need_prime(c.p, "p"));
    } else {
        for (auto p : primes_in_range(2, 200))
            if ((p - 1) % c.d == 0) primes.push_back(p);
    }
    Json rows = Json::array();
    double worst = 0.0;
    for (auto p : primes) {
        const double err = power_decomposition_check(c.d, p);
        worst = std::max(worst, err);
        rows.push_back(Json::array({p, err}));
    }
    r.table("decomposition", {"p", "max_error"}, std::move(rows));
    r.result()["d"] = c.d;
    r.result()["primes_checked"] = primes.size();
    r.result()["max_error"] = worst;
    r.invariant("power decomposition error <= 1e-9", worst <= 1e-9);
}

std::vector<std::uint32_t> explicit_primes(const std::string& spec) {
    const std::string body = spec.substr(5);
    if (body.empty()) throw InputError("empty prime list: pass --primes list:p1,p2,... with at least one prime");
    std::vector<std::uint32_t> out;
    for (auto v : parse_int_list(body)) {
        if (v < 2 || v > 1'000'003) throw InputError("prime " + std::to_string(v) + " out of range");
        out.push_back(static_cast<std::uint32_t>(v));
    }
    return out;
}

Sequence build_sequence(const std::string& spec, const UniPoly& h) {
    Sequence a;
    if (starts_with(spec, "values:")) {
        const auto K = parse_unsigned(spec.substr(7), spec);
        for (std::int64_t t = 1; t <= static_cast<std::int64_t>(K); ++t) a[h.eval(t)] = 1.0;
    } else if (starts_with(spec, "range:")) {
        const auto bounds = parse_int_list(spec.substr(6));
        if (bounds.size() != 2 || bounds[0] > bounds[1]) throw InputError("range sequences look like range:L,R");
        for (auto n = bounds[0]; n <= bounds[1]; ++n) a[n] = 1.0;
    } else if (starts_with(spec, "points:")) {
        for (auto n : parse_int_list(spec.substr(7))) a[n] += 1.0;
    } else {
        throw InputError("unknown sequence '" + spec + "'");
    }
    return a;
}

void run_sieve_detect(Report& r, const RunConfig& c) {
    const auto h = parse_uni(need(c.f, "f"));
    std::vector<std::uint32_t> primes;
    if (c.primes == "auto") {
        for (auto p : nonsurjective_primes(h, 20, 2000))
            if (primes.size() < 8) primes.push_back(p);
    } else {
        primes = explicit_primes(c.primes);
    }
    const auto config = make_sieve_config(h, primes, c.threshold);
    const auto data = build_prime_data(config);
    Json rows = Json::array();
    bool bound = true;
    for (const auto& d : data) {
        const bool ok = std::uint64_t{d.image_size} * d.degree <= std::uint64_t{d.p} * d.degree - (d.p - 1);
        bound = bound && ok;
        rows.push_back(Json::array({d.p, d.image_size, d.image_bound(), d.bound_tight(), join(d.exceptional)}));
    }
    r.table("primes", {"p", "image_size", "image_bound", "bound_tight", "exceptional"}, std::move(rows));
    r.invariant("|h(F_p)| <= p - (p-1)/d", bound);

    const auto a = build_sequence(c.seq, h);
    const auto led = sieve_bound_eval(config, data, a);
    auto& res = r.result();
    res["primes"] = primes;
    res["threshold_mode"] = to_string(c.threshold);
    res["threshold"] = led.threshold;
    res["sequence"] = c.seq;
    Json ledger;
    ledger["P"] = led.prime_count;
    ledger["d"] = led.degree;
    ledger["supported"] = led.supported;
    ledger["in_image"] = led.in_image;
    ledger["total_weight"] = led.total_weight;
    ledger["V_h"] = led.V_h;
    ledger["first_term"] = led.prime_count ? led.total_weight / led.prime_count : 0.0;
    ledger["sigma"] = led.sigma;
    ledger["diagonal"] = led.diagonal;
    ledger["cross_term"] = led.cross;
    ledger["lhs_P2_V"] = led.lhs;
    ledger["rhs_2d2_sigma"] = led.rhs;
    ledger["support_ok"] = led.support_ok;
    ledger["exceptional_ok"] = led.exceptional_ok;
    ledger["hypothesis_ok"] = led.hypothesis_ok;
    ledger["inequality_holds"] = led.inequality_holds;
    res["ledger"] = ledger;
    r.invariant("diagonal part <= P * sum a(n)", led.diagonal <= led.prime_count * led.total_weight * (1 + 1e-12));

    // Character form, available when h = T^d and every prime is 1 mod d.
    const unsigned d = config.degree();
    bool pure_power = h.lead() == 1;
    for (int i = 0; i < h.degree(); ++i) pure_power = pure_power && h.coeff(i) == 0;
    const bool split = std::all_of(primes.begin(), primes.end(), [d](std::uint32_t p) { return (p - 1) % d == 0; });
    if (pure_power && split && !primes.empty()) {
        const auto ps = power_sieve_terms(d, primes, a);
        res["power_sieve"] = Json{{"V", ps.V},
                                  {"first_term", ps.first_term},
                                  {"cross_term", ps.cross_term},
                                  {"rhs", ps.rhs},
                                  {"ratio_V_over_rhs", ps.rhs > 0 ? ps.V / ps.rhs : 0.0},
                                  {"support_ok", ps.support_ok}};
    }
}

void run_classify(Report& r, const RunConfig& c) {
    const auto F = parse_multi(need(c.F, "F"));
    const std::uint32_t p = need_prime(c.p, "p");
    const auto u = need_u(c, F.n_vars());
    if (!F.is_homogeneous()) throw InputError("classify-u needs a homogeneous F");
    r.result()["u"] = u;
    r.result()["p"] = p;
    classify_into(r, F, u, p, c);
}

void run_fibers(Report& r, const RunConfig& c) {
    const auto f = parse_multi(need(c.F, "F"));
    const std::uint32_t p = need_prime(c.p, "p");
    std::optional<MultiPoly> g;
    if (!c.G.empty()) g = parse_multi(c.G, f.n_vars());
    const auto found = singular_fiber_scan(f, g ? &*g : nullptr, p, c.kmax, c.budget);
    r.disclose_kmax(c.kmax, "singular_fiber_scan");
    Json rows = Json::array();
    Json lambdas = Json::array();
    for (const auto& s : found) {
        lambdas.push_back(s.lambda);
        rows.push_back(Json::array({s.lambda, s.field_degree, join(s.witness, ",")}));
    }
    r.table("singular_fibers", {"lambda", "field_degree", "witness"}, std::move(rows));
    r.result()["p"] = p;
    r.result()["singular_lambdas"] = lambdas;
}

void run_boxcount(Report& r, const RunConfig& c) {
    auto problem = make_box_problem(parse_uni(need(c.f, "f")), parse_multi(need(c.F, "F")), c.B);
    auto& res = r.result();
    res["n"] = problem.n();
    res["d"] = problem.d();
    res["e"] = problem.e();
    res["B"] = problem.B;
    res["height_f"] = problem.height_f();
    res["height_F"] = problem.height_F();
    res["box_points"] = problem.box_points();

    std::vector<std::uint32_t> primes;
    if (c.primes == "auto") {
        const auto sel = select_primes(problem);
        primes = sel.primes;
        Json rejected = Json::array();
        for (const auto& rej : sel.rejected) rejected.push_back(Json{{"p", rej.p}, {"reason", rej.reason}});
        res["prime_window"] = Json{{"Q", sel.Q}, {"lo", sel.lo}, {"hi", sel.hi}, {"rejected", rejected},
                                   {"good_reduction_semi_decided", sel.semi_decided}};
        if (sel.semi_decided) r.disclose_kmax(sel.k_max, "select_primes");
    } else {
        primes = explicit_primes(c.primes);
    }
    res["primes"] = primes;
    const auto config = make_sieve_config(problem.f, primes, c.threshold);

    auto start = Clock::now();
    const auto exact = brute_count(problem, c.budget, c.threads);
    r.timing()["brute_seconds"] = seconds_since(start);
    start = Clock::now();
    const auto sieved = sieve_filtered_count(problem, config, c.budget, c.threads);
    r.timing()["sieve_seconds"] = seconds_since(start);
    res["counts"] = Json{{"exact", exact},
                         {"sieve_filtered", sieved.count},
                         {"rejected_by_sieve", sieved.rejected_by_sieve},
                         {"verified_exactly", sieved.verified_exactly},
                         {"rejection_ratio", sieved.rejection_ratio}};
    r.invariant("sieve-filtered count equals exact count", exact == sieved.count);
    const auto mismatches = table_spot_check(problem, 10000, c.seed);
    res["table_spot_checks"] = Json{{"samples", 10000}, {"mismatches", mismatches}};
    r.invariant("f-value table agrees with direct root search", mismatches == 0);

    const auto S = exceptional_set(problem, primes, c.threshold);
    Json members = Json::array();
    Json rows = Json::array();
    for (std::size_t i = 0; i < S.members.size(); ++i) {
        const auto k = S.members[i];
        members.push_back(k);
        if (i >= 50) continue;
        const auto prof = discriminant_profile(problem.f, k);
        rows.push_back(Json::array({k, to_string(prof.disc), prof.omega(), prof.zero}));
    }
    res["exceptional_set"] = Json{{"range", S.range}, {"threshold", S.threshold},
                                  {"mode", to_string(c.threshold)}, {"members", members}};
    r.table("exceptional", {"k", "disc", "omega", "disc_zero"}, std::move(rows));

    const auto tally = classification_tally(problem.F, primes.front(), 200, c.seed, c.kmax);
    res["classification"] = Json{{"p", tally.p}, {"method", tally.method}, {"zero", tally.zero},
                                 {"good", tally.good}, {"bad", tally.bad}};
    if (tally.method == "scan") r.disclose_kmax(tally.k_max, "classification_tally");
    r.table("classification", {"class", "count"},
            Json::array({Json::array({"zero", tally.zero}), Json::array({"good", tally.good}),
                         Json::array({"bad", tally.bad})}));
}

void run_bound_scan(Report& r, const RunConfig& c) {
    const auto f = parse_uni(need(c.f, "f"));
    const auto F = parse_multi(need(c.F, "F"));
    const auto grid = parse_int_list(c.Bs);
    const auto scan = bound_ratio_scan(f, F, grid, c.budget, c.threads);
    const double n = static_cast<double>(F.n_vars() - 1);
    Json rows = Json::array();
    Json seconds = Json::array();
    for (const auto& row : scan.rows) {
        rows.push_back(Json::array({row.B, row.N, row.theorem_ratio, row.serre_ratio}));
        seconds.push_back(row.seconds);
    }
    r.table("ratios", {"B", "N", "theorem_ratio", "serre_ratio"}, std::move(rows));
    r.timing()["per_B_seconds"] = seconds;
    auto& res = r.result();
    res["n"] = F.n_vars() - 1;
    res["theorem_exponent"] = n + 1.0 / (n + 2.0);
    res["log_exponent"] = (n + 1.0) / (n + 2.0);
    res["serre_exponent"] = n + 0.5;
    res["spread"] = scan.spread;
    res["serre_ratio_nonincreasing_after_first"] = scan.serre_nonincreasing;
    r.invariant("theorem ratio max/min <= 10", scan.bounded);
}

void run_poisson(Report& r, const RunConfig& c) {
    const auto F = parse_multi(need(c.F, "F"));
    const std::uint32_t p = need_prime(c.p, "p");
    const std::uint32_t q = need_prime(c.q, "q");
    if (c.B <= 0) throw InputError("missing --B");
    const SmoothWeight W(static_cast<double>(c.B), F.n_vars());
    const auto res = poisson_compare(F, W, p, q, make_trace(c.trace, p, 1), make_trace(c.trace, q, 1), c.ucut);
    auto& out = r.result();
    out["direct"] = complex_json(res.direct);
    out["poisson"] = complex_json(res.poisson);
    out["error"] = res.error;
    out["tail_bound"] = res.tail_bound;
    out["u_cutoff"] = res.u_cutoff;
    out["kappa"] = 4;
    out["quadrature_tolerance"] = W.tolerance();
    r.invariant("|direct - poisson| <= tail bound + 1e-6", res.within);
}

void run_crt(Report& r, const RunConfig& c) {
    const auto F = parse_multi(need(c.F, "F"));
    const std::uint32_t p = need_prime(c.p, "p");
    const std::uint32_t q = need_prime(c.q, "q");
    const auto tp = make_trace(c.trace, p, 1);
    const auto tq = make_trace(c.trace, q, 1);
    std::vector<std::vector<std::int64_t>> us;
    if (!c.u.empty()) us.push_back(need_u(c, F.n_vars()));
    std::mt19937_64 rng(c.seed);
    std::uniform_int_distribution<std::int64_t> coord(-50, 50);
    for (unsigned i = 0; i < c.draws; ++i) {
        std::vector<std::int64_t> u(F.n_vars());
        for (auto& v : u) v = coord(rng);
        us.push_back(std::move(u));
    }
    if (us.empty()) throw InputError("crt-check needs --u or --draws");
    Json rows = Json::array();
    double worst = 0.0;
    for (const auto& u : us) {
        const auto chk = crt_factor_check(F, u, p, q, tp, tq, c.budget);
        worst = std::max(worst, chk.relative);
        std::ostringstream label;
        for (std::size_t i = 0; i < u.size(); ++i) label << (i ? "," : "") << u[i];
        rows.push_back(Json::array({label.str(), chk.lhs.real(), chk.lhs.imag(), chk.rhs.real(), chk.rhs.imag(),
                                    chk.relative}));
    }
    r.table("crt", {"u", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "relative_error"}, std::move(rows));
    r.result()["draws"] = us.size();
    r.result()["max_relative_error"] = worst;
    r.invariant("CRT relative error <= tolerance", worst <= c.tolerance);
}

void echo_config(Report& r, const RunConfig& c) {
    auto& cfg = r.config();
    cfg["f"] = c.f;
    cfg["F"] = c.F;
    cfg["G"] = c.G;
    cfg["B"] = c.B;
    cfg["Bs"] = c.Bs;
    cfg["primes"] = c.primes;
    cfg["kmax"] = c.kmax;
    cfg["threshold"] = to_string(c.threshold);
    cfg["budget"] = c.budget;
    cfg["threads"] = c.threads;
    cfg["m"] = c.m;
    cfg["d"] = c.d;
    cfg["p"] = c.p;
    cfg["q"] = c.q;
    cfg["k"] = c.k;
    cfg["u"] = c.u;
    cfg["trace"] = c.trace;
    cfg["seq"] = c.seq;
    cfg["ucut"] = c.ucut;
    cfg["draws"] = c.draws;
    cfg["tolerance"] = c.tolerance;
    Json parsed = Json::object();
    if (!c.f.empty()) parsed["f"] = to_string(parse_uni(c.f));
    if (!c.F.empty()) parsed["F"] = to_string(parse_multi(c.F));
    if (!c.G.empty()) parsed["G"] = to_string(parse_multi(c.G));
    cfg["parsed"] = parsed;
}

} // namespace

Report run_experiment(const RunConfig& c) {
    if (c.budget == 0) throw InputError("budget must be positive");
    if (c.threads == 0) throw InputError("threads must be positive");
    if (!(c.tolerance > 0.0)) throw InputError("tolerance must be positive");
    Report r(c.subcommand, c.seed);
    echo_config(r, c);
    const auto start = Clock::now();
    const auto& s = c.subcommand;
    if (s == "klsum") {
        exponential_sum(r, c, kloosterman(c.m, build_ext_field(need_prime(c.p, "p"), c.k)));
    } else if (s == "tracesum") {
        exponential_sum(r, c, make_trace(c.trace, need_prime(c.p, "p"), c.k));
    } else if (s == "mixsum") {
        run_mixsum(r, c);
    } else if (s == "sieve-check") {
        run_sieve_check(r, c);
    } else if (s == "sieve-detect") {
        run_sieve_detect(r, c);
    } else if (s == "classify-u") {
        run_classify(r, c);
    } else if (s == "fibers") {
        run_fibers(r, c);
    } else if (s == "boxcount") {
        run_boxcount(r, c);
    } else if (s == "bound-scan") {
        run_bound_scan(r, c);
    } else if (s == "poisson-check") {
        run_poisson(r, c);
    } else if (s == "crt-check") {
        run_crt(r, c);
    } else {
        throw InputError("unknown subcommand '" + s + "'");
    }
    r.timing()["total_seconds"] = seconds_since(start);
    return r;
}

} // namespace xnt
