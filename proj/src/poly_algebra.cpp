#include "xnt/poly_algebra.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

#include "xnt/error.hpp"

namespace xnt {

namespace {

constexpr Int128 kInt64Max = std::numeric_limits<std::int64_t>::max();
constexpr Int128 kInt64Min = std::numeric_limits<std::int64_t>::min();

Int128 checked_mul(Int128 a, Int128 b) {
    Int128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("128-bit overflow in multiplication");
    return r;
}

Int128 checked_add(Int128 a, Int128 b) {
    Int128 r;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError("128-bit overflow in addition");
    return r;
}

std::int64_t narrow(Int128 v) {
    if (v > kInt64Max || v < kInt64Min) throw OverflowError("value exceeds 64-bit range");
    return static_cast<std::int64_t>(v);
}

std::int64_t mod_residue(Int128 v, std::uint32_t p) {
    Int128 r = v % p;
    return static_cast<std::int64_t>(r < 0 ? r + p : r);
}

unsigned total_degree(const Exponents& e) {
    unsigned s = 0;
    for (auto x : e) s += x;
    return s;
}

} // namespace

std::string to_string(Int128 v) {
    if (v == 0) return "0";
    const bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
    std::string s;
    while (u) {
        s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
}

// --- MultiPoly -------------------------------------------------------------

MultiPoly::MultiPoly(std::size_t n_vars, std::uint32_t modulus) : n_vars_(n_vars), modulus_(modulus) {
    if (modulus != 0 && !is_prime(modulus)) throw InputError("polynomial modulus must be prime");
}

MultiPoly MultiPoly::variable(std::size_t n_vars, std::size_t index, std::uint32_t modulus) {
    if (index >= n_vars) throw InputError("variable index out of range");
    MultiPoly out(n_vars, modulus);
    Exponents e(n_vars, 0);
    e[index] = 1;
    out.add_term(std::move(e), 1);
    return out;
}

MultiPoly MultiPoly::constant(std::size_t n_vars, std::int64_t c, std::uint32_t modulus) {
    MultiPoly out(n_vars, modulus);
    out.add_term(Exponents(n_vars, 0), c);
    return out;
}

std::int64_t MultiPoly::normalize(Int128 c) const { return modulus_ ? mod_residue(c, modulus_) : narrow(c); }

MultiPoly& MultiPoly::add_term(Exponents exps, std::int64_t coeff) {
    if (exps.size() != n_vars_) throw InputError("exponent vector length does not match arity");
    const std::int64_t c = normalize(coeff);
    if (c == 0) return *this;
    auto it = terms_.find(exps);
    if (it == terms_.end()) {
        terms_.emplace(std::move(exps), c);
        return *this;
    }
    it->second = normalize(Int128{it->second} + c);
    if (it->second == 0) terms_.erase(it);
    return *this;
}

unsigned MultiPoly::degree() const noexcept {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
    return d;
}

bool MultiPoly::is_homogeneous() const noexcept {
    const unsigned d = degree();
    return std::all_of(terms_.begin(), terms_.end(), [d](const auto& t) { return total_degree(t.first) == d; });
}

std::int64_t MultiPoly::height() const noexcept {
    std::int64_t h = 0;
    for (const auto& [e, c] : terms_) h = std::max(h, c < 0 ? -c : c);
    return h;
}

MultiPoly MultiPoly::reduce_mod(std::uint32_t p) const {
    MultiPoly out(n_vars_, p);
    out.var_base_ = var_base_;
    for (const auto& [e, c] : terms_) out.add_term(e, c);
    return out;
}

std::int64_t MultiPoly::eval(std::span<const std::int64_t> point) const {
    if (point.size() != n_vars_) throw InputError("evaluation point has wrong arity");
    if (modulus_) {
        Int128 acc = 0;
        for (const auto& [e, c] : terms_) {
            Int128 term = c;
            for (std::size_t i = 0; i < n_vars_; ++i)
                for (std::uint32_t k = 0; k < e[i]; ++k) term = term * mod_residue(point[i], modulus_) % modulus_;
            acc = (acc + term) % modulus_;
        }
        return static_cast<std::int64_t>(acc);
    }
    Int128 acc = 0;
    for (const auto& [e, c] : terms_) {
        Int128 term = c;
        for (std::size_t i = 0; i < n_vars_; ++i)
            for (std::uint32_t k = 0; k < e[i]; ++k) term = checked_mul(term, point[i]);
        acc = checked_add(acc, term);
    }
    return narrow(acc);
}

Elem MultiPoly::eval(const ExtField& field, std::span<const Elem> point) const {
    if (point.size() != n_vars_) throw InputError("evaluation point has wrong arity");
    Elem acc = 0;
    for (const auto& [e, c] : terms_) {
        Elem term = field.from_int(c);
        for (std::size_t i = 0; i < n_vars_ && term != 0; ++i)
            if (e[i]) term = field.mul(term, field.pow(point[i], e[i]));
        acc = field.add(acc, term);
    }
    return acc;
}

MultiPoly MultiPoly::derivative(std::size_t var) const {
    if (var >= n_vars_) throw InputError("variable index out of range");
    MultiPoly out(n_vars_, modulus_);
    out.var_base_ = var_base_;
    for (const auto& [e, c] : terms_) {
        if (e[var] == 0) continue;
        Exponents d = e;
        --d[var];
        out.add_term(std::move(d), normalize(Int128{c} * e[var]));
    }
    return out;
}

std::vector<MultiPoly> MultiPoly::gradient() const {
    std::vector<MultiPoly> out;
    out.reserve(n_vars_);
    for (std::size_t i = 0; i < n_vars_; ++i) out.push_back(derivative(i));
    return out;
}

MultiPoly MultiPoly::homogenize(std::size_t new_var_index) const {
    if (new_var_index > n_vars_) throw InputError("homogenizing variable index out of range");
    MultiPoly out(n_vars_ + 1, modulus_);
    out.var_base_ = (new_var_index == 0 && var_base_ > 0) ? var_base_ - 1 : var_base_;
    const unsigned d = degree();
    for (const auto& [e, c] : terms_) {
        Exponents h = e;
        h.insert(h.begin() + static_cast<std::ptrdiff_t>(new_var_index), d - total_degree(e));
        out.add_term(std::move(h), c);
    }
    return out;
}

MultiPoly MultiPoly::dehomogenize(std::size_t var) const {
    if (var >= n_vars_ || n_vars_ == 1) throw InputError("cannot dehomogenize at this variable");
    MultiPoly out(n_vars_ - 1, modulus_);
    out.var_base_ = (var == 0) ? var_base_ + 1 : var_base_;
    for (const auto& [e, c] : terms_) {
        Exponents h = e;
        h.erase(h.begin() + static_cast<std::ptrdiff_t>(var));
        out.add_term(std::move(h), c);
    }
    return out;
}

std::optional<std::vector<std::int64_t>> MultiPoly::diagonal_coefficients() const {
    if (terms_.empty()) return std::nullopt;
    std::vector<std::int64_t> c(n_vars_, 0);
    const unsigned d = degree();
    for (const auto& [e, coeff] : terms_) {
        std::size_t nonzero = 0, at = 0;
        for (std::size_t i = 0; i < n_vars_; ++i)
            if (e[i]) {
                ++nonzero;
                at = i;
            }
        if (nonzero != 1 || e[at] != d) return std::nullopt;
        c[at] = coeff;
    }
    return c;
}

void MultiPoly::check_compatible(const MultiPoly& other) const {
    if (n_vars_ != other.n_vars_ || modulus_ != other.modulus_)
        throw InputError("polynomials live in different rings");
}

MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
    a.check_compatible(b);
    MultiPoly out = a;
    for (const auto& [e, c] : b.terms_) out.add_term(e, c);
    return out;
}

MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) {
    a.check_compatible(b);
    MultiPoly out = a;
    for (const auto& [e, c] : b.terms_) out.add_term(e, out.normalize(-Int128{c}));
    return out;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    a.check_compatible(b);
    MultiPoly out(a.n_vars_, a.modulus_);
    out.var_base_ = a.var_base_;
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) {
            Exponents e(a.n_vars_);
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            out.add_term(std::move(e), out.normalize(checked_mul(ca, cb)));
        }
    return out;
}

FieldEvaluator::FieldEvaluator(const MultiPoly& poly, const ExtField& field)
    : field_(&field), n_vars_(poly.n_vars()) {
    for (const auto& [e, c] : poly.terms()) {
        const Elem coeff = field.from_int(c);
        if (coeff == 0) continue;
        coeffs_.push_back(coeff);
        exps_.insert(exps_.end(), e.begin(), e.end());
    }
}

Elem FieldEvaluator::operator()(std::span<const Elem> point) const {
    const ExtField& f = *field_;
    Elem acc = 0;
    for (std::size_t t = 0; t < coeffs_.size(); ++t) {
        Elem term = coeffs_[t];
        const std::uint32_t* e = exps_.data() + t * n_vars_;
        for (std::size_t i = 0; i < n_vars_ && term != 0; ++i) {
            if (e[i] == 0) continue;
            Elem pw = point[i];
            for (std::uint32_t k = 1; k < e[i]; ++k) pw = f.mul(pw, point[i]);
            term = f.mul(term, pw);
        }
        acc = f.add(acc, term);
    }
    return acc;
}

// --- UniPoly ---------------------------------------------------------------

UniPoly::UniPoly(std::vector<std::int64_t> coeffs, std::uint32_t modulus)
    : coeffs_(std::move(coeffs)), modulus_(modulus) {
    if (modulus_ != 0) {
        if (!is_prime(modulus_)) throw InputError("polynomial modulus must be prime");
        for (auto& c : coeffs_) c = mod_residue(c, modulus_);
    }
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

std::int64_t UniPoly::height() const noexcept {
    std::int64_t h = 0;
    for (auto c : coeffs_) h = std::max(h, c < 0 ? -c : c);
    return h;
}

Int128 UniPoly::eval_wide(Int128 t) const {
    Int128 acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = checked_add(checked_mul(acc, t), *it);
    return acc;
}

std::int64_t UniPoly::eval(std::int64_t t) const {
    if (modulus_) {
        Int128 acc = 0;
        const Int128 x = mod_residue(t, modulus_);
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = (acc * x + *it) % modulus_;
        return static_cast<std::int64_t>(acc);
    }
    return narrow(eval_wide(t));
}

Elem UniPoly::eval(const ExtField& field, Elem x) const {
    Elem acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = field.add(field.mul(acc, x), field.from_int(*it));
    return acc;
}

UniPoly UniPoly::derivative() const {
    std::vector<std::int64_t> d;
    for (std::size_t i = 1; i < coeffs_.size(); ++i) d.push_back(narrow(checked_mul(coeffs_[i], static_cast<Int128>(i))));
    return UniPoly(std::move(d), modulus_);
}

UniPoly UniPoly::reduce_mod(std::uint32_t p) const { return UniPoly(coeffs_, p); }

UniPoly UniPoly::minus_constant(std::int64_t k) const {
    auto c = coeffs_;
    if (c.empty()) c.push_back(0);
    c[0] = narrow(Int128{c[0]} - k);
    return UniPoly(std::move(c), modulus_);
}

// --- resultants ------------------------------------------------------------

namespace {

using Coeffs = std::vector<std::int64_t>;

void trim(Coeffs& c) {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

Coeffs rem_mod_p(Coeffs a, const Coeffs& b, std::uint32_t p) {
    const std::int64_t inv_lead = static_cast<std::int64_t>(inv_mod(static_cast<std::uint64_t>(b.back()), p));
    while (a.size() >= b.size()) {
        const std::int64_t factor = static_cast<std::int64_t>(Int128{a.back()} * inv_lead % p);
        const std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i)
            a[shift + i] = mod_residue(Int128{a[shift + i]} - Int128{factor} * b[i], p);
        trim(a);
    }
    return a;
}

Int128 resultant_mod_p(Coeffs a, Coeffs b, std::uint32_t p) {
    Int128 acc = 1;
    while (true) {
        const std::size_t m = a.size() - 1, n = b.size() - 1;
        if (n == 0) return acc * static_cast<Int128>(pow_mod(static_cast<std::uint64_t>(b[0]), m, p)) % p;
        if (m == 0) return acc * static_cast<Int128>(pow_mod(static_cast<std::uint64_t>(a[0]), n, p)) % p;
        Coeffs r = rem_mod_p(a, b, p);
        if (r.empty()) return 0;
        const std::size_t k = r.size() - 1;
        if ((m * n) % 2 == 1) acc = (p - acc) % p;
        acc = acc * static_cast<Int128>(pow_mod(static_cast<std::uint64_t>(b.back()), m - k, p)) % p;
        a = std::move(b);
        b = std::move(r);
    }
}

Int128 sylvester_bareiss(const Coeffs& a, const Coeffs& b) {
    const std::size_t m = a.size() - 1, n = b.size() - 1, size = m + n;
    if (size == 0) return 1;
    std::vector<std::vector<Int128>> mat(size, std::vector<Int128>(size, 0));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t i = 0; i <= m; ++i) mat[r][r + i] = a[m - i];
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t i = 0; i <= n; ++i) mat[n + r][r + i] = b[n - i];
    Int128 prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k < size; ++k) {
        std::size_t piv = k;
        while (piv < size && mat[piv][k] == 0) ++piv;
        if (piv == size) return 0;
        if (piv != k) {
            std::swap(mat[piv], mat[k]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < size; ++i) {
            for (std::size_t j = k + 1; j < size; ++j) {
                const Int128 num = checked_add(checked_mul(mat[i][j], mat[k][k]), -checked_mul(mat[i][k], mat[k][j]));
                mat[i][j] = num / prev;
            }
            mat[i][k] = 0;
        }
        prev = mat[k][k];
    }
    return sign * mat[size - 1][size - 1];
}

} // namespace

Int128 resultant_uni(const UniPoly& a, const UniPoly& b) {
    if (a.is_zero() || b.is_zero()) throw InputError("resultant of a zero polynomial");
    if (a.modulus() != b.modulus()) throw InputError("resultant operands live in different rings");
    if (a.modulus()) return resultant_mod_p(a.coeffs(), b.coeffs(), a.modulus());
    return sylvester_bareiss(a.coeffs(), b.coeffs());
}

Int128 discriminant_uni(const UniPoly& a) {
    const int d = a.degree();
    if (d < 1) throw InputError("discriminant needs degree >= 1");
    const UniPoly da = a.derivative();
    const std::uint32_t p = a.modulus();
    const Int128 sign = ((d * (d - 1) / 2) % 2 == 0) ? 1 : -1;
    if (p) {
        if (da.is_zero()) return 0;
        Int128 res = resultant_uni(a, da);
        res = res * static_cast<Int128>(pow_mod(static_cast<std::uint64_t>(a.lead()), (d - 1) - da.degree(), p)) % p;
        res = res * static_cast<Int128>(inv_mod(static_cast<std::uint64_t>(a.lead()), p)) % p;
        return static_cast<Int128>(mod_residue(sign * res, p));
    }
    const Int128 res = resultant_uni(a, da);
    if (res % a.lead() != 0) throw DegenerateError("resultant not divisible by leading coefficient");
    return sign * (res / a.lead());
}

Int128 discriminant_mod(const UniPoly& a, std::uint32_t p) {
    if (a.lead() % static_cast<std::int64_t>(p) == 0)
        throw DomainError("leading coefficient vanishes mod " + std::to_string(p));
    return discriminant_uni(a.reduce_mod(p));
}

UniPoly critical_value_poly(const UniPoly& h) {
    const std::uint32_t p = h.modulus();
    if (p == 0) throw InputError("critical_value_poly expects a polynomial over F_p");
    const int d = h.degree();
    if (d < 2) throw InputError("critical_value_poly needs degree >= 2");
    const UniPoly dh = h.derivative();
    if (dh.is_zero()) throw DegenerateError("derivative vanishes identically mod " + std::to_string(p));
    if (static_cast<std::uint32_t>(d) > p) throw InputError("too few interpolation points in F_p");

    // r(s) has degree <= deg h' <= d-1, so d samples determine it.
    std::vector<std::int64_t> xs(d), ys(d);
    for (int j = 0; j < d; ++j) {
        xs[j] = j;
        ys[j] = static_cast<std::int64_t>(resultant_uni(h.minus_constant(j), dh));
    }
    Coeffs result(d, 0);
    for (int j = 0; j < d; ++j) {
        Coeffs basis{1};
        Int128 denom = 1;
        for (int m = 0; m < d; ++m) {
            if (m == j) continue;
            Coeffs next(basis.size() + 1, 0);
            for (std::size_t i = 0; i < basis.size(); ++i) {
                next[i + 1] = mod_residue(Int128{next[i + 1]} + basis[i], p);
                next[i] = mod_residue(Int128{next[i]} - Int128{basis[i]} * xs[m], p);
            }
            basis = std::move(next);
            denom = mod_residue(denom * (xs[j] - xs[m]), p);
        }
        const Int128 scale = Int128{ys[j]} * static_cast<Int128>(inv_mod(static_cast<std::uint64_t>(denom), p)) % p;
        for (std::size_t i = 0; i < basis.size(); ++i)
            result[i] = mod_residue(Int128{result[i]} + scale * basis[i], p);
    }
    return UniPoly(std::move(result), p);
}

std::vector<Elem> roots_mod_p(const UniPoly& poly) {
    const std::uint32_t p = poly.modulus();
    if (p == 0) throw InputError("roots_mod_p expects a polynomial over F_p");
    if (poly.is_zero()) throw DegenerateError("every element is a root of the zero polynomial");
    std::vector<Elem> roots;
    for (std::uint32_t x = 0; x < p; ++x)
        if (poly.eval(x) == 0) roots.push_back(x);
    return roots;
}

// --- text format -----------------------------------------------------------

namespace {

struct ParsedTerm {
    std::int64_t coeff = 1;
    std::map<std::size_t, std::uint32_t> powers;
};

class Parser {
public:
    Parser(std::string_view text, bool univariate) : text_(text), univariate_(univariate) {}

    std::vector<ParsedTerm> parse() {
        std::vector<ParsedTerm> terms;
        skip_ws();
        if (at_end()) fail("empty polynomial");
        bool negative = false;
        if (peek() == '+' || peek() == '-') {
            negative = peek() == '-';
            ++pos_;
            skip_ws();
        }
        terms.push_back(term(negative));
        while (true) {
            skip_ws();
            if (at_end()) break;
            if (peek() != '+' && peek() != '-') fail("expected '+' or '-'");
            negative = peek() == '-';
            ++pos_;
            skip_ws();
            terms.push_back(term(negative));
        }
        return terms;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(pos_, what); }
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }
    void skip_ws() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    }
    bool starts_factor() const {
        const char c = peek();
        return std::isdigit(static_cast<unsigned char>(c)) || c == (univariate_ ? 'T' : 'X');
    }

    std::uint64_t integer() {
        if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected integer");
        std::uint64_t v = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            v = v * 10 + static_cast<std::uint64_t>(peek() - '0');
            if (v > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) fail("integer too large");
            ++pos_;
        }
        return v;
    }

    void factor(ParsedTerm& t) {
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            t.coeff = narrow(checked_mul(t.coeff, static_cast<Int128>(integer())));
            return;
        }
        std::size_t index = 0;
        if (univariate_) {
            if (peek() != 'T') fail("expected variable T");
            ++pos_;
        } else {
            if (peek() != 'X') fail("expected variable X<index>");
            ++pos_;
            if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected variable index");
            index = static_cast<std::size_t>(integer());
            if (index > 64) fail("variable index too large");
        }
        std::uint32_t exp = 1;
        if (peek() == '^') {
            ++pos_;
            if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected exponent");
            const auto e = integer();
            if (e > 1000) fail("exponent too large");
            exp = static_cast<std::uint32_t>(e);
        }
        t.powers[index] += exp;
    }

    ParsedTerm term(bool negative) {
        ParsedTerm t;
        if (!starts_factor()) fail("expected term");
        factor(t);
        while (true) {
            const std::size_t save = pos_;
            skip_ws();
            if (peek() == '*') {
                ++pos_;
                skip_ws();
                if (!starts_factor()) fail("expected factor after '*'");
                factor(t);
            } else if (starts_factor()) {
                factor(t);
            } else {
                pos_ = save;
                break;
            }
        }
        if (negative) t.coeff = -t.coeff;
        return t;
    }

    std::string_view text_;
    bool univariate_;
    std::size_t pos_ = 0;
};

} // namespace

MultiPoly parse_multi(std::string_view text, std::optional<std::size_t> n_vars) {
    const auto terms = Parser(text, false).parse();
    std::size_t lo = std::numeric_limits<std::size_t>::max(), hi = 0;
    bool any_var = false;
    for (const auto& t : terms)
        for (const auto& [i, e] : t.powers) {
            lo = std::min(lo, i);
            hi = std::max(hi, i);
            any_var = true;
        }
    unsigned base = 0;
    std::size_t arity = 1;
    if (n_vars) {
        arity = *n_vars;
        if (any_var && hi >= arity) throw InputError("variable X" + std::to_string(hi) + " exceeds arity");
    } else if (any_var) {
        base = lo == 0 ? 0 : 1;
        arity = hi - base + 1;
    }
    MultiPoly out(arity);
    out.set_var_base(base);
    for (const auto& t : terms) {
        Exponents e(arity, 0);
        for (const auto& [i, p] : t.powers) e[i - base] = p;
        out.add_term(std::move(e), t.coeff);
    }
    return out;
}

UniPoly parse_uni(std::string_view text) {
    const auto terms = Parser(text, true).parse();
    std::vector<std::int64_t> coeffs;
    for (const auto& t : terms) {
        const std::uint32_t e = t.powers.empty() ? 0 : t.powers.begin()->second;
        if (coeffs.size() <= e) coeffs.resize(e + 1, 0);
        coeffs[e] = narrow(Int128{coeffs[e]} + t.coeff);
    }
    return UniPoly(std::move(coeffs));
}

namespace {

void append_term(std::string& out, std::int64_t c, const std::string& monomial) {
    const bool neg = c < 0;
    const std::string mag = to_string(neg ? -Int128{c} : Int128{c});
    if (out.empty())
        out += neg ? "-" : "";
    else
        out += neg ? " - " : " + ";
    if (monomial.empty())
        out += mag;
    else if (mag == "1")
        out += monomial;
    else
        out += mag + "*" + monomial;
}

} // namespace

std::string to_string(const MultiPoly& poly) {
    if (poly.is_zero()) return "0";
    std::vector<std::pair<Exponents, std::int64_t>> sorted(poly.terms().begin(), poly.terms().end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        const unsigned da = total_degree(a.first), db = total_degree(b.first);
        return da != db ? da > db : a.first > b.first;
    });
    std::string out;
    for (const auto& [e, c] : sorted) {
        std::string mono;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += "X" + std::to_string(i + poly.var_base());
            if (e[i] > 1) mono += "^" + std::to_string(e[i]);
        }
        append_term(out, c, mono);
    }
    return out;
}

std::string to_string(const UniPoly& poly) {
    if (poly.is_zero()) return "0";
    std::string out;
    for (int i = poly.degree(); i >= 0; --i) {
        const std::int64_t c = poly.coeff(static_cast<std::size_t>(i));
        if (c == 0) continue;
        std::string mono = i == 0 ? "" : (i == 1 ? "T" : "T^" + std::to_string(i));
        append_term(out, c, mono);
    }
    return out;
}

} // namespace xnt
