#ifndef XNT_POLY_ALGEBRA_HPP
#define XNT_POLY_ALGEBRA_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xnt/field_core.hpp"

namespace xnt {

using Int128 = __int128;
using Exponents = std::vector<std::uint32_t>;

std::string to_string(Int128 v);

/// Sparse polynomial in n variables over Z (modulus 0) or F_p (modulus p).
/// Zero coefficients are never stored; over F_p coefficients live in [0, p).
///
/// `var_base` only affects printing and parsing: variables are named
/// X{var_base}, X{var_base+1}, ...
class MultiPoly {
public:
    explicit MultiPoly(std::size_t n_vars, std::uint32_t modulus = 0);

    static MultiPoly variable(std::size_t n_vars, std::size_t index, std::uint32_t modulus = 0);
    static MultiPoly constant(std::size_t n_vars, std::int64_t c, std::uint32_t modulus = 0);

    MultiPoly& add_term(Exponents exps, std::int64_t coeff);

    std::size_t n_vars() const noexcept { return n_vars_; }
    std::uint32_t modulus() const noexcept { return modulus_; }
    const std::map<Exponents, std::int64_t>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    unsigned degree() const noexcept;
    bool is_homogeneous() const noexcept;
    std::int64_t height() const noexcept;

    unsigned var_base() const noexcept { return var_base_; }
    void set_var_base(unsigned base) noexcept { var_base_ = base; }

    MultiPoly reduce_mod(std::uint32_t p) const;

    /// Over Z: exact value, OverflowError if it leaves int64.
    /// Over F_p: inputs are reduced and the result is a residue.
    std::int64_t eval(std::span<const std::int64_t> point) const;
    /// Evaluation with integer coefficients mapped into F_q.
    Elem eval(const ExtField& field, std::span<const Elem> point) const;

    MultiPoly derivative(std::size_t var) const;
    std::vector<MultiPoly> gradient() const;

    /// Inserts a new variable at `new_var_index` and pads each term with it up
    /// to the total degree.
    MultiPoly homogenize(std::size_t new_var_index) const;
    /// Sets variable `var` to 1 and removes it.
    MultiPoly dehomogenize(std::size_t var) const;

    /// For F = sum c_i X_i^d returns (c_0..c_{n-1}) with zeros for absent
    /// variables; nullopt for anything else.
    std::optional<std::vector<std::int64_t>> diagonal_coefficients() const;

    friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b);
    friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b);
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
    friend bool operator==(const MultiPoly& a, const MultiPoly& b) noexcept {
        return a.n_vars_ == b.n_vars_ && a.modulus_ == b.modulus_ && a.terms_ == b.terms_;
    }

private:
    std::int64_t normalize(Int128 c) const;
    void check_compatible(const MultiPoly& other) const;

    std::size_t n_vars_;
    std::uint32_t modulus_;
    unsigned var_base_ = 0;
    std::map<Exponents, std::int64_t> terms_;
};

/// A MultiPoly with coefficients mapped into a fixed F_q, flattened for
/// repeated evaluation in point scans.
class FieldEvaluator {
public:
    FieldEvaluator(const MultiPoly& poly, const ExtField& field);

    Elem operator()(std::span<const Elem> point) const;

private:
    const ExtField* field_;
    std::size_t n_vars_;
    std::vector<Elem> coeffs_;
    std::vector<std::uint32_t> exps_;
};

/// Dense univariate polynomial over Z or F_p, coefficients low to high,
/// no trailing zeros.
class UniPoly {
public:
    UniPoly() = default;
    explicit UniPoly(std::vector<std::int64_t> coeffs, std::uint32_t modulus = 0);

    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const noexcept { return coeffs_.empty(); }
    std::int64_t lead() const noexcept { return coeffs_.empty() ? 0 : coeffs_.back(); }
    std::int64_t coeff(std::size_t i) const noexcept { return i < coeffs_.size() ? coeffs_[i] : 0; }
    const std::vector<std::int64_t>& coeffs() const noexcept { return coeffs_; }
    std::uint32_t modulus() const noexcept { return modulus_; }
    std::int64_t height() const noexcept;

    std::int64_t eval(std::int64_t t) const;
    Int128 eval_wide(Int128 t) const;
    Elem eval(const ExtField& field, Elem x) const;

    UniPoly derivative() const;
    UniPoly reduce_mod(std::uint32_t p) const;
    /// this - k
    UniPoly minus_constant(std::int64_t k) const;

    friend bool operator==(const UniPoly&, const UniPoly&) = default;

private:
    std::vector<std::int64_t> coeffs_;
    std::uint32_t modulus_ = 0;
};

/// Res(a, b) with the Sylvester-determinant convention
/// Res(a, b) = lc(a)^deg(b) * prod_{a(x)=0} b(x).
/// Over Z: fraction-free elimination with 128-bit overflow detection.
/// Over F_p: Euclidean remainder sequence; result in [0, p).
Int128 resultant_uni(const UniPoly& a, const UniPoly& b);

/// (-1)^{d(d-1)/2} Res(a, a') / lc(a) with a' taken at formal degree d-1.
Int128 discriminant_uni(const UniPoly& a);

/// Reduces an integer polynomial mod p and takes its discriminant there;
/// DomainError when p divides the leading coefficient.
Int128 discriminant_mod(const UniPoly& a, std::uint32_t p);

/// r(s) = Res_T(h(T) - s, h'(T)) over F_p, by evaluation at deg h points and
/// Lagrange interpolation. Its F_p-roots are the critical values of h that lie
/// in F_p.
UniPoly critical_value_poly(const UniPoly& h);

std::vector<Elem> roots_mod_p(const UniPoly& poly);

// Text format: "X1^2 + 3*X2^2 - 1", "T^3 - 3*T". '*' between factors is optional.
MultiPoly parse_multi(std::string_view text, std::optional<std::size_t> n_vars = std::nullopt);
UniPoly parse_uni(std::string_view text);
std::string to_string(const MultiPoly& poly);
std::string to_string(const UniPoly& poly);

} // namespace xnt

#endif
