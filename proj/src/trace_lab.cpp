#include "xnt/trace_lab.hpp"

#include <cmath>
#include <iomanip>
#include <string>

#include "xnt/error.hpp"

namespace xnt {

namespace {

std::vector<Complex> psi_table(const ExtField& field) {
    std::vector<Complex> psi(field.size());
    std::vector<Complex> roots(field.p());
    for (std::uint32_t r = 0; r < field.p(); ++r) roots[r] = root_of_unity(r, field.p());
    for (Elem x = 0; x < field.size(); ++x) psi[x] = roots[field.trace(x)];
    return psi;
}

void require_same_size(const TraceFunction& t, const ExtField& field) {
    if (t.q() != field.size())
        throw InputError("trace function on F_" + std::to_string(t.q()) + " used with F_" + std::to_string(field.size()));
}

} // namespace

TraceFunction constant_trace(const ExtField& field, Complex value) {
    return TraceFunction("const", std::vector<Complex>(field.size(), value), std::abs(value));
}

TraceFunction delta_trace(const ExtField& field, Elem at) {
    std::vector<Complex> v(field.size(), 0.0);
    v.at(at) = 1.0;
    return TraceFunction("delta[" + std::to_string(at) + "]", std::move(v), 1.0);
}

TraceFunction legendre_symbol(const PrimeField& field) {
    if (field.p() == 2) throw InputError("Legendre symbol needs an odd prime");
    const auto chi = mult_char(field, 2, 1);
    return TraceFunction("legendre", chi.values(), 1.0);
}

TraceFunction additive_trace(const ExtField& field) { return TraceFunction("psi", psi_table(field), 1.0); }

TraceFunction kloosterman(unsigned m, const ExtField& field) {
    if (m < 1) throw InputError("Kloosterman order must be >= 1");
    const Elem q = field.size();
    const auto psi = psi_table(field);
    std::vector<Complex> conv(q, 0.0);
    for (Elem a = 1; a < q; ++a) conv[a] = psi[a];
    std::vector<Elem> inverse(q, 0);
    for (Elem y = 1; y < q; ++y) inverse[y] = field.inv(y);
    for (unsigned step = 1; step < m; ++step) {
        std::vector<Complex> next(q, 0.0);
        for (Elem a = 1; a < q; ++a) {
            Complex acc = 0.0;
            for (Elem y = 1; y < q; ++y) acc += conv[field.mul(a, inverse[y])] * psi[y];
            next[a] = acc;
        }
        conv = std::move(next);
    }
    const double scale = (m % 2 == 1 ? 1.0 : -1.0) / std::pow(static_cast<double>(q), (m - 1) / 2.0);
    for (auto& v : conv) v *= scale;
    return TraceFunction("Kl_" + std::to_string(m), std::move(conv), static_cast<double>(m));
}

TraceFunction fourier_transform(const TraceFunction& t, const ExtField& field, bool conjugate_kernel) {
    require_same_size(t, field);
    const Elem q = field.size();
    auto psi = psi_table(field);
    if (conjugate_kernel)
        for (auto& z : psi) z = std::conj(z);
    const double norm = -1.0 / std::sqrt(static_cast<double>(q));
    std::vector<Complex> out(q);
    for (Elem y = 0; y < q; ++y) {
        Complex acc = 0.0;
        for (Elem x = 0; x < q; ++x) acc += psi[field.mul(x, y)] * t(x);
        out[y] = norm * acc;
    }
    return TraceFunction((conjugate_kernel ? "FTbar(" : "FT(") + t.label() + ")", std::move(out),
                         std::sqrt(static_cast<double>(q)) * t.sup_bound());
}

TraceFunction te_transform(const TraceFunction& t, unsigned e, const ExtField& field) {
    require_same_size(t, field);
    if (e < 1) throw InputError("T_e needs e >= 1");
    const Elem q = field.size();
    const auto psi = psi_table(field);
    std::vector<Elem> powers(q);
    for (Elem z = 0; z < q; ++z) powers[z] = field.pow(z, e);
    const double norm = -1.0 / std::sqrt(static_cast<double>(q));
    std::vector<Complex> out(q);
    for (Elem y = 0; y < q; ++y) {
        Complex acc = 0.0;
        for (Elem z = 0; z < q; ++z) acc += psi[field.mul(powers[z], y)] * t(z);
        out[y] = norm * acc;
    }
    return TraceFunction("T_" + std::to_string(e) + "(" + t.label() + ")", std::move(out),
                         std::sqrt(static_cast<double>(q)) * t.sup_bound());
}

TraceFunction pullback_power(const TraceFunction& t, unsigned d, const ExtField& field) {
    require_same_size(t, field);
    std::vector<Complex> out(field.size());
    for (Elem y = 0; y < field.size(); ++y) out[y] = t(field.pow(y, d));
    return TraceFunction("[x^" + std::to_string(d) + "]^*" + t.label(), std::move(out), t.sup_bound());
}

TraceFunction pullback_scale(const TraceFunction& t, Elem alpha, const ExtField& field) {
    require_same_size(t, field);
    if (alpha == 0) throw DomainError("scaling pullback by 0");
    std::vector<Complex> out(field.size());
    for (Elem y = 0; y < field.size(); ++y) out[y] = t(field.mul(alpha, y));
    return TraceFunction("[x" + std::to_string(alpha) + "]^*" + t.label(), std::move(out), t.sup_bound());
}

double second_moment(const TraceFunction& t) {
    double acc = 0.0;
    for (const auto& v : t.values()) acc += std::norm(v);
    return acc / t.q();
}

Complex correlation(const TraceFunction& t1, const TraceFunction& t2) {
    if (t1.q() != t2.q()) throw InputError("correlation of trace functions on different fields");
    Complex acc = 0.0;
    for (Elem x = 0; x < t1.q(); ++x) acc += t1(x) * std::conj(t2(x));
    return acc / static_cast<double>(t1.q());
}

void write_csv(const TraceFunction& t, std::ostream& out) {
    out << "a,re,im\n" << std::setprecision(17);
    for (Elem a = 0; a < t.q(); ++a) out << a << ',' << t(a).real() << ',' << t(a).imag() << '\n';
}

} // namespace xnt
