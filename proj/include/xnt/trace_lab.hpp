#ifndef XNT_TRACE_LAB_HPP
#define XNT_TRACE_LAB_HPP

#include <ostream>

#include "xnt/field_core.hpp"
#include "xnt/trace_function.hpp"

namespace xnt {

TraceFunction constant_trace(const ExtField& field, Complex value);
TraceFunction delta_trace(const ExtField& field, Elem at);
TraceFunction legendre_symbol(const PrimeField& field);
/// x -> psi(x) = e(Tr(x)/p).
TraceFunction additive_trace(const ExtField& field);

/// Kl_m(a) = (-1)^{m-1} q^{-(m-1)/2} sum_{y_1...y_m = a, y_i != 0} psi(y_1 + ... + y_m),
/// built by m-1 multiplicative convolutions against psi on the units.
/// Kl_m(0) = 0. Declared sup bound is m.
TraceFunction kloosterman(unsigned m, const ExtField& field);

/// FT(t)(y) = -q^{-1/2} sum_x psi(xy) t(x). With `conjugate_kernel` the kernel
/// is conj(psi); applying the plain transform and then the conjugate one
/// returns t.
TraceFunction fourier_transform(const TraceFunction& t, const ExtField& field, bool conjugate_kernel = false);

/// T_e(t)(y) = -q^{-1/2} sum_z psi(z^e y) t(z). e = 1 is the Fourier transform.
TraceFunction te_transform(const TraceFunction& t, unsigned e, const ExtField& field);

/// y -> t(y^d)
TraceFunction pullback_power(const TraceFunction& t, unsigned d, const ExtField& field);
/// y -> t(alpha y), alpha != 0
TraceFunction pullback_scale(const TraceFunction& t, Elem alpha, const ExtField& field);

/// (1/q) sum_x |t(x)|^2
double second_moment(const TraceFunction& t);
/// (1/q) sum_x t1(x) conj(t2(x))
Complex correlation(const TraceFunction& t1, const TraceFunction& t2);

/// Rows "a,re,im" preceded by a header line.
void write_csv(const TraceFunction& t, std::ostream& out);

} // namespace xnt

#endif
