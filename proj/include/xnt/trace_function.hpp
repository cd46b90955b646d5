#ifndef XNT_TRACE_FUNCTION_HPP
#define XNT_TRACE_FUNCTION_HPP

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace xnt {

using Complex = std::complex<double>;

/// A complex-valued function on F_q stored as an explicit table indexed by the
/// element encoding of the field it was built over.
///
/// `sup_bound` is the declared bound on max |t(x)|; the constructor rejects
/// tables that exceed it by more than 1e-9.
class TraceFunction {
public:
    TraceFunction(std::string label, std::vector<Complex> values, double sup_bound);

    std::uint32_t q() const noexcept { return static_cast<std::uint32_t>(values_.size()); }
    const std::vector<Complex>& values() const noexcept { return values_; }
    const std::string& label() const noexcept { return label_; }
    double sup_bound() const noexcept { return sup_bound_; }

    const Complex& operator()(std::uint32_t x) const { return values_[x]; }

    double max_abs() const noexcept;
    TraceFunction conjugate() const;

private:
    std::string label_;
    std::vector<Complex> values_;
    double sup_bound_;
};

} // namespace xnt

#endif
