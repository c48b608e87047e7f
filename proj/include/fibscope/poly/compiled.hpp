#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "fibscope/poly/mixed_poly.hpp"
#include "fibscope/poly/real_poly.hpp"

namespace fibscope {

/// Value of a polynomial at a point together with the sum of absolute term
/// magnitudes, the natural scale for relative residuals.
struct ScaledValue {
    std::complex<double> value;
    double scale = 0.0;
};

/// Double-precision evaluator for a MixedPoly. Immutable after construction.
class CompiledMixed {
public:
    CompiledMixed() = default;
    explicit CompiledMixed(const MixedPoly& p);

    std::size_t n() const { return n_; }
    bool is_zero() const { return coeffs_.empty(); }

    std::complex<double> operator()(std::span<const std::complex<double>> z) const { return eval(z).value; }
    ScaledValue eval(std::span<const std::complex<double>> z) const;

private:
    std::size_t n_ = 0;
    std::vector<std::uint32_t> max_exp_;  // per exponent slot
    std::vector<std::complex<double>> coeffs_;
    std::vector<std::uint32_t> exps_;  // 2n entries per term
};

/// Double-precision evaluator for a RealPoly.
class CompiledReal {
public:
    CompiledReal() = default;
    explicit CompiledReal(const RealPoly& p);

    double operator()(std::span<const double> x) const;

private:
    std::size_t m_ = 0;
    std::vector<std::uint32_t> max_exp_;
    std::vector<double> coeffs_;
    std::vector<std::uint32_t> exps_;
};

/// Complex point from interleaved real coordinates (x1 + i x2, x3 + i x4, ...).
std::vector<std::complex<double>> to_complex_point(std::span<const double> x);
std::vector<double> to_real_point(std::span<const std::complex<double>> z);

}  // namespace fibscope
