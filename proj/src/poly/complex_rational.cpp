#include "fibscope/poly/complex_rational.hpp"

#include <cmath>
#include <stdexcept>

namespace fibscope {

ComplexRational pow(ComplexRational base, unsigned exponent) {
    ComplexRational result(1);
    while (exponent > 0) {
        if (exponent & 1U) result *= base;
        exponent >>= 1U;
        if (exponent > 0) base *= base;
    }
    return result;
}

Rational rational_from_double(double value) {
    if (!std::isfinite(value)) throw std::invalid_argument("cannot convert non-finite double to rational");
    Rational q(value);  // mpq_set_d is exact
    q.canonicalize();
    return q;
}

std::string to_string(const ComplexRational& c, bool as_factor) {
    if (c.is_real()) {
        std::string s = c.re.get_str();
        if (as_factor && sgn(c.re) < 0) return "(" + s + ")";
        return s;
    }
    std::string imag;
    if (c.im == 1) {
        imag = "i";
    } else if (c.im == -1) {
        imag = "-i";
    } else {
        imag = c.im.get_str() + "*i";
    }
    if (sgn(c.re) == 0) {
        if (as_factor && sgn(c.im) < 0) return "(" + imag + ")";
        return imag;
    }
    std::string s = c.re.get_str();
    if (sgn(c.im) > 0) s += "+";
    s += imag;
    return "(" + s + ")";
}

}  // namespace fibscope
