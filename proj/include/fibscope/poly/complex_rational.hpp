#pragma once

#include <complex>
#include <string>

#include <gmpxx.h>

namespace fibscope {

using Rational = mpq_class;

/// Exact element of Q(i), stored as a pair of canonical GMP rationals.
struct ComplexRational {
    Rational re;
    Rational im;

    ComplexRational() = default;
    ComplexRational(Rational r) : re(std::move(r)), im(0) {}
    ComplexRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    ComplexRational(long r) : re(r), im(0) {}

    static ComplexRational unit() { return {Rational(0), Rational(1)}; }

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    bool is_real() const { return sgn(im) == 0; }

    ComplexRational conj() const { return {re, -im}; }
    Rational norm2() const { return re * re + im * im; }

    ComplexRational& operator+=(const ComplexRational& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    ComplexRational& operator-=(const ComplexRational& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    ComplexRational& operator*=(const ComplexRational& o) {
        Rational r = re * o.re - im * o.im;
        Rational i = re * o.im + im * o.re;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }
    // Division by zero is a precondition violation; callers check is_zero().
    ComplexRational& operator/=(const ComplexRational& o) {
        Rational d = o.norm2();
        Rational r = (re * o.re + im * o.im) / d;
        Rational i = (im * o.re - re * o.im) / d;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }

    friend ComplexRational operator+(ComplexRational a, const ComplexRational& b) { return a += b; }
    friend ComplexRational operator-(ComplexRational a, const ComplexRational& b) { return a -= b; }
    friend ComplexRational operator*(ComplexRational a, const ComplexRational& b) { return a *= b; }
    friend ComplexRational operator/(ComplexRational a, const ComplexRational& b) { return a /= b; }
    friend ComplexRational operator-(const ComplexRational& a) { return {-a.re, -a.im}; }

    friend bool operator==(const ComplexRational& a, const ComplexRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const ComplexRational& a, const ComplexRational& b) { return !(a == b); }

    std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }
};

ComplexRational pow(ComplexRational base, unsigned exponent);

/// Exact conversion of a finite double to a rational.
Rational rational_from_double(double value);

/// Text form used by the canonical polynomial printer: "3/2", "-i", "(1/2-3*i)".
/// When `as_factor` is set, composite values are parenthesized.
std::string to_string(const ComplexRational& c, bool as_factor = false);

}  // namespace fibscope
