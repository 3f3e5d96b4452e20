#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <complex>
#include <cstdint>
#include <ostream>
#include <string>

namespace fredpair {

using Rational = boost::multiprecision::mpq_rational;

// Gaussian rational: exact complex scalar for the exact backend.
struct GaussRat {
    Rational re{0};
    Rational im{0};

    GaussRat() = default;
    GaussRat(Rational r) : re(std::move(r)) {}
    GaussRat(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    GaussRat(long r) : re(r) {}
    GaussRat(long r, long i) : re(r), im(i) {}

    bool isZero() const { return re == 0 && im == 0; }

    GaussRat conj() const { return {re, -im}; }

    // |z|^2, exact.
    Rational normSq() const { return re * re + im * im; }

    friend GaussRat operator+(const GaussRat& a, const GaussRat& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend GaussRat operator-(const GaussRat& a, const GaussRat& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend GaussRat operator-(const GaussRat& a) { return {-a.re, -a.im}; }
    friend GaussRat operator*(const GaussRat& a, const GaussRat& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend GaussRat operator/(const GaussRat& a, const GaussRat& b) {
        Rational n = b.normSq();
        GaussRat p = a * b.conj();
        return {p.re / n, p.im / n};
    }
    GaussRat& operator+=(const GaussRat& o) { *this = *this + o; return *this; }
    GaussRat& operator-=(const GaussRat& o) { *this = *this - o; return *this; }
    GaussRat& operator*=(const GaussRat& o) { *this = *this * o; return *this; }
    GaussRat& operator/=(const GaussRat& o) { *this = *this / o; return *this; }

    friend bool operator==(const GaussRat& a, const GaussRat& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussRat& a, const GaussRat& b) { return !(a == b); }

    std::complex<double> toComplex() const {
        return {static_cast<double>(re), static_cast<double>(im)};
    }
};

inline std::ostream& operator<<(std::ostream& os, const GaussRat& z) {
    os << z.re.str();
    if (z.im != 0) {
        os << (z.im > 0 ? "+" : "") << z.im.str() << "i";
    }
    return os;
}

} // namespace fredpair
