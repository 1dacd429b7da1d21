#pragma once

#include <gmpxx.h>

#include <string>

namespace xphase {

/// Exact Gaussian rational re + im*i. All arithmetic is exact; both
/// components are kept in GMP's canonical reduced form (coprime
/// numerator/denominator, positive denominator).
class Scalar {
public:
    Scalar() : re_(0), im_(0) {}
    Scalar(long value) : re_(value), im_(0) {}  // NOLINT: implicit by design
    Scalar(mpq_class re) : re_(std::move(re)), im_(0) {}
    Scalar(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {}

    static Scalar imaginary_unit() { return Scalar(mpq_class(0), mpq_class(1)); }
    static Scalar rational(long num, long den) {
        mpq_class value(num, den);
        value.canonicalize();
        return Scalar(std::move(value));
    }

    const mpq_class& re() const { return re_; }
    const mpq_class& im() const { return im_; }

    bool is_zero() const { return re_ == 0 && im_ == 0; }
    bool is_one() const { return re_ == 1 && im_ == 0; }
    bool is_real() const { return im_ == 0; }

    Scalar conj() const { return Scalar(re_, -im_); }

    /// Squared modulus (a rational, exact).
    mpq_class norm() const { return re_ * re_ + im_ * im_; }

    Scalar operator-() const { return Scalar(-re_, -im_); }

    Scalar& operator+=(const Scalar& o) {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    Scalar& operator-=(const Scalar& o) {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    Scalar& operator*=(const Scalar& o) {
        mpq_class r = re_ * o.re_ - im_ * o.im_;
        mpq_class i = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        im_ = std::move(i);
        return *this;
    }
    Scalar& operator/=(const Scalar& o);

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

    friend bool operator==(const Scalar& a, const Scalar& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    /// Deterministic total order (lexicographic on re, im); used for pivoting
    /// and stable output, not a ring order.
    static int compare(const Scalar& a, const Scalar& b);

    /// True when the canonical printer spells this value with a leading minus.
    bool display_negative() const { return re_ < 0 || (re_ == 0 && im_ < 0); }

    /// Plain text form: "3/2", "i", "-i", "3/2*i", "1+i", "1-2/3*i".
    std::string str() const;

    double to_double() const { return re_.get_d() + 0.0 * im_.get_d(); }

private:
    mpq_class re_;
    mpq_class im_;
};

}  // namespace xphase
