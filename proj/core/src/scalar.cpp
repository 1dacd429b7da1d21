#include "xphase/scalar.hpp"

#include "xphase/errors.hpp"

namespace xphase {

Scalar& Scalar::operator/=(const Scalar& o) {
    if (o.is_zero()) {
        throw DomainError("division by zero scalar");
    }
    // (a+bi)/(c+di) = (a+bi)(c-di)/(c^2+d^2)
    mpq_class n = o.norm();
    mpq_class r = (re_ * o.re_ + im_ * o.im_) / n;
    mpq_class i = (im_ * o.re_ - re_ * o.im_) / n;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
}

int Scalar::compare(const Scalar& a, const Scalar& b) {
    int c = cmp(a.re_, b.re_);
    if (c != 0) return c;
    return cmp(a.im_, b.im_);
}

namespace {

std::string rational_str(const mpq_class& q) { return q.get_str(); }

}  // namespace

std::string Scalar::str() const {
    if (im_ == 0) return rational_str(re_);
    std::string imag;
    if (im_ == 1) {
        imag = "i";
    } else if (im_ == -1) {
        imag = "-i";
    } else {
        imag = rational_str(im_) + "*i";
    }
    if (re_ == 0) return imag;
    if (im_ > 0) return rational_str(re_) + "+" + imag;
    // negative imaginary part already carries its sign
    return rational_str(re_) + imag;
}

}  // namespace xphase
