#include "kostov/coefficient.hpp"

#include <cmath>

namespace kostov {

ExactComplex ExactComplex::inverse() const
{
    if (is_zero()) throw AlgebraError("non-unit: inverse of zero");
    if (sgn(im_) == 0) return ExactComplex(Rational(1) / re_);
    Rational n = norm();
    return {re_ / n, -im_ / n};
}

ExactComplex& ExactComplex::operator*=(const ExactComplex& o)
{
    if (sgn(im_) == 0 && sgn(o.im_) == 0) {
        re_ *= o.re_;
        return *this;
    }
    Rational r = re_ * o.re_ - im_ * o.im_;
    Rational i = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
}

void add_product(ExactComplex& acc, const ExactComplex& a, const ExactComplex& b)
{
    thread_local mpq_class tmp;
    mpq_mul(tmp.get_mpq_t(), a.re_.get_mpq_t(), b.re_.get_mpq_t());
    mpq_add(acc.re_.get_mpq_t(), acc.re_.get_mpq_t(), tmp.get_mpq_t());
    const bool a_im = sgn(a.im_) != 0;
    const bool b_im = sgn(b.im_) != 0;
    if (!a_im && !b_im) return;
    if (a_im && b_im) {
        mpq_mul(tmp.get_mpq_t(), a.im_.get_mpq_t(), b.im_.get_mpq_t());
        mpq_sub(acc.re_.get_mpq_t(), acc.re_.get_mpq_t(), tmp.get_mpq_t());
    }
    if (b_im) {
        mpq_mul(tmp.get_mpq_t(), a.re_.get_mpq_t(), b.im_.get_mpq_t());
        mpq_add(acc.im_.get_mpq_t(), acc.im_.get_mpq_t(), tmp.get_mpq_t());
    }
    if (a_im) {
        mpq_mul(tmp.get_mpq_t(), a.im_.get_mpq_t(), b.re_.get_mpq_t());
        mpq_add(acc.im_.get_mpq_t(), acc.im_.get_mpq_t(), tmp.get_mpq_t());
    }
}

std::string ExactComplex::to_string() const { return re_.get_str() + " " + im_.get_str(); }

Rational rational_from_double(double v)
{
    if (!std::isfinite(v)) throw AlgebraError("cannot convert non-finite double to a rational");
    Rational q(v); // mpq_set_d is exact
    q.canonicalize();
    return q;
}

ExactComplex exact_from_cd(Cd z) { return {rational_from_double(z.real()), rational_from_double(z.imag())}; }

} // namespace kostov
