#include "su2flux/scalars/rational_function.hpp"

#include <bit>

#include "su2flux/errors.hpp"

namespace su2flux {

RationalFunction::RationalFunction(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw DomainError("rational function with zero denominator");
    normalize();
}

void RationalFunction::normalize() {
    if (num_.is_zero()) {
        den_ = Polynomial(1);
        return;
    }
    if (den_.is_constant()) {
        num_ *= mpq_class(1 / den_.constant_value());
        den_ = Polynomial(1);
        return;
    }
    Polynomial g = Polynomial::gcd(num_, den_);
    if (!g.is_one()) {
        num_ = num_.divide_exact(g);
        den_ = den_.divide_exact(g);
    }
    mpq_class lead = den_.leading_term().coeff;
    if (lead != 1) {
        mpq_class inv = 1 / lead;
        num_ *= inv;
        den_ *= inv;
    }
}

RationalFunction RationalFunction::operator-() const {
    RationalFunction r = *this;
    r.num_ = -r.num_;
    return r;
}

RationalFunction& RationalFunction::operator+=(const RationalFunction& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    if (den_ == o.den_) {
        num_ += o.num_;
        if (den_.is_one()) return *this;
    } else {
        num_ = num_ * o.den_ + o.num_ * den_;
        den_ *= o.den_;
    }
    normalize();
    return *this;
}

RationalFunction& RationalFunction::operator-=(const RationalFunction& o) {
    return *this += -o;
}

RationalFunction& RationalFunction::operator*=(const RationalFunction& o) {
    if (is_zero() || o.is_zero()) return *this = RationalFunction();
    if (den_.is_one() && o.den_.is_one()) {
        num_ *= o.num_;
        return *this;
    }
    // Cross-cancel first so intermediate products stay small.
    Polynomial g1 = Polynomial::gcd(num_, o.den_);
    Polynomial g2 = Polynomial::gcd(o.num_, den_);
    Polynomial n = num_.divide_exact(g1) * o.num_.divide_exact(g2);
    Polynomial d = den_.divide_exact(g2) * o.den_.divide_exact(g1);
    num_ = std::move(n);
    den_ = std::move(d);
    mpq_class lead = den_.leading_term().coeff;
    if (lead != 1) {
        mpq_class inv = 1 / lead;
        num_ *= inv;
        den_ *= inv;
    }
    return *this;
}

RationalFunction RationalFunction::inverse() const {
    if (is_zero()) throw DomainError("division by zero");
    return RationalFunction(den_, num_);
}

RationalFunction& RationalFunction::operator/=(const RationalFunction& o) {
    return *this *= o.inverse();
}

bool RationalFunction::is_atomic() const {
    return num_.size() <= 1;
}

std::string RationalFunction::to_string(std::span<const std::string> names) const {
    std::string n = num_.to_string(names);
    if (den_.is_one()) return n;
    if (num_.size() > 1) n = "(" + n + ")";
    std::string d = den_.to_string(names);
    bool den_is_power = den_.is_monomial() && den_.leading_term().coeff == 1 &&
                        std::popcount(den_.variable_mask()) == 1;
    if (!den_is_power) d = "(" + d + ")";
    return n + "/" + d;
}

}  // namespace su2flux
