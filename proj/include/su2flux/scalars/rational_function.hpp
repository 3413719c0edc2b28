#pragma once

#include <span>
#include <string>

#include "su2flux/scalars/polynomial.hpp"

namespace su2flux {

/// Quotient of polynomials in lowest terms with a monic denominator.
class RationalFunction {
public:
    RationalFunction() : den_(1) {}
    RationalFunction(const mpq_class& c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
    RationalFunction(long c) : num_(c), den_(1) {}              // NOLINT(google-explicit-constructor)
    RationalFunction(Polynomial num) : num_(std::move(num)), den_(1) {}  // NOLINT(google-explicit-constructor)
    /// Throws DomainError when `den` is zero.
    RationalFunction(Polynomial num, Polynomial den);

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }
    bool is_polynomial() const { return den_.is_one(); }
    bool is_constant() const { return num_.is_constant() && den_.is_one(); }
    mpq_class constant_value() const { return num_.constant_value(); }

    RationalFunction operator-() const;
    RationalFunction& operator+=(const RationalFunction& o);
    RationalFunction& operator-=(const RationalFunction& o);
    RationalFunction& operator*=(const RationalFunction& o);
    /// Throws DomainError on division by zero.
    RationalFunction& operator/=(const RationalFunction& o);
    friend RationalFunction operator+(RationalFunction a, const RationalFunction& b) { return a += b; }
    friend RationalFunction operator-(RationalFunction a, const RationalFunction& b) { return a -= b; }
    friend RationalFunction operator*(RationalFunction a, const RationalFunction& b) { return a *= b; }
    friend RationalFunction operator/(RationalFunction a, const RationalFunction& b) { return a /= b; }

    RationalFunction inverse() const;

    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

    /// Bitmask of polynomial variables in the numerator or denominator.
    std::uint32_t variable_mask() const { return num_.variable_mask() | den_.variable_mask(); }

    /// True when the printed form is a single signed product (no top-level sum).
    bool is_atomic() const;

    std::string to_string(std::span<const std::string> names) const;

private:
    Polynomial num_;
    Polynomial den_;

    void normalize();
};

}  // namespace su2flux
