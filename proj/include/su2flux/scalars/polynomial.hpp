#pragma once

#include <gmpxx.h>

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace su2flux {

inline constexpr int kMaxVariables = 12;

/// Exponent vector over at most kMaxVariables polynomial variables.
class Monomial {
public:
    Monomial() = default;

    static Monomial variable(int index, unsigned power = 1);

    unsigned exponent(int var) const { return exps_[static_cast<std::size_t>(var)]; }
    unsigned degree() const { return degree_; }
    bool is_one() const { return degree_ == 0; }

    Monomial operator*(const Monomial& other) const;
    /// Precondition: `other.divides(*this)`.
    Monomial operator/(const Monomial& other) const;
    bool divides(const Monomial& other) const;
    Monomial without(int var) const;
    Monomial with_exponent(int var, unsigned power) const;

    static Monomial gcd(const Monomial& a, const Monomial& b);

    friend bool operator==(const Monomial&, const Monomial&) = default;

    /// Graded lexicographic order, variable 0 most significant.
    friend std::strong_ordering grlex(const Monomial& a, const Monomial& b);

private:
    std::array<std::uint16_t, kMaxVariables> exps_{};
    std::uint16_t degree_ = 0;
};

struct GrlexDescending {
    bool operator()(const Monomial& a, const Monomial& b) const { return grlex(a, b) > 0; }
};

/// Sparse multivariate polynomial with rational coefficients. Terms are kept
/// sorted by descending graded-lex order with no zero coefficients.
class Polynomial {
public:
    struct Term {
        Monomial mono;
        mpq_class coeff;
    };

    Polynomial() = default;
    Polynomial(const mpq_class& c);  // NOLINT(google-explicit-constructor)
    Polynomial(long c) : Polynomial(mpq_class(c)) {}  // NOLINT(google-explicit-constructor)

    static Polynomial variable(int index);
    static Polynomial monomial(const Monomial& m, const mpq_class& c);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }
    bool is_monomial() const { return terms_.size() == 1; }
    bool is_one() const;

    /// Constant term value; only meaningful when is_constant().
    mpq_class constant_value() const;

    const Term& leading_term() const { return terms_.front(); }
    std::span<const Term> terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    unsigned total_degree() const;
    unsigned degree_in(int var) const;
    /// Bitmask of the variables that occur in the polynomial.
    std::uint32_t variable_mask() const;

    Polynomial operator-() const;
    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(const Polynomial& o);
    Polynomial& operator*=(const mpq_class& c);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(Polynomial a, const mpq_class& c) { return a *= c; }

    Polynomial pow(unsigned e) const;
    Polynomial times_monomial(const Monomial& m) const;

    /// Exact quotient; throws DomainError when `divisor` does not divide.
    Polynomial divide_exact(const Polynomial& divisor) const;

    /// Scales so that the leading coefficient is 1 (zero stays zero).
    Polynomial monic() const;

    /// gcd normalized to be monic; gcd(0, 0) = 0.
    static Polynomial gcd(const Polynomial& a, const Polynomial& b);

    /// Exact square root with positive leading coefficient, if one exists.
    std::optional<Polynomial> exact_sqrt() const;

    /// Replaces variable `var` by a rational value.
    Polynomial substitute(int var, const mpq_class& value) const;

    /// Coefficients with respect to `var`: result[k] is the coefficient of var^k.
    std::vector<Polynomial> coefficients_in(int var) const;

    friend bool operator==(const Polynomial& a, const Polynomial& b);

    std::string to_string(std::span<const std::string> names) const;

private:
    std::vector<Term> terms_;

    void canonicalize_from_unsorted();
};

}  // namespace su2flux
