#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "su2flux/scalars/rational_function.hpp"

namespace su2flux {

class ParameterContext;
using ContextPtr = std::shared_ptr<const ParameterContext>;

inline constexpr int kMaxQuadratic = 16;

/// Real element of the quadratic tower: a sum of square-root monomials
/// (products of distinct quadratic parameters, encoded as a bitmask) with
/// rational-function coefficients. Terms are sorted by mask, none zero.
class TowerElement {
public:
    struct Term {
        std::uint32_t mask;
        RationalFunction coeff;
    };

    TowerElement() = default;
    TowerElement(RationalFunction base);  // NOLINT(google-explicit-constructor)
    static TowerElement sqrt_monomial(std::uint32_t mask, RationalFunction coeff = RationalFunction(1));

    bool is_zero() const { return terms_.empty(); }
    bool is_base() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mask == 0); }
    /// Coefficient of the empty square-root monomial.
    RationalFunction base() const;
    const std::vector<Term>& terms() const { return terms_; }

    std::uint32_t sqrt_mask() const;
    std::uint32_t variable_mask() const;

    TowerElement operator-() const;
    TowerElement& operator+=(const TowerElement& o);
    TowerElement& operator-=(const TowerElement& o);
    friend TowerElement operator+(TowerElement a, const TowerElement& b) { return a += b; }
    friend TowerElement operator-(TowerElement a, const TowerElement& b) { return a -= b; }
    TowerElement scaled(const RationalFunction& c) const;

    /// Products of shared square roots are rewritten through their radicands.
    static TowerElement mul(const TowerElement& a, const TowerElement& b, const ParameterContext* ctx);
    /// Throws DomainError for zero, zero divisors, or denominators in free parameters.
    static TowerElement inverse(const TowerElement& a, const ParameterContext* ctx);

    friend bool operator==(const TowerElement& a, const TowerElement& b);

    std::string to_string(const ParameterContext* ctx) const;

private:
    std::vector<Term> terms_;

    void add_term(std::uint32_t mask, const RationalFunction& c);
};

/// Ordered parameter declarations. Free and invertible parameters are
/// polynomial variables; quadratic parameters are square roots of radicands
/// over earlier parameters. Contexts are immutable; extending one yields a
/// new context whose declarations start with the old ones.
class ParameterContext {
public:
    enum class Kind { Free, Invertible, Quadratic };

    struct Parameter {
        std::string name;
        Kind kind;
        int slot;  // polynomial variable index or quadratic bit index
        TowerElement radicand;
    };

    static ContextPtr empty();

    ContextPtr with_free(const std::string& name) const;
    ContextPtr with_invertible(const std::string& name) const;
    /// Radicand must be a nonzero real element over this context.
    ContextPtr with_quadratic(const std::string& name, const TowerElement& radicand) const;

    const std::vector<Parameter>& parameters() const { return params_; }
    std::size_t size() const { return params_.size(); }
    const Parameter* find(const std::string& name) const;

    const std::vector<std::string>& variable_names() const { return var_names_; }
    const std::vector<std::string>& sqrt_names() const { return sqrt_names_; }
    std::uint32_t invertible_mask() const { return invertible_mask_; }
    const TowerElement& radicand(int bit) const { return radicands_[static_cast<std::size_t>(bit)]; }
    /// True when every radicand is a base-field element.
    bool flat_radicands() const { return flat_radicands_; }

    bool is_prefix_of(const ParameterContext& other) const;

    /// The longer of two prefix-compatible contexts; null counts as empty.
    static ContextPtr merge(const ContextPtr& a, const ContextPtr& b);

private:
    std::vector<Parameter> params_;
    std::vector<std::string> var_names_;
    std::vector<std::string> sqrt_names_;
    std::vector<TowerElement> radicands_;
    std::uint32_t invertible_mask_ = 0;
    bool flat_radicands_ = true;

    ContextPtr extended(Parameter p) const;
};

/// Complex scalar: real and imaginary tower elements over a context.
class Scalar {
public:
    Scalar() = default;
    Scalar(long c) : re_(RationalFunction(c)) {}               // NOLINT(google-explicit-constructor)
    Scalar(const mpq_class& c) : re_(RationalFunction(c)) {}   // NOLINT(google-explicit-constructor)
    Scalar(ContextPtr ctx, TowerElement re, TowerElement im = {});

    static Scalar i();
    /// Throws DomainError for an unknown name.
    static Scalar parameter(const ContextPtr& ctx, const std::string& name);

    const ContextPtr& context() const { return ctx_; }
    const TowerElement& re_part() const { return re_; }
    const TowerElement& im_part() const { return im_; }

    Scalar re() const { return {ctx_, re_}; }
    Scalar im() const { return {ctx_, im_}; }
    Scalar conj() const { return {ctx_, re_, -im_}; }

    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
    bool is_real() const { return im_.is_zero(); }
    /// Real rational constant.
    bool is_rational() const;
    mpq_class rational_value() const;

    Scalar operator-() const { return {ctx_, -re_, -im_}; }
    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    Scalar& operator/=(const Scalar& o);
    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

    Scalar inverse() const;
    Scalar pow(long e) const;

    /// Exact equality of normal forms.
    friend bool operator==(const Scalar& a, const Scalar& b);

    /// Variables (polynomial) and square roots occurring in the value.
    std::uint32_t variable_mask() const { return re_.variable_mask() | im_.variable_mask(); }
    std::uint32_t sqrt_mask() const { return re_.sqrt_mask() | im_.sqrt_mask(); }

    std::string to_string() const;

private:
    ContextPtr ctx_;
    TowerElement re_;
    TowerElement im_;
};

/// Rebuilds the canonical form from the stored components; idempotent.
Scalar normalize_scalar(const Scalar& s);

/// Square root of a real base-field scalar whose numerator and denominator
/// are perfect squares; the root has positive leading coefficients.
std::optional<Scalar> exact_sqrt(const Scalar& s);

/// True when the printed text has no top-level sum, so it can be used as a
/// factor without parentheses.
bool is_atomic_text(const std::string& text);

struct ComplexRational {
    mpq_class re;
    mpq_class im;
    friend bool operator==(const ComplexRational&, const ComplexRational&) = default;
    std::string to_string() const;
};

using Assignment = std::map<std::string, mpq_class>;

/// Replaces parameters by scalar values, checking quadratic relations once.
class Substituter {
public:
    /// Throws RelationError when a quadratic parameter's value does not square
    /// to its substituted radicand, DomainError for unknown names.
    Substituter(ContextPtr ctx, std::map<std::string, Scalar> values);

    /// Throws PoleError when a denominator vanishes.
    Scalar apply(const Scalar& s) const;
    const ContextPtr& target_context() const { return target_; }

private:
    ContextPtr source_;
    ContextPtr target_;
    std::vector<std::optional<Scalar>> var_values_;
    std::vector<std::optional<Scalar>> sqrt_values_;

    Scalar apply(const TowerElement& t) const;
    Scalar apply(const Polynomial& p) const;
};

Scalar substitute(const Scalar& s, const std::map<std::string, Scalar>& values);

/// Exact evaluation at a rational point. Throws RelationError, PoleError, or
/// DomainError when a parameter occurring in `s` is unassigned.
ComplexRational eval_scalar(const Scalar& s, const Assignment& assignment);

}  // namespace su2flux
