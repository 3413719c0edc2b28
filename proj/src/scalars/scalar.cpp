#include "su2flux/scalars/scalar.hpp"

#include <algorithm>
#include <bit>

#include "su2flux/errors.hpp"

namespace su2flux {

namespace {

const std::vector<std::string>& no_names() {
    static const std::vector<std::string> names;
    return names;
}

int highest_bit(std::uint32_t mask) {
    return 31 - std::countl_zero(mask);
}

}  // namespace

// ---------------------------------------------------------------------------
// TowerElement

TowerElement::TowerElement(RationalFunction base) {
    if (!base.is_zero()) terms_.push_back({0, std::move(base)});
}

TowerElement TowerElement::sqrt_monomial(std::uint32_t mask, RationalFunction coeff) {
    TowerElement t;
    if (!coeff.is_zero()) t.terms_.push_back({mask, std::move(coeff)});
    return t;
}

RationalFunction TowerElement::base() const {
    if (!terms_.empty() && terms_[0].mask == 0) return terms_[0].coeff;
    return {};
}

std::uint32_t TowerElement::sqrt_mask() const {
    std::uint32_t m = 0;
    for (const auto& t : terms_) m |= t.mask;
    return m;
}

std::uint32_t TowerElement::variable_mask() const {
    std::uint32_t m = 0;
    for (const auto& t : terms_) m |= t.coeff.variable_mask();
    return m;
}

void TowerElement::add_term(std::uint32_t mask, const RationalFunction& c) {
    if (c.is_zero()) return;
    auto it = std::lower_bound(terms_.begin(), terms_.end(), mask,
                               [](const Term& t, std::uint32_t m) { return t.mask < m; });
    if (it != terms_.end() && it->mask == mask) {
        it->coeff += c;
        if (it->coeff.is_zero()) terms_.erase(it);
    } else {
        terms_.insert(it, Term{mask, c});
    }
}

TowerElement TowerElement::operator-() const {
    TowerElement r = *this;
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
}

TowerElement& TowerElement::operator+=(const TowerElement& o) {
    for (const auto& t : o.terms_) add_term(t.mask, t.coeff);
    return *this;
}

TowerElement& TowerElement::operator-=(const TowerElement& o) {
    for (const auto& t : o.terms_) add_term(t.mask, -t.coeff);
    return *this;
}

TowerElement TowerElement::scaled(const RationalFunction& c) const {
    if (c.is_zero()) return {};
    TowerElement r = *this;
    for (auto& t : r.terms_) t.coeff *= c;
    return r;
}

TowerElement TowerElement::mul(const TowerElement& a, const TowerElement& b, const ParameterContext* ctx) {
    TowerElement out;
    if (a.is_zero() || b.is_zero()) return out;
    for (const auto& s : a.terms_) {
        for (const auto& t : b.terms_) {
            RationalFunction c = s.coeff * t.coeff;
            const std::uint32_t mask = s.mask ^ t.mask;
            std::uint32_t common = s.mask & t.mask;
            if (common == 0) {
                out.add_term(mask, c);
                continue;
            }
            if (ctx == nullptr) throw DomainError("square-root monomial without a parameter context");
            TowerElement prod = sqrt_monomial(mask, std::move(c));
            while (common != 0) {
                const int bit = std::countr_zero(common);
                common &= common - 1;
                const TowerElement& r = ctx->radicand(bit);
                prod = r.is_base() ? prod.scaled(r.base()) : mul(prod, r, ctx);
            }
            out += prod;
        }
    }
    return out;
}

TowerElement TowerElement::inverse(const TowerElement& a, const ParameterContext* ctx) {
    if (a.is_zero()) throw DomainError("division by zero");
    if (a.is_base()) {
        const RationalFunction x = a.base();
        const std::uint32_t allowed = ctx ? ctx->invertible_mask() : 0;
        if ((x.num().variable_mask() & ~allowed) != 0) {
            const auto& names = ctx ? ctx->variable_names() : no_names();
            throw DomainError("cannot divide by '" + x.num().to_string(names) +
                              "': it involves a parameter not declared invertible");
        }
        return TowerElement(x.inverse());
    }
    const int h = highest_bit(a.sqrt_mask());
    const std::uint32_t hbit = 1u << h;
    TowerElement p;
    TowerElement q;
    for (const auto& t : a.terms_) {
        if (t.mask & hbit) {
            q.add_term(t.mask & ~hbit, t.coeff);
        } else {
            p.add_term(t.mask, t.coeff);
        }
    }
    TowerElement conj = p;
    for (const auto& t : q.terms_) conj.add_term(t.mask | hbit, -t.coeff);
    TowerElement norm = mul(p, p, ctx) - mul(mul(q, q, ctx), ctx->radicand(h), ctx);
    if (norm.is_zero()) throw DomainError("zero divisor in the quadratic tower");
    return mul(conj, inverse(norm, ctx), ctx);
}

bool operator==(const TowerElement& a, const TowerElement& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t k = 0; k < a.terms_.size(); ++k) {
        if (a.terms_[k].mask != b.terms_[k].mask || !(a.terms_[k].coeff == b.terms_[k].coeff)) return false;
    }
    return true;
}

bool is_atomic_text(const std::string& text) {
    int depth = 0;
    for (std::size_t k = 0; k < text.size(); ++k) {
        const char c = text[k];
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (depth == 0 && k > 0 && (c == '+' || c == '-') && text[k - 1] == ' ') return false;
    }
    return true;
}

std::string TowerElement::to_string(const ParameterContext* ctx) const {
    if (terms_.empty()) return "0";
    const auto& vnames = ctx ? ctx->variable_names() : no_names();
    const auto& snames = ctx ? ctx->sqrt_names() : no_names();
    std::string out;
    for (const auto& t : terms_) {
        std::string piece;
        if (t.mask == 0) {
            piece = t.coeff.to_string(vnames);
        } else {
            std::string roots;
            for (std::uint32_t m = t.mask; m != 0; m &= m - 1) {
                const auto bit = static_cast<std::size_t>(std::countr_zero(m));
                if (!roots.empty()) roots += "*";
                roots += bit < snames.size() ? snames[bit] : "r" + std::to_string(bit);
            }
            if (t.coeff.is_one()) {
                piece = roots;
            } else if ((-t.coeff).is_one()) {
                piece = "-" + roots;
            } else {
                std::string c = t.coeff.to_string(vnames);
                if (t.coeff.is_polynomial() && is_atomic_text(c)) {
                    piece = c + "*" + roots;
                } else if (c.front() == '-' && is_atomic_text(c.substr(1)) && t.coeff.is_polynomial()) {
                    piece = c + "*" + roots;
                } else {
                    piece = "(" + c + ")*" + roots;
                }
            }
        }
        if (out.empty()) {
            out = piece;
        } else if (piece.front() == '-') {
            out += " - " + piece.substr(1);
        } else {
            out += " + " + piece;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// ParameterContext

ContextPtr ParameterContext::empty() {
    static const ContextPtr instance = std::make_shared<const ParameterContext>();
    return instance;
}

const ParameterContext::Parameter* ParameterContext::find(const std::string& name) const {
    for (const auto& p : params_) {
        if (p.name == name) return &p;
    }
    return nullptr;
}

ContextPtr ParameterContext::extended(Parameter p) const {
    if (find(p.name) != nullptr) throw DomainError("parameter '" + p.name + "' declared twice");
    auto next = std::make_shared<ParameterContext>(*this);
    if (p.kind == Kind::Quadratic) {
        if (static_cast<int>(sqrt_names_.size()) >= kMaxQuadratic) {
            throw DomainError("too many square-root parameters");
        }
        p.slot = static_cast<int>(sqrt_names_.size());
        next->sqrt_names_.push_back(p.name);
        next->radicands_.push_back(p.radicand);
        next->flat_radicands_ = flat_radicands_ && p.radicand.is_base();
    } else {
        if (static_cast<int>(var_names_.size()) >= kMaxVariables) throw DomainError("too many parameters");
        p.slot = static_cast<int>(var_names_.size());
        next->var_names_.push_back(p.name);
        if (p.kind == Kind::Invertible) next->invertible_mask_ |= 1u << p.slot;
    }
    next->params_.push_back(std::move(p));
    return next;
}

ContextPtr ParameterContext::with_free(const std::string& name) const {
    return extended({name, Kind::Free, 0, {}});
}

ContextPtr ParameterContext::with_invertible(const std::string& name) const {
    return extended({name, Kind::Invertible, 0, {}});
}

ContextPtr ParameterContext::with_quadratic(const std::string& name, const TowerElement& radicand) const {
    if (radicand.is_zero()) throw DomainError("radicand of '" + name + "' is zero");
    if (radicand.is_base()) {
        const RationalFunction r = radicand.base();
        if (r.is_constant() && r.constant_value() < 0) {
            throw DomainError("radicand of '" + name + "' is a negative constant");
        }
        if (r.num().leading_term().coeff > 0 && r.num().exact_sqrt() && r.den().exact_sqrt()) {
            throw DomainError("radicand of '" + name + "' is a perfect square");
        }
    }
    return extended({name, Kind::Quadratic, 0, radicand});
}

bool ParameterContext::is_prefix_of(const ParameterContext& other) const {
    if (params_.size() > other.params_.size()) return false;
    for (std::size_t k = 0; k < params_.size(); ++k) {
        const auto& a = params_[k];
        const auto& b = other.params_[k];
        if (a.name != b.name || a.kind != b.kind || !(a.radicand == b.radicand)) return false;
    }
    return true;
}

ContextPtr ParameterContext::merge(const ContextPtr& a, const ContextPtr& b) {
    if (a == b || !b) return a;
    if (!a) return b;
    if (a->size() >= b->size()) {
        if (b->is_prefix_of(*a)) return a;
    } else if (a->is_prefix_of(*b)) {
        return b;
    }
    throw DomainError("scalars from incompatible parameter contexts");
}

// ---------------------------------------------------------------------------
// Scalar

Scalar::Scalar(ContextPtr ctx, TowerElement re, TowerElement im)
    : ctx_(std::move(ctx)), re_(std::move(re)), im_(std::move(im)) {}

Scalar Scalar::i() {
    return {nullptr, {}, TowerElement(RationalFunction(1))};
}

Scalar Scalar::parameter(const ContextPtr& ctx, const std::string& name) {
    const auto* p = ctx ? ctx->find(name) : nullptr;
    if (p == nullptr) throw DomainError("unknown parameter '" + name + "'");
    if (p->kind == ParameterContext::Kind::Quadratic) {
        return {ctx, TowerElement::sqrt_monomial(1u << p->slot)};
    }
    return {ctx, TowerElement(RationalFunction(Polynomial::variable(p->slot)))};
}

bool Scalar::is_rational() const {
    return im_.is_zero() && re_.is_base() && re_.base().is_constant();
}

mpq_class Scalar::rational_value() const {
    if (!is_rational()) throw DomainError("scalar is not a rational constant");
    return re_.base().constant_value();
}

Scalar& Scalar::operator+=(const Scalar& o) {
    ctx_ = ParameterContext::merge(ctx_, o.ctx_);
    re_ += o.re_;
    im_ += o.im_;
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
    ctx_ = ParameterContext::merge(ctx_, o.ctx_);
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
    ctx_ = ParameterContext::merge(ctx_, o.ctx_);
    const ParameterContext* c = ctx_.get();
    if (im_.is_zero() && o.im_.is_zero()) {
        re_ = TowerElement::mul(re_, o.re_, c);
        return *this;
    }
    TowerElement re = TowerElement::mul(re_, o.re_, c) - TowerElement::mul(im_, o.im_, c);
    TowerElement im = TowerElement::mul(re_, o.im_, c) + TowerElement::mul(im_, o.re_, c);
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
}

Scalar Scalar::inverse() const {
    const ParameterContext* c = ctx_.get();
    if (im_.is_zero()) return {ctx_, TowerElement::inverse(re_, c)};
    TowerElement norm = TowerElement::mul(re_, re_, c) + TowerElement::mul(im_, im_, c);
    TowerElement inv = TowerElement::inverse(norm, c);
    return {ctx_, TowerElement::mul(re_, inv, c), -TowerElement::mul(im_, inv, c)};
}

Scalar& Scalar::operator/=(const Scalar& o) {
    if (o.is_rational()) {
        const mpq_class v = o.rational_value();
        if (v == 0) throw DomainError("division by zero");
        const RationalFunction inv(mpq_class(1 / v));
        re_ = re_.scaled(inv);
        im_ = im_.scaled(inv);
        return *this;
    }
    Scalar inv = o.inverse();
    return *this *= inv;
}

Scalar Scalar::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    Scalar result(1);
    Scalar base = *this;
    while (e != 0) {
        if (e & 1) result *= base;
        e >>= 1;
        if (e != 0) base *= base;
    }
    return result;
}

bool operator==(const Scalar& a, const Scalar& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
}

std::string Scalar::to_string() const {
    const ParameterContext* c = ctx_.get();
    if (im_.is_zero()) return re_.to_string(c);
    std::string im = im_.to_string(c);
    std::string im_text;
    bool negative = false;
    if (im == "1") {
        im_text = "i";
    } else if (im == "-1") {
        im_text = "i";
        negative = true;
    } else if (is_atomic_text(im)) {
        if (im.front() == '-') {
            negative = true;
            im = im.substr(1);
        }
        im_text = "i*" + im;
    } else {
        im_text = "i*(" + im + ")";
    }
    if (re_.is_zero()) return negative ? "-" + im_text : im_text;
    return re_.to_string(c) + (negative ? " - " : " + ") + im_text;
}

Scalar normalize_scalar(const Scalar& s) {
    auto rebuild = [](const TowerElement& t) {
        TowerElement out;
        for (const auto& term : t.terms()) {
            out += TowerElement::sqrt_monomial(term.mask, RationalFunction(term.coeff.num(), term.coeff.den()));
        }
        return out;
    };
    return {s.context(), rebuild(s.re_part()), rebuild(s.im_part())};
}

std::optional<Scalar> exact_sqrt(const Scalar& s) {
    if (s.is_zero()) return Scalar(0);
    if (!s.is_real() || !s.re_part().is_base()) return std::nullopt;
    const RationalFunction x = s.re_part().base();
    auto n = x.num().exact_sqrt();
    auto d = x.den().exact_sqrt();
    if (!n || !d) return std::nullopt;
    return Scalar(s.context(), TowerElement(RationalFunction(*n, *d)));
}

std::string ComplexRational::to_string() const {
    return Scalar(nullptr, TowerElement(RationalFunction(re)), TowerElement(RationalFunction(im))).to_string();
}

// ---------------------------------------------------------------------------
// Substitution and evaluation

Substituter::Substituter(ContextPtr ctx, std::map<std::string, Scalar> values) : source_(std::move(ctx)) {
    target_ = source_;
    for (const auto& [name, value] : values) target_ = ParameterContext::merge(target_, value.context());
    const std::size_t nvars = source_ ? source_->variable_names().size() : 0;
    const std::size_t nsqrt = source_ ? source_->sqrt_names().size() : 0;
    var_values_.resize(nvars);
    sqrt_values_.resize(nsqrt);
    for (const auto& [name, value] : values) {
        const auto* p = source_ ? source_->find(name) : nullptr;
        if (p == nullptr) throw DomainError("unknown parameter '" + name + "'");
        auto slot = static_cast<std::size_t>(p->slot);
        if (p->kind == ParameterContext::Kind::Quadratic) {
            sqrt_values_[slot] = value;
        } else {
            var_values_[slot] = value;
        }
    }
    for (std::size_t bit = 0; bit < nsqrt; ++bit) {
        if (!sqrt_values_[bit]) continue;
        const Scalar& v = *sqrt_values_[bit];
        const Scalar r = apply(source_->radicand(static_cast<int>(bit)));
        if (!(v * v == r)) {
            throw RelationError("value " + v.to_string() + " for '" + source_->sqrt_names()[bit] +
                                "' does not square to its radicand " + r.to_string());
        }
    }
}

Scalar Substituter::apply(const Polynomial& p) const {
    Scalar out(target_, {});
    for (const auto& term : p.terms()) {
        Scalar piece(target_, TowerElement(RationalFunction(term.coeff)));
        for (int v = 0; v < kMaxVariables; ++v) {
            const unsigned e = term.mono.exponent(v);
            if (e == 0) continue;
            const auto slot = static_cast<std::size_t>(v);
            Scalar value = var_values_[slot]
                               ? *var_values_[slot]
                               : Scalar(target_, TowerElement(RationalFunction(Polynomial::variable(v))));
            piece *= value.pow(e);
        }
        out += piece;
    }
    return out;
}

Scalar Substituter::apply(const TowerElement& t) const {
    Scalar out(target_, {});
    for (const auto& term : t.terms()) {
        Scalar num = apply(term.coeff.num());
        Scalar den = apply(term.coeff.den());
        if (den.is_zero()) throw PoleError("denominator vanishes at the substituted point");
        Scalar piece = num / den;
        for (std::uint32_t m = term.mask; m != 0; m &= m - 1) {
            const auto bit = static_cast<std::size_t>(std::countr_zero(m));
            piece *= sqrt_values_[bit] ? *sqrt_values_[bit]
                                       : Scalar(target_, TowerElement::sqrt_monomial(1u << bit));
        }
        out += piece;
    }
    return out;
}

Scalar Substituter::apply(const Scalar& s) const {
    std::uint32_t touched_vars = 0;
    std::uint32_t touched_sqrt = 0;
    for (std::size_t k = 0; k < var_values_.size(); ++k) {
        if (var_values_[k]) touched_vars |= 1u << k;
    }
    for (std::size_t k = 0; k < sqrt_values_.size(); ++k) {
        if (sqrt_values_[k]) touched_sqrt |= 1u << k;
    }
    if ((s.variable_mask() & touched_vars) == 0 && (s.sqrt_mask() & touched_sqrt) == 0) {
        return {ParameterContext::merge(target_, s.context()), s.re_part(), s.im_part()};
    }
    Scalar re = apply(s.re_part());
    Scalar im = apply(s.im_part());
    return re + Scalar::i() * im;
}

Scalar substitute(const Scalar& s, const std::map<std::string, Scalar>& values) {
    return Substituter(s.context(), values).apply(s);
}

ComplexRational eval_scalar(const Scalar& s, const Assignment& assignment) {
    std::map<std::string, Scalar> values;
    const ContextPtr& ctx = s.context();
    for (const auto& [name, value] : assignment) {
        if (ctx && ctx->find(name) != nullptr) values.emplace(name, Scalar(value));
    }
    const Scalar r = Substituter(ctx, values).apply(s);
    const bool constant = r.re_part().is_base() && r.re_part().base().is_constant() && r.im_part().is_base() &&
                          r.im_part().base().is_constant();
    if (!constant) throw DomainError("evaluation point leaves parameters unassigned in " + r.to_string());
    return {r.re_part().base().constant_value(), r.im_part().base().constant_value()};
}

}  // namespace su2flux
