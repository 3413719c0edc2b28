#include "su2flux/scalars/polynomial.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "su2flux/errors.hpp"

namespace su2flux {

// ---------------------------------------------------------------------------
// Monomial

Monomial Monomial::variable(int index, unsigned power) {
    if (index < 0 || index >= kMaxVariables) {
        throw DomainError("polynomial variable index out of range");
    }
    Monomial m;
    m.exps_[static_cast<std::size_t>(index)] = static_cast<std::uint16_t>(power);
    m.degree_ = static_cast<std::uint16_t>(power);
    return m;
}

Monomial Monomial::operator*(const Monomial& other) const {
    Monomial r;
    for (std::size_t i = 0; i < exps_.size(); ++i) {
        r.exps_[i] = static_cast<std::uint16_t>(exps_[i] + other.exps_[i]);
    }
    r.degree_ = static_cast<std::uint16_t>(degree_ + other.degree_);
    return r;
}

Monomial Monomial::operator/(const Monomial& other) const {
    Monomial r;
    for (std::size_t i = 0; i < exps_.size(); ++i) {
        r.exps_[i] = static_cast<std::uint16_t>(exps_[i] - other.exps_[i]);
    }
    r.degree_ = static_cast<std::uint16_t>(degree_ - other.degree_);
    return r;
}

bool Monomial::divides(const Monomial& other) const {
    for (std::size_t i = 0; i < exps_.size(); ++i) {
        if (exps_[i] > other.exps_[i]) return false;
    }
    return true;
}

Monomial Monomial::without(int var) const {
    return with_exponent(var, 0);
}

Monomial Monomial::with_exponent(int var, unsigned power) const {
    Monomial r = *this;
    auto& slot = r.exps_[static_cast<std::size_t>(var)];
    r.degree_ = static_cast<std::uint16_t>(r.degree_ - slot + power);
    slot = static_cast<std::uint16_t>(power);
    return r;
}

Monomial Monomial::gcd(const Monomial& a, const Monomial& b) {
    Monomial r;
    unsigned deg = 0;
    for (std::size_t i = 0; i < a.exps_.size(); ++i) {
        r.exps_[i] = std::min(a.exps_[i], b.exps_[i]);
        deg += r.exps_[i];
    }
    r.degree_ = static_cast<std::uint16_t>(deg);
    return r;
}

std::strong_ordering grlex(const Monomial& a, const Monomial& b) {
    if (a.degree_ != b.degree_) return a.degree_ <=> b.degree_;
    for (std::size_t i = 0; i < a.exps_.size(); ++i) {
        if (a.exps_[i] != b.exps_[i]) return a.exps_[i] <=> b.exps_[i];
    }
    return std::strong_ordering::equal;
}

// ---------------------------------------------------------------------------
// Polynomial: construction and queries

Polynomial::Polynomial(const mpq_class& c) {
    if (c != 0) terms_.push_back({Monomial{}, c});
}

Polynomial Polynomial::variable(int index) {
    return monomial(Monomial::variable(index), 1);
}

Polynomial Polynomial::monomial(const Monomial& m, const mpq_class& c) {
    Polynomial p;
    if (c != 0) p.terms_.push_back({m, c});
    return p;
}

bool Polynomial::is_one() const {
    return terms_.size() == 1 && terms_[0].mono.is_one() && terms_[0].coeff == 1;
}

mpq_class Polynomial::constant_value() const {
    if (terms_.empty()) return 0;
    return terms_.back().mono.is_one() ? terms_.back().coeff : mpq_class(0);
}

unsigned Polynomial::total_degree() const {
    return terms_.empty() ? 0 : terms_.front().mono.degree();
}

unsigned Polynomial::degree_in(int var) const {
    unsigned d = 0;
    for (const auto& t : terms_) d = std::max(d, t.mono.exponent(var));
    return d;
}

std::uint32_t Polynomial::variable_mask() const {
    std::uint32_t mask = 0;
    for (const auto& t : terms_) {
        for (int v = 0; v < kMaxVariables; ++v) {
            if (t.mono.exponent(v) != 0) mask |= (1u << v);
        }
    }
    return mask;
}

void Polynomial::canonicalize_from_unsorted() {
    std::map<Monomial, mpq_class, GrlexDescending> acc;
    for (auto& t : terms_) acc[t.mono] += t.coeff;
    terms_.clear();
    for (auto& [m, c] : acc) {
        if (c != 0) terms_.push_back({m, c});
    }
}

// ---------------------------------------------------------------------------
// Arithmetic

Polynomial Polynomial::operator-() const {
    Polynomial r = *this;
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
}

namespace {

std::vector<Polynomial::Term> merge_terms(const std::vector<Polynomial::Term>& a,
                                          std::span<const Polynomial::Term> b, bool subtract) {
    std::vector<Polynomial::Term> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && grlex(a[i].mono, b[j].mono) > 0)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || grlex(a[i].mono, b[j].mono) < 0) {
            out.push_back({b[j].mono, subtract ? mpq_class(-b[j].coeff) : b[j].coeff});
            ++j;
        } else {
            mpq_class c = subtract ? mpq_class(a[i].coeff - b[j].coeff) : mpq_class(a[i].coeff + b[j].coeff);
            if (c != 0) out.push_back({a[i].mono, c});
            ++i;
            ++j;
        }
    }
    return out;
}

}  // namespace

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    terms_ = merge_terms(terms_, o.terms_, false);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    terms_ = merge_terms(terms_, o.terms_, true);
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (b.is_monomial()) {
        Polynomial r = a.times_monomial(b.terms_[0].mono);
        return r *= b.terms_[0].coeff;
    }
    if (a.is_monomial()) {
        Polynomial r = b.times_monomial(a.terms_[0].mono);
        return r *= a.terms_[0].coeff;
    }
    std::map<Monomial, mpq_class, GrlexDescending> acc;
    for (const auto& s : a.terms_) {
        for (const auto& t : b.terms_) acc[s.mono * t.mono] += s.coeff * t.coeff;
    }
    Polynomial r;
    for (auto& [m, c] : acc) {
        if (c != 0) r.terms_.push_back({m, c});
    }
    return r;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) {
    *this = *this * o;
    return *this;
}

Polynomial& Polynomial::operator*=(const mpq_class& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& t : terms_) t.coeff *= c;
    return *this;
}

Polynomial Polynomial::pow(unsigned e) const {
    Polynomial result(1);
    Polynomial base = *this;
    while (e != 0) {
        if (e & 1u) result *= base;
        e >>= 1u;
        if (e != 0) base *= base;
    }
    return result;
}

Polynomial Polynomial::times_monomial(const Monomial& m) const {
    // Multiplying by a monomial preserves grlex order.
    Polynomial r = *this;
    for (auto& t : r.terms_) t.mono = t.mono * m;
    return r;
}

Polynomial Polynomial::divide_exact(const Polynomial& divisor) const {
    if (divisor.is_zero()) throw DomainError("division by the zero polynomial");
    if (divisor.is_constant()) return *this * mpq_class(1 / divisor.constant_value());
    Polynomial quotient;
    std::map<Monomial, mpq_class, GrlexDescending> rem;
    for (const auto& t : terms_) rem.emplace(t.mono, t.coeff);
    const Term& lead = divisor.terms_.front();
    while (!rem.empty()) {
        auto top = rem.begin();
        if (!lead.mono.divides(top->first)) throw DomainError("polynomial division is not exact");
        Monomial qm = top->first / lead.mono;
        mpq_class qc = top->second / lead.coeff;
        quotient.terms_.push_back({qm, qc});
        for (const auto& t : divisor.terms_) {
            Monomial m = t.mono * qm;
            auto [it, inserted] = rem.try_emplace(m, 0);
            it->second -= qc * t.coeff;
            if (it->second == 0) rem.erase(it);
        }
    }
    // Quotient terms were produced in descending order.
    return quotient;
}

Polynomial Polynomial::monic() const {
    if (is_zero()) return {};
    mpq_class inv = 1 / terms_.front().coeff;
    return *this * inv;
}

Polynomial Polynomial::substitute(int var, const mpq_class& value) const {
    Polynomial r;
    for (const auto& t : terms_) {
        unsigned e = t.mono.exponent(var);
        mpq_class c = t.coeff;
        for (unsigned k = 0; k < e; ++k) c *= value;
        if (c != 0) r.terms_.push_back({t.mono.without(var), c});
    }
    r.canonicalize_from_unsorted();
    return r;
}

std::vector<Polynomial> Polynomial::coefficients_in(int var) const {
    std::vector<Polynomial> out(degree_in(var) + 1);
    for (const auto& t : terms_) {
        // Removing one variable keeps the relative order of the remaining
        // terms within a fixed power of var only up to re-sorting.
        out[t.mono.exponent(var)].terms_.push_back({t.mono.without(var), t.coeff});
    }
    for (auto& p : out) p.canonicalize_from_unsorted();
    return out;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
        if (!(a.terms_[i].mono == b.terms_[i].mono) || a.terms_[i].coeff != b.terms_[i].coeff) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// gcd: recursive primitive remainder sequences over Q[x_0..x_k]

namespace {

int highest_variable(std::uint32_t mask) {
    for (int v = kMaxVariables - 1; v >= 0; --v) {
        if (mask & (1u << v)) return v;
    }
    return -1;
}

Polynomial monomial_gcd(const Monomial& m, const Polynomial& p) {
    Monomial g = m;
    for (const auto& t : p.terms()) g = Monomial::gcd(g, t.mono);
    return Polynomial::monomial(g, 1);
}

Polynomial content_in(const Polynomial& p, int var) {
    Polynomial c;
    for (const auto& coeff : p.coefficients_in(var)) {
        if (coeff.is_zero()) continue;
        c = Polynomial::gcd(c, coeff);
        if (c.is_one()) break;
    }
    return c;
}

Polynomial leading_coefficient_in(const Polynomial& p, int var) {
    return p.coefficients_in(var).back();
}

// Pseudo-remainder of a by b with respect to var (b nonzero, both involve var).
Polynomial pseudo_remainder(Polynomial a, const Polynomial& b, int var) {
    const unsigned db = b.degree_in(var);
    const Polynomial lcb = leading_coefficient_in(b, var);
    while (!a.is_zero() && a.degree_in(var) >= db) {
        const unsigned da = a.degree_in(var);
        Polynomial lca = leading_coefficient_in(a, var);
        a = a * lcb - (b * lca).times_monomial(Monomial::variable(var, da - db));
    }
    return a;
}

Polynomial primitive_part(const Polynomial& p, int var) {
    if (p.is_zero()) return p;
    return p.divide_exact(content_in(p, var));
}

}  // namespace

Polynomial Polynomial::gcd(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    if (a.is_constant() || b.is_constant()) return Polynomial(1);
    if (a.is_monomial()) return monomial_gcd(a.terms_[0].mono, b);
    if (b.is_monomial()) return monomial_gcd(b.terms_[0].mono, a);
    if (a == b) return a.monic();

    const std::uint32_t ma = a.variable_mask();
    const std::uint32_t mb = b.variable_mask();
    const int var = highest_variable(ma | mb);
    if (!(ma & (1u << var))) return gcd(a, content_in(b, var));
    if (!(mb & (1u << var))) return gcd(content_in(a, var), b);

    const Polynomial ca = content_in(a, var);
    const Polynomial cb = content_in(b, var);
    Polynomial pa = a.divide_exact(ca);
    Polynomial pb = b.divide_exact(cb);
    const Polynomial c = gcd(ca, cb);

    if (pa.degree_in(var) < pb.degree_in(var)) std::swap(pa, pb);
    Polynomial g;
    while (true) {
        Polynomial r = pseudo_remainder(pa, pb, var);
        if (r.is_zero()) {
            g = pb;
            break;
        }
        if (r.degree_in(var) == 0) {
            g = Polynomial(1);
            break;
        }
        pa = std::move(pb);
        pb = primitive_part(r, var);
    }
    return (c * primitive_part(g, var)).monic();
}

std::optional<Polynomial> Polynomial::exact_sqrt() const {
    if (is_zero()) return Polynomial{};
    const Term& lead = terms_.front();
    if (lead.coeff < 0) return std::nullopt;
    Monomial root_mono;
    for (int v = 0; v < kMaxVariables; ++v) {
        unsigned e = lead.mono.exponent(v);
        if (e % 2 != 0) return std::nullopt;
        root_mono = root_mono * Monomial::variable(v, e / 2);
    }
    mpz_class num = lead.coeff.get_num();
    mpz_class den = lead.coeff.get_den();
    if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) return std::nullopt;
    mpz_class rn;
    mpz_class rd;
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    mpq_class root_coeff(rn, rd);
    root_coeff.canonicalize();

    // Term-by-term extraction: each new root term is LT(residual) / (2 LT(root)).
    Polynomial root = monomial(root_mono, root_coeff);
    const Term root_lead = root.terms_.front();
    Polynomial residual = *this - root * root;
    const unsigned max_steps = static_cast<unsigned>(terms_.size()) * 4 + 8;
    for (unsigned step = 0; step < max_steps && !residual.is_zero(); ++step) {
        const Term& lt = residual.terms_.front();
        if (grlex(lt.mono, root_lead.mono * root_lead.mono) > 0) return std::nullopt;
        if (!root_lead.mono.divides(lt.mono)) return std::nullopt;
        Polynomial next = monomial(lt.mono / root_lead.mono, lt.coeff / (2 * root_lead.coeff));
        if (grlex(next.terms_.front().mono, root_lead.mono) >= 0 && !root.is_constant()) {
            // Would not decrease; the polynomial is not a square.
            if (grlex(next.terms_.front().mono, root_lead.mono) > 0) return std::nullopt;
        }
        root += next;
        residual = *this - root * root;
    }
    if (!residual.is_zero()) return std::nullopt;
    return root;
}

// ---------------------------------------------------------------------------
// Printing

std::string Polynomial::to_string(std::span<const std::string> names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        mpq_class c = t.coeff;
        if (first) {
            if (c < 0) {
                os << "-";
                c = -c;
            }
        } else {
            os << (c < 0 ? " - " : " + ");
            if (c < 0) c = -c;
        }
        first = false;
        bool wrote = false;
        if (c != 1 || t.mono.is_one()) {
            os << c.get_str();
            wrote = true;
        }
        for (int v = 0; v < kMaxVariables; ++v) {
            unsigned e = t.mono.exponent(v);
            if (e == 0) continue;
            if (wrote) os << "*";
            const auto idx = static_cast<std::size_t>(v);
            os << (idx < names.size() ? names[idx] : "x" + std::to_string(v));
            if (e > 1) os << "^" << e;
            wrote = true;
        }
    }
    return os.str();
}

}  // namespace su2flux
