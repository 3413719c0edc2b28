#include "su2flux/exterior/form.hpp"

#include <bit>

#include "su2flux/errors.hpp"

namespace su2flux {

int word_degree(Word w) {
    return std::popcount(static_cast<unsigned>(w));
}

std::string word_digits(Word w) {
    std::string s;
    for (int k = 0; k < 16; ++k) {
        if (w & (1u << k)) s += static_cast<char>('1' + k);
    }
    return s;
}

Word word_of(std::initializer_list<int> indices) {
    Word w = 0;
    for (int k : indices) w |= static_cast<Word>(1u << (k - 1));
    return w;
}

int wedge_sign(Word a, Word b) {
    if (a & b) return 0;
    int swaps = 0;
    for (unsigned rest = b; rest != 0; rest &= rest - 1) {
        const unsigned bit = rest & (~rest + 1);
        // Each index of a above this index of b must be moved past it.
        swaps += std::popcount(static_cast<unsigned>(a) & ~((bit << 1) - 1));
    }
    return (swaps % 2 == 0) ? 1 : -1;
}

bool WordOrder::operator()(Word a, Word b) const {
    const int da = word_degree(a);
    const int db = word_degree(b);
    if (da != db) return da < db;
    const unsigned diff = static_cast<unsigned>(a ^ b);
    if (diff == 0) return false;
    const unsigned lowest = diff & (~diff + 1);
    return (a & lowest) != 0;
}

// ---------------------------------------------------------------------------

Form::Form(int dim) : dim_(dim) {
    if (dim < 0 || dim > kMaxDimension) throw ShapeError("form dimension out of range");
}

Form Form::constant(int dim, const Scalar& s) {
    Form f(dim);
    f.add_term(0, s);
    return f;
}

Form Form::basis(int dim, Word w, const Scalar& c) {
    if (w >> dim) throw ShapeError("index word exceeds the dimension");
    Form f(dim);
    f.add_term(w, c);
    return f;
}

Form Form::coframe(int dim, int index) {
    if (index < 1 || index > dim) throw ShapeError("coframe index out of range");
    return basis(dim, static_cast<Word>(1u << (index - 1)));
}

Scalar Form::coefficient(Word w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? Scalar(0) : it->second;
}

std::vector<int> Form::degrees() const {
    std::vector<int> out;
    for (const auto& [w, c] : terms_) {
        const int d = word_degree(w);
        if (out.empty() || out.back() != d) out.push_back(d);
    }
    return out;
}

bool Form::is_homogeneous_of(int degree) const {
    for (const auto& [w, c] : terms_) {
        if (word_degree(w) != degree) return false;
    }
    return true;
}

Form Form::part(int degree) const {
    Form f(dim_);
    for (const auto& [w, c] : terms_) {
        if (word_degree(w) == degree) f.terms_.emplace_hint(f.terms_.end(), w, c);
    }
    return f;
}

bool Form::is_scalar() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0);
}

Scalar Form::scalar_value() const {
    if (!is_scalar()) throw DomainError("form is not a scalar");
    return coefficient(0);
}

void Form::add_term(Word w, const Scalar& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(w, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Form Form::operator-() const {
    Form f = *this;
    for (auto& [w, c] : f.terms_) c = -c;
    return f;
}

Form& Form::operator+=(const Form& o) {
    if (o.dim_ != dim_) throw ShapeError("form dimension mismatch");
    for (const auto& [w, c] : o.terms_) add_term(w, c);
    return *this;
}

Form& Form::operator-=(const Form& o) {
    if (o.dim_ != dim_) throw ShapeError("form dimension mismatch");
    for (const auto& [w, c] : o.terms_) add_term(w, -c);
    return *this;
}

Form& Form::operator*=(const Scalar& s) {
    if (s.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto it = terms_.begin(); it != terms_.end();) {
        it->second *= s;
        it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
    }
    return *this;
}

Form Form::conj() const {
    Form f(dim_);
    for (const auto& [w, c] : terms_) f.add_term(w, c.conj());
    return f;
}

Form Form::re() const {
    Form f(dim_);
    for (const auto& [w, c] : terms_) f.add_term(w, c.re());
    return f;
}

Form Form::im() const {
    Form f(dim_);
    for (const auto& [w, c] : terms_) f.add_term(w, c.im());
    return f;
}

ContextPtr Form::context() const {
    ContextPtr ctx;
    for (const auto& [w, c] : terms_) ctx = ParameterContext::merge(ctx, c.context());
    return ctx;
}

bool operator==(const Form& a, const Form& b) {
    if (a.dim_ != b.dim_ || a.terms_.size() != b.terms_.size()) return false;
    auto it = b.terms_.begin();
    for (const auto& [w, c] : a.terms_) {
        if (it->first != w || !(it->second == c)) return false;
        ++it;
    }
    return true;
}

// ---------------------------------------------------------------------------

Form wedge(const Form& a, const Form& b) {
    if (a.dim() != b.dim()) throw ShapeError("wedge of forms of different dimension");
    Form out(a.dim());
    for (const auto& [wa, ca] : a.terms()) {
        for (const auto& [wb, cb] : b.terms()) {
            const int s = wedge_sign(wa, wb);
            if (s == 0) continue;
            Scalar c = ca * cb;
            out.add_term(static_cast<Word>(wa | wb), s > 0 ? c : -c);
        }
    }
    return out;
}

Form wedge_power(const Form& a, unsigned k) {
    Form out = Form::constant(a.dim(), Scalar(1));
    for (unsigned j = 0; j < k; ++j) out = wedge(out, a);
    return out;
}

Form lambda_involution(const Form& a) {
    Form out(a.dim());
    for (const auto& [w, c] : a.terms()) {
        const int p = word_degree(w);
        out.add_term(w, ((p * (p - 1) / 2) % 2 == 0) ? c : -c);
    }
    return out;
}

Form polyform_exp(const Form& a) {
    for (int d : a.degrees()) {
        if (d % 2 != 0) throw DomainError("exponential of a form with an odd-degree component");
        if (d == 0) throw DomainError("exponential of a form with a nonzero scalar component");
    }
    Form result = Form::constant(a.dim(), Scalar(1));
    Form power = result;
    for (long k = 1; !power.is_zero(); ++k) {
        power = wedge(power, a) * Scalar(mpq_class(1, k));
        result += power;
    }
    return result;
}

Form interior_product(const std::vector<Scalar>& v, const Form& a) {
    if (static_cast<int>(v.size()) != a.dim()) throw ShapeError("vector length does not match the form dimension");
    Form out(a.dim());
    for (const auto& [w, c] : a.terms()) {
        int position = 0;
        for (int k = 0; k < a.dim(); ++k) {
            const Word bit = static_cast<Word>(1u << k);
            if (!(w & bit)) continue;
            const Scalar& vk = v[static_cast<std::size_t>(k)];
            if (!vk.is_zero()) {
                Scalar term = vk * c;
                out.add_term(static_cast<Word>(w & ~bit), position % 2 == 0 ? term : -term);
            }
            ++position;
        }
    }
    return out;
}

Form apply_covector_map(const ScalarMatrix& m, const Form& a) {
    const int n = a.dim();
    if (static_cast<int>(m.size()) != n) throw ShapeError("covector map has the wrong size");
    std::vector<Form> images;
    for (int r = 0; r < n; ++r) {
        Form img(n);
        if (static_cast<int>(m[static_cast<std::size_t>(r)].size()) != n) {
            throw ShapeError("covector map has the wrong size");
        }
        for (int c = 0; c < n; ++c) {
            img.add_term(static_cast<Word>(1u << c), m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
        }
        images.push_back(std::move(img));
    }
    Form out(n);
    for (const auto& [w, coeff] : a.terms()) {
        Form img = Form::constant(n, coeff);
        for (int k = 0; k < n; ++k) {
            if (w & (1u << k)) img = wedge(img, images[static_cast<std::size_t>(k)]);
        }
        out += img;
    }
    return out;
}

Form substitute(const Form& a, const Substituter& sub) {
    Form out(a.dim());
    for (const auto& [w, c] : a.terms()) out.add_term(w, sub.apply(c));
    return out;
}

std::string to_string(const Form& a, char letter) {
    if (a.is_zero()) return "0";
    std::string out;
    for (const auto& [w, c] : a.terms()) {
        std::string coeff = c.to_string();
        std::string piece;
        if (w == 0) {
            piece = is_atomic_text(coeff) ? coeff : "(" + coeff + ")";
        } else {
            const std::string word = std::string(1, letter) + word_digits(w);
            if (coeff == "1") {
                piece = word;
            } else if (coeff == "-1") {
                piece = "-" + word;
            } else if (is_atomic_text(coeff)) {
                piece = coeff + "*" + word;
            } else {
                piece = "(" + coeff + ")*" + word;
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

}  // namespace su2flux
