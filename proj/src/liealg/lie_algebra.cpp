#include "su2flux/liealg/lie_algebra.hpp"

#include <bit>
#include <cctype>

#include "su2flux/errors.hpp"
#include "su2flux/exterior/expression.hpp"

namespace su2flux {

LieAlgebra::LieAlgebra(std::string name, std::vector<Form> differentials)
    : name_(std::move(name)), differentials_(std::move(differentials)) {
    const int n = dim();
    if (n > kMaxDimension) throw ShapeError("Lie algebra dimension out of range");
    for (const auto& f : differentials_) {
        if (f.dim() != n) throw ShapeError("generator differential has the wrong dimension");
        if (!f.is_homogeneous_of(2)) throw DomainError("generator differential is not a 2-form");
    }
    // d(e^{i1...ik}) = sum_m (-1)^m e^{i1} ... d e^{im} ... e^{ik}, built by
    // peeling the lowest index: d(e^a ^ rest) = de^a ^ rest - e^a ^ d(rest).
    word_d_.assign(std::size_t{1} << n, Form(n));
    for (unsigned w = 1; w < (1u << n); ++w) {
        const int low = std::countr_zero(w);
        const Word rest = static_cast<Word>(w & (w - 1));
        const Form ea = Form::coframe(n, low + 1);
        word_d_[w] = wedge(differentials_[static_cast<std::size_t>(low)], Form::basis(n, rest)) -
                     wedge(ea, word_d_[rest]);
    }
}

Form LieAlgebra::d(const Form& a) const {
    if (a.dim() != dim()) throw ShapeError("form dimension does not match the algebra");
    Form out(dim());
    for (const auto& [w, c] : a.terms()) {
        const Form& dw = word_d_[w];
        for (const auto& [v, dc] : dw.terms()) out.add_term(v, dc * c);
    }
    return out;
}

ContextPtr LieAlgebra::context() const {
    ContextPtr ctx;
    for (const auto& f : differentials_) ctx = ParameterContext::merge(ctx, f.context());
    return ctx;
}

Form ce_differential(const LieAlgebra& algebra, const Form& a) {
    return algebra.d(a);
}

// ---------------------------------------------------------------------------
// Salamon notation

LieAlgebra parse_salamon(std::string_view text, const ContextPtr& ctx, std::string name, int line, int column_base) {
    auto fail = [&](const std::string& msg, std::size_t offset) -> void {
        throw ParseError(msg, line, static_cast<int>(offset) + column_base);
    };
    std::size_t begin = text.find_first_not_of(" \t");
    std::size_t end = text.find_last_not_of(" \t");
    if (begin == std::string_view::npos || text[begin] != '(' || text[end] != ')') {
        fail("algebra must be written as (entry, entry, ...)", begin == std::string_view::npos ? 0 : begin);
    }
    // Split on commas.
    std::vector<std::pair<std::size_t, std::string_view>> entries;
    std::size_t start = begin + 1;
    for (std::size_t k = begin + 1; k <= end; ++k) {
        if (text[k] == ',' || k == end) {
            entries.emplace_back(start, text.substr(start, k - start));
            start = k + 1;
        }
    }
    const int n = static_cast<int>(entries.size());
    if (n > kMaxDimension) fail("too many generators", begin);
    ExpressionScope scope{ctx, nullptr, {}};
    std::vector<Form> diffs;
    for (const auto& [offset, entry] : entries) {
        Form f(n);
        std::size_t k = 0;
        auto skip = [&] {
            while (k < entry.size() && std::isspace(static_cast<unsigned char>(entry[k]))) ++k;
        };
        skip();
        if (k == entry.size()) fail("empty entry", offset);
        if (entry.substr(k).find_first_not_of(" \t0") == std::string_view::npos) {
            diffs.push_back(f);
            continue;
        }
        bool first = true;
        while (true) {
            skip();
            if (k == entry.size()) break;
            Scalar sign(1);
            if (entry[k] == '+' || entry[k] == '-') {
                if (entry[k] == '-') sign = Scalar(-1);
                ++k;
                skip();
            } else if (!first) {
                fail("expected '+' or '-' between terms", offset + k);
            }
            first = false;
            // Optional coefficient: everything up to the '*' that precedes the word.
            std::size_t term_end = k;
            int depth = 0;
            while (term_end < entry.size()) {
                const char c = entry[term_end];
                if (c == '(') ++depth;
                if (c == ')') --depth;
                if (depth == 0 && (c == '+' || c == '-') && term_end > k) break;
                ++term_end;
            }
            std::string_view term = entry.substr(k, term_end - k);
            while (!term.empty() && std::isspace(static_cast<unsigned char>(term.back()))) term.remove_suffix(1);
            Scalar coeff(1);
            std::size_t word_at = k;
            const std::size_t star = term.rfind('*');
            if (star != std::string_view::npos) {
                try {
                    coeff = parse_scalar_expression(term.substr(0, star), scope, line,
                                                    static_cast<int>(offset + k) + column_base);
                } catch (const UndeclaredSymbolError&) {
                    throw;
                } catch (const ParseError&) {
                    throw;
                } catch (const Error& e) {
                    fail(std::string("malformed coefficient: ") + e.what(), offset + k);
                }
                word_at = k + star + 1;
                while (word_at < entry.size() && std::isspace(static_cast<unsigned char>(entry[word_at]))) ++word_at;
            }
            std::string_view word = entry.substr(word_at, term_end - word_at);
            while (!word.empty() && std::isspace(static_cast<unsigned char>(word.back()))) word.remove_suffix(1);
            if (word.size() != 2 || !std::isdigit(static_cast<unsigned char>(word[0])) ||
                !std::isdigit(static_cast<unsigned char>(word[1]))) {
                fail("expected a two-index word, found '" + std::string(word) + "'", offset + word_at);
            }
            const int a = word[0] - '0';
            const int b = word[1] - '0';
            if (a < 1 || a > n) fail("index " + std::to_string(a) + " out of range", offset + word_at);
            if (b < 1 || b > n) fail("index " + std::to_string(b) + " out of range", offset + word_at + 1);
            if (a == b) fail("repeated index " + std::to_string(a), offset + word_at + 1);
            Form term_form = wedge(Form::coframe(n, a), Form::coframe(n, b));
            f += term_form * (sign * coeff);
            k = term_end;
        }
        diffs.push_back(f);
    }
    return LieAlgebra(std::move(name), std::move(diffs));
}

std::string print_salamon(const LieAlgebra& algebra) {
    std::string out = "(";
    for (int k = 1; k <= algebra.dim(); ++k) {
        if (k > 1) out += ",";
        const Form& f = algebra.differential_of(k);
        if (f.is_zero()) {
            out += "0";
            continue;
        }
        bool first = true;
        for (const auto& [w, c] : f.terms()) {
            std::string coeff = c.to_string();
            bool negative = false;
            if (is_atomic_text(coeff) && coeff.front() == '-') {
                negative = true;
                coeff = coeff.substr(1);
            }
            if (negative) {
                out += "-";
            } else if (!first) {
                out += "+";
            }
            first = false;
            if (coeff != "1") out += (is_atomic_text(coeff) ? coeff : "(" + coeff + ")") + "*";
            out += word_digits(w);
        }
    }
    return out + ")";
}

DSquaredReport check_d_squared(const LieAlgebra& algebra) {
    for (int k = 1; k <= algebra.dim(); ++k) {
        Form r = algebra.d(algebra.differential_of(k));
        if (!r.is_zero()) return {false, k, r};
    }
    return {true, 0, Form(algebra.dim())};
}

// ---------------------------------------------------------------------------
// Cohomology

int bareiss_rank(std::vector<std::vector<mpz_class>> m) {
    const std::size_t rows = m.size();
    if (rows == 0) return 0;
    const std::size_t cols = m[0].size();
    std::size_t rank = 0;
    mpz_class prev = 1;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows && m[pivot][col] == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[pivot], m[rank]);
        for (std::size_t r = rank + 1; r < rows; ++r) {
            for (std::size_t c = col + 1; c < cols; ++c) {
                m[r][c] = (m[rank][col] * m[r][c] - m[r][col] * m[rank][c]) / prev;
            }
            m[r][col] = 0;
        }
        prev = m[rank][col];
        ++rank;
    }
    return static_cast<int>(rank);
}

std::vector<int> betti_numbers(const LieAlgebra& algebra) {
    const int n = algebra.dim();
    for (const auto& f : algebra.differentials()) {
        for (const auto& [w, c] : f.terms()) {
            if (!c.is_rational()) throw DomainError("Betti numbers need rational structure constants");
        }
    }
    std::vector<std::vector<Word>> words(static_cast<std::size_t>(n + 2));
    for (unsigned w = 0; w < (1u << n); ++w) words[static_cast<std::size_t>(std::popcount(w))].push_back(static_cast<Word>(w));
    // rank of d restricted to degree k, as a (dim L^{k+1}) x (dim L^k) matrix.
    std::vector<int> rank(static_cast<std::size_t>(n + 1), 0);
    for (int k = 0; k < n; ++k) {
        const auto& src = words[static_cast<std::size_t>(k)];
        const auto& dst = words[static_cast<std::size_t>(k + 1)];
        std::vector<std::vector<mpq_class>> q(dst.size(), std::vector<mpq_class>(src.size()));
        for (std::size_t c = 0; c < src.size(); ++c) {
            const Form image = algebra.d(Form::basis(n, src[c]));
            for (std::size_t r = 0; r < dst.size(); ++r) {
                const Scalar v = image.coefficient(dst[r]);
                if (!v.is_zero()) q[r][c] = v.rational_value();
            }
        }
        std::vector<std::vector<mpz_class>> z(q.size());
        for (std::size_t r = 0; r < q.size(); ++r) {
            mpz_class l = 1;
            for (const auto& v : q[r]) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
            for (const auto& v : q[r]) z[r].push_back(mpz_class(v * l));
        }
        rank[static_cast<std::size_t>(k)] = bareiss_rank(std::move(z));
    }
    std::vector<int> b;
    for (int k = 0; k <= n; ++k) {
        const int dim_k = static_cast<int>(words[static_cast<std::size_t>(k)].size());
        const int out_rank = rank[static_cast<std::size_t>(k)];
        const int in_rank = k > 0 ? rank[static_cast<std::size_t>(k - 1)] : 0;
        b.push_back(dim_k - out_rank - in_rank);
    }
    return b;
}

}  // namespace su2flux
