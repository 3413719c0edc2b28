#include "su2flux/exterior/metric.hpp"

#include <bit>

#include "su2flux/errors.hpp"

namespace su2flux {

namespace {

std::size_t sz(int k) { return static_cast<std::size_t>(k); }

/// Index of a usable pivot in column `col` at or below `row`, or -1.
int choose_pivot(const ScalarMatrix& m, int row, int col) {
    int fallback = -1;
    for (int r = row; r < static_cast<int>(m.size()); ++r) {
        const Scalar& v = m[sz(r)][sz(col)];
        if (v.is_zero()) continue;
        if (v.is_rational()) return r;
        if (fallback < 0) {
            try {
                (void)v.inverse();
                fallback = r;
            } catch (const DomainError&) {
            }
        }
    }
    if (fallback >= 0) return fallback;
    for (int r = row; r < static_cast<int>(m.size()); ++r) {
        if (!m[sz(r)][sz(col)].is_zero()) {
            throw DomainError("pivot " + m[sz(r)][sz(col)].to_string() + " cannot be inverted");
        }
    }
    return -1;
}

/// Reduced row echelon form in place; returns pivot columns.
std::vector<int> row_reduce(ScalarMatrix& m, int ncols) {
    std::vector<int> pivots;
    int row = 0;
    const int nrows = static_cast<int>(m.size());
    for (int col = 0; col < ncols && row < nrows; ++col) {
        const int p = choose_pivot(m, row, col);
        if (p < 0) continue;
        std::swap(m[sz(row)], m[sz(p)]);
        const Scalar inv = m[sz(row)][sz(col)].inverse();
        for (auto& v : m[sz(row)]) v *= inv;
        for (int r = 0; r < nrows; ++r) {
            if (r == row || m[sz(r)][sz(col)].is_zero()) continue;
            const Scalar f = m[sz(r)][sz(col)];
            for (std::size_t c = 0; c < m[sz(r)].size(); ++c) {
                if (!m[sz(row)][c].is_zero()) m[sz(r)][c] -= f * m[sz(row)][c];
            }
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

void require_square(const ScalarMatrix& a) {
    for (const auto& row : a) {
        if (row.size() != a.size()) throw ShapeError("matrix is not square");
    }
}

}  // namespace

ScalarMatrix identity_matrix(int n) {
    ScalarMatrix m(sz(n), std::vector<Scalar>(sz(n)));
    for (int k = 0; k < n; ++k) m[sz(k)][sz(k)] = Scalar(1);
    return m;
}

ScalarMatrix multiply(const ScalarMatrix& a, const ScalarMatrix& b) {
    const std::size_t n = a.size();
    const std::size_t inner = b.size();
    const std::size_t cols = inner == 0 ? 0 : b[0].size();
    ScalarMatrix out(n, std::vector<Scalar>(cols));
    for (std::size_t r = 0; r < n; ++r) {
        if (a[r].size() != inner) throw ShapeError("matrix product shape mismatch");
        for (std::size_t k = 0; k < inner; ++k) {
            if (a[r][k].is_zero()) continue;
            for (std::size_t c = 0; c < cols; ++c) {
                if (!b[k][c].is_zero()) out[r][c] += a[r][k] * b[k][c];
            }
        }
    }
    return out;
}

ScalarMatrix transpose(const ScalarMatrix& a) {
    if (a.empty()) return {};
    ScalarMatrix out(a[0].size(), std::vector<Scalar>(a.size()));
    for (std::size_t r = 0; r < a.size(); ++r) {
        for (std::size_t c = 0; c < a[r].size(); ++c) out[c][r] = a[r][c];
    }
    return out;
}

bool is_diagonal(const ScalarMatrix& a) {
    for (std::size_t r = 0; r < a.size(); ++r) {
        for (std::size_t c = 0; c < a[r].size(); ++c) {
            if (r != c && !a[r][c].is_zero()) return false;
        }
    }
    return true;
}

Scalar determinant(const ScalarMatrix& a) {
    require_square(a);
    if (is_diagonal(a)) {
        Scalar d(1);
        for (std::size_t k = 0; k < a.size(); ++k) d *= a[k][k];
        return d;
    }
    ScalarMatrix m = a;
    const int n = static_cast<int>(m.size());
    Scalar det(1);
    for (int col = 0; col < n; ++col) {
        const int p = choose_pivot(m, col, col);
        if (p < 0) return Scalar(0);
        if (p != col) {
            std::swap(m[sz(p)], m[sz(col)]);
            det = -det;
        }
        const Scalar pivot = m[sz(col)][sz(col)];
        det *= pivot;
        const Scalar inv = pivot.inverse();
        for (int r = col + 1; r < n; ++r) {
            if (m[sz(r)][sz(col)].is_zero()) continue;
            const Scalar f = m[sz(r)][sz(col)] * inv;
            for (int c = col; c < n; ++c) {
                if (!m[sz(col)][sz(c)].is_zero()) m[sz(r)][sz(c)] -= f * m[sz(col)][sz(c)];
            }
        }
    }
    return det;
}

ScalarMatrix inverse(const ScalarMatrix& a) {
    require_square(a);
    const int n = static_cast<int>(a.size());
    if (is_diagonal(a)) {
        ScalarMatrix out(sz(n), std::vector<Scalar>(sz(n)));
        for (int k = 0; k < n; ++k) {
            if (a[sz(k)][sz(k)].is_zero()) throw DomainError("singular matrix");
            out[sz(k)][sz(k)] = a[sz(k)][sz(k)].inverse();
        }
        return out;
    }
    ScalarMatrix m = a;
    for (int r = 0; r < n; ++r) {
        m[sz(r)].resize(sz(2 * n));
        m[sz(r)][sz(n + r)] = Scalar(1);
    }
    const auto pivots = row_reduce(m, n);
    if (static_cast<int>(pivots.size()) != n) throw DomainError("singular matrix");
    ScalarMatrix out(sz(n));
    for (int r = 0; r < n; ++r) out[sz(r)].assign(m[sz(r)].begin() + n, m[sz(r)].end());
    return out;
}

std::vector<std::vector<Scalar>> kernel(const ScalarMatrix& a) {
    if (a.empty()) return {};
    const int ncols = static_cast<int>(a[0].size());
    ScalarMatrix m = a;
    const auto pivots = row_reduce(m, ncols);
    std::vector<bool> is_pivot(sz(ncols), false);
    for (int p : pivots) is_pivot[sz(p)] = true;
    std::vector<std::vector<Scalar>> basis;
    for (int free = 0; free < ncols; ++free) {
        if (is_pivot[sz(free)]) continue;
        std::vector<Scalar> v(sz(ncols));
        v[sz(free)] = Scalar(1);
        for (std::size_t r = 0; r < pivots.size(); ++r) v[sz(pivots[r])] = -m[r][sz(free)];
        basis.push_back(std::move(v));
    }
    return basis;
}

// ---------------------------------------------------------------------------

Metric::Metric(ScalarMatrix g) : g_(std::move(g)) {
    require_square(g_);
    const int n = dim();
    if (n > kMaxDimension) throw ShapeError("metric dimension out of range");
    for (int r = 0; r < n; ++r) {
        for (int c = r + 1; c < n; ++c) {
            if (!(g_[sz(r)][sz(c)] == g_[sz(c)][sz(r)])) throw DomainError("metric is not symmetric");
        }
    }
    diagonal_ = su2flux::is_diagonal(g_);
    det_ = determinant(g_);
    if (det_.is_zero()) throw DomainError("metric is singular");
    inv_ = su2flux::inverse(g_);
    if (auto root = exact_sqrt(det_)) {
        sqrt_det_ = *root;
    } else {
        if (!det_.is_real()) throw DomainError("metric determinant is not real");
        ContextPtr base = ParameterContext::empty();
        for (const auto& row : g_) {
            for (const auto& e : row) base = ParameterContext::merge(base, e.context());
        }
        // Reuse a declared root r when det / r^2 is a square.
        for (const auto& p : base->parameters()) {
            if (p.kind != ParameterContext::Kind::Quadratic) continue;
            std::optional<Scalar> q;
            try {
                q = exact_sqrt(det_ / Scalar(base, p.radicand));
            } catch (const DomainError&) {
                continue;
            }
            if (q) {
                sqrt_det_ = *q * Scalar::parameter(base, p.name);
                return;
            }
        }
        std::string name = "sqrt_det_g";
        for (int k = 2; base->find(name) != nullptr; ++k) name = "sqrt_det_g" + std::to_string(k);
        ContextPtr ctx = base->with_quadratic(name, det_.re_part());
        sqrt_det_ = Scalar::parameter(ctx, name);
    }
}

Metric Metric::diagonal(const std::vector<Scalar>& entries) {
    const std::size_t n = entries.size();
    ScalarMatrix g(n, std::vector<Scalar>(n));
    for (std::size_t k = 0; k < n; ++k) g[k][k] = entries[k];
    return Metric(std::move(g));
}

Metric Metric::euclidean(int n) {
    return Metric(identity_matrix(n));
}

Form volume_form(const Metric& g, const Orientation& o) {
    const Word top = static_cast<Word>((1u << g.dim()) - 1);
    return Form::basis(g.dim(), top, o.sign > 0 ? g.sqrt_det() : -g.sqrt_det());
}

namespace {

/// det of the minor of m with rows from word a and columns from word b.
Scalar word_minor(const ScalarMatrix& m, Word a, Word b) {
    std::vector<int> rows;
    std::vector<int> cols;
    for (int k = 0; k < 16; ++k) {
        if (a & (1u << k)) rows.push_back(k);
        if (b & (1u << k)) cols.push_back(k);
    }
    ScalarMatrix sub(rows.size(), std::vector<Scalar>(cols.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) sub[r][c] = m[sz(rows[r])][sz(cols[c])];
    }
    if (sub.empty()) return Scalar(1);
    return determinant(sub);
}

std::vector<Word> words_of_degree(int n, int k) {
    std::vector<Word> out;
    for (unsigned w = 0; w < (1u << n); ++w) {
        if (std::popcount(w) == k) out.push_back(static_cast<Word>(w));
    }
    return out;
}

}  // namespace

Form hodge_star(const Metric& g, const Orientation& o, const Form& a) {
    const int n = g.dim();
    if (a.dim() != n) throw ShapeError("form and metric dimensions differ");
    const Word top = static_cast<Word>((1u << n) - 1);
    const Scalar scale = o.sign > 0 ? g.sqrt_det() : -g.sqrt_det();
    const ScalarMatrix& inv = g.inverse_matrix();
    Form out(n);
    for (const auto& [w, c] : a.terms()) {
        const Scalar coeff = c * scale;
        if (g.is_diagonal()) {
            Scalar m(1);
            for (int k = 0; k < n; ++k) {
                if (w & (1u << k)) m *= inv[sz(k)][sz(k)];
            }
            const Word rest = static_cast<Word>(top & ~w);
            const Scalar v = coeff * m;
            out.add_term(rest, wedge_sign(w, rest) > 0 ? v : -v);
            continue;
        }
        for (Word k : words_of_degree(n, word_degree(w))) {
            const Scalar m = word_minor(inv, w, k);
            if (m.is_zero()) continue;
            const Word rest = static_cast<Word>(top & ~k);
            const Scalar v = coeff * m;
            out.add_term(rest, wedge_sign(k, rest) > 0 ? v : -v);
        }
    }
    return out;
}

Scalar inner_product(const Metric& g, const Form& a, const Form& b) {
    if (a.dim() != g.dim() || b.dim() != g.dim()) throw ShapeError("form and metric dimensions differ");
    const ScalarMatrix& inv = g.inverse_matrix();
    Scalar total(0);
    for (const auto& [wa, ca] : a.terms()) {
        for (const auto& [wb, cb] : b.terms()) {
            if (word_degree(wa) != word_degree(wb)) continue;
            if (g.is_diagonal() && wa != wb) continue;
            const Scalar m = word_minor(inv, wa, wb);
            if (!m.is_zero()) total += ca * cb * m;
        }
    }
    return total;
}

std::vector<Scalar> sharp(const Metric& g, const Form& a) {
    if (a.dim() != g.dim()) throw ShapeError("form and metric dimensions differ");
    if (!a.is_homogeneous_of(1)) throw DomainError("sharp expects a 1-form");
    const int n = g.dim();
    std::vector<Scalar> v(sz(n));
    for (int k = 0; k < n; ++k) {
        const Scalar ak = a.coefficient(static_cast<Word>(1u << k));
        if (ak.is_zero()) continue;
        for (int j = 0; j < n; ++j) {
            const Scalar& gi = g.inverse_matrix()[sz(j)][sz(k)];
            if (!gi.is_zero()) v[sz(j)] += gi * ak;
        }
    }
    return v;
}

}  // namespace su2flux
