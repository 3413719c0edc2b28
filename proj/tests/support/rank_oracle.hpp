#pragma once

#include <bit>
#include <vector>

#include "su2flux/liealg/lie_algebra.hpp"

namespace su2flux::oracle {

// Oracle: differential of a word expanded term by term from the Leibniz rule,
// d(e^{i1..ik}) = sum_m (-1)^{m-1} e^{i1} .. d e^{im} .. e^{ik}.
inline Form oracle_d_word(const LieAlgebra& L, Word w) {
    const int n = L.dim();
    std::vector<int> idx;
    for (int k = 0; k < n; ++k) {
        if (w & (1u << k)) idx.push_back(k + 1);
    }
    Form out(n);
    for (std::size_t m = 0; m < idx.size(); ++m) {
        Form piece = Form::constant(n, Scalar(1));
        for (std::size_t j = 0; j < idx.size(); ++j) {
            piece = wedge(piece, j == m ? L.differential_of(idx[j]) : Form::coframe(n, idx[j]));
        }
        out += piece * Scalar(m % 2 == 0 ? 1 : -1);
    }
    return out;
}

// Oracle: rank over Q by plain Gauss-Jordan with rational pivots.
inline int oracle_rank(std::vector<std::vector<mpq_class>> m) {
    int rank = 0;
    const std::size_t rows = m.size();
    const std::size_t cols = rows ? m[0].size() : 0;
    for (std::size_t c = 0; c < cols && static_cast<std::size_t>(rank) < rows; ++c) {
        std::size_t p = static_cast<std::size_t>(rank);
        while (p < rows && m[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[static_cast<std::size_t>(rank)]);
        const auto& pivot = m[static_cast<std::size_t>(rank)];
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == static_cast<std::size_t>(rank) || m[r][c] == 0) continue;
            const mpq_class f = m[r][c] / pivot[c];
            for (std::size_t j = c; j < cols; ++j) m[r][j] -= f * pivot[j];
        }
        ++rank;
    }
    return rank;
}

inline std::vector<int> oracle_betti(const LieAlgebra& L) {
    const int n = L.dim();
    std::vector<std::vector<Word>> words(static_cast<std::size_t>(n + 1));
    for (unsigned w = 0; w < (1u << n); ++w) words[static_cast<std::size_t>(std::popcount(w))].push_back(static_cast<Word>(w));
    std::vector<int> rank(static_cast<std::size_t>(n + 1), 0);
    for (int k = 0; k < n; ++k) {
        const auto& src = words[static_cast<std::size_t>(k)];
        const auto& dst = words[static_cast<std::size_t>(k + 1)];
        std::vector<std::vector<mpq_class>> m(dst.size(), std::vector<mpq_class>(src.size()));
        for (std::size_t c = 0; c < src.size(); ++c) {
            const Form img = oracle_d_word(L, src[c]);
            for (std::size_t r = 0; r < dst.size(); ++r) {
                const Scalar v = img.coefficient(dst[r]);
                if (!v.is_zero()) m[r][c] = v.rational_value();
            }
        }
        rank[static_cast<std::size_t>(k)] = oracle_rank(m);
    }
    std::vector<int> b;
    for (int k = 0; k <= n; ++k) {
        b.push_back(static_cast<int>(words[static_cast<std::size_t>(k)].size()) - rank[static_cast<std::size_t>(k)] -
                    (k ? rank[static_cast<std::size_t>(k - 1)] : 0));
    }
    return b;
}

}  // namespace su2flux::oracle
