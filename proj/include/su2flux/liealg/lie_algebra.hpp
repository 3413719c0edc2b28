#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "su2flux/exterior/form.hpp"

namespace su2flux {

/// Finite-dimensional Lie algebra given by the differentials of its coframe
/// generators. The Chevalley-Eilenberg differential is tabulated on every
/// index word at construction.
class LieAlgebra {
public:
    LieAlgebra() = default;
    /// Each differential must be a pure 2-form of dimension differentials.size().
    LieAlgebra(std::string name, std::vector<Form> differentials);

    int dim() const { return static_cast<int>(differentials_.size()); }
    const std::string& name() const { return name_; }
    const std::vector<Form>& differentials() const { return differentials_; }
    /// d e^k for k = 1..dim.
    const Form& differential_of(int k) const { return differentials_[static_cast<std::size_t>(k - 1)]; }

    Form d(const Form& a) const;

    ContextPtr context() const;

private:
    std::string name_;
    std::vector<Form> differentials_;
    std::vector<Form> word_d_;
};

/// Anti-derivation of degree +1 extending the generator differentials.
Form ce_differential(const LieAlgebra& algebra, const Form& a);

/// Parses "(0,0,0,0,12,14+23)". Each entry is `0` or a sum of signed
/// two-index words with optional `coeff*` prefixes. Throws ParseError.
LieAlgebra parse_salamon(std::string_view text, const ContextPtr& ctx, std::string name = "", int line = 0,
                         int column_base = 1);

std::string print_salamon(const LieAlgebra& algebra);

struct DSquaredReport {
    bool pass = true;
    int generator = 0;  // first k with d(d e^k) != 0
    Form residual;
};

DSquaredReport check_d_squared(const LieAlgebra& algebra);

/// Chevalley-Eilenberg Betti numbers b_0..b_n over the rationals. Throws
/// DomainError when a structure constant is not a rational constant.
std::vector<int> betti_numbers(const LieAlgebra& algebra);

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
int bareiss_rank(std::vector<std::vector<mpz_class>> m);

}  // namespace su2flux
