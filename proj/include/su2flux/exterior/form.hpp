#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "su2flux/scalars/scalar.hpp"

namespace su2flux {

inline constexpr int kMaxDimension = 9;

/// Index word as a bitmask: bit k-1 set means coframe index k is present.
using Word = std::uint16_t;

int word_degree(Word w);
/// Digits of the word in ascending order, e.g. "135".
std::string word_digits(Word w);
Word word_of(std::initializer_list<int> indices);
/// Sign of e^a ^ e^b relative to e^{a|b}; 0 when the words overlap.
int wedge_sign(Word a, Word b);

/// Canonical term order: by degree, then lexicographically on the ascending
/// digit sequences.
struct WordOrder {
    bool operator()(Word a, Word b) const;
};

/// Finitely supported sum of coframe words with complex scalar coefficients.
/// Never stores zero coefficients; may mix degrees.
class Form {
public:
    using Terms = std::map<Word, Scalar, WordOrder>;

    explicit Form(int dim = 0);
    static Form constant(int dim, const Scalar& s);
    static Form basis(int dim, Word w, const Scalar& c = Scalar(1));
    /// The coframe 1-form e^index (1-based).
    static Form coframe(int dim, int index);

    int dim() const { return dim_; }
    const Terms& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    Scalar coefficient(Word w) const;

    /// Degrees present, ascending.
    std::vector<int> degrees() const;
    bool is_homogeneous_of(int degree) const;
    /// Degree-k component.
    Form part(int degree) const;
    /// Coefficient of the empty word when the form is a pure scalar.
    bool is_scalar() const;
    Scalar scalar_value() const;

    void add_term(Word w, const Scalar& c);

    Form operator-() const;
    Form& operator+=(const Form& o);
    Form& operator-=(const Form& o);
    Form& operator*=(const Scalar& c);
    friend Form operator+(Form a, const Form& b) { return a += b; }
    friend Form operator-(Form a, const Form& b) { return a -= b; }
    friend Form operator*(Form a, const Scalar& c) { return a *= c; }
    friend Form operator*(const Scalar& c, Form a) { return a *= c; }

    Form conj() const;
    Form re() const;
    Form im() const;

    ContextPtr context() const;

    friend bool operator==(const Form& a, const Form& b);

private:
    int dim_;
    Terms terms_;
};

/// Throws ShapeError on dimension mismatch.
Form wedge(const Form& a, const Form& b);
Form wedge_power(const Form& a, unsigned k);

/// Degreewise sign (-1)^{p(p-1)/2}.
Form lambda_involution(const Form& a);

/// Finite exponential series; throws DomainError unless every component has
/// even degree at least 2.
Form polyform_exp(const Form& a);

/// Contraction with the vector sum_k v[k] e_{k+1}; a degree -1 anti-derivation.
Form interior_product(const std::vector<Scalar>& v, const Form& a);

using ScalarMatrix = std::vector<std::vector<Scalar>>;

/// Algebra map induced by e^a -> sum_b m[a][b] e^b on covectors.
Form apply_covector_map(const ScalarMatrix& m, const Form& a);

Form substitute(const Form& a, const Substituter& sub);

/// Canonical text, e.g. "2*e12 - (1 + i)*e135"; `letter` names the coframe.
std::string to_string(const Form& a, char letter = 'e');

}  // namespace su2flux
