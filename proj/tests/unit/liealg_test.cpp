#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <numeric>
#include <random>

#include "printers.hpp"
#include "rank_oracle.hpp"
#include "su2flux/errors.hpp"
#include "su2flux/exterior/expression.hpp"
#include "su2flux/liealg/lie_algebra.hpp"

using namespace su2flux;
using su2flux::oracle::oracle_betti;
using su2flux::oracle::oracle_d_word;

namespace {

const char* const kH4 = "(0,0,0,0,12,14+23)";
const char* const kH6 = "(0,0,0,0,12,13)";
const char* const kS1 = "(0,0,13,-14,15,-16)";
const char* const kS2 = "(0,0,-13-24,-14+23,15+26,16-25)";
const char* const kHypo = "(0,0,0,12,13)";

LieAlgebra algebra(const char* text) {
    return parse_salamon(text, ParameterContext::empty());
}

Form e(int dim, std::initializer_list<int> idx, const Scalar& c = Scalar(1)) {
    return Form::basis(dim, word_of(idx), c);
}

// Algebra obtained from L by e^k -> sign_k e^{perm(k)}.
LieAlgebra relabel(const LieAlgebra& L, const std::vector<int>& perm, const std::vector<int>& sign) {
    const int n = L.dim();
    ScalarMatrix m(static_cast<std::size_t>(n), std::vector<Scalar>(static_cast<std::size_t>(n), Scalar(0)));
    for (int k = 0; k < n; ++k) m[static_cast<std::size_t>(k)][static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])] = Scalar(sign[static_cast<std::size_t>(k)]);
    std::vector<Form> diffs(static_cast<std::size_t>(n), Form(n));
    for (int k = 0; k < n; ++k) {
        // d(f^{perm k}) = sign_k * image of d(e^k)
        diffs[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])] =
            apply_covector_map(m, L.differential_of(k + 1)) * Scalar(sign[static_cast<std::size_t>(k)]);
    }
    return LieAlgebra("relabelled", diffs);
}

}  // namespace

TEST(Salamon, ParsesFourDimensionalNilpotentExample) {
    const LieAlgebra h4 = algebra(kH4);
    ASSERT_EQ(h4.dim(), 6);
    EXPECT_EQ(h4.differential_of(5), e(6, {1, 2}));
    EXPECT_EQ(h4.differential_of(6), e(6, {1, 4}) + e(6, {2, 3}));
    for (int k = 1; k <= 4; ++k) EXPECT_TRUE(h4.differential_of(k).is_zero());
}

TEST(Salamon, ParsesSolvableExampleWithSigns) {
    const LieAlgebra s1 = algebra(kS1);
    EXPECT_EQ(s1.differential_of(4), -e(6, {1, 4}));
    EXPECT_EQ(s1.differential_of(6), -e(6, {1, 6}));
    const LieAlgebra s2 = algebra(kS2);
    EXPECT_EQ(s2.differential_of(3), -e(6, {1, 3}) - e(6, {2, 4}));
}

TEST(Salamon, AbelianAlgebra) {
    const LieAlgebra ab = algebra("(0,0,0,0,0,0)");
    EXPECT_EQ(ab.dim(), 6);
    for (const auto& f : ab.differentials()) EXPECT_TRUE(f.is_zero());
}

TEST(Salamon, CoefficientsAndParameters) {
    const ContextPtr ctx = ParameterContext::empty()->with_invertible("t");
    const Scalar t = Scalar::parameter(ctx, "t");
    const LieAlgebra L = parse_salamon("(0,0,2*12, -t*13 + 1/2*23)", ctx);
    EXPECT_EQ(L.differential_of(3), e(4, {1, 2}, Scalar(2)));
    EXPECT_EQ(L.differential_of(4), e(4, {1, 3}, -t) + e(4, {2, 3}, Scalar(mpq_class(1, 2))));
    EXPECT_EQ(print_salamon(L), "(0,0,2*12,-t*13+1/2*23)");
}

TEST(Salamon, ParseErrorsCarryPositions) {
    const ContextPtr ctx = ParameterContext::empty();
    try {
        parse_salamon("(0,0,0,0,12,11)", ctx, "", 3, 10);
        FAIL() << "expected ParseError";
    } catch (const ParseError& err) {
        EXPECT_EQ(err.line(), 3);
        EXPECT_EQ(err.column(), 10 + 13);
        EXPECT_NE(std::string(err.what()).find("repeated index 1"), std::string::npos);
    }
    try {
        parse_salamon("(0,0,0,0,12,17)", ctx);
        FAIL() << "expected ParseError";
    } catch (const ParseError& err) {
        EXPECT_EQ(err.column(), 14);
    }
    EXPECT_THROW(parse_salamon("(0,0,0,0,12,1)", ctx), ParseError);
    EXPECT_THROW(parse_salamon("(0,0,0,0,12,3*)", ctx), ParseError);
    EXPECT_THROW(parse_salamon("(0,0,0,0,12,q*13)", ctx), UndeclaredSymbolError);
    EXPECT_THROW(parse_salamon("0,0,0", ctx), ParseError);
    EXPECT_THROW(parse_salamon("(0,,0)", ctx), ParseError);
    EXPECT_THROW(parse_salamon("(0,0,12 13)", ctx), ParseError);
}

TEST(Salamon, PrintParseRoundTripOnCorpus) {
    for (const char* text : {kH4, kH6, kS1, kS2, kHypo, "(0,0,0,0,0,0)"}) {
        const LieAlgebra L = algebra(text);
        EXPECT_EQ(print_salamon(L), text);
        EXPECT_EQ(algebra(print_salamon(L).c_str()).differentials(), L.differentials());
    }
}

TEST(Differential, GeneratorsAndWords) {
    const LieAlgebra h6 = algebra(kH6);
    EXPECT_EQ(h6.d(Form::coframe(6, 5)), e(6, {1, 2}));
    EXPECT_TRUE(h6.d(Form::coframe(6, 1)).is_zero());
    const LieAlgebra s2 = algebra(kS2);
    EXPECT_EQ(ce_differential(s2, Form::coframe(6, 3)), -e(6, {1, 3}) - e(6, {2, 4}));
}

TEST(Differential, ImaginaryPartOfCalibrationOnFourDimensionalExample) {
    const LieAlgebra h4 = algebra(kH4);
    const Form Psi = parse_form_expression("(e1 + i*e3)*(e2 + i*e4)*(e6 + i*e5)", 6, ExpressionScope{});
    EXPECT_EQ(h4.d(Psi.im()), -e(6, {1, 2, 3, 4}));
}

TEST(Differential, MatchesLeibnizOracleOnAllWords) {
    for (const char* text : {kH4, kH6, kS1, kS2}) {
        const LieAlgebra L = algebra(text);
        for (unsigned w = 0; w < (1u << 6); ++w) {
            EXPECT_EQ(L.d(Form::basis(6, static_cast<Word>(w))), oracle_d_word(L, static_cast<Word>(w))) << text;
        }
    }
}

TEST(DSquared, CorpusAlgebrasPass) {
    for (const char* text : {kH4, kH6, kS1, kS2, kHypo}) {
        EXPECT_TRUE(check_d_squared(algebra(text)).pass) << text;
    }
}

TEST(DSquared, ModifiedAlgebraFailsWithResidual) {
    const DSquaredReport r = check_d_squared(algebra("(0,0,0,0,12,35)"));
    EXPECT_FALSE(r.pass);
    EXPECT_EQ(r.generator, 6);
    // -e3 ^ e12
    EXPECT_EQ(r.residual, -wedge(Form::coframe(6, 3), e(6, {1, 2})));
}

TEST(Betti, FirstSolvableExample) {
    const auto b = betti_numbers(algebra(kS1));
    ASSERT_EQ(b.size(), 7u);
    EXPECT_EQ(b[1], 2);
    EXPECT_EQ(b[2], 5);
    EXPECT_EQ(b[3], 8);
    EXPECT_EQ(b, oracle_betti(algebra(kS1)));
}

TEST(Betti, AbelianBinomials) {
    EXPECT_EQ(betti_numbers(algebra("(0,0,0,0,0,0)")), (std::vector<int>{1, 6, 15, 20, 15, 6, 1}));
}

TEST(Betti, FourDimensionalNilpotentFirstBetti) {
    const auto b = betti_numbers(algebra(kH4));
    EXPECT_EQ(b[1], 4);
    EXPECT_EQ(b, oracle_betti(algebra(kH4)));
}

TEST(Betti, ParametersRejected) {
    const ContextPtr ctx = ParameterContext::empty()->with_invertible("t");
    EXPECT_THROW(betti_numbers(parse_salamon("(0,0,t*12)", ctx)), DomainError);
}

TEST(Betti, BareissRank) {
    EXPECT_EQ(bareiss_rank({{2, 4, 6}, {1, 2, 3}, {0, 1, 1}}), 2);
    EXPECT_EQ(bareiss_rank({{0, 0}, {0, 0}}), 0);
    EXPECT_EQ(bareiss_rank({{3, 1}, {1, 3}}), 2);
}

TEST(LieProperties, EulerCharacteristicVanishesAndPoincareDuality) {
    for (const char* text : {kH4, kH6, kS1, kS2, kHypo}) {
        const LieAlgebra L = algebra(text);
        const auto b = betti_numbers(L);
        EXPECT_EQ(b, oracle_betti(L)) << text;
        int chi = 0;
        for (std::size_t k = 0; k < b.size(); ++k) chi += (k % 2 == 0 ? 1 : -1) * b[k];
        EXPECT_EQ(chi, 0) << text;
        for (std::size_t k = 0; k < b.size(); ++k) EXPECT_EQ(b[k], b[b.size() - 1 - k]) << text << " degree " << k;
    }
}

TEST(LieProperties, BettiInvariantUnderSignedPermutations) {
    std::mt19937 rng(21);
    for (const char* text : {kH4, kH6, kS1, kS2}) {
        const LieAlgebra L = algebra(text);
        const auto expected = betti_numbers(L);
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<int> perm(6);
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), rng);
            std::vector<int> sign(6);
            for (int& s : sign) s = (rng() % 2) ? 1 : -1;
            const LieAlgebra M = relabel(L, perm, sign);
            EXPECT_TRUE(check_d_squared(M).pass);
            EXPECT_EQ(betti_numbers(M), expected) << text;
        }
    }
}
