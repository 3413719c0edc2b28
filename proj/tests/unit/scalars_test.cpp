#include <gtest/gtest.h>

#include <random>

#include "random_scalars.hpp"
#include "su2flux/errors.hpp"
#include "su2flux/scalars/scalar.hpp"

using namespace su2flux;

namespace {

Polynomial var(int k) { return Polynomial::variable(k); }

ContextPtr kctx() {
    ContextPtr ctx = ParameterContext::empty()->with_invertible("kpar");
    Scalar kpar = Scalar::parameter(ctx, "kpar");
    return ctx->with_quadratic("kperp", (Scalar(1) - kpar * kpar).re_part());
}

}  // namespace

TEST(Polynomial, GradedLexOrderAndPrinting) {
    const std::vector<std::string> names = {"t", "kpar"};
    Polynomial p = var(0) * var(0) * Polynomial(4) * var(1) - Polynomial(1) + var(1) * var(1) * var(1);
    EXPECT_EQ(p.to_string(names), "4*t^2*kpar + kpar^3 - 1");
    EXPECT_EQ(p.total_degree(), 3u);
    EXPECT_EQ(p.degree_in(1), 3u);
}

TEST(Polynomial, UnivariateGcdCancels) {
    Polynomial t = var(0);
    Polynomial g = Polynomial::gcd(t * t - Polynomial(1), Polynomial(3) * t - Polynomial(3));
    EXPECT_EQ(g, t - Polynomial(1));
}

TEST(Polynomial, MultivariateGcdOfKnownFactorisation) {
    Polynomial x = var(0), y = var(1), z = var(2);
    Polynomial common = (x + y) * (y * y + Polynomial(3));
    Polynomial a = common * (x - Polynomial(2) * z + Polynomial(1)) * Polynomial(5);
    Polynomial b = common * (y - z) * Polynomial(mpq_class(2, 3));
    EXPECT_EQ(Polynomial::gcd(a, b), common.monic());
    EXPECT_EQ(Polynomial::gcd(a, Polynomial(7)), Polynomial(1));
    EXPECT_EQ(Polynomial::gcd(x * x * y, x * y * z), x * y);
}

TEST(Polynomial, DivideExactRejectsRemainder) {
    Polynomial x = var(0);
    EXPECT_EQ((x * x - Polynomial(1)).divide_exact(x + Polynomial(1)), x - Polynomial(1));
    EXPECT_THROW((void)(x * x + Polynomial(1)).divide_exact(x + Polynomial(1)), DomainError);
}

TEST(Polynomial, ExactSquareRoot) {
    Polynomial x = var(0), y = var(1);
    Polynomial r = Polynomial(2) * x - Polynomial(3) * y + Polynomial(1);
    auto root = (r * r).exact_sqrt();
    ASSERT_TRUE(root.has_value());
    EXPECT_EQ(*root, r);
    EXPECT_FALSE((x * x + Polynomial(1)).exact_sqrt().has_value());
    EXPECT_FALSE(Polynomial(2).exact_sqrt().has_value());
    auto q = Polynomial(mpq_class(16, 9)).exact_sqrt();
    ASSERT_TRUE(q.has_value());
    EXPECT_EQ(*q, Polynomial(mpq_class(4, 3)));
}

TEST(RationalFunction, GcdCancellation) {
    Polynomial t = var(0);
    RationalFunction f(t * t - Polynomial(1), t - Polynomial(1));
    EXPECT_EQ(f, RationalFunction(t + Polynomial(1)));
    RationalFunction g(Polynomial(2) * t, Polynomial(4) * t * t);
    EXPECT_EQ(g.den(), t);
    EXPECT_EQ(g.num(), Polynomial(mpq_class(1, 2)));
}

TEST(Scalar, DefiningRelationReduces) {
    ContextPtr ctx = kctx();
    Scalar kpar = Scalar::parameter(ctx, "kpar");
    Scalar kperp = Scalar::parameter(ctx, "kperp");
    EXPECT_EQ(kperp * kperp + kpar * kpar, Scalar(1));
    EXPECT_EQ(normalize_scalar(kperp * kperp + kpar * kpar).to_string(), "1");
}

TEST(Scalar, LambdaCoefficientVanishesAtInverseRootTwo) {
    ContextPtr ctx = ParameterContext::empty()->with_invertible("lambda");
    ctx = ctx->with_quadratic("r", TowerElement(RationalFunction(mpq_class(1, 2))));
    Scalar lambda = Scalar::parameter(ctx, "lambda");
    Scalar coeff = (Scalar(2) * lambda * lambda - Scalar(1)) / lambda;
    EXPECT_EQ(coeff.to_string(), "(2*lambda^2 - 1)/lambda");
    Scalar r = Scalar::parameter(ctx, "r");
    EXPECT_TRUE(substitute(coeff, {{"lambda", r}}).is_zero());
    EXPECT_TRUE(substitute(coeff, {{"lambda", -r}}).is_zero());
    EXPECT_FALSE(substitute(coeff, {{"lambda", Scalar(1)}}).is_zero());
}

TEST(Scalar, RationalEvaluationAtPythagoreanPoint) {
    ContextPtr ctx = kctx();
    Scalar kpar = Scalar::parameter(ctx, "kpar");
    Scalar kperp = Scalar::parameter(ctx, "kperp");
    Assignment p{{"kpar", mpq_class(3, 5)}, {"kperp", mpq_class(4, 5)}};
    EXPECT_EQ(eval_scalar(kpar * kpar + kperp * kperp, p), (ComplexRational{1, 0}));
    EXPECT_EQ(eval_scalar(kperp / kpar, p), (ComplexRational{mpq_class(4, 3), 0}));
}

TEST(Scalar, FluxCoefficientEvaluation) {
    ContextPtr ctx = ParameterContext::empty()->with_invertible("t")->with_free("c");
    Scalar c = Scalar::parameter(ctx, "c");
    ctx = ctx->with_quadratic("s", (Scalar(1) - c * c).re_part());
    Scalar t = Scalar::parameter(ctx, "t");
    Scalar value = Scalar(4) * t * t * Scalar::parameter(ctx, "c");
    Assignment p{{"t", 2}, {"c", 1}, {"s", 0}};
    EXPECT_EQ(eval_scalar(value, p), (ComplexRational{16, 0}));
}

TEST(Scalar, EvaluationErrors) {
    ContextPtr ctx = kctx();
    Scalar kpar = Scalar::parameter(ctx, "kpar");
    Scalar kperp = Scalar::parameter(ctx, "kperp");
    EXPECT_THROW(eval_scalar(kperp, {{"kpar", mpq_class(3, 5)}, {"kperp", mpq_class(1, 2)}}), RelationError);
    Scalar pole = Scalar(1) / (kpar - Scalar(mpq_class(1, 2)));
    EXPECT_THROW(eval_scalar(pole, {{"kpar", mpq_class(1, 2)}}), PoleError);
    EXPECT_THROW(eval_scalar(kpar, {}), DomainError);
}

TEST(Scalar, FreeParametersCannotBeInverted) {
    ContextPtr ctx = ParameterContext::empty()->with_free("c");
    Scalar c = Scalar::parameter(ctx, "c");
    EXPECT_THROW((void)(Scalar(1) / c), DomainError);
    EXPECT_THROW((void)(Scalar(1) / Scalar(0)), DomainError);
}

TEST(Scalar, TowerInverses) {
    ContextPtr ctx = kctx();
    Scalar kperp = Scalar::parameter(ctx, "kperp");
    Scalar a = Scalar(1) + kperp;
    EXPECT_EQ(a * a.inverse(), Scalar(1));

    ContextPtr nested = ParameterContext::empty()->with_quadratic("r2", TowerElement(RationalFunction(2)));
    Scalar r2 = Scalar::parameter(nested, "r2");
    nested = nested->with_quadratic("q", (Scalar(1) + r2).re_part());
    Scalar q = Scalar::parameter(nested, "q");
    EXPECT_EQ(q * q, Scalar(1) + r2);
    Scalar b = q + r2 * q + Scalar(3);
    EXPECT_EQ(b * b.inverse(), Scalar(1));
}

TEST(Scalar, ComplexArithmetic) {
    Scalar i = Scalar::i();
    EXPECT_EQ((Scalar(1) + i) * (Scalar(1) - i), Scalar(2));
    EXPECT_EQ((Scalar(1) + i).inverse(), (Scalar(1) - i) / Scalar(2));
    EXPECT_EQ(i * i, Scalar(-1));
    EXPECT_EQ((Scalar(1) - i).to_string(), "1 - i");
    EXPECT_EQ((Scalar(3) * i).to_string(), "i*3");
}

TEST(Scalar, PrintingIsCanonical) {
    ContextPtr ctx = kctx();
    Scalar kpar = Scalar::parameter(ctx, "kpar");
    Scalar kperp = Scalar::parameter(ctx, "kperp");
    EXPECT_EQ((Scalar(-4) * kperp / kpar).to_string(), "(-4/kpar)*kperp");
    EXPECT_EQ((Scalar(2) * kperp).to_string(), "2*kperp");
    EXPECT_EQ((Scalar(1) - kperp).to_string(), "1 - kperp");
    EXPECT_EQ((Scalar(1) / (kpar * kpar)).to_string(), "1/kpar^2");
}

TEST(Scalar, QuadraticRadicandValidation) {
    auto ctx = ParameterContext::empty();
    EXPECT_THROW(ctx->with_quadratic("r", TowerElement(RationalFunction(4))), DomainError);
    EXPECT_THROW(ctx->with_quadratic("r", TowerElement(RationalFunction(-2))), DomainError);
    EXPECT_THROW(ctx->with_free("a")->with_free("a"), DomainError);
}

TEST(ScalarProperties, RingAxiomsOnRandomScalars) {
    std::mt19937 rng(20240607);
    ContextPtr ctx = fixtures::sample_context();
    for (int trial = 0; trial < 60; ++trial) {
        Scalar a = fixtures::random_scalar(rng, ctx);
        Scalar b = fixtures::random_scalar(rng, ctx);
        Scalar c = fixtures::random_scalar(rng, ctx);
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_EQ(a * b, b * a);
        EXPECT_EQ(a + b - b, a);
        EXPECT_TRUE((a - a).is_zero());
    }
}

TEST(ScalarProperties, NormalizeIsIdempotentAndEvalCompatible) {
    std::mt19937 rng(7);
    ContextPtr ctx = fixtures::sample_context();
    for (int trial = 0; trial < 40; ++trial) {
        Scalar a = fixtures::random_scalar(rng, ctx);
        Scalar n = normalize_scalar(a);
        EXPECT_EQ(normalize_scalar(n), n);
        EXPECT_EQ(n, a);
        Assignment p = fixtures::random_point(rng);
        try {
            EXPECT_EQ(eval_scalar(n, p), eval_scalar(a, p));
        } catch (const PoleError&) {
        }
    }
}

TEST(ScalarProperties, EvalIsRingHomomorphism) {
    std::mt19937 rng(99);
    ContextPtr ctx = fixtures::sample_context();
    auto plain = [](const ComplexRational& z) { return z; };
    for (int trial = 0; trial < 40; ++trial) {
        Scalar a = fixtures::random_scalar(rng, ctx);
        Scalar b = fixtures::random_scalar(rng, ctx);
        Assignment p = fixtures::random_point(rng);
        try {
            ComplexRational ea = plain(eval_scalar(a, p));
            ComplexRational eb = plain(eval_scalar(b, p));
            ComplexRational sum = eval_scalar(a + b, p);
            ComplexRational prod = eval_scalar(a * b, p);
            EXPECT_EQ(sum, (ComplexRational{ea.re + eb.re, ea.im + eb.im}));
            EXPECT_EQ(prod, (ComplexRational{ea.re * eb.re - ea.im * eb.im, ea.re * eb.im + ea.im * eb.re}));
        } catch (const PoleError&) {
        }
    }
}

TEST(ScalarProperties, NormalFormEqualityMatchesPointEvaluation) {
    std::mt19937 rng(31337);
    ContextPtr ctx = fixtures::sample_context();
    const Scalar t = Scalar::parameter(ctx, "t");
    const Scalar k = Scalar::parameter(ctx, "k");
    std::uniform_int_distribution<int> shift(1, 6);
    for (int trial = 0; trial < 30; ++trial) {
        Scalar a = fixtures::random_scalar(rng, ctx);
        Scalar c = (t * t + Scalar(shift(rng)) * t + Scalar(5)) * (Scalar(shift(rng)) + k);
        Scalar same = (a * c) / c;
        Scalar other = a + Scalar(1) / (t + Scalar(3));
        int agree_same = 0;
        int agree_other = 0;
        int points = 0;
        while (points < 8) {
            Assignment p = fixtures::random_point(rng);
            try {
                if (eval_scalar(a, p) == eval_scalar(same, p)) ++agree_same;
                if (eval_scalar(a, p) == eval_scalar(other, p)) ++agree_other;
                ++points;
            } catch (const PoleError&) {
            } catch (const DomainError&) {
            }
        }
        EXPECT_TRUE((a - same).is_zero());
        EXPECT_EQ(agree_same, 8);
        EXPECT_FALSE((a - other).is_zero());
        EXPECT_LT(agree_other, 8);
    }
}
