#include <gtest/gtest.h>

#include <random>

#include "printers.hpp"
#include "su2flux/errors.hpp"
#include "su2flux/exterior/expression.hpp"
#include "su2flux/gstruct/structures.hpp"

using namespace su2flux;

namespace {

struct Fixture {
    ContextPtr ctx;
    std::map<std::string, Form> forms;

    Form operator()(std::string_view text, int dim = 6) const {
        return parse_form_expression(text, dim, ExpressionScope{ctx, &forms, {}});
    }
    Scalar s(std::string_view text) const { return parse_scalar_expression(text, ExpressionScope{ctx, nullptr, {}}); }
};

Fixture with_t() { return {ParameterContext::empty()->with_invertible("t"), {}}; }

LieAlgebra algebra(const char* text, const ContextPtr& ctx = ParameterContext::empty()) {
    return parse_salamon(text, ctx);
}

// J e^1 = -e^4, J e^2 = -e^3, J e^5 = -e^6 and J^2 = -1.
AlmostComplexStructure h6_complex_structure() {
    ScalarMatrix m(6, std::vector<Scalar>(6, Scalar(0)));
    m[0][3] = Scalar(-1);
    m[3][0] = Scalar(1);
    m[1][2] = Scalar(-1);
    m[2][1] = Scalar(1);
    m[4][5] = Scalar(-1);
    m[5][4] = Scalar(1);
    return {m};
}

Metric h6_metric(const Fixture& f) {
    const Scalar q = f.s("4*t^2");
    return Metric::diagonal({1, 1, 1, 1, q, q});
}

SU3Structure h6_balanced(const Fixture& f) {
    return {h6_complex_structure(), h6_metric(f), f("b14 + b23 + 4*t^2*b56"),
            f("2*t*(b1 + i*b4)*(b2 + i*b3)*(b5 + i*b6)")};
}

SU2Structure6 h6_symplectic(const Fixture& f) {
    SU2Structure6 s;
    s.alpha = f("b1 + i*b4");
    s.omega = f("2*t*b25 - 2*t*b36");
    s.Omega = f("(b2 + 2*t*i*b5)*(-b3 + 2*t*i*b6)");
    s.g = h6_metric(f);
    return s;
}

// omega = e12 + e34, Omega = (e1 + i e2)(e3 + i e4), alpha = e5 + i e6, pulled
// back along a random invertible integer matrix.
SU2Structure6 random_su2(std::mt19937& rng) {
    std::uniform_int_distribution<int> entry(-2, 2);
    ScalarMatrix a;
    while (true) {
        a.assign(6, std::vector<Scalar>(6, Scalar(0)));
        for (auto& row : a) {
            for (auto& x : row) x = Scalar(entry(rng));
        }
        if (!determinant(a).is_zero()) break;
    }
    const Fixture f{ParameterContext::empty(), {}};
    SU2Structure6 s;
    s.alpha = apply_covector_map(a, f("e5 + i*e6"));
    s.omega = apply_covector_map(a, f("e12 + e34"));
    s.Omega = apply_covector_map(a, f("(e1 + i*e2)*(e3 + i*e4)"));
    return s;
}

}  // namespace

TEST(SU3, NilpotentBalancedStructurePasses) {
    const Fixture f = with_t();
    const Report r = validate_su3(h6_balanced(f));
    EXPECT_TRUE(r.pass) << (r.first_failure() ? r.first_failure()->identity : "");
    EXPECT_EQ(r.checks.size(), 6u);
}

TEST(SU3, InducedStructureMatchesDisplayedOne) {
    const Fixture f = with_t();
    const SU3Structure s = h6_balanced(f);
    const InducedStructure ind = induce_from_su3(s.F, s.Psi);
    EXPECT_EQ(ind.J.matrix, h6_complex_structure().matrix);
    EXPECT_EQ(ind.g, h6_metric(f));
}

TEST(SU3, ScaledCalibrationFailsNormalisation) {
    const Fixture f = with_t();
    SU3Structure s = h6_balanced(f);
    s.Psi = s.Psi * Scalar(2);
    const Report r = validate_su3(s);
    EXPECT_FALSE(r.pass);
    ASSERT_NE(r.first_failure(), nullptr);
    EXPECT_EQ(r.first_failure()->identity, "(4/3) F^3 = i Psi ^ conj(Psi)");
}

TEST(SU3, FourDimensionalNilpotentExampleWithInducedStructure) {
    const Fixture f{ParameterContext::empty(), {}};
    const SU3Structure s = make_su3(f("e13 + e24 - e56"), f("(e1 + i*e3)*(e2 + i*e4)*(e6 + i*e5)"));
    EXPECT_EQ(s.g, Metric::euclidean(6));
    EXPECT_TRUE(s.J.is_type_10(f("e1 + i*e3")));
    EXPECT_TRUE(s.J.is_type_10(f("e6 + i*e5")));
    EXPECT_TRUE(validate_su3(s).pass);
}

TEST(SU3, WrongMetricAndComplexStructureReported) {
    const Fixture f = with_t();
    SU3Structure s = h6_balanced(f);
    s.g = Metric::euclidean(6);
    Report r = validate_su3(s);
    EXPECT_FALSE(r.pass);
    EXPECT_EQ(r.first_failure()->identity, "g = F(., J .)");
    EXPECT_NE(r.first_failure()->note.find("entry (5,5)"), std::string::npos);

    SU3Structure bad = h6_balanced(f);
    bad.J.matrix[0][3] = Scalar(1);
    r = validate_su3(bad);
    EXPECT_FALSE(r.checks[0].holds);
    EXPECT_FALSE(r.pass);
}

TEST(SU3, DegenerateCalibrationCannotInduce) {
    const Fixture f{ParameterContext::empty(), {}};
    EXPECT_THROW(induce_from_su3(f("e12"), f("e123")), DomainError);
}

TEST(SU2, SymplecticNilpotentDatumPasses) {
    const Fixture f = with_t();
    const Report r = validate_su2(h6_symplectic(f));
    EXPECT_TRUE(r.pass) << (r.first_failure() ? r.first_failure()->identity : "");
}

TEST(SU2, WrongAlphaFailsContraction) {
    const Fixture f = with_t();
    SU2Structure6 s = h6_symplectic(f);
    s.alpha = f("b1 + i*b2");
    const Report r = validate_su2(s);
    EXPECT_FALSE(r.pass);
    bool contraction_failed = false;
    for (const auto& c : r.checks) {
        if (c.identity == "i_alpha Omega = 0") {
            contraction_failed = !c.holds;
            // i_{e1 + i e2} Omega = i (-b3 + 2t i b6)
            EXPECT_EQ(c.residual, f("-i*b3 - 2*t*b6"));
        }
    }
    EXPECT_TRUE(contraction_failed);
}

TEST(SU2, UnitNormAlphaFails) {
    ContextPtr ctx = ParameterContext::empty()->with_invertible("t");
    ctx = ctx->with_quadratic("r2", Scalar(2).re_part());
    const Fixture f{ctx, {}};
    SU2Structure6 s = h6_symplectic(f);
    s.alpha = f("(b1 + i*b4)/r2");
    const Report r = validate_su2(s);
    EXPECT_FALSE(r.pass);
    for (const auto& c : r.checks) {
        if (c.identity == "|alpha|^2 = 2") {
            EXPECT_FALSE(c.holds);
            EXPECT_EQ(c.residual, Form::constant(6, Scalar(-1)));
        }
    }
}

TEST(SU2, EmbeddingAddsRealAndImaginaryWedge) {
    const Fixture f = with_t();
    const SU2Structure6 s = h6_symplectic(f);
    EXPECT_EQ(embedded_fundamental_form(s), f("b14 + 2*t*b25 - 2*t*b36"));
    EXPECT_EQ(embedded_calibration(s), f("(b1 + i*b4)*(b2 + 2*t*i*b5)*(-b3 + 2*t*i*b6)"));
    const SU3Structure e = embed_su2(s);
    EXPECT_EQ(e.g, h6_metric(f));
    EXPECT_TRUE(validate_su3(e).pass);
}

TEST(SU2, ReductionRecoversTheFourDimensionalHatDatum) {
    const Fixture f{ParameterContext::empty(), {}};
    const SU3Structure s = make_su3(f("e13 + e24 - e56"), f("(e1 + i*e3)*(e2 + i*e4)*(e6 + i*e5)"));
    const SU2Structure6 r = reduce_su3(s, f("e1 + i*e3"));
    EXPECT_EQ(r.omega, f("e24 - e56"));
    EXPECT_EQ(r.Omega, f("(e2 + i*e4)*(e6 + i*e5)"));
    EXPECT_EQ(r.Omega.re(), f("e26 - e45"));
    EXPECT_EQ(r.Omega.im(), f("e25 + e46"));
    EXPECT_TRUE(validate_su2(r).pass);
}

TEST(SU2, ReductionPreconditions) {
    const Fixture f{ParameterContext::empty(), {}};
    const SU3Structure s = make_su3(f("e13 + e24 - e56"), f("(e1 + i*e3)*(e2 + i*e4)*(e6 + i*e5)"));
    EXPECT_THROW(reduce_su3(s, f("e1 - i*e3")), DomainError);
    EXPECT_THROW(reduce_su3(s, f("2*e1 + 2*i*e3")), DomainError);
}

TEST(Classify, FourDimensionalExampleIsOnlyHalfFlat) {
    const Fixture f{ParameterContext::empty(), {}};
    const LieAlgebra h4 = algebra("(0,0,0,0,12,14+23)");
    const Form F = f("e13 + e24 - e56");
    const Form Psi = f("(e1 + i*e3)*(e2 + i*e4)*(e6 + i*e5)");
    EXPECT_TRUE(classify(h4, F, Psi, StructureClass::HalfFlat).pass);
    const Report hb = classify(h4, F, Psi, StructureClass::HermitianBalanced);
    EXPECT_FALSE(hb.pass);
    ASSERT_EQ(hb.checks.size(), 3U);
    EXPECT_EQ(hb.checks[1].identity, "d Re Psi = 0");
    EXPECT_TRUE(hb.checks[1].residual.is_zero());
    EXPECT_EQ(hb.first_failure()->identity, "d Im Psi = 0");
    EXPECT_EQ(hb.first_failure()->residual, f("-e1234"));
    EXPECT_EQ(h4.d(Psi.im()), f("-e1234"));
}

TEST(Classify, NilpotentBalancedAndSymplecticStructures) {
    const Fixture f = with_t();
    const LieAlgebra h6 = algebra("(0,0,0,0,12,13)");
    EXPECT_TRUE(classify(h6, h6_balanced(f), StructureClass::HermitianBalanced).pass);
    EXPECT_TRUE(classify(h6, h6_balanced(f), StructureClass::HalfFlat).pass);
    EXPECT_FALSE(classify(h6, h6_balanced(f), StructureClass::SymplecticHalfFlat).pass);
    EXPECT_TRUE(classify(h6, h6_symplectic(f), StructureClass::SymplecticHalfFlat).pass);
    EXPECT_TRUE(classify(h6, h6_symplectic(f), StructureClass::HalfFlat).pass);
}

TEST(Classify, ClassNames) {
    for (auto c : {StructureClass::HalfFlat, StructureClass::SymplecticHalfFlat, StructureClass::HermitianBalanced}) {
        EXPECT_EQ(parse_class_name(class_name(c)), c);
    }
    EXPECT_FALSE(parse_class_name("kahler").has_value());
}

TEST(Hypo, NilpotentFiveDimensionalExample) {
    const Fixture f{ParameterContext::empty(), {}};
    const LieAlgebra L = algebra("(0,0,0,12,13)");
    const HypoStructure5 h{f("e1", 5), f("e24 - e35", 5), f("e25 + e34", 5), f("e23 + e45", 5)};
    EXPECT_TRUE(validate_hypo(h).pass);
    EXPECT_TRUE(is_hypo(L, h).pass);
    HypoStructure5 swapped = h;
    swapped.omega1 = f("e23 + e45", 5);
    const Report r = is_hypo(L, swapped);
    EXPECT_FALSE(r.pass);
    EXPECT_EQ(r.checks[0].residual, f("e125 - e134", 5));
}

TEST(Hypo, AbelianConstantForms) {
    const Fixture f{ParameterContext::empty(), {}};
    const HypoStructure5 h{f("e1", 5), f("e24 - e35", 5), f("e25 + e34", 5), f("e23 + e45", 5)};
    EXPECT_TRUE(is_hypo(algebra("(0,0,0,0,0)"), h).pass);
}

TEST(Rotation, ZeroAndQuarterTurn) {
    const Fixture f = with_t();
    const SU2Structure6 s = h6_symplectic(f);
    const SU2Structure6 same = rotate_su2(s, Scalar(1), Scalar(0));
    EXPECT_EQ(same.omega, s.omega);
    EXPECT_EQ(same.Omega, s.Omega);
    const SU2Structure6 q = rotate_su2(s, Scalar(0), Scalar(1));
    EXPECT_EQ(q.omega, s.Omega.re());
    EXPECT_EQ(q.Omega, s.omega * Scalar(-1) + s.Omega.im() * Scalar::i());
    EXPECT_THROW(rotate_su2(s, Scalar(1), Scalar(1)), DomainError);
}

TEST(Rotation, SymbolicAngleStaysValid) {
    ContextPtr ctx = ParameterContext::empty()->with_invertible("t")->with_free("c");
    const Scalar c = Scalar::parameter(ctx, "c");
    ctx = ctx->with_quadratic("s", (Scalar(1) - c * c).re_part());
    const Fixture f{ctx, {}};
    const SU2Structure6 r = rotate_su2(h6_symplectic(f), c, f.s("s"));
    const Report rep = validate_su2(r);
    EXPECT_TRUE(rep.pass) << (rep.first_failure() ? rep.first_failure()->identity : "");
}

// ---------------------------------------------------------------------------
// Properties

TEST(GStructProperties, EmbeddingOfValidDatumIsValid) {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 8; ++trial) {
        const SU2Structure6 s = random_su2(rng);
        const Report r2 = validate_su2(s);
        ASSERT_TRUE(r2.pass) << r2.first_failure()->identity;
        const SU3Structure e = embed_su2(s);
        const Report r3 = validate_su3(e);
        EXPECT_TRUE(r3.pass) << r3.first_failure()->identity;
        const SU2Structure6 back = reduce_su3(e, s.alpha);
        EXPECT_EQ(back.omega, s.omega);
        EXPECT_EQ(back.Omega, s.Omega);
    }
}

TEST(GStructProperties, RotationComposesAsAngleSum) {
    ContextPtr ctx = ParameterContext::empty()->with_free("c");
    ctx = ctx->with_quadratic("s", (Scalar(1) - Scalar::parameter(ctx, "c") * Scalar::parameter(ctx, "c")).re_part());
    ctx = ctx->with_free("u");
    ctx = ctx->with_quadratic("v", (Scalar(1) - Scalar::parameter(ctx, "u") * Scalar::parameter(ctx, "u")).re_part());
    const Scalar c = Scalar::parameter(ctx, "c");
    const Scalar s = Scalar::parameter(ctx, "s");
    const Scalar u = Scalar::parameter(ctx, "u");
    const Scalar v = Scalar::parameter(ctx, "v");
    std::mt19937 rng(32);
    const SU2Structure6 base = random_su2(rng);
    const SU2Structure6 twice = rotate_su2(rotate_su2(base, c, s), u, v);
    const SU2Structure6 once = rotate_su2(base, c * u - s * v, s * u + c * v);
    EXPECT_EQ(twice.omega, once.omega);
    EXPECT_EQ(twice.Omega, once.Omega);
    // Spot check on rational points of the circle.
    const std::pair<int, int> triples[] = {{3, 4}, {5, 12}, {8, 15}};
    for (auto [a, b] : triples) {
        const int h = a * a + b * b == 25 ? 5 : (a == 5 ? 13 : 17);
        Assignment p{{"c", mpq_class(a, h)}, {"s", mpq_class(b, h)}, {"u", mpq_class(b, h)}, {"v", mpq_class(-a, h)}};
        std::map<std::string, Scalar> values;
        for (auto& [k, x] : p) values.emplace(k, Scalar(x));
        const Substituter sub(ctx, values);
        EXPECT_EQ(substitute(twice.omega, sub), substitute(once.omega, sub));
    }
}

TEST(GStructProperties, ClassImplicationsOnCorpusAndScalings) {
    const Fixture f = with_t();
    const LieAlgebra h6 = algebra("(0,0,0,0,12,13)");
    const LieAlgebra h4 = algebra("(0,0,0,0,12,14+23)");
    struct Case {
        const LieAlgebra* L;
        Form F;
        Form Psi;
    };
    std::vector<Case> cases = {
        {&h6, h6_balanced(f).F, h6_balanced(f).Psi},
        {&h6, embedded_fundamental_form(h6_symplectic(f)), embedded_calibration(h6_symplectic(f))},
        {&h4, f("e13 + e24 - e56"), f("(e1 + i*e3)*(e2 + i*e4)*(e6 + i*e5)")},
    };
    for (const auto& base : std::vector<Case>(cases)) {
        for (int k : {2, 3, -5}) {
            cases.push_back({base.L, base.F * Scalar(k * k), base.Psi * Scalar(k * k * k)});
        }
    }
    for (const auto& cs : cases) {
        const bool hf = classify(*cs.L, cs.F, cs.Psi, StructureClass::HalfFlat).pass;
        if (classify(*cs.L, cs.F, cs.Psi, StructureClass::SymplecticHalfFlat).pass) {
            EXPECT_TRUE(hf);
        }
        if (classify(*cs.L, cs.F, cs.Psi, StructureClass::HermitianBalanced).pass) {
            EXPECT_TRUE(hf);
        }
    }
}

TEST(GStructProperties, CalibrationIsOfTypeThreeZeroOnCorpus) {
    const Fixture f = with_t();
    const std::vector<SU3Structure> corpus = {
        h6_balanced(f),
        embed_su2(h6_symplectic(f)),
        make_su3(f("e13 + e24 - e56"), f("(e1 + i*e3)*(e2 + i*e4)*(e6 + i*e5)")),
    };
    for (const auto& s : corpus) {
        const auto vectors = s.J.antiholomorphic_vectors();
        ASSERT_EQ(vectors.size(), 3u);
        for (const auto& v : vectors) EXPECT_TRUE(interior_product(v, s.Psi).is_zero());
    }
}
