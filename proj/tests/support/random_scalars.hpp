#pragma once

#include <random>

#include "su2flux/scalars/scalar.hpp"

namespace su2flux::fixtures {

/// Context with a free x, invertible t, and k = sqrt(1 - t^2).
inline ContextPtr sample_context() {
    ContextPtr ctx = ParameterContext::empty()->with_free("x")->with_invertible("t");
    Scalar t = Scalar::parameter(ctx, "t");
    return ctx->with_quadratic("k", (Scalar(1) - t * t).re_part());
}

/// Small random scalar: polynomial in x, t, k, i with one optional
/// denominator in t.
inline Scalar random_scalar(std::mt19937& rng, const ContextPtr& ctx) {
    std::uniform_int_distribution<int> coeff(-3, 3);
    std::uniform_int_distribution<int> pick(0, 5);
    const Scalar x = Scalar::parameter(ctx, "x");
    const Scalar t = Scalar::parameter(ctx, "t");
    const Scalar k = Scalar::parameter(ctx, "k");
    const Scalar atoms[] = {Scalar(1), x, t, k, Scalar::i(), t * k};
    Scalar s(0);
    for (int term = 0; term < 3; ++term) {
        s += Scalar(coeff(rng)) * atoms[pick(rng)] * atoms[pick(rng)];
    }
    if (pick(rng) == 0) s /= t + Scalar(coeff(rng) == 0 ? 2 : 1);
    return s;
}

/// Admissible rational point: t = (a^2 - b^2)/(a^2 + b^2), k = 2ab/(a^2 + b^2).
inline Assignment random_point(std::mt19937& rng) {
    std::uniform_int_distribution<int> small(1, 9);
    std::uniform_int_distribution<int> xs(-20, 20);
    int a = small(rng);
    int b = small(rng);
    while (a == b) b = small(rng);
    mpq_class den = a * a + b * b;
    Assignment p;
    p["t"] = mpq_class(a * a - b * b) / den;
    p["k"] = mpq_class(2 * a * b) / den;
    p["x"] = mpq_class(xs(rng), 7);
    for (auto& [name, v] : p) v.canonicalize();
    return p;
}

}  // namespace su2flux::fixtures
