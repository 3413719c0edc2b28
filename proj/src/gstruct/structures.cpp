#include "su2flux/gstruct/structures.hpp"

#include <bit>

#include "su2flux/errors.hpp"

namespace su2flux {

namespace {

std::size_t idx(int k) { return static_cast<std::size_t>(k); }

ScalarMatrix scaled_identity(int n, const Scalar& c) {
    ScalarMatrix m(idx(n), std::vector<Scalar>(idx(n), Scalar(0)));
    for (int k = 0; k < n; ++k) m[idx(k)][idx(k)] = c;
    return m;
}

ScalarMatrix subtract(const ScalarMatrix& a, const ScalarMatrix& b) {
    ScalarMatrix out = a;
    for (std::size_t r = 0; r < a.size(); ++r) {
        for (std::size_t c = 0; c < a[r].size(); ++c) out[r][c] -= b[r][c];
    }
    return out;
}

// Matrix identity a = b as a report entry: holds iff every entry matches; the
// residual packs diagonal differences on e^r and upper entries on e^{rc}.
Check matrix_check(std::string identity, const ScalarMatrix& a, const ScalarMatrix& b) {
    const int n = static_cast<int>(a.size());
    Check out{std::move(identity), true, Form(n), ""};
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            const Scalar d = a[idx(r)][idx(c)] - b[idx(r)][idx(c)];
            if (d.is_zero()) continue;
            if (out.holds) {
                out.note = "entry (" + std::to_string(r + 1) + "," + std::to_string(c + 1) + ") differs by " + d.to_string();
            }
            out.holds = false;
            if (r == c) {
                out.residual.add_term(static_cast<Word>(1u << r), d);
            } else if (r < c) {
                out.residual.add_term(static_cast<Word>((1u << r) | (1u << c)), d);
            }
        }
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Reports

void Report::add(std::string identity, const Form& residual, std::string note) {
    Check c{std::move(identity), residual.is_zero(), residual, std::move(note)};
    if (!c.holds) pass = false;
    checks.push_back(std::move(c));
}

void Report::add_check(Check c) {
    if (!c.holds) pass = false;
    checks.push_back(std::move(c));
}

void Report::fail(std::string identity, int dim, std::string note) {
    checks.push_back(Check{std::move(identity), false, Form(dim), std::move(note)});
    pass = false;
}

const Check* Report::first_failure() const {
    for (const auto& c : checks) {
        if (!c.holds) return &c;
    }
    return nullptr;
}

// ---------------------------------------------------------------------------
// Almost complex structures

bool AlmostComplexStructure::squares_to_minus_one() const {
    return multiply(matrix, matrix) == scaled_identity(dim(), Scalar(-1));
}

Form AlmostComplexStructure::apply(const Form& a) const { return apply_covector_map(matrix, a); }

bool AlmostComplexStructure::is_type_10(const Form& theta) const {
    return apply(theta) == theta * Scalar::i();
}

std::vector<std::vector<Scalar>> AlmostComplexStructure::antiholomorphic_vectors() const {
    // (1,0)-forms: theta with theta^T J = i theta^T.
    const auto forms10 = kernel(subtract(transpose(matrix), scaled_identity(dim(), Scalar::i())));
    return kernel(forms10);
}

ScalarMatrix two_form_matrix(const Form& f) {
    const int n = f.dim();
    ScalarMatrix m(idx(n), std::vector<Scalar>(idx(n), Scalar(0)));
    for (const auto& [w, c] : f.terms()) {
        if (word_degree(w) != 2) throw DomainError("expected a 2-form");
        const int a = std::countr_zero(static_cast<unsigned>(w));
        const int b = std::countr_zero(static_cast<unsigned>(w & (w - 1)));
        m[idx(a)][idx(b)] = c;
        m[idx(b)][idx(a)] = -c;
    }
    return m;
}

// ---------------------------------------------------------------------------
// SU(3)

InducedStructure induce_from_su3(const Form& F, const Form& Psi) {
    const int n = Psi.dim();
    if (n != 6 || F.dim() != 6) throw ShapeError("SU(3) data must be 6-dimensional");
    if (!Psi.is_homogeneous_of(3)) throw DomainError("Psi is not a 3-form");
    if (!F.is_zero() && !F.is_homogeneous_of(2)) throw DomainError("F is not a 2-form");
    std::vector<Word> quads;
    for (unsigned w = 0; w < 64; ++w) {
        if (std::popcount(w) == 4) quads.push_back(static_cast<Word>(w));
    }
    ScalarMatrix a(quads.size(), std::vector<Scalar>(6, Scalar(0)));
    for (int k = 0; k < 6; ++k) {
        const Form img = wedge(Form::coframe(6, k + 1), Psi);
        for (std::size_t r = 0; r < quads.size(); ++r) a[r][idx(k)] = img.coefficient(quads[r]);
    }
    const auto forms10 = kernel(a);
    if (forms10.size() != 3) throw DomainError("Psi does not determine an almost complex structure");
    ScalarMatrix p;
    for (const auto& th : forms10) p.push_back(th);
    for (const auto& th : forms10) {
        std::vector<Scalar> c;
        for (const auto& s : th) c.push_back(s.conj());
        p.push_back(c);
    }
    ScalarMatrix d(6, std::vector<Scalar>(6, Scalar(0)));
    for (int k = 0; k < 6; ++k) d[idx(k)][idx(k)] = k < 3 ? Scalar::i() : -Scalar::i();
    const ScalarMatrix jm = multiply(inverse(p), multiply(d, p));
    AlmostComplexStructure J{jm};
    return {J, Metric(multiply(two_form_matrix(F), jm))};
}

SU3Structure make_su3(const Form& F, const Form& Psi) {
    InducedStructure ind = induce_from_su3(F, Psi);
    return {ind.J, ind.g, F, Psi};
}

Report validate_su3(const SU3Structure& s) {
    Report r;
    const int n = s.F.dim();
    if (n != 6 || s.Psi.dim() != 6 || s.J.dim() != 6 || s.g.dim() != 6) {
        r.fail("dimension 6", n, "SU(3) data must be 6-dimensional");
        return r;
    }
    const ScalarMatrix minus_one = scaled_identity(6, Scalar(-1));
    const ScalarMatrix j2 = multiply(s.J.matrix, s.J.matrix);
    r.add_check(matrix_check("J^2 = -1", j2, minus_one));
    ScalarMatrix fj;
    try {
        fj = multiply(two_form_matrix(s.F), s.J.matrix);
    } catch (const DomainError& e) {
        r.fail("F is a 2-form", n, e.what());
        return r;
    }
    r.add_check(matrix_check("g = F(., J .)", s.g.matrix(), fj));
    r.add("J F = F", s.J.apply(s.F) - s.F);
    r.add("F ^ Psi = 0", wedge(s.F, s.Psi));
    const Form f3 = wedge_power(s.F, 3);
    if (f3.is_zero()) r.fail("F^3 != 0", n, "F is degenerate");
    r.add("(4/3) F^3 = i Psi ^ conj(Psi)",
          f3 * Scalar(mpq_class(4, 3)) - wedge(s.Psi, s.Psi.conj()) * Scalar::i());
    Form type_residual(n);
    if (j2 == minus_one) {
        // First nonzero contraction, so distinct failures cannot cancel.
        for (const auto& v : s.J.antiholomorphic_vectors()) {
            type_residual = interior_product(v, s.Psi);
            if (!type_residual.is_zero()) break;
        }
        r.add("Psi of type (3,0)", type_residual);
    } else {
        r.fail("Psi of type (3,0)", n, "J is not almost complex");
    }
    return r;
}

// ---------------------------------------------------------------------------
// SU(2)

Form embedded_fundamental_form(const SU2Structure6& s) {
    return s.omega + wedge(s.alpha, s.alpha.conj()) * (Scalar::i() * Scalar(mpq_class(1, 2)));
}

Form embedded_calibration(const SU2Structure6& s) { return wedge(s.alpha, s.Omega); }

SU3Structure embed_su2(const SU2Structure6& s) {
    const Form F = embedded_fundamental_form(s);
    const Form Psi = embedded_calibration(s);
    if (s.J && s.g) return {*s.J, *s.g, F, Psi};
    InducedStructure ind = induce_from_su3(F, Psi);
    return {s.J ? *s.J : ind.J, s.g ? *s.g : ind.g, F, Psi};
}

Report validate_su2(const SU2Structure6& s) {
    Report r;
    const int n = s.omega.dim();
    if (n != 6 || s.alpha.dim() != 6 || s.Omega.dim() != 6) {
        r.fail("dimension 6", n, "SU(2) data must be 6-dimensional");
        return r;
    }
    const Form w2 = wedge(s.omega, s.omega);
    if (w2.is_zero()) r.fail("omega^2 != 0", n, "omega is degenerate");
    r.add("omega^2 = (1/2) Omega ^ conj(Omega)", w2 - wedge(s.Omega, s.Omega.conj()) * Scalar(mpq_class(1, 2)));
    r.add("omega ^ Omega = 0", wedge(s.omega, s.Omega));
    r.add("Omega ^ Omega = 0", wedge(s.Omega, s.Omega));

    std::optional<Metric> g = s.g;
    std::optional<AlmostComplexStructure> J = s.J;
    if (!g || !J) {
        try {
            InducedStructure ind = induce_from_su3(embedded_fundamental_form(s), embedded_calibration(s));
            if (!g) g = ind.g;
            if (!J) J = ind.J;
        } catch (const Error& e) {
            if (!g) {
                r.fail("metric", n, std::string("cannot induce a metric: ") + e.what());
                return r;
            }
        }
    }
    try {
        const auto v = sharp(*g, s.alpha);
        r.add("i_alpha Omega = 0", interior_product(v, s.Omega));
        r.add("i_alpha omega = 0", interior_product(v, s.omega));
        r.add("|alpha|^2 = 2",
              Form::constant(n, inner_product(*g, s.alpha.conj(), s.alpha) - Scalar(2)));
    } catch (const DomainError& e) {
        r.fail("alpha is a 1-form", n, e.what());
        return r;
    }
    if (J) r.add("alpha of type (1,0)", J->apply(s.alpha) - s.alpha * Scalar::i());
    return r;
}

SU2Structure6 reduce_su3(const SU3Structure& s, const Form& alpha) {
    if (!s.J.is_type_10(alpha)) throw DomainError("alpha is not of type (1,0)");
    if (inner_product(s.g, alpha.conj(), alpha) != Scalar(2)) throw DomainError("alpha does not have norm sqrt(2)");
    SU2Structure6 out;
    out.alpha = alpha;
    out.omega = s.F - wedge(alpha, alpha.conj()) * (Scalar::i() * Scalar(mpq_class(1, 2)));
    out.Omega = interior_product(sharp(s.g, alpha.conj()), s.Psi) * Scalar(mpq_class(1, 2));
    out.J = s.J;
    out.g = s.g;
    return out;
}

// ---------------------------------------------------------------------------
// Classes

std::string class_name(StructureClass c) {
    switch (c) {
        case StructureClass::HalfFlat: return "half-flat";
        case StructureClass::SymplecticHalfFlat: return "symplectic-half-flat";
        case StructureClass::HermitianBalanced: return "hermitian-balanced";
    }
    return "";
}

std::optional<StructureClass> parse_class_name(const std::string& name) {
    for (auto c : {StructureClass::HalfFlat, StructureClass::SymplecticHalfFlat, StructureClass::HermitianBalanced}) {
        if (class_name(c) == name) return c;
    }
    return std::nullopt;
}

Report classify(const LieAlgebra& L, const Form& F, const Form& Psi, StructureClass c) {
    Report r;
    r.add("d(F ^ F) = 0", L.d(wedge(F, F)));
    switch (c) {
        case StructureClass::HalfFlat:
            r.add("d Re Psi = 0", L.d(Psi.re()));
            break;
        case StructureClass::SymplecticHalfFlat:
            r.add("d Re Psi = 0", L.d(Psi.re()));
            r.add("dF = 0", L.d(F));
            break;
        case StructureClass::HermitianBalanced:
            r.add("d Re Psi = 0", L.d(Psi.re()));
            r.add("d Im Psi = 0", L.d(Psi.im()));
            break;
    }
    return r;
}

Report classify(const LieAlgebra& L, const SU3Structure& s, StructureClass c) { return classify(L, s.F, s.Psi, c); }

Report classify(const LieAlgebra& L, const SU2Structure6& s, StructureClass c) {
    return classify(L, embedded_fundamental_form(s), embedded_calibration(s), c);
}

// ---------------------------------------------------------------------------
// Hypo

Report validate_hypo(const HypoStructure5& h) {
    Report r;
    const int n = h.eta.dim();
    if (n != 5) {
        r.fail("dimension 5", n, "hypo data must be 5-dimensional");
        return r;
    }
    const Form w11 = wedge(h.omega1, h.omega1);
    if (wedge(h.eta, w11).is_zero()) r.fail("eta ^ omega1^2 != 0", n, "degenerate");
    const Form c = h.omega2 + h.omega3 * Scalar::i();
    r.add("(omega2 + i omega3)^2 = 0", wedge(c, c));
    r.add("omega1 ^ (omega2 + i omega3) = 0", wedge(h.omega1, c));
    r.add("(omega2 + i omega3) ^ (omega2 - i omega3) = 2 omega1^2", wedge(c, c.conj()) - w11 * Scalar(2));
    return r;
}

Report is_hypo(const LieAlgebra& L, const HypoStructure5& h) {
    Report r;
    r.add("d omega1 = 0", L.d(h.omega1));
    r.add("d(omega2 ^ eta) = 0", L.d(wedge(h.omega2, h.eta)));
    r.add("d(omega3 ^ eta) = 0", L.d(wedge(h.omega3, h.eta)));
    return r;
}

// ---------------------------------------------------------------------------
// Rotation family

SU2Structure6 rotate_su2(const SU2Structure6& s, const Scalar& cos2phi, const Scalar& sin2phi) {
    if (cos2phi * cos2phi + sin2phi * sin2phi != Scalar(1)) throw DomainError("cos^2 + sin^2 != 1");
    SU2Structure6 out;
    out.alpha = s.alpha;
    const Form re = s.Omega.re();
    out.omega = s.omega * cos2phi + re * sin2phi;
    out.Omega = s.omega * (-sin2phi) + re * cos2phi + s.Omega.im() * Scalar::i();
    out.g = s.g;
    return out;
}

}  // namespace su2flux
