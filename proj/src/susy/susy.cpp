#include "su2flux/susy/susy.hpp"

#include <utility>

#include "su2flux/errors.hpp"

namespace su2flux {

namespace {

Scalar half() { return Scalar(mpq_class(1, 2)); }
Scalar eighth() { return Scalar(mpq_class(1, 8)); }

void require_nonzero(const Scalar& k, const char* name) {
    if (k.is_zero()) throw DomainError(std::string(name) + " is zero: intermediate regime violated");
}

void append(Report& into, const Report& from, const std::string& prefix) {
    for (Check c : from.checks) {
        c.identity = prefix + c.identity;
        into.add_check(std::move(c));
    }
}

[[noreturn]] void throw_failure(const std::string& what, const Report& r) {
    const Check* c = r.first_failure();
    std::string msg = what;
    if (c != nullptr) {
        msg += ": " + c->identity;
        if (!c->residual.is_zero()) msg += " (residual " + to_string(c->residual) + ")";
        if (!c->note.empty()) msg += " [" + c->note + "]";
    }
    throw InvalidSolutionError(msg);
}

int sign_pow(int e) { return (e % 2 == 0) ? 1 : -1; }

}  // namespace

// ---------------------------------------------------------------------------
// Parameters and projection

std::string kind_name(SusyKind k) { return k == SusyKind::IIA ? "IIA" : "IIB"; }

std::optional<SusyKind> parse_kind_name(const std::string& name) {
    if (name == "IIA") return SusyKind::IIA;
    if (name == "IIB") return SusyKind::IIB;
    return std::nullopt;
}

std::string plane_name(OPlane p) { return p == OPlane::O5 ? "O5" : "O6"; }

std::optional<OPlane> parse_plane_name(const std::string& name) {
    if (name == "O5") return OPlane::O5;
    if (name == "O6") return OPlane::O6;
    return std::nullopt;
}

OPlane default_plane(SusyKind k) { return k == SusyKind::IIA ? OPlane::O6 : OPlane::O5; }

SUSYParams make_params(const Scalar& kpar, const Scalar& kperp, OPlane plane) {
    if (kpar * kpar + kperp * kperp != Scalar(1)) throw DomainError("kpar^2 + kperp^2 != 1");
    return {kpar, kperp, plane};
}

ProjectionTrig projection_trig(const SUSYParams& p) {
    const Scalar a = p.kpar * p.kpar;
    const Scalar b = p.kperp * p.kperp;
    const Scalar m = Scalar(2) * p.kpar * p.kperp;
    if (p.plane == OPlane::O5) return {a - b, m};
    return {b - a, -m};
}

ProjectionData projection_split(const Form& omega, const Form& re_Omega, const ProjectionTrig& t) {
    const Scalar& c = t.cos2phi;
    const Scalar& s = t.sin2phi;
    if (c * c + s * s != Scalar(1)) throw DomainError("cos^2 2phi + sin^2 2phi != 1");
    ProjectionData out;
    out.omega_par = (omega * (Scalar(1) + c) + re_Omega * s) * half();
    out.omega_perp = (omega * (Scalar(1) - c) - re_Omega * s) * half();
    out.re_Omega_par = (re_Omega * (Scalar(1) - c) + omega * s) * half();
    out.re_Omega_perp = (re_Omega * (Scalar(1) + c) - omega * s) * half();
    out.trig = t;
    return out;
}

SpanVector sigma_action(const SpanVector& v, const ProjectionTrig& t) {
    // sigma(a w + b R + e I) = a (c w + s R) + b (s w - c R) - e I
    const Scalar& c = t.cos2phi;
    const Scalar& s = t.sin2phi;
    return {v.omega * c + v.re_Omega * s, v.omega * s - v.re_Omega * c, -v.im_Omega};
}

Form realize(const SpanVector& v, const Form& omega, const Form& re_Omega, const Form& im_Omega) {
    return omega * v.omega + re_Omega * v.re_Omega + im_Omega * v.im_Omega;
}

// ---------------------------------------------------------------------------
// Solutions

Form derived_H(const SUSYSolution& sol) {
    require_nonzero(sol.params.kpar, "kpar");
    return sol.algebra.d(sol.im_Omega) * (sol.params.kperp / sol.params.kpar);
}

SU2Structure6 underlying_su2(const SUSYSolution& sol) {
    const ProjectionTrig t = projection_trig(sol.params);
    if (t.sin2phi.is_zero()) throw DomainError("sin 2phi is zero: the projection split cannot be undone");
    SU2Structure6 out;
    out.alpha = sol.alpha;
    out.omega = (sol.re_Omega_par * (Scalar(1) + t.cos2phi) - sol.re_Omega_perp * (Scalar(1) - t.cos2phi)) *
                t.sin2phi.inverse();
    out.Omega = sol.re_Omega_par + sol.re_Omega_perp + sol.im_Omega * Scalar::i();
    out.g = sol.g;
    return out;
}

Metric solution_metric(const SUSYSolution& sol) {
    if (sol.g) return *sol.g;
    const SU2Structure6 s = underlying_su2(sol);
    return induce_from_su3(embedded_fundamental_form(s), embedded_calibration(s)).g;
}

Report verify_susy(const SUSYSolution& sol) {
    const LieAlgebra& L = sol.algebra;
    const Scalar& kpar = sol.params.kpar;
    const Scalar& kperp = sol.params.kperp;
    require_nonzero(kpar, "kpar");
    const Scalar ratio = kperp / kpar;
    const Form re_a = sol.alpha.re();
    const Form im_a = sol.alpha.im();
    const Form H = derived_H(sol);
    const Form d_im_Omega = L.d(sol.im_Omega);
    Report r;
    if (sol.kind == SusyKind::IIA) {
        r.add("d Re alpha = 0", L.d(re_a), "d Re alpha^ = 0");
        r.add("kpar H = kperp d Im Omega", H * kpar - d_im_Omega * kperp, "defines H");
        r.add("d Re Omega_perp = kpar kperp Re alpha ^ d Im alpha",
              L.d(sol.re_Omega_perp) - wedge(re_a, L.d(im_a)) * (kpar * kperp), "d F^ = 0");
        r.add("H ^ Re alpha = -(kperp/kpar) d(Im alpha ^ Re Omega_par)",
              wedge(H, re_a) + L.d(wedge(im_a, sol.re_Omega_par)) * ratio, "d Re Psi^ = 0");
    } else {
        const Form d_perp = L.d(sol.re_Omega_perp);
        r.add("d Re alpha = 0", L.d(re_a), "d alpha^_1 = 0");
        r.add("d Im alpha = 0", L.d(im_a), "d alpha^_1 = 0");
        r.add("kpar H = kperp d Im Omega", H * kpar - d_im_Omega * kperp, "defines H");
        r.add("Re alpha ^ H = -(kperp/kpar) Im alpha ^ d Re Omega_perp",
              wedge(re_a, H) + wedge(im_a, d_perp) * ratio, "d Re Psi^_2 = 0");
        r.add("Im alpha ^ H = (kperp/kpar) Re alpha ^ d Re Omega_perp",
              wedge(im_a, H) - wedge(re_a, d_perp) * ratio, "d Re Psi^_1 = 0");
        r.add("Re alpha ^ Im alpha ^ d Re Omega_par = -H ^ Im Omega",
              wedge(wedge(re_a, im_a), L.d(sol.re_Omega_par)) + wedge(H, sol.im_Omega));
    }
    return r;
}

// ---------------------------------------------------------------------------
// Fluxes

const Form* FluxSet::find(const std::string& label) const {
    for (const auto& f : starred) {
        if (f.label == label) return &f.form;
    }
    for (const auto& f : unstarred) {
        if (f.label == label) return &f.form;
    }
    return nullptr;
}

FluxSet evaluate_flux_formulas(const SUSYSolution& sol) {
    const LieAlgebra& L = sol.algebra;
    const Scalar& kpar = sol.params.kpar;
    const Scalar& kperp = sol.params.kperp;
    const Form re_a = sol.alpha.re();
    const Form im_a = sol.alpha.im();
    FluxSet out;
    out.kind = sol.kind;
    out.H = derived_H(sol);
    const Scalar inv_kpar = kpar.inverse();
    if (sol.kind == SusyKind::IIA) {
        const Form d_im_a = L.d(im_a);
        const Form F0 = wedge(d_im_a, wedge(sol.im_Omega, sol.im_Omega)) * (kperp * half()) +
                        wedge(wedge(out.H, re_a), sol.re_Omega_par) * inv_kpar;
        // The last term completes the 4-form part of (d - H^) Im Phi_-.
        const Form F2 = wedge(d_im_a, sol.im_Omega) * (-kpar) + wedge(L.d(sol.re_Omega_par), re_a) * inv_kpar -
                        wedge(L.d(sol.im_Omega), im_a) * inv_kpar;
        const Form F4 = d_im_a * (-kperp);
        out.starred = {{"gs*F0", F0}, {"gs*F2", F2}, {"gs*F4", F4}};
    } else {
        require_nonzero(kperp, "kperp");
        const Scalar inv_kperp = kperp.inverse();
        const Form F1 = wedge(out.H, sol.re_Omega_par) * inv_kperp;
        const Form F3 = L.d(sol.re_Omega_par) * inv_kperp;
        out.starred = {{"e^(i theta) gs*F1", F1}, {"e^(i theta) gs*F3", F3}};
    }
    return out;
}

FluxSet compute_fluxes(const SUSYSolution& sol) {
    const Report r = verify_susy(sol);
    if (!r.pass) throw_failure("SUSY equations fail", r);
    return evaluate_flux_formulas(sol);
}

FluxSet unstar_fluxes(FluxSet fluxes, const Metric& g, const Orientation& o) {
    fluxes.unstarred.clear();
    for (const auto& f : fluxes.starred) {
        // label "<prefix>*F<k>" -> "<prefix> F<k>"
        const auto star = f.label.rfind('*');
        const int k = f.label.back() - '0';
        const int n = g.dim();
        const Form F = hodge_star(g, o, f.form) * Scalar(sign_pow(k * (n - k)));
        fluxes.unstarred.push_back({f.label.substr(0, star) + " " + f.label.substr(star + 1), F});
    }
    return fluxes;
}

FluxSet iia_fluxes_from_pure_spinor(const SUSYSolution& sol) {
    if (sol.kind != SusyKind::IIA) throw DomainError("pure-spinor flux route implemented for IIA only");
    const SU2Structure6 s = underlying_su2(sol);
    const PureSpinorPair pp = pure_spinor_pair(s.alpha, s.omega, s.Omega, sol.params.kpar, sol.params.kperp);
    FluxSet out;
    out.kind = SusyKind::IIA;
    out.H = derived_H(sol);
    const Form X = pp.minus.im();
    const Form Y = sol.algebra.d(X) - wedge(out.H, X);
    // degree 6-k part of Y equals (1/8) (-1)^{k(k-1)/2} gs*F_k
    for (int k : {0, 2, 4}) {
        const Form part = Y.part(6 - k) * Scalar(8 * sign_pow(k * (k - 1) / 2));
        out.starred.push_back({"gs*F" + std::to_string(k), part});
    }
    return out;
}

Report bianchi_residuals(const SUSYSolution& sol, const FluxSet& f) {
    const LieAlgebra& L = sol.algebra;
    Report r;
    r.add("dH = 0", L.d(f.H));
    auto get = [&](const std::string& label) {
        const Form* p = f.find(label);
        if (p == nullptr) throw DomainError("missing unstarred flux " + label);
        return *p;
    };
    if (f.kind == SusyKind::IIA) {
        const Form F0 = get("gs F0");
        const Form F2 = get("gs F2");
        const Form F4 = get("gs F4");
        r.add("dF0 = 0", L.d(F0));
        r.add("dF2 - H F0 = 0", L.d(F2) - wedge(f.H, F0));
        r.add("dF4 - H ^ F2 = 0", L.d(F4) - wedge(f.H, F2));
    } else {
        const Form F1 = get("e^(i theta) gs F1");
        const Form F3 = get("e^(i theta) gs F3");
        r.add("dF1 = 0", L.d(F1));
        r.add("dF3 - H ^ F1 = 0", L.d(F3) - wedge(f.H, F1));
    }
    return r;
}

Report betti_witnesses(const SUSYSolution& sol) {
    const Metric g = solution_metric(sol);
    Report r;
    r.add("d *Re alpha = 0", sol.algebra.d(hodge_star(g, sol.orientation, sol.alpha.re())));
    r.add("d *Im alpha = 0", sol.algebra.d(hodge_star(g, sol.orientation, sol.alpha.im())));
    return r;
}

// ---------------------------------------------------------------------------
// Hat structures

HatData hat_structures(const SUSYSolution& sol) {
    const Scalar& kpar = sol.params.kpar;
    const Scalar& kperp = sol.params.kperp;
    require_nonzero(kpar, "kpar");
    require_nonzero(kperp, "kperp");
    const Form re_a = sol.alpha.re();
    const Form im_a = sol.alpha.im();
    const Scalar i = Scalar::i();
    HatData out;
    out.kind = sol.kind;
    if (sol.kind == SusyKind::IIA) {
        SU2Structure6 h;
        h.alpha = re_a + im_a * (i * kpar);
        h.omega = sol.re_Omega_perp * kperp.inverse();
        h.Omega = sol.im_Omega - sol.re_Omega_par * (i * kpar.inverse());
        out.structures.push_back(std::move(h));
    } else {
        SU2Structure6 h1;
        h1.alpha = re_a * kpar + im_a * i;
        h1.omega = sol.re_Omega_par * kperp.inverse();
        h1.Omega = sol.re_Omega_perp * kpar.inverse() + sol.im_Omega * i;
        SU2Structure6 h2 = h1;
        h2.alpha = im_a * kpar - re_a * i;
        out.structures.push_back(std::move(h1));
        out.structures.push_back(std::move(h2));
    }
    return out;
}

Report hat_certificate(const LieAlgebra& L, const HatData& hat) {
    Report r;
    if (hat.kind == SusyKind::IIA) {
        const SU2Structure6& h = hat.structures.at(0);
        append(r, classify(L, h, StructureClass::SymplecticHalfFlat), "");
        r.add("d Re alpha^ = 0", L.d(h.alpha.re()));
    } else {
        const SU2Structure6& h1 = hat.structures.at(0);
        append(r, classify(L, h1, StructureClass::HalfFlat), "structure 1: ");
        r.add("structure 1: d alpha^ = 0", L.d(h1.alpha));
        append(r, classify(L, hat.structures.at(1), StructureClass::HalfFlat), "structure 2: ");
    }
    return r;
}

HatData hat_from_solution(const SUSYSolution& sol) {
    const Report v = verify_susy(sol);
    if (!v.pass) throw_failure("SUSY equations fail", v);
    HatData hat;
    try {
        hat = hat_structures(sol);
    } catch (const DomainError& e) {
        throw InvalidSolutionError(e.what());
    }
    const Report c = hat_certificate(sol.algebra, hat);
    if (!c.pass) throw_failure("hat certificate fails", c);
    return hat;
}

SUSYSolution assemble_from_hat(const LieAlgebra& L, const SU2Structure6& hat, const SUSYParams& params,
                               SusyKind kind) {
    const Scalar& kpar = params.kpar;
    const Scalar& kperp = params.kperp;
    require_nonzero(kpar, "kpar");
    const Form re = hat.alpha.re();
    const Form im = hat.alpha.im();
    SUSYSolution sol;
    sol.algebra = L;
    sol.params = params;
    sol.kind = kind;
    if (kind == SusyKind::IIA) {
        sol.alpha = re + im * (Scalar::i() * kpar.inverse());
        sol.re_Omega_perp = hat.omega * kperp;
        sol.im_Omega = hat.Omega.re();
        sol.re_Omega_par = hat.Omega.im() * (-kpar);
    } else {
        sol.alpha = re * kpar.inverse() + im * Scalar::i();
        sol.re_Omega_par = hat.omega * kperp;
        sol.re_Omega_perp = hat.Omega.re() * kpar;
        sol.im_Omega = hat.Omega.im();
    }
    return sol;
}

SU2Structure6 iib_partner(const SU2Structure6& hat1, const Scalar& kpar) {
    require_nonzero(kpar, "kpar");
    SU2Structure6 h2;
    h2.alpha = hat1.alpha.im() * kpar - hat1.alpha.re() * (Scalar::i() * kpar.inverse());
    h2.omega = hat1.omega;
    h2.Omega = hat1.Omega;
    return h2;
}

SUSYSolution solution_from_hat(const LieAlgebra& L, const SU2Structure6& hat, const SUSYParams& params,
                               SusyKind kind) {
    if (params.kpar.is_zero() || params.kperp.is_zero()) {
        throw InvalidSolutionError("kpar and kperp must be nonzero");
    }
    HatData data;
    data.kind = kind;
    data.structures.push_back(hat);
    if (kind == SusyKind::IIB) data.structures.push_back(iib_partner(hat, params.kpar));
    const Report c = hat_certificate(L, data);
    if (!c.pass) throw_failure("hat hypotheses fail", c);
    return assemble_from_hat(L, hat, params, kind);
}

SU2Structure6 rotated_hat(const SUSYSolution& sol, const Scalar& cos_t, const Scalar& sin_t) {
    if (sol.kind != SusyKind::IIB) throw DomainError("the rotated hat family is defined for IIB solutions");
    if (cos_t * cos_t + sin_t * sin_t != Scalar(1)) throw DomainError("cos^2 t + sin^2 t != 1");
    HatData hat = hat_structures(sol);
    SU2Structure6 out = hat.structures.at(0);
    const Scalar& kpar = sol.params.kpar;
    const Form re_a = sol.alpha.re();
    const Form im_a = sol.alpha.im();
    const Scalar i = Scalar::i();
    out.alpha = re_a * (kpar * sin_t) + im_a * (kpar * cos_t) + im_a * (i * sin_t) - re_a * (i * cos_t);
    return out;
}

LambdaFamilyResult lambda_family_halfflat(const LieAlgebra& L, const SU2Structure6& s, const Scalar& lambda,
                                          LambdaVariant variant) {
    if (lambda.is_zero()) throw DomainError("lambda is zero");
    if (!L.d(s.alpha).is_zero()) throw DomainError("lambda family requires d alpha = 0");
    if (variant == LambdaVariant::Balanced) {
        const Report b = classify(L, s, StructureClass::HermitianBalanced);
        if (!b.pass) throw DomainError("lambda family requires a Hermitian balanced structure");
        if (!wedge(s.alpha.re(), L.d(s.Omega.re())).is_zero()) {
            throw DomainError("lambda family requires Re alpha ^ d Re Omega = 0");
        }
    }
    LambdaFamilyResult out;
    out.structure.alpha = s.alpha.im() * lambda - s.alpha.re() * (Scalar::i() * lambda.inverse());
    out.structure.omega = s.omega;
    out.structure.Omega = variant == LambdaVariant::Balanced1 ? s.Omega : s.Omega * Scalar::i();
    out.report = classify(L, out.structure, StructureClass::HalfFlat);
    out.half_flat = out.report.pass;
    return out;
}

// ---------------------------------------------------------------------------
// Products

Form extend_dimension(const Form& a, int dim) {
    if (dim < a.dim() || dim > kMaxDimension) throw ShapeError("cannot extend a form to a smaller dimension");
    Form out(dim);
    for (const auto& [w, c] : a.terms()) out.add_term(w, c);
    return out;
}

LieAlgebra direct_sum_abelian(const LieAlgebra& L, int extra) {
    const int n = L.dim() + extra;
    std::vector<Form> ds;
    for (const Form& f : L.differentials()) ds.push_back(extend_dimension(f, n));
    for (int k = 0; k < extra; ++k) ds.emplace_back(n);
    return LieAlgebra(L.name(), std::move(ds));
}

namespace {

SUSYSolution product_solution(const LieAlgebra& L, const Form& b1, const Form& b2, const Form& x_par,
                              const Form& x_perp_iia, const Form& x_im_iia, const Form& x_par_iib,
                              const Form& x_perp_iib, const Form& x_im_iib, const SUSYParams& p, SusyKind kind) {
    SUSYSolution sol;
    sol.algebra = L;
    sol.params = p;
    sol.kind = kind;
    const Scalar i = Scalar::i();
    const Scalar& kpar = p.kpar;
    const Scalar& kperp = p.kperp;
    if (kind == SusyKind::IIA) {
        sol.alpha = b1 + b2 * (i * kpar.inverse());
        sol.re_Omega_par = x_par * (-kpar);
        sol.re_Omega_perp = x_perp_iia * kperp;
        sol.im_Omega = x_im_iia;
    } else {
        sol.alpha = b1 * kpar.inverse() + b2 * i;
        sol.re_Omega_par = x_par_iib * kperp;
        sol.re_Omega_perp = x_perp_iib * kpar;
        sol.im_Omega = x_im_iib;
    }
    return sol;
}

}  // namespace

SUSYSolution build_product_solution(const HyperKahlerTorusData& src, const SUSYParams& p, SusyKind kind) {
    const LieAlgebra& B = src.base;
    if (B.dim() != 4) throw DomainError("hyperkaehler factor must be 4-dimensional");
    const std::vector<const Form*> w = {&src.omega_I, &src.omega_J, &src.omega_K};
    const Form vol = wedge(src.omega_I, src.omega_I);
    if (vol.is_zero()) throw DomainError("omega_I is degenerate");
    for (std::size_t a = 0; a < 3; ++a) {
        if (w[a]->dim() != 4) throw DomainError("hyperkaehler forms must be 4-dimensional");
        if (!B.d(*w[a]).is_zero()) throw DomainError("hyperkaehler forms must be closed");
        for (std::size_t b = a; b < 3; ++b) {
            const Form expect = a == b ? vol : Form(4);
            if (wedge(*w[a], *w[b]) != expect) throw DomainError("hyperkaehler triple relations fail");
        }
    }
    require_nonzero(p.kpar, "kpar");
    require_nonzero(p.kperp, "kperp");
    const LieAlgebra L = direct_sum_abelian(B, 2);
    const Form I = extend_dimension(src.omega_I, 6);
    const Form J = extend_dimension(src.omega_J, 6);
    const Form K = extend_dimension(src.omega_K, 6);
    return product_solution(L, Form::coframe(6, 5), Form::coframe(6, 6), J, K, I, K, I, J, p, kind);
}

SUSYSolution build_product_solution(const HypoCircleData& src, const SUSYParams& p, SusyKind kind) {
    const LieAlgebra& B = src.base;
    if (B.dim() != 5) throw DomainError("hypo factor must be 5-dimensional");
    const Report v = validate_hypo(src.hypo);
    if (!v.pass) throw DomainError("not an SU(2) structure on the 5-dimensional factor: " + v.first_failure()->identity);
    const Report h = is_hypo(B, src.hypo);
    if (!h.pass) throw DomainError("not hypo: " + h.first_failure()->identity);
    if (!B.d(src.hypo.eta).is_zero()) throw DomainError("product construction requires d eta = 0");
    if (!B.d(src.hypo.omega2).is_zero()) throw DomainError("product construction requires d omega2 = 0");
    require_nonzero(p.kpar, "kpar");
    require_nonzero(p.kperp, "kperp");
    const LieAlgebra L = direct_sum_abelian(B, 1);
    const Form eta = extend_dimension(src.hypo.eta, 6);
    const Form w1 = extend_dimension(src.hypo.omega1, 6);
    const Form w2 = extend_dimension(src.hypo.omega2, 6);
    const Form w3 = extend_dimension(src.hypo.omega3, 6);
    return product_solution(L, Form::coframe(6, 6), eta, w3, w1, w2, w3, w1, w2, p, kind);
}

// ---------------------------------------------------------------------------
// Pure spinors

PureSpinorPair pure_spinor_pair(const Form& alpha, const Form& omega, const Form& Omega, const Scalar& kpar,
                                const Scalar& kperp) {
    const Scalar i = Scalar::i();
    const Form aa = wedge(alpha, alpha.conj()) * half();
    const Form exp_aa = polyform_exp(aa);
    const Form exp_w = polyform_exp(omega * (-i));
    PureSpinorPair out;
    out.plus = wedge(exp_aa, exp_w * kpar - Omega * (i * kperp)) * eighth();
    out.minus = wedge(alpha, exp_w * kperp + Omega * (i * kpar)) * (-eighth());
    if (kpar.is_zero() || kperp.is_zero()) return out;
    out.plus_rewrite = polyform_exp(aa - omega * i - Omega * (i * kperp / kpar)) * (kpar * eighth());
    out.minus_rewrite = wedge(alpha, polyform_exp(omega * (-i) + Omega * (i * kpar / kperp))) * (-kperp * eighth());
    out.rewrites_agree = out.plus == out.plus_rewrite && out.minus == out.minus_rewrite;
    return out;
}

}  // namespace su2flux
