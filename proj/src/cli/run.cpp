#include <algorithm>
#include <fstream>
#include <sstream>

#include "su2flux/cli/cli.hpp"

namespace su2flux::cli {

namespace {

/// Raised when a mathematical precondition of the task fails.
class MathFailure : public Error {
public:
    using Error::Error;
};

class Writer {
public:
    explicit Writer(char letter) : letter_(letter) {}

    void line(const std::string& s) { out_ << s << '\n'; }
    void field(const std::string& key, const std::string& value) { line(key + ": " + value); }
    std::string form(const Form& f) const { return to_string(f, letter_); }
    void form_line(const std::string& indent, const std::string& label, const Form& f) {
        line(indent + label + " = " + form(f));
    }

    void check(const std::string& indent, bool holds, const std::string& identity, const std::string& note = "") {
        std::string s = indent + (holds ? "[PASS] " : "[FAIL] ") + identity;
        if (!note.empty()) s += "  (" + note + ")";
        line(s);
        if (!holds) failed_ = true;
    }

    void checks(const std::string& heading, const Report& r) {
        line(heading + ":");
        for (const Check& c : r.checks) {
            check("  ", c.holds, c.identity, c.note);
            if (!c.holds && !c.residual.is_zero()) line("    residual: " + form(c.residual));
        }
        if (!r.pass) failed_ = true;
    }

    bool failed() const { return failed_; }
    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
    char letter_;
    bool failed_ = false;
};

const Form& need_form(const Manifest& m, const std::string& name, const std::string& task) {
    const Form* f = m.form(name);
    if (f == nullptr) throw InputError("task " + task + " needs form '" + name + "'");
    return *f;
}

const LieAlgebra& need_algebra(const Manifest& m, int dim = 0) {
    if (!m.algebra) throw InputError("no algebra declared");
    if (dim != 0 && m.algebra->dim() != dim) {
        throw InputError("algebra has dimension " + std::to_string(m.algebra->dim()) + ", expected " +
                         std::to_string(dim));
    }
    return *m.algebra;
}

SusyKind need_kind(const Manifest& m) {
    if (!m.kind) throw InputError("no kind declared");
    return *m.kind;
}

Scalar angle(const Manifest& m, const std::optional<Scalar>& given, const std::string& name) {
    if (given) return *given;
    if (m.ctx->find(name) != nullptr) return Scalar::parameter(m.ctx, name);
    throw InputError("no value for " + name);
}

SUSYParams need_params(const Manifest& m, SusyKind kind) {
    const OPlane plane = m.plane ? *m.plane : default_plane(kind);
    try {
        return make_params(angle(m, m.kpar, "kpar"), angle(m, m.kperp, "kperp"), plane);
    } catch (const DomainError& e) {
        throw InputError(e.what());
    }
}

std::optional<Metric> manifest_metric(const Manifest& m) {
    if (!m.metric) return std::nullopt;
    return Metric(*m.metric);
}

SUSYSolution need_solution(const Manifest& m, const std::string& task) {
    SUSYSolution sol;
    sol.algebra = need_algebra(m, 6);
    sol.kind = need_kind(m);
    sol.params = need_params(m, sol.kind);
    sol.alpha = need_form(m, "alpha", task);
    sol.re_Omega_par = need_form(m, "ReOmega_par", task);
    sol.re_Omega_perp = need_form(m, "ReOmega_perp", task);
    sol.im_Omega = need_form(m, "ImOmega", task);
    sol.g = manifest_metric(m);
    sol.orientation = m.orientation;
    return sol;
}

SU2Structure6 need_su2(const Manifest& m, const std::string& task) {
    SU2Structure6 s;
    s.alpha = need_form(m, "alpha", task);
    s.omega = need_form(m, "omega", task);
    s.Omega = need_form(m, "Omega", task);
    if (m.J) s.J = AlmostComplexStructure{*m.J};
    s.g = manifest_metric(m);
    return s;
}

void header(Writer& w, const Manifest& m, Task task) {
    w.field("manifest", m.name);
    w.field("task", task_name(task));
    if (m.algebra) w.field("algebra", print_salamon(*m.algebra));
}

void susy_header(Writer& w, const SUSYParams& p, SusyKind kind) {
    w.field("kind", kind_name(kind));
    w.field("plane", plane_name(p.plane));
    w.field("kpar", p.kpar.to_string());
    w.field("kperp", p.kperp.to_string());
}

void solution_forms(Writer& w, const SUSYSolution& sol) {
    w.line("solution:");
    w.form_line("  ", "alpha", sol.alpha);
    w.form_line("  ", "ReOmega_par", sol.re_Omega_par);
    w.form_line("  ", "ReOmega_perp", sol.re_Omega_perp);
    w.form_line("  ", "ImOmega", sol.im_Omega);
}

// ---------------------------------------------------------------------------

void task_check_algebra(Writer& w, const Manifest& m) {
    const LieAlgebra& L = need_algebra(m);
    w.field("dimension", std::to_string(L.dim()));
    w.line("differentials:");
    for (int k = 1; k <= L.dim(); ++k) {
        w.form_line("  ", std::string("d ") + m.letter + std::to_string(k), L.differential_of(k));
    }
    const DSquaredReport r = check_d_squared(L);
    w.line("checks:");
    w.check("  ", r.pass, "d^2 = 0");
    if (!r.pass) {
        w.line("    generator: " + std::to_string(r.generator));
        w.line("    residual: " + w.form(r.residual));
    }
}

std::string join(const std::vector<int>& v) {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v[k]);
    return s;
}

void task_betti(Writer& w, const Manifest& m) {
    const LieAlgebra& L = need_algebra(m);
    for (const Form& d : L.differentials()) {
        for (const auto& [word, c] : d.terms()) {
            if (!c.is_rational()) throw InputError("cohomology needs rational structure constants; use --eval");
        }
    }
    const DSquaredReport dd = check_d_squared(L);
    if (!dd.pass) throw MathFailure("d^2 != 0 on generator " + std::to_string(dd.generator));
    const std::vector<int> b = betti_numbers(L);
    w.line("b = " + join(b));
    if (m.expect_betti) {
        w.line("checks:");
        w.check("  ", b == *m.expect_betti, "b = " + join(*m.expect_betti));
    }
}

void task_classify(Writer& w, const Manifest& m) {
    const LieAlgebra& L = need_algebra(m, 6);
    if (!m.structure_class) throw InputError("task classify needs a class");
    Form F;
    Form Psi;
    if (m.form("F") != nullptr || m.form("Psi") != nullptr) {
        F = need_form(m, "F", "classify");
        Psi = need_form(m, "Psi", "classify");
    } else {
        const SU2Structure6 s = need_su2(m, "classify");
        F = embedded_fundamental_form(s);
        Psi = embedded_calibration(s);
    }
    w.field("class", class_name(*m.structure_class));
    w.line("structure:");
    w.form_line("  ", "F", F);
    w.form_line("  ", "Psi", Psi);
    w.checks("checks", classify(L, F, Psi, *m.structure_class));
}

void round_trip(Writer& w, const SUSYSolution& sol, const HatData& hat) {
    w.line("round trip:");
    try {
        const SUSYSolution back = solution_from_hat(sol.algebra, hat.structures.front(), sol.params, sol.kind);
        const bool same = back.alpha == sol.alpha && back.re_Omega_par == sol.re_Omega_par &&
                          back.re_Omega_perp == sol.re_Omega_perp && back.im_Omega == sol.im_Omega;
        w.check("  ", same, "solution from hat data = input");
    } catch (const InvalidSolutionError& e) {
        w.check("  ", false, "solution from hat data = input", e.what());
    }
}

void task_susy_verify(Writer& w, const Manifest& m) {
    const SUSYSolution sol = need_solution(m, "susy-verify");
    susy_header(w, sol.params, sol.kind);
    solution_forms(w, sol);
    w.form_line("", "H", derived_H(sol));
    const Report r = verify_susy(sol);
    w.checks("equations", r);
    if (!r.pass) return;
    if (sol.params.kpar.is_zero() || sol.params.kperp.is_zero()) {
        w.line("hat data: undefined at kpar kperp = 0");
    } else {
        const HatData hat = hat_structures(sol);
        w.checks("hat certificate", hat_certificate(sol.algebra, hat));
        round_trip(w, sol, hat);
    }
    if (sol.kind == SusyKind::IIB) w.checks("harmonic witnesses", betti_witnesses(sol));
}

const Form* find_output(const FluxSet& fs, const std::string& label) {
    if (label == "H") return &fs.H;
    if (const Form* f = fs.find(label)) return f;
    for (const auto& lf : fs.unstarred) {
        if (lf.label == label) return &lf.form;
    }
    return nullptr;
}

void expectations(Writer& w, const Manifest& m, const FluxSet& fs) {
    if (m.expectations.empty()) return;
    w.line("expectations:");
    for (const Expectation& e : m.expectations) {
        const Form* got = find_output(fs, e.label);
        if (got == nullptr) {
            throw InputError("line " + std::to_string(e.line) + ": no output labelled '" + e.label + "'");
        }
        const Form diff = *got - e.value;
        w.check("  ", diff.is_zero(), e.label + " = " + w.form(e.value));
        if (!diff.is_zero()) w.line("    residual: " + w.form(diff));
    }
}

void flux_report(Writer& w, const Manifest& m, const SUSYSolution& sol) {
    FluxSet fs = compute_fluxes(sol);
    w.line("fluxes:");
    w.form_line("  ", "H", fs.H);
    for (const auto& lf : fs.starred) w.form_line("  ", lf.label, lf.form);
    if (sol.kind == SusyKind::IIA) {
        const FluxSet ps = iia_fluxes_from_pure_spinor(sol);
        bool agree = true;
        for (const auto& lf : fs.starred) {
            const Form* other = ps.find(lf.label);
            agree = agree && other != nullptr && *other == lf.form;
        }
        w.line("cross-checks:");
        w.check("  ", agree, "pure-spinor route gives the same starred fluxes");
    }
    if (m.unstarred) {
        fs = unstar_fluxes(fs, solution_metric(sol), sol.orientation);
        w.line("unstarred fluxes:");
        for (const auto& lf : fs.unstarred) w.form_line("  ", lf.label, lf.form);
        w.line("Bianchi left-hand sides:");
        for (const Check& c : bianchi_residuals(sol, fs).checks) {
            std::string lhs = c.identity;
            if (lhs.size() > 4 && lhs.substr(lhs.size() - 4) == " = 0") lhs.resize(lhs.size() - 4);
            w.form_line("  ", lhs, c.residual);
        }
    }
    expectations(w, m, fs);
}

void task_fluxes(Writer& w, const Manifest& m) {
    const SUSYSolution sol = need_solution(m, "fluxes");
    susy_header(w, sol.params, sol.kind);
    const Report r = verify_susy(sol);
    w.checks("equations", r);
    if (!r.pass) return;
    flux_report(w, m, sol);
}

// ---------------------------------------------------------------------------
// deform-scan

enum class Outcome { Yes, No, Undetermined };

struct ProbeResult {
    Outcome outcome = Outcome::Undetermined;
    std::string detail;
    Form residual;
};

ProbeResult from_report(const Report& r) {
    if (r.pass) return {Outcome::Yes, "", Form()};
    const Check* c = r.first_failure();
    return {Outcome::No, c->note.empty() ? c->identity : c->note, c->residual};
}

ProbeResult run_probe(const std::string& probe, const Manifest& m, const LieAlgebra& L, const SU2Structure6& s,
                      const Sample& sample) {
    try {
        if (probe == "su2") return from_report(validate_su2(s));
        if (auto c = parse_class_name(probe)) return from_report(classify(L, s, *c));
        if (probe == "lambda-half-flat") {
            if (m.lambda_param.empty()) throw InputError("probe lambda-half-flat needs 'lambda <param>'");
            auto given = sample.assignment.find(m.lambda_param);
            const Scalar lambda =
                given != sample.assignment.end() ? given->second : Scalar::parameter(m.ctx, m.lambda_param);
            const auto r = lambda_family_halfflat(L, s, lambda, LambdaVariant::Balanced1);
            return from_report(r.report);
        }
        const SusyKind kind = probe == "iia" ? SusyKind::IIA : SusyKind::IIB;
        return from_report(verify_susy(assemble_from_hat(L, s, need_params(m, kind), kind)));
    } catch (const DomainError& e) {
        return {Outcome::Undetermined, e.what(), Form()};
    }
}

/// Probes requested for a sample, in canonical order; half-flat when none.
std::vector<std::string> sample_probes(const Manifest& m, const Sample& sample) {
    static const std::vector<std::string> order = {"su2",  "half-flat", "symplectic-half-flat", "hermitian-balanced",
                                                   "lambda-half-flat", "iia", "iib"};
    std::vector<std::string> wanted = m.probes;
    for (const auto& [p, v] : sample.expected) wanted.push_back(p);
    if (wanted.empty()) wanted.emplace_back("half-flat");
    std::vector<std::string> out;
    for (const auto& p : order) {
        if (std::find(wanted.begin(), wanted.end(), p) != wanted.end()) out.push_back(p);
    }
    return out;
}

std::string outcome_text(Outcome o) {
    switch (o) {
        case Outcome::Yes: return "yes";
        case Outcome::No: return "no";
        case Outcome::Undetermined: return "undetermined";
    }
    return "";
}

void task_deform_scan(Writer& w, const Manifest& m) {
    const LieAlgebra& L0 = need_algebra(m, 6);
    const SU2Structure6 s0 = need_su2(m, "deform-scan");
    if (m.samples.empty()) throw InputError("task deform-scan needs at least one sample");
    for (const Sample& sample : m.samples) {
        Substituter sub(m.ctx, {});
        try {
            sub = Substituter(m.ctx, resolve_assignment(m.ctx, sample.assignment));
        } catch (const RelationError& e) {
            throw InputError("line " + std::to_string(sample.line) + ": " + e.what());
        }
        SU2Structure6 s;
        std::vector<Form> d;
        try {
            for (const Form& f : L0.differentials()) d.push_back(substitute(f, sub));
            s.alpha = substitute(s0.alpha, sub);
            s.omega = substitute(s0.omega, sub);
            s.Omega = substitute(s0.Omega, sub);
            if (s0.g) {
                ScalarMatrix g = s0.g->matrix();
                for (auto& row : g) {
                    for (auto& e : row) e = sub.apply(e);
                }
                s.g = Metric(g);
            }
            if (s0.J) {
                AlmostComplexStructure J = *s0.J;
                for (auto& row : J.matrix) {
                    for (auto& e : row) e = sub.apply(e);
                }
                s.J = J;
            }
        } catch (const Error& e) {
            throw InputError("line " + std::to_string(sample.line) + ": " + e.what());
        }
        const LieAlgebra L(L0.name(), d);
        w.line("sample " + sample.text + ":");
        w.form_line("  ", "dF", L.d(embedded_fundamental_form(s)));
        std::map<std::string, Outcome> got;
        for (const auto& p : sample_probes(m, sample)) {
            const ProbeResult r = run_probe(p, m, L, s, sample);
            got[p] = r.outcome;
            std::string text = "  " + p + ": " + outcome_text(r.outcome);
            if (!r.detail.empty()) text += " (" + r.detail + ")";
            w.line(text);
            if (!r.residual.is_zero()) w.line("    residual: " + w.form(r.residual));
        }
        for (const auto& [p, want] : sample.expected) {
            const Outcome o = got[p];
            w.check("  ", o == (want ? Outcome::Yes : Outcome::No), "expected " + p + ": " + (want ? "yes" : "no"));
        }
    }
}

// ---------------------------------------------------------------------------
// product-build

void task_product_build(Writer& w, const Manifest& m) {
    const SusyKind kind = need_kind(m);
    const SUSYParams params = need_params(m, kind);
    SUSYSolution sol;
    if (m.source == "torus") {
        const HyperKahlerTorusData src{need_algebra(m, 4), need_form(m, "omega_I", "product-build"),
                                       need_form(m, "omega_J", "product-build"),
                                       need_form(m, "omega_K", "product-build")};
        w.field("source", "hyperkaehler 4-dimensional factor times T^2");
        susy_header(w, params, kind);
        try {
            sol = build_product_solution(src, params, kind);
        } catch (const DomainError& e) {
            throw MathFailure(e.what());
        }
    } else if (m.source == "hypo") {
        const HypoCircleData src{
            need_algebra(m, 5),
            {need_form(m, "eta", "product-build"), need_form(m, "omega1", "product-build"),
             need_form(m, "omega2", "product-build"), need_form(m, "omega3", "product-build")}};
        w.field("source", "hypo 5-dimensional factor times S^1");
        susy_header(w, params, kind);
        w.checks("hypo algebra", validate_hypo(src.hypo));
        w.checks("hypo differentials", is_hypo(src.base, src.hypo));
        try {
            sol = build_product_solution(src, params, kind);
        } catch (const DomainError& e) {
            throw MathFailure(e.what());
        }
    } else {
        throw InputError("task product-build needs 'source torus' or 'source hypo'");
    }
    sol.orientation = m.orientation;
    w.field("product algebra", print_salamon(sol.algebra));
    solution_forms(w, sol);
    const Report r = verify_susy(sol);
    w.checks("equations", r);
    if (!r.pass) return;
    flux_report(w, m, sol);
}

}  // namespace

RunResult run(const Manifest& m, std::optional<Task> task_override) {
    Writer w(m.letter);
    RunResult out;
    try {
        const std::optional<Task> task = task_override ? task_override : m.task;
        if (!task) {
            w.field("manifest", m.name);
            throw InputError("no task declared");
        }
        header(w, m, *task);
        switch (*task) {
            case Task::CheckAlgebra: task_check_algebra(w, m); break;
            case Task::Betti: task_betti(w, m); break;
            case Task::Classify: task_classify(w, m); break;
            case Task::SusyVerify: task_susy_verify(w, m); break;
            case Task::Fluxes: task_fluxes(w, m); break;
            case Task::DeformScan: task_deform_scan(w, m); break;
            case Task::ProductBuild: task_product_build(w, m); break;
        }
        out.exit_code = w.failed() ? kExitMathFailure : kExitPass;
    } catch (const InputError& e) {
        w.field("error", e.what());
        out.exit_code = kExitInputError;
    } catch (const ParseError& e) {
        w.field("error", e.what());
        out.exit_code = kExitInputError;
    } catch (const ShapeError& e) {
        w.field("error", e.what());
        out.exit_code = kExitInputError;
    } catch (const MathFailure& e) {
        w.field("failure", e.what());
        out.exit_code = kExitMathFailure;
    } catch (const Error& e) {
        w.field("failure", e.what());
        out.exit_code = kExitMathFailure;
    }
    static const char* const names[] = {"PASS", "FAIL", "INPUT ERROR"};
    w.field("result", std::string(names[out.exit_code]) + " (exit " + std::to_string(out.exit_code) + ")");
    out.report = w.str();
    return out;
}

RunResult run_file(const std::filesystem::path& path, const RunOptions& options) {
    Manifest m;
    try {
        m = load_manifest_file(path);
        if (!options.eval.empty()) m = evaluate_manifest(m, options.eval);
    } catch (const Error& e) {
        RunResult r;
        r.exit_code = kExitInputError;
        r.report = "manifest: " + path.stem().string() + "\nerror: " + e.what() + "\nresult: INPUT ERROR (exit 2)\n";
        return r;
    }
    return run(m, options.task_override);
}

}  // namespace su2flux::cli
