#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "su2flux/cli/cli.hpp"
#include "su2flux/exterior/expression.hpp"

namespace su2flux::cli {

namespace {

const std::vector<std::string>& probe_names() {
    static const std::vector<std::string> names = {"su2",  "half-flat", "symplectic-half-flat", "hermitian-balanced",
                                                   "lambda-half-flat", "iia", "iib"};
    return names;
}

bool is_probe(const std::string& p) {
    const auto& n = probe_names();
    return std::find(n.begin(), n.end(), p) != n.end();
}

/// A slice of a manifest line; `column` is the 1-based column of text[0].
struct Piece {
    std::string text;
    int column = 1;
};

Piece trim(const Piece& p) {
    const std::size_t b = p.text.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {"", p.column + static_cast<int>(p.text.size())};
    const std::size_t e = p.text.find_last_not_of(" \t\r");
    return {p.text.substr(b, e - b + 1), p.column + static_cast<int>(b)};
}

/// Splits at separators outside parentheses; pieces are trimmed.
std::vector<Piece> split_top(const Piece& p, std::string_view seps) {
    std::vector<Piece> out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t k = 0; k <= p.text.size(); ++k) {
        const char c = k < p.text.size() ? p.text[k] : '\0';
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (k == p.text.size() || (depth == 0 && seps.find(c) != std::string_view::npos)) {
            out.push_back(trim({p.text.substr(start, k - start), p.column + static_cast<int>(start)}));
            start = k + 1;
        }
    }
    return out;
}

/// Splits at the first occurrence of `sep`; the second piece is empty when absent.
std::pair<Piece, Piece> split_once(const Piece& p, std::string_view sep) {
    const std::size_t k = p.text.find(sep);
    if (k == std::string::npos) return {trim(p), Piece{"", p.column + static_cast<int>(p.text.size())}};
    return {trim({p.text.substr(0, k), p.column}),
            trim({p.text.substr(k + sep.size()), p.column + static_cast<int>(k + sep.size())})};
}

bool is_identifier(const std::string& s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    return std::all_of(s.begin(), s.end(),
                       [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

class Loader {
public:
    explicit Loader(const std::string& name) {
        m_.name = name;
        m_.ctx = ParameterContext::empty();
    }

    void feed(std::string_view raw, int line) {
        line_ = line;
        std::string text(raw);
        if (const auto hash = text.find('#'); hash != std::string::npos) text.resize(hash);
        const Piece whole = trim({text, 1});
        if (whole.text.empty()) return;
        const std::size_t sp = whole.text.find_first_of(" \t");
        const std::string key = whole.text.substr(0, sp);
        const Piece rest = sp == std::string::npos
                               ? Piece{"", whole.column + static_cast<int>(whole.text.size())}
                               : trim({whole.text.substr(sp), whole.column + static_cast<int>(sp)});
        dispatch(key, rest, whole.column);
    }

    Manifest finish() {
        line_ = 0;
        ensure_algebra(false);
        return std::move(m_);
    }

private:
    Manifest m_;
    int line_ = 0;
    std::optional<int> pending_dim_;
    std::vector<Form> pending_d_;

    [[noreturn]] void fail(const std::string& msg, int column) const { throw ParseError(msg, line_, column); }

    void require(const Piece& p, const std::string& what) const {
        if (p.text.empty()) fail("expected " + what, p.column);
    }

    ExpressionScope scope() const {
        ExpressionScope s{m_.ctx, &m_.forms, {}};
        if (m_.algebra) {
            const LieAlgebra L = *m_.algebra;
            s.differential = [L](const Form& a) { return L.d(a); };
        }
        return s;
    }

    Scalar scalar(const Piece& p) const {
        require(p, "a scalar expression");
        return parse_scalar_expression(p.text, scope(), line_, p.column);
    }

    Form form(const Piece& p, int dim) const {
        require(p, "a form expression");
        return parse_form_expression(p.text, dim, scope(), line_, p.column);
    }

    /// Builds the algebra from explicit differentials once they are complete.
    void ensure_algebra(bool needed, int column = 1) {
        if (!m_.algebra && pending_dim_) {
            m_.algebra = LieAlgebra(m_.name, pending_d_);
            pending_dim_.reset();
        }
        if (needed && !m_.algebra) fail("the algebra must be declared first", column);
    }

    void check_new_name(const Piece& p) const {
        if (!is_identifier(p.text)) fail("expected an identifier", p.column);
        if (is_reserved_name(p.text)) fail("'" + p.text + "' is a reserved name", p.column);
        if (m_.ctx->find(p.text) != nullptr || m_.forms.count(p.text) != 0) {
            fail("'" + p.text + "' is already declared", p.column);
        }
    }

    std::vector<std::vector<Scalar>> rows(const Piece& p, int dim) const {
        std::vector<std::vector<Scalar>> out;
        for (const Piece& row : split_top(p, ";")) {
            std::vector<Scalar> entries;
            for (const Piece& e : split_top(row, ",")) entries.push_back(scalar(e));
            if (static_cast<int>(entries.size()) != dim) {
                fail("row has " + std::to_string(entries.size()) + " entries, expected " + std::to_string(dim),
                     row.column);
            }
            out.push_back(std::move(entries));
        }
        if (static_cast<int>(out.size()) != dim) {
            fail("matrix has " + std::to_string(out.size()) + " rows, expected " + std::to_string(dim), p.column);
        }
        return out;
    }

    template <class T>
    void set_once(std::optional<T>& slot, T value, const char* what, int column) {
        if (slot) fail(std::string("duplicate ") + what, column);
        slot = std::move(value);
    }

    void dispatch(const std::string& key, const Piece& rest, int column) {
        if (key == "name") {
            require(rest, "a name");
            m_.name = rest.text;
        } else if (key == "param") {
            param(rest);
        } else if (key == "algebra") {
            if (m_.algebra || pending_dim_) fail("duplicate algebra", column);
            require(rest, "a Salamon string");
            m_.algebra = parse_salamon(rest.text, m_.ctx, m_.name, line_, rest.column);
        } else if (key == "dimension") {
            if (m_.algebra || pending_dim_) fail("duplicate algebra", column);
            int n = 0;
            try {
                n = std::stoi(rest.text);
            } catch (const std::exception&) {
                fail("expected a dimension", rest.column);
            }
            if (n < 1 || n > kMaxDimension) fail("dimension must lie in 1..9", rest.column);
            pending_dim_ = n;
            pending_d_.assign(static_cast<std::size_t>(n), Form(n));
        } else if (key == "differential") {
            differential(rest, column);
        } else if (key == "coframe") {
            if (rest.text != "b" && rest.text != "e") fail("coframe letter must be b or e", rest.column);
            m_.letter = rest.text[0];
        } else if (key == "form") {
            ensure_algebra(true, column);
            const auto [lhs, rhs] = split_once(rest, "=");
            check_new_name(lhs);
            Form f = form(rhs, m_.algebra->dim());
            m_.forms.emplace(lhs.text, std::move(f));
            m_.form_order.push_back(lhs.text);
        } else if (key == "metric") {
            ensure_algebra(true, column);
            metric(rest, column);
        } else if (key == "J") {
            ensure_algebra(true, column);
            const auto [kw, body] = split_once(rest, " ");
            if (kw.text != "rows") fail("expected 'J rows ...'", kw.column);
            if (m_.J) fail("duplicate J", column);
            AlmostComplexStructure J{rows(body, m_.algebra->dim())};
            if (!J.squares_to_minus_one()) fail("J does not square to -1", body.column);
            m_.J = J.matrix;
        } else if (key == "orientation") {
            if (rest.text == "+1" || rest.text == "+" || rest.text == "1") {
                m_.orientation.sign = 1;
            } else if (rest.text == "-1" || rest.text == "-") {
                m_.orientation.sign = -1;
            } else {
                fail("orientation must be +1 or -1", rest.column);
            }
        } else if (key == "task") {
            auto t = parse_task_name(rest.text);
            if (!t) fail("unknown task '" + rest.text + "'", rest.column);
            set_once(m_.task, *t, "task", column);
        } else if (key == "kind") {
            auto k = parse_kind_name(rest.text);
            if (!k) fail("kind must be IIA or IIB", rest.column);
            set_once(m_.kind, *k, "kind", column);
        } else if (key == "plane") {
            auto p = parse_plane_name(rest.text);
            if (!p) fail("plane must be O5 or O6", rest.column);
            set_once(m_.plane, *p, "plane", column);
        } else if (key == "class") {
            auto c = parse_class_name(rest.text);
            if (!c) fail("unknown structure class '" + rest.text + "'", rest.column);
            set_once(m_.structure_class, *c, "class", column);
        } else if (key == "kpar") {
            set_once(m_.kpar, scalar(rest), "kpar", column);
        } else if (key == "kperp") {
            set_once(m_.kperp, scalar(rest), "kperp", column);
        } else if (key == "lambda") {
            const auto* p = m_.ctx->find(rest.text);
            if (p == nullptr) throw UndeclaredSymbolError(rest.text, line_, rest.column);
            if (p->kind != ParameterContext::Kind::Invertible) fail("lambda must be an invertible parameter", rest.column);
            m_.lambda_param = rest.text;
        } else if (key == "source") {
            if (rest.text != "torus" && rest.text != "hypo") fail("source must be torus or hypo", rest.column);
            m_.source = rest.text;
        } else if (key == "expect-betti") {
            std::vector<int> b;
            for (const Piece& e : split_top(rest, ",")) {
                try {
                    std::size_t used = 0;
                    b.push_back(std::stoi(e.text, &used));
                    if (used != e.text.size()) throw std::invalid_argument("");
                } catch (const std::exception&) {
                    fail("expected an integer", e.column);
                }
            }
            set_once(m_.expect_betti, b, "expect-betti", column);
        } else if (key == "expect") {
            expect(rest, column);
        } else if (key == "probes") {
            for (const Piece& e : split_top(rest, ",")) {
                if (!is_probe(e.text)) fail("unknown probe '" + e.text + "'", e.column);
                m_.probes.push_back(e.text);
            }
        } else if (key == "sample") {
            sample(rest);
        } else if (key == "unstarred") {
            if (rest.text != "on" && rest.text != "off") fail("expected on or off", rest.column);
            m_.unstarred = rest.text == "on";
        } else {
            fail("unknown directive '" + key + "'", column);
        }
    }

    void param(const Piece& rest) {
        const std::size_t sp = rest.text.find_first_of(" \t");
        const Piece name = trim({rest.text.substr(0, sp), rest.column});
        const Piece kind = sp == std::string::npos
                               ? Piece{"", rest.column + static_cast<int>(rest.text.size())}
                               : trim({rest.text.substr(sp), rest.column + static_cast<int>(sp)});
        check_new_name(name);
        if (kind.text == "free") {
            m_.ctx = m_.ctx->with_free(name.text);
        } else if (kind.text == "invertible") {
            m_.ctx = m_.ctx->with_invertible(name.text);
        } else if (kind.text.rfind("sqrt(", 0) == 0 && kind.text.back() == ')') {
            const Piece inner{kind.text.substr(5, kind.text.size() - 6), kind.column + 5};
            const Scalar r = scalar(trim(inner));
            if (!r.is_real() || r.is_zero()) fail("radicand must be a nonzero real scalar", inner.column);
            try {
                m_.ctx = m_.ctx->with_quadratic(name.text, r.re_part());
            } catch (const DomainError& e) {
                fail(e.what(), inner.column);
            }
        } else {
            fail("parameter kind must be free, invertible or sqrt(...)", kind.column);
        }
    }

    void differential(const Piece& rest, int column) {
        if (!pending_dim_) fail("'differential' needs a preceding 'dimension'", column);
        const auto [lhs, rhs] = split_once(rest, "=");
        int k = 0;
        try {
            std::size_t used = 0;
            k = std::stoi(lhs.text, &used);
            if (used != lhs.text.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            fail("expected a generator index", lhs.column);
        }
        if (k < 1 || k > *pending_dim_) fail("generator index out of range", lhs.column);
        require(rhs, "a 2-form");
        const Form f = parse_form_expression(rhs.text, *pending_dim_, ExpressionScope{m_.ctx, nullptr, {}}, line_,
                                             rhs.column);
        if (!f.is_zero() && !f.is_homogeneous_of(2)) fail("differential must be a 2-form", rhs.column);
        pending_d_[static_cast<std::size_t>(k - 1)] = f;
    }

    void metric(const Piece& rest, int column) {
        if (m_.metric) fail("duplicate metric", column);
        const int n = m_.algebra->dim();
        ScalarMatrix g;
        if (rest.text.rfind("diag(", 0) == 0 && rest.text.back() == ')') {
            const Piece inner{rest.text.substr(5, rest.text.size() - 6), rest.column + 5};
            const auto entries = split_top(inner, ",");
            if (static_cast<int>(entries.size()) != n) {
                fail("diagonal has " + std::to_string(entries.size()) + " entries, expected " + std::to_string(n),
                     inner.column);
            }
            g.assign(static_cast<std::size_t>(n), std::vector<Scalar>(static_cast<std::size_t>(n), Scalar(0)));
            for (std::size_t k = 0; k < entries.size(); ++k) g[k][k] = scalar(entries[k]);
        } else if (rest.text.rfind("rows", 0) == 0) {
            g = rows(trim({rest.text.substr(4), rest.column + 4}), n);
        } else {
            fail("expected 'metric diag(...)' or 'metric rows ...'", rest.column);
        }
        try {
            (void)Metric(g);
        } catch (const Error& e) {
            fail(std::string("invalid metric: ") + e.what(), rest.column);
        }
        m_.metric = std::move(g);
    }

    void expect(const Piece& rest, int column) {
        ensure_algebra(true, column);
        const auto [label, rhs] = split_once(rest, "=");
        require(label, "a label");
        const int dim = m_.source.empty() ? m_.algebra->dim() : 6;
        m_.expectations.push_back({line_, label.text, form(rhs, dim)});
    }

    void sample(const Piece& rest) {
        const auto [assign, expects] = split_once(rest, "->");
        Sample s;
        s.line = line_;
        if (assign.text != "symbolic") {
            for (const Piece& a : split_top(assign, ",")) {
                const auto [name, value] = split_once(a, "=");
                if (m_.ctx->find(name.text) == nullptr) throw UndeclaredSymbolError(name.text, line_, name.column);
                if (s.assignment.count(name.text) != 0) fail("duplicate assignment", name.column);
                s.assignment.emplace(name.text, scalar(value));
            }
        }
        std::ostringstream text;
        for (const auto& p : m_.ctx->parameters()) {
            auto it = s.assignment.find(p.name);
            if (it == s.assignment.end()) continue;
            if (text.tellp() > 0) text << ", ";
            text << p.name << " = " << it->second.to_string();
        }
        s.text = s.assignment.empty() ? "symbolic" : text.str();
        if (!expects.text.empty()) {
            for (const Piece& e : split_top(expects, ", \t")) {
                if (e.text.empty()) continue;
                const auto [probe, value] = split_once(e, "=");
                if (!is_probe(probe.text)) fail("unknown probe '" + probe.text + "'", probe.column);
                if (value.text != "yes" && value.text != "no") fail("expected yes or no", value.column);
                s.expected.emplace_back(probe.text, value.text == "yes");
            }
        }
        m_.samples.push_back(std::move(s));
    }
};

}  // namespace

const Form* Manifest::form(const std::string& n) const {
    auto it = forms.find(n);
    return it == forms.end() ? nullptr : &it->second;
}

std::string task_name(Task t) {
    switch (t) {
        case Task::CheckAlgebra: return "check-algebra";
        case Task::Betti: return "betti";
        case Task::Classify: return "classify";
        case Task::SusyVerify: return "susy-verify";
        case Task::Fluxes: return "fluxes";
        case Task::DeformScan: return "deform-scan";
        case Task::ProductBuild: return "product-build";
    }
    return "";
}

std::optional<Task> parse_task_name(const std::string& name) {
    for (Task t : {Task::CheckAlgebra, Task::Betti, Task::Classify, Task::SusyVerify, Task::Fluxes, Task::DeformScan,
                   Task::ProductBuild}) {
        if (task_name(t) == name) return t;
    }
    return std::nullopt;
}

Manifest load_manifest(std::string_view text, const std::string& name) {
    Loader loader(name);
    int line = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        const std::size_t end = nl == std::string_view::npos ? text.size() : nl;
        loader.feed(text.substr(pos, end - pos), ++line);
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    return loader.finish();
}

Manifest load_manifest_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read manifest '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_manifest(buf.str(), path.stem().string());
}

std::map<std::string, Scalar> resolve_assignment(const ContextPtr& ctx, std::map<std::string, Scalar> values) {
    for (const auto& p : ctx->parameters()) {
        if (p.kind != ParameterContext::Kind::Quadratic || values.count(p.name) != 0) continue;
        const Substituter sub(ctx, values);
        const Scalar r(ctx, p.radicand);
        const Scalar rs = sub.apply(r);
        if (rs == r) continue;
        auto root = exact_sqrt(rs);
        if (!root) {
            throw InputError("no exact value for '" + p.name + "' (radicand " + rs.to_string() +
                             "); assign it explicitly");
        }
        values.emplace(p.name, *root);
    }
    return values;
}

Manifest evaluate_manifest(const Manifest& m, std::string_view assignments) {
    std::map<std::string, Scalar> values;
    const ExpressionScope scope{m.ctx, nullptr, {}};
    for (const Piece& a : split_top(Piece{std::string(assignments), 1}, ",")) {
        if (a.text.empty()) continue;
        const auto [name, value] = split_once(a, "=");
        if (m.ctx->find(name.text) == nullptr) throw UndeclaredSymbolError(name.text, 0, name.column);
        if (value.text.empty()) throw ParseError("expected a value", 0, value.column);
        values[name.text] = parse_scalar_expression(value.text, scope, 0, value.column);
        const auto* p = m.ctx->find(name.text);
        if (p->kind == ParameterContext::Kind::Invertible && values[name.text].is_zero()) {
            throw InputError("invertible parameter '" + name.text + "' cannot be 0");
        }
    }
    if (values.empty()) return m;
    Substituter sub(m.ctx, {});
    try {
        sub = Substituter(m.ctx, resolve_assignment(m.ctx, values));
    } catch (const RelationError& e) {
        throw InputError(e.what());
    }
    try {
        auto sf = [&](const Form& f) { return substitute(f, sub); };
        auto ss = [&](const Scalar& s) { return sub.apply(s); };
        auto sm = [&](const ScalarMatrix& a) {
            ScalarMatrix out = a;
            for (auto& row : out) {
                for (auto& e : row) e = ss(e);
            }
            return out;
        };
        Manifest out = m;
        if (m.algebra) {
            std::vector<Form> d;
            for (const Form& f : m.algebra->differentials()) d.push_back(sf(f));
            out.algebra = LieAlgebra(m.algebra->name(), d);
        }
        for (auto& [n, f] : out.forms) f = sf(f);
        if (m.metric) out.metric = sm(*m.metric);
        if (m.J) out.J = sm(*m.J);
        // Spinor angles and the scan parameter default to same-named parameters.
        auto param_or = [&](const std::optional<Scalar>& given, const std::string& n) -> std::optional<Scalar> {
            if (given) return ss(*given);
            if (m.ctx->find(n) != nullptr) return ss(Scalar::parameter(m.ctx, n));
            return std::nullopt;
        };
        out.kpar = param_or(m.kpar, "kpar");
        out.kperp = param_or(m.kperp, "kperp");
        for (auto& e : out.expectations) e.value = sf(e.value);
        for (auto& s : out.samples) {
            for (auto& [n, v] : s.assignment) v = ss(v);
            if (auto it = values.find(m.lambda_param); it != values.end()) s.assignment.emplace(it->first, ss(it->second));
        }
        if (out.metric) (void)Metric(*out.metric);
        return out;
    } catch (const PoleError& e) {
        throw InputError(std::string("evaluation hits a pole: ") + e.what());
    } catch (const DomainError& e) {
        throw InputError(std::string("evaluation leaves the domain: ") + e.what());
    }
}

std::vector<std::filesystem::path> corpus_manifests(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> out;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".manifest") out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::filesystem::path expected_report_path(const std::filesystem::path& manifest) {
    std::filesystem::path p = manifest;
    p.replace_extension(".expected");
    return p;
}

}  // namespace su2flux::cli
