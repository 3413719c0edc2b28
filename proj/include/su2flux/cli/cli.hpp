#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "su2flux/errors.hpp"
#include "su2flux/exterior/form.hpp"
#include "su2flux/exterior/metric.hpp"
#include "su2flux/gstruct/structures.hpp"
#include "su2flux/liealg/lie_algebra.hpp"
#include "su2flux/susy/susy.hpp"

namespace su2flux::cli {

/// Well-formed manifest text whose declarations do not fit the requested task.
class InputError : public Error {
public:
    using Error::Error;
};

enum class Task { CheckAlgebra, Betti, Classify, SusyVerify, Fluxes, DeformScan, ProductBuild };

std::string task_name(Task t);
std::optional<Task> parse_task_name(const std::string& name);

inline constexpr int kExitPass = 0;
inline constexpr int kExitMathFailure = 1;
inline constexpr int kExitInputError = 2;

/// One point of a deform-scan; an empty assignment keeps every parameter symbolic.
struct Sample {
    int line = 0;
    std::string text;
    std::map<std::string, Scalar> assignment;
    /// Probe name and expected outcome, in declaration order.
    std::vector<std::pair<std::string, bool>> expected;
};

/// `expect <label> = <expr>`: a named output must equal the given form.
struct Expectation {
    int line = 0;
    std::string label;
    Form value;
};

struct Manifest {
    std::string name;
    ContextPtr ctx;
    std::optional<LieAlgebra> algebra;
    char letter = 'e';
    std::map<std::string, Form> forms;
    std::vector<std::string> form_order;
    std::optional<ScalarMatrix> metric;
    Orientation orientation;
    std::optional<ScalarMatrix> J;
    std::optional<Task> task;
    std::optional<SusyKind> kind;
    std::optional<OPlane> plane;
    std::optional<StructureClass> structure_class;
    std::optional<std::vector<int>> expect_betti;
    std::optional<Scalar> kpar;
    std::optional<Scalar> kperp;
    std::string lambda_param;
    std::string source;
    std::vector<std::string> probes;
    std::vector<Sample> samples;
    std::vector<Expectation> expectations;
    bool unstarred = false;

    const Form* form(const std::string& name) const;
};

/// Line-oriented directives; `#` starts a comment. Throws ParseError (with
/// line and column), UndeclaredSymbolError, or InputError.
///
///   name <text>
///   param <id> free | invertible | sqrt(<expr>)
///   algebra (<salamon>)
///   dimension <n>                    explicit differentials follow
///   differential <k> = <expr>
///   coframe b | e
///   form <id> = <expr>
///   metric diag(<expr>, ...) | metric rows <row>; <row>; ...
///   J rows <row>; ...                J e^a = sum_b row_a[b] e^b
///   orientation +1 | -1
///   task <task> | kind IIA | IIB | plane O5 | O6 | class <class>
///   kpar <expr> | kperp <expr> | lambda <param> | source torus | hypo
///   expect-betti <n>, ...
///   expect <label> = <expr>
///   probes <probe>, ...
///   sample symbolic | <param> = <expr>, ... [-> <probe> = yes|no ...]
///   unstarred on | off
Manifest load_manifest(std::string_view text, const std::string& name = "manifest");
Manifest load_manifest_file(const std::filesystem::path& path);

/// Adds the exact root of every unassigned quadratic parameter whose radicand
/// the assignment changes. Throws InputError when no exact root exists.
std::map<std::string, Scalar> resolve_assignment(const ContextPtr& ctx, std::map<std::string, Scalar> values);

/// Parses `k=v,...` against the manifest context and substitutes the values
/// everywhere. Quadratic parameters whose radicand changes are assigned their
/// exact root or must be listed. Throws ParseError or InputError.
Manifest evaluate_manifest(const Manifest& m, std::string_view assignments);

struct RunResult {
    int exit_code = kExitPass;
    std::string report;
};

/// Deterministic report; never throws.
RunResult run(const Manifest& m, std::optional<Task> task_override = std::nullopt);

struct RunOptions {
    std::optional<Task> task_override;
    std::string eval;
};

/// Load, evaluate and run; load failures become exit 2 reports.
RunResult run_file(const std::filesystem::path& path, const RunOptions& options = {});

/// `*.manifest` files of a directory, sorted by file name.
std::vector<std::filesystem::path> corpus_manifests(const std::filesystem::path& dir);

/// Expected-report path next to a manifest: `x.manifest` -> `x.expected`.
std::filesystem::path expected_report_path(const std::filesystem::path& manifest);

}  // namespace su2flux::cli
