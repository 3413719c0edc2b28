#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "su2flux/cli/cli.hpp"

namespace {

using su2flux::cli::RunOptions;
using su2flux::cli::RunResult;

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// Runs every bundled manifest and diffs against its expected report.
RunResult run_corpus(const std::filesystem::path& dir, const RunOptions& options) {
    RunResult total;
    std::ostringstream summary;
    for (const auto& path : su2flux::cli::corpus_manifests(dir)) {
        const RunResult r = su2flux::cli::run_file(path, options);
        const auto expected = su2flux::cli::expected_report_path(path);
        std::string golden = "no expected report";
        if (std::filesystem::exists(expected)) {
            const bool match = read_file(expected) == r.report;
            golden = match ? "matches expected report" : "DIFFERS from expected report";
            if (!match) total.exit_code = std::max(total.exit_code, su2flux::cli::kExitMathFailure);
        }
        summary << path.filename().string() << ": exit " << r.exit_code << ", " << golden << '\n';
        total.report += r.report + "\n";
    }
    total.report += summary.str();
    return total;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact checks of SU(2)-structure flux backgrounds on Lie algebras"};
    std::vector<std::string> manifests;
    std::string task;
    std::string eval;
    std::string report_path;
    bool corpus = false;
    std::string corpus_dir = SU2FLUX_CORPUS_DIR;
    app.add_option("--manifest", manifests, "Manifest file (repeatable)");
    app.add_option("--task", task, "Override the manifest task");
    app.add_option("--eval", eval, "Parameter values k=v,...");
    app.add_option("--report", report_path, "Write the report to this file");
    app.add_flag("--corpus", corpus, "Run all bundled example manifests");
    app.add_option("--corpus-dir", corpus_dir, "Directory of bundled manifests");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : su2flux::cli::kExitInputError;
    }

    RunOptions options;
    options.eval = eval;
    if (!task.empty()) {
        options.task_override = su2flux::cli::parse_task_name(task);
        if (!options.task_override) {
            std::cerr << "unknown task '" << task << "'\n";
            return su2flux::cli::kExitInputError;
        }
    }
    if (manifests.empty() && !corpus) {
        std::cerr << "nothing to do: give --manifest or --corpus\n";
        return su2flux::cli::kExitInputError;
    }

    RunResult total;
    for (std::size_t k = 0; k < manifests.size(); ++k) {
        const RunResult r = su2flux::cli::run_file(manifests[k], options);
        total.report += (k ? "\n" : "") + r.report;
        total.exit_code = std::max(total.exit_code, r.exit_code);
    }
    if (corpus) {
        const RunResult r = run_corpus(corpus_dir, options);
        total.report += (total.report.empty() ? "" : "\n") + r.report;
        total.exit_code = std::max(total.exit_code, r.exit_code);
    }

    if (report_path.empty()) {
        std::cout << total.report;
    } else {
        std::ofstream out(report_path, std::ios::binary);
        if (!out) {
            std::cerr << "cannot write '" << report_path << "'\n";
            return su2flux::cli::kExitInputError;
        }
        out << total.report;
    }
    return total.exit_code;
}
