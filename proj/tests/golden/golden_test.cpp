#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "su2flux/cli/cli.hpp"

namespace {

using su2flux::cli::corpus_manifests;
using su2flux::cli::expected_report_path;

std::vector<std::string> manifest_names() {
    std::vector<std::string> out;
    for (const auto& p : corpus_manifests(SU2FLUX_CORPUS_DIR)) out.push_back(p.filename().string());
    return out;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

class Golden : public ::testing::TestWithParam<std::string> {};

TEST_P(Golden, ReportMatchesExpectedByteForByte) {
    const std::filesystem::path manifest = std::filesystem::path(SU2FLUX_CORPUS_DIR) / GetParam();
    const auto expected = expected_report_path(manifest);
    ASSERT_TRUE(std::filesystem::exists(expected)) << expected;
    const auto result = su2flux::cli::run_file(manifest);
    EXPECT_EQ(result.report, slurp(expected));
}

std::string test_name(const ::testing::TestParamInfo<std::string>& info) {
    std::string n = info.param.substr(0, info.param.size() - std::string(".manifest").size());
    for (char& c : n) {
        if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
    }
    return n;
}

INSTANTIATE_TEST_SUITE_P(Corpus, Golden, ::testing::ValuesIn(manifest_names()), test_name);

TEST(GoldenCorpus, EveryExampleShipsWithAnExpectedReport) {
    const auto names = manifest_names();
    EXPECT_GE(names.size(), 20U);
    for (const auto& n : names) {
        EXPECT_TRUE(std::filesystem::exists(
            expected_report_path(std::filesystem::path(SU2FLUX_CORPUS_DIR) / n)))
            << n;
    }
}

}  // namespace
