// End-to-end checks of the command-line surface (spawns the real binary).

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#ifndef CELKIT_FAMILY_KB
#error "CELKIT_FAMILY_KB must point at the bundled family knowledge base"
#endif
#ifndef CELKIT_CLI
#error "CELKIT_CLI must point at the celkit binary"
#endif

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;  // stdout only
};

CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string(CELKIT_CLI) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buffer{};
    CliResult result;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return result;
    std::size_t n;
    while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
        result.output.append(buffer.data(), n);
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

TEST(Cli, LearnSolvesAFamilyProblem) {
    // parents of someone vs a childless married couple member and a grandchild
    CliResult r = run_cli(std::string("learn --kb ") + CELKIT_FAMILY_KB +
                          " --positives p0,p1,p2 --negatives p56 --method celoe");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.output.find("RESULT "), std::string::npos);
    EXPECT_NE(r.output.find("method=celoe"), std::string::npos);
}

TEST(Cli, MissingKbGivesIoExitCode) {
    CliResult r = run_cli("learn --kb /does/not/exist.kb --positives a --negatives b");
    EXPECT_EQ(r.exit_code, 2);
}

TEST(Cli, TimeoutIsNotAnError) {
    CliResult r = run_cli(std::string("learn --kb ") + CELKIT_FAMILY_KB +
                          " --positives p0 --negatives p1 --method random --max-runtime 0.001");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.output.find("RESULT "), std::string::npos);
}

TEST(Cli, UnknownIndividualGivesNameExitCode) {
    CliResult r = run_cli(std::string("learn --kb ") + CELKIT_FAMILY_KB +
                          " --positives nobody --negatives p1");
    EXPECT_EQ(r.exit_code, 4);
}

TEST(Cli, InvalidProblemGivesProblemExitCode) {
    CliResult r = run_cli(std::string("learn --kb ") + CELKIT_FAMILY_KB + " --method celoe");
    EXPECT_EQ(r.exit_code, 5);
}

TEST(Cli, GenerateLpsWritesALoadableFile) {
    const std::string out = std::string(::testing::TempDir()) + "cli_lps.json";
    CliResult r = run_cli(std::string("generate-lps --kb ") + CELKIT_FAMILY_KB + " --seed 3 --out " + out);
    EXPECT_EQ(r.exit_code, 0);
    std::ifstream in(out);
    ASSERT_TRUE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    EXPECT_NE(buf.str().find("\"positives\""), std::string::npos);
    std::remove(out.c_str());
}

TEST(Cli, GenerateLpsIsByteDeterministic) {
    const std::string a = std::string(::testing::TempDir()) + "cli_lps_a.json";
    const std::string b = std::string(::testing::TempDir()) + "cli_lps_b.json";
    ASSERT_EQ(run_cli(std::string("generate-lps --kb ") + CELKIT_FAMILY_KB + " --seed 5 --out " + a)
                  .exit_code,
              0);
    ASSERT_EQ(run_cli(std::string("generate-lps --kb ") + CELKIT_FAMILY_KB + " --seed 5 --out " + b)
                  .exit_code,
              0);
    std::ifstream fa(a), fb(b);
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    EXPECT_EQ(sa.str(), sb.str());
    EXPECT_FALSE(sa.str().empty());
    std::remove(a.c_str());
    std::remove(b.c_str());
}

TEST(Cli, EvaluateWritesCsvWithExactHeader) {
    const std::string lps = std::string(::testing::TempDir()) + "cli_eval_lps.json";
    const std::string csv = std::string(::testing::TempDir()) + "cli_eval.csv";
    ASSERT_EQ(run_cli(std::string("generate-lps --kb ") + CELKIT_FAMILY_KB +
                      " --seed 3 --walks 2 --states-per-walk 5 --kappa 1 --out " + lps)
                  .exit_code,
              0);
    CliResult r = run_cli(std::string("evaluate --kb ") + CELKIT_FAMILY_KB + " --lps " + lps +
                          " --methods celoe,ocel --max-expressions 500 --out " + csv);
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.output.find("celoe"), std::string::npos);  // aggregate table
    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "lp_id,method,concept,length,f1,accuracy,runtime_s,expressions_tested");
    std::remove(lps.c_str());
    std::remove(csv.c_str());
}

TEST(Cli, DrillWithoutModelFails) {
    CliResult r = run_cli(std::string("learn --kb ") + CELKIT_FAMILY_KB +
                          " --positives p0 --negatives p1 --method drill");
    EXPECT_EQ(r.exit_code, 1);
}

}  // namespace
