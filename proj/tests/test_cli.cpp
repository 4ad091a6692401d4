#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "lvoaug/volume_io.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code = -1;
    std::string out;
};

CliRun cli(const std::string& args) {
    const std::string cmd = std::string(LVOAUG_CLI) + " " + args + " 2>/dev/null";
    CliRun r;
    FILE* p = ::popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) r.out.append(buf, n);
    const int status = ::pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

int lines(const fs::path& p) {
    std::ifstream f(p);
    int n = 0;
    for (std::string l; std::getline(f, l);) n += !l.empty();
    return n;
}

const std::string kQuickTrain =
    " --folds 3 --max-epochs 1 --downsample 5 --conv-blocks 4:2 --feature-len 4 --repetitions 1 --lr 1e-3";

}  // namespace

TEST(Cli, CountPrintsClosedFormAndEnumeration) {
    CliRun r = cli("count --patients 3 --positive-ratio 0.3333333333333333");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("hemi closed_form 35 enumerated 35"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("subvol closed_form 1175 enumerated 1175"), std::string::npos) << r.out;
    r = cli("count --scheme hemi");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("hemi closed_form 80968.63"), std::string::npos) << r.out;
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(cli("").code, 1);
    EXPECT_EQ(cli("count --bogus").code, 1);
    EXPECT_EQ(cli("count --scheme nope").code, 1);
    EXPECT_EQ(cli("--help").code, 0);
    test_util::TempDir dir;
    EXPECT_EQ(cli("recombine --cohort " + (dir.path / "missing.json").string() + " --out " + (dir.path / "o").string()).code, 2);
    EXPECT_EQ(cli("count --config " + (dir.path / "missing.json").string()).code, 2);
    std::ofstream(dir.path / "bad.json") << R"({"no_such_option": 1})";
    EXPECT_EQ(cli("count --config " + (dir.path / "bad.json").string()).code, 1);
}

TEST(Cli, FlagsOverrideConfigFile) {
    test_util::TempDir dir;
    std::ofstream(dir.path / "c.json") << R"({"patients": 3, "positive-ratio": 0.0, "scheme": "hemi"})";
    CliRun r = cli("count --config " + (dir.path / "c.json").string());
    EXPECT_NE(r.out.find("hemi closed_form 36 "), std::string::npos) << r.out;
    r = cli("count --config " + (dir.path / "c.json").string() + " --patients 1");
    EXPECT_NE(r.out.find("hemi closed_form 4 "), std::string::npos) << r.out;
}

TEST(Cli, PhantomEchoReproduces) {
    test_util::TempDir dir;
    const fs::path a = dir.path / "a", b = dir.path / "b";
    ASSERT_EQ(cli("phantom gen --patients 3 --seed 2 --out " + a.string()).code, 0);
    ASSERT_TRUE(fs::exists(a / "config.json"));
    ASSERT_EQ(cli("phantom gen --config " + (a / "config.json").string() + " --out " + b.string()).code, 0);
    for (const auto& e : fs::directory_iterator(a))
        if (e.path().extension() == ".raw")
            EXPECT_EQ(lvoaug::hash_file(e.path()), lvoaug::hash_file(b / e.path().filename()));
}

TEST(Cli, AblateWritesOneRowPerConfiguration) {
    test_util::TempDir dir;
    const fs::path cohort = dir.path / "cohort";
    ASSERT_EQ(cli("phantom gen --patients 9 --seed 1 --out " + cohort.string()).code, 0);
    const fs::path out = dir.path / "abl", again = dir.path / "again";
    CliRun r = cli("ablate --cohort " + (cohort / "manifest.json").string() + " --flags none,R,RD,D --out " + out.string() +
                kQuickTrain);
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(lines(out / "table.csv"), 1 + 12);
    EXPECT_EQ(lines(out / "results.csv"), 1 + 12 * (3 + 1));  // folds plus a mean line
    ASSERT_EQ(cli("ablate --config " + (out / "config.json").string() + " --out " + again.string()).code, 0);
    EXPECT_EQ(lvoaug::hash_file(out / "results.csv"), lvoaug::hash_file(again / "results.csv"));
    EXPECT_EQ(lvoaug::hash_file(out / "table.csv"), lvoaug::hash_file(again / "table.csv"));
}
