#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "aperiodica/cli.hpp"

using namespace aperiodica;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "aperiodica");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("aperiodica-cli-" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

} // namespace

TEST(Cli, UsageErrors) {
    EXPECT_EQ(invoke({}).code, 1);
    EXPECT_EQ(invoke({"analyze", "--bogus"}).code, 1);
    EXPECT_EQ(invoke({"analyze", "--fixture", "nope"}).code, 1);
    EXPECT_EQ(invoke({"analyze"}).code, 1);
    EXPECT_EQ(invoke({"scan", "--max", "1"}).code, 1);
    EXPECT_EQ(invoke({"analyze", "--fixture", "n3", "--format", "xml"}).code, 1);
    EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST(Cli, ParseErrorFromInputFile) {
    const auto dir = scratch("parse");
    std::ofstream(dir / "bad.sub") << "alphabet: a b\na -> a c\nb -> a\n";
    const auto r = invoke({"analyze", "--input", (dir / "bad.sub").string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
}

TEST(Cli, NotPisotIsFailure) {
    const auto dir = scratch("m5");
    std::ofstream(dir / "m5.sub") << "a -> b\nb -> a b c\nc -> a b c d\nd -> a b c d e\ne -> a b c d e\n";
    EXPECT_EQ(invoke({"analyze", "--input", (dir / "m5.sub").string()}).code, 0);
    EXPECT_EQ(invoke({"verify", "--input", (dir / "m5.sub").string()}).code, 2);
}

TEST(Cli, VerifyHeadline) {
    const auto r = invoke({"verify", "--fixture", "n4-dual"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.at("schema"), "aperiodica/v1");
    EXPECT_EQ(j.at("verdict"), "model set: PASS");
    EXPECT_NEAR(j.at("det_lambda").get<double>(), 9.0, 1e-9);
}

TEST(Cli, ScanJsonAndCsv) {
    const auto r = invoke({"scan", "--max", "10"});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(nlohmann::json::parse(r.out).at("pv"), (nlohmann::json{2, 3, 4, 7}));
    const auto csv = invoke({"scan", "--max", "10", "--format", "csv"}).out;
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 10);
}

TEST(Cli, RauzyFilesAreDeterministic) {
    const auto a = scratch("ra"), b = scratch("rb");
    ASSERT_EQ(invoke({"rauzy", "--fixture", "n3", "--points", "3000", "--seed", "5", "--out", a.string()}).code, 0);
    ASSERT_EQ(invoke({"rauzy", "--fixture", "n3", "--points", "3000", "--seed", "5", "--out", b.string()}).code, 0);
    auto slurp = [](const std::filesystem::path& p) { return read_text(p); };
    EXPECT_EQ(slurp(a / "n3-rauzy.svg"), slurp(b / "n3-rauzy.svg"));
    ASSERT_EQ(invoke({"rauzy", "--fixture", "n3", "--points", "3000", "--seed", "6", "--out", b.string()}).code, 0);
    EXPECT_NE(slurp(a / "n3-rauzy.svg"), slurp(b / "n3-rauzy.svg"));
}

TEST(Cli, TileAndDual) {
    const auto dir = scratch("tile");
    const auto t = invoke({"tile", "--fixture", "n4-dual", "--generations", "3", "--format", "csv", "--out", dir.string()});
    ASSERT_EQ(t.code, 0) << t.err;
    EXPECT_TRUE(std::filesystem::exists(dir / "n4-dual-tiles-L3.csv"));
    const auto d = invoke({"dual", "--fixture", "fibonacci", "--generations", "6", "--out", dir.string()});
    EXPECT_EQ(d.code, 0) << d.err;
    EXPECT_EQ(invoke({"tile", "--fixture", "n3"}).code, 1);
}
