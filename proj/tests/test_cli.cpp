#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "honeytrap/arff.hpp"
#include "support.hpp"

using namespace honeytrap;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fixtures::scratch_dir(::testing::UnitTest::GetInstance()->current_test_info()->name());
    }
    std::string at(const std::string& name) const { return (dir_ / name).string(); }
    fs::path dir_;
};

}  // namespace

TEST_F(CliTest, NoArgumentsIsInputError) {
    EXPECT_EQ(invoke({}).code, cli::kExitInput);
    EXPECT_EQ(invoke({"frobnicate"}).code, cli::kExitInput);
    EXPECT_EQ(invoke({"--jobs", "0", "demo"}).code, cli::kExitInput);
}

TEST_F(CliTest, HelpAndVersion) {
    const auto help = invoke({"--help"});
    EXPECT_EQ(help.code, 0);
    EXPECT_NE(help.out.find("simulate"), std::string::npos);
    EXPECT_EQ(invoke({"--version"}).code, 0);
}

TEST_F(CliTest, SimulateWritesArtifacts) {
    const auto r = invoke({"--out", dir_.string(), "simulate"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("harvested 90 profiles"), std::string::npos) << r.out;
    for (const char* f : {"config.conf", "profiles.tsv", "harvested.tsv", "events.csv", "honeypots.csv",
                          "simulate.manifest.json"}) {
        EXPECT_TRUE(fs::exists(dir_ / f)) << f;
    }
    const auto manifest = nlohmann::json::parse(slurp(dir_ / "simulate.manifest.json"));
    EXPECT_EQ(manifest["command"], "simulate");
    EXPECT_EQ(manifest["outputs"].size(), 5u);
}

TEST_F(CliTest, NoHoneypotsTrapsNobody) {
    std::ofstream(at("c.conf")) << "n_honeypots = 0\ncontrol_fraction = 0\n";
    const auto r = invoke({"--out", dir_.string(), "simulate", "--config", at("c.conf")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("trapped 0 profiles"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("harvested 0 profiles"), std::string::npos) << r.out;
}

TEST_F(CliTest, SeedFlagOverridesAndRepeats) {
    const auto a = dir_ / "a";
    const auto b = dir_ / "b";
    ASSERT_EQ(invoke({"--seed", "42", "--out", a.string(), "simulate"}).code, 0);
    ASSERT_EQ(invoke({"--seed", "42", "--out", b.string(), "simulate"}).code, 0);
    EXPECT_EQ(slurp(a / "profiles.tsv"), slurp(b / "profiles.tsv"));
    EXPECT_EQ(slurp(a / "simulate.manifest.json").size() > 0, true);
    const auto c = dir_ / "c";
    ASSERT_EQ(invoke({"--seed", "7", "--out", c.string(), "simulate"}).code, 0);
    EXPECT_NE(slurp(a / "profiles.tsv"), slurp(c / "profiles.tsv"));
}

TEST_F(CliTest, ExtractGroups) {
    ASSERT_EQ(invoke({"--out", dir_.string(), "simulate"}).code, 0);
    const std::vector<std::pair<std::string, std::size_t>> expected{
        {"full", 14}, {"combined", 13}, {"traditional", 12}, {"honeypot", 2}};
    for (const auto& [group, n_attr] : expected) {
        const auto out = dir_ / group;
        const auto r = invoke({"--out", out.string(), "extract", "--profiles", at("harvested.tsv"), "--group", group});
        ASSERT_EQ(r.code, 0) << r.err;
        const auto d = arff::parse(slurp(out / "dataset.arff"));
        EXPECT_EQ(d.num_attributes(), n_attr) << group;
        EXPECT_EQ(d.size(), 90u);
        EXPECT_EQ(d.attributes().back().name, "class");
    }
    EXPECT_EQ(invoke({"--out", dir_.string(), "extract", "--profiles", at("harvested.tsv"), "--group", "social"}).code,
              cli::kExitInput);
}

TEST_F(CliTest, TrainEvaluatePredictReplay) {
    ASSERT_EQ(invoke({"--out", dir_.string(), "simulate"}).code, 0);
    ASSERT_EQ(invoke({"--out", dir_.string(), "extract", "--profiles", at("harvested.tsv"), "--group", "combined"}).code,
              0);
    auto r = invoke({"--out", dir_.string(), "train", "--data", at("dataset.arff"), "--c-size", "5", "--i-max", "10"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(fs::exists(dir_ / "model.txt"));

    r = invoke({"--out", dir_.string(), "evaluate", "--data", at("dataset.arff"), "--c-size", "5", "--i-max", "10",
             "--k", "5"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("Kappa statistic"), std::string::npos);
    const auto report = nlohmann::json::parse(slurp(dir_ / "report.json"));
    EXPECT_EQ(report["n"], 90);
    EXPECT_TRUE(report.contains("cost_benefit"));
    EXPECT_EQ(slurp(dir_ / "threshold_curve.csv").rfind("sample_size,recall\n", 0), 0u);
    EXPECT_EQ(slurp(dir_ / "margin_curve.csv").rfind("margin,cumulative_fraction\n", 0), 0u);

    r = invoke({"--out", (dir_ / "scored").string(), "evaluate", "--data", at("dataset.arff"), "--model",
             at("model.txt")});
    ASSERT_EQ(r.code, 0) << r.err;

    r = invoke({"--out", dir_.string(), "predict", "--model", at("model.txt"), "--data", at("dataset.arff")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto preds = slurp(dir_ / "predictions.csv");
    EXPECT_EQ(preds.rfind("row,predicted,p_mal,p_leg\n", 0), 0u);
    EXPECT_EQ(std::count(preds.begin(), preds.end(), '\n'), 91);

    for (const char* cmd : {"simulate", "extract", "train", "evaluate", "predict"}) {
        r = invoke({"replay", "--manifest", at(std::string(cmd) + ".manifest.json")});
        EXPECT_EQ(r.code, 0) << cmd << ": " << r.err;
        EXPECT_NE(r.out.find("identical"), std::string::npos);
    }
}

TEST_F(CliTest, ReplayDetectsTampering) {
    ASSERT_EQ(invoke({"--out", dir_.string(), "simulate"}).code, 0);
    auto m = nlohmann::json::parse(slurp(dir_ / "simulate.manifest.json"));
    m["outputs"][0]["sha256"] = std::string(64, '0');
    std::ofstream(dir_ / "bad.manifest.json") << m.dump(2);
    const auto r = invoke({"replay", "--manifest", at("bad.manifest.json")});
    EXPECT_EQ(r.code, cli::kExitMismatch);
    EXPECT_NE(r.err.find("mismatch"), std::string::npos);
}

TEST_F(CliTest, ModelSchemaMismatch) {
    ASSERT_EQ(invoke({"--out", dir_.string(), "simulate"}).code, 0);
    const auto full = dir_ / "full";
    const auto hp = dir_ / "hp";
    ASSERT_EQ(invoke({"--out", full.string(), "extract", "--profiles", at("harvested.tsv")}).code, 0);
    ASSERT_EQ(invoke({"--out", hp.string(), "extract", "--profiles", at("harvested.tsv"), "--group", "honeypot"}).code,
              0);
    ASSERT_EQ(invoke({"--out", hp.string(), "train", "--data", (hp / "dataset.arff").string(), "--c-size", "2",
                   "--i-max", "3"})
                  .code,
              0);
    const auto r = invoke({"--out", dir_.string(), "predict", "--model", (hp / "model.txt").string(), "--data",
                        (full / "dataset.arff").string()});
    EXPECT_EQ(r.code, cli::kExitInput);
}

TEST_F(CliTest, InputAndEnvironmentErrors) {
    auto r = invoke({"--out", dir_.string(), "extract", "--profiles", at("missing.tsv")});
    EXPECT_EQ(r.code, cli::kExitEnvironment) << r.err;
    std::ofstream(at("bad.arff")) << "@relation r\n@attribute x string\n@data\n";
    r = invoke({"--out", dir_.string(), "train", "--data", at("bad.arff")});
    EXPECT_EQ(r.code, cli::kExitInput);
    EXPECT_NE(r.err.find("error:"), std::string::npos);
    std::ofstream(at("bad.conf")) << "n_spammer = -4\n";
    EXPECT_EQ(invoke({"--out", dir_.string(), "simulate", "--config", at("bad.conf")}).code, cli::kExitInput);
}

TEST_F(CliTest, TooManyFoldsAndSingleClass) {
    ASSERT_EQ(invoke({"--out", dir_.string(), "simulate"}).code, 0);
    ASSERT_EQ(invoke({"--out", dir_.string(), "extract", "--profiles", at("harvested.tsv"), "--group", "combined"}).code,
              0);
    auto r = invoke({"--out", dir_.string(), "evaluate", "--data", at("dataset.arff"), "--k", "200"});
    EXPECT_EQ(r.code, cli::kExitInput);
    EXPECT_NE(r.err.find("lower k"), std::string::npos) << r.err;

    std::ofstream(at("one.arff")) << "@relation r\n@attribute x numeric\n@attribute class {mal,leg}\n@data\n"
                                     "1,leg\n2,leg\n3,leg\n4,leg\n";
    r = invoke({"--out", dir_.string(), "train", "--data", at("one.arff")});
    EXPECT_EQ(r.code, cli::kExitInput) << r.err;
}

TEST_F(CliTest, DemoRuns) {
    const auto r = invoke({"--out", dir_.string(), "--jobs", "4", "demo"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("Feature-set ablation"), std::string::npos);
    EXPECT_TRUE(fs::exists(dir_ / "ablation.csv"));
    EXPECT_TRUE(fs::exists(dir_ / "demo.manifest.json"));
}
