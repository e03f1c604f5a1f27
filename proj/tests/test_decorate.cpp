#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "honeytrap/decorate.hpp"
#include "honeytrap/errors.hpp"
#include "honeytrap/features.hpp"
#include "honeytrap/model_io.hpp"
#include "support.hpp"

using namespace honeytrap;
using namespace honeytrap::decorate;

namespace {

DecorateParams params(std::int64_t c_size = 15, std::int64_t i_max = 50, std::uint64_t seed = 1) {
    DecorateParams p;
    p.c_size = c_size;
    p.i_max = i_max;
    p.seed = seed;
    return p;
}

Ensemble fixed_ensemble(const std::vector<std::vector<double>>& leaf_distributions) {
    // one-leaf trees with the given distributions, assembled by hand
    const auto d = fixtures::numeric_dataset(1);
    std::vector<DecisionTree> members;
    for (const auto& dist : leaf_distributions) {
        std::ostringstream text;
        text << "tree 2 1 2 1\ncardinality 0 2\nL 1 " << dist[0] << ' ' << dist[1] << '\n';
        std::istringstream in(text.str());
        members.push_back(DecisionTree::read(in));
    }
    return restore_ensemble(d.attributes(), 1, DecorateParams{}, members, {}, 0);
}

}  // namespace

TEST(Params, Validation) {
    EXPECT_NO_THROW(DecorateParams{}.validate());
    EXPECT_THROW(params(0, 5).validate(), ConfigError);
    EXPECT_THROW(params(10, 5).validate(), ConfigError);
    auto p = params();
    p.r_size = 0.0;
    EXPECT_THROW(p.validate(), ConfigError);
}

TEST(Artificial, EmptyRequest) {
    const auto d = fixtures::blobs(10, 2, 1.0, 1);
    EXPECT_TRUE(generate_artificial(d, 0, 1).empty());
}

TEST(Artificial, ConstantAttributeStaysConstant) {
    auto d = fixtures::numeric_dataset(2);
    for (int i = 0; i < 20; ++i) {
        d.add_row({3.25, static_cast<double>(i), static_cast<double>(i % 2)});
    }
    for (const auto& row : generate_artificial(d, 50, 4)) {
        EXPECT_EQ(row[0], 3.25);
        EXPECT_TRUE(arff::is_missing(row[2]));
    }
}

TEST(Artificial, GaussianMomentsFollowTheData) {
    // exact mean 5 and sample std 2: alternating 3 and 7 has std sqrt(4 * n / (n-1))
    auto d = fixtures::numeric_dataset(1);
    const int n = 1000;
    for (int i = 0; i < n; ++i) {
        d.add_row({i % 2 == 0 ? 3.0 : 7.0, static_cast<double>(i % 2)});
    }
    const auto rows = generate_artificial(d, 10000, 8);
    double s = 0.0;
    double s2 = 0.0;
    for (const auto& r : rows) {
        s += r[0];
        s2 += r[0] * r[0];
    }
    const double mean = s / 10000.0;
    const double var = s2 / 10000.0 - mean * mean;
    EXPECT_NEAR(mean, 5.0, 0.1);
    EXPECT_NEAR(std::sqrt(var), 2.0, 0.1);
}

TEST(Artificial, NominalFrequenciesAreSmoothed) {
    std::vector<arff::Attribute> attrs{arff::Attribute::nominal("c", {"a", "b", "z"}),
                                       arff::Attribute::nominal("class", {"mal", "leg"})};
    arff::Dataset d("nom", attrs);
    d.designate_class("class");
    for (int i = 0; i < 7; ++i) {
        d.add_row({i < 6 ? 0.0 : 1.0, 0.0});
    }
    // Laplace: a = 7/10, b = 2/10, z = 1/10
    const auto rows = generate_artificial(d, 20000, 3);
    std::vector<double> freq(3, 0.0);
    for (const auto& r : rows) {
        freq[static_cast<std::size_t>(r[0])] += 1.0 / 20000.0;
    }
    EXPECT_NEAR(freq[0], 0.7, 0.02);
    EXPECT_NEAR(freq[1], 0.2, 0.02);
    EXPECT_NEAR(freq[2], 0.1, 0.02);
}

TEST(Artificial, Deterministic) {
    const auto d = fixtures::blobs(30, 3, 1.0, 2);
    const auto a = generate_artificial(d, 40, 99);
    const auto b = generate_artificial(d, 40, 99);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j + 1 < a[i].size(); ++j) {
            EXPECT_EQ(a[i][j], b[i][j]);
        }
    }
}

TEST(Diversity, UniformPredictionGivesUniformWeights) {
    const std::vector<double> p{0.5, 0.5};
    const auto w = diversity_weights(p);
    EXPECT_DOUBLE_EQ(w[0], 0.5);
    EXPECT_DOUBLE_EQ(w[1], 0.5);
}

TEST(Diversity, ClampedInversion) {
    const std::vector<double> p{0.9995, 0.0005};
    // the second class is clamped to 1e-3 before inverting
    const double inv0 = 1.0 / 0.9995;
    const double inv1 = 1.0 / kLabelProbabilityFloor;
    const auto w = diversity_weights(p);
    EXPECT_NEAR(w[1], inv1 / (inv0 + inv1), 1e-12);
    EXPECT_NEAR(w[1], 0.999, 1e-3);
}

TEST(Diversity, LabelsFollowWeights) {
    const auto e = fixed_ensemble({{0.8, 0.2}});
    std::vector<arff::Row> rows(20000, arff::Row{0.0, arff::kMissing});
    const auto labelled = label_artificial(e, rows, 5);
    double minority = 0.0;
    for (const auto& r : labelled) {
        minority += r[1] == 1.0 ? 1.0 : 0.0;
    }
    // weights 1/0.2 : 1/0.8 -> 0.8 for the second class
    EXPECT_NEAR(minority / 20000.0, 0.8, 0.02);
    EXPECT_EQ(label_artificial(e, rows, 5), labelled);
}

TEST(Ensemble, MeanAndTieRule) {
    const auto e = fixed_ensemble({{1.0, 0.0}, {0.0, 1.0}});
    const std::vector<double> row{0.0, arff::kMissing};
    const auto p = e.predict(row);
    EXPECT_DOUBLE_EQ(p[0], 0.5);
    EXPECT_DOUBLE_EQ(p[1], 0.5);
    EXPECT_EQ(e.classify(row), 0u);
}

TEST(Ensemble, SingleMemberMatchesTree) {
    const auto d = fixtures::blobs(60, 2, 1.5, 3);
    const auto e = train_decorate(d, params(1, 1));
    ASSERT_EQ(e.size(), 1u);
    const auto tree = DecisionTree::train(d);
    for (const auto& row : d.rows()) {
        EXPECT_EQ(e.predict(row), tree.predict(row));
    }
    EXPECT_DOUBLE_EQ(e.training_error(), error_rate(e, d));
}

TEST(Ensemble, ArgmaxInvariantUnderUniformRescaling) {
    const auto d = fixtures::blobs(60, 2, 1.0, 4);
    const auto e = train_decorate(d, params(5, 10));
    for (const auto& row : d.rows()) {
        auto p = e.predict(row);
        const auto c = e.classify(row);
        for (double& v : p) {
            v *= 3.7;
        }
        EXPECT_EQ(argmax(p), c);
    }
}

TEST(Decorate, LinearlySeparableReachesZeroError) {
    const auto d = fixtures::blobs(80, 2, 12.0, 5);
    const auto e = train_decorate(d, params());
    EXPECT_GE(e.size(), 1u);
    EXPECT_DOUBLE_EQ(e.training_error(), 0.0);
}

TEST(Decorate, ErrorNeverIncreasesOverAcceptedSteps) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto d = fixtures::blobs(60, 3, 0.8, seed);
        const auto e = train_decorate(d, params(15, 50, seed));
        const auto& h = e.error_history();
        ASSERT_EQ(h.size(), e.size());
        for (std::size_t i = 1; i < h.size(); ++i) {
            EXPECT_LE(h[i], h[i - 1]);
        }
        EXPECT_LE(e.size(), 15u);
        EXPECT_LE(e.trials(), 50u);
        EXPECT_DOUBLE_EQ(e.training_error(), error_rate(e, d));
    }
}

TEST(Decorate, EnsembleBeatsOrTiesSingleTreeOnPipelineData) {
    const auto d = features::project_dataset(fixtures::pipeline_dataset(42), features::FeatureGroup::combined());
    const auto e = train_decorate(d, params(15, 50, 42));
    const auto single = train_decorate(d, params(1, 1, 42));
    EXPECT_LE(e.training_error(), single.training_error());
}

TEST(Decorate, PredictionsMatchIndependentMemberMean) {
    const auto full = features::project_dataset(fixtures::pipeline_dataset(42), features::FeatureGroup::combined());
    std::vector<std::size_t> train_rows, held_out;
    for (std::size_t r = 0; r < full.size(); ++r) {
        (r < 10 ? held_out : train_rows).push_back(r);
    }
    const auto e = train_decorate(full.subset(train_rows), params(15, 50, 42));
    for (std::size_t r : held_out) {
        std::vector<double> mean(2, 0.0);
        for (const auto& m : e.members()) {
            const auto p = m.predict(full.row(r));
            mean[0] += p[0];
            mean[1] += p[1];
        }
        const auto got = e.predict(full.row(r));
        EXPECT_NEAR(got[0], mean[0] / static_cast<double>(e.size()), 1e-12);
        EXPECT_NEAR(got[1], mean[1] / static_cast<double>(e.size()), 1e-12);
        EXPECT_NEAR(got[0] + got[1], 1.0, 1e-9);
    }
}

TEST(Decorate, DeterministicBySerialisation) {
    const auto d = fixtures::blobs(50, 3, 1.0, 6);
    EXPECT_EQ(model_to_string(train_decorate(d, params(8, 20, 3))),
              model_to_string(train_decorate(d, params(8, 20, 3))));
    EXPECT_NE(model_to_string(train_decorate(d, params(8, 20, 3))),
              model_to_string(train_decorate(d, params(8, 20, 4))));
}

TEST(Decorate, Errors) {
    auto single = fixtures::numeric_dataset(1);
    single.add_row({1.0, 0.0});
    single.add_row({2.0, 0.0});
    EXPECT_THROW((void)train_decorate(single, params()), TrainingError);
    auto tiny = fixtures::numeric_dataset(1);
    tiny.add_row({1.0, 0.0});
    EXPECT_THROW((void)train_decorate(tiny, params()), TrainingError);
}
