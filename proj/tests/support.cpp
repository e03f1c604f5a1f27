#include "support.hpp"

#include "honeytrap/features.hpp"
#include "honeytrap/random.hpp"

namespace honeytrap::fixtures {

std::filesystem::path data_path(const std::string& name) { return std::filesystem::path(HONEYTRAP_TEST_DATA_DIR) / name; }

std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("honeytrap_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

arff::Dataset numeric_dataset(std::size_t n_features, std::vector<std::string> labels) {
    std::vector<arff::Attribute> attrs;
    for (std::size_t i = 0; i < n_features; ++i) {
        attrs.push_back(arff::Attribute::numeric("x" + std::to_string(i)));
    }
    attrs.push_back(arff::Attribute::nominal("class", std::move(labels)));
    arff::Dataset d("numeric", std::move(attrs));
    d.designate_class("class");
    return d;
}

arff::Dataset pipeline_dataset(std::uint64_t seed) {
    simnet::SimConfig config;
    config.seed = seed;
    const auto sim = simnet::run_simulation(config);
    const auto harvested =
        simnet::harvest(sim.profiles, sim.events, config.harvest_cap, config.seed, config.control_fraction);
    std::vector<features::FeatureVector> vectors;
    for (const auto& p : harvested) {
        vectors.push_back(features::extract(p));
    }
    return features::build_dataset(vectors);
}

arff::Dataset blobs(std::size_t n, std::size_t dims, double separation, std::uint64_t seed) {
    auto d = numeric_dataset(dims);
    Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t cls = i % 2;
        arff::Row row;
        for (std::size_t j = 0; j < dims; ++j) {
            row.push_back(rng.normal(cls == 0 ? 0.0 : separation, 1.0));
        }
        row.push_back(static_cast<double>(cls));
        d.add_row(row);
    }
    return d;
}

double kappa_oracle(const std::vector<std::vector<std::uint64_t>>& counts) {
    const std::size_t k = counts.size();
    double n = 0.0;
    double agree = 0.0;
    std::vector<double> rows(k, 0.0), cols(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            const auto c = static_cast<double>(counts[i][j]);
            n += c;
            rows[i] += c;
            cols[j] += c;
            if (i == j) {
                agree += c;
            }
        }
    }
    double pe = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        pe += rows[i] * cols[i];
    }
    pe /= n * n;
    const double po = agree / n;
    return (po - pe) / (1.0 - pe);
}

namespace {

std::string awkward_name(Rng& rng) {
    static const std::string alphabet = "abcXYZ019_- ,'\"%?{}@\\";
    std::string s;
    const std::size_t len = 1 + rng.index(8);
    for (std::size_t i = 0; i < len; ++i) {
        s += alphabet[rng.index(alphabet.size())];
    }
    return s;
}

double awkward_number(Rng& rng) {
    switch (rng.index(5)) {
        case 0:
            return static_cast<double>(static_cast<long>(rng.index(2001)) - 1000);
        case 1:
            return rng.normal(0.0, 1e6);
        case 2:
            return rng.uniform() * 1e-300;
        case 3:
            return 0.1 * static_cast<double>(rng.index(100));
        default:
            return rng.uniform(-1.0, 1.0);
    }
}

}  // namespace

arff::Dataset random_arff_dataset(std::uint64_t seed) {
    Rng rng(seed);
    std::vector<arff::Attribute> attrs;
    const std::size_t n_attr = 1 + rng.index(6);
    for (std::size_t a = 0; a < n_attr; ++a) {
        std::string name = awkward_name(rng) + std::to_string(a);
        if (rng.bernoulli(0.5)) {
            std::vector<std::string> labels;
            const std::size_t k = 1 + rng.index(4);
            for (std::size_t l = 0; l < k; ++l) {
                labels.push_back(awkward_name(rng) + std::to_string(l));
            }
            attrs.push_back(arff::Attribute::nominal(name, labels));
        } else {
            attrs.push_back(arff::Attribute::numeric(name));
        }
    }
    arff::Dataset d(awkward_name(rng), attrs);
    const std::size_t n_rows = rng.index(12);
    for (std::size_t r = 0; r < n_rows; ++r) {
        arff::Row row;
        for (const auto& a : attrs) {
            if (rng.bernoulli(0.1)) {
                row.push_back(arff::kMissing);
            } else if (a.is_nominal()) {
                row.push_back(static_cast<double>(rng.index(a.labels.size())));
            } else {
                row.push_back(awkward_number(rng));
            }
        }
        d.add_row(std::move(row));
    }
    return d;
}

}  // namespace honeytrap::fixtures
