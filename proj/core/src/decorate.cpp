#include "honeytrap/decorate.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "honeytrap/errors.hpp"
#include "honeytrap/random.hpp"

namespace honeytrap::decorate {

void DecorateParams::validate() const {
    if (c_size < 1) {
        throw ConfigError(fmt::format("c_size must be >= 1 (got {})", c_size));
    }
    if (i_max < c_size) {
        throw ConfigError(fmt::format("i_max must be >= c_size (got i_max={}, c_size={})", i_max, c_size));
    }
    if (!(r_size > 0.0) || !std::isfinite(r_size)) {
        throw ConfigError(fmt::format("r_size must be a finite value > 0 (got {})", r_size));
    }
    if (!(tree.min_leaf > 0.0)) {
        throw ConfigError("min_leaf must be > 0");
    }
}

Ensemble::Ensemble(std::vector<arff::Attribute> schema, std::size_t class_index, DecorateParams params)
    : schema_(std::move(schema)), class_index_(class_index), params_(params) {
    if (class_index_ >= schema_.size() || !schema_[class_index_].is_nominal()) {
        throw TypeError("ensemble class attribute must be an existing nominal attribute");
    }
}

void Ensemble::add_member(DecisionTree tree) {
    if (tree.num_attributes() != schema_.size() || tree.num_classes() != num_classes() ||
        tree.class_index() != class_index_) {
        throw TypeError("tree does not match the ensemble schema");
    }
    members_.push_back(std::move(tree));
}

std::vector<double> Ensemble::predict(std::span<const double> instance) const {
    if (members_.empty()) {
        throw TrainingError("ensemble has no members");
    }
    if (instance.size() != schema_.size()) {
        throw TypeError(fmt::format("instance has {} values, ensemble expects {}", instance.size(), schema_.size()));
    }
    std::vector<double> mean(num_classes(), 0.0);
    for (const auto& tree : members_) {
        const auto p = tree.predict(instance);
        for (std::size_t c = 0; c < mean.size(); ++c) {
            mean[c] += p[c];
        }
    }
    for (double& m : mean) {
        m /= static_cast<double>(members_.size());
    }
    return mean;
}

std::size_t Ensemble::classify(std::span<const double> instance) const { return argmax(predict(instance)); }

Ensemble restore_ensemble(std::vector<arff::Attribute> schema, std::size_t class_index, DecorateParams params,
                          std::vector<DecisionTree> members, std::vector<double> error_history,
                          std::size_t trials) {
    Ensemble e(std::move(schema), class_index, params);
    for (auto& m : members) {
        e.add_member(std::move(m));
    }
    e.error_history_ = std::move(error_history);
    e.trials_ = trials;
    return e;
}

std::size_t argmax(std::span<const double> distribution) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < distribution.size(); ++c) {
        if (distribution[c] > distribution[best]) {
            best = c;
        }
    }
    return best;
}

std::vector<arff::Row> generate_artificial(const arff::Dataset& dataset, std::size_t n, std::uint64_t seed) {
    if (dataset.empty()) {
        throw TrainingError("cannot generate artificial examples from an empty dataset");
    }
    const std::size_t n_attr = dataset.num_attributes();
    const auto class_idx = dataset.class_index();

    struct Model {
        bool usable = false;
        double mean = 0.0;
        double stddev = 0.0;
        std::vector<double> label_weights;
    };
    std::vector<Model> models(n_attr);
    for (std::size_t a = 0; a < n_attr; ++a) {
        if (class_idx && a == *class_idx) {
            continue;
        }
        const auto& attr = dataset.attribute(a);
        Model& m = models[a];
        if (attr.is_nominal()) {
            m.label_weights.assign(attr.labels.size(), 1.0);  // Laplace
            for (const auto& row : dataset.rows()) {
                if (!arff::is_missing(row[a])) {
                    m.label_weights[static_cast<std::size_t>(row[a])] += 1.0;
                }
            }
            m.usable = true;
            continue;
        }
        double sum = 0.0;
        std::size_t count = 0;
        for (const auto& row : dataset.rows()) {
            if (!arff::is_missing(row[a])) {
                sum += row[a];
                ++count;
            }
        }
        if (count == 0) {
            continue;
        }
        m.usable = true;
        m.mean = sum / static_cast<double>(count);
        double ss = 0.0;
        for (const auto& row : dataset.rows()) {
            if (!arff::is_missing(row[a])) {
                ss += (row[a] - m.mean) * (row[a] - m.mean);
            }
        }
        m.stddev = count > 1 ? std::sqrt(ss / static_cast<double>(count - 1)) : 0.0;
    }

    Rng rng(seed);
    std::vector<arff::Row> rows;
    rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        arff::Row row(n_attr, arff::kMissing);
        for (std::size_t a = 0; a < n_attr; ++a) {
            const Model& m = models[a];
            if (!m.usable) {
                continue;
            }
            if (!m.label_weights.empty()) {
                row[a] = static_cast<double>(rng.categorical(m.label_weights));
            } else {
                row[a] = m.stddev > 0.0 ? rng.normal(m.mean, m.stddev) : m.mean;
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<double> diversity_weights(std::span<const double> distribution) {
    std::vector<double> w(distribution.size());
    double total = 0.0;
    for (std::size_t c = 0; c < w.size(); ++c) {
        w[c] = 1.0 / std::max(distribution[c], kLabelProbabilityFloor);
        total += w[c];
    }
    for (double& x : w) {
        x /= total;
    }
    return w;
}

std::vector<arff::Row> label_artificial(const Ensemble& ensemble, std::vector<arff::Row> rows, std::uint64_t seed) {
    if (ensemble.empty()) {
        throw TrainingError("cannot label artificial examples with an empty ensemble");
    }
    Rng rng(seed);
    for (auto& row : rows) {
        const auto w = diversity_weights(ensemble.predict(row));
        row[ensemble.class_index()] = static_cast<double>(rng.categorical(w));
    }
    return rows;
}

double error_rate(const Ensemble& ensemble, const arff::Dataset& dataset) {
    std::size_t labelled = 0;
    std::size_t wrong = 0;
    for (std::size_t r = 0; r < dataset.size(); ++r) {
        const auto actual = dataset.class_of(r);
        if (!actual) {
            continue;
        }
        ++labelled;
        if (ensemble.classify(dataset.row(r)) != *actual) {
            ++wrong;
        }
    }
    return labelled == 0 ? 0.0 : static_cast<double>(wrong) / static_cast<double>(labelled);
}

namespace {

/// Error from running sums of member distributions over the labelled rows,
/// dividing exactly as Ensemble::predict does so both agree bit for bit.
double error_from_sums(const std::vector<std::vector<double>>& sums, std::size_t members,
                       const std::vector<std::size_t>& actual) {
    std::size_t wrong = 0;
    std::vector<double> mean;
    for (std::size_t i = 0; i < sums.size(); ++i) {
        mean = sums[i];
        for (double& m : mean) {
            m /= static_cast<double>(members);
        }
        if (argmax(mean) != actual[i]) {
            ++wrong;
        }
    }
    return static_cast<double>(wrong) / static_cast<double>(sums.size());
}

}  // namespace

Ensemble train_decorate(const arff::Dataset& dataset, const DecorateParams& params) {
    params.validate();
    if (!dataset.has_class()) {
        throw TrainingError("cannot train: no class attribute designated");
    }
    std::vector<std::size_t> labelled;
    std::vector<std::size_t> actual;
    std::vector<bool> present(dataset.num_classes(), false);
    for (std::size_t r = 0; r < dataset.size(); ++r) {
        if (const auto c = dataset.class_of(r)) {
            labelled.push_back(r);
            actual.push_back(*c);
            present[*c] = true;
        }
    }
    if (labelled.size() < 2) {
        throw TrainingError("cannot train: need at least two instances with a known class");
    }
    if (std::count(present.begin(), present.end(), true) < 2) {
        throw TrainingError("cannot train: only one class is present, so no diversity can be defined");
    }
    const arff::Dataset real = dataset.subset(labelled);

    Ensemble ensemble(dataset.attributes(), *dataset.class_index(), params);
    ensemble.add_member(DecisionTree::train(real, params.tree));

    // sums[i] = sum of member distributions for real row i
    std::vector<std::vector<double>> sums;
    sums.reserve(real.size());
    for (const auto& row : real.rows()) {
        sums.push_back(ensemble.members().front().predict(row));
    }
    double error = error_from_sums(sums, 1, actual);
    ensemble.error_history_.push_back(error);

    const auto n_artificial = static_cast<std::size_t>(
        std::max(1.0, std::round(params.r_size * static_cast<double>(real.size()))));
    std::size_t trials = 1;
    while (ensemble.size() < static_cast<std::size_t>(params.c_size) &&
           trials < static_cast<std::size_t>(params.i_max)) {
        auto artificial = generate_artificial(real, n_artificial, Rng::derive(params.seed, 2 * trials));
        artificial = label_artificial(ensemble, std::move(artificial), Rng::derive(params.seed, 2 * trials + 1));

        arff::Dataset augmented = real;
        for (auto& row : artificial) {
            augmented.add_row(std::move(row));
        }
        DecisionTree candidate = DecisionTree::train(augmented, params.tree);

        std::vector<std::vector<double>> candidate_sums = sums;
        for (std::size_t i = 0; i < real.size(); ++i) {
            const auto p = candidate.predict(real.row(i));
            for (std::size_t c = 0; c < p.size(); ++c) {
                candidate_sums[i][c] += p[c];
            }
        }
        const double candidate_error = error_from_sums(candidate_sums, ensemble.size() + 1, actual);
        if (candidate_error <= error) {
            ensemble.add_member(std::move(candidate));
            sums = std::move(candidate_sums);
            error = candidate_error;
            ensemble.error_history_.push_back(error);
        }
        ++trials;
    }
    ensemble.trials_ = trials;
    return ensemble;
}

}  // namespace honeytrap::decorate
