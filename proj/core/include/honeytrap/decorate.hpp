#pragma once

// DECORATE: an ensemble grown by training each new tree on the real data
// plus artificial examples whose labels oppose the current ensemble, and
// keeping the tree only if ensemble training error does not go up.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "honeytrap/arff.hpp"
#include "honeytrap/tree.hpp"

namespace honeytrap::decorate {

struct DecorateParams {
    std::int64_t c_size = 15;  // desired ensemble size
    std::int64_t i_max = 50;   // maximum number of trials
    double r_size = 1.0;       // artificial examples per trial, as a fraction of |T|
    std::uint64_t seed = 1;
    TreeParams tree{};

    /// ConfigError unless c_size >= 1, i_max >= c_size and r_size > 0.
    void validate() const;

    bool operator==(const DecorateParams&) const = default;
};

/// Probability floor applied before inverting ensemble predictions.
inline constexpr double kLabelProbabilityFloor = 1e-3;

class Ensemble {
public:
    Ensemble(std::vector<arff::Attribute> schema, std::size_t class_index, DecorateParams params);

    void add_member(DecisionTree tree);

    [[nodiscard]] const std::vector<DecisionTree>& members() const noexcept { return members_; }
    [[nodiscard]] std::size_t size() const noexcept { return members_.size(); }
    [[nodiscard]] bool empty() const noexcept { return members_.empty(); }
    [[nodiscard]] const std::vector<arff::Attribute>& schema() const noexcept { return schema_; }
    [[nodiscard]] std::size_t class_index() const noexcept { return class_index_; }
    [[nodiscard]] const std::vector<std::string>& class_labels() const { return schema_[class_index_].labels; }
    [[nodiscard]] std::size_t num_classes() const { return class_labels().size(); }
    [[nodiscard]] const DecorateParams& params() const noexcept { return params_; }

    /// Training error on the real data after the initial tree and after
    /// every accepted candidate.
    [[nodiscard]] const std::vector<double>& error_history() const noexcept { return error_history_; }
    [[nodiscard]] double training_error() const {
        return error_history_.empty() ? 0.0 : error_history_.back();
    }
    [[nodiscard]] std::size_t trials() const noexcept { return trials_; }

    /// Mean of the member distributions. TypeError on a schema mismatch.
    [[nodiscard]] std::vector<double> predict(std::span<const double> instance) const;
    /// Argmax of predict(); ties go to the class listed first.
    [[nodiscard]] std::size_t classify(std::span<const double> instance) const;

    bool operator==(const Ensemble&) const = default;

private:
    friend Ensemble train_decorate(const arff::Dataset&, const DecorateParams&);
    friend Ensemble restore_ensemble(std::vector<arff::Attribute>, std::size_t, DecorateParams,
                                     std::vector<DecisionTree>, std::vector<double>, std::size_t);

    std::vector<arff::Attribute> schema_;
    std::size_t class_index_ = 0;
    DecorateParams params_;
    std::vector<DecisionTree> members_;
    std::vector<double> error_history_;
    std::size_t trials_ = 0;
};

/// Reassembles a trained ensemble (used by model loading).
[[nodiscard]] Ensemble restore_ensemble(std::vector<arff::Attribute> schema, std::size_t class_index,
                                        DecorateParams params, std::vector<DecisionTree> members,
                                        std::vector<double> error_history, std::size_t trials);

/// Argmax with ties toward the lowest index.
[[nodiscard]] std::size_t argmax(std::span<const double> distribution);

/// `n` rows drawn attribute-wise from the data: numeric values from a
/// Gaussian with the attribute's mean and sample standard deviation,
/// nominal values from Laplace-smoothed label frequencies. The class cell
/// is left missing.
[[nodiscard]] std::vector<arff::Row> generate_artificial(const arff::Dataset& dataset, std::size_t n,
                                                         std::uint64_t seed);

/// Labels each row with probability inversely proportional to the
/// ensemble's (floored) predicted probability for that label.
[[nodiscard]] std::vector<arff::Row> label_artificial(const Ensemble& ensemble, std::vector<arff::Row> rows,
                                                      std::uint64_t seed);

/// The inverse-probability label weights used by label_artificial.
[[nodiscard]] std::vector<double> diversity_weights(std::span<const double> distribution);

/// Fraction of rows with a known class that the ensemble misclassifies.
[[nodiscard]] double error_rate(const Ensemble& ensemble, const arff::Dataset& dataset);

/// TrainingError for fewer than two labelled rows or a single class.
[[nodiscard]] Ensemble train_decorate(const arff::Dataset& dataset, const DecorateParams& params);

}  // namespace honeytrap::decorate
