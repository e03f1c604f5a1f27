#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "honeytrap/arff.hpp"
#include "honeytrap/decorate.hpp"
#include "honeytrap/features.hpp"

namespace honeytrap::eval {

/// Rows are actual classes, columns predicted classes.
class ConfusionMatrix {
public:
    ConfusionMatrix() = default;
    explicit ConfusionMatrix(std::vector<std::string> labels);
    /// TypeError unless `counts` is labels.size() x labels.size().
    ConfusionMatrix(std::vector<std::string> labels, const std::vector<std::vector<std::uint64_t>>& counts);

    void add(std::size_t actual, std::size_t predicted, std::uint64_t count = 1);

    [[nodiscard]] std::size_t size() const noexcept { return labels_.size(); }
    [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return labels_; }
    [[nodiscard]] std::uint64_t at(std::size_t actual, std::size_t predicted) const {
        return cells_.at(actual * labels_.size() + predicted);
    }
    [[nodiscard]] std::uint64_t row_sum(std::size_t actual) const;
    [[nodiscard]] std::uint64_t col_sum(std::size_t predicted) const;
    [[nodiscard]] std::uint64_t diagonal() const;
    [[nodiscard]] std::uint64_t total() const;

    bool operator==(const ConfusionMatrix&) const = default;

private:
    std::vector<std::string> labels_;
    std::vector<std::uint64_t> cells_;
};

/// Diagonal mass over n. UndefinedMetricError for an empty matrix.
[[nodiscard]] double accuracy(const ConfusionMatrix& cm);

/// Cohen's kappa (Po - Pe) / (1 - Pe) with Pe = sum_i rowsum_i * colsum_i / n^2.
/// UndefinedMetricError when n = 0 or Pe = 1.
[[nodiscard]] double kappa(const ConfusionMatrix& cm);

struct ClassMetrics {
    double tp_rate = 0.0;    // = recall
    double fp_rate = 0.0;
    double precision = 0.0;
    double recall = 0.0;
};

/// Per-class rates; an empty row or column yields 0 for the affected rate.
[[nodiscard]] std::vector<ClassMetrics> class_metrics(const ConfusionMatrix& cm);

/// FP / (FP + TN) for `positive` against all other classes; 0 when there are no negatives.
[[nodiscard]] double fp_rate(const ConfusionMatrix& cm, std::size_t positive);

struct Prediction {
    std::vector<double> distribution;
    std::size_t actual = 0;

    bool operator==(const Prediction&) const = default;
};

struct ProbErrors {
    double mae = 0.0;
    double rmse = 0.0;
};

/// Residuals against the 0/1 indicator of the actual class, averaged over
/// instances and classes.
[[nodiscard]] ProbErrors prob_errors(std::span<const Prediction> predictions);

/// Confusion from argmax predictions (ties to the first class).
[[nodiscard]] ConfusionMatrix confusion(std::span<const Prediction> predictions, std::vector<std::string> labels);

/// Confusion when `positive` is predicted iff its probability >= threshold;
/// otherwise the most probable of the remaining classes.
[[nodiscard]] ConfusionMatrix confusion_at(std::span<const Prediction> predictions, std::vector<std::string> labels,
                                           std::size_t positive, double threshold);

struct CurvePoint {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const CurvePoint&) const = default;
};

/// Lift-style curve: x = fraction of instances selected in descending
/// order of positive probability (stable on ties), y = fraction of all
/// positives retrieved. Starts at (0,0). UndefinedMetricError when there
/// are no positives.
[[nodiscard]] std::vector<CurvePoint> threshold_curve(std::span<const Prediction> predictions,
                                                      std::size_t positive);

/// p(actual) minus the largest probability among the other classes.
[[nodiscard]] double margin(const Prediction& prediction);

/// Cumulative distribution of margins: one point per distinct margin.
[[nodiscard]] std::vector<CurvePoint> margin_curve(std::span<const Prediction> predictions);

/// cost[actual][predicted].
struct CostMatrix {
    std::vector<std::vector<double>> cost;

    /// Two-class matrix for a positive class at index `positive`:
    /// a false negative costs `fn_cost`, a false positive `fp_cost`.
    [[nodiscard]] static CostMatrix binary(std::size_t positive, double fn_cost, double fp_cost);
    /// Zero diagonal, `off` elsewhere.
    [[nodiscard]] static CostMatrix uniform(std::size_t k, double off = 1.0);

    /// TypeError unless k x k with finite entries.
    void validate(std::size_t k) const;
};

[[nodiscard]] double total_cost(const ConfusionMatrix& cm, const CostMatrix& cost);

struct CostBenefit {
    double threshold = 0.0;
    ConfusionMatrix confusion;
    double total_cost = 0.0;
    double accuracy = 0.0;
};

/// Sweeps the positive-class threshold over every distinct predicted
/// probability plus 0 and 1; keeps the cheapest (ties to the smaller threshold).
[[nodiscard]] CostBenefit cost_benefit(std::span<const Prediction> predictions, std::vector<std::string> labels,
                                       std::size_t positive, const CostMatrix& cost);

struct EvalReport {
    std::size_t n = 0;
    std::vector<std::string> labels;
    std::size_t positive = 0;
    double accuracy = 0.0;
    std::optional<double> kappa;  // absent when undefined
    double mae = 0.0;
    double rmse = 0.0;
    std::vector<ClassMetrics> per_class;
    ConfusionMatrix confusion;
    std::vector<CurvePoint> threshold_curve;  // empty when there are no positives
    std::vector<CurvePoint> margin_curve;
};

[[nodiscard]] EvalReport make_report(std::span<const Prediction> predictions, std::vector<std::string> labels,
                                     std::size_t positive);

/// fold_of[r] for every labelled row r (rows with a missing class get
/// kNoFold). Classes are shuffled independently with the seed and dealt
/// round-robin so every fold holds each class within one instance of
/// its share. StratificationError when a present class has fewer than k rows.
inline constexpr std::size_t kNoFold = static_cast<std::size_t>(-1);
[[nodiscard]] std::vector<std::size_t> stratified_folds(const arff::Dataset& dataset, std::size_t k,
                                                        std::uint64_t seed);

struct CvResult {
    EvalReport report;
    std::vector<Prediction> predictions;  // in row order, labelled rows only
    std::vector<std::size_t> rows;        // dataset row of each prediction
    std::vector<std::size_t> fold_of;     // per dataset row
};

/// Resolves a class label name to its index. NotFoundError when absent.
[[nodiscard]] std::size_t class_index_of(const arff::Dataset& dataset, std::string_view label);

/// Stratified k-fold cross-validation of DECORATE. Fold f trains with seed
/// Rng::derive(params.seed, f), so results do not depend on `jobs`.
[[nodiscard]] CvResult cross_validate(const arff::Dataset& dataset, const decorate::DecorateParams& params,
                                      std::size_t k, std::uint64_t seed, std::string_view positive = "mal",
                                      std::size_t jobs = 1);

struct AblationRow {
    features::GroupKind group = features::GroupKind::Combined;
    double accuracy = 0.0;
    double recall = 0.0;   // of the positive class
    double fp_rate = 0.0;  // of the positive class
    std::optional<double> kappa;
};

/// Cross-validates each projected dataset with the same folds.
[[nodiscard]] std::vector<AblationRow> ablation(const arff::Dataset& dataset,
                                                std::span<const features::FeatureGroup> groups,
                                                const decorate::DecorateParams& params, std::size_t k,
                                                std::uint64_t seed, std::string_view positive = "mal",
                                                std::size_t jobs = 1);

// Report rendering.

/// Human-readable summary laid out like a classifier-output panel.
[[nodiscard]] std::string format_report(const EvalReport& report, std::string_view title);
[[nodiscard]] std::string format_cost_benefit(const CostBenefit& result, std::span<const std::string> labels,
                                              std::size_t positive);
/// Machine-readable JSON document for the report (and cost/benefit result, when given).
[[nodiscard]] std::string report_json(const EvalReport& report, const CostBenefit* cost_benefit = nullptr);
/// `sample_size,recall`
void write_threshold_curve(std::ostream& out, std::span<const CurvePoint> curve);
/// `margin,cumulative_fraction`
void write_margin_curve(std::ostream& out, std::span<const CurvePoint> curve);
[[nodiscard]] std::string format_ablation(std::span<const AblationRow> rows);
/// `group,accuracy,recall,fp_rate,kappa`
void write_ablation_csv(std::ostream& out, std::span<const AblationRow> rows);

}  // namespace honeytrap::eval
