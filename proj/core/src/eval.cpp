#include "honeytrap/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <set>
#include <thread>

#include <fmt/format.h>

#include "honeytrap/errors.hpp"
#include "honeytrap/random.hpp"

namespace honeytrap::eval {

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> labels)
    : labels_(std::move(labels)), cells_(labels_.size() * labels_.size(), 0) {}

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> labels,
                                 const std::vector<std::vector<std::uint64_t>>& counts)
    : ConfusionMatrix(std::move(labels)) {
    if (counts.size() != labels_.size()) {
        throw TypeError("confusion counts must have one row per label");
    }
    for (std::size_t a = 0; a < counts.size(); ++a) {
        if (counts[a].size() != labels_.size()) {
            throw TypeError("confusion counts must have one column per label");
        }
        for (std::size_t p = 0; p < counts[a].size(); ++p) {
            cells_[a * labels_.size() + p] = counts[a][p];
        }
    }
}

void ConfusionMatrix::add(std::size_t actual, std::size_t predicted, std::uint64_t count) {
    if (actual >= size() || predicted >= size()) {
        throw TypeError("confusion matrix index out of range");
    }
    cells_[actual * size() + predicted] += count;
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t actual) const {
    std::uint64_t s = 0;
    for (std::size_t p = 0; p < size(); ++p) {
        s += at(actual, p);
    }
    return s;
}

std::uint64_t ConfusionMatrix::col_sum(std::size_t predicted) const {
    std::uint64_t s = 0;
    for (std::size_t a = 0; a < size(); ++a) {
        s += at(a, predicted);
    }
    return s;
}

std::uint64_t ConfusionMatrix::diagonal() const {
    std::uint64_t s = 0;
    for (std::size_t c = 0; c < size(); ++c) {
        s += at(c, c);
    }
    return s;
}

std::uint64_t ConfusionMatrix::total() const { return std::accumulate(cells_.begin(), cells_.end(), std::uint64_t{0}); }

double accuracy(const ConfusionMatrix& cm) {
    const auto n = cm.total();
    if (n == 0) {
        throw UndefinedMetricError("accuracy of an empty confusion matrix is undefined");
    }
    return static_cast<double>(cm.diagonal()) / static_cast<double>(n);
}

double kappa(const ConfusionMatrix& cm) {
    const auto n = static_cast<double>(cm.total());
    if (n == 0.0) {
        throw UndefinedMetricError("kappa of an empty confusion matrix is undefined");
    }
    const double observed = static_cast<double>(cm.diagonal()) / n;
    double chance = 0.0;
    for (std::size_t c = 0; c < cm.size(); ++c) {
        chance += static_cast<double>(cm.row_sum(c)) * static_cast<double>(cm.col_sum(c));
    }
    chance /= n * n;
    if (chance >= 1.0) {
        throw UndefinedMetricError("kappa is undefined when chance agreement is 1");
    }
    return (observed - chance) / (1.0 - chance);
}

std::vector<ClassMetrics> class_metrics(const ConfusionMatrix& cm) {
    std::vector<ClassMetrics> out(cm.size());
    for (std::size_t c = 0; c < cm.size(); ++c) {
        const auto tp = static_cast<double>(cm.at(c, c));
        const auto row = static_cast<double>(cm.row_sum(c));
        const auto col = static_cast<double>(cm.col_sum(c));
        out[c].tp_rate = row > 0.0 ? tp / row : 0.0;
        out[c].recall = out[c].tp_rate;
        out[c].precision = col > 0.0 ? tp / col : 0.0;
        out[c].fp_rate = fp_rate(cm, c);
    }
    return out;
}

double fp_rate(const ConfusionMatrix& cm, std::size_t positive) {
    const auto fp = static_cast<double>(cm.col_sum(positive) - cm.at(positive, positive));
    const auto negatives = static_cast<double>(cm.total() - cm.row_sum(positive));
    return negatives > 0.0 ? fp / negatives : 0.0;
}

ProbErrors prob_errors(std::span<const Prediction> predictions) {
    double abs_sum = 0.0;
    double sq_sum = 0.0;
    std::size_t terms = 0;
    for (const auto& p : predictions) {
        for (std::size_t c = 0; c < p.distribution.size(); ++c) {
            const double r = p.distribution[c] - (c == p.actual ? 1.0 : 0.0);
            abs_sum += std::abs(r);
            sq_sum += r * r;
            ++terms;
        }
    }
    if (terms == 0) {
        return {};
    }
    return {abs_sum / static_cast<double>(terms), std::sqrt(sq_sum / static_cast<double>(terms))};
}

ConfusionMatrix confusion(std::span<const Prediction> predictions, std::vector<std::string> labels) {
    ConfusionMatrix cm(std::move(labels));
    for (const auto& p : predictions) {
        cm.add(p.actual, decorate::argmax(p.distribution));
    }
    return cm;
}

namespace {

std::size_t predicted_at(const Prediction& p, std::size_t positive, double threshold) {
    if (p.distribution[positive] >= threshold) {
        return positive;
    }
    std::size_t best = positive == 0 ? 1 : 0;
    for (std::size_t c = 0; c < p.distribution.size(); ++c) {
        if (c != positive && p.distribution[c] > p.distribution[best]) {
            best = c;
        }
    }
    return best;
}

void check_positive(std::size_t positive, std::size_t k) {
    if (k < 2 || positive >= k) {
        throw TypeError("positive class index out of range (need at least two classes)");
    }
}

}  // namespace

ConfusionMatrix confusion_at(std::span<const Prediction> predictions, std::vector<std::string> labels,
                             std::size_t positive, double threshold) {
    check_positive(positive, labels.size());
    ConfusionMatrix cm(std::move(labels));
    for (const auto& p : predictions) {
        cm.add(p.actual, predicted_at(p, positive, threshold));
    }
    return cm;
}

std::vector<CurvePoint> threshold_curve(std::span<const Prediction> predictions, std::size_t positive) {
    std::vector<std::size_t> order(predictions.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return predictions[a].distribution.at(positive) > predictions[b].distribution.at(positive);
    });
    const auto total_pos = static_cast<std::size_t>(std::count_if(
        predictions.begin(), predictions.end(), [&](const Prediction& p) { return p.actual == positive; }));
    if (total_pos == 0) {
        throw UndefinedMetricError("threshold curve needs at least one positive instance");
    }
    const auto n = static_cast<double>(predictions.size());
    std::vector<CurvePoint> curve{{0.0, 0.0}};
    curve.reserve(predictions.size() + 1);
    std::size_t found = 0;
    for (std::size_t s = 0; s < order.size(); ++s) {
        if (predictions[order[s]].actual == positive) {
            ++found;
        }
        curve.push_back({static_cast<double>(s + 1) / n, static_cast<double>(found) / static_cast<double>(total_pos)});
    }
    return curve;
}

double margin(const Prediction& prediction) {
    const auto& d = prediction.distribution;
    double other = -1.0;
    for (std::size_t c = 0; c < d.size(); ++c) {
        if (c != prediction.actual) {
            other = std::max(other, d[c]);
        }
    }
    return d.at(prediction.actual) - std::max(other, 0.0);
}

std::vector<CurvePoint> margin_curve(std::span<const Prediction> predictions) {
    std::vector<double> margins;
    margins.reserve(predictions.size());
    for (const auto& p : predictions) {
        margins.push_back(margin(p));
    }
    std::sort(margins.begin(), margins.end());
    std::vector<CurvePoint> curve;
    const auto n = static_cast<double>(margins.size());
    for (std::size_t i = 0; i < margins.size(); ++i) {
        if (i + 1 < margins.size() && margins[i + 1] == margins[i]) {
            continue;
        }
        curve.push_back({margins[i], static_cast<double>(i + 1) / n});
    }
    return curve;
}

CostMatrix CostMatrix::binary(std::size_t positive, double fn_cost, double fp_cost) {
    check_positive(positive, 2);
    CostMatrix m{{{0.0, 0.0}, {0.0, 0.0}}};
    const std::size_t negative = 1 - positive;
    m.cost[positive][negative] = fn_cost;
    m.cost[negative][positive] = fp_cost;
    return m;
}

CostMatrix CostMatrix::uniform(std::size_t k, double off) {
    CostMatrix m{std::vector<std::vector<double>>(k, std::vector<double>(k, off))};
    for (std::size_t c = 0; c < k; ++c) {
        m.cost[c][c] = 0.0;
    }
    return m;
}

void CostMatrix::validate(std::size_t k) const {
    if (cost.size() != k) {
        throw TypeError(fmt::format("cost matrix must be {}x{}", k, k));
    }
    for (const auto& row : cost) {
        if (row.size() != k) {
            throw TypeError(fmt::format("cost matrix must be {}x{}", k, k));
        }
        for (double c : row) {
            if (!std::isfinite(c)) {
                throw TypeError("cost matrix entries must be finite");
            }
        }
    }
}

double total_cost(const ConfusionMatrix& cm, const CostMatrix& cost) {
    cost.validate(cm.size());
    double sum = 0.0;
    for (std::size_t a = 0; a < cm.size(); ++a) {
        for (std::size_t p = 0; p < cm.size(); ++p) {
            sum += static_cast<double>(cm.at(a, p)) * cost.cost[a][p];
        }
    }
    return sum;
}

CostBenefit cost_benefit(std::span<const Prediction> predictions, std::vector<std::string> labels,
                         std::size_t positive, const CostMatrix& cost) {
    check_positive(positive, labels.size());
    cost.validate(labels.size());
    std::set<double> thresholds{0.0, 1.0};
    for (const auto& p : predictions) {
        thresholds.insert(p.distribution.at(positive));
    }
    std::optional<CostBenefit> best;
    for (double t : thresholds) {
        ConfusionMatrix cm = confusion_at(predictions, labels, positive, t);
        const double c = total_cost(cm, cost);
        if (!best || c < best->total_cost) {
            const double acc = cm.total() > 0 ? accuracy(cm) : 0.0;
            best = CostBenefit{t, std::move(cm), c, acc};
        }
    }
    return *best;
}

EvalReport make_report(std::span<const Prediction> predictions, std::vector<std::string> labels,
                       std::size_t positive) {
    check_positive(positive, labels.size());
    EvalReport r;
    r.n = predictions.size();
    r.labels = labels;
    r.positive = positive;
    r.confusion = confusion(predictions, std::move(labels));
    r.accuracy = accuracy(r.confusion);
    try {
        r.kappa = kappa(r.confusion);
    } catch (const UndefinedMetricError&) {
        r.kappa.reset();
    }
    const auto errors = prob_errors(predictions);
    r.mae = errors.mae;
    r.rmse = errors.rmse;
    r.per_class = class_metrics(r.confusion);
    if (r.confusion.row_sum(positive) > 0) {
        r.threshold_curve = threshold_curve(predictions, positive);
    }
    r.margin_curve = margin_curve(predictions);
    return r;
}

std::size_t class_index_of(const arff::Dataset& dataset, std::string_view label) {
    const auto& cls = dataset.class_attribute();
    if (const auto i = cls.label_index(label)) {
        return *i;
    }
    throw NotFoundError(fmt::format("class '{}' is not a label of attribute '{}'", label, cls.name));
}

std::vector<std::size_t> stratified_folds(const arff::Dataset& dataset, std::size_t k, std::uint64_t seed) {
    if (k < 2) {
        throw StratificationError(fmt::format("cross-validation needs k >= 2 folds (got {})", k));
    }
    const std::size_t n_classes = dataset.num_classes();
    std::vector<std::vector<std::size_t>> by_class(n_classes);
    for (std::size_t r = 0; r < dataset.size(); ++r) {
        if (const auto c = dataset.class_of(r)) {
            by_class[*c].push_back(r);
        }
    }
    for (std::size_t c = 0; c < n_classes; ++c) {
        if (!by_class[c].empty() && by_class[c].size() < k) {
            throw StratificationError(fmt::format(
                "class '{}' has only {} instances, fewer than k = {} folds; lower k to at most {}",
                dataset.class_attribute().labels[c], by_class[c].size(), k, by_class[c].size()));
        }
    }
    Rng rng(seed);
    std::vector<std::size_t> fold_of(dataset.size(), kNoFold);
    std::size_t next = 0;
    for (auto& rows : by_class) {
        rng.shuffle(rows);
        for (std::size_t r : rows) {
            fold_of[r] = next % k;
            ++next;
        }
    }
    return fold_of;
}

CvResult cross_validate(const arff::Dataset& dataset, const decorate::DecorateParams& params, std::size_t k,
                        std::uint64_t seed, std::string_view positive, std::size_t jobs) {
    params.validate();
    const std::size_t pos = class_index_of(dataset, positive);
    CvResult result;
    result.fold_of = stratified_folds(dataset, k, seed);

    std::vector<std::vector<std::size_t>> train(k), test(k);
    for (std::size_t r = 0; r < dataset.size(); ++r) {
        const std::size_t f = result.fold_of[r];
        if (f == kNoFold) {
            continue;
        }
        test[f].push_back(r);
        for (std::size_t g = 0; g < k; ++g) {
            if (g != f) {
                train[g].push_back(r);
            }
        }
    }

    std::vector<std::vector<Prediction>> fold_predictions(k);
    const auto run_fold = [&](std::size_t f) {
        decorate::DecorateParams fold_params = params;
        fold_params.seed = Rng::derive(params.seed, f);
        const auto model = decorate::train_decorate(dataset.subset(train[f]), fold_params);
        for (std::size_t r : test[f]) {
            fold_predictions[f].push_back({model.predict(dataset.row(r)), *dataset.class_of(r)});
        }
    };

    const std::size_t workers = std::clamp<std::size_t>(jobs, 1, k);
    if (workers == 1) {
        for (std::size_t f = 0; f < k; ++f) {
            run_fold(f);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(k);
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t f = next++; f < k; f = next++) {
                    try {
                        run_fold(f);
                    } catch (...) {
                        errors[f] = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : pool) {
            t.join();
        }
        for (const auto& e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }

    // pool back into dataset row order
    std::vector<std::size_t> cursor(k, 0);
    for (std::size_t r = 0; r < dataset.size(); ++r) {
        const std::size_t f = result.fold_of[r];
        if (f == kNoFold) {
            continue;
        }
        result.predictions.push_back(fold_predictions[f][cursor[f]++]);
        result.rows.push_back(r);
    }
    result.report = make_report(result.predictions, dataset.class_attribute().labels, pos);
    return result;
}

std::vector<AblationRow> ablation(const arff::Dataset& dataset, std::span<const features::FeatureGroup> groups,
                                  const decorate::DecorateParams& params, std::size_t k, std::uint64_t seed,
                                  std::string_view positive, std::size_t jobs) {
    std::vector<AblationRow> rows;
    for (const auto& group : groups) {
        const auto projected = features::project_dataset(dataset, group);
        const auto cv = cross_validate(projected, params, k, seed, positive, jobs);
        const std::size_t pos = cv.report.positive;
        AblationRow row;
        row.group = group.kind;
        row.accuracy = cv.report.accuracy;
        row.recall = cv.report.per_class[pos].recall;
        row.fp_rate = cv.report.per_class[pos].fp_rate;
        row.kappa = cv.report.kappa;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace honeytrap::eval
