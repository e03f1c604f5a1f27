#include <algorithm>
#include <ostream>
#include <string>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "honeytrap/eval.hpp"
#include "text.hpp"

namespace honeytrap::eval {

namespace {

void append_confusion(std::string& out, const ConfusionMatrix& cm) {
    std::size_t width = 6;
    for (std::size_t a = 0; a < cm.size(); ++a) {
        for (std::size_t p = 0; p < cm.size(); ++p) {
            width = std::max(width, fmt::formatted_size("{}", cm.at(a, p)) + 2);
        }
    }
    for (std::size_t p = 0; p < cm.size(); ++p) {
        out += fmt::format("{:>{}}", static_cast<char>('a' + p % 26), width);
    }
    out += "   <-- classified as\n";
    for (std::size_t a = 0; a < cm.size(); ++a) {
        for (std::size_t p = 0; p < cm.size(); ++p) {
            out += fmt::format("{:>{}}", cm.at(a, p), width);
        }
        out += fmt::format(" |   {} = {}\n", static_cast<char>('a' + a % 26), cm.labels()[a]);
    }
}

nlohmann::json confusion_json(const ConfusionMatrix& cm) {
    auto rows = nlohmann::json::array();
    for (std::size_t a = 0; a < cm.size(); ++a) {
        auto row = nlohmann::json::array();
        for (std::size_t p = 0; p < cm.size(); ++p) {
            row.push_back(cm.at(a, p));
        }
        rows.push_back(std::move(row));
    }
    return {{"labels", cm.labels()}, {"counts", std::move(rows)}};
}

nlohmann::json curve_json(std::span<const CurvePoint> curve) {
    auto points = nlohmann::json::array();
    for (const auto& p : curve) {
        points.push_back({p.x, p.y});
    }
    return points;
}

std::string kappa_text(const std::optional<double>& k) {
    return k ? fmt::format("{:.4f}", *k) : std::string("undefined");
}

void write_curve(std::ostream& out, std::string_view header, std::span<const CurvePoint> curve) {
    out << header << '\n';
    for (const auto& p : curve) {
        out << text::format_double(p.x) << ',' << text::format_double(p.y) << '\n';
    }
}

}  // namespace

std::string format_report(const EvalReport& report, std::string_view title) {
    std::string out = fmt::format("=== {} ===\n\n", title);
    const auto correct = report.confusion.diagonal();
    const auto wrong = report.confusion.total() - correct;
    const double n = report.n > 0 ? static_cast<double>(report.n) : 1.0;
    out += fmt::format("{:<36}{:>8}{:>14.4f} %\n", "Correctly Classified Instances", correct,
                       100.0 * static_cast<double>(correct) / n);
    out += fmt::format("{:<36}{:>8}{:>14.4f} %\n", "Incorrectly Classified Instances", wrong,
                       100.0 * static_cast<double>(wrong) / n);
    out += fmt::format("{:<36}{:>22}\n", "Kappa statistic", kappa_text(report.kappa));
    out += fmt::format("{:<36}{:>22.4f}\n", "Mean absolute error", report.mae);
    out += fmt::format("{:<36}{:>22.4f}\n", "Root mean squared error", report.rmse);
    out += fmt::format("{:<36}{:>22}\n\n", "Total Number of Instances", report.n);

    out += "=== Detailed Accuracy By Class ===\n\n";
    out += fmt::format("{:>10}{:>10}{:>11}{:>10}  {}\n", "TP Rate", "FP Rate", "Precision", "Recall", "Class");
    for (std::size_t c = 0; c < report.per_class.size(); ++c) {
        const auto& m = report.per_class[c];
        out += fmt::format("{:>10.3f}{:>10.3f}{:>11.3f}{:>10.3f}  {}\n", m.tp_rate, m.fp_rate, m.precision,
                           m.recall, report.labels[c]);
    }
    out += "\n=== Confusion Matrix ===\n\n";
    append_confusion(out, report.confusion);
    return out;
}

std::string format_cost_benefit(const CostBenefit& result, std::span<const std::string> labels,
                                std::size_t positive) {
    std::string out = "=== Cost/Benefit Analysis ===\n\n";
    out += fmt::format("{:<28}{}\n", "Positive class", labels[positive]);
    out += fmt::format("{:<28}{:.6f}\n", "Threshold", result.threshold);
    out += fmt::format("{:<28}{:g}\n", "Total cost", result.total_cost);
    out += fmt::format("{:<28}{:.4f} %\n\n", "Accuracy at threshold", 100.0 * result.accuracy);
    append_confusion(out, result.confusion);
    return out;
}

std::string report_json(const EvalReport& report, const CostBenefit* cost_benefit) {
    nlohmann::json doc;
    doc["n"] = report.n;
    doc["labels"] = report.labels;
    doc["positive"] = report.labels.at(report.positive);
    doc["accuracy"] = report.accuracy;
    doc["kappa"] = report.kappa ? nlohmann::json(*report.kappa) : nlohmann::json(nullptr);
    doc["mae"] = report.mae;
    doc["rmse"] = report.rmse;
    auto per_class = nlohmann::json::object();
    for (std::size_t c = 0; c < report.per_class.size(); ++c) {
        const auto& m = report.per_class[c];
        per_class[report.labels[c]] = {
            {"tp_rate", m.tp_rate}, {"fp_rate", m.fp_rate}, {"precision", m.precision}, {"recall", m.recall}};
    }
    doc["per_class"] = std::move(per_class);
    doc["confusion"] = confusion_json(report.confusion);
    doc["threshold_curve"] = curve_json(report.threshold_curve);
    doc["margin_curve"] = curve_json(report.margin_curve);
    if (cost_benefit != nullptr) {
        doc["cost_benefit"] = {{"threshold", cost_benefit->threshold},
                               {"total_cost", cost_benefit->total_cost},
                               {"accuracy", cost_benefit->accuracy},
                               {"confusion", confusion_json(cost_benefit->confusion)}};
    }
    return doc.dump(2) + "\n";
}

void write_threshold_curve(std::ostream& out, std::span<const CurvePoint> curve) {
    write_curve(out, "sample_size,recall", curve);
}

void write_margin_curve(std::ostream& out, std::span<const CurvePoint> curve) {
    write_curve(out, "margin,cumulative_fraction", curve);
}

std::string format_ablation(std::span<const AblationRow> rows) {
    std::string out = fmt::format("{:<14}{:>10}{:>10}{:>10}{:>10}\n", "group", "accuracy", "recall", "fp_rate",
                                  "kappa");
    for (const auto& r : rows) {
        out += fmt::format("{:<14}{:>10.4f}{:>10.4f}{:>10.4f}{:>10}\n", features::group_name(r.group), r.accuracy,
                           r.recall, r.fp_rate, kappa_text(r.kappa));
    }
    return out;
}

void write_ablation_csv(std::ostream& out, std::span<const AblationRow> rows) {
    out << "group,accuracy,recall,fp_rate,kappa\n";
    for (const auto& r : rows) {
        out << features::group_name(r.group) << ',' << text::format_double(r.accuracy) << ','
            << text::format_double(r.recall) << ',' << text::format_double(r.fp_rate) << ','
            << (r.kappa ? text::format_double(*r.kappa) : std::string()) << '\n';
    }
}

}  // namespace honeytrap::eval
