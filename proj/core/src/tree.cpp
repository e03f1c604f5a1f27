#include "honeytrap/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "honeytrap/errors.hpp"
#include "text.hpp"

namespace honeytrap::decorate {

namespace {

constexpr double kGainEpsilon = 1e-12;

struct Weighted {
    std::size_t row;
    double weight;
};

double entropy(std::span<const double> counts, double total) {
    if (total <= 0.0) {
        return 0.0;
    }
    double h = 0.0;
    for (double c : counts) {
        if (c > 0.0) {
            const double p = c / total;
            h -= p * std::log2(p);
        }
    }
    return h;
}

struct Candidate {
    bool valid = false;
    std::size_t attribute = 0;
    bool nominal = false;
    double threshold = 0.0;
    double gain = 0.0;
    double split_info = 0.0;

    [[nodiscard]] double ratio() const { return split_info > 0.0 ? gain / split_info : 0.0; }
};

/// Prefers positive gain ratio; among zero-gain candidates the most balanced
/// split wins so consistent data can still be separated. Earlier attributes
/// win ties.
bool better(const Candidate& a, const Candidate& b) {
    if (!b.valid) {
        return a.valid;
    }
    if (!a.valid) {
        return false;
    }
    const bool a_pos = a.gain > kGainEpsilon;
    const bool b_pos = b.gain > kGainEpsilon;
    if (a_pos != b_pos) {
        return a_pos;
    }
    if (a_pos) {
        if (a.ratio() != b.ratio()) {
            return a.ratio() > b.ratio();
        }
        if (a.gain != b.gain) {
            return a.gain > b.gain;
        }
    } else if (a.split_info != b.split_info) {
        return a.split_info > b.split_info;
    }
    return a.attribute < b.attribute;
}

}  // namespace

class TreeBuilder {
public:
    TreeBuilder(const arff::Dataset& data, const TreeParams& params, DecisionTree& tree)
        : data_(data), params_(params), tree_(tree), k_(data.num_classes()), cls_(*data.class_index()) {}

    std::size_t build(const std::vector<Weighted>& items) {
        std::vector<double> counts(k_, 0.0);
        double total = 0.0;
        for (const auto& w : items) {
            counts[class_of(w.row)] += w.weight;
            total += w.weight;
        }
        const std::size_t index = tree_.nodes_.size();
        tree_.nodes_.emplace_back();
        tree_.nodes_[index].support = total;

        const auto nonzero = std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0.0; });
        Candidate best;
        if (nonzero > 1 && total >= 2.0 * params_.min_leaf) {
            std::vector<Candidate> candidates;
            double gain_sum = 0.0;
            for (std::size_t a = 0; a < data_.num_attributes(); ++a) {
                if (a == cls_) {
                    continue;
                }
                Candidate c = data_.attribute(a).is_nominal() ? nominal_candidate(items, a, total)
                                                              : numeric_candidate(items, a, total);
                if (c.valid) {
                    gain_sum += c.gain;
                    candidates.push_back(c);
                }
            }
            // gain ratio only among attributes with at least average gain
            const double floor =
                candidates.empty() ? 0.0 : gain_sum / static_cast<double>(candidates.size()) - kGainEpsilon;
            for (const auto& c : candidates) {
                if (c.gain >= floor && better(c, best)) {
                    best = c;
                }
            }
        }
        if (!best.valid) {
            make_leaf(index, counts, total);
            return index;
        }
        split(index, items, best, counts, total);
        return index;
    }

private:
    std::size_t class_of(std::size_t row) const { return static_cast<std::size_t>(data_.row(row)[cls_]); }
    double value(std::size_t row, std::size_t a) const { return data_.row(row)[a]; }

    void make_leaf(std::size_t index, const std::vector<double>& counts, double total) {
        auto& node = tree_.nodes_[index];
        node.kind = DecisionTree::NodeKind::Leaf;
        node.distribution.resize(k_);
        for (std::size_t c = 0; c < k_; ++c) {
            node.distribution[c] = (counts[c] + 1.0) / (total + static_cast<double>(k_));
        }
    }

    Candidate numeric_candidate(const std::vector<Weighted>& items, std::size_t a, double total) const {
        std::vector<Weighted> known;
        known.reserve(items.size());
        for (const auto& w : items) {
            if (!arff::is_missing(value(w.row, a))) {
                known.push_back(w);
            }
        }
        Candidate best;
        double known_total = 0.0;
        std::vector<double> right(k_, 0.0);
        for (const auto& w : known) {
            known_total += w.weight;
            right[class_of(w.row)] += w.weight;
        }
        if (known_total < 2.0 * params_.min_leaf) {
            return best;
        }
        std::stable_sort(known.begin(), known.end(),
                         [&](const Weighted& x, const Weighted& y) { return value(x.row, a) < value(y.row, a); });
        const double known_entropy = entropy(right, known_total);
        const double frac_known = known_total / total;
        const double missing_w = total - known_total;

        std::vector<double> left(k_, 0.0);
        double left_w = 0.0;
        for (std::size_t i = 0; i + 1 < known.size(); ++i) {
            const std::size_t c = class_of(known[i].row);
            left[c] += known[i].weight;
            right[c] -= known[i].weight;
            left_w += known[i].weight;
            const double v = value(known[i].row, a);
            const double next = value(known[i + 1].row, a);
            if (v == next) {
                continue;
            }
            const double right_w = known_total - left_w;
            if (left_w < params_.min_leaf || right_w < params_.min_leaf) {
                continue;
            }
            const double child_entropy =
                (left_w * entropy(left, left_w) + right_w * entropy(right, right_w)) / known_total;
            const double gain = frac_known * (known_entropy - child_entropy);
            const double info = entropy(std::vector<double>{left_w, right_w, missing_w}, total);
            const bool improves = !best.valid || gain > best.gain + kGainEpsilon ||
                                  (gain <= kGainEpsilon && best.gain <= kGainEpsilon && info > best.split_info);
            if (improves) {
                best.valid = true;
                best.attribute = a;
                best.nominal = false;
                best.threshold = std::midpoint(v, next);
                best.gain = gain;
                best.split_info = info;
            }
        }
        return best;
    }

    Candidate nominal_candidate(const std::vector<Weighted>& items, std::size_t a, double total) const {
        const std::size_t m = data_.attribute(a).labels.size();
        std::vector<std::vector<double>> branch(m, std::vector<double>(k_, 0.0));
        std::vector<double> branch_w(m, 0.0);
        std::vector<double> known_counts(k_, 0.0);
        double known_total = 0.0;
        for (const auto& w : items) {
            const double v = value(w.row, a);
            if (arff::is_missing(v)) {
                continue;
            }
            const auto b = static_cast<std::size_t>(v);
            branch[b][class_of(w.row)] += w.weight;
            branch_w[b] += w.weight;
            known_counts[class_of(w.row)] += w.weight;
            known_total += w.weight;
        }
        Candidate best;
        const auto big = std::count_if(branch_w.begin(), branch_w.end(),
                                       [&](double w) { return w >= params_.min_leaf && w > 0.0; });
        if (big < 2) {
            return best;
        }
        double child_entropy = 0.0;
        for (std::size_t b = 0; b < m; ++b) {
            child_entropy += branch_w[b] * entropy(branch[b], branch_w[b]);
        }
        child_entropy /= known_total;
        std::vector<double> parts = branch_w;
        parts.push_back(total - known_total);
        best.valid = true;
        best.attribute = a;
        best.nominal = true;
        best.gain = (known_total / total) * (entropy(known_counts, known_total) - child_entropy);
        best.split_info = entropy(parts, total);
        return best;
    }

    void split(std::size_t index, const std::vector<Weighted>& items, const Candidate& best,
               const std::vector<double>& counts, double total) {
        const std::size_t a = best.attribute;
        const std::size_t n_children = best.nominal ? data_.attribute(a).labels.size() : 2;
        std::vector<double> support(n_children, 0.0);
        std::vector<std::vector<Weighted>> parts(n_children);
        std::vector<Weighted> missing;
        for (const auto& w : items) {
            const double v = value(w.row, a);
            if (arff::is_missing(v)) {
                missing.push_back(w);
                continue;
            }
            const std::size_t b = best.nominal ? static_cast<std::size_t>(v) : (v <= best.threshold ? 0 : 1);
            parts[b].push_back(w);
            support[b] += w.weight;
        }
        double known_total = 0.0;
        for (double s : support) {
            known_total += s;
        }
        for (std::size_t b = 0; b < n_children; ++b) {
            if (support[b] <= 0.0) {
                continue;
            }
            for (const auto& w : missing) {
                parts[b].push_back({w.row, w.weight * support[b] / known_total});
            }
        }

        {
            auto& node = tree_.nodes_[index];
            node.kind = best.nominal ? DecisionTree::NodeKind::NominalSplit : DecisionTree::NodeKind::NumericSplit;
            node.attribute = a;
            node.threshold = best.nominal ? 0.0 : best.threshold;
            node.child_support = support;
        }
        std::vector<std::size_t> children(n_children);
        for (std::size_t b = 0; b < n_children; ++b) {
            if (parts[b].empty()) {
                // unseen label: fall back to the parent's distribution
                const std::size_t leaf = tree_.nodes_.size();
                tree_.nodes_.emplace_back();
                make_leaf(leaf, counts, total);
                tree_.nodes_[leaf].support = 0.0;
                children[b] = leaf;
            } else {
                children[b] = build(parts[b]);
            }
        }
        tree_.nodes_[index].children = std::move(children);
    }

    const arff::Dataset& data_;
    const TreeParams& params_;
    DecisionTree& tree_;
    std::size_t k_;
    std::size_t cls_;
};

DecisionTree DecisionTree::train(const arff::Dataset& dataset, const TreeParams& params) {
    if (!dataset.has_class()) {
        throw TrainingError("cannot train a tree: no class attribute designated");
    }
    if (!(params.min_leaf > 0.0)) {
        throw ConfigError("min_leaf must be > 0");
    }
    std::vector<Weighted> items;
    for (std::size_t r = 0; r < dataset.size(); ++r) {
        if (dataset.class_of(r)) {
            items.push_back({r, 1.0});
        }
    }
    if (items.empty()) {
        throw TrainingError(dataset.empty() ? "cannot train a tree on an empty dataset"
                                            : "cannot train a tree: every class value is missing");
    }
    DecisionTree tree;
    tree.num_attributes_ = dataset.num_attributes();
    tree.num_classes_ = dataset.num_classes();
    tree.class_index_ = *dataset.class_index();
    for (const auto& a : dataset.attributes()) {
        tree.cardinality_.push_back(a.is_nominal() ? a.labels.size() : 0);
    }
    TreeBuilder builder(dataset, params, tree);
    builder.build(items);
    return tree;
}

std::vector<double> DecisionTree::predict(std::span<const double> instance) const {
    if (instance.size() != num_attributes_) {
        throw TypeError(fmt::format("instance has {} values, tree expects {}", instance.size(), num_attributes_));
    }
    // iterative walk with a stack of (node, weight)
    std::vector<double> out(num_classes_, 0.0);
    std::vector<std::pair<std::size_t, double>> stack{{0, 1.0}};
    while (!stack.empty()) {
        const auto [index, weight] = stack.back();
        stack.pop_back();
        const Node& node = nodes_[index];
        if (node.kind == NodeKind::Leaf) {
            for (std::size_t c = 0; c < num_classes_; ++c) {
                out[c] += weight * node.distribution[c];
            }
            continue;
        }
        const double v = instance[node.attribute];
        if (arff::is_missing(v)) {
            double known = 0.0;
            for (double s : node.child_support) {
                known += s;
            }
            for (std::size_t b = 0; b < node.children.size(); ++b) {
                if (node.child_support[b] > 0.0) {
                    stack.emplace_back(node.children[b], weight * node.child_support[b] / known);
                }
            }
            continue;
        }
        if (node.kind == NodeKind::NumericSplit) {
            stack.emplace_back(node.children[v <= node.threshold ? 0 : 1], weight);
        } else {
            const std::size_t card = cardinality_[node.attribute];
            if (v < 0 || v != std::floor(v) || v >= static_cast<double>(card)) {
                throw TypeError(fmt::format("attribute {}: {} is not a valid label index", node.attribute, v));
            }
            stack.emplace_back(node.children[static_cast<std::size_t>(v)], weight);
        }
    }
    return out;
}

std::size_t DecisionTree::depth() const {
    std::size_t deepest = 0;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
    while (!stack.empty()) {
        const auto [index, d] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, d);
        for (std::size_t child : nodes_[index].children) {
            stack.emplace_back(child, d + 1);
        }
    }
    return deepest;
}

std::size_t DecisionTree::leaf_count() const {
    return static_cast<std::size_t>(
        std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.kind == NodeKind::Leaf; }));
}

void DecisionTree::write(std::ostream& out) const {
    out << "tree " << num_attributes_ << ' ' << class_index_ << ' ' << num_classes_ << ' ' << nodes_.size() << '\n';
    out << "cardinality";
    for (std::size_t c : cardinality_) {
        out << ' ' << c;
    }
    out << '\n';
    for (const Node& n : nodes_) {
        switch (n.kind) {
            case NodeKind::Leaf:
                out << "L " << text::format_double(n.support);
                for (double p : n.distribution) {
                    out << ' ' << text::format_double(p);
                }
                break;
            case NodeKind::NumericSplit:
            case NodeKind::NominalSplit:
                out << (n.kind == NodeKind::NumericSplit ? "N " : "C ") << text::format_double(n.support) << ' '
                    << n.attribute << ' ' << text::format_double(n.threshold) << ' ' << n.children.size();
                for (std::size_t b = 0; b < n.children.size(); ++b) {
                    out << ' ' << n.children[b] << ' ' << text::format_double(n.child_support[b]);
                }
                break;
        }
        out << '\n';
    }
}

namespace {

template <typename T>
T take(std::istringstream& in, const char* what) {
    std::string token;
    if (!(in >> token)) {
        throw ParseError(fmt::format("tree: missing {}", what), 0);
    }
    if constexpr (std::is_same_v<T, std::string>) {
        return token;
    } else if constexpr (std::is_same_v<T, double>) {
        const auto v = text::parse_double(token);
        if (!v) {
            throw ParseError(fmt::format("tree: bad {} '{}'", what, token), 0);
        }
        return *v;
    } else {
        const auto v = text::parse_int<T>(token);
        if (!v) {
            throw ParseError(fmt::format("tree: bad {} '{}'", what, token), 0);
        }
        return *v;
    }
}

std::istringstream next_line(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError("tree: unexpected end of input", 0);
    }
    return std::istringstream(line);
}

}  // namespace

DecisionTree DecisionTree::read(std::istream& in) {
    DecisionTree tree;
    auto header = next_line(in);
    if (take<std::string>(header, "tree marker") != "tree") {
        throw ParseError("tree: expected 'tree' header", 0);
    }
    tree.num_attributes_ = take<std::size_t>(header, "attribute count");
    tree.class_index_ = take<std::size_t>(header, "class index");
    tree.num_classes_ = take<std::size_t>(header, "class count");
    const auto n_nodes = take<std::size_t>(header, "node count");
    if (n_nodes == 0 || tree.class_index_ >= tree.num_attributes_) {
        throw ParseError("tree: inconsistent header", 0);
    }
    auto card = next_line(in);
    if (take<std::string>(card, "cardinality marker") != "cardinality") {
        throw ParseError("tree: expected 'cardinality' line", 0);
    }
    for (std::size_t a = 0; a < tree.num_attributes_; ++a) {
        tree.cardinality_.push_back(take<std::size_t>(card, "cardinality"));
    }
    tree.nodes_.resize(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) {
        auto& node = tree.nodes_[i];
        auto line = next_line(in);
        const auto kind = take<std::string>(line, "node kind");
        node.support = take<double>(line, "support");
        if (kind == "L") {
            node.kind = NodeKind::Leaf;
            for (std::size_t c = 0; c < tree.num_classes_; ++c) {
                node.distribution.push_back(take<double>(line, "probability"));
            }
        } else if (kind == "N" || kind == "C") {
            node.kind = kind == "N" ? NodeKind::NumericSplit : NodeKind::NominalSplit;
            node.attribute = take<std::size_t>(line, "attribute");
            node.threshold = take<double>(line, "threshold");
            const auto n_children = take<std::size_t>(line, "child count");
            for (std::size_t b = 0; b < n_children; ++b) {
                const auto child = take<std::size_t>(line, "child index");
                // children always follow their parent, which also rules out cycles
                if (child <= i || child >= n_nodes) {
                    throw ParseError("tree: child index out of range", 0);
                }
                node.children.push_back(child);
                node.child_support.push_back(take<double>(line, "child support"));
            }
            if (node.attribute >= tree.num_attributes_ || node.children.empty()) {
                throw ParseError("tree: malformed split node", 0);
            }
        } else {
            throw ParseError(fmt::format("tree: unknown node kind '{}'", kind), 0);
        }
    }
    return tree;
}

}  // namespace honeytrap::decorate
