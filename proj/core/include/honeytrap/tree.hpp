#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "honeytrap/arff.hpp"

namespace honeytrap::decorate {

struct TreeParams {
    /// Minimum training weight on each side of a split.
    double min_leaf = 2.0;

    bool operator==(const TreeParams&) const = default;
};

/// Unpruned gain-ratio decision tree with Laplace-smoothed leaves.
///
/// Numeric attributes split on the midpoint between adjacent observed
/// values (value <= threshold goes left); nominal attributes split one
/// branch per label. Training instances missing the split value follow
/// every branch with a weight proportional to the branch's known support.
class DecisionTree {
public:
    enum class NodeKind { Leaf, NumericSplit, NominalSplit };

    struct Node {
        NodeKind kind = NodeKind::Leaf;
        std::size_t attribute = 0;
        double threshold = 0.0;
        std::vector<std::size_t> children;    // node indices
        std::vector<double> child_support;    // known training weight per child
        std::vector<double> distribution;     // leaves only
        double support = 0.0;                 // training weight reaching the node

        bool operator==(const Node&) const = default;
    };

    /// Trains on every row with a known class. TrainingError if there is
    /// none or no class is designated.
    [[nodiscard]] static DecisionTree train(const arff::Dataset& dataset, const TreeParams& params = {});

    /// Class distribution for `instance` (a full row; the class cell is
    /// ignored). TypeError when the row does not match the schema.
    [[nodiscard]] std::vector<double> predict(std::span<const double> instance) const;

    [[nodiscard]] const std::vector<Node>& nodes() const noexcept { return nodes_; }
    [[nodiscard]] const Node& root() const { return nodes_.front(); }
    [[nodiscard]] std::size_t num_attributes() const noexcept { return num_attributes_; }
    [[nodiscard]] std::size_t num_classes() const noexcept { return num_classes_; }
    [[nodiscard]] std::size_t class_index() const noexcept { return class_index_; }
    [[nodiscard]] std::size_t depth() const;
    [[nodiscard]] std::size_t leaf_count() const;

    /// Exact text form (shortest round-trip numbers), one node per line.
    void write(std::ostream& out) const;
    [[nodiscard]] static DecisionTree read(std::istream& in);

    bool operator==(const DecisionTree&) const = default;

private:
    friend class TreeBuilder;

    std::vector<Node> nodes_;
    std::size_t num_attributes_ = 0;
    std::size_t num_classes_ = 0;
    std::size_t class_index_ = 0;
    std::vector<std::size_t> cardinality_;  // labels per attribute, 0 for numeric
};

}  // namespace honeytrap::decorate
