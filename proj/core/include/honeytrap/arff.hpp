#pragma once

// Attribute-Relation File Format: numeric and nominal attributes, `?` for
// missing values, `%` comment lines, quoted names and labels. String, date
// and relational attributes and sparse rows are rejected.

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace honeytrap::arff {

enum class AttributeKind { Numeric, Nominal };

struct Attribute {
    std::string name;
    AttributeKind kind = AttributeKind::Numeric;
    std::vector<std::string> labels;  // nominal only

    [[nodiscard]] static Attribute numeric(std::string name);
    [[nodiscard]] static Attribute nominal(std::string name, std::vector<std::string> labels);

    [[nodiscard]] bool is_nominal() const noexcept { return kind == AttributeKind::Nominal; }
    [[nodiscard]] std::optional<std::size_t> label_index(std::string_view label) const;

    bool operator==(const Attribute&) const = default;
};

/// Row cell: a number, a nominal label index, or kMissing.
using Value = double;
inline constexpr Value kMissing = std::numeric_limits<double>::quiet_NaN();
[[nodiscard]] inline bool is_missing(Value v) noexcept { return v != v; }

using Row = std::vector<Value>;

class Dataset {
public:
    Dataset() = default;
    /// Validates unique attribute names and non-empty, unique nominal labels.
    Dataset(std::string relation, std::vector<Attribute> attributes);

    [[nodiscard]] const std::string& relation() const noexcept { return relation_; }
    [[nodiscard]] const std::vector<Attribute>& attributes() const noexcept { return attributes_; }
    [[nodiscard]] const Attribute& attribute(std::size_t i) const { return attributes_.at(i); }
    [[nodiscard]] std::size_t num_attributes() const noexcept { return attributes_.size(); }
    [[nodiscard]] const std::vector<Row>& rows() const noexcept { return rows_; }
    [[nodiscard]] const Row& row(std::size_t i) const { return rows_.at(i); }
    [[nodiscard]] std::size_t size() const noexcept { return rows_.size(); }
    [[nodiscard]] bool empty() const noexcept { return rows_.empty(); }

    /// Throws TypeError on wrong arity, out-of-range nominal index or a
    /// non-finite number.
    void add_row(Row row);

    [[nodiscard]] std::optional<std::size_t> find_attribute(std::string_view name) const;
    /// NotFoundError when absent.
    [[nodiscard]] std::size_t attribute_index(std::string_view name) const;

    [[nodiscard]] std::optional<std::size_t> class_index() const noexcept { return class_index_; }
    [[nodiscard]] bool has_class() const noexcept { return class_index_.has_value(); }
    /// TypeError when no class is designated.
    [[nodiscard]] const Attribute& class_attribute() const;
    [[nodiscard]] std::size_t num_classes() const { return class_attribute().labels.size(); }
    /// Class label index of a row, nullopt when missing.
    [[nodiscard]] std::optional<std::size_t> class_of(std::size_t row) const;

    /// Marks the named nominal attribute as the class. NotFoundError for an
    /// unknown name, TypeError for a numeric one.
    void designate_class(std::string_view name);

    /// Same schema, selected rows (in the given order).
    [[nodiscard]] Dataset subset(std::span<const std::size_t> indices) const;
    /// Same schema, no rows.
    [[nodiscard]] Dataset empty_copy() const;

    /// Relation, attributes and rows (missing equals missing); ignores the
    /// class designation, which ARFF text does not carry.
    [[nodiscard]] bool same_content(const Dataset& other) const;
    /// same_content plus identical class designation.
    bool operator==(const Dataset& other) const;

private:
    std::string relation_;
    std::vector<Attribute> attributes_;
    std::vector<Row> rows_;
    std::optional<std::size_t> class_index_;
};

/// Parses ARFF text. ParseError (with line number) on malformed input,
/// UnsupportedFeatureError on string/date/relational attributes or sparse rows.
[[nodiscard]] Dataset parse(std::istream& in);
[[nodiscard]] Dataset parse(std::string_view text);

/// Canonical text: LF endings, lowercase keywords, no spaces after commas,
/// shortest round-trip numbers, `?` for missing.
[[nodiscard]] std::string serialize(const Dataset& dataset);
void write(std::ostream& out, const Dataset& dataset);

/// Copy of `dataset` with the class designated (see Dataset::designate_class).
[[nodiscard]] Dataset designate_class(Dataset dataset, std::string_view name);

}  // namespace honeytrap::arff
