#include "honeytrap/arff.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "honeytrap/errors.hpp"
#include "text.hpp"

namespace honeytrap::arff {

Attribute Attribute::numeric(std::string name) {
    return Attribute{std::move(name), AttributeKind::Numeric, {}};
}

Attribute Attribute::nominal(std::string name, std::vector<std::string> labels) {
    return Attribute{std::move(name), AttributeKind::Nominal, std::move(labels)};
}

std::optional<std::size_t> Attribute::label_index(std::string_view label) const {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == label) {
            return i;
        }
    }
    return std::nullopt;
}

Dataset::Dataset(std::string relation, std::vector<Attribute> attributes)
    : relation_(std::move(relation)), attributes_(std::move(attributes)) {
    std::set<std::string_view> names;
    for (const auto& a : attributes_) {
        if (!names.insert(a.name).second) {
            throw TypeError(fmt::format("duplicate attribute name '{}'", a.name));
        }
        if (a.is_nominal()) {
            if (a.labels.empty()) {
                throw TypeError(fmt::format("nominal attribute '{}' has no labels", a.name));
            }
            std::set<std::string_view> seen;
            for (const auto& l : a.labels) {
                if (!seen.insert(l).second) {
                    throw TypeError(fmt::format("nominal attribute '{}' repeats label '{}'", a.name, l));
                }
            }
        } else if (!a.labels.empty()) {
            throw TypeError(fmt::format("numeric attribute '{}' cannot carry labels", a.name));
        }
    }
}

void Dataset::add_row(Row row) {
    if (row.size() != attributes_.size()) {
        throw TypeError(fmt::format("row has {} values, schema has {} attributes", row.size(), attributes_.size()));
    }
    for (std::size_t i = 0; i < row.size(); ++i) {
        const Value v = row[i];
        if (is_missing(v)) {
            continue;
        }
        if (!std::isfinite(v)) {
            throw TypeError(fmt::format("attribute '{}': non-finite value", attributes_[i].name));
        }
        if (attributes_[i].is_nominal()) {
            if (v < 0 || v != std::floor(v) || v >= static_cast<double>(attributes_[i].labels.size())) {
                throw TypeError(fmt::format("attribute '{}': {} is not a valid label index", attributes_[i].name, v));
            }
        }
    }
    rows_.push_back(std::move(row));
}

std::optional<std::size_t> Dataset::find_attribute(std::string_view name) const {
    for (std::size_t i = 0; i < attributes_.size(); ++i) {
        if (attributes_[i].name == name) {
            return i;
        }
    }
    return std::nullopt;
}

std::size_t Dataset::attribute_index(std::string_view name) const {
    if (const auto i = find_attribute(name)) {
        return *i;
    }
    throw NotFoundError(fmt::format("no attribute named '{}'", name));
}

const Attribute& Dataset::class_attribute() const {
    if (!class_index_) {
        throw TypeError("dataset has no designated class attribute");
    }
    return attributes_[*class_index_];
}

std::optional<std::size_t> Dataset::class_of(std::size_t row) const {
    const Value v = rows_.at(row).at(class_index_.value());
    if (is_missing(v)) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(v);
}

void Dataset::designate_class(std::string_view name) {
    const std::size_t i = attribute_index(name);
    if (!attributes_[i].is_nominal()) {
        throw TypeError(fmt::format("class attribute '{}' must be nominal", name));
    }
    class_index_ = i;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    Dataset out = empty_copy();
    out.rows_.reserve(indices.size());
    for (std::size_t i : indices) {
        out.rows_.push_back(rows_.at(i));
    }
    return out;
}

Dataset Dataset::empty_copy() const {
    Dataset out;
    out.relation_ = relation_;
    out.attributes_ = attributes_;
    out.class_index_ = class_index_;
    return out;
}

bool Dataset::same_content(const Dataset& other) const {
    if (relation_ != other.relation_ || attributes_ != other.attributes_ || rows_.size() != other.rows_.size()) {
        return false;
    }
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        const Row& a = rows_[r];
        const Row& b = other.rows_[r];
        if (a.size() != b.size()) {
            return false;
        }
        for (std::size_t c = 0; c < a.size(); ++c) {
            if (is_missing(a[c]) != is_missing(b[c]) || (!is_missing(a[c]) && a[c] != b[c])) {
                return false;
            }
        }
    }
    return true;
}

bool Dataset::operator==(const Dataset& other) const {
    return class_index_ == other.class_index_ && same_content(other);
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

void skip_space(std::string_view& s) {
    while (!s.empty() && is_space(s.front())) {
        s.remove_prefix(1);
    }
}

/// Reads a quoted string starting at s.front() (a quote char); consumes it.
std::string read_quoted(std::string_view& s, std::size_t line) {
    const char quote = s.front();
    s.remove_prefix(1);
    std::string out;
    while (!s.empty()) {
        const char c = s.front();
        s.remove_prefix(1);
        if (c == quote) {
            return out;
        }
        if (c == '\\') {
            if (s.empty()) {
                break;
            }
            const char e = s.front();
            s.remove_prefix(1);
            switch (e) {
                case 'n':
                    out += '\n';
                    break;
                case 't':
                    out += '\t';
                    break;
                case 'r':
                    out += '\r';
                    break;
                default:
                    out += e;
            }
            continue;
        }
        out += c;
    }
    throw ParseError("unterminated quoted string", line);
}

/// Name token: quoted, or bare up to whitespace or '{'.
std::string read_name(std::string_view& s, std::size_t line) {
    skip_space(s);
    if (s.empty()) {
        throw ParseError("expected a name", line);
    }
    if (s.front() == '\'' || s.front() == '"') {
        return read_quoted(s, line);
    }
    std::size_t n = 0;
    while (n < s.size() && !is_space(s[n]) && s[n] != '{') {
        ++n;
    }
    std::string out(s.substr(0, n));
    s.remove_prefix(n);
    return out;
}

struct Field {
    std::string text;
    bool quoted = false;
};

/// Splits on commas outside quotes; unquoted fields are trimmed.
std::vector<Field> split_fields(std::string_view s, std::size_t line) {
    std::vector<Field> fields;
    while (true) {
        skip_space(s);
        Field f;
        if (!s.empty() && (s.front() == '\'' || s.front() == '"')) {
            f.text = read_quoted(s, line);
            f.quoted = true;
            skip_space(s);
            if (!s.empty() && s.front() != ',') {
                throw ParseError("unexpected text after quoted value", line);
            }
        } else {
            const auto comma = s.find(',');
            const auto raw = s.substr(0, comma);
            if (raw.find_first_of("'\"") != std::string_view::npos) {
                throw ParseError("stray quote inside unquoted value", line);
            }
            f.text = std::string(text::trim(raw));
            s.remove_prefix(comma == std::string_view::npos ? s.size() : comma);
        }
        fields.push_back(std::move(f));
        if (s.empty()) {
            return fields;
        }
        s.remove_prefix(1);  // the comma
    }
}

Attribute parse_attribute(std::string_view rest, std::size_t line) {
    std::string name = read_name(rest, line);
    if (name.empty()) {
        throw ParseError("attribute name must not be empty", line);
    }
    skip_space(rest);
    if (rest.empty()) {
        throw ParseError(fmt::format("attribute '{}' has no type", name), line);
    }
    if (rest.front() == '{') {
        const auto close = rest.rfind('}');
        if (close == std::string_view::npos) {
            throw ParseError(fmt::format("nominal attribute '{}' is missing '}}'", name), line);
        }
        if (!text::trim(rest.substr(close + 1)).empty()) {
            throw ParseError(fmt::format("unexpected text after nominal list of '{}'", name), line);
        }
        const auto body = rest.substr(1, close - 1);
        if (text::trim(body).empty()) {
            throw ParseError(fmt::format("nominal attribute '{}' declares no labels", name), line);
        }
        std::vector<std::string> labels;
        std::set<std::string> seen;
        for (auto& f : split_fields(body, line)) {
            if (f.text.empty() && !f.quoted) {
                throw ParseError(fmt::format("empty label in nominal attribute '{}'", name), line);
            }
            if (!seen.insert(f.text).second) {
                throw ParseError(fmt::format("duplicate label '{}' in attribute '{}'", f.text, name), line);
            }
            labels.push_back(std::move(f.text));
        }
        return Attribute::nominal(std::move(name), std::move(labels));
    }
    std::string_view type = rest;
    const auto end = type.find_first_of(" \t");
    const std::string keyword = text::to_lower(type.substr(0, end));
    const auto trailing = end == std::string_view::npos ? std::string_view{} : text::trim(type.substr(end));
    if (keyword == "numeric" || keyword == "real" || keyword == "integer") {
        if (!trailing.empty()) {
            throw ParseError(fmt::format("unexpected text after type of '{}'", name), line);
        }
        return Attribute::numeric(std::move(name));
    }
    if (keyword == "string" || keyword == "date" || keyword == "relational") {
        throw UnsupportedFeatureError(
            fmt::format("unsupported feature: {} attribute '{}' (only numeric and nominal are supported)", keyword,
                        name),
            line);
    }
    throw ParseError(fmt::format("unknown attribute type '{}' for '{}'", type, name), line);
}

Row parse_row(std::string_view line_text, const std::vector<Attribute>& attributes, std::size_t line) {
    if (line_text.front() == '{') {
        throw UnsupportedFeatureError("unsupported feature: sparse data rows", line);
    }
    auto fields = split_fields(line_text, line);
    if (fields.size() != attributes.size()) {
        throw ParseError(fmt::format("row has {} values, expected {}", fields.size(), attributes.size()), line);
    }
    Row row(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const Field& f = fields[i];
        const Attribute& a = attributes[i];
        if (!f.quoted && f.text == "?") {
            row[i] = kMissing;
            continue;
        }
        if (a.is_nominal()) {
            const auto idx = a.label_index(f.text);
            if (!idx) {
                throw ParseError(fmt::format("value '{}' is not declared for nominal attribute '{}'", f.text, a.name),
                                 line);
            }
            row[i] = static_cast<double>(*idx);
        } else {
            const auto v = text::parse_double(f.text);
            if (!v || !std::isfinite(*v)) {
                throw ParseError(fmt::format("value '{}' is not a number (attribute '{}')", f.text, a.name), line);
            }
            row[i] = *v;
        }
    }
    return row;
}

bool keyword_is(std::string_view line, std::string_view keyword) {
    if (line.size() < keyword.size() || !text::iequals(line.substr(0, keyword.size()), keyword)) {
        return false;
    }
    return line.size() == keyword.size() || is_space(line[keyword.size()]);
}

}  // namespace

Dataset parse(std::istream& in) {
    std::optional<std::string> relation;
    std::vector<Attribute> attributes;
    std::set<std::string> names;
    std::optional<Dataset> dataset;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = text::trim(raw);
        if (line.empty() || line.front() == '%') {
            continue;
        }
        if (dataset) {
            dataset->add_row(parse_row(line, attributes, line_no));
            continue;
        }
        if (line.front() != '@') {
            throw ParseError("data line before @data", line_no);
        }
        if (keyword_is(line, "@relation")) {
            if (relation) {
                throw ParseError("duplicate @relation", line_no);
            }
            std::string_view rest = line.substr(9);
            relation = read_name(rest, line_no);
            if (!text::trim(rest).empty()) {
                throw ParseError("unexpected text after relation name (quote names containing spaces)", line_no);
            }
        } else if (keyword_is(line, "@attribute")) {
            if (!relation) {
                throw ParseError("@attribute before @relation", line_no);
            }
            Attribute a = parse_attribute(line.substr(10), line_no);
            if (!names.insert(a.name).second) {
                throw ParseError(fmt::format("duplicate attribute name '{}'", a.name), line_no);
            }
            attributes.push_back(std::move(a));
        } else if (keyword_is(line, "@data")) {
            if (!relation) {
                throw ParseError("@data before @relation", line_no);
            }
            if (!text::trim(line.substr(5)).empty()) {
                throw ParseError("unexpected text after @data", line_no);
            }
            dataset.emplace(*relation, attributes);
        } else if (keyword_is(line, "@end")) {
            throw UnsupportedFeatureError("unsupported feature: relational attributes (@end)", line_no);
        } else {
            throw ParseError(fmt::format("unknown declaration '{}'", line.substr(0, line.find_first_of(" \t"))),
                             line_no);
        }
    }
    if (!relation) {
        throw ParseError("missing @relation declaration", 0);
    }
    if (!dataset) {
        throw ParseError("missing @data section", 0);
    }
    return std::move(*dataset);
}

Dataset parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse(in);
}

namespace {

bool needs_quotes(std::string_view s) {
    if (s.empty() || s == "?") {
        return true;
    }
    if (s.front() == '%' || s.front() == '@') {
        return true;
    }
    return s.find_first_of(" \t\r\n,{}'\"\\%") != std::string_view::npos;
}

std::string quote(std::string_view s) {
    if (!needs_quotes(s)) {
        return std::string(s);
    }
    std::string out = "'";
    for (char c : s) {
        switch (c) {
            case '\'':
                out += "\\'";
                break;
            case '\\':
                out += "\\\\";
                break;
            case '\n':
                out += "\\n";
                break;
            case '\r':
                out += "\\r";
                break;
            case '\t':
                out += "\\t";
                break;
            default:
                out += c;
        }
    }
    out += '\'';
    return out;
}

}  // namespace

std::string serialize(const Dataset& dataset) {
    std::string out = "@relation " + quote(dataset.relation()) + "\n\n";
    for (const auto& a : dataset.attributes()) {
        out += "@attribute " + quote(a.name) + ' ';
        if (a.is_nominal()) {
            out += '{';
            for (std::size_t i = 0; i < a.labels.size(); ++i) {
                out += (i > 0 ? "," : "") + quote(a.labels[i]);
            }
            out += "}\n";
        } else {
            out += "numeric\n";
        }
    }
    out += "\n@data\n";
    for (const auto& row : dataset.rows()) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) {
                out += ',';
            }
            const Value v = row[i];
            if (is_missing(v)) {
                out += '?';
            } else if (dataset.attribute(i).is_nominal()) {
                out += quote(dataset.attribute(i).labels[static_cast<std::size_t>(v)]);
            } else {
                out += text::format_double(v);
            }
        }
        out += '\n';
    }
    return out;
}

void write(std::ostream& out, const Dataset& dataset) { out << serialize(dataset); }

Dataset designate_class(Dataset dataset, std::string_view name) {
    dataset.designate_class(name);
    return dataset;
}

}  // namespace honeytrap::arff
