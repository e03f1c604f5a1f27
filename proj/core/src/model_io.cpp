#include "honeytrap/model_io.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "honeytrap/errors.hpp"
#include "text.hpp"

namespace honeytrap::decorate {

namespace {

constexpr std::string_view kMagic = "honeytrap-model v1";

std::string schema_header(std::span<const arff::Attribute> attributes) {
    arff::Dataset empty("schema", std::vector<arff::Attribute>(attributes.begin(), attributes.end()));
    return arff::serialize(empty);
}

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string expect_line(std::istream& in, std::string_view key) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError(fmt::format("model: missing '{}' line", key), 0);
    }
    if (line.rfind(std::string(key) + " ", 0) != 0) {
        throw ParseError(fmt::format("model: expected '{}' line, found '{}'", key, line), 0);
    }
    return line.substr(key.size() + 1);
}

template <typename T>
T number(std::string_view token, std::string_view what) {
    if constexpr (std::is_same_v<T, double>) {
        if (const auto v = text::parse_double(token)) {
            return *v;
        }
    } else {
        if (const auto v = text::parse_int<T>(token)) {
            return *v;
        }
    }
    throw ParseError(fmt::format("model: bad {} '{}'", what, token), 0);
}

}  // namespace

std::uint64_t schema_hash(std::span<const arff::Attribute> attributes, std::size_t class_index) {
    return fnv1a(schema_header(attributes) + fmt::format("class={}\n", class_index));
}

std::uint64_t schema_hash(const arff::Dataset& dataset) {
    if (!dataset.has_class()) {
        throw TypeError("dataset has no designated class attribute");
    }
    return schema_hash(dataset.attributes(), *dataset.class_index());
}

void save_model(std::ostream& out, const Ensemble& ensemble) {
    const auto& p = ensemble.params();
    out << kMagic << '\n';
    out << fmt::format("schema_hash {:016x}\n", schema_hash(ensemble.schema(), ensemble.class_index()));
    out << "class_index " << ensemble.class_index() << '\n';
    out << "params " << p.c_size << ' ' << p.i_max << ' ' << text::format_double(p.r_size) << ' ' << p.seed << ' '
        << text::format_double(p.tree.min_leaf) << '\n';
    out << "trials " << ensemble.trials() << '\n';
    out << "error_history " << ensemble.error_history().size();
    for (double e : ensemble.error_history()) {
        out << ' ' << text::format_double(e);
    }
    out << '\n';
    const std::string header = schema_header(ensemble.schema());
    const auto lines = text::split(header, '\n');
    // split leaves a trailing empty piece after the final newline
    out << "schema " << lines.size() - 1 << '\n' << header;
    out << "members " << ensemble.size() << '\n';
    for (const auto& tree : ensemble.members()) {
        tree.write(out);
    }
}

std::string model_to_string(const Ensemble& ensemble) {
    std::ostringstream out;
    save_model(out, ensemble);
    return out.str();
}

Ensemble load_model(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kMagic) {
        throw ParseError(fmt::format("model: expected '{}' header", kMagic), 0);
    }
    const std::string hash_text = expect_line(in, "schema_hash");
    const auto class_index = number<std::size_t>(expect_line(in, "class_index"), "class index");

    DecorateParams params;
    {
        const std::string params_line = expect_line(in, "params");
        const auto fields = text::split(params_line, ' ');
        if (fields.size() != 5) {
            throw ParseError("model: params line needs 5 fields", 0);
        }
        params.c_size = number<std::int64_t>(fields[0], "c_size");
        params.i_max = number<std::int64_t>(fields[1], "i_max");
        params.r_size = number<double>(fields[2], "r_size");
        params.seed = number<std::uint64_t>(fields[3], "seed");
        params.tree.min_leaf = number<double>(fields[4], "min_leaf");
    }
    const auto trials = number<std::size_t>(expect_line(in, "trials"), "trials");
    std::vector<double> history;
    {
        const std::string history_line = expect_line(in, "error_history");
        const auto fields = text::split(history_line, ' ');
        const auto n = number<std::size_t>(fields[0], "error count");
        if (fields.size() != n + 1) {
            throw ParseError("model: error_history count mismatch", 0);
        }
        for (std::size_t i = 1; i < fields.size(); ++i) {
            history.push_back(number<double>(fields[i], "error"));
        }
    }
    const auto n_schema = number<std::size_t>(expect_line(in, "schema"), "schema line count");
    std::string header;
    for (std::size_t i = 0; i < n_schema; ++i) {
        if (!std::getline(in, line)) {
            throw ParseError("model: truncated schema", 0);
        }
        header += line + '\n';
    }
    const arff::Dataset schema = arff::parse(header);
    if (fmt::format("{:016x}", schema_hash(schema.attributes(), class_index)) != hash_text) {
        throw ParseError("model: schema hash does not match the embedded schema", 0);
    }
    const auto n_members = number<std::size_t>(expect_line(in, "members"), "member count");
    std::vector<DecisionTree> members;
    for (std::size_t i = 0; i < n_members; ++i) {
        members.push_back(DecisionTree::read(in));
    }
    if (members.empty()) {
        throw ParseError("model: no members", 0);
    }
    try {
        return restore_ensemble(schema.attributes(), class_index, params, std::move(members), std::move(history),
                                trials);
    } catch (const TypeError& e) {
        throw ParseError(fmt::format("model: {}", e.what()), 0);
    }
}

void check_compatible(const Ensemble& ensemble, const arff::Dataset& dataset) {
    const auto expected = schema_hash(ensemble.schema(), ensemble.class_index());
    const auto actual = schema_hash(dataset);
    if (expected != actual) {
        throw TypeError(fmt::format("dataset schema hash {:016x} does not match the model's {:016x}", actual,
                                    expected));
    }
}

}  // namespace honeytrap::decorate
