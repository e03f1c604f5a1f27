#include "honeytrap/features.hpp"

#include <algorithm>
#include <ostream>

#include <fmt/format.h>

#include "honeytrap/errors.hpp"
#include "text.hpp"

namespace honeytrap::features {

const std::array<std::string_view, kFeatureCount>& feature_names() {
    static constexpr std::array<std::string_view, kFeatureCount> names{
        "account_age",   "followers",     "followings",  "tweets",
        "profile_image", "avg_tweets_per_day", "ff_ratio", "url_ratio",
        "mention_ratio", "retweet_pct",   "tweet_similarity_pct", "honeypot_interactions"};
    return names;
}

std::vector<std::string> export_attribute_names() {
    std::vector<std::string> names{std::string(kCreationDateAttribute)};
    for (auto n : feature_names()) {
        names.emplace_back(n);
    }
    names.emplace_back(kClassAttribute);
    return names;
}

FeatureGroup FeatureGroup::traditional() {
    FeatureGroup g{GroupKind::Traditional, {}};
    for (auto n : feature_names()) {
        if (n != "honeypot_interactions") {
            g.attributes.emplace_back(n);
        }
    }
    return g;
}

FeatureGroup FeatureGroup::honeypot_based() {
    return FeatureGroup{GroupKind::HoneypotBased, {"honeypot_interactions"}};
}

FeatureGroup FeatureGroup::combined() {
    FeatureGroup g{GroupKind::Combined, {}};
    for (auto n : feature_names()) {
        g.attributes.emplace_back(n);
    }
    return g;
}

FeatureGroup FeatureGroup::of(GroupKind kind) {
    switch (kind) {
        case GroupKind::Traditional:
            return traditional();
        case GroupKind::HoneypotBased:
            return honeypot_based();
        case GroupKind::Combined:
            return combined();
    }
    return combined();
}

FeatureGroup FeatureGroup::parse(std::string_view name) {
    for (auto kind : {GroupKind::Traditional, GroupKind::HoneypotBased, GroupKind::Combined}) {
        if (name == group_name(kind)) {
            return of(kind);
        }
    }
    throw ConfigError(fmt::format("unknown feature group '{}', expected traditional, honeypot or combined", name));
}

std::string_view group_name(GroupKind kind) noexcept {
    switch (kind) {
        case GroupKind::Traditional:
            return "traditional";
        case GroupKind::HoneypotBased:
            return "honeypot";
        case GroupKind::Combined:
            return "combined";
    }
    return "combined";
}

std::int64_t account_age(Date creation_date, Date harvest_date) {
    if (harvest_date < creation_date) {
        throw DomainError(fmt::format("harvest date {} precedes creation date {}", format_date(harvest_date),
                                      format_date(creation_date)));
    }
    return (harvest_date - creation_date).count();
}

double ff_ratio(std::uint64_t followers, std::uint64_t followings) {
    return static_cast<double>(followers) / static_cast<double>(std::max<std::uint64_t>(followings, 1));
}

double avg_tweets_per_day(std::uint64_t tweet_count, std::int64_t account_age_days) {
    if (account_age_days < 0) {
        throw DomainError("account age must be >= 0");
    }
    return static_cast<double>(tweet_count) / static_cast<double>(std::max<std::int64_t>(account_age_days, 1));
}

double url_ratio(std::span<const Tweet> tweets) {
    if (tweets.empty()) {
        return 0.0;
    }
    std::uint64_t total = 0;
    for (const auto& t : tweets) {
        total += t.n_urls;
    }
    return static_cast<double>(total) / static_cast<double>(tweets.size());
}

double mention_ratio(std::span<const Tweet> tweets) {
    if (tweets.empty()) {
        return 0.0;
    }
    std::uint64_t total = 0;
    for (const auto& t : tweets) {
        total += t.n_mentions;
    }
    return static_cast<double>(total) / static_cast<double>(tweets.size());
}

double retweet_pct(std::span<const Tweet> tweets) {
    if (tweets.empty()) {
        return 0.0;
    }
    const auto n = std::count_if(tweets.begin(), tweets.end(), [](const Tweet& t) { return t.is_retweet; });
    return 100.0 * static_cast<double>(n) / static_cast<double>(tweets.size());
}

double tweet_similarity_pct(std::span<const Tweet> tweets) {
    if (tweets.size() < 2) {
        return 0.0;
    }
    std::vector<std::vector<std::string_view>> sets;
    sets.reserve(tweets.size());
    for (const auto& t : tweets) {
        std::vector<std::string_view> s(t.tokens.begin(), t.tokens.end());
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        sets.push_back(std::move(s));
    }
    double sum = 0.0;
    std::size_t pairs = 0;
    std::vector<std::string_view> common;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        for (std::size_t j = i + 1; j < sets.size(); ++j) {
            common.clear();
            std::set_intersection(sets[i].begin(), sets[i].end(), sets[j].begin(), sets[j].end(),
                                  std::back_inserter(common));
            const std::size_t uni = sets[i].size() + sets[j].size() - common.size();
            // two empty token sets count as identical
            sum += uni == 0 ? 1.0 : static_cast<double>(common.size()) / static_cast<double>(uni);
            ++pairs;
        }
    }
    return 100.0 * sum / static_cast<double>(pairs);
}

FeatureVector extract(const Profile& profile) {
    const std::int64_t age = account_age(profile.creation_date, profile.harvest_date);
    FeatureVector v;
    v.name = profile.name;
    v.creation_epoch_day = epoch_day(profile.creation_date);
    v.account_age_days = static_cast<double>(age);
    v.followers = static_cast<double>(profile.followers);
    v.followings = static_cast<double>(profile.followings);
    v.tweet_count = static_cast<double>(profile.tweet_count);
    v.has_profile_image = profile.has_profile_image ? 1.0 : 0.0;
    v.avg_tweets_per_day = avg_tweets_per_day(profile.tweet_count, age);
    v.ff_ratio = ff_ratio(profile.followers, profile.followings);
    v.url_ratio = url_ratio(profile.tweets);
    v.mention_ratio = mention_ratio(profile.tweets);
    v.retweet_pct = retweet_pct(profile.tweets);
    v.tweet_similarity_pct = tweet_similarity_pct(profile.tweets);
    v.honeypot_interaction_count = static_cast<double>(profile.honeypot_interactions);
    v.class_label = profile.truth_label;
    return v;
}

namespace {

std::array<double, kFeatureCount> values_of(const FeatureVector& v) {
    return {v.account_age_days, v.followers,   v.followings,    v.tweet_count,
            v.has_profile_image, v.avg_tweets_per_day, v.ff_ratio, v.url_ratio,
            v.mention_ratio,    v.retweet_pct, v.tweet_similarity_pct, v.honeypot_interaction_count};
}

}  // namespace

NamedVector to_named(const FeatureVector& vector) {
    NamedVector out;
    const auto values = values_of(vector);
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        out.names.emplace_back(feature_names()[i]);
        out.values.push_back(values[i]);
    }
    out.class_label = vector.class_label;
    return out;
}

NamedVector project(const NamedVector& vector, const FeatureGroup& group) {
    NamedVector out;
    out.class_label = vector.class_label;
    for (const auto& wanted : group.attributes) {
        const auto it = std::find(vector.names.begin(), vector.names.end(), wanted);
        if (it == vector.names.end()) {
            throw ConfigError(fmt::format("feature group '{}' names unknown attribute '{}'", group_name(group.kind),
                                          wanted));
        }
        out.names.push_back(wanted);
        out.values.push_back(vector.values[static_cast<std::size_t>(it - vector.names.begin())]);
    }
    return out;
}

NamedVector project(const FeatureVector& vector, const FeatureGroup& group) {
    return project(to_named(vector), group);
}

arff::Dataset build_dataset(std::span<const FeatureVector> vectors, std::string relation) {
    std::vector<arff::Attribute> attributes;
    attributes.push_back(arff::Attribute::numeric(std::string(kCreationDateAttribute)));
    for (auto n : feature_names()) {
        attributes.push_back(arff::Attribute::numeric(std::string(n)));
    }
    attributes.push_back(arff::Attribute::nominal(
        std::string(kClassAttribute),
        {std::string(simnet::label_name(Label::Malicious)), std::string(simnet::label_name(Label::Legitimate))}));
    arff::Dataset dataset(std::move(relation), std::move(attributes));
    for (const auto& v : vectors) {
        arff::Row row;
        row.reserve(kFeatureCount + 2);
        row.push_back(static_cast<double>(v.creation_epoch_day));
        for (double x : values_of(v)) {
            row.push_back(x);
        }
        row.push_back(v.class_label ? (*v.class_label == Label::Malicious ? 0.0 : 1.0) : arff::kMissing);
        dataset.add_row(std::move(row));
    }
    dataset.designate_class(kClassAttribute);
    return dataset;
}

arff::Dataset project_dataset(const arff::Dataset& dataset, const FeatureGroup& group) {
    std::vector<std::size_t> keep;
    for (const auto& name : group.attributes) {
        const auto idx = dataset.find_attribute(name);
        if (!idx) {
            throw ConfigError(fmt::format("feature group '{}' names attribute '{}' absent from the dataset",
                                          group_name(group.kind), name));
        }
        keep.push_back(*idx);
    }
    const auto class_idx = dataset.class_index();
    if (class_idx && std::find(keep.begin(), keep.end(), *class_idx) == keep.end()) {
        keep.push_back(*class_idx);
    }
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());

    std::vector<arff::Attribute> attributes;
    for (std::size_t i : keep) {
        attributes.push_back(dataset.attribute(i));
    }
    arff::Dataset out(dataset.relation() + "-" + std::string(group_name(group.kind)), std::move(attributes));
    for (const auto& row : dataset.rows()) {
        arff::Row r;
        r.reserve(keep.size());
        for (std::size_t i : keep) {
            r.push_back(row[i]);
        }
        out.add_row(std::move(r));
    }
    if (class_idx) {
        out.designate_class(dataset.attribute(*class_idx).name);
    }
    return out;
}

void write_csv(std::ostream& out, std::span<const FeatureVector> vectors) {
    out << "name";
    for (const auto& n : export_attribute_names()) {
        out << ',' << n;
    }
    out << '\n';
    for (const auto& v : vectors) {
        if (v.name.find_first_of(",\"\n\r") != std::string::npos) {
            out << '"';
            for (char c : v.name) {
                out << (c == '"' ? "\"\"" : std::string(1, c));
            }
            out << '"';
        } else {
            out << v.name;
        }
        out << ',' << format_date(Date{std::chrono::days{v.creation_epoch_day}});
        for (double x : values_of(v)) {
            out << ',' << text::format_double(x);
        }
        out << ',' << (v.class_label ? simnet::label_name(*v.class_label) : "?") << '\n';
    }
}

}  // namespace honeytrap::features
