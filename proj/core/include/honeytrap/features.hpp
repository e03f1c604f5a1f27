#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "honeytrap/arff.hpp"
#include "honeytrap/calendar.hpp"
#include "honeytrap/simnet.hpp"

namespace honeytrap::features {

using simnet::Label;
using simnet::Profile;
using simnet::Tweet;

/// Per-profile attributes in export order. `creation_epoch_day` and `name`
/// are carried for export only; they are not learning features.
struct FeatureVector {
    std::string name;
    long creation_epoch_day = 0;

    double account_age_days = 0.0;
    double followers = 0.0;
    double followings = 0.0;
    double tweet_count = 0.0;
    double has_profile_image = 0.0;
    double avg_tweets_per_day = 0.0;
    double ff_ratio = 0.0;
    double url_ratio = 0.0;
    double mention_ratio = 0.0;
    double retweet_pct = 0.0;
    double tweet_similarity_pct = 0.0;
    double honeypot_interaction_count = 0.0;
    std::optional<Label> class_label;

    bool operator==(const FeatureVector&) const = default;
};

inline constexpr std::size_t kFeatureCount = 12;

/// Learning-feature names in export order.
[[nodiscard]] const std::array<std::string_view, kFeatureCount>& feature_names();

inline constexpr std::string_view kCreationDateAttribute = "creation_date";
inline constexpr std::string_view kClassAttribute = "class";

/// The export schema: creation_date, the 12 features, class.
[[nodiscard]] std::vector<std::string> export_attribute_names();

enum class GroupKind { Traditional, HoneypotBased, Combined };

struct FeatureGroup {
    GroupKind kind = GroupKind::Combined;
    std::vector<std::string> attributes;

    [[nodiscard]] static FeatureGroup traditional();
    [[nodiscard]] static FeatureGroup honeypot_based();
    [[nodiscard]] static FeatureGroup combined();
    [[nodiscard]] static FeatureGroup of(GroupKind kind);

    /// Accepts "traditional", "honeypot", "combined".
    [[nodiscard]] static FeatureGroup parse(std::string_view name);
};

[[nodiscard]] std::string_view group_name(GroupKind kind) noexcept;

/// Feature values by name, in a fixed order.
struct NamedVector {
    std::vector<std::string> names;
    std::vector<double> values;
    std::optional<Label> class_label;

    bool operator==(const NamedVector&) const = default;
};

// Individual feature computations.

/// Whole days from creation to harvest; DomainError when harvest precedes creation.
[[nodiscard]] std::int64_t account_age(Date creation_date, Date harvest_date);
/// followers / followings, with a zero denominator treated as 1.
[[nodiscard]] double ff_ratio(std::uint64_t followers, std::uint64_t followings);
/// tweet_count / max(age, 1).
[[nodiscard]] double avg_tweets_per_day(std::uint64_t tweet_count, std::int64_t account_age_days);
[[nodiscard]] double url_ratio(std::span<const Tweet> tweets);
[[nodiscard]] double mention_ratio(std::span<const Tweet> tweets);
[[nodiscard]] double retweet_pct(std::span<const Tweet> tweets);
/// Mean pairwise Jaccard similarity of token sets, in percent; 0 for < 2 tweets.
[[nodiscard]] double tweet_similarity_pct(std::span<const Tweet> tweets);

[[nodiscard]] FeatureVector extract(const Profile& profile);

[[nodiscard]] NamedVector to_named(const FeatureVector& vector);
/// Keeps the group's attributes (and the class). ConfigError if the vector
/// lacks one of them.
[[nodiscard]] NamedVector project(const NamedVector& vector, const FeatureGroup& group);
[[nodiscard]] NamedVector project(const FeatureVector& vector, const FeatureGroup& group);

/// Dataset in the export schema with the class designated.
[[nodiscard]] arff::Dataset build_dataset(std::span<const FeatureVector> vectors,
                                          std::string relation = "honeypot_profiles");
/// Keeps the group's attributes plus the class attribute, in dataset order.
[[nodiscard]] arff::Dataset project_dataset(const arff::Dataset& dataset, const FeatureGroup& group);

/// CSV with header `name,creation_date,account_age,...,class`; dates as YYYY-MM-DD.
void write_csv(std::ostream& out, std::span<const FeatureVector> vectors);

}  // namespace honeytrap::features
