#pragma once

// Closed, seeded simulation of a social network with passive honeypot
// profiles. Agents tweet, follow, and (spammers mostly) send unsolicited
// contacts to honeypots; every contact is logged as an InteractionEvent.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "honeytrap/calendar.hpp"

namespace honeytrap::simnet {

enum class Label { Malicious, Legitimate };

/// "mal" / "leg", the class labels used in datasets.
[[nodiscard]] std::string_view label_name(Label label) noexcept;
[[nodiscard]] Label parse_label(std::string_view text);

enum class ContactKind { FollowRequest, Mention, DirectMessage };

[[nodiscard]] std::string_view contact_kind_name(ContactKind kind) noexcept;
[[nodiscard]] ContactKind parse_contact_kind(std::string_view text);

struct BehaviorParams {
    double tweets_per_day = 0.0;
    double url_rate = 0.0;        // expected URLs per tweet
    double mention_rate = 0.0;    // expected mentions per tweet
    double retweet_prob = 0.0;
    double template_reuse_prob = 0.0;
    double follow_rate = 0.0;     // new followings per day
    double honeypot_contact_prob = 0.0;  // per day
    double follower_gain_rate = 0.0;     // new followers per day
    double profile_image_prob = 1.0;
    std::int64_t account_age_min = 1;  // age at simulation start, days
    std::int64_t account_age_max = 365;

    /// Throws ConfigError naming `prefix.<field>` on the first violation.
    void validate(std::string_view prefix) const;

    [[nodiscard]] static BehaviorParams spammer_preset();
    [[nodiscard]] static BehaviorParams legitimate_preset();

    bool operator==(const BehaviorParams&) const = default;
};

struct SimConfig {
    std::uint64_t seed = 42;
    std::int64_t n_legitimate = 200;
    std::int64_t n_spammer = 100;
    std::int64_t n_honeypots = 20;
    std::int64_t n_days = 60;
    std::int64_t harvest_cap = 90;
    /// Share of the harvest reserved for never-trapped legitimate controls.
    double control_fraction = 0.3;
    /// Spammers that tweet and follow like legitimate users but still probe honeypots.
    double spammer_camouflage = 0.1;
    /// Multiplies a camouflaged spammer's honeypot contact probability.
    double camouflage_contact_scale = 0.3;
    /// Legitimate accounts with spam-like posting habits that never probe honeypots.
    double legit_promoter_fraction = 0.05;
    /// Each agent scales every rate by an independent factor in [1-j, 1+j].
    double behavior_jitter = 0.5;
    std::int64_t retained_tweets = 40;
    std::int64_t vocabulary_size = 3000;
    /// Relative weights of the contact kinds a probing agent uses.
    double follow_request_weight = 0.6;
    double mention_weight = 0.25;
    double direct_message_weight = 0.15;
    Date start_date = Date{std::chrono::year{2016} / 7 / 1};
    BehaviorParams spammer = BehaviorParams::spammer_preset();
    BehaviorParams legit = BehaviorParams::legitimate_preset();

    void validate() const;

    [[nodiscard]] Date harvest_date() const { return start_date + std::chrono::days{n_days}; }

    bool operator==(const SimConfig&) const = default;
};

struct Tweet {
    std::vector<std::string> tokens;
    std::uint32_t n_urls = 0;
    std::uint32_t n_mentions = 0;
    bool is_retweet = false;
    std::int64_t day = 0;

    bool operator==(const Tweet&) const = default;
};

struct Profile {
    std::uint64_t id = 0;
    std::string name;
    Date creation_date{};
    Date harvest_date{};
    std::uint64_t followers = 0;
    std::uint64_t followings = 0;
    std::uint64_t tweet_count = 0;
    bool has_profile_image = false;
    std::vector<Tweet> tweets;  // retained sample, most recent last
    std::uint64_t honeypot_interactions = 0;  // distinct honeypots contacted
    Label truth_label = Label::Legitimate;

    bool operator==(const Profile&) const = default;
};

struct InteractionEvent {
    std::int64_t day = 0;
    std::uint64_t actor_id = 0;
    std::uint64_t honeypot_id = 0;
    ContactKind kind = ContactKind::FollowRequest;

    bool operator==(const InteractionEvent&) const = default;
};

struct SimulationResult {
    std::vector<Profile> profiles;       // sorted by id
    std::vector<InteractionEvent> events;  // sorted by (day, actor, honeypot)
};

/// Runs the whole simulation. Identical configs give identical results.
[[nodiscard]] SimulationResult run_simulation(const SimConfig& config);

/// Selects at most `cap` profiles: trapped ones (actors of at least one
/// event) plus up to round(cap * control_fraction) never-trapped
/// legitimate controls. Candidates are sorted by id before the seeded
/// sampling; the result is sorted by id.
[[nodiscard]] std::vector<Profile> harvest(std::span<const Profile> profiles,
                                           std::span<const InteractionEvent> events,
                                           std::int64_t cap, std::uint64_t seed,
                                           double control_fraction = 0.0);

struct HoneypotStats {
    std::uint64_t honeypot_id = 0;
    std::uint64_t follow_requests = 0;
    std::uint64_t mentions = 0;
    std::uint64_t direct_messages = 0;
    std::uint64_t distinct_actors = 0;
    double daily_follow_requests = 0.0;  // follow_requests / n_days
};

[[nodiscard]] std::vector<HoneypotStats> honeypot_stats(std::span<const InteractionEvent> events,
                                                        std::int64_t n_honeypots,
                                                        std::int64_t n_days);

}  // namespace honeytrap::simnet
