#include "honeytrap/simnet.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <tuple>

#include <fmt/format.h>

#include "honeytrap/errors.hpp"
#include "honeytrap/random.hpp"

namespace honeytrap::simnet {

std::string_view label_name(Label label) noexcept {
    return label == Label::Malicious ? "mal" : "leg";
}

Label parse_label(std::string_view text) {
    if (text == "mal") {
        return Label::Malicious;
    }
    if (text == "leg") {
        return Label::Legitimate;
    }
    throw ParseError(fmt::format("unknown class label '{}', expected mal or leg", text), 0);
}

std::string_view contact_kind_name(ContactKind kind) noexcept {
    switch (kind) {
        case ContactKind::FollowRequest:
            return "FollowRequest";
        case ContactKind::Mention:
            return "Mention";
        case ContactKind::DirectMessage:
            return "DirectMessage";
    }
    return "FollowRequest";
}

ContactKind parse_contact_kind(std::string_view text) {
    for (auto kind : {ContactKind::FollowRequest, ContactKind::Mention, ContactKind::DirectMessage}) {
        if (text == contact_kind_name(kind)) {
            return kind;
        }
    }
    throw ParseError(fmt::format("unknown interaction kind '{}'", text), 0);
}

namespace {

void require(bool ok, std::string_view field, std::string_view rule) {
    if (!ok) {
        throw ConfigError(fmt::format("invalid configuration: {} {}", field, rule));
    }
}

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }
bool is_rate(double r) { return std::isfinite(r) && r >= 0.0; }

}  // namespace

void BehaviorParams::validate(std::string_view prefix) const {
    const auto name = [&](std::string_view field) { return fmt::format("{}.{}", prefix, field); };
    require(is_rate(tweets_per_day), name("tweets_per_day"), "must be a finite rate >= 0");
    require(is_rate(url_rate), name("url_rate"), "must be a finite rate >= 0");
    require(is_rate(mention_rate), name("mention_rate"), "must be a finite rate >= 0");
    require(is_rate(follow_rate), name("follow_rate"), "must be a finite rate >= 0");
    require(is_rate(follower_gain_rate), name("follower_gain_rate"), "must be a finite rate >= 0");
    require(is_probability(retweet_prob), name("retweet_prob"), "must lie in [0,1]");
    require(is_probability(template_reuse_prob), name("template_reuse_prob"), "must lie in [0,1]");
    require(is_probability(honeypot_contact_prob), name("honeypot_contact_prob"), "must lie in [0,1]");
    require(is_probability(profile_image_prob), name("profile_image_prob"), "must lie in [0,1]");
    require(account_age_min >= 0, name("account_age_min"), "must be >= 0");
    require(account_age_max >= account_age_min, name("account_age_max"), "must be >= account_age_min");
}

BehaviorParams BehaviorParams::spammer_preset() {
    BehaviorParams p;
    p.tweets_per_day = 6.0;
    p.url_rate = 0.9;
    p.mention_rate = 1.3;
    p.retweet_prob = 0.15;
    p.template_reuse_prob = 0.7;
    p.follow_rate = 40.0;
    p.honeypot_contact_prob = 0.06;
    p.follower_gain_rate = 12.0;
    p.profile_image_prob = 0.7;
    p.account_age_min = 5;
    p.account_age_max = 900;
    return p;
}

BehaviorParams BehaviorParams::legitimate_preset() {
    BehaviorParams p;
    p.tweets_per_day = 2.0;
    p.url_rate = 0.25;
    p.mention_rate = 0.6;
    p.retweet_prob = 0.3;
    p.template_reuse_prob = 0.05;
    p.follow_rate = 1.0;
    p.honeypot_contact_prob = 0.004;
    p.follower_gain_rate = 3.0;
    p.profile_image_prob = 0.95;
    p.account_age_min = 30;
    p.account_age_max = 2700;
    return p;
}

void SimConfig::validate() const {
    require(n_legitimate >= 0, "n_legitimate", "must be >= 0");
    require(n_spammer >= 0, "n_spammer", "must be >= 0");
    require(n_honeypots >= 0, "n_honeypots", "must be >= 0");
    require(n_days >= 1, "n_days", "must be >= 1");
    require(harvest_cap >= 0, "harvest_cap", "must be >= 0");
    require(is_probability(control_fraction), "control_fraction", "must lie in [0,1]");
    require(is_probability(spammer_camouflage), "spammer_camouflage", "must lie in [0,1]");
    require(is_rate(camouflage_contact_scale), "camouflage_contact_scale", "must be a finite rate >= 0");
    require(is_probability(legit_promoter_fraction), "legit_promoter_fraction", "must lie in [0,1]");
    require(behavior_jitter >= 0.0 && behavior_jitter < 1.0, "behavior_jitter", "must lie in [0,1)");
    require(retained_tweets >= 0, "retained_tweets", "must be >= 0");
    require(vocabulary_size >= 1, "vocabulary_size", "must be >= 1");
    require(is_rate(follow_request_weight) && is_rate(mention_weight) && is_rate(direct_message_weight),
            "contact kind weights", "must be finite and >= 0");
    require(follow_request_weight + mention_weight + direct_message_weight > 0.0, "contact kind weights",
            "must not all be zero");
    spammer.validate("spammer");
    legit.validate("legit");
}

namespace {

constexpr std::size_t kTemplatesPerAgent = 3;
constexpr std::size_t kMinTweetTokens = 6;
constexpr std::size_t kMaxTweetTokens = 12;

struct AgentPlan {
    Label label;
    BehaviorParams posting;  // tweets, follows, profile look
    double contact_prob;
};

AgentPlan plan_agent(const SimConfig& config, Label label, Rng& rng) {
    if (label == Label::Malicious) {
        const bool camouflaged = rng.bernoulli(config.spammer_camouflage);
        if (camouflaged) {
            return {label, config.legit,
                    std::min(1.0, config.spammer.honeypot_contact_prob * config.camouflage_contact_scale)};
        }
        return {label, config.spammer, config.spammer.honeypot_contact_prob};
    }
    const bool promoter = rng.bernoulli(config.legit_promoter_fraction);
    return {label, promoter ? config.spammer : config.legit, config.legit.honeypot_contact_prob};
}

std::string token(std::size_t word) { return fmt::format("w{}", word); }

std::vector<std::string> random_tokens(const SimConfig& config, Rng& rng) {
    const std::size_t length = kMinTweetTokens + rng.index(kMaxTweetTokens - kMinTweetTokens + 1);
    std::vector<std::string> tokens;
    tokens.reserve(length);
    for (std::size_t i = 0; i < length; ++i) {
        tokens.push_back(token(rng.index(static_cast<std::size_t>(config.vocabulary_size))));
    }
    return tokens;
}

struct AgentOutcome {
    Profile profile;
    std::vector<InteractionEvent> events;
};

AgentOutcome simulate_agent(const SimConfig& config, std::uint64_t id, Label label) {
    Rng rng(Rng::derive(config.seed, id));
    const AgentPlan plan = plan_agent(config, label, rng);
    const BehaviorParams& b = plan.posting;

    const double j = config.behavior_jitter;
    const auto jitter = [&](double value) { return value * rng.uniform(1.0 - j, 1.0 + j); };
    const auto jitter_prob = [&](double p) { return std::clamp(jitter(p), 0.0, 1.0); };

    const double tweets_per_day = jitter(b.tweets_per_day);
    const double url_rate = jitter(b.url_rate);
    const double mention_rate = jitter(b.mention_rate);
    const double retweet_prob = jitter_prob(b.retweet_prob);
    const double reuse_prob = jitter_prob(b.template_reuse_prob);
    const double follow_rate = jitter(b.follow_rate);
    const double follower_gain = jitter(b.follower_gain_rate);
    const double contact_prob = jitter_prob(plan.contact_prob);

    const auto age_span = static_cast<std::size_t>(b.account_age_max - b.account_age_min + 1);
    const std::int64_t age = b.account_age_min + static_cast<std::int64_t>(rng.index(age_span));

    Profile profile;
    profile.id = id;
    profile.name = fmt::format("user{:05d}", id);
    profile.truth_label = label;
    profile.creation_date = config.start_date - std::chrono::days{age};
    profile.harvest_date = config.harvest_date();
    profile.has_profile_image = rng.bernoulli(b.profile_image_prob);

    // history accumulated before the observation window
    const auto days_before = static_cast<double>(age);
    std::uint64_t prior_tweets = rng.poisson(tweets_per_day * days_before);
    profile.followings = rng.poisson(follow_rate * days_before);
    profile.followers = rng.poisson(follower_gain * days_before);

    std::array<std::vector<std::string>, kTemplatesPerAgent> templates;
    for (auto& t : templates) {
        t = random_tokens(config, rng);
    }

    const std::array<double, 3> kind_weights{config.follow_request_weight, config.mention_weight,
                                             config.direct_message_weight};
    const std::array<ContactKind, 3> kinds{ContactKind::FollowRequest, ContactKind::Mention,
                                           ContactKind::DirectMessage};

    AgentOutcome out;
    std::vector<Tweet> window;
    std::set<std::uint64_t> contacted;
    for (std::int64_t day = 0; day < config.n_days; ++day) {
        const std::uint64_t n_tweets = rng.poisson(tweets_per_day);
        for (std::uint64_t t = 0; t < n_tweets; ++t) {
            Tweet tweet;
            tweet.day = day;
            tweet.tokens = rng.bernoulli(reuse_prob) ? templates[rng.index(kTemplatesPerAgent)]
                                                     : random_tokens(config, rng);
            tweet.n_urls = static_cast<std::uint32_t>(rng.poisson(url_rate));
            tweet.n_mentions = static_cast<std::uint32_t>(rng.poisson(mention_rate));
            tweet.is_retweet = rng.bernoulli(retweet_prob);
            window.push_back(std::move(tweet));
        }
        profile.followings += rng.poisson(follow_rate);
        profile.followers += rng.poisson(follower_gain);

        if (config.n_honeypots > 0 && rng.bernoulli(contact_prob)) {
            InteractionEvent event;
            event.day = day;
            event.actor_id = id;
            event.honeypot_id = rng.index(static_cast<std::size_t>(config.n_honeypots));
            event.kind = kinds[rng.categorical(kind_weights)];
            contacted.insert(event.honeypot_id);
            out.events.push_back(event);
        }
    }

    profile.tweet_count = prior_tweets + window.size();
    const auto keep = std::min(window.size(), static_cast<std::size_t>(config.retained_tweets));
    profile.tweets.assign(std::make_move_iterator(window.end() - static_cast<std::ptrdiff_t>(keep)),
                          std::make_move_iterator(window.end()));
    profile.honeypot_interactions = contacted.size();
    out.profile = std::move(profile);
    return out;
}

}  // namespace

SimulationResult run_simulation(const SimConfig& config) {
    config.validate();
    SimulationResult result;
    const auto n_agents = static_cast<std::uint64_t>(config.n_legitimate + config.n_spammer);
    result.profiles.reserve(n_agents);
    for (std::uint64_t id = 0; id < n_agents; ++id) {
        const Label label = id < static_cast<std::uint64_t>(config.n_legitimate) ? Label::Legitimate
                                                                                 : Label::Malicious;
        AgentOutcome agent = simulate_agent(config, id, label);
        result.profiles.push_back(std::move(agent.profile));
        result.events.insert(result.events.end(), agent.events.begin(), agent.events.end());
    }
    std::sort(result.events.begin(), result.events.end(), [](const auto& a, const auto& b) {
        return std::tie(a.day, a.actor_id, a.honeypot_id) < std::tie(b.day, b.actor_id, b.honeypot_id);
    });
    return result;
}

std::vector<Profile> harvest(std::span<const Profile> profiles, std::span<const InteractionEvent> events,
                             std::int64_t cap, std::uint64_t seed, double control_fraction) {
    if (cap < 0) {
        throw ConfigError("harvest cap must be >= 0");
    }
    if (!is_probability(control_fraction)) {
        throw ConfigError("control_fraction must lie in [0,1]");
    }
    std::set<std::uint64_t> trapped_ids;
    for (const auto& e : events) {
        trapped_ids.insert(e.actor_id);
    }

    std::vector<const Profile*> sorted;
    sorted.reserve(profiles.size());
    for (const auto& p : profiles) {
        sorted.push_back(&p);
    }
    std::sort(sorted.begin(), sorted.end(), [](const Profile* a, const Profile* b) { return a->id < b->id; });

    std::vector<const Profile*> trapped;
    std::vector<const Profile*> controls;
    for (const Profile* p : sorted) {
        if (trapped_ids.contains(p->id)) {
            trapped.push_back(p);
        } else if (p->truth_label == Label::Legitimate) {
            controls.push_back(p);
        }
    }

    const auto budget = static_cast<std::size_t>(cap);
    const auto control_target = static_cast<std::size_t>(std::llround(static_cast<double>(budget) * control_fraction));
    const std::size_t n_trapped = std::min(trapped.size(), budget - std::min(control_target, controls.size()));
    const std::size_t n_controls = std::min({controls.size(), control_target, budget - n_trapped});

    Rng rng(seed);
    rng.shuffle(trapped);
    rng.shuffle(controls);
    std::vector<Profile> out;
    out.reserve(n_trapped + n_controls);
    for (std::size_t i = 0; i < n_trapped; ++i) {
        out.push_back(*trapped[i]);
    }
    for (std::size_t i = 0; i < n_controls; ++i) {
        out.push_back(*controls[i]);
    }
    std::sort(out.begin(), out.end(), [](const Profile& a, const Profile& b) { return a.id < b.id; });
    return out;
}

std::vector<HoneypotStats> honeypot_stats(std::span<const InteractionEvent> events, std::int64_t n_honeypots,
                                          std::int64_t n_days) {
    if (n_days < 1) {
        throw ConfigError("n_days must be >= 1");
    }
    if (n_honeypots < 0) {
        throw ConfigError("n_honeypots must be >= 0");
    }
    std::vector<HoneypotStats> stats(static_cast<std::size_t>(n_honeypots));
    std::vector<std::set<std::uint64_t>> actors(stats.size());
    for (std::size_t h = 0; h < stats.size(); ++h) {
        stats[h].honeypot_id = h;
    }
    for (const auto& e : events) {
        if (e.honeypot_id >= stats.size()) {
            throw DomainError(fmt::format("event references honeypot {} but only {} are deployed",
                                          e.honeypot_id, stats.size()));
        }
        auto& s = stats[e.honeypot_id];
        switch (e.kind) {
            case ContactKind::FollowRequest:
                ++s.follow_requests;
                break;
            case ContactKind::Mention:
                ++s.mentions;
                break;
            case ContactKind::DirectMessage:
                ++s.direct_messages;
                break;
        }
        actors[e.honeypot_id].insert(e.actor_id);
    }
    for (std::size_t h = 0; h < stats.size(); ++h) {
        stats[h].distinct_actors = actors[h].size();
        stats[h].daily_follow_requests = static_cast<double>(stats[h].follow_requests) / static_cast<double>(n_days);
    }
    return stats;
}

}  // namespace honeytrap::simnet
