#include "honeytrap/simnet_io.hpp"

#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "honeytrap/errors.hpp"
#include "text.hpp"

namespace honeytrap::simnet {

namespace {

struct ConfigKey {
    std::string name;
    std::function<void(SimConfig&, std::string_view)> set;
    std::function<std::string(const SimConfig&)> get;
};

template <typename Int>
Int parse_int_value(std::string_view key, std::string_view value) {
    const auto parsed = text::parse_int<Int>(value);
    if (!parsed) {
        throw ConfigError(fmt::format("config key '{}': '{}' is not an integer", key, value));
    }
    return *parsed;
}

double parse_double_value(std::string_view key, std::string_view value) {
    const auto parsed = text::parse_double(value);
    if (!parsed) {
        throw ConfigError(fmt::format("config key '{}': '{}' is not a number", key, value));
    }
    return *parsed;
}

template <typename Field>
ConfigKey int_key(std::string name, Field SimConfig::*field) {
    return {name,
            [name, field](SimConfig& c, std::string_view v) { c.*field = parse_int_value<Field>(name, v); },
            [field](const SimConfig& c) { return std::to_string(c.*field); }};
}

ConfigKey double_key(std::string name, double SimConfig::*field) {
    return {name, [name, field](SimConfig& c, std::string_view v) { c.*field = parse_double_value(name, v); },
            [field](const SimConfig& c) { return text::format_double(c.*field); }};
}

void add_behavior_keys(std::vector<ConfigKey>& keys, const std::string& prefix,
                       BehaviorParams SimConfig::*group) {
    const auto add_double = [&](const char* field_name, double BehaviorParams::*field) {
        const std::string name = prefix + "." + field_name;
        keys.push_back({name,
                        [name, group, field](SimConfig& c, std::string_view v) {
                            (c.*group).*field = parse_double_value(name, v);
                        },
                        [group, field](const SimConfig& c) { return text::format_double((c.*group).*field); }});
    };
    const auto add_int = [&](const char* field_name, std::int64_t BehaviorParams::*field) {
        const std::string name = prefix + "." + field_name;
        keys.push_back({name,
                        [name, group, field](SimConfig& c, std::string_view v) {
                            (c.*group).*field = parse_int_value<std::int64_t>(name, v);
                        },
                        [group, field](const SimConfig& c) { return std::to_string((c.*group).*field); }});
    };
    add_double("tweets_per_day", &BehaviorParams::tweets_per_day);
    add_double("url_rate", &BehaviorParams::url_rate);
    add_double("mention_rate", &BehaviorParams::mention_rate);
    add_double("retweet_prob", &BehaviorParams::retweet_prob);
    add_double("template_reuse_prob", &BehaviorParams::template_reuse_prob);
    add_double("follow_rate", &BehaviorParams::follow_rate);
    add_double("honeypot_contact_prob", &BehaviorParams::honeypot_contact_prob);
    add_double("follower_gain_rate", &BehaviorParams::follower_gain_rate);
    add_double("profile_image_prob", &BehaviorParams::profile_image_prob);
    add_int("account_age_min", &BehaviorParams::account_age_min);
    add_int("account_age_max", &BehaviorParams::account_age_max);
}

const std::vector<ConfigKey>& config_keys() {
    static const std::vector<ConfigKey> keys = [] {
        std::vector<ConfigKey> k;
        k.push_back(int_key("seed", &SimConfig::seed));
        k.push_back(int_key("n_legitimate", &SimConfig::n_legitimate));
        k.push_back(int_key("n_spammer", &SimConfig::n_spammer));
        k.push_back(int_key("n_honeypots", &SimConfig::n_honeypots));
        k.push_back(int_key("n_days", &SimConfig::n_days));
        k.push_back(int_key("harvest_cap", &SimConfig::harvest_cap));
        k.push_back(double_key("control_fraction", &SimConfig::control_fraction));
        k.push_back(double_key("spammer_camouflage", &SimConfig::spammer_camouflage));
        k.push_back(double_key("camouflage_contact_scale", &SimConfig::camouflage_contact_scale));
        k.push_back(double_key("legit_promoter_fraction", &SimConfig::legit_promoter_fraction));
        k.push_back(double_key("behavior_jitter", &SimConfig::behavior_jitter));
        k.push_back(int_key("retained_tweets", &SimConfig::retained_tweets));
        k.push_back(int_key("vocabulary_size", &SimConfig::vocabulary_size));
        k.push_back(double_key("follow_request_weight", &SimConfig::follow_request_weight));
        k.push_back(double_key("mention_weight", &SimConfig::mention_weight));
        k.push_back(double_key("direct_message_weight", &SimConfig::direct_message_weight));
        k.push_back({"start_date",
                     [](SimConfig& c, std::string_view v) {
                         try {
                             c.start_date = parse_date(v);
                         } catch (const ParseError& e) {
                             throw ConfigError(fmt::format("config key 'start_date': {}", e.what()));
                         }
                     },
                     [](const SimConfig& c) { return format_date(c.start_date); }});
        add_behavior_keys(k, "spammer", &SimConfig::spammer);
        add_behavior_keys(k, "legit", &SimConfig::legit);
        return k;
    }();
    return keys;
}

std::string field(std::string_view s) { return std::string(s); }

void check_token(std::string_view token) {
    if (token.empty() || token.find_first_of(" \t\r\n|") != std::string_view::npos) {
        throw DomainError(fmt::format("tweet token '{}' cannot be written: empty or contains a separator", token));
    }
}

}  // namespace

SimConfig parse_config(std::istream& in) {
    SimConfig config;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (const auto hash = view.find('#'); hash != std::string_view::npos) {
            view = view.substr(0, hash);
        }
        view = text::trim(view);
        if (view.empty()) {
            continue;
        }
        const auto eq = view.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(fmt::format("config line {}: expected 'key = value'", line_no));
        }
        const auto key = text::trim(view.substr(0, eq));
        const auto value = text::trim(view.substr(eq + 1));
        if (key == "config_version") {
            if (parse_int_value<int>(key, value) != kConfigVersion) {
                throw ConfigError(fmt::format("config line {}: unsupported config_version {}", line_no, value));
            }
            continue;
        }
        bool known = false;
        for (const auto& k : config_keys()) {
            if (k.name == key) {
                k.set(config, value);
                known = true;
                break;
            }
        }
        if (!known) {
            throw ConfigError(fmt::format("config line {}: unknown key '{}'", line_no, key));
        }
    }
    return config;
}

SimConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError(fmt::format("cannot open config file '{}'", path.string()));
    }
    return parse_config(in);
}

std::string serialize_config(const SimConfig& config) {
    std::string out = fmt::format("config_version = {}\n", kConfigVersion);
    for (const auto& k : config_keys()) {
        out += fmt::format("{} = {}\n", k.name, k.get(config));
    }
    return out;
}

void write_profiles(std::ostream& out, std::span<const Profile> profiles) {
    out << "#honeytrap-profiles v1\n";
    out << "id\tname\tcreation_date\tharvest_date\tfollowers\tfollowings\ttweet_count\t"
           "has_profile_image\thoneypot_interactions\tclass\ttweets\n";
    for (const auto& p : profiles) {
        if (p.name.find_first_of("\t\r\n") != std::string::npos) {
            throw DomainError(fmt::format("profile {} name contains a tab or newline", p.id));
        }
        out << p.id << '\t' << p.name << '\t' << format_date(p.creation_date) << '\t'
            << format_date(p.harvest_date) << '\t' << p.followers << '\t' << p.followings << '\t'
            << p.tweet_count << '\t' << (p.has_profile_image ? 1 : 0) << '\t' << p.honeypot_interactions
            << '\t' << label_name(p.truth_label) << '\t';
        for (std::size_t i = 0; i < p.tweets.size(); ++i) {
            const Tweet& t = p.tweets[i];
            if (i > 0) {
                out << '|';
            }
            out << t.day << ':' << t.n_urls << ':' << t.n_mentions << ':' << (t.is_retweet ? 1 : 0) << ':';
            for (std::size_t j = 0; j < t.tokens.size(); ++j) {
                check_token(t.tokens[j]);
                out << (j > 0 ? " " : "") << t.tokens[j];
            }
        }
        out << '\n';
    }
}

std::vector<Profile> read_profiles(std::istream& in) {
    std::vector<Profile> profiles;
    std::string line;
    std::size_t line_no = 0;
    bool seen_marker = false;
    bool seen_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (!seen_marker) {
            if (line != "#honeytrap-profiles v1") {
                throw ParseError("not a profiles file: missing '#honeytrap-profiles v1' marker", line_no);
            }
            seen_marker = true;
            continue;
        }
        if (!seen_header) {
            seen_header = true;
            continue;
        }
        if (line.empty()) {
            continue;
        }
        const auto cols = text::split(line, '\t');
        if (cols.size() != 11) {
            throw ParseError(fmt::format("expected 11 tab-separated fields, found {}", cols.size()), line_no);
        }
        const auto u64 = [&](std::string_view s, const char* what) {
            const auto v = text::parse_int<std::uint64_t>(s);
            if (!v) {
                throw ParseError(fmt::format("field '{}': '{}' is not a non-negative integer", what, s), line_no);
            }
            return *v;
        };
        Profile p;
        p.id = u64(cols[0], "id");
        p.name = field(cols[1]);
        try {
            p.creation_date = parse_date(cols[2]);
            p.harvest_date = parse_date(cols[3]);
            p.truth_label = parse_label(cols[9]);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line_no);
        }
        p.followers = u64(cols[4], "followers");
        p.followings = u64(cols[5], "followings");
        p.tweet_count = u64(cols[6], "tweet_count");
        const auto image = u64(cols[7], "has_profile_image");
        if (image > 1) {
            throw ParseError("field 'has_profile_image' must be 0 or 1", line_no);
        }
        p.has_profile_image = image == 1;
        p.honeypot_interactions = u64(cols[8], "honeypot_interactions");
        if (!cols[10].empty()) {
            for (const auto encoded : text::split(cols[10], '|')) {
                const auto parts = text::split(encoded, ':');
                if (parts.size() < 5) {
                    throw ParseError(fmt::format("malformed tweet '{}'", encoded), line_no);
                }
                Tweet t;
                const auto day = text::parse_int<std::int64_t>(parts[0]);
                if (!day) {
                    throw ParseError(fmt::format("malformed tweet day '{}'", parts[0]), line_no);
                }
                t.day = *day;
                t.n_urls = static_cast<std::uint32_t>(u64(parts[1], "tweet urls"));
                t.n_mentions = static_cast<std::uint32_t>(u64(parts[2], "tweet mentions"));
                const auto rt = u64(parts[3], "tweet retweet");
                if (rt > 1) {
                    throw ParseError("tweet retweet flag must be 0 or 1", line_no);
                }
                t.is_retweet = rt == 1;
                // tokens are everything after the fourth colon
                std::size_t offset = 0;
                for (int i = 0; i < 4; ++i) {
                    offset = encoded.find(':', offset) + 1;
                }
                const auto tokens = encoded.substr(offset);
                if (!tokens.empty()) {
                    for (const auto tok : text::split(tokens, ' ')) {
                        if (tok.empty()) {
                            throw ParseError("empty tweet token", line_no);
                        }
                        t.tokens.emplace_back(tok);
                    }
                }
                p.tweets.push_back(std::move(t));
            }
        }
        if (p.tweet_count < p.tweets.size()) {
            throw ParseError("tweet_count is smaller than the number of listed tweets", line_no);
        }
        if (p.harvest_date < p.creation_date) {
            throw ParseError("harvest_date precedes creation_date", line_no);
        }
        profiles.push_back(std::move(p));
    }
    if (!seen_marker) {
        throw ParseError("empty profiles file", 0);
    }
    return profiles;
}

void write_events(std::ostream& out, std::span<const InteractionEvent> events) {
    out << "day,actor_id,honeypot_id,kind\n";
    for (const auto& e : events) {
        out << e.day << ',' << e.actor_id << ',' << e.honeypot_id << ',' << contact_kind_name(e.kind) << '\n';
    }
}

std::vector<InteractionEvent> read_events(std::istream& in) {
    std::vector<InteractionEvent> events;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line_no == 1) {
            if (line != "day,actor_id,honeypot_id,kind") {
                throw ParseError("events file must start with header 'day,actor_id,honeypot_id,kind'", line_no);
            }
            continue;
        }
        if (line.empty()) {
            continue;
        }
        const auto cols = text::split(line, ',');
        if (cols.size() != 4) {
            throw ParseError(fmt::format("expected 4 fields, found {}", cols.size()), line_no);
        }
        const auto day = text::parse_int<std::int64_t>(cols[0]);
        const auto actor = text::parse_int<std::uint64_t>(cols[1]);
        const auto honeypot = text::parse_int<std::uint64_t>(cols[2]);
        if (!day || !actor || !honeypot) {
            throw ParseError("malformed event row", line_no);
        }
        InteractionEvent e;
        e.day = *day;
        e.actor_id = *actor;
        e.honeypot_id = *honeypot;
        try {
            e.kind = parse_contact_kind(cols[3]);
        } catch (const ParseError& err) {
            throw ParseError(err.what(), line_no);
        }
        events.push_back(e);
    }
    return events;
}

void write_honeypot_stats(std::ostream& out, std::span<const HoneypotStats> stats) {
    out << "honeypot_id,follow_requests,mentions,direct_messages,distinct_actors,daily_follow_requests\n";
    for (const auto& s : stats) {
        out << s.honeypot_id << ',' << s.follow_requests << ',' << s.mentions << ',' << s.direct_messages << ','
            << s.distinct_actors << ',' << text::format_double(s.daily_follow_requests) << '\n';
    }
}

}  // namespace honeytrap::simnet
