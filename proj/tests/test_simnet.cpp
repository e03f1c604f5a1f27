#include <gtest/gtest.h>

#include <map>
#include <set>
#include <sstream>

#include "honeytrap/errors.hpp"
#include "honeytrap/simnet.hpp"
#include "honeytrap/simnet_io.hpp"

using namespace honeytrap;
using namespace honeytrap::simnet;

namespace {

std::string dump(const SimulationResult& r) {
    std::ostringstream out;
    write_profiles(out, r.profiles);
    write_events(out, r.events);
    return out.str();
}

}  // namespace

TEST(Simulation, NoAgentsNoOutput) {
    SimConfig c;
    c.n_legitimate = 0;
    c.n_spammer = 0;
    const auto r = run_simulation(c);
    EXPECT_TRUE(r.profiles.empty());
    EXPECT_TRUE(r.events.empty());
}

TEST(Simulation, Deterministic) {
    SimConfig c;
    c.n_legitimate = 40;
    c.n_spammer = 20;
    c.seed = 1234;
    EXPECT_EQ(dump(run_simulation(c)), dump(run_simulation(c)));
    auto other = c;
    other.seed = 1235;
    EXPECT_NE(dump(run_simulation(c)), dump(run_simulation(other)));
}

TEST(Simulation, Seed42SpammersGetTrapped) {
    const auto r = run_simulation(SimConfig{});
    ASSERT_EQ(r.profiles.size(), 300u);
    std::size_t trapped_spammers = 0;
    for (const auto& p : r.profiles) {
        if (p.truth_label == Label::Malicious && p.honeypot_interactions >= 1) {
            ++trapped_spammers;
        }
    }
    EXPECT_GE(trapped_spammers, 1u);
}

TEST(Simulation, LabelSoundnessAndEventClosure) {
    SimConfig c;
    const auto r = run_simulation(c);
    std::size_t spammers = 0;
    std::map<std::uint64_t, std::set<std::uint64_t>> contacted;
    std::set<std::uint64_t> ids;
    for (const auto& p : r.profiles) {
        ids.insert(p.id);
        spammers += p.truth_label == Label::Malicious ? 1 : 0;
    }
    EXPECT_EQ(spammers, static_cast<std::size_t>(c.n_spammer));
    EXPECT_EQ(ids.size(), r.profiles.size());
    for (const auto& e : r.events) {
        EXPECT_TRUE(ids.count(e.actor_id)) << e.actor_id;
        EXPECT_LT(e.honeypot_id, static_cast<std::uint64_t>(c.n_honeypots));
        EXPECT_GE(e.day, 0);
        EXPECT_LT(e.day, c.n_days);
        contacted[e.actor_id].insert(e.honeypot_id);
    }
    for (const auto& p : r.profiles) {
        EXPECT_EQ(p.honeypot_interactions, contacted[p.id].size()) << p.id;
        EXPECT_LE(p.tweets.size(), static_cast<std::size_t>(c.retained_tweets));
        EXPECT_LE(p.creation_date, c.start_date);
        EXPECT_EQ(p.harvest_date, c.harvest_date());
    }
    EXPECT_TRUE(std::is_sorted(r.events.begin(), r.events.end(), [](const auto& a, const auto& b) {
        return std::tie(a.day, a.actor_id, a.honeypot_id) < std::tie(b.day, b.actor_id, b.honeypot_id);
    }));
}

TEST(Simulation, SpammerUrlRateRealized) {
    SimConfig c;
    c.spammer_camouflage = 0.0;
    c.n_spammer = 100;
    const auto r = run_simulation(c);
    double urls = 0, tweets = 0;
    for (const auto& p : r.profiles) {
        if (p.truth_label != Label::Malicious) {
            continue;
        }
        for (const auto& t : p.tweets) {
            urls += t.n_urls;
            tweets += 1;
        }
    }
    ASSERT_GT(tweets, 0);
    EXPECT_NEAR(urls / tweets, c.spammer.url_rate, 0.2 * c.spammer.url_rate);
}

TEST(Simulation, InvalidConfig) {
    SimConfig c;
    c.n_spammer = -1;
    EXPECT_THROW((void)run_simulation(c), ConfigError);
    c = SimConfig{};
    c.n_days = 0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = SimConfig{};
    c.spammer.retweet_prob = 1.5;
    EXPECT_THROW(c.validate(), ConfigError);
    c = SimConfig{};
    c.control_fraction = -0.1;
    EXPECT_THROW(c.validate(), ConfigError);
    EXPECT_NO_THROW(SimConfig{}.validate());
}

TEST(Harvest, NothingTrapped) {
    const auto r = run_simulation(SimConfig{});
    EXPECT_TRUE(harvest(r.profiles, {}, 10, 1, 0.0).empty());
    EXPECT_TRUE(harvest(r.profiles, r.events, 0, 1, 0.3).empty());
}

TEST(Harvest, Seed42Cap90) {
    SimConfig c;
    const auto r = run_simulation(c);
    const auto h = harvest(r.profiles, r.events, 90, c.seed, c.control_fraction);
    ASSERT_EQ(h.size(), 90u);
    std::set<std::uint64_t> actors;
    for (const auto& e : r.events) {
        actors.insert(e.actor_id);
    }
    std::size_t mal = 0;
    for (const auto& p : h) {
        mal += p.truth_label == Label::Malicious ? 1 : 0;
        // controls are always legitimate
        EXPECT_TRUE(actors.count(p.id) || p.truth_label == Label::Legitimate);
    }
    EXPECT_GT(mal, 0u);
    EXPECT_LT(mal, 90u);
    EXPECT_TRUE(std::is_sorted(h.begin(), h.end(), [](const auto& a, const auto& b) { return a.id < b.id; }));
    EXPECT_EQ(h, harvest(r.profiles, r.events, 90, c.seed, c.control_fraction));
}

TEST(Harvest, LargeCapReturnsAllTrapped) {
    const auto r = run_simulation(SimConfig{});
    std::set<std::uint64_t> actors;
    for (const auto& e : r.events) {
        actors.insert(e.actor_id);
    }
    EXPECT_EQ(harvest(r.profiles, r.events, 100000, 3, 0.0).size(), actors.size());
}

TEST(HoneypotStats, NoEvents) {
    const auto s = honeypot_stats({}, 5, 60);
    ASSERT_EQ(s.size(), 5u);
    for (const auto& h : s) {
        EXPECT_EQ(h.daily_follow_requests, 0.0);
    }
}

TEST(HoneypotStats, ThirtyRequestsOverSixtyDays) {
    std::vector<InteractionEvent> events;
    for (std::uint64_t i = 0; i < 30; ++i) {
        events.push_back({static_cast<std::int64_t>(i), i, 3, ContactKind::FollowRequest});
    }
    events.push_back({1, 99, 3, ContactKind::Mention});
    const auto s = honeypot_stats(events, 4, 60);
    EXPECT_EQ(s[3].daily_follow_requests, 0.5);
    EXPECT_EQ(s[3].follow_requests, 30u);
    EXPECT_EQ(s[3].mentions, 1u);
    EXPECT_EQ(s[3].distinct_actors, 31u);
    EXPECT_EQ(s[0].daily_follow_requests, 0.0);
}

TEST(HoneypotStats, Seed42MatchesTally) {
    SimConfig c;
    const auto r = run_simulation(c);
    const auto s = honeypot_stats(r.events, c.n_honeypots, c.n_days);
    // tally per (honeypot, day), then average the daily counts
    std::map<std::pair<std::uint64_t, std::int64_t>, int> per_day;
    for (const auto& e : r.events) {
        if (e.kind == ContactKind::FollowRequest) {
            ++per_day[{e.honeypot_id, e.day}];
        }
    }
    for (std::uint64_t h = 0; h < static_cast<std::uint64_t>(c.n_honeypots); ++h) {
        double sum = 0;
        for (std::int64_t d = 0; d < c.n_days; ++d) {
            const auto it = per_day.find({h, d});
            sum += it == per_day.end() ? 0 : it->second;
        }
        EXPECT_NEAR(s[h].daily_follow_requests, sum / static_cast<double>(c.n_days), 1e-12);
    }
}
