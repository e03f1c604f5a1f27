#pragma once

// Text formats produced and consumed by the simulation stage.
//
// Config: flat `key = value` lines, `#` starts a comment. Keys mirror the
// SimConfig fields; behavior keys are prefixed `spammer.` or `legit.`.
//
// Profiles (one record per line, tab separated, after a `#honeytrap-profiles v1`
// marker and a header row):
//   id name creation_date harvest_date followers followings tweet_count
//   has_profile_image honeypot_interactions class tweets
// `tweets` is a `|`-separated list of `day:urls:mentions:retweet:tok tok ...`.
//
// Events: CSV with header `day,actor_id,honeypot_id,kind`.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "honeytrap/simnet.hpp"

namespace honeytrap::simnet {

inline constexpr int kConfigVersion = 1;

/// Unknown keys and malformed values are ConfigErrors. Keys that are absent
/// keep their SimConfig defaults.
[[nodiscard]] SimConfig parse_config(std::istream& in);
[[nodiscard]] SimConfig load_config(const std::filesystem::path& path);
/// Canonical dump of every key; parse_config(serialize_config(c)) == c.
[[nodiscard]] std::string serialize_config(const SimConfig& config);

void write_profiles(std::ostream& out, std::span<const Profile> profiles);
[[nodiscard]] std::vector<Profile> read_profiles(std::istream& in);

void write_events(std::ostream& out, std::span<const InteractionEvent> events);
[[nodiscard]] std::vector<InteractionEvent> read_events(std::istream& in);

/// CSV `honeypot_id,follow_requests,mentions,direct_messages,distinct_actors,daily_follow_requests`.
void write_honeypot_stats(std::ostream& out, std::span<const HoneypotStats> stats);

}  // namespace honeytrap::simnet
