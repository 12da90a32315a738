#pragma once

#include <string>
#include <variant>

#include <json.hpp>

#include "icregime/model.hpp"
#include "icregime/regimes.hpp"
#include "icregime/regions.hpp"
#include "icregime/verifier.hpp"

namespace icregime::json_io {

using ChannelSpec =
    std::variant<model::GaussianIC, model::TwoOutputSystem,
                 model::DiscreteTwoOutputChannel, model::DiscreteBroadcastChannel>;

// Parses a channel-spec document: top-level `type` selects the shape.
// Malformed input throws UsageError naming the offending field. Parsed laws
// are checked at the looser file tolerance and renormalized before use.
ChannelSpec parse_channel_spec(const nlohmann::json& doc);
ChannelSpec load_channel_file(const std::string& path);

// Rounds v to `precision` decimal places so emitted reports are stable.
double round_to(double v, int precision);

nlohmann::json to_json(const regimes::MIInequality& ineq);
nlohmann::json to_json(const regimes::ConditionSet& set);
nlohmann::json to_json(const regions::RegionSpec& region, int precision);

std::string digest_hex(std::uint64_t digest);

}  // namespace icregime::json_io
