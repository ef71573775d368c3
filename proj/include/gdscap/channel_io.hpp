#pragma once

#include "gdscap/channel.hpp"
#include "gdscap/gds.hpp"

#include <string>

namespace gdscap {

// JSON schema for a channel:
//   { "name": str, "dim_in": int, "dim_out": int,
//     "kraus": [ [ [ [re, im], ... row ... ], ... rows ... ], ... operators ... ] }
// and for a direct-sum channel: { "name": str, "subchannels": [ channel, ... ] }.
// Malformed input raises channel_error with a human-readable message.

KrausChannel channel_from_json_text(const std::string& text);
std::string channel_to_json_text(const KrausChannel& ch, int indent = 2);

// pad_kraus: zero-pad subchannels to a common Kraus count; without it a
// mismatch is a validation error.
GdsChannel gds_from_json_text(const std::string& text, bool pad_kraus = false);
std::string gds_to_json_text(const GdsChannel& g, int indent = 2);

// Auto-detects the two schemas by the presence of "subchannels".
bool json_text_is_gds(const std::string& text);

}  // namespace gdscap
