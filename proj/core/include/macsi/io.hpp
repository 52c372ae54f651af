#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "macsi/model.hpp"
#include "macsi/region.hpp"

namespace macsi {

struct LoadedModel {
  MacModel model;
  std::vector<std::string> warnings;  // e.g. dropped quantizer labels
};

// Channel-spec document: a JSON object with fields
//   states, prior, inputs_a, inputs_b, outputs, quantizer_a, quantizer_b, kernel
// Alphabet fields are either an integer size or an array of string labels;
// kernel is nested arrays indexed (s, x_a, x_b) -> distribution over y.
// Quantizer images are re-indexed densely; unused labels drop with a warning.
// Throws ValidationError with line/field context on malformed documents.
LoadedModel parse_channel_spec(const std::string& text);
LoadedModel load_channel_spec(const std::string& path);

// Canonical document for the model; parsing it back yields a bit-identical
// MacModel.
std::string export_channel_spec(const MacModel& model);

// Policy document: {"pi_a": [[..]..], "pi_b": [[..]..]}, one row per
// observation symbol.
TeamPolicy parse_team_policy(const std::string& text, const MacModel& model);
TeamPolicy load_team_policy(const std::string& path, const MacModel& model);
std::string export_team_policy(const TeamPolicy& policy);

// Polygon export: a header line with tool version and seed, then one
// counterclockwise vertex per line as two decimal-text fields "r_a r_b".
std::string format_polygon(const Polygon& region, std::uint64_t seed);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Shortest decimal text that round-trips the double (printf %.17g trimmed).
std::string format_double(double v);

}  // namespace macsi
