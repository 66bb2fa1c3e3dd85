#pragma once

#include <map>
#include <string>

#include "taea/engine.hpp"

namespace taea {

// Flat key=value settings with dotted module prefixes ("trust.tau_s=0.1").
// Lines starting with '#' are comments. Unknown keys are rejected when applied
// to a RunConfig.
using KeyValueMap = std::map<std::string, std::string>;

KeyValueMap parse_key_values(const std::string& text);
KeyValueMap load_key_value_file(const std::string& path);

// Applies settings on top of the given config; throws on unknown keys or
// malformed values.
void apply_settings(RunConfig& config, const KeyValueMap& settings);

// Fully resolved config as sorted key=value lines; parsing it back reproduces
// the run bit-identically.
std::string serialize_config(const RunConfig& config);

// SHA-1 of a git-style blob header plus the content.
std::string content_hash(const std::string& content);

// serialize_config plus a hash comment header.
std::string write_manifest(const RunConfig& config);

RunConfig config_from_settings(const KeyValueMap& settings);

} // namespace taea
