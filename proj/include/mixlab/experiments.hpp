#ifndef MIXLAB_EXPERIMENTS_HPP
#define MIXLAB_EXPERIMENTS_HPP

#include <string>

#include "json.hpp"

namespace mixlab::experiments {

inline constexpr const char* version = "0.1.0";

// Runs the experiment named in config["experiment"] and writes
// manifest.json, summary.json and the trace CSVs under out_dir. Returns the
// summary. Schema violations raise std::invalid_argument, numerical guards
// raise GuardError; the CLI maps them to exit codes 2 and 3.
nlohmann::json run(const nlohmann::json& config, const std::string& out_dir);

// kind -> {description, required, optional} for every experiment
nlohmann::json list();

// 64-bit FNV-1a, hex-encoded; the manifest content hash
std::string fnv1a_hex(const std::string& data);

}  // namespace mixlab::experiments

#endif
