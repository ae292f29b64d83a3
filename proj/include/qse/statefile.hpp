#pragma once

#include <stdexcept>
#include <string>

#include "qse/channel.hpp"
#include "qse/state.hpp"

namespace qse {

// Raised for unreadable, unparsable, or schema-violating files. Distinct from
// ContractError so the CLI can map it to its own exit code.
struct FileFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Versioned JSON state files: {format_version, layout, matrix, comment?}.
// Parsing is strict: unknown fields are rejected, and the matrix must satisfy
// the State invariants or the load fails naming the violated invariant.
State load_state_file(const std::string& path);
void save_state_file(const std::string& path, const State& s, const std::string& comment = "");
std::string state_to_json(const State& s, const std::string& comment = "");
State state_from_json(const std::string& text);

void save_channel_file(const std::string& path, const Channel& c,
                       const std::string& comment = "");
Channel load_channel_file(const std::string& path);

}  // namespace qse
