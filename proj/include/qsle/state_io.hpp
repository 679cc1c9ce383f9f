#pragma once

#include "qsle/state.hpp"

#include <string>

namespace qsle {

/// Parses the state file format: a UTF-8 JSON document
///   {"dims": [d1,...,dK], "amplitudes": [[re, im], ...]}
/// with amplitudes row-major, first subsystem slowest. The reader normalizes
/// and rejects zero-norm input. ValidationError messages name the first
/// invalid field.
PureState parse_state_json(const std::string& text);

/// Reads and parses a state file; ValidationError on missing/bad content.
PureState load_state(const std::string& path);

std::string state_to_json(const PureState& state);
void save_state(const PureState& state, const std::string& path);

} // namespace qsle
