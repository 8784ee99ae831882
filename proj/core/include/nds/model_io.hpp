#pragma once

#include <string>

#include "nds/model.hpp"

namespace nds {

/// Load a model from a JSON file.
///
/// Schema: {"subsystems": [ ... ], "phi": { ... }} where each subsystem
/// carries the integer fields n_x, n_e, n_z, n_v, n_u, n_y and the ten
/// matrices as row-major nested arrays (an empty dimension is an empty
/// array). phi is either {"rows": R, "cols": C, "entries": [[r,c,val],...]}
/// with 0-based indices, or a dense nested array which is converted to
/// sparse triplets on ingest.
///
/// Throws ParseError for malformed files and ValidationError when the data
/// parses but is structurally inconsistent.
NdsModel load_model(const std::string& path);

/// Parse the same schema from an in-memory JSON string.
NdsModel parse_model(const std::string& text);

/// Save in canonical form (sparse phi, entries sorted by row then column).
/// Doubles are written with round-trip precision, so save followed by load
/// reproduces the model bit-exactly for finite values.
void save_model(const NdsModel& model, const std::string& path);

/// Serialize to a JSON string (same canonical form as save_model).
std::string model_to_json(const NdsModel& model);

}  // namespace nds
