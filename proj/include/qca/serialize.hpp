#pragma once

#include <string>
#include <utility>

#include <json.hpp>

#include "qca/evolution.hpp"
#include "qca/mps_mpo.hpp"

namespace qca {

// Self-describing binary container for tensor chains: an 8-byte magic, a kind
// byte, a JSON metadata blob, then per site a rank byte, u64 extents and the
// complex<double> payload (little-endian re/im pairs, row-major).

void save_mpo(const std::string& path, const Mpo& m, const nlohmann::json& meta = {});
std::pair<Mpo, nlohmann::json> load_mpo(const std::string& path);

void save_mps(const std::string& path, const Mps& s, const nlohmann::json& meta = {});
std::pair<Mps, nlohmann::json> load_mps(const std::string& path);

/// Checkpoint: the row MPO plus time/offset metadata and caller extras.
void save_row_state(const std::string& path, const RowState& s,
                    const nlohmann::json& extra = {});
std::pair<RowState, nlohmann::json> load_row_state(const std::string& path);

}  // namespace qca
