#pragma once

#include <filesystem>
#include <variant>

#include "mvip/problems.hpp"

namespace mvip {

/// Self-describing instance container:
///
///   bytes [0, 8)    magic "MVIPINST"
///   bytes [8, 16)   header length H, unsigned 64-bit little-endian
///   bytes [16, 16+H) UTF-8 JSON header
///   remaining       payload: arrays of little-endian IEEE-754 float64
///
/// The header carries "format", "version", "family", scalar fields (seed, rho,
/// snr_db as a number or null for noiseless, ...) and an "arrays" list of
/// {name, shape, order: "row-major", dtype: "float64-le", offset} with byte
/// offsets relative to the payload start.
using Instance = std::variant<CompressedSensingInstance, LpaInstance, L2Instance>;

void save_instance(const std::filesystem::path& path, const Instance& instance);

/// Throws Error(Io) if the file cannot be read, Error(Parse) if it is malformed.
Instance load_instance(const std::filesystem::path& path);

}  // namespace mvip
