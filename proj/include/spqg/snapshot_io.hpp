#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "spqg/spectral_field.hpp"

namespace spqg {

/// SPQG snapshot layout, all little-endian:
///   "SPQG" | u32 version | u32 dim | u32 n[dim] | f64 L[dim] | u32 components |
///   (f64 re, f64 im) per coefficient, components outermost, wavevectors in
///   flat grid order (axis 0 slowest, FFT index order per axis).
inline constexpr std::uint32_t kSnapshotVersion = 1;

void write_snapshot(std::ostream& out, const SpectralField& field);
SpectralField read_snapshot(std::istream& in);

void write_snapshot(const std::filesystem::path& path, const SpectralField& field);
SpectralField read_snapshot(const std::filesystem::path& path);

/// Flat key=value sidecar written next to snapshots (sorted keys).
using Metadata = std::map<std::string, std::string>;
void write_metadata(const std::filesystem::path& path, const Metadata& meta);
Metadata read_metadata(const std::filesystem::path& path);

}  // namespace spqg
