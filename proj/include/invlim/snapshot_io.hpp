#pragma once

#include "invlim/field.hpp"
#include "invlim/solver.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace invlim {

/// Binary snapshot: "INVLSNAP", uint32 version, uint32 N (little endian),
/// then N*N little-endian float64 values, row-major. The sidecar
/// `<path>.json` carries N, box_length, t and the layout.
inline constexpr std::uint32_t kSnapshotVersion = 1;

void write_snapshot(const std::filesystem::path& path, const ScalarField& field, double t);

struct Snapshot {
    ScalarField field;
    double t = 0.0;
};

/// Reads the binary file and its sidecar; throws IoError on malformed input.
Snapshot read_snapshot(const std::filesystem::path& path);

/// Header of the diagnostics CSV.
std::string diagnostics_csv_header();
std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& records);
void write_diagnostics_csv(const std::filesystem::path& path, const std::vector<DiagnosticsRecord>& records);
std::vector<DiagnosticsRecord> read_diagnostics_csv(const std::filesystem::path& path);

} // namespace invlim
