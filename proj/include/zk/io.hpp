#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "zk/grid.hpp"
#include "zk/records.hpp"

namespace zk {

/// Versioned CSV of diagnostics records; full double precision so rows
/// round-trip bitwise.
void write_diagnostics_csv(const std::string& path,
                           const std::vector<DiagnosticsRecord>& records);
std::vector<DiagnosticsRecord> read_diagnostics_csv(const std::string& path);

std::string diagnostics_csv_text(const std::vector<DiagnosticsRecord>& records);
std::vector<DiagnosticsRecord> parse_diagnostics_csv(const std::string& text);

/// Binary field snapshot: magic "ZKF1", little-endian u32 dims
/// (nx+1, ny, nz-or-1), then row-major f64 values.
struct Snapshot {
    std::uint32_t nxp = 0, ny = 0, nz = 0;
    std::vector<double> values;
};
void write_snapshot(const std::string& path, const Field& field);
Snapshot read_snapshot(const std::string& path);
Field snapshot_to_field(const Snapshot& snap, const GridPtr& grid,
                        BcTag tag = BcTag::unconstrained);

/// Run manifest: config echo, format versions, per-file byte counts and
/// FNV-1a checksums.  Written once at run start (empty file table) and again
/// at the end with the final table.
void write_manifest(const std::string& dir, const std::string& config_echo,
                    const std::map<std::string, std::string>& files);

/// Checksum helper for manifest entries ("<bytes>:<fnv1a64 hex>").
std::string file_checksum(const std::string& path);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace zk
