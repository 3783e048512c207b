#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "flans/diag_record.hpp"
#include "flans/field.hpp"
#include "flans/integrator.hpp"

namespace flans {

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

/// Parsed config: the validated SimConfig plus the raw key/value echo.
struct LoadedConfig {
  SimConfig sim;
  std::map<std::string, std::string> echo;
};

/// Line-oriented "key = value" with '#' comments. Required keys: dim, N,
/// alpha, nu, s, dt, t_end, init. Optional: scheme (etd2rk | exp-euler),
/// galerkin_N, snapshot_every, amplitude, seed, decay_exponent, band,
/// out_dir. init is one of taylor-green, shear, random, snapshot:<path>.
/// The regime is inferred from (dim, s). Throws MissingKey, BadValue, Io.
LoadedConfig parse_config(const std::filesystem::path& path);
LoadedConfig parse_config_text(const std::string& text, const std::string& origin = "<string>");

/// Throws RegimeViolation unless s >= dim/4 (hypothesis of the global theory).
void require_global_regime(const SimConfig& config);

// ---------------------------------------------------------------------------
// Snapshots
//
// Little-endian layout:
//   "FLNS" | u32 version=1 | u32 dim | u32 N | f64 alpha | f64 nu | f64 s | f64 t
//   | dim * N^dim pairs of f64 (re, im), components outermost, FFT order.
// ---------------------------------------------------------------------------

inline constexpr std::uint32_t kSnapshotVersion = 1;

struct SnapshotMeta {
  double alpha = 0.0;
  double nu = 0.0;
  double s = 0.0;
  double t = 0.0;
};

void write_snapshot(const SpectralField& field, const SnapshotMeta& meta, const std::filesystem::path& path);

/// Validates magic, version, payload length and hermitian symmetry.
/// Throws BadMagic, VersionMismatch, CorruptPayload, Io.
std::pair<SpectralField, SnapshotMeta> read_snapshot(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Header row then one line per row, values printed with 17 significant
/// digits. Throws EmptyOutput for a table without rows, Io on write failure.
void emit_csv(const CsvTable& table, const std::filesystem::path& path);
void emit_csv(const std::vector<DiagRecord>& records, const std::filesystem::path& path);
std::string format_csv(const CsvTable& table);

CsvTable diag_table(const std::vector<DiagRecord>& records);
/// Parses text produced by format_csv.
CsvTable parse_csv(const std::string& text);

// ---------------------------------------------------------------------------
// Run manifest
// ---------------------------------------------------------------------------

struct ManifestEntry {
  std::string path;  // relative to the manifest directory
  std::uintmax_t bytes = 0;
  std::string sha256;
};

struct RunManifest {
  std::map<std::string, std::string> config;
  std::string version;
  std::string command;
  std::string started_utc;
  std::string finished_utc;
  std::vector<ManifestEntry> outputs;
};

/// Hex SHA-256 of a file's contents.
std::string file_sha256(const std::filesystem::path& path);

/// Adds an inventory entry (size and checksum) for a file under dir.
void add_output(RunManifest& manifest, const std::filesystem::path& dir, const std::filesystem::path& file);

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);
RunManifest read_manifest(const std::filesystem::path& path);

std::string utc_timestamp();
const char* version_string() noexcept;

}  // namespace flans
