#include "flans/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "flans/error.hpp"
#include "flans/spectral.hpp"

namespace flans {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

void ensure_parent(const std::filesystem::path& path) {
  if (!path.has_parent_path()) return;
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + path.parent_path().string() + ": " + ec.message());
}

struct RawEntry {
  std::string value;
  int line = 0;
};

[[noreturn]] void bad_value(const std::string& key, const RawEntry& e, const std::string& why) {
  throw Error(ErrorCode::BadValue, "key '" + key + "' (line " + std::to_string(e.line) + "): " + why);
}

double parse_double(const std::string& key, const RawEntry& e) {
  double v = 0.0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) bad_value(key, e, "not a finite number: '" + e.value + "'");
  return v;
}

template <class Int>
Int parse_int(const std::string& key, const RawEntry& e) {
  Int v = 0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) bad_value(key, e, "not an integer: '" + e.value + "'");
  return v;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{"dim",    "N",     "alpha",          "nu",   "s",       "scheme",
                                          "dt",     "t_end", "galerkin_N",     "snapshot_every", "init",
                                          "amplitude", "seed", "decay_exponent", "band", "out_dir"};
  return keys;
}

// --- little-endian byte packing ---------------------------------------------

template <class T>
void put_le(std::vector<unsigned char>& buf, T value) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  U bits = std::bit_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    buf.push_back(static_cast<unsigned char>(bits & 0xFFu));
    bits >>= 8;
  }
}

template <class T>
T get_le(const unsigned char* p) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  U bits = 0;
  for (std::size_t i = sizeof(U); i-- > 0;) bits = (bits << 8) | static_cast<U>(p[i]);
  return std::bit_cast<T>(bits);
}

constexpr std::size_t kHeaderBytes = 4 + 3 * 4 + 4 * 8;

std::vector<unsigned char> read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

LoadedConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.string());
}

LoadedConfig parse_config_text(const std::string& text, const std::string& origin) {
  std::map<std::string, RawEntry> raw;
  std::istringstream lines(text);
  std::string line;
  int lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::BadValue, origin + " line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw Error(ErrorCode::BadValue, origin + " line " + std::to_string(lineno) + ": empty key");
    if (!known_keys().contains(key)) bad_value(key, RawEntry{value, lineno}, "unknown key");
    if (raw.contains(key)) bad_value(key, RawEntry{value, lineno}, "duplicate key");
    if (value.empty()) bad_value(key, RawEntry{value, lineno}, "empty value");
    raw[key] = RawEntry{value, lineno};
  }

  for (const char* key : {"dim", "N", "alpha", "nu", "s", "dt", "t_end", "init"}) {
    if (!raw.contains(key)) throw Error(ErrorCode::MissingKey, std::string(key));
  }

  LoadedConfig out;
  SimConfig& cfg = out.sim;
  const int dim = parse_int<int>("dim", raw["dim"]);
  const int n = parse_int<int>("N", raw["N"]);
  try {
    cfg.grid = make_grid(dim, n);
  } catch (const Error& e) {
    bad_value(e.code() == ErrorCode::BadDim ? "dim" : "N", raw[e.code() == ErrorCode::BadDim ? "dim" : "N"], e.what());
  }

  const double alpha = parse_double("alpha", raw["alpha"]);
  const double nu = parse_double("nu", raw["nu"]);
  const double s = parse_double("s", raw["s"]);
  if (alpha < 0.0) bad_value("alpha", raw["alpha"], "must be >= 0");
  if (nu <= 0.0) bad_value("nu", raw["nu"], "must be > 0");
  if (!(s > 0.0 && s < 1.0)) bad_value("s", raw["s"], "must lie in (0, 1)");
  cfg.params = make_params(dim, alpha, nu, s);

  cfg.scheme.dt = parse_double("dt", raw["dt"]);
  if (cfg.scheme.dt <= 0.0) bad_value("dt", raw["dt"], "must be > 0");
  cfg.t_end = parse_double("t_end", raw["t_end"]);
  if (cfg.t_end < 0.0) bad_value("t_end", raw["t_end"], "must be >= 0");

  if (raw.contains("scheme")) {
    const auto& v = raw["scheme"].value;
    if (v == "etd2rk") {
      cfg.scheme.kind = SchemeKind::ETD2RK;
    } else if (v == "exp-euler") {
      cfg.scheme.kind = SchemeKind::ExpEuler;
    } else {
      bad_value("scheme", raw["scheme"], "expected etd2rk or exp-euler");
    }
  }
  if (raw.contains("galerkin_N")) {
    const int g = parse_int<int>("galerkin_N", raw["galerkin_N"]);
    if (g < 1 || g > n / 2) bad_value("galerkin_N", raw["galerkin_N"], "must lie in [1, N/2]");
    cfg.galerkin_n = g;
  }
  if (raw.contains("snapshot_every")) {
    cfg.snapshot_every = parse_int<int>("snapshot_every", raw["snapshot_every"]);
    if (cfg.snapshot_every < 0) bad_value("snapshot_every", raw["snapshot_every"], "must be >= 0");
  }

  auto& init = cfg.initial;
  init.decay_exponent = 2.0 + dim / 2.0 + 0.01;
  const auto& kind = raw["init"].value;
  if (kind == "taylor-green") {
    init.kind = InitKind::TaylorGreen;
  } else if (kind == "shear") {
    init.kind = InitKind::Shear;
  } else if (kind == "random") {
    init.kind = InitKind::RandomSpectrum;
  } else if (kind.rfind("snapshot:", 0) == 0 && kind.size() > 9) {
    init.kind = InitKind::FromSnapshot;
    init.path = kind.substr(9);
  } else {
    bad_value("init", raw["init"], "expected taylor-green, shear, random or snapshot:<path>");
  }
  if (raw.contains("amplitude")) init.amplitude = parse_double("amplitude", raw["amplitude"]);
  if (raw.contains("seed")) init.seed = parse_int<std::uint64_t>("seed", raw["seed"]);
  if (raw.contains("decay_exponent")) init.decay_exponent = parse_double("decay_exponent", raw["decay_exponent"]);
  if (raw.contains("band")) {
    init.band = parse_int<int>("band", raw["band"]);
    if (init.band < 1 || init.band >= n / 2) bad_value("band", raw["band"], "must lie in [1, N/2)");
  }
  if (raw.contains("out_dir")) cfg.out_dir = raw["out_dir"].value;

  for (const auto& [key, entry] : raw) out.echo[key] = entry.value;
  out.echo["regime"] = to_string(cfg.params.regime);
  return out;
}

void require_global_regime(const SimConfig& config) {
  const int dim = config.grid.dim();
  if (config.params.s < dim / 4.0) {
    throw Error(ErrorCode::RegimeViolation, "s=" + format_double(config.params.s) + " is below dim/4=" +
                                                format_double(dim / 4.0) + " required for long runs");
  }
}

// ---------------------------------------------------------------------------
// Snapshots
// ---------------------------------------------------------------------------

void write_snapshot(const SpectralField& field, const SnapshotMeta& meta, const std::filesystem::path& path) {
  const auto& grid = field.grid();
  std::vector<unsigned char> buf;
  buf.reserve(kHeaderBytes + field.coeffs().size() * 16);
  for (char c : {'F', 'L', 'N', 'S'}) buf.push_back(static_cast<unsigned char>(c));
  put_le<std::uint32_t>(buf, kSnapshotVersion);
  put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(grid.dim()));
  put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(grid.n()));
  put_le<double>(buf, meta.alpha);
  put_le<double>(buf, meta.nu);
  put_le<double>(buf, meta.s);
  put_le<double>(buf, meta.t);
  for (const auto& c : field.coeffs()) {
    put_le<double>(buf, c.real());
    put_le<double>(buf, c.imag());
  }
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write snapshot " + path.string());
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error(ErrorCode::Io, "short write on " + path.string());
}

std::pair<SpectralField, SnapshotMeta> read_snapshot(const std::filesystem::path& path) {
  const auto bytes = read_all(path);
  if (bytes.size() < 4) throw Error(ErrorCode::CorruptPayload, path.string() + ": truncated header");
  if (std::memcmp(bytes.data(), "FLNS", 4) != 0) throw Error(ErrorCode::BadMagic, path.string());
  if (bytes.size() < kHeaderBytes) throw Error(ErrorCode::CorruptPayload, path.string() + ": truncated header");

  const unsigned char* p = bytes.data() + 4;
  const auto version = get_le<std::uint32_t>(p);
  if (version != kSnapshotVersion) {
    throw Error(ErrorCode::VersionMismatch, path.string() + ": format version " + std::to_string(version));
  }
  const auto dim = get_le<std::uint32_t>(p + 4);
  const auto n = get_le<std::uint32_t>(p + 8);
  GridSpec grid;
  try {
    if (dim > 3 || n > 4096) throw Error(ErrorCode::BadDim, "implausible shape");
    grid = make_grid(static_cast<int>(dim), static_cast<int>(n));
  } catch (const Error& e) {
    throw Error(ErrorCode::CorruptPayload, path.string() + ": bad shape (" + e.what() + ")");
  }
  SnapshotMeta meta{get_le<double>(p + 12), get_le<double>(p + 20), get_le<double>(p + 28), get_le<double>(p + 36)};

  const std::size_t count = static_cast<std::size_t>(dim) * grid.size();
  if (bytes.size() != kHeaderBytes + count * 16) {
    throw Error(ErrorCode::CorruptPayload, path.string() + ": payload is " + std::to_string(bytes.size() - kHeaderBytes) +
                                               " bytes, expected " + std::to_string(count * 16));
  }
  std::vector<Complex> coeffs(count);
  const unsigned char* q = bytes.data() + kHeaderBytes;
  for (std::size_t i = 0; i < count; ++i, q += 16) {
    coeffs[i] = {get_le<double>(q), get_le<double>(q + 8)};
    if (!std::isfinite(coeffs[i].real()) || !std::isfinite(coeffs[i].imag())) {
      throw Error(ErrorCode::CorruptPayload, path.string() + ": non-finite coefficient");
    }
  }
  SpectralField field(grid, std::move(coeffs), FieldFlags{false, false, false});
  if (hermitian_defect(field) > 1e-12) {
    throw Error(ErrorCode::CorruptPayload, path.string() + ": coefficients violate hermitian symmetry");
  }
  field.flags() = detect_flags(field, 1e-10);
  field.flags().hermitian = true;
  return {std::move(field), meta};
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

std::string format_csv(const CsvTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

void emit_csv(const CsvTable& table, const std::filesystem::path& path) {
  if (table.rows.empty()) throw Error(ErrorCode::EmptyOutput, "no rows for " + path.string());
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  const std::string text = format_csv(table);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::Io, "short write on " + path.string());
}

CsvTable diag_table(const std::vector<DiagRecord>& records) {
  CsvTable t{{"t", "E0", "E1", "D", "nDA", "n1ps2", "cancel"}, {}};
  for (const auto& r : records) t.rows.push_back({r.t, r.E0, r.E1, r.D, r.nDA, r.n1ps2, r.cancel});
  return t;
}

void emit_csv(const std::vector<DiagRecord>& records, const std::filesystem::path& path) {
  if (records.empty()) throw Error(ErrorCode::EmptyOutput, "no diagnostics records for " + path.string());
  emit_csv(diag_table(records), path);
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (header) {
      table.columns = cells;
      header = false;
      continue;
    }
    std::vector<double> row;
    for (const auto& c : cells) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (ec != std::errc()) throw Error(ErrorCode::BadValue, "csv cell '" + c + "'");
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

// ---------------------------------------------------------------------------
// Manifest
// ---------------------------------------------------------------------------

std::string file_sha256(const std::filesystem::path& path) {
  const auto bytes = read_all(path);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::Io, "sha256 failed for " + path.string());
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

void add_output(RunManifest& manifest, const std::filesystem::path& dir, const std::filesystem::path& file) {
  manifest.outputs.push_back(ManifestEntry{std::filesystem::relative(file, dir).generic_string(),
                                           std::filesystem::file_size(file), file_sha256(file)});
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path) {
  nlohmann::json j;
  j["version"] = manifest.version;
  j["command"] = manifest.command;
  j["started_utc"] = manifest.started_utc;
  j["finished_utc"] = manifest.finished_utc;
  j["config"] = manifest.config;
  j["outputs"] = nlohmann::json::array();
  for (const auto& e : manifest.outputs) {
    j["outputs"].push_back({{"path", e.path}, {"bytes", e.bytes}, {"sha256", e.sha256}});
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write manifest " + path.string());
  out << j.dump(2) << '\n';
}

RunManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read manifest " + path.string());
  const auto j = nlohmann::json::parse(in);
  RunManifest m;
  m.version = j.at("version").get<std::string>();
  m.command = j.at("command").get<std::string>();
  m.started_utc = j.at("started_utc").get<std::string>();
  m.finished_utc = j.at("finished_utc").get<std::string>();
  m.config = j.at("config").get<std::map<std::string, std::string>>();
  for (const auto& e : j.at("outputs")) {
    m.outputs.push_back({e.at("path").get<std::string>(), e.at("bytes").get<std::uintmax_t>(),
                         e.at("sha256").get<std::string>()});
  }
  return m;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

const char* version_string() noexcept { return "flans 0.1.0"; }

}  // namespace flans
