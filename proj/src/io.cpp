#include "zk/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "zk/common.hpp"

namespace zk {

namespace {

constexpr const char* kCsvVersion = "# zk-diagnostics v1";
constexpr const char* kMagic = "ZKF1";

std::string format_g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string diagnostics_csv_text(const std::vector<DiagnosticsRecord>& records) {
    std::ostringstream out;
    out << kCsvVersion << "\n";
    const auto& names = DiagnosticsRecord::column_names();
    for (int i = 0; i < DiagnosticsRecord::ncolumns; ++i)
        out << names[i] << (i + 1 < DiagnosticsRecord::ncolumns ? "," : "\n");
    for (const auto& r : records) {
        const auto row = r.as_row();
        for (int i = 0; i < DiagnosticsRecord::ncolumns; ++i)
            out << format_g17(row[i]) << (i + 1 < DiagnosticsRecord::ncolumns ? "," : "\n");
    }
    return out.str();
}

std::vector<DiagnosticsRecord> parse_diagnostics_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kCsvVersion)
        throw std::runtime_error("diagnostics CSV: bad or missing version line");
    if (!std::getline(in, line)) throw std::runtime_error("diagnostics CSV: missing header");
    {
        std::ostringstream expect;
        const auto& names = DiagnosticsRecord::column_names();
        for (int i = 0; i < DiagnosticsRecord::ncolumns; ++i)
            expect << names[i] << (i + 1 < DiagnosticsRecord::ncolumns ? "," : "");
        if (line != expect.str())
            throw std::runtime_error("diagnostics CSV: unexpected column header");
    }
    std::vector<DiagnosticsRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::array<double, DiagnosticsRecord::ncolumns> row{};
        std::stringstream ss(line);
        std::string cell;
        int i = 0;
        while (std::getline(ss, cell, ',')) {
            if (i >= DiagnosticsRecord::ncolumns)
                throw std::runtime_error("diagnostics CSV: too many columns in a row");
            char* end = nullptr;
            row[i] = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str())
                throw std::runtime_error("diagnostics CSV: bad number: " + cell);
            ++i;
        }
        if (i != DiagnosticsRecord::ncolumns)
            throw std::runtime_error("diagnostics CSV: short row");
        records.push_back(DiagnosticsRecord::from_row(row));
    }
    return records;
}

void write_diagnostics_csv(const std::string& path,
                           const std::vector<DiagnosticsRecord>& records) {
    write_text_file(path, diagnostics_csv_text(records));
}

std::vector<DiagnosticsRecord> read_diagnostics_csv(const std::string& path) {
    return parse_diagnostics_csv(read_text_file(path));
}

void write_snapshot(const std::string& path, const Field& field) {
    if (!field.finite()) throw numerical_error("write_snapshot: field has non-finite values");
    const Grid& g = *field.grid;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for write: " + path);
    out.write(kMagic, 4);
    const std::uint32_t dims[3] = {static_cast<std::uint32_t>(g.nxp()),
                                   static_cast<std::uint32_t>(g.spec.ny),
                                   static_cast<std::uint32_t>(g.nzeff())};
    out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
    out.write(reinterpret_cast<const char*>(field.values.data()),
              static_cast<std::streamsize>(field.values.size() * sizeof(double)));
    if (!out) throw std::runtime_error("write failed: " + path);
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open snapshot: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("snapshot magic mismatch in " + path);
    std::uint32_t dims[3];
    in.read(reinterpret_cast<char*>(dims), sizeof(dims));
    if (!in) throw std::runtime_error("snapshot header truncated in " + path);
    Snapshot snap;
    snap.nxp = dims[0];
    snap.ny = dims[1];
    snap.nz = dims[2];
    const std::size_t count = std::size_t(snap.nxp) * snap.ny * snap.nz;
    snap.values.resize(count);
    in.read(reinterpret_cast<char*>(snap.values.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (!in || in.gcount() != static_cast<std::streamsize>(count * sizeof(double)))
        throw std::runtime_error("snapshot size mismatch in " + path);
    char extra;
    if (in.read(&extra, 1))
        throw std::runtime_error("snapshot has trailing bytes: " + path);
    for (double v : snap.values)
        if (std::isnan(v)) throw std::runtime_error("snapshot holds NaN values: " + path);
    return snap;
}

Field snapshot_to_field(const Snapshot& snap, const GridPtr& grid, BcTag tag) {
    if (static_cast<int>(snap.nxp) != grid->nxp() ||
        static_cast<int>(snap.ny) != grid->spec.ny ||
        static_cast<int>(snap.nz) != grid->nzeff())
        throw std::runtime_error("snapshot dimensions do not match the grid");
    Field f(grid, tag);
    f.values = snap.values;
    return f;
}

std::string file_checksum(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for checksum: " + path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[65536];
    std::size_t total = 0;
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        h = fnv1a64(buf, static_cast<std::size_t>(in.gcount()), h);
        total += static_cast<std::size_t>(in.gcount());
        if (in.eof()) break;
    }
    char out[64];
    std::snprintf(out, sizeof(out), "%zu:%016llx", total,
                  static_cast<unsigned long long>(h));
    return out;
}

void write_manifest(const std::string& dir, const std::string& config_echo,
                    const std::map<std::string, std::string>& files) {
    nlohmann::json j;
    j["format"] = "zk-manifest v1";
    j["created_unix"] = static_cast<long long>(std::time(nullptr));
    j["formats"] = {{"diagnostics_csv", "zk-diagnostics v1"}, {"snapshot", "ZKF1"}};
    j["config"] = config_echo;
    nlohmann::json jf = nlohmann::json::object();
    for (const auto& [name, sum] : files) jf[name] = sum;
    j["files"] = jf;
    write_text_file((std::filesystem::path(dir) / "manifest.json").string(), j.dump(2) + "\n");
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for write: " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace zk
