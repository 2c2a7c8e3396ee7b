#include "invlim/snapshot_io.hpp"

#include "invlim/errors.hpp"
#include "invlim/io_util.hpp"

#include <json.hpp>

#include <bit>
#include <cstring>
#include <sstream>

namespace invlim {

namespace {

constexpr char kMagic[8] = {'I', 'N', 'V', 'L', 'S', 'N', 'A', 'P'};

void put_le(std::string& out, std::uint64_t bits, int bytes) {
    for (int i = 0; i < bytes; ++i) {
        out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
    }
}

std::uint64_t get_le(const unsigned char* p, int bytes) {
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) {
        v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    }
    return v;
}

std::string read_all(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path sidecar(const std::filesystem::path& path) {
    std::filesystem::path p = path;
    p += ".json";
    return p;
}

} // namespace

void write_snapshot(const std::filesystem::path& path, const ScalarField& field, double t) {
    field.grid.validate();
    std::string bytes(kMagic, kMagic + 8);
    put_le(bytes, kSnapshotVersion, 4);
    put_le(bytes, field.grid.n, 4);
    bytes.reserve(16 + 8 * field.values.size());
    for (double v : field.values) {
        put_le(bytes, std::bit_cast<std::uint64_t>(v), 8);
    }
    atomic_write_file(path, bytes, true);

    nlohmann::ordered_json meta;
    meta["format"] = "invlim-snapshot";
    meta["version"] = kSnapshotVersion;
    meta["N"] = field.grid.n;
    meta["box_length"] = field.grid.box_length;
    meta["t"] = t;
    meta["layout"] = "row-major, y slow, little-endian float64";
    atomic_write_file(sidecar(path), meta.dump(2) + "\n");
}

Snapshot read_snapshot(const std::filesystem::path& path) {
    const std::string bytes = read_all(path);
    if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, 8) != 0) {
        throw IoError("'" + path.string() + "' is not a snapshot file");
    }
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    const auto version = get_le(p + 8, 4);
    const auto n = get_le(p + 12, 4);
    if (version != kSnapshotVersion) {
        throw IoError("unsupported snapshot version " + std::to_string(version));
    }
    if (bytes.size() != 16 + 8 * n * n) {
        throw IoError("'" + path.string() + "' has the wrong size for N = " + std::to_string(n));
    }
    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(read_all(sidecar(path)));
    } catch (const nlohmann::json::exception& e) {
        throw IoError("bad snapshot sidecar: " + std::string(e.what()));
    }
    if (meta.value("N", std::uint64_t{0}) != n) {
        throw IoError("snapshot sidecar disagrees on N");
    }
    Snapshot s;
    s.field = ScalarField(Grid{n, meta.at("box_length").get<double>()});
    s.t = meta.at("t").get<double>();
    for (std::size_t i = 0; i < n * n; ++i) {
        s.field.values[i] = std::bit_cast<double>(get_le(p + 16 + 8 * i, 8));
    }
    return s;
}

std::string diagnostics_csv_header() {
    return "t,energy,lp2,lp4,lp8,lp16,lp32,glp2,glp4,glp8,glp16,glp32,max_vel";
}

std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& records) {
    std::string out = diagnostics_csv_header() + "\n";
    for (const auto& r : records) {
        out += format_double(r.t) + "," + format_double(r.energy);
        for (double v : r.lp) out += "," + format_double(v);
        for (double v : r.glp) out += "," + format_double(v);
        out += "," + format_double(r.max_vel) + "\n";
    }
    return out;
}

void write_diagnostics_csv(const std::filesystem::path& path, const std::vector<DiagnosticsRecord>& records) {
    atomic_write_file(path, diagnostics_csv(records));
}

std::vector<DiagnosticsRecord> read_diagnostics_csv(const std::filesystem::path& path) {
    std::istringstream in(read_all(path));
    std::string line;
    if (!std::getline(in, line) || line != diagnostics_csv_header()) {
        throw IoError("'" + path.string() + "' lacks the diagnostics header");
    }
    std::vector<DiagnosticsRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> cols;
        std::istringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) {
            cols.push_back(std::strtod(cell.c_str(), nullptr));
        }
        if (cols.size() != 13) {
            throw IoError("malformed diagnostics row: " + line);
        }
        DiagnosticsRecord r;
        r.t = cols[0];
        r.energy = cols[1];
        for (int i = 0; i < 5; ++i) {
            r.lp[i] = cols[2 + i];
            r.glp[i] = cols[7 + i];
        }
        r.max_vel = cols[12];
        out.push_back(r);
    }
    return out;
}

} // namespace invlim
