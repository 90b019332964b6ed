#include "sawtrap/app/export.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "sawtrap/errors.hpp"

#ifndef SAWTRAP_VERSION
#define SAWTRAP_VERSION "0.0.0"
#endif

namespace sawtrap::app {

namespace fs = std::filesystem;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw ValidationError("dataset: missing column '" + name + "'");
}

std::vector<double> CsvTable::values(const std::string& name) const {
    const auto c = column(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[c]);
    return out;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("output: cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw ValidationError("output: write failed for '" + path.string() + "'");
}

void write_csv(const fs::path& path, const CsvTable& table) {
    std::string s;
    for (std::size_t i = 0; i < table.header.size(); ++i) s += (i ? "," : "") + table.header[i];
    s += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) s += ',';
            s += fmt17(row[i]);
        }
        s += '\n';
    }
    write_text(path, s);
}

CsvTable read_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("dataset: cannot open '" + path.string() + "'");
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("dataset: '" + path.string() + "' is empty");
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) t.header.push_back(cell);
    }
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
                if (used != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw ValidationError("dataset: " + path.string() + ":" + std::to_string(lineno) + ": bad number '" + cell + "'");
            }
        }
        if (row.size() != t.header.size())
            throw ValidationError("dataset: " + path.string() + ":" + std::to_string(lineno) + ": expected " +
                                  std::to_string(t.header.size()) + " columns");
        t.rows.push_back(std::move(row));
    }
    return t;
}

fs::path prepare_output_dir(const std::string& dir) {
    if (dir.empty()) throw ValidationError("output.dir: must not be empty");
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw ValidationError("output.dir: cannot create '" + dir + "'");
    const fs::path probe = fs::path(dir) / ".sawtrap_write_probe";
    {
        std::ofstream out(probe);
        if (!out) throw ValidationError("output.dir: '" + dir + "' is not writable");
    }
    fs::remove(probe, ec);
    return dir;
}

void write_sidecar(const fs::path& dataset, const RunConfig& config, const json& extra) {
    json meta = {
        {"tool", "sawtrap"},
        {"version", SAWTRAP_VERSION},
        {"command", to_string(config.command)},
        {"dataset", dataset.filename().string()},
        {"config_hash", hex64(config_hash(config))},
        {"seed", config.seed},
        {"config", config_to_json(config)},
    };
    for (auto it = extra.begin(); it != extra.end(); ++it) meta[it.key()] = *it;
    fs::path p = dataset;
    p += ".meta.json";
    write_text(p, meta.dump(2) + "\n");
}

}  // namespace sawtrap::app
