#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sawtrap/app/config.hpp"

namespace sawtrap::app {

/// %.17g: round-trip safe, '.' separator, no grouping.
std::string fmt17(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    /// Index of `name` in the header, or throws ValidationError.
    std::size_t column(const std::string& name) const;
    std::vector<double> values(const std::string& name) const;
};

void write_csv(const std::filesystem::path& path, const CsvTable& table);
/// Numeric CSV with one header line.
CsvTable read_csv(const std::filesystem::path& path);

/// Creates `dir` if needed and checks it is writable.
std::filesystem::path prepare_output_dir(const std::string& dir);

/// `<dataset>.meta.json`: tool version, config hash, seed, tolerances, the
/// full config and any command-specific fields. No timestamps, so reruns are
/// byte-identical.
void write_sidecar(const std::filesystem::path& dataset, const RunConfig& config, const json& extra);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace sawtrap::app
