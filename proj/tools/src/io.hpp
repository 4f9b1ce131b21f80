#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace cvqkd::cli {

/// Full round-trip precision, C locale: %.17g.
std::string format_double(double v);

/// CSV with a header row and Unix newlines. Cells are written verbatim.
class CsvWriter {
  public:
    CsvWriter(std::filesystem::path path, std::vector<std::string> header);

    void add_row(const std::vector<std::string>& cells);
    /// Writes the file; returns the path.
    std::filesystem::path write() const;

  private:
    std::filesystem::path path_;
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Linear parameter sweep parsed from VAR:START:STOP:POINTS.
struct SweepSpec {
    std::string variable; // eta | beta | sigma2
    double start = 0.0;
    double stop = 0.0;
    int points = 0;

    std::vector<double> values() const;
};

SweepSpec parse_sweep(const std::string& text);

/// Reproducibility record written next to every emitted dataset: the
/// command line, every numeric setting that influenced the output, the
/// produced files, and any truncation warnings.
struct RunManifest {
    std::string command;
    nlohmann::json parameters = nlohmann::json::object();
    std::vector<std::string> outputs;
    std::vector<std::string> warnings;

    void write(const std::filesystem::path& path) const;
};

} // namespace cvqkd::cli
