#include "io.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include "cvqkd/version.hpp"

namespace cvqkd::cli {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(std::filesystem::path path, std::vector<std::string> header)
    : path_(std::move(path)), header_(std::move(header)) {}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
    if (cells.size() != header_.size()) {
        throw std::logic_error("CsvWriter: row width does not match header");
    }
    rows_.push_back(cells);
}

std::filesystem::path CsvWriter::write() const {
    std::ofstream out(path_, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path_.string() + " for writing");
    }
    auto write_line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) out << ',';
            out << cells[i];
        }
        out << '\n';
    };
    write_line(header_);
    for (const auto& row : rows_) write_line(row);
    out.flush();
    if (!out) {
        throw std::runtime_error("failed writing " + path_.string());
    }
    return path_;
}

std::vector<double> SweepSpec::values() const {
    std::vector<double> v(static_cast<std::size_t>(points));
    const double step = (stop - start) / (points - 1);
    for (int i = 0; i < points; ++i) {
        v[static_cast<std::size_t>(i)] = i == points - 1 ? stop : start + i * step;
    }
    return v;
}

SweepSpec parse_sweep(const std::string& text) {
    SweepSpec spec;
    const auto p1 = text.find(':');
    const auto p2 = text.find(':', p1 == std::string::npos ? p1 : p1 + 1);
    const auto p3 = text.find(':', p2 == std::string::npos ? p2 : p2 + 1);
    if (p1 == std::string::npos || p2 == std::string::npos || p3 == std::string::npos) {
        throw std::invalid_argument("sweep must be VAR:START:STOP:POINTS");
    }
    spec.variable = text.substr(0, p1);
    if (spec.variable != "eta" && spec.variable != "beta" && spec.variable != "sigma2") {
        throw std::invalid_argument("sweep variable must be eta, beta or sigma2");
    }
    try {
        spec.start = std::stod(text.substr(p1 + 1, p2 - p1 - 1));
        spec.stop = std::stod(text.substr(p2 + 1, p3 - p2 - 1));
        spec.points = std::stoi(text.substr(p3 + 1));
    } catch (const std::exception&) {
        throw std::invalid_argument("sweep must be VAR:START:STOP:POINTS with numbers");
    }
    if (!(spec.start < spec.stop)) {
        throw std::invalid_argument("sweep requires start < stop");
    }
    if (spec.points < 2) {
        throw std::invalid_argument("sweep requires points >= 2");
    }
    return spec;
}

namespace {
std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}
} // namespace

void RunManifest::write(const std::filesystem::path& path) const {
    nlohmann::json doc;
    doc["command"] = command;
    doc["tool_version"] = cvqkd::kVersion;
    doc["timestamp"] = utc_timestamp();
    doc["parameters"] = parameters;
    doc["outputs"] = outputs;
    doc["warnings"] = warnings;
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out << doc.dump(2) << '\n';
}

} // namespace cvqkd::cli
