#include "rotenberg/csv.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <system_error>

#include "rotenberg/exec.hpp"

namespace rotenberg {

std::string format_double(double value) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) {
        return "nan";
    }
    return {buf.data(), ptr};
}

double parse_double(std::string_view text, std::string_view context) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
        text.remove_prefix(1);
    }
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
        text.remove_suffix(1);
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ValidationError(std::string(context) + ": cannot parse number '" + std::string(text) + "'");
    }
    return value;
}

namespace {

std::string trim(std::string_view s) {
    std::size_t lo = 0;
    std::size_t hi = s.size();
    while (lo < hi && (s[lo] == ' ' || s[lo] == '\t')) {
        ++lo;
    }
    while (hi > lo && (s[hi - 1] == ' ' || s[hi - 1] == '\t' || s[hi - 1] == '\r')) {
        --hi;
    }
    return std::string(s.substr(lo, hi - lo));
}

}  // namespace

std::vector<std::vector<std::string>> read_csv_cells(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open " + path.string());
    }
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') {
            continue;
        }
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = t.find(',', start);
            cells.push_back(trim(std::string_view(t).substr(start, comma - start)));
            if (comma == std::string::npos) {
                break;
            }
            start = comma + 1;
        }
        rows.push_back(std::move(cells));
    }
    return rows;
}

CsvWriter::CsvWriter(std::filesystem::path path, std::string comment,
                     std::vector<std::string> columns)
    : path_(std::move(path)), columns_(columns.size()) {
    if (!comment.empty()) {
        buffer_ += "# ";
        buffer_ += comment;
        buffer_ += '\n';
    }
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) {
            buffer_ += ',';
        }
        buffer_ += columns[i];
    }
    buffer_ += '\n';
}

void CsvWriter::row(std::span<const double> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) {
            buffer_ += ',';
        }
        buffer_ += format_double(values[i]);
    }
    buffer_ += '\n';
}

void CsvWriter::row(std::initializer_list<double> values) {
    row(std::span<const double>(values.begin(), values.size()));
}

void CsvWriter::row(std::string_view label, std::span<const double> values) {
    buffer_ += label;
    for (double v : values) {
        buffer_ += ',';
        buffer_ += format_double(v);
    }
    buffer_ += '\n';
}

void CsvWriter::raw_row(std::span<const std::string> cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) {
            buffer_ += ',';
        }
        buffer_ += cells[i];
    }
    buffer_ += '\n';
}

void CsvWriter::commit() { write_file_atomic(path_, buffer_); }

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write " + tmp.string());
        }
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) {
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace rotenberg
