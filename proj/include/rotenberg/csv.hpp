#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rotenberg {

/// Shortest round-trip decimal representation.
std::string format_double(double value);

/// Parses a full string as a double; throws ValidationError mentioning
/// `context` on failure.
double parse_double(std::string_view text, std::string_view context);

/// Non-comment lines of a comma-separated file, split into trimmed cells.
/// Lines starting with '#' and blank lines are skipped.
std::vector<std::vector<std::string>> read_csv_cells(const std::filesystem::path& path);

/// Buffered CSV writer. Rows accumulate in memory; `commit` writes them to a
/// temporary sibling file and renames it over the target, so readers never
/// observe a partial file.
class CsvWriter {
public:
    CsvWriter(std::filesystem::path path, std::string comment,
              std::vector<std::string> columns);

    void row(std::span<const double> values);
    void row(std::initializer_list<double> values);
    /// Row whose first cell is a label.
    void row(std::string_view label, std::span<const double> values);
    void raw_row(std::span<const std::string> cells);

    void commit();

private:
    std::filesystem::path path_;
    std::size_t columns_ = 0;
    std::string buffer_;
};

/// Writes `contents` to `path` through a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view data);

}  // namespace rotenberg
