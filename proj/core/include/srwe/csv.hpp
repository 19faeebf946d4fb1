#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "srwe/numeric.hpp"

namespace srwe {

/// Locale-independent decimal formatting ('.' separator, shortest form at the
/// given significant-digit budget).
std::string format_double(double v, int significant_digits = 12);

/// Epsilon column label matching the result-file convention: integral values
/// keep one decimal ("2.0"), everything else uses the shortest form.
std::string format_epsilon(double eps);

/// Magnitude label for column names: integral values drop the decimals.
std::string format_magnitude(double m);

struct Table {
    std::vector<std::string> columns;
    std::vector<Vector> rows;

    void add_row(Vector row);
};

/// Writes UTF-8 CSV with a header row, '.' decimal separator, 12 significant
/// digits and LF line endings, independent of the process locale.
void emit_csv(const Table& table, const std::filesystem::path& path);

/// Two-column key/value table for free-form report output (values already
/// formatted).
struct KeyValueTable {
    std::vector<std::pair<std::string, std::string>> rows;
};

void emit_csv(const KeyValueTable& table, const std::filesystem::path& path);

struct CsvContent {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

/// Minimal reader for the files this tool writes (no quoting, no escapes).
CsvContent read_csv(const std::filesystem::path& path);

}  // namespace srwe
