#include "srwe/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace srwe {

std::string format_double(double v, int significant_digits) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general,
                                   significant_digits);
    if (res.ec != std::errc())
        throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, res.ptr);
}

std::string format_epsilon(double eps) {
    if (std::isfinite(eps) && eps == std::floor(eps) && std::abs(eps) < 1e6) {
        std::string s = format_double(eps, 12);
        return s + ".0";
    }
    return format_double(eps, 12);
}

std::string format_magnitude(double m) {
    return format_double(m, 12);
}

void Table::add_row(Vector row) {
    if (row.size() != columns.size())
        throw std::invalid_argument("Table: row width does not match the schema");
    rows.push_back(std::move(row));
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path.string());
    return out;
}

}  // namespace

void emit_csv(const Table& table, const std::filesystem::path& path) {
    if (table.columns.empty())
        throw std::invalid_argument("emit_csv: table has no columns");
    std::ofstream out = open_for_write(path);
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        out << (i ? "," : "") << table.columns[i];
    out << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_double(row[i]);
        out << "\n";
    }
    if (!out)
        throw std::runtime_error("write failed: " + path.string());
}

void emit_csv(const KeyValueTable& table, const std::filesystem::path& path) {
    std::ofstream out = open_for_write(path);
    out << "key,value\n";
    for (const auto& [k, v] : table.rows)
        out << k << "," << v << "\n";
    if (!out)
        throw std::runtime_error("write failed: " + path.string());
}

CsvContent read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open: " + path.string());
    CsvContent content;
    std::string line;
    auto split = [](const std::string& s) {
        std::vector<std::string> fields;
        std::istringstream row(s);
        std::string field;
        while (std::getline(row, field, ','))
            fields.push_back(field);
        return fields;
    };
    if (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        content.columns = split(line);
    }
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        content.rows.push_back(split(line));
    }
    return content;
}

}  // namespace srwe
