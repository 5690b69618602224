#ifndef NATCAT_CSV_HPP
#define NATCAT_CSV_HPP

#include <filesystem>
#include <fstream>
#include <string>
#include <unordered_map>
#include <vector>

namespace natcat::csv {

// Header-indexed comma-separated reader. Errors carry the 1-based row number.
class Table {
public:
    static Table read_file(const std::filesystem::path& path);
    static Table parse(const std::string& text, const std::string& origin);

    std::size_t rows() const { return cells_.size(); }
    const std::vector<std::string>& header() const { return header_; }
    bool has_column(const std::string& name) const;

    const std::string& cell(std::size_t row, const std::string& column) const;
    double number(std::size_t row, const std::string& column) const;
    long integer(std::size_t row, const std::string& column) const;

    // File row number (counting the header as row 1) for error messages.
    std::size_t file_row(std::size_t row) const { return row + 2; }
    const std::string& origin() const { return origin_; }

private:
    std::string origin_;
    std::vector<std::string> header_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::vector<std::string>> cells_;
};

// Formats a double with enough digits to round-trip, deterministically.
std::string format_number(double v);

// Writer that goes through a temp file and renames on close so partially
// written outputs never shadow previous results.
class AtomicWriter {
public:
    explicit AtomicWriter(const std::filesystem::path& path);
    ~AtomicWriter();
    std::ostream& stream() { return out_; }
    void commit();

private:
    std::filesystem::path target_;
    std::filesystem::path temp_;
    std::ofstream out_;
    bool committed_ = false;
};

void write_row(std::ostream& os, const std::vector<std::string>& fields);

} // namespace natcat::csv

#endif
