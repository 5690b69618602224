#include "natcat/csv.hpp"
#include "natcat/errors.hpp"

#include <cstdio>
#include <sstream>

namespace natcat::csv {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(field);
            field.clear();
        } else if (ch != '\r') {
            field.push_back(ch);
        }
    }
    out.push_back(field);
    return out;
}

} // namespace

Table Table::read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path.string());
}

Table Table::parse(const std::string& text, const std::string& origin) {
    Table t;
    t.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw InputError(origin + ": empty file, header required");
    t.header_ = split_line(line);
    for (std::size_t i = 0; i < t.header_.size(); ++i)
        t.index_[t.header_[i]] = i;
    std::size_t row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_line(line);
        if (fields.size() != t.header_.size())
            throw InputError(origin + " row " + std::to_string(row_no) + ": expected " +
                             std::to_string(t.header_.size()) + " fields, got " +
                             std::to_string(fields.size()));
        t.cells_.push_back(std::move(fields));
    }
    return t;
}

bool Table::has_column(const std::string& name) const {
    return index_.count(name) > 0;
}

const std::string& Table::cell(std::size_t row, const std::string& column) const {
    auto it = index_.find(column);
    if (it == index_.end())
        throw InputError(origin_ + ": missing column '" + column + "'");
    return cells_[row][it->second];
}

double Table::number(std::size_t row, const std::string& column) const {
    const std::string& s = cell(row, column);
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw InputError(origin_ + " row " + std::to_string(file_row(row)) +
                         ": bad number '" + s + "' in column '" + column + "'");
    }
}

long Table::integer(std::size_t row, const std::string& column) const {
    const std::string& s = cell(row, column);
    try {
        std::size_t pos = 0;
        const long v = std::stol(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw InputError(origin_ + " row " + std::to_string(file_row(row)) +
                         ": bad integer '" + s + "' in column '" + column + "'");
    }
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

AtomicWriter::AtomicWriter(const std::filesystem::path& path)
    : target_(path), temp_(path.string() + ".tmp") {
    out_.open(temp_, std::ios::binary | std::ios::trunc);
    if (!out_) throw InputError("cannot write " + temp_.string());
}

AtomicWriter::~AtomicWriter() {
    if (!committed_) {
        out_.close();
        std::error_code ec;
        std::filesystem::remove(temp_, ec);
    }
}

void AtomicWriter::commit() {
    out_.flush();
    out_.close();
    if (!out_.good()) throw InputError("write failed for " + temp_.string());
    std::filesystem::rename(temp_, target_);
    committed_ = true;
}

void write_row(std::ostream& os, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) os << ',';
        os << fields[i];
    }
    os << '\n';
}

} // namespace natcat::csv
