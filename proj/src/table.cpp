#include "dirac/table.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dirac/errors.hpp"

namespace dirac {
namespace {

bool bits_equal(double a, double b) {
    std::uint64_t ua, ub;
    std::memcpy(&ua, &a, sizeof ua);
    std::memcpy(&ub, &b, sizeof ub);
    return ua == ub;
}

bool needs_quoting(const std::string& s) {
    return s.find_first_of(",\"\n\r") != std::string::npos;
}

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

// A cell parses as a number when strtod consumes the entire field.
bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* p = s.c_str();
    char* end = nullptr;
    out = std::strtod(p, &end);
    return end == p + s.size();
}

} // namespace

std::string format_double_17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Table::Table(std::vector<std::string> columns) : cols_(std::move(columns)) {}

std::size_t Table::col_index(const std::string& name) const {
    for (std::size_t j = 0; j < cols_.size(); ++j)
        if (cols_[j] == name) return j;
    throw InvalidArgument("no such table column: " + name);
}

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != cols_.size())
        throw InvalidArgument("row width does not match the column count");
    cells_.push_back(std::move(row));
}

double Table::number(std::size_t i, std::size_t j) const {
    const Cell& c = cells_.at(i).at(j);
    if (const double* d = std::get_if<double>(&c)) return *d;
    throw InvalidArgument("table cell is not numeric");
}

const std::string& Table::text(std::size_t i, std::size_t j) const {
    const Cell& c = cells_.at(i).at(j);
    if (const std::string* s = std::get_if<std::string>(&c)) return *s;
    throw InvalidArgument("table cell is not text");
}

bool Table::operator==(const Table& o) const {
    if (cols_ != o.cols_ || cells_.size() != o.cells_.size()) return false;
    for (std::size_t i = 0; i < cells_.size(); ++i)
        for (std::size_t j = 0; j < cols_.size(); ++j) {
            const Cell& a = cells_[i][j];
            const Cell& b = o.cells_[i][j];
            if (a.index() != b.index()) return false;
            if (const double* da = std::get_if<double>(&a)) {
                if (!bits_equal(*da, std::get<double>(b))) return false;
            } else if (std::get<std::string>(a) != std::get<std::string>(b)) {
                return false;
            }
        }
    return true;
}

std::string Table::to_csv() const {
    std::ostringstream out;
    out << "# schema=1\n";
    for (std::size_t j = 0; j < cols_.size(); ++j) {
        if (j) out << ',';
        out << (needs_quoting(cols_[j]) ? quoted(cols_[j]) : cols_[j]);
    }
    out << '\n';
    for (const auto& row : cells_) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) out << ',';
            if (const double* d = std::get_if<double>(&row[j])) {
                out << format_double_17(*d);
            } else {
                const std::string& s = std::get<std::string>(row[j]);
                out << (needs_quoting(s) ? quoted(s) : s);
            }
        }
        out << '\n';
    }
    return out.str();
}

Table Table::from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    bool have_header = false;
    Table t;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_csv_line(line);
        if (!have_header) {
            t = Table(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != t.cols_.size())
            throw ParseError("csv row width does not match the header");
        std::vector<Cell> row;
        row.reserve(fields.size());
        for (auto& f : fields) {
            double d;
            if (parse_number(f, d)) row.emplace_back(d);
            else row.emplace_back(std::move(f));
        }
        t.cells_.push_back(std::move(row));
    }
    if (!have_header) throw ParseError("csv table has no header row");
    return t;
}

std::string Table::to_jsonl() const {
    using nlohmann::json;
    std::ostringstream out;
    json head;
    head["schema"] = 1;
    head["columns"] = cols_;
    out << head.dump() << '\n';
    for (const auto& row : cells_) {
        json o = json::object();
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (const double* d = std::get_if<double>(&row[j])) o[cols_[j]] = *d;
            else o[cols_[j]] = std::get<std::string>(row[j]);
        }
        out << o.dump() << '\n';
    }
    return out.str();
}

Table Table::from_jsonl(const std::string& text) {
    using nlohmann::json;
    std::istringstream in(text);
    std::string line;
    bool have_header = false;
    Table t;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json o;
        try {
            o = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("jsonl line is not valid JSON: ") + e.what());
        }
        if (!have_header) {
            if (!o.is_object() || o.value("schema", 0) != 1 || !o.contains("columns"))
                throw ParseError("jsonl table must start with a schema header line");
            t = Table(o["columns"].get<std::vector<std::string>>());
            have_header = true;
            continue;
        }
        std::vector<Cell> row;
        row.reserve(t.cols_.size());
        for (const auto& name : t.cols_) {
            if (!o.contains(name)) throw ParseError("jsonl row is missing column " + name);
            const auto& v = o[name];
            if (v.is_number()) row.emplace_back(v.get<double>());
            else if (v.is_string()) row.emplace_back(v.get<std::string>());
            else throw ParseError("jsonl cell must be a number or string");
        }
        t.cells_.push_back(std::move(row));
    }
    if (!have_header) throw ParseError("jsonl table has no header line");
    return t;
}

void Table::write_file(const std::string& path, bool jsonl) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << (jsonl ? to_jsonl() : to_csv());
    if (!out) throw IoError("write failed: " + path);
}

Table Table::read_file(const std::string& path, bool jsonl) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return jsonl ? from_jsonl(ss.str()) : from_csv(ss.str());
}

} // namespace dirac
