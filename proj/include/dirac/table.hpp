#pragma once

#include <string>
#include <variant>
#include <vector>

namespace dirac {

// Rectangular result table: named columns, each cell either a double or a
// short string.  This is the only shape crossing the C boundary.
class Table {
public:
    using Cell = std::variant<double, std::string>;

    explicit Table(std::vector<std::string> columns = {});

    const std::vector<std::string>& columns() const { return cols_; }
    std::size_t rows() const { return cells_.size(); }
    std::size_t col_index(const std::string& name) const; // throws if missing

    void add_row(std::vector<Cell> row);
    const Cell& cell(std::size_t i, std::size_t j) const { return cells_[i][j]; }
    double number(std::size_t i, std::size_t j) const;
    const std::string& text(std::size_t i, std::size_t j) const;

    bool operator==(const Table& o) const;

    // CSV: "# schema=1" comment, header row, then rows; numbers with 17
    // significant digits (bit-exact round trip).
    std::string to_csv() const;
    static Table from_csv(const std::string& text);
    // JSONL: {"schema":1,"columns":[...]} first, then one object per row.
    std::string to_jsonl() const;
    static Table from_jsonl(const std::string& text);

    void write_file(const std::string& path, bool jsonl) const;
    static Table read_file(const std::string& path, bool jsonl);

private:
    std::vector<std::string> cols_;
    std::vector<std::vector<Cell>> cells_;
};

std::string format_double_17(double v);

} // namespace dirac
