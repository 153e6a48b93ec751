#pragma once
// Tabular container for reproduced cost tables.

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "multalpha/error.hpp"

namespace multalpha {

struct CostCell {
    double value = std::numeric_limits<double>::quiet_NaN();
    std::optional<double> alpha;  // bracketed optimum
    std::optional<double> sd;     // bracketed spread over simulation runs
    bool bold = false;            // lowest single-level cost in its row

    CostCell() = default;
    CostCell(double v, std::optional<double> a = std::nullopt, std::optional<double> s = std::nullopt)
        : value(v), alpha(a), sd(s) {}
};

struct CostRow {
    std::string group;  // e.g. "RD = -0.025"; empty when the table has no grouping
    std::string label;  // e.g. "P = 0.5"
    std::vector<CostCell> cells;
};

struct CostTable {
    std::string title;
    std::vector<std::string> columns;
    std::vector<CostRow> rows;
    std::size_t single_columns = 0;  // leading columns that are single-level tests
    int decimals = 1;
    std::vector<std::string> notes;

    [[nodiscard]] const CostCell& cell(std::size_t row, std::size_t col) const {
        return rows.at(row).cells.at(col);
    }

    [[nodiscard]] std::optional<std::size_t> column_index(const std::string& name) const {
        for (std::size_t j = 0; j < columns.size(); ++j) {
            if (columns[j] == name) return j;
        }
        return std::nullopt;
    }

    // Bold exactly one single-level cell per row: the first lowest value.
    void mark_minima() {
        for (auto& row : rows) {
            detail::require_contract(row.cells.size() == columns.size(), "cost table row has the wrong width");
            std::size_t best = 0;
            for (std::size_t j = 0; j < single_columns; ++j) {
                row.cells[j].bold = false;
                if (row.cells[j].value < row.cells[best].value) best = j;
            }
            if (single_columns > 0) row.cells[best].bold = true;
        }
    }
};

}  // namespace multalpha
