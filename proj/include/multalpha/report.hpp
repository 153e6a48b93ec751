#pragma once
// Rendering: cost tables (text, CSV), multi-level confidence intervals,
// finding statements, star annotations and SVG scenario plots.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "multalpha/costtable.hpp"
#include "multalpha/error.hpp"
#include "multalpha/format.hpp"
#include "multalpha/scenario.hpp"
#include "multalpha/specfun.hpp"
#include "multalpha/testmodel.hpp"

namespace multalpha {

// ---------------------------------------------------------------------------
// Tables

enum class TableFormat { Text, Csv };

namespace detail {

inline std::string cell_text(const CostCell& c, int decimals) {
    std::string s = format_fixed(c.value, decimals);
    if (c.bold) s = "**" + s + "**";
    if (c.alpha) s += " (" + format_fixed(*c.alpha, 2) + ")";
    if (c.sd) s += " (" + format_fixed(*c.sd, decimals) + ")";
    return s;
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

inline std::string render_text(const CostTable& t) {
    std::vector<std::vector<std::string>> grid;
    grid.push_back({""});
    for (const auto& c : t.columns) grid.back().push_back(c);
    std::vector<bool> is_group;
    is_group.push_back(false);
    std::string group;
    for (const auto& row : t.rows) {
        if (!row.group.empty() && row.group != group) {
            group = row.group;
            grid.push_back({group});
            is_group.push_back(true);
        }
        std::vector<std::string> line{row.label};
        for (const auto& c : row.cells) line.push_back(cell_text(c, t.decimals));
        grid.push_back(std::move(line));
        is_group.push_back(false);
    }
    std::vector<std::size_t> width(t.columns.size() + 1, 0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (is_group[i]) continue;
        for (std::size_t j = 0; j < grid[i].size(); ++j) width[j] = std::max(width[j], grid[i][j].size());
    }
    const std::string indent =
        std::any_of(t.rows.begin(), t.rows.end(), [](const CostRow& r) { return !r.group.empty(); }) ? "  " : "";
    std::ostringstream out;
    if (!t.title.empty()) out << t.title << "\n\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (is_group[i]) {
            out << grid[i][0] << "\n";
            continue;
        }
        std::string line;
        for (std::size_t j = 0; j < grid[i].size(); ++j) {
            const auto& s = grid[i][j];
            if (j == 0) {
                line += indent + s + std::string(width[0] - s.size(), ' ');
            } else {
                line += "  " + std::string(width[j] - s.size(), ' ') + s;
            }
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out << line << "\n";
    }
    for (const auto& n : t.notes) out << "\n" << n << "\n";
    return out.str();
}

// Long format: one record per cell, full precision.
inline std::string render_csv(const CostTable& t) {
    std::ostringstream out;
    out << "group,label,column,value,alpha,sd,bold\n";
    for (const auto& row : t.rows) {
        for (std::size_t j = 0; j < row.cells.size(); ++j) {
            const auto& c = row.cells[j];
            out << csv_field(row.group) << ',' << csv_field(row.label) << ',' << csv_field(t.columns.at(j)) << ','
                << format_shortest(c.value) << ',' << (c.alpha ? format_shortest(*c.alpha) : "") << ','
                << (c.sd ? format_shortest(*c.sd) : "") << ',' << (c.bold ? "1" : "0") << "\n";
        }
    }
    return out.str();
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

}  // namespace detail

inline std::string render_table(const CostTable& t, TableFormat fmt = TableFormat::Text) {
    return fmt == TableFormat::Text ? detail::render_text(t) : detail::render_csv(t);
}

// Inverse of the CSV rendering (title, notes and single_columns are not
// carried by the CSV).
inline CostTable parse_table_csv(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    detail::require_contract(static_cast<bool>(std::getline(in, line)) && line == "group,label,column,value,alpha,sd,bold",
                             "table CSV: unexpected header");
    CostTable t;
    std::map<std::string, std::size_t> col_index;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = detail::split_csv_line(line);
        detail::require_contract(f.size() == 7, "table CSV: line " + std::to_string(lineno) + " has " +
                                                    std::to_string(f.size()) + " fields");
        auto [it, inserted] = col_index.emplace(f[2], t.columns.size());
        if (inserted) t.columns.push_back(f[2]);
        if (t.rows.empty() || t.rows.back().group != f[0] || t.rows.back().label != f[1] ||
            t.rows.back().cells.size() > it->second) {
            t.rows.push_back({f[0], f[1], {}});
        }
        auto& cells = t.rows.back().cells;
        detail::require_contract(cells.size() == it->second, "table CSV: cells out of column order at line " +
                                                                 std::to_string(lineno));
        CostCell c{parse_double(f[3])};
        if (!f[4].empty()) c.alpha = parse_double(f[4]);
        if (!f[5].empty()) c.sd = parse_double(f[5]);
        c.bold = f[6] == "1";
        cells.push_back(c);
    }
    return t;
}

// ---------------------------------------------------------------------------
// Confidence intervals about one estimate, one per ladder level

enum class Sidedness { TwoSided, Upper, Lower };

struct CiBound {
    double alpha;
    double lower;
    double upper;
};

struct MultiLevelCI {
    double estimate = 0.0;
    double se = 1.0;
    Sidedness sidedness = Sidedness::TwoSided;
    std::vector<CiBound> levels;  // in ladder order, widening
};

// Two-sided: estimate -/+ z_{1-a/2} se. Upper: (-inf, estimate + z_{1-a} se].
// Lower: [estimate - z_{1-a} se, inf).
inline MultiLevelCI multilevel_ci(double estimate, double se, const AlphaLadder& ladder,
                                  Sidedness sided = Sidedness::TwoSided) {
    detail::require_domain(std::isfinite(estimate), "multilevel_ci: estimate must be finite");
    detail::require_domain(se > 0.0 && std::isfinite(se), "multilevel_ci: se must be positive");
    constexpr double inf = std::numeric_limits<double>::infinity();
    MultiLevelCI ci{estimate, se, sided, {}};
    for (double a : ladder.levels()) {
        const double z = normal_quantile(sided == Sidedness::TwoSided ? 1.0 - a / 2.0 : 1.0 - a);
        const double lo = sided == Sidedness::Upper ? -inf : estimate - z * se;
        const double hi = sided == Sidedness::Lower ? inf : estimate + z * se;
        ci.levels.push_back({a, lo, hi});
    }
    return ci;
}

// ---------------------------------------------------------------------------
// Finding statements

struct Finding {
    std::size_t level = 0;  // 1-based most stringent level rejected; 0 if none
    std::string formal;
    std::string label;
};

// Rejection at level a_m means p < a_m.
inline Finding finding_statement(double p_value, const AlphaLadder& ladder, const std::vector<std::string>& labels,
                                 const std::string& hypothesis = "The test hypothesis") {
    detail::require_domain(p_value > 0.0 && p_value <= 1.0, "finding_statement: p-value must lie in (0,1]");
    detail::require_contract(labels.size() == ladder.size(), "finding_statement: need one label per level");
    Finding f;
    for (std::size_t m = 0; m < ladder.size(); ++m) {
        if (p_value < ladder[m]) f.level = m + 1;
    }
    const auto lvl = [&](std::size_t i) { return format_label(ladder[i]); };
    if (f.level == 0) {
        f.formal = hypothesis + " was not rejected at alpha level " + lvl(0) + ".";
        f.label = "The evidence does not reach the " + labels.front() + " level.";
    } else if (f.level == ladder.size()) {
        f.formal = hypothesis + " was rejected at alpha level " + lvl(f.level - 1) + ".";
        f.label = "The evidence is " + labels[f.level - 1] + ".";
    } else {
        f.formal = hypothesis + " was rejected at alpha level " + lvl(f.level - 1) +
                   " but was not rejected at alpha level " + lvl(f.level) + ".";
        f.label = "The evidence is " + labels[f.level - 1] + ".";
    }
    return f;
}

// ---------------------------------------------------------------------------
// Star annotations

class StarMap {
public:
    // Levels strictly decreasing, each with its marker.
    explicit StarMap(std::vector<std::pair<double, std::string>> levels) : levels_(std::move(levels)) {
        std::vector<double> alphas;
        for (const auto& [a, s] : levels_) {
            detail::require_contract(!s.empty(), "star map: empty marker");
            alphas.push_back(a);
        }
        AlphaLadder check(std::move(alphas));
    }

    StarMap() : StarMap({{0.05, "*"}, {0.01, "**"}, {0.001, "***"}}) {}

    // Marker of the most stringent level with p < alpha, or "".
    [[nodiscard]] std::string stars(double p_value) const {
        std::string out;
        for (const auto& [a, s] : levels_) {
            if (p_value < a) out = s;
        }
        return out;
    }

    [[nodiscard]] std::string caption() const {
        std::string out;
        for (std::size_t i = 0; i < levels_.size(); ++i) {
            if (i) out += "; ";
            out += levels_[i].second + " statistically significant at alpha level " + format_label(levels_[i].first);
        }
        return out;
    }

private:
    std::vector<std::pair<double, std::string>> levels_;
};

// ---------------------------------------------------------------------------
// SVG scenario plot

struct PlotOptions {
    int width = 640;
    int height = 400;
    std::optional<double> sample_effect;  // sampling distribution drawn at this effect (default: boundary)
    std::optional<Interval> x_range;      // default: mean -/+ 4 sd
    int samples = 241;
};

namespace detail {

class SvgCanvas {
public:
    SvgCanvas(const PlotOptions& opt, Interval xr, double ymax)
        : opt_(opt), xr_(xr), ymax_(ymax) {}

    [[nodiscard]] double px(double x) const { return kMargin + (x - xr_.lo) / xr_.width() * plot_w(); }
    [[nodiscard]] double py(double y, double top) const { return kMargin + plot_h() * (1.0 - y / top); }
    [[nodiscard]] double plot_w() const { return opt_.width - 2.0 * kMargin; }
    [[nodiscard]] double plot_h() const { return opt_.height - 2.0 * kMargin; }
    [[nodiscard]] double ymax() const { return ymax_; }

    static constexpr double kMargin = 40.0;

private:
    const PlotOptions& opt_;
    Interval xr_;
    double ymax_;
};

inline std::string num(double v) { return format_fixed(v, 2); }

template <class F>
std::string polyline_path(const SvgCanvas& cv, Interval xr, int samples, double top, F&& f) {
    std::string d;
    for (int i = 0; i < samples; ++i) {
        const double x = xr.lo + xr.width() * i / (samples - 1);
        const double y = std::clamp(f(x), 0.0, top);
        d += (i ? " L" : "M") + num(cv.px(x)) + "," + num(cv.py(y, top));
    }
    return d;
}

}  // namespace detail

// Prevalence density, the sampling distribution at one effect, one vertical
// <line> per alpha at the critical effect, and the error-rate curves
// (Type I rate on the non-meaningful side, Type II rate on the meaningful
// side, right-hand axis 0..1). Deterministic for fixed input.
template <ErrorRateModel Model>
std::string plot_scenario(const ContinuousPrevalence& prev, const Model& model, const std::vector<double>& alphas,
                          const PlotOptions& opt = {}) {
    prev.validate();
    detail::require_contract(opt.samples >= 2 && opt.width > 100 && opt.height > 100, "plot options out of range");
    const Interval xr = opt.x_range.value_or(Interval{prev.mean - 4.0 * prev.sd, prev.mean + 4.0 * prev.sd});
    detail::require_contract(!xr.empty(), "plot x range is empty");
    const double e0 = opt.sample_effect.value_or(model.boundary());
    const double ssd = model.sampling_sd(e0);
    const auto sampling = [&](double x) { return normal_pdf((x - e0) / ssd) / ssd; };
    const double ymax = 1.05 * std::max(density_at(prev, prev.mean), sampling(e0));
    const detail::SvgCanvas cv(opt, xr, ymax);

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << opt.width << "\" height=\""
        << opt.height << "\" viewBox=\"0 0 " << opt.width << " " << opt.height << "\">\n";
    const double left = cv.kMargin, right = opt.width - cv.kMargin;
    const double top = cv.kMargin, bottom = opt.height - cv.kMargin;
    svg << "<path class=\"axes\" d=\"M" << detail::num(left) << "," << detail::num(top) << " L" << detail::num(left)
        << "," << detail::num(bottom) << " L" << detail::num(right) << "," << detail::num(bottom) << " L"
        << detail::num(right) << "," << detail::num(top) << "\" fill=\"none\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << detail::num(left) << "\" y=\"" << detail::num(bottom + 16) << "\" font-size=\"11\">"
        << detail::num(xr.lo) << "</text>\n";
    svg << "<text x=\"" << detail::num(right) << "\" y=\"" << detail::num(bottom + 16)
        << "\" font-size=\"11\" text-anchor=\"end\">" << detail::num(xr.hi) << "</text>\n";

    if (model.boundary() > xr.lo && model.boundary() < xr.hi) {
        const double bx = cv.px(model.boundary());
        svg << "<path class=\"boundary\" d=\"M" << detail::num(bx) << "," << detail::num(top) << " L"
            << detail::num(bx) << "," << detail::num(bottom) << "\" stroke=\"gray\" stroke-dasharray=\"2,3\"/>\n";
    }
    svg << "<path class=\"density\" d=\""
        << detail::polyline_path(cv, xr, opt.samples, ymax, [&](double x) { return density_at(prev, x); })
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"2.5\"/>\n";
    svg << "<path class=\"sampling\" d=\"" << detail::polyline_path(cv, xr, opt.samples, ymax, sampling)
        << "\" fill=\"none\" stroke=\"black\" stroke-dasharray=\"1,2\"/>\n";

    const auto domain = model.effect_domain();
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        const double a = alphas[i];
        const auto curve = model.rejection_curve(a);
        const auto err = [&](double e) {
            if (e < domain.lo || e > domain.hi) return 0.0;
            const double r = curve(e);
            return is_meaningful(e, model.boundary(), model.direction()) ? 1.0 - r : r;
        };
        const std::string dash = i == 0 ? "6,3" : std::to_string(3 + 3 * i) + "," + std::to_string(3 + i);
        svg << "<path class=\"error-rate\" data-alpha=\"" << format_shortest(a) << "\" d=\""
            << detail::polyline_path(cv, xr, opt.samples, 1.0, err) << "\" fill=\"none\" stroke=\"steelblue\""
            << " stroke-dasharray=\"" << dash << "\"/>\n";
        const double ce = model.critical_effect(a);
        if (ce >= xr.lo && ce <= xr.hi) {
            const double cx = cv.px(ce);
            svg << "<line class=\"critical\" data-alpha=\"" << format_shortest(a) << "\" x1=\"" << detail::num(cx)
                << "\" y1=\"" << detail::num(top) << "\" x2=\"" << detail::num(cx) << "\" y2=\""
                << detail::num(bottom) << "\" stroke=\"firebrick\" stroke-width=\"" << (i == 0 ? "1.5" : "1")
                << "\" stroke-dasharray=\"" << dash << "\"/>\n";
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace multalpha
