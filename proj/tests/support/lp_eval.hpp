#pragma once

// Test-side evaluator for the exported LP text: parses rows back out of the
// file format and substitutes variable assignments numerically. Kept
// independent of the exporter so the two can disagree.

#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "flexline/env.hpp"
#include "flexline/instance.hpp"

namespace flexline::lptest {

struct LpRow {
    std::string name;
    std::vector<std::pair<double, std::string>> terms;
    char rel = '<';  // '<' means <=, '>' means >=, '=' equality
    double rhs = 0.0;
};

struct LpModel {
    std::vector<LpRow> rows;      // Subject To plus Bounds
    std::vector<std::string> binaries;
};

inline LpRow parse_row(const std::string& line) {
    LpRow row;
    std::string body = line;
    auto colon = body.find(':');
    if (colon != std::string::npos) {
        row.name = body.substr(0, colon);
        while (!row.name.empty() && row.name.front() == ' ') row.name.erase(0, 1);
        body = body.substr(colon + 1);
    }
    // split off the relation
    std::size_t rel_pos = body.find("<=");
    if (rel_pos != std::string::npos) {
        row.rel = '<';
    } else if ((rel_pos = body.find(">=")) != std::string::npos) {
        row.rel = '>';
    } else if ((rel_pos = body.find('=')) != std::string::npos) {
        row.rel = '=';
    } else {
        throw std::runtime_error("lp row without relation: " + line);
    }
    const std::string lhs = body.substr(0, rel_pos);
    row.rhs = std::stod(body.substr(rel_pos + (row.rel == '=' ? 1 : 2)));

    std::istringstream in(lhs);
    std::string token;
    double sign = 1.0;
    double coef = 1.0;
    bool have_coef = false;
    while (in >> token) {
        if (token == "+") {
            sign = 1.0;
            continue;
        }
        if (token == "-") {
            sign = -1.0;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(token[0])) || token[0] == '.') {
            coef = std::stod(token);
            have_coef = true;
            continue;
        }
        row.terms.emplace_back(sign * (have_coef ? coef : 1.0), token);
        sign = 1.0;
        coef = 1.0;
        have_coef = false;
    }
    return row;
}

inline LpModel parse_lp(const std::string& text) {
    LpModel model;
    std::istringstream in(text);
    std::string line;
    enum class Section { None, Objective, Rows, Bounds, Binaries, End } section = Section::None;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '\\') continue;
        if (line == "Minimize") { section = Section::Objective; continue; }
        if (line == "Subject To") { section = Section::Rows; continue; }
        if (line == "Bounds") { section = Section::Bounds; continue; }
        if (line == "Binaries") { section = Section::Binaries; continue; }
        if (line == "End") { section = Section::End; continue; }
        switch (section) {
            case Section::Rows:
            case Section::Bounds:
                model.rows.push_back(parse_row(line));
                break;
            case Section::Binaries: {
                std::istringstream ss(line);
                std::string v;
                while (ss >> v) model.binaries.push_back(v);
                break;
            }
            default:
                break;
        }
    }
    return model;
}

// Variable assignment realized from a simulator schedule: occupied slots take
// the recorded values, empty slots sit at the line's frontier with zero
// changeover, everything else is zero.
inline std::map<std::string, double> assignment_from_schedule(const Instance& inst,
                                                              const Schedule& schedule,
                                                              int positions_per_line) {
    std::map<std::string, double> value;
    const int J = inst.line_count();
    const int R = positions_per_line;
    std::vector<int> filled(J, 0);
    std::vector<double> frontier(J);
    for (int j = 0; j < J; ++j) frontier[j] = inst.lines[j].setup_hours;
    for (const ScheduledTask& t : schedule) {
        const std::string suffix =
            "_" + std::to_string(t.position) + "_" + std::to_string(t.line + 1);
        value["a_" + std::to_string(t.job + 1) + suffix] = 1.0;
        value["s" + suffix] = t.start_hours;
        value["t" + suffix] = t.changeover_hours;
        const double overdue =
            std::max(0.0, t.completion_hours - 24.0 * inst.jobs[t.job].demand_day);
        value["o_" + std::to_string(t.job + 1) + suffix] = overdue;
        filled[t.line] = std::max(filled[t.line], t.position);
        frontier[t.line] = std::max(frontier[t.line], t.completion_hours);
    }
    for (int j = 0; j < J; ++j) {
        for (int r = filled[j] + 1; r <= R; ++r) {
            const std::string suffix = "_" + std::to_string(r) + "_" + std::to_string(j + 1);
            value["s" + suffix] = frontier[j];
            value["t" + suffix] = 0.0;
        }
    }
    return value;
}

struct SubstitutionResult {
    int rows_checked = 0;
    std::vector<std::string> violated;
};

inline SubstitutionResult substitute(const LpModel& model,
                                     const std::map<std::string, double>& value,
                                     double tol = 1e-6) {
    SubstitutionResult result;
    for (const LpRow& row : model.rows) {
        double lhs = 0.0;
        for (const auto& [coef, var] : row.terms) {
            auto it = value.find(var);
            lhs += coef * (it == value.end() ? 0.0 : it->second);
        }
        bool ok = true;
        switch (row.rel) {
            case '<': ok = lhs <= row.rhs + tol; break;
            case '>': ok = lhs >= row.rhs - tol; break;
            case '=': ok = std::abs(lhs - row.rhs) <= tol; break;
        }
        ++result.rows_checked;
        if (!ok) result.violated.push_back(row.name);
    }
    return result;
}

}  // namespace flexline::lptest
