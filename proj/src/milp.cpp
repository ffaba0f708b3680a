#include "flexline/milp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "flexline/textio.hpp"

namespace flexline {

double auto_big_m(const Instance& inst) {
    double m = inst.horizon_hours();
    for (int i = 0; i < inst.job_count(); ++i) {
        double worst = 0.0;
        for (int j = 0; j < inst.line_count(); ++j) {
            if (inst.eligible[i][j]) worst = std::max(worst, inst.processing_hours(i, j));
        }
        m += worst;
    }
    double max_changeover = 0.0;
    for (const auto& row : inst.changeover) {
        for (const auto& col : row) {
            for (double c : col) max_changeover = std::max(max_changeover, c);
        }
    }
    m += inst.job_count() * max_changeover;
    double max_setup = 0.0;
    for (const Line& line : inst.lines) max_setup = std::max(max_setup, line.setup_hours);
    return m + max_setup;
}

namespace {

std::string var_a(int i, int r, int j) {
    return "a_" + std::to_string(i + 1) + "_" + std::to_string(r) + "_" + std::to_string(j + 1);
}
std::string var_s(int r, int j) {
    return "s_" + std::to_string(r) + "_" + std::to_string(j + 1);
}
std::string var_t(int r, int j) {
    return "t_" + std::to_string(r) + "_" + std::to_string(j + 1);
}
std::string var_o(int i, int r, int j) {
    return "o_" + std::to_string(i + 1) + "_" + std::to_string(r) + "_" + std::to_string(j + 1);
}

// "+ 2.5 x" / "- x" style term; coefficient 1 prints bare.
void term(std::string& row, double coef, const std::string& var, bool first = false) {
    if (coef >= 0.0) {
        row += first ? "" : " + ";
    } else {
        row += first ? "- " : " - ";
    }
    double mag = std::abs(coef);
    if (mag != 1.0) {
        row += format_double(mag);
        row += ' ';
    }
    row += var;
}

}  // namespace

std::string export_lp(const Instance& inst, const MilpExportConfig& config) {
    auto violations = validate(inst);
    if (!violations.empty()) {
        throw std::invalid_argument("export_lp: invalid instance: " + violations.front().message);
    }
    const int I = inst.job_count();
    const int J = inst.line_count();
    const int R = config.positions_per_line > 0 ? config.positions_per_line : I;
    if (static_cast<long long>(R) * J < I) {
        throw std::invalid_argument("export_lp: R*J < I admits no assignment");
    }
    if (config.mode == ObjectiveMode::Weighted && (config.w1 < 0.0 || config.w2 < 0.0)) {
        throw std::invalid_argument("export_lp: weights must be >= 0");
    }
    const double M = config.big_m > 0.0 ? config.big_m : auto_big_m(inst);
    if (M <= inst.horizon_hours()) {
        throw std::invalid_argument("export_lp: big_m must exceed the horizon");
    }

    std::string lp;
    lp += "\\ position-based assembly line dispatching model\n";
    lp += "\\ I=" + std::to_string(I) + " J=" + std::to_string(J) + " R=" + std::to_string(R) +
          " M=" + format_double(M) + "\n";
    lp += "Minimize\n";
    {
        std::string obj = " obj:";
        bool first = true;
        const double wt = config.mode == ObjectiveMode::LexStage2 ? 0.0
                          : config.mode == ObjectiveMode::Weighted ? config.w1
                                                                   : 1.0;
        const double wo = config.mode == ObjectiveMode::LexStage1 ? 0.0
                          : config.mode == ObjectiveMode::Weighted ? config.w2
                                                                   : 1.0;
        if (wt != 0.0) {
            for (int r = 1; r <= R; ++r) {
                for (int j = 0; j < J; ++j) {
                    obj += first ? " " : " + ";
                    if (wt != 1.0) obj += format_double(wt) + " ";
                    obj += var_t(r, j);
                    first = false;
                }
            }
        }
        if (wo != 0.0) {
            for (int i = 0; i < I; ++i) {
                for (int r = 1; r <= R; ++r) {
                    for (int j = 0; j < J; ++j) {
                        if (!inst.eligible[i][j]) continue;
                        obj += first ? " " : " + ";
                        if (wo != 1.0) obj += format_double(wo) + " ";
                        obj += var_o(i, r, j);
                        first = false;
                    }
                }
            }
        }
        if (first) obj += " 0 " + var_s(1, 0);  // degenerate but well-formed
        lp += obj + "\n";
    }

    lp += "Subject To\n";
    // eq 1: each slot takes at most one job
    for (int r = 1; r <= R; ++r) {
        for (int j = 0; j < J; ++j) {
            std::string row = " eq1_" + std::to_string(r) + "_" + std::to_string(j + 1) + ":";
            bool any = false;
            for (int i = 0; i < I; ++i) {
                if (!inst.eligible[i][j]) continue;
                row += any ? " + " : " ";
                row += var_a(i, r, j);
                any = true;
            }
            if (!any) continue;
            lp += row + " <= 1\n";
        }
    }
    // eq 2: each job dispatched exactly once
    for (int i = 0; i < I; ++i) {
        std::string row = " eq2_" + std::to_string(i + 1) + ":";
        bool any = false;
        for (int r = 1; r <= R; ++r) {
            for (int j = 0; j < J; ++j) {
                if (!inst.eligible[i][j]) continue;
                row += any ? " + " : " ";
                row += var_a(i, r, j);
                any = true;
            }
        }
        lp += row + " = 1\n";
    }
    // eq 3: eligibility (ineligible pairs have no variables at all)
    for (int i = 0; i < I; ++i) {
        for (int j = 0; j < J; ++j) {
            if (!inst.eligible[i][j]) continue;
            std::string row = " eq3_" + std::to_string(i + 1) + "_" + std::to_string(j + 1) + ":";
            for (int r = 1; r <= R; ++r) {
                row += r == 1 ? " " : " + ";
                row += var_a(i, r, j);
            }
            lp += row + " <= 1\n";
        }
    }
    // eq 4: no start before the demand day opens
    for (int i = 0; i < I; ++i) {
        for (int r = 1; r <= R; ++r) {
            for (int j = 0; j < J; ++j) {
                if (!inst.eligible[i][j]) continue;
                std::string row = " eq4_" + std::to_string(i + 1) + "_" + std::to_string(r) + "_" +
                                  std::to_string(j + 1) + ": ";
                term(row, 1.0, var_s(r, j), true);
                term(row, -M, var_a(i, r, j));
                row += " >= " + format_double(24.0 * (inst.jobs[i].demand_day - 1) - M);
                lp += row + "\n";
            }
        }
    }
    // eq 5: line setup precedes the first changeover
    for (int j = 0; j < J; ++j) {
        std::string row = " eq5_" + std::to_string(j + 1) + ": ";
        term(row, 1.0, var_s(1, j), true);
        term(row, -1.0, var_t(1, j));
        row += " >= " + format_double(inst.lines[j].setup_hours);
        lp += row + "\n";
    }
    // eq 6: completion beyond the due day shows up in o
    for (int i = 0; i < I; ++i) {
        for (int r = 1; r <= R; ++r) {
            for (int j = 0; j < J; ++j) {
                if (!inst.eligible[i][j]) continue;
                std::string row = " eq6_" + std::to_string(i + 1) + "_" + std::to_string(r) + "_" +
                                  std::to_string(j + 1) + ": ";
                term(row, 1.0, var_s(r, j), true);
                term(row, inst.processing_hours(i, j) + M, var_a(i, r, j));
                term(row, -1.0, var_o(i, r, j));
                row += " <= " + format_double(24.0 * inst.jobs[i].demand_day + M);
                lp += row + "\n";
            }
        }
    }
    // eq 8: sequence-dependent changeover (i at slot r, ip at slot r-1)
    for (int i = 0; i < I; ++i) {
        for (int ip = 0; ip < I; ++ip) {
            if (ip == i) continue;
            for (int r = 2; r <= R; ++r) {
                for (int j = 0; j < J; ++j) {
                    if (!inst.eligible[i][j] || !inst.eligible[ip][j]) continue;
                    std::string row = " eq8_" + std::to_string(i + 1) + "_" +
                                      std::to_string(ip + 1) + "_" + std::to_string(r) + "_" +
                                      std::to_string(j + 1) + ": ";
                    term(row, 1.0, var_t(r, j), true);
                    term(row, -M, var_a(i, r, j));
                    term(row, -M, var_a(ip, r - 1, j));
                    row += " >= " + format_double(inst.changeover_between(ip, i, j) - 2.0 * M);
                    lp += row + "\n";
                }
            }
        }
    }
    // eq 9: first changeover on each line
    for (int i = 0; i < I; ++i) {
        for (int j = 0; j < J; ++j) {
            if (!inst.eligible[i][j]) continue;
            std::string row =
                " eq9_" + std::to_string(i + 1) + "_" + std::to_string(j + 1) + ": ";
            term(row, 1.0, var_t(1, j), true);
            term(row, -M, var_a(i, 1, j));
            row += " >= " + format_double(inst.initial_changeover(i, j) - M);
            lp += row + "\n";
        }
    }
    // eq 10: neighboring slots do not overlap
    for (int i = 0; i < I; ++i) {
        for (int r = 1; r <= R - 1; ++r) {
            for (int j = 0; j < J; ++j) {
                if (!inst.eligible[i][j]) continue;
                std::string row = " eq10_" + std::to_string(i + 1) + "_" + std::to_string(r) +
                                  "_" + std::to_string(j + 1) + ": ";
                term(row, 1.0, var_s(r, j), true);
                term(row, inst.processing_hours(i, j) + M, var_a(i, r, j));
                term(row, 1.0, var_t(r + 1, j));
                term(row, -1.0, var_s(r + 1, j));
                row += " <= " + format_double(M);
                lp += row + "\n";
            }
        }
    }
    if (config.mode == ObjectiveMode::LexStage2) {
        std::string row = " lex_obj1: ";
        bool first = true;
        for (int r = 1; r <= R; ++r) {
            for (int j = 0; j < J; ++j) {
                term(row, 1.0, var_t(r, j), first);
                first = false;
            }
        }
        row += " <= " + format_double(config.obj1_bound + config.epsilon);
        lp += row + "\n";
    }

    // eq 7 lives here: the o variables are bounded below by zero.
    lp += "Bounds\n";
    for (int r = 1; r <= R; ++r) {
        for (int j = 0; j < J; ++j) {
            lp += " " + var_s(r, j) + " >= 0\n";
        }
    }
    for (int r = 1; r <= R; ++r) {
        for (int j = 0; j < J; ++j) {
            lp += " " + var_t(r, j) + " >= 0\n";
        }
    }
    for (int i = 0; i < I; ++i) {
        for (int r = 1; r <= R; ++r) {
            for (int j = 0; j < J; ++j) {
                if (!inst.eligible[i][j]) continue;
                lp += " " + var_o(i, r, j) + " >= 0\n";
            }
        }
    }
    lp += "Binaries\n";
    for (int i = 0; i < I; ++i) {
        for (int r = 1; r <= R; ++r) {
            for (int j = 0; j < J; ++j) {
                if (!inst.eligible[i][j]) continue;
                lp += " " + var_a(i, r, j) + "\n";
            }
        }
    }
    lp += "End\n";
    return lp;
}

namespace {

struct Evaluated {
    Schedule schedule;
    double obj1 = 0.0;
    double obj2 = 0.0;
    std::string bytes;  // tie-break key, filled lazily
};

// Realizes fixed per-line sequences through the simulator.
Evaluated realize(const Instance& inst, const std::vector<std::vector<int>>& sequences) {
    EnvState state = reset(inst);
    for (int j = 0; j < inst.line_count(); ++j) {
        for (int job : sequences[j]) {
            apply_step(state, make_candidate(state, job, j));
        }
    }
    Evaluated ev;
    ev.schedule = state.schedule();
    ev.obj1 = state.changeover_total();
    ev.obj2 = state.tardiness_total();
    return ev;
}

bool advance_permutations(std::vector<std::vector<int>>& seqs) {
    for (auto& seq : seqs) {
        if (std::next_permutation(seq.begin(), seq.end())) return true;
        // wrapped back to sorted order; carry to the next line
    }
    return false;
}

}  // namespace

ExactSolution exact_solve(const Instance& inst, const ExactLimits& limits) {
    auto violations = validate(inst);
    if (!violations.empty()) {
        throw std::invalid_argument("exact_solve: invalid instance: " +
                                    violations.front().message);
    }
    const int I = inst.job_count();
    const int J = inst.line_count();
    if (I > limits.max_jobs || J > limits.max_lines) {
        throw std::invalid_argument("exact_solve: instance exceeds enumeration limits (" +
                                    std::to_string(limits.max_jobs) + " jobs, " +
                                    std::to_string(limits.max_lines) + " lines)");
    }

    bool have_best = false;
    Evaluated best;
    std::vector<int> assignment(I, -1);
    std::vector<std::vector<int>> sequences(J);

    auto consider = [&](Evaluated ev) {
        if (!have_best || ev.obj1 < best.obj1 ||
            (ev.obj1 == best.obj1 && ev.obj2 < best.obj2)) {
            best = std::move(ev);
            best.bytes.clear();
            have_best = true;
            return;
        }
        if (ev.obj1 == best.obj1 && ev.obj2 == best.obj2) {
            if (best.bytes.empty()) best.bytes = save_schedule(best.schedule);
            ev.bytes = save_schedule(ev.schedule);
            if (ev.bytes < best.bytes) best = std::move(ev);
        }
    };

    auto evaluate_assignment = [&]() {
        for (auto& seq : sequences) seq.clear();
        for (int i = 0; i < I; ++i) sequences[assignment[i]].push_back(i);
        for (auto& seq : sequences) std::sort(seq.begin(), seq.end());
        do {
            consider(realize(inst, sequences));
        } while (advance_permutations(sequences));
    };

    auto recurse = [&](auto&& self, int job) -> void {
        if (job == I) {
            evaluate_assignment();
            return;
        }
        for (int j = 0; j < J; ++j) {
            if (!inst.eligible[job][j]) continue;
            assignment[job] = j;
            self(self, job + 1);
        }
    };
    recurse(recurse, 0);

    ExactSolution sol;
    sol.schedule = std::move(best.schedule);
    sol.obj1 = best.obj1;
    sol.obj2 = best.obj2;
    sol.optimal = true;
    return sol;
}

}  // namespace flexline
