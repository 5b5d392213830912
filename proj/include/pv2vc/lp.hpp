#pragma once

#include <utility>
#include <vector>

namespace pv2vc {

// Dense linear program: minimize c.x subject to rows, x >= 0.
struct LinearProgram {
    enum class Sense { Le, Ge, Eq };
    struct Row {
        std::vector<std::pair<int, double>> terms;
        Sense sense = Sense::Le;
        double rhs = 0.0;
    };

    std::vector<double> cost;
    std::vector<Row> rows;

    int add_var(double c = 0.0) {
        cost.push_back(c);
        return static_cast<int>(cost.size()) - 1;
    }
    void add_row(std::vector<std::pair<int, double>> terms, Sense sense, double rhs) {
        rows.push_back({std::move(terms), sense, rhs});
    }
};

struct LpSolution {
    enum class Status { Optimal, Infeasible, Unbounded };
    Status status = Status::Infeasible;
    double objective = 0.0;
    std::vector<double> x;
};

// Two-phase tableau simplex with Bland's rule; meant for the oracle's small programs.
LpSolution solve_lp(const LinearProgram& lp);

}  // namespace pv2vc
