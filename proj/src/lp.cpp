#include "pv2vc/lp.hpp"

#include <cmath>
#include <limits>

namespace pv2vc {

namespace {

constexpr double kEps = 1e-9;

struct Tableau {
    int m = 0, n = 0;                // rows, columns (without rhs)
    std::vector<double> a;           // m+1 rows of n+1 entries; last row is the objective
    std::vector<int> basis;          // basic column of each row
    std::vector<bool> barred;        // columns that may not enter

    double& at(int r, int c) { return a[static_cast<std::size_t>(r) * (n + 1) + c]; }

    void pivot(int pr, int pc) {
        const double p = at(pr, pc);
        for (int c = 0; c <= n; ++c) at(pr, c) /= p;
        for (int r = 0; r <= m; ++r) {
            if (r == pr) continue;
            const double f = at(r, pc);
            if (f == 0.0) continue;
            for (int c = 0; c <= n; ++c) at(r, c) -= f * at(pr, c);
            at(r, pc) = 0.0;
        }
        basis[pr] = pc;
    }

    // Returns false when unbounded.
    bool optimize() {
        while (true) {
            int enter = -1;
            for (int c = 0; c < n; ++c)
                if (!barred[c] && at(m, c) < -kEps) {
                    enter = c;
                    break;
                }
            if (enter < 0) return true;
            int leave = -1;
            double best = std::numeric_limits<double>::infinity();
            for (int r = 0; r < m; ++r) {
                const double x = at(r, enter);
                if (x <= kEps) continue;
                const double ratio = at(r, n) / x;
                if (ratio < best - kEps || (std::fabs(ratio - best) <= kEps && basis[r] < basis[leave])) {
                    best = ratio;
                    leave = r;
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter);
        }
    }
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
    const int nv = static_cast<int>(lp.cost.size());
    const int m = static_cast<int>(lp.rows.size());
    // Column layout: structural | slack/surplus | artificial.
    int slacks = 0, arts = 0;
    for (const auto& r : lp.rows) {
        const bool flip = r.rhs < 0.0;
        auto s = r.sense;
        if (flip && s != LinearProgram::Sense::Eq) s = s == LinearProgram::Sense::Le ? LinearProgram::Sense::Ge : LinearProgram::Sense::Le;
        if (s != LinearProgram::Sense::Eq) ++slacks;
        if (s != LinearProgram::Sense::Le) ++arts;
    }
    Tableau t;
    t.m = m;
    t.n = nv + slacks + arts;
    t.a.assign(static_cast<std::size_t>(m + 1) * (t.n + 1), 0.0);
    t.basis.assign(m, -1);
    t.barred.assign(t.n, false);
    int sc = nv, ac = nv + slacks;
    for (int i = 0; i < m; ++i) {
        const auto& r = lp.rows[i];
        const double sign = r.rhs < 0.0 ? -1.0 : 1.0;
        auto s = r.sense;
        if (sign < 0 && s != LinearProgram::Sense::Eq)
            s = s == LinearProgram::Sense::Le ? LinearProgram::Sense::Ge : LinearProgram::Sense::Le;
        for (const auto& [j, v] : r.terms) t.at(i, j) += sign * v;
        t.at(i, t.n) = sign * r.rhs;
        if (s == LinearProgram::Sense::Le) {
            t.at(i, sc) = 1.0;
            t.basis[i] = sc++;
        } else {
            if (s == LinearProgram::Sense::Ge) t.at(i, sc++) = -1.0;
            t.at(i, ac) = 1.0;
            t.basis[i] = ac++;
        }
    }
    LpSolution out;
    // Phase 1: minimize the artificial sum.
    for (int i = 0; i < m; ++i) {
        if (t.basis[i] < nv + slacks) continue;
        for (int c = 0; c <= t.n; ++c)
            if (c < nv + slacks || c == t.n) t.at(m, c) -= t.at(i, c);
    }
    t.optimize();
    if (-t.at(m, t.n) > 1e-7) {
        out.status = LpSolution::Status::Infeasible;
        return out;
    }
    for (int c = nv + slacks; c < t.n; ++c) t.barred[c] = true;
    // Drive remaining artificials out of the basis where possible.
    for (int i = 0; i < m; ++i) {
        if (t.basis[i] < nv + slacks) continue;
        for (int c = 0; c < nv + slacks; ++c)
            if (std::fabs(t.at(i, c)) > kEps) {
                t.pivot(i, c);
                break;
            }
    }
    // Phase 2 objective row.
    for (int c = 0; c <= t.n; ++c) t.at(m, c) = c < nv ? lp.cost[c] : 0.0;
    for (int i = 0; i < m; ++i) {
        const int b = t.basis[i];
        const double f = t.at(m, b);
        if (f == 0.0) continue;
        for (int c = 0; c <= t.n; ++c) t.at(m, c) -= f * t.at(i, c);
    }
    if (!t.optimize()) {
        out.status = LpSolution::Status::Unbounded;
        return out;
    }
    out.status = LpSolution::Status::Optimal;
    out.x.assign(nv, 0.0);
    for (int i = 0; i < m; ++i)
        if (t.basis[i] < nv) out.x[t.basis[i]] = t.at(i, t.n);
    out.objective = 0.0;
    for (int j = 0; j < nv; ++j) out.objective += lp.cost[j] * out.x[j];
    return out;
}

}  // namespace pv2vc
