#include "gim/simplex.hpp"

#include <stdexcept>

namespace gim {

FeasibilityResult solve_equality_feasibility(const std::vector<std::vector<Rational>>& columns,
                                             const std::vector<Rational>& rhs) {
    size_t rows = rhs.size();
    size_t orig = columns.size();
    for (const auto& col : columns)
        if (col.size() != rows) throw std::invalid_argument("column length mismatch");

    FeasibilityResult result;
    if (rows == 0) {
        result.feasible = true;
        result.solution.assign(orig, Rational(0));
        return result;
    }

    // Tableau: original columns, one artificial per row, rhs. Rows with a
    // negative rhs are negated up front so artificials start feasible.
    size_t total = orig + rows;
    std::vector<std::vector<Rational>> t(rows, std::vector<Rational>(total + 1, Rational(0)));
    std::vector<int> flipped(rows, 1);
    for (size_t i = 0; i < rows; ++i) {
        if (rhs[i] < 0) flipped[i] = -1;
        for (size_t j = 0; j < orig; ++j) t[i][j] = flipped[i] * columns[j][i];
        t[i][orig + i] = 1;
        t[i][total] = flipped[i] * rhs[i];
    }

    // Phase-1 objective: minimize the sum of artificials. Reduced costs with
    // the artificial basis: cost[j] = c_j - sum_i t[i][j] where c_j is 0 for
    // original columns and 1 for artificials.
    std::vector<Rational> cost(total + 1, Rational(0));
    for (size_t j = 0; j <= total; ++j) {
        Rational s = 0;
        for (size_t i = 0; i < rows; ++i) s += t[i][j];
        cost[j] = (j >= orig && j < total ? Rational(1) : Rational(0)) - s;
    }

    std::vector<size_t> basis(rows);
    for (size_t i = 0; i < rows; ++i) basis[i] = orig + i;

    while (true) {
        // Bland: entering column = lowest index with negative reduced cost.
        size_t enter = total;
        for (size_t j = 0; j < total; ++j)
            if (cost[j] < 0) { enter = j; break; }
        if (enter == total) break;

        // Ratio test; ties broken by the lowest basic variable index.
        size_t leave = rows;
        Rational best_ratio = 0;
        for (size_t i = 0; i < rows; ++i) {
            if (t[i][enter] <= 0) continue;
            Rational ratio = t[i][total] / t[i][enter];
            if (leave == rows || ratio < best_ratio ||
                (ratio == best_ratio && basis[i] < basis[leave])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave == rows) throw std::logic_error("phase-1 objective unbounded below");

        Rational pivot = t[leave][enter];
        for (size_t j = 0; j <= total; ++j) t[leave][j] /= pivot;
        for (size_t i = 0; i < rows; ++i) {
            if (i == leave || t[i][enter] == 0) continue;
            Rational f = t[i][enter];
            for (size_t j = 0; j <= total; ++j) t[i][j] -= f * t[leave][j];
        }
        if (cost[enter] != 0) {
            Rational f = cost[enter];
            for (size_t j = 0; j <= total; ++j) cost[j] -= f * t[leave][j];
        }
        basis[leave] = enter;
    }

    // Objective value equals -cost[rhs column] (the cost row tracks
    // c_B . rhs_B negated into the constant slot).
    Rational objective = -cost[total];
    if (objective == 0) {
        result.feasible = true;
        result.solution.assign(orig, Rational(0));
        for (size_t i = 0; i < rows; ++i)
            if (basis[i] < orig) result.solution[basis[i]] = t[i][total];
        return result;
    }

    // Simplex multipliers: pi_i = 1 - reduced cost of artificial i, mapped
    // back through the row sign flips.
    result.feasible = false;
    result.farkas.assign(rows, Rational(0));
    for (size_t i = 0; i < rows; ++i)
        result.farkas[i] = flipped[i] * (Rational(1) - cost[orig + i]);
    return result;
}

}  // namespace gim
