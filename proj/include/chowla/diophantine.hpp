#pragma once

// Integer matrix diagonalization (Smith Normal Form) and the solver for
// the coupled system a_i*b_i = a_0*b_0 + h_i, whose solution set is a
// one-parameter lattice family b_i = particular_i + m * lcm(a)/a_i.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "chowla/errors.hpp"
#include "chowla/int128.hpp"

namespace chowla {

class IntMatrix {
  public:
    IntMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols, 0) {}

    static IntMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    i128& at(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const i128& at(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    IntMatrix multiply(const IntMatrix& other) const; // checked
    bool operator==(const IntMatrix& other) const = default;

  private:
    std::size_t rows_, cols_;
    std::vector<i128> entries_;
};

// Exact determinant (fraction-free elimination).
i128 determinant(const IntMatrix& m);

enum class SnfMode {
    // Divisibility-chain form: d_1 | d_2 | ..., unimodular U and V,
    // smallest-absolute-value pivoting.
    canonical,
    // Column-Bezout/row-scaling elimination order. V stays unimodular;
    // U is integer and invertible over the rationals but its determinant
    // picks up one factor of the pivot per scaled row operation, which is
    // what makes the gcd recursion appear on the diagonal for banded
    // systems. No divisibility chain is enforced.
    paper_recursion,
};

struct SnfDecomposition {
    IntMatrix u, b, v;
    SnfMode mode;
    i128 det_u = 0;
    i128 det_v = 0;
};

SnfDecomposition smith_normal_form(const IntMatrix& a, SnfMode mode = SnfMode::canonical);

// a = (a_0, ..., a_k) all positive; h = (h_1, ..., h_k).
struct DiophantineSystem {
    std::vector<std::uint64_t> a;
    std::vector<std::int64_t> h;

    void validate() const;
    // Coefficient matrix of the equivalent chained system
    // a_{i-1} b_{i-1} - a_i b_i = -(h_i - h_{i-1}).
    IntMatrix coefficient_matrix() const;
    std::vector<i128> rhs() const;
};

struct SolutionFamily {
    std::vector<i128> particular; // b_0*, ..., b_k*
    std::vector<i128> step;       // lcm(a)/a_i, positive
    i128 lcm = 0;
};

struct SolveOutcome {
    std::optional<SolutionFamily> family; // nullopt when unsolvable
    // Necessary condition gcd(a_i, a_j) | (h_i - h_j) over all pairs
    // (with h_0 = 0); reported as a diagnostic, solvability itself is
    // decided by the Smith form.
    bool pairwise_gcd_condition = false;
};

SolveOutcome solve_system(const DiophantineSystem& sys);

// Translate the family so that every particular entry is positive and
// subtracting one more step would make some entry non-positive.
SolutionFamily minimal_positive_particular(SolutionFamily family);

struct Interval64 {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
};

// All exact integer solutions (b_0, ..., b_k) with b_0 in the box.
std::vector<std::vector<i128>> brute_force_solutions(const DiophantineSystem& sys, Interval64 box);

// Solutions of a family with b_0 restricted to the box, in increasing b_0.
std::vector<std::vector<i128>> family_solutions_in_box(const SolutionFamily& fam, Interval64 box);

} // namespace chowla
