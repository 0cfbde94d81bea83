// Smith Normal Form over the integers, in two elimination disciplines,
// and the lattice parametrization of the chained system
// a_i b_i = a_0 b_0 + h_i. The integer kernel of the coefficient matrix
// is generated by (lcm(a)/a_0, ..., lcm(a)/a_k), which is primitive, so a
// solvable system always yields a one-parameter family.

#include "chowla/diophantine.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <tuple>

#include "chowla/arith.hpp"

namespace chowla {

namespace {

// g = x*a + y*b with g = gcd(a, b) >= 0.
std::tuple<i128, i128, i128> extended_gcd(i128 a, i128 b) {
    i128 old_r = a, r = b;
    i128 old_x = 1, x = 0;
    i128 old_y = 0, y = 1;
    while (r != 0) {
        const i128 q = old_r / r;
        std::tie(old_r, r) = std::make_tuple(r, checked_sub(old_r, checked_mul(q, r)));
        std::tie(old_x, x) = std::make_tuple(x, checked_sub(old_x, checked_mul(q, x)));
        std::tie(old_y, y) = std::make_tuple(y, checked_sub(old_y, checked_mul(q, y)));
    }
    if (old_r < 0) {
        old_r = checked_neg(old_r);
        old_x = checked_neg(old_x);
        old_y = checked_neg(old_y);
    }
    return {old_r, old_x, old_y};
}

struct Snf {
    IntMatrix& u;
    IntMatrix& b;
    IntMatrix& v;

    void swap_rows(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t c = 0; c < b.cols(); ++c) std::swap(b.at(i, c), b.at(j, c));
        for (std::size_t c = 0; c < u.cols(); ++c) std::swap(u.at(i, c), u.at(j, c));
    }
    void swap_cols(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t r = 0; r < b.rows(); ++r) std::swap(b.at(r, i), b.at(r, j));
        for (std::size_t r = 0; r < v.rows(); ++r) std::swap(v.at(r, i), v.at(r, j));
    }
    // row_i += f * row_j
    void add_row(std::size_t i, std::size_t j, i128 f) {
        for (std::size_t c = 0; c < b.cols(); ++c)
            b.at(i, c) = checked_add(b.at(i, c), checked_mul(f, b.at(j, c)));
        for (std::size_t c = 0; c < u.cols(); ++c)
            u.at(i, c) = checked_add(u.at(i, c), checked_mul(f, u.at(j, c)));
    }
    // col_i += f * col_j
    void add_col(std::size_t i, std::size_t j, i128 f) {
        for (std::size_t r = 0; r < b.rows(); ++r)
            b.at(r, i) = checked_add(b.at(r, i), checked_mul(f, b.at(r, j)));
        for (std::size_t r = 0; r < v.rows(); ++r)
            v.at(r, i) = checked_add(v.at(r, i), checked_mul(f, v.at(r, j)));
    }
    void negate_row(std::size_t i) {
        for (std::size_t c = 0; c < b.cols(); ++c) b.at(i, c) = checked_neg(b.at(i, c));
        for (std::size_t c = 0; c < u.cols(); ++c) u.at(i, c) = checked_neg(u.at(i, c));
    }
    // (col_i, col_j) <- (x*col_i + y*col_j, -(bj/g)*col_i + (bi/g)*col_j),
    // determinant 1; maps the row-t entries (bi, bj) to (g, 0).
    void bezout_cols(std::size_t i, std::size_t j, i128 x, i128 y, i128 bi_over_g,
                     i128 bj_over_g) {
        for (std::size_t r = 0; r < b.rows(); ++r) {
            const i128 ci = b.at(r, i), cj = b.at(r, j);
            b.at(r, i) = checked_add(checked_mul(x, ci), checked_mul(y, cj));
            b.at(r, j) = checked_sub(checked_mul(bi_over_g, cj), checked_mul(bj_over_g, ci));
        }
        for (std::size_t r = 0; r < v.rows(); ++r) {
            const i128 ci = v.at(r, i), cj = v.at(r, j);
            v.at(r, i) = checked_add(checked_mul(x, ci), checked_mul(y, cj));
            v.at(r, j) = checked_sub(checked_mul(bi_over_g, cj), checked_mul(bj_over_g, ci));
        }
    }
    // row_i <- pivot * row_i - f * row_t (not unimodular unless pivot = +-1).
    void scaled_row_clear(std::size_t i, std::size_t t, i128 pivot, i128 f) {
        for (std::size_t c = 0; c < b.cols(); ++c)
            b.at(i, c) = checked_sub(checked_mul(pivot, b.at(i, c)), checked_mul(f, b.at(t, c)));
        for (std::size_t c = 0; c < u.cols(); ++c)
            u.at(i, c) = checked_sub(checked_mul(pivot, u.at(i, c)), checked_mul(f, u.at(t, c)));
    }
};

bool find_smallest_pivot(const IntMatrix& b, std::size_t t, std::size_t& pr, std::size_t& pc) {
    bool found = false;
    i128 best = 0;
    for (std::size_t r = t; r < b.rows(); ++r) {
        for (std::size_t c = t; c < b.cols(); ++c) {
            const i128 val = abs128(b.at(r, c));
            if (val != 0 && (!found || val < best)) {
                best = val;
                pr = r;
                pc = c;
                found = true;
            }
        }
    }
    return found;
}

bool find_first_nonzero(const IntMatrix& b, std::size_t t, std::size_t& pr, std::size_t& pc) {
    for (std::size_t r = t; r < b.rows(); ++r)
        for (std::size_t c = t; c < b.cols(); ++c)
            if (b.at(r, c) != 0) {
                pr = r;
                pc = c;
                return true;
            }
    return false;
}

void snf_canonical(Snf& s, std::size_t t) {
    for (;;) {
        std::size_t pr = t, pc = t;
        if (!find_smallest_pivot(s.b, t, pr, pc)) return;
        s.swap_rows(t, pr);
        s.swap_cols(t, pc);

        bool reduced = true;
        for (std::size_t i = t + 1; i < s.b.rows(); ++i) {
            if (s.b.at(i, t) == 0) continue;
            const i128 f = s.b.at(i, t) / s.b.at(t, t);
            s.add_row(i, t, checked_neg(f));
            if (s.b.at(i, t) != 0) reduced = false;
        }
        for (std::size_t j = t + 1; j < s.b.cols(); ++j) {
            if (s.b.at(t, j) == 0) continue;
            const i128 f = s.b.at(t, j) / s.b.at(t, t);
            s.add_col(j, t, checked_neg(f));
            if (s.b.at(t, j) != 0) reduced = false;
        }
        if (!reduced) continue;

        // Pull in any trailing entry the pivot does not divide, so the
        // divisibility chain holds once the diagonal is final.
        bool chain_ok = true;
        for (std::size_t i = t + 1; i < s.b.rows() && chain_ok; ++i)
            for (std::size_t j = t + 1; j < s.b.cols() && chain_ok; ++j)
                if (s.b.at(i, j) % s.b.at(t, t) != 0) {
                    s.add_row(t, i, 1);
                    chain_ok = false;
                }
        if (chain_ok) return;
    }
}

void snf_paper(Snf& s, std::size_t t) {
    std::size_t pr = t, pc = t;
    if (!find_first_nonzero(s.b, t, pr, pc)) return;
    if (s.b.at(t, t) == 0) {
        s.swap_rows(t, pr);
        s.swap_cols(t, pc);
    }
    for (std::size_t j = t + 1; j < s.b.cols(); ++j) {
        if (s.b.at(t, j) == 0) continue;
        const i128 bi = s.b.at(t, t), bj = s.b.at(t, j);
        const auto [g, x, y] = extended_gcd(bi, bj);
        s.bezout_cols(t, j, x, y, bi / g, bj / g);
    }
    const i128 pivot = s.b.at(t, t);
    // The next row is scaled by the pivot unconditionally (even when its
    // subdiagonal entry is already zero): the pivot factor absorbed into
    // the row is what turns the later diagonal entries into the prefix
    // products the gcd recursion is stated over.
    if (t + 1 < s.b.rows()) s.scaled_row_clear(t + 1, t, pivot, s.b.at(t + 1, t));
    for (std::size_t i = t + 2; i < s.b.rows(); ++i) {
        if (s.b.at(i, t) == 0) continue;
        s.scaled_row_clear(i, t, pivot, s.b.at(i, t));
    }
}

} // namespace

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::multiply(const IntMatrix& other) const {
    if (cols_ != other.rows()) throw DomainError("matrix multiply: dimension mismatch");
    IntMatrix out(rows_, other.cols());
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t k = 0; k < cols_; ++k) {
            const i128 val = at(r, k);
            if (val == 0) continue;
            for (std::size_t c = 0; c < other.cols(); ++c)
                out.at(r, c) = checked_add(out.at(r, c), checked_mul(val, other.at(k, c)));
        }
    return out;
}

i128 determinant(const IntMatrix& m) {
    if (m.rows() != m.cols()) throw DomainError("determinant: matrix must be square");
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    IntMatrix w = m;
    int sign = 1;
    i128 prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (w.at(k, k) == 0) {
            std::size_t swap_row = k;
            for (std::size_t i = k + 1; i < n; ++i)
                if (w.at(i, k) != 0) {
                    swap_row = i;
                    break;
                }
            if (swap_row == k) return 0;
            for (std::size_t c = 0; c < n; ++c) std::swap(w.at(k, c), w.at(swap_row, c));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                w.at(i, j) = checked_sub(checked_mul(w.at(i, j), w.at(k, k)),
                                         checked_mul(w.at(i, k), w.at(k, j))) /
                             prev;
        prev = w.at(k, k);
    }
    return sign > 0 ? w.at(n - 1, n - 1) : checked_neg(w.at(n - 1, n - 1));
}

SnfDecomposition smith_normal_form(const IntMatrix& a, SnfMode mode) {
    bool nonzero = false;
    for (std::size_t r = 0; r < a.rows() && !nonzero; ++r)
        for (std::size_t c = 0; c < a.cols() && !nonzero; ++c)
            if (a.at(r, c) != 0) nonzero = true;
    if (!nonzero) throw DomainError("smith_normal_form: matrix is zero");

    SnfDecomposition out{IntMatrix::identity(a.rows()), a, IntMatrix::identity(a.cols()), mode};
    Snf s{out.u, out.b, out.v};
    const std::size_t steps = std::min(a.rows(), a.cols());
    for (std::size_t t = 0; t < steps; ++t) {
        if (mode == SnfMode::canonical)
            snf_canonical(s, t);
        else
            snf_paper(s, t);
        if (out.b.at(t, t) < 0) s.negate_row(t);
    }

    if (!(out.u.multiply(a).multiply(out.v) == out.b))
        throw Error("smith_normal_form: internal verification U*A*V != B failed");
    out.det_u = determinant(out.u);
    out.det_v = determinant(out.v);
    if (out.det_v != 1 && out.det_v != -1)
        throw Error("smith_normal_form: V lost unimodularity");
    if (mode == SnfMode::canonical && out.det_u != 1 && out.det_u != -1)
        throw Error("smith_normal_form: U lost unimodularity");
    return out;
}

void DiophantineSystem::validate() const {
    if (h.empty()) throw DomainError("system needs at least one equation");
    if (a.size() != h.size() + 1)
        throw DomainError("system needs one more coefficient than shifts");
    for (std::uint64_t ai : a)
        if (ai == 0) throw DomainError("coefficients must be positive");
}

IntMatrix DiophantineSystem::coefficient_matrix() const {
    const std::size_t k = h.size();
    IntMatrix m(k, k + 1);
    for (std::size_t i = 0; i < k; ++i) {
        m.at(i, i) = static_cast<i128>(a[i]);
        m.at(i, i + 1) = -static_cast<i128>(a[i + 1]);
    }
    return m;
}

std::vector<i128> DiophantineSystem::rhs() const {
    const std::size_t k = h.size();
    std::vector<i128> c(k);
    c[0] = -i128{h[0]};
    for (std::size_t i = 1; i < k; ++i) c[i] = i128{h[i - 1]} - i128{h[i]};
    return c;
}

SolveOutcome solve_system(const DiophantineSystem& sys) {
    sys.validate();
    SolveOutcome outcome;

    // gcd(a_i, a_j) | (h_i - h_j) over all pairs, h_0 = 0. Necessary but
    // not sufficient; solvability is decided by the Smith form below.
    outcome.pairwise_gcd_condition = true;
    const std::size_t n = sys.a.size();
    std::vector<i128> shifts(n, 0);
    for (std::size_t i = 1; i < n; ++i) shifts[i] = sys.h[i - 1];
    for (std::size_t i = 0; i < n && outcome.pairwise_gcd_condition; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const i128 g = gcd128(i128{sys.a[i]}, i128{sys.a[j]});
            if ((shifts[i] - shifts[j]) % g != 0) {
                outcome.pairwise_gcd_condition = false;
                break;
            }
        }

    const IntMatrix a = sys.coefficient_matrix();
    const std::vector<i128> c = sys.rhs();
    const SnfDecomposition snf = smith_normal_form(a, SnfMode::canonical);

    const std::size_t k = sys.h.size();
    std::vector<i128> d(k, 0);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            d[i] = checked_add(d[i], checked_mul(snf.u.at(i, j), c[j]));

    std::vector<i128> y(k + 1, 0);
    for (std::size_t i = 0; i < k; ++i) {
        const i128 diag = snf.b.at(i, i);
        if (diag == 0) {
            if (d[i] != 0) return outcome; // unsolvable
            throw Error("solve_system: unexpected rank deficiency");
        }
        if (d[i] % diag != 0) return outcome; // unsolvable
        y[i] = d[i] / diag;
    }

    SolutionFamily fam;
    fam.particular.assign(k + 1, 0);
    for (std::size_t i = 0; i <= k; ++i)
        for (std::size_t j = 0; j <= k; ++j)
            fam.particular[i] =
                checked_add(fam.particular[i], checked_mul(snf.v.at(i, j), y[j]));

    const u128 l = lcm_many(std::span<const std::uint64_t>(sys.a));
    if (l > (~u128{0} >> 1)) throw OverflowError("solve_system: lcm exceeds 127 bits");
    fam.lcm = static_cast<i128>(l);
    fam.step.resize(k + 1);
    for (std::size_t i = 0; i <= k; ++i) fam.step[i] = fam.lcm / i128{sys.a[i]};

    // The free column of V generates the same rank-1 kernel lattice as the
    // step vector; verify agreement up to sign.
    bool plus = true, minus = true;
    for (std::size_t i = 0; i <= k; ++i) {
        if (snf.v.at(i, k) != fam.step[i]) plus = false;
        if (snf.v.at(i, k) != checked_neg(fam.step[i])) minus = false;
    }
    if (!plus && !minus) throw Error("solve_system: kernel generator mismatch");

    outcome.family = minimal_positive_particular(std::move(fam));
    return outcome;
}

SolutionFamily minimal_positive_particular(SolutionFamily family) {
    if (family.particular.empty() || family.particular.size() != family.step.size())
        throw DomainError("minimal_positive_particular: malformed family");
    i128 shift = 0;
    bool first = true;
    for (std::size_t i = 0; i < family.particular.size(); ++i) {
        if (family.step[i] <= 0) throw DomainError("minimal_positive_particular: step must be positive");
        // smallest t with particular[i] + t*step[i] >= 1
        const i128 t = ceil_div(checked_sub(i128{1}, family.particular[i]), family.step[i]);
        if (first || t > shift) shift = t;
        first = false;
    }
    for (std::size_t i = 0; i < family.particular.size(); ++i)
        family.particular[i] =
            checked_add(family.particular[i], checked_mul(shift, family.step[i]));
    return family;
}

std::vector<std::vector<i128>> brute_force_solutions(const DiophantineSystem& sys,
                                                     Interval64 box) {
    sys.validate();
    if (box.lo > box.hi) throw DomainError("brute_force_solutions: empty box");
    std::vector<std::vector<i128>> out;
    const std::size_t k = sys.h.size();
    for (std::int64_t b0 = box.lo; b0 <= box.hi; ++b0) {
        std::vector<i128> tuple;
        tuple.reserve(k + 1);
        tuple.push_back(b0);
        const i128 base = checked_mul(i128{sys.a[0]}, i128{b0});
        bool ok = true;
        for (std::size_t i = 0; i < k; ++i) {
            const i128 num = checked_add(base, i128{sys.h[i]});
            const i128 den = i128{sys.a[i + 1]};
            if (num % den != 0) {
                ok = false;
                break;
            }
            tuple.push_back(num / den);
        }
        if (ok) out.push_back(std::move(tuple));
    }
    return out;
}

std::vector<std::vector<i128>> family_solutions_in_box(const SolutionFamily& fam,
                                                       Interval64 box) {
    if (fam.particular.empty()) throw DomainError("family_solutions_in_box: malformed family");
    std::vector<std::vector<i128>> out;
    const i128 s0 = fam.step[0];
    const i128 lo = ceil_div(checked_sub(i128{box.lo}, fam.particular[0]), s0);
    const i128 hi = floor_div(checked_sub(i128{box.hi}, fam.particular[0]), s0);
    for (i128 m = lo; m <= hi; ++m) {
        std::vector<i128> tuple(fam.particular.size());
        for (std::size_t i = 0; i < tuple.size(); ++i)
            tuple[i] = checked_add(fam.particular[i], checked_mul(m, fam.step[i]));
        out.push_back(std::move(tuple));
    }
    return out;
}

} // namespace chowla
