#include "dimerlab/homology.hpp"

#include <stdexcept>

namespace dimerlab {

IntMat IntMat::identity(int n) {
    IntMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMat IntMat::mul(const IntMat& o) const {
    if (cols != o.rows) throw std::logic_error("IntMat::mul shape mismatch");
    IntMat r(rows, o.cols);
    for (int i = 0; i < rows; ++i)
        for (int k = 0; k < cols; ++k) {
            const Integer& x = at(i, k);
            if (x == 0) continue;
            for (int j = 0; j < o.cols; ++j)
                r.at(i, j) += x * o.at(k, j);
        }
    return r;
}

std::vector<Integer> IntMat::mul_vec(const std::vector<Integer>& v) const {
    if (static_cast<int>(v.size()) != cols) throw std::logic_error("IntMat::mul_vec shape mismatch");
    std::vector<Integer> r(rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            if (at(i, j) != 0) r[i] += at(i, j) * v[j];
    return r;
}

namespace {

struct SnfWork {
    IntMat d, u, v;

    void swap_rows(int i, int j) {
        if (i == j) return;
        for (int c = 0; c < d.cols; ++c) std::swap(d.at(i, c), d.at(j, c));
        for (int c = 0; c < u.cols; ++c) std::swap(u.at(i, c), u.at(j, c));
    }
    void swap_cols(int i, int j) {
        if (i == j) return;
        for (int r = 0; r < d.rows; ++r) std::swap(d.at(r, i), d.at(r, j));
        for (int r = 0; r < v.rows; ++r) std::swap(v.at(r, i), v.at(r, j));
    }
    // row i -= q * row j
    void row_op(int i, int j, const Integer& q) {
        if (q == 0) return;
        for (int c = 0; c < d.cols; ++c) d.at(i, c) -= q * d.at(j, c);
        for (int c = 0; c < u.cols; ++c) u.at(i, c) -= q * u.at(j, c);
    }
    // col i -= q * col j
    void col_op(int i, int j, const Integer& q) {
        if (q == 0) return;
        for (int r = 0; r < d.rows; ++r) d.at(r, i) -= q * d.at(r, j);
        for (int r = 0; r < v.rows; ++r) v.at(r, i) -= q * v.at(r, j);
    }
    void negate_row(int i) {
        for (int c = 0; c < d.cols; ++c) d.at(i, c) = -d.at(i, c);
        for (int c = 0; c < u.cols; ++c) u.at(i, c) = -u.at(i, c);
    }
};

// Floor division quotient, so remainders satisfy 0 <= r < |b| progress.
Integer div_round(const Integer& a, const Integer& b) {
    return a / b; // truncation suffices: |a - q*b| < |b| is not guaranteed to
                  // shrink the pivot by itself, the outer loop re-picks pivots.
}

// Diagonalize w.d in place; returns the rank.
int diagonalize(SnfWork& w) {
    int n = std::min(w.d.rows, w.d.cols);
    int t = 0;
    for (; t < n; ++t) {
        // Deterministic pivot: smallest |entry| != 0 in the remaining block,
        // row-major tie break.
        int pr = -1, pc = -1;
        for (int i = t; i < w.d.rows; ++i)
            for (int j = t; j < w.d.cols; ++j) {
                const Integer& x = w.d.at(i, j);
                if (x == 0) continue;
                if (pr < 0 || abs_int(x) < abs_int(w.d.at(pr, pc))) { pr = i; pc = j; }
            }
        if (pr < 0) break;
        w.swap_rows(t, pr);
        w.swap_cols(t, pc);
        bool clean = false;
        while (!clean) {
            clean = true;
            for (int i = t + 1; i < w.d.rows; ++i) {
                if (w.d.at(i, t) == 0) continue;
                Integer q = div_round(w.d.at(i, t), w.d.at(t, t));
                w.row_op(i, t, q);
                if (w.d.at(i, t) != 0) { w.swap_rows(t, i); clean = false; }
            }
            for (int j = t + 1; j < w.d.cols; ++j) {
                if (w.d.at(t, j) == 0) continue;
                Integer q = div_round(w.d.at(t, j), w.d.at(t, t));
                w.col_op(j, t, q);
                if (w.d.at(t, j) != 0) { w.swap_cols(t, j); clean = false; }
            }
        }
        if (w.d.at(t, t) < 0) w.negate_row(t);
    }
    return t;
}

} // namespace

SmithForm smith_normal_form(const IntMat& m) {
    SnfWork w{m, IntMat::identity(m.rows), IntMat::identity(m.cols)};
    int t = diagonalize(w);
    // Enforce divisibility d_i | d_{i+1}: fold the offending column in and
    // re-diagonalize; each fold strictly reduces the product of leading gcd
    // defects, so this terminates.
    bool ok = false;
    while (!ok) {
        ok = true;
        for (int i = 0; i + 1 < t && ok; ++i)
            if (w.d.at(i + 1, i + 1) % w.d.at(i, i) != 0) {
                w.col_op(i, i + 1, Integer(-1)); // col i += col i+1
                t = diagonalize(w);
                ok = false;
            }
    }
    SmithForm f;
    f.d = w.d;
    f.u = w.u;
    f.v = w.v;
    f.rank = t;
    return f;
}

std::vector<Integer> SmithForm::diag() const {
    std::vector<Integer> r;
    int n = std::min(d.rows, d.cols);
    for (int i = 0; i < n; ++i) r.push_back(d.at(i, i));
    return r;
}

std::optional<std::vector<Integer>> solve_integer(const IntMat& m, const std::vector<Integer>& b) {
    SmithForm f = smith_normal_form(m);
    std::vector<Integer> ub = f.u.mul_vec(b);
    std::vector<Integer> y(m.cols);
    for (int i = 0; i < m.rows; ++i) {
        if (i < f.rank) {
            if (ub[i] % f.d.at(i, i) != 0) return std::nullopt;
            y[i] = ub[i] / f.d.at(i, i);
        } else if (ub[i] != 0) {
            return std::nullopt;
        }
    }
    return f.v.mul_vec(y);
}

IntMat integer_kernel(const IntMat& m) {
    SmithForm f = smith_normal_form(m);
    IntMat k(m.cols, m.cols - f.rank);
    for (int j = f.rank; j < m.cols; ++j)
        for (int i = 0; i < m.cols; ++i)
            k.at(i, j - f.rank) = f.v.at(i, j);
    return k;
}

H1Coordinates::H1Coordinates(const IntMat& d1, const IntMat& d2) {
    kernel_ = integer_kernel(d1);
    kernel_snf_ = smith_normal_form(kernel_);
    // Express the columns of d2 (face boundaries) in kernel coordinates.
    int z = kernel_.cols;
    IntMat x(z, d2.cols);
    for (int j = 0; j < d2.cols; ++j) {
        std::vector<Integer> col(d2.rows);
        for (int i = 0; i < d2.rows; ++i) col[i] = d2.at(i, j);
        auto c = solve_integer(kernel_, col);
        if (!c) throw std::logic_error("face boundary is not a cycle");
        for (int i = 0; i < z; ++i) x.at(i, j) = (*c)[i];
    }
    rel_ = smith_normal_form(x);
    rank_ = z - rel_.rank;
    for (int i = 0; i < rel_.rank; ++i)
        if (rel_.d.at(i, i) != 1) torsion_free_ = false;
}

std::vector<Integer> H1Coordinates::cycle_class(const std::vector<Integer>& edge_vector) const {
    // Coordinates in the kernel basis.
    std::vector<Integer> ub = kernel_snf_.u.mul_vec(edge_vector);
    std::vector<Integer> y(kernel_.cols);
    for (int i = 0; i < kernel_.rows; ++i) {
        if (i < kernel_snf_.rank) {
            if (ub[i] % kernel_snf_.d.at(i, i) != 0) throw std::logic_error("vector not a cycle");
            y[i] = ub[i] / kernel_snf_.d.at(i, i);
        } else if (ub[i] != 0) {
            throw std::logic_error("vector not a cycle");
        }
    }
    std::vector<Integer> c = kernel_snf_.v.mul_vec(y);
    // Free coordinates of the quotient by im d2: components rank.. of U*c.
    std::vector<Integer> uc = rel_.u.mul_vec(c);
    std::vector<Integer> cls(uc.begin() + rel_.rank, uc.end());
    return cls;
}

} // namespace dimerlab
