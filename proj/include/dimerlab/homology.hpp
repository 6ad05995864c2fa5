#ifndef DIMERLAB_HOMOLOGY_HPP
#define DIMERLAB_HOMOLOGY_HPP

#include <vector>
#include <optional>

#include "dimerlab/rational.hpp"

namespace dimerlab {

// Dense integer matrix, row-major.
struct IntMat {
    int rows = 0;
    int cols = 0;
    std::vector<Integer> a;

    IntMat() = default;
    IntMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    Integer& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    const Integer& at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

    static IntMat identity(int n);
    IntMat mul(const IntMat& o) const;
    std::vector<Integer> mul_vec(const std::vector<Integer>& v) const;
    bool operator==(const IntMat& o) const = default;
};

// Smith normal form U*A*V = D with U, V unimodular and D diagonal with
// d_i | d_{i+1}.  Pivot choice is deterministic: smallest nonzero absolute
// value, ties broken row-major.
struct SmithForm {
    IntMat d;          // diagonal form, same shape as input
    IntMat u;          // rows x rows
    IntMat v;          // cols x cols
    int rank = 0;      // number of nonzero diagonal entries
    std::vector<Integer> diag() const;
};

SmithForm smith_normal_form(const IntMat& m);

// Integer solution x of A x = b, if one exists.
std::optional<std::vector<Integer>> solve_integer(const IntMat& m, const std::vector<Integer>& b);

// Basis of the integer kernel of A (saturated lattice), as columns.
IntMat integer_kernel(const IntMat& m);

// First homology of a 2-complex given by boundary maps d1: C1 -> C0 and
// d2: C2 -> C1.  Provides exact coordinates H1 -> Z^rank (+ torsion, which we
// require to be absent for our closed orientable surfaces).
class H1Coordinates {
public:
    H1Coordinates(const IntMat& d1, const IntMat& d2);

    int rank() const { return rank_; }
    bool torsion_free() const { return torsion_free_; }

    // Class of an edge cycle (must lie in ker d1).
    std::vector<Integer> cycle_class(const std::vector<Integer>& edge_vector) const;

private:
    IntMat kernel_;         // E x z, basis of ker d1
    SmithForm kernel_snf_;  // for solving kernel_ * c = v
    SmithForm rel_;         // SNF of the presentation ker d1 / im d2
    int rank_ = 0;
    bool torsion_free_ = true;
};

} // namespace dimerlab

#endif
