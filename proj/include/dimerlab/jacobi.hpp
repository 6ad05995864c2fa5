#ifndef DIMERLAB_JACOBI_HPP
#define DIMERLAB_JACOBI_HPP

#include <map>
#include <optional>
#include <vector>

#include "dimerlab/cover.hpp"
#include "dimerlab/dimer.hpp"

namespace dimerlab {

// A perfect matching: one arrow out of every face, positive and negative.
struct PerfectMatching {
    std::vector<char> arrows; // indicator per arrow index
};

bool is_perfect_matching(const QuiverModel& m, const PerfectMatching& p);
// All perfect matchings, in a canonical backtracking order.
std::vector<PerfectMatching> enumerate_matchings(const QuiverModel& m);

// Normal form of a path in the Jacobi algebra of a consistent torus dimer:
// endpoints, homology class relative to a fixed spanning-tree path system,
// and total weight under the reference matching.  Two paths agree in the
// algebra iff all three agree.
struct JacElement {
    int tail = -1;
    int head = -1;
    std::vector<Integer> cls;
    Integer deg = 0;
    std::vector<int> witness; // a representative path, application order

    bool operator==(const JacElement& o) const {
        return tail == o.tail && head == o.head && cls == o.cls && deg == o.deg;
    }
};

class JacobiAlgebra {
public:
    // Requires a certified-consistent genus-1 dimer; throws MathError
    // otherwise.  The reference matching is picked by index into the
    // canonical enumeration.
    explicit JacobiAlgebra(const QuiverModel& m, int matching_index = 0, int face_budget = 500);

    const QuiverModel& model() const { return m_; }
    const PerfectMatching& base_matching() const { return p0_; }
    int matching_count() const { return static_cast<int>(matchings_.size()); }
    const PerfectMatching& matching(int i) const { return matchings_[i]; }

    JacElement trivial(int v) const;
    JacElement arrow(int a) const;
    JacElement normal_form(const std::vector<int>& path) const;
    JacElement multiply(const JacElement& f, const JacElement& g) const; // f after g

    // Completion of an arrow inside its positive face: a . abar(a) is the
    // positive cycle through a.
    std::vector<int> abar(int a) const;
    // The two sides of the relation attached to an arrow, as paths.
    std::vector<int> relation_pos(int a) const;
    std::vector<int> relation_neg(int a) const;

    // The central element, based at a vertex (any positive cycle through it).
    JacElement ell(int v) const;

    // Minimal matching degree among paths from `from` to `to` in the given
    // class; searches homology classes within the given box radius and
    // throws MathError when the box is exhausted without finding the class.
    std::optional<Integer> min_degree(int from, int to, const std::vector<Integer>& cls,
                                      int class_radius = -1) const;
    std::optional<std::vector<int>> min_path(int from, int to, const std::vector<Integer>& cls,
                                             int class_radius = -1) const;

    // Quotient g with f = arrow . g, when it exists.
    std::optional<JacElement> divide_left(int a, const JacElement& f, int class_radius = -1) const;

    const std::vector<std::vector<Integer>>& arrow_class() const { return homology_->arrow_weight(); }
    Integer arrow_degree(int a) const { return p0_.arrows[a] ? 1 : 0; }

private:
    QuiverModel m_;
    ZigzagData zz_;
    std::optional<SurfaceHomology> homology_;
    std::vector<PerfectMatching> matchings_;
    PerfectMatching p0_;
    std::vector<std::vector<int>> pos_cycle_at_; // per vertex: a positive cycle based there

    int auto_radius(const std::vector<Integer>& cls) const;
};

} // namespace dimerlab

#endif
