#ifndef DIMERLAB_MATFACT_HPP
#define DIMERLAB_MATFACT_HPP

#include <map>
#include <optional>
#include <vector>

#include "dimerlab/jacobi.hpp"

namespace dimerlab {

struct JacTerm {
    Rational coeff;
    JacElement elem;
};

// Normalized linear combination of Jacobi-algebra normal forms.
using JacLinear = std::vector<JacTerm>;

// Morphism between the rank-(1,1) matrix factorizations attached to two
// arrows.  Object of arrow a: component 0 generated at h(a), component 1 at
// t(a), with structure maps given by a and its face completion.  Entry
// e[i][j] maps component i of src to component j of dst; as an algebra
// element it has head at the component-i vertex of src and tail at the
// component-j vertex of dst.
struct MFHomElement {
    int src = -1;
    int dst = -1;
    JacLinear e[2][2];

    bool zero() const {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                if (!e[i][j].empty()) return false;
        return true;
    }
};

// A run inside a zigzag cycle: start arrow, phase of the first step
// (0 = positive-face step first, 1 = negative-face step first), and the
// number of arrows covered (>= 1).
struct ZigSegment {
    int arrow = -1;
    int phase = 0;
    int length = 1;

    bool operator==(const ZigSegment& o) const {
        return arrow == o.arrow && phase == o.phase && length == o.length;
    }
    bool operator<(const ZigSegment& o) const {
        if (arrow != o.arrow) return arrow < o.arrow;
        if (phase != o.phase) return phase < o.phase;
        return length < o.length;
    }
};

class MFCategory {
public:
    // Requires a certified-consistent genus-1 dimer (delegated to the
    // Jacobi-algebra construction).  deg_bound truncates each hom sector by
    // total matching degree; corrupt_differential flips one term of the
    // differential and exists for negative-control tests.
    explicit MFCategory(const QuiverModel& m, int matching_index = 0, int deg_bound = 8,
                        bool corrupt_differential = false, int wrap_bound = 3);

    const JacobiAlgebra& jac() const { return jac_; }
    const QuiverModel& model() const { return jac_.model(); }
    int deg_bound() const { return deg_bound_; }

    // component vertices of the object attached to arrow a
    int component_vertex(int a, int i) const;

    MFHomElement zero_hom(int src, int dst) const;
    MFHomElement identity(int a) const;
    MFHomElement add(const MFHomElement& f, const MFHomElement& g) const;
    MFHomElement scale(const Rational& c, const MFHomElement& f) const;
    bool equal(const MFHomElement& f, const MFHomElement& g) const;

    // Z2 parity: 0 for diagonal, 1 for off-diagonal entries; throws on a
    // mixed-parity element
    int parity(const MFHomElement& f) const;

    // hom-complex differential; squares to zero
    MFHomElement differential(const MFHomElement& f) const;
    // raw composition, f after g (g.dst must equal f.src)
    MFHomElement compose(const MFHomElement& f, const MFHomElement& g) const;
    // Koszul-signed composition (-1)^{|f||g|} compose(f,g); satisfies the
    // graded Leibniz rule with the differential
    MFHomElement product(const MFHomElement& f, const MFHomElement& g) const;

    // zigzag segments and their closed morphisms
    std::vector<int> segment_ray(const ZigSegment& s) const;
    MFHomElement zeta(const ZigSegment& s) const;
    int segment_src(const ZigSegment& s) const; // = s.arrow
    int segment_dst(const ZigSegment& s) const; // last arrow of the ray
    // concatenation matching "f after g": shared arrow + phase in the middle
    std::optional<ZigSegment> concat(const ZigSegment& f, const ZigSegment& g) const;

    // all segments with given endpoints whose zeta fits under the degree
    // bound
    std::vector<ZigSegment> segments_between(int src, int dst) const;

    // cover-sector label of a homogeneous morphism (throws MathError when
    // entries disagree); labels add under compose and are preserved by the
    // differential
    std::vector<Integer> sector_label(const MFHomElement& f) const;

    struct SectorReport {
        int basis_dim = 0;
        int homology_dim = 0;
        int segment_count = 0;
        bool split_complete = true; // basis = U + zetas + dU held exactly
    };
    SectorReport sector_report(int src, int dst, const std::vector<Integer>& lambda);

    // codifferential of the chosen splitting: h^2 = 0, dhd = d, h(zeta) = 0
    MFHomElement h(const MFHomElement& f);
    // projection 1 - dh - hd onto the span of the zetas
    MFHomElement pi(const MFHomElement& f);

    // minimal-model products transferred through the splitting; arguments in
    // composition order (arguments chain like compose)
    MFHomElement mu(const std::vector<MFHomElement>& inputs);
    // the same sum evaluated tree by tree (slower; kept as a cross-check)
    MFHomElement mu_via_trees(const std::vector<MFHomElement>& inputs);

    // expand a morphism in the zeta basis of its sector (throws MathError if
    // the morphism is not in the span)
    std::vector<std::pair<Rational, ZigSegment>> zeta_coordinates(const MFHomElement& f);

private:
    struct BasisElt {
        int i, j;
        Integer deg;
        JacElement elem;
    };
    struct Sector {
        int src, dst;
        std::vector<Integer> lambda;
        std::vector<BasisElt> basis;        // truncated at deg_bound + 1
        int dim_low = 0;                    // prefix with deg <= deg_bound
        std::vector<ZigSegment> segments;   // zeta representatives
        // decomposition columns over the low part: U | zetas | dU
        std::vector<std::vector<Rational>> cols; // each of size basis.size()
        std::vector<int> col_kind;               // 0 = U, 1 = zeta, 2 = dU
        std::vector<int> col_mate;               // for dU: index of its U column
        bool complete = true;
        // cached row reduction of the column matrix: E * cols is in reduced
        // echelon form with the recorded pivot rows (built on first solve)
        mutable std::vector<std::vector<Rational>> elim;
        mutable std::vector<int> pivot_col;
    };

    JacobiAlgebra jac_;
    ZigzagData zz_;
    int deg_bound_;
    bool corrupt_;
    int wrap_bound_;
    std::map<std::tuple<int, int, std::vector<Integer>>, Sector> sectors_;

    void append(JacLinear& acc, const Rational& c, const JacElement& x) const;
    JacElement arc_between(int a, int b, bool positive) const; // complement arc
    const Sector& sector_for(int src, int dst, const std::vector<Integer>& lambda);
    std::vector<Rational> coords(const Sector& s, const MFHomElement& f) const;
    MFHomElement from_coords(const Sector& s, const std::vector<Rational>& x) const;
    std::vector<Rational> solve_decomposition(const Sector& s,
                                              const std::vector<Rational>& x) const;
};

} // namespace dimerlab

#endif
