#ifndef DIMERLAB_MIRROR_HPP
#define DIMERLAB_MIRROR_HPP

#include <string>
#include <vector>

#include "dimerlab/gentle.hpp"
#include "dimerlab/matfact.hpp"

namespace dimerlab {

struct MirrorReport {
    int objects = 0;              // arrows of the dimer = objects on both sides
    int basis_pairs = 0;          // endpoint pairs with matching hom bases
    long long products_checked = 0;
    std::vector<Rational> rho;    // arrow rescaling of the gentle side
    bool rescaling_trivial = true;
    std::vector<std::string> mismatches; // capped; empty = full agreement
    bool ok() const { return mismatches.empty(); }
};

// Duality between the matrix-factorization category of a dimer and the gentle
// category of the rectified mirror dimer: objects correspond through the
// arrows, zigzag segments map to spiral paths around the dual negative
// cycles, and the higher products agree after an arrow rescaling.
class MirrorComparison {
public:
    explicit MirrorComparison(const QuiverModel& m, int deg_bound = 16, int wrap_bound = 6);

    MFCategory& mf() { return mf_; }
    const GentleCategory& gentle() const { return g_; }

    // vertex of the rectified mirror corresponding to an arrow of the dimer
    int vertex_of(int arrow) const { return arrow; }

    // the spiral path around the dual negative cycle with the same vertex
    // itinerary as the segment ray; throws MathError when absent
    SpiralPath spiral_of(const ZigSegment& s) const;

    // the length-2 segment dual to an arrow of the rectified mirror
    ZigSegment segment_of_arrow(int rq_arrow) const;

    // all segments from arrow a to arrow b whose spiral image winds at most
    // winding_bound times
    std::vector<ZigSegment> segments(int a, int b, int winding_bound) const;

    // hom-basis bijection and structure-constant comparison up to the bounds
    MirrorReport run(int arity_bound, int winding_bound);

private:
    MFCategory mf_;
    GentleCategory g_;
    ZigzagData zz_;
    int wrap_bound_;

    bool check_tuple(const std::vector<ZigSegment>& segs, const MuEvaluator& ev,
                     const std::vector<Rational>& rho, MirrorReport& rep);
};

} // namespace dimerlab

#endif
