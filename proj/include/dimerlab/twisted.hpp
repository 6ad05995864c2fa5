#ifndef DIMERLAB_TWISTED_HPP
#define DIMERLAB_TWISTED_HPP

#include <optional>
#include <string>
#include <vector>

#include "dimerlab/gentle.hpp"

namespace dimerlab {

// One summand of a twisted object: a gentle object with a Z2 shift.
struct TwistedSummand {
    int object = -1;
    int shift = 0;
};

// Formal sum of shifted gentle objects with a strictly upper-triangular
// degree-1 connection delta; delta[r][s] maps summand s to summand r.
struct TwistedObject {
    std::vector<TwistedSummand> summands;
    std::vector<std::vector<GentleMorphism>> delta;

    static TwistedObject plain(int object, int shift = 0);
    int size() const { return static_cast<int>(summands.size()); }
};

// Morphism of twisted objects: entries[r][s] maps summand s of the source to
// summand r of the destination.
struct TwistedHom {
    std::vector<std::vector<GentleMorphism>> entries;

    bool zero() const;
    void normalize();
};

// Higher products on twisted objects over a gentle category: the matrix
// extension of mu plus delta insertions, each inserted delta contributing a
// factor -1.
class TwistedCategory {
public:
    TwistedCategory(const GentleCategory& g, KappaMap kappa);

    const GentleCategory& category() const { return g_; }

    // Z2 degree of a homogeneous nonzero hom; nullopt when zero or mixed.
    std::optional<int> degree(const TwistedObject& dst, const TwistedObject& src,
                              const TwistedHom& f) const;

    // Shape, triangularity, degree and Maurer-Cartan validation.
    bool validate(const TwistedObject& t, std::string* why = nullptr) const;

    TwistedHom identity(const TwistedObject& t) const;
    TwistedHom zero_hom(const TwistedObject& dst, const TwistedObject& src) const;
    bool equal(TwistedHom a, TwistedHom b) const;

    // Plain matrix extension of mu; fs[i] maps objs[i+1] to objs[i], so the
    // last argument acts first.
    TwistedHom matrix_mu(const std::vector<TwistedObject>& objs,
                         const std::vector<TwistedHom>& fs) const;

    // Full twisted product: matrix mu summed over all delta insertions.
    TwistedHom product(const std::vector<TwistedObject>& objs,
                       const std::vector<TwistedHom>& fs) const;

private:
    const GentleCategory& g_;
    MuEvaluator mu_;

    // Largest d with a nonzero chain of d delta entries (0 when delta = 0).
    int nilpotency(const TwistedObject& t) const;
    void check_shapes(const std::vector<TwistedObject>& objs,
                      const std::vector<TwistedHom>& fs) const;
};

// Quiver with one arrow reversed; the result is a plain embedded quiver.
QuiverModel reverse_arrow(const QuiverModel& q, int arrow);

// Quiver with an extra arrow inside positive face f, running from the head of
// entry i0 to the head of entry i1 and splitting the face in two.
QuiverModel split_face(const QuiverModel& q, int face, int i0, int i1,
                       const std::string& id);

struct TwistedCheckReport {
    int chain_objects = 0;
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

// For a face-splitting arrow: every positive rectified face through the new
// object yields a chain object w (shifted summands, superdiagonal delta) that
// is mutually inverse to the plain object via the two corner maps.
TwistedCheckReport added_arrow_check(const QuiverModel& q_split, int new_arrow);

// Reversing an arrow only flips rectified degrees at the corresponding
// object; the shift-swapping functor preserves validity, degrees and products
// on a generated test set of chain objects.
TwistedCheckReport reverse_direction_check(const QuiverModel& q, int arrow);

} // namespace dimerlab

#endif
