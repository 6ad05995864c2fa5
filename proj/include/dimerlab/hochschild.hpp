#ifndef DIMERLAB_HOCHSCHILD_HPP
#define DIMERLAB_HOCHSCHILD_HPP

#include <map>
#include <vector>

#include "dimerlab/gentle.hpp"
#include "dimerlab/homology.hpp"

namespace dimerlab {

// Cochain complex computing the Hochschild cohomology of the gentle category,
// restricted to the summand of one positive cycle.  Degree-k basis elements
// are pairs (arc of k consecutive arrows along the cycle, target spiral path),
// with target paths truncated at the given winding bound.
struct BardzellBasisElem {
    int arc_start = 0;  // word position of the first arc arrow, mod cycle length
    int arc_len = 0;    // homological degree; 0 means a vertex of the cycle
    SpiralPath target;
};

struct BardzellComplex {
    const GentleCategory* g = nullptr;
    int cycle = 0;          // positive cycle index
    int winding_bound = 1;  // target paths have length < (bound+1) * |negative cycle|
    int max_degree = 0;

    std::vector<std::vector<BardzellBasisElem>> basis;  // by degree
    std::vector<IntMat> d;        // d[k] : C_k -> C_{k+1}, rows = dim C_{k+1}
    std::vector<bool> truncated;  // d[k] lost a term to the winding bound

    int dim(int k) const { return static_cast<int>(basis[k].size()); }
    int index_of(int start, int len, const SpiralPath& target) const;

    // Homology at degree k is exact iff neither d[k-1] nor d[k] was truncated.
    bool reliable(int k) const;
    // d o d vanishes on every reliable composite.
    bool d_squared_zero() const;

    // The arrow at word position i of the cycle (word order, wrapping mod l).
    int word_arrow(int i) const;
};

BardzellComplex bardzell_cochain_complex(const GentleCategory& g, int cycle, int winding_bound,
                                         bool corrupt = false);

struct HHEntry {
    int degree = 0;
    int kernel = 0;
    int image = 0;    // rank of the incoming differential
    int homology = 0; // kernel - image
    bool reliable = false;
};

struct HHReport {
    std::vector<HHEntry> entries; // degrees 1 .. max_degree-1
    bool d_squared_zero = false;
    const HHEntry& at(int degree) const;
};

HHReport hh_dimensions(const BardzellComplex& bc);

// A cochain in the degree-k basis.
struct Cochain {
    int degree = 0;
    std::vector<Rational> coeff;
};

Cochain omega0(const BardzellComplex& bc, int n);
Cochain omega1(const BardzellComplex& bc, int n);
Cochain apply_d(const BardzellComplex& bc, const Cochain& c);

bool is_cocycle(const BardzellComplex& bc, const Cochain& c);
bool is_coboundary(const BardzellComplex& bc, const Cochain& c);

// True iff both explicit generators at windings n are nontrivial cocycles.
bool hh_generator_check(const BardzellComplex& bc, int n);

// The multifunctor of fixed arity determined by a choice of scalars per
// (arrow, winding): it deletes a full cycle power threaded through its middle
// arguments.  Its Hochschild differential vanishes identically.
struct ZetaChoice {
    std::map<std::pair<int, int>, Rational> zeta; // (arrow, n) -> scalar
};

GentleMorphism g_multifunctor(const GentleCategory& g, const ZetaChoice& z,
                              const std::vector<SpiralPath>& xs);
GentleMorphism dg_multifunctor(const GentleCategory& g, const ZetaChoice& z, int arity,
                               const std::vector<SpiralPath>& us);

} // namespace dimerlab

#endif
