#ifndef DIMERLAB_GENTLE_HPP
#define DIMERLAB_GENTLE_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dimerlab/dimer.hpp"
#include "dimerlab/rational.hpp"

namespace dimerlab {

// Basis path of the gentle category of a rectified dimer: a nonzero path is a
// consecutive run inside one negative cycle (spiral), possibly winding around
// it several times; the trivial path at a vertex is anchored by the vertex.
struct SpiralPath {
    int cycle = -1;   // negative cycle index; -1 for a trivial path
    int offset = 0;   // start position in the cycle (traversal order)
    int length = 0;   // number of arrows
    int vertex = -1;  // anchor vertex for trivial paths (else the tail)
    auto operator<=>(const SpiralPath&) const = default;
};

// Formal rational combination of spiral paths (common source and target).
struct GentleMorphism {
    std::vector<std::pair<Rational, SpiralPath>> terms;

    bool zero() const { return terms.empty(); }
    void add(const Rational& c, const SpiralPath& p);
    void normalize(); // sort, merge, drop zeros
    bool operator==(const GentleMorphism&) const = default;
};

// The gentle category of a rectified dimer: objects are the vertices,
// morphisms are spanned by spiral paths, and consecutive arrows of a positive
// cycle multiply to zero.
class GentleCategory {
public:
    explicit GentleCategory(RectifiedDimer rd);

    const RectifiedDimer& rectified() const { return rd_; }
    int num_objects() const { return rd_.rq.num_vertices(); }
    int num_cycles() const { return static_cast<int>(neg_.size()); }
    int num_positive() const { return static_cast<int>(pos_.size()); }
    int cycle_length(int z) const { return static_cast<int>(neg_[z].size()); }
    int positive_length(int c) const { return static_cast<int>(pos_[c].size()); }
    int cycle_arrow(int z, int pos) const;
    int positive_arrow(int c, int pos) const;
    int pos_cycle_of(int arrow) const { return pos_of_[arrow].first; }
    int pos_index_of(int arrow) const { return pos_of_[arrow].second; }
    int neg_cycle_of(int arrow) const { return neg_of_[arrow].first; }
    int neg_index_of(int arrow) const { return neg_of_[arrow].second; }
    int arrow_degree(int arrow) const { return rd_.degree[arrow]; }

    SpiralPath trivial(int v) const;
    SpiralPath path(int cycle, int offset, int length) const;
    SpiralPath arrow_path(int arrow) const;
    int tail(const SpiralPath& p) const;
    int head(const SpiralPath& p) const;
    int degree(const SpiralPath& p) const; // Z2
    int winding(const SpiralPath& p) const { return p.length / (p.cycle < 0 ? 1 : cycle_length(p.cycle)); }
    int first_arrow(const SpiralPath& p) const; // -1 for trivial
    int last_arrow(const SpiralPath& p) const;
    SpiralPath strip_first(const SpiralPath& p) const;
    SpiralPath strip_last(const SpiralPath& p) const;

    // Gentle product f.g (g acts first); nullopt when the product is zero.
    std::optional<SpiralPath> compose(const SpiralPath& f, const SpiralPath& g) const;

    // Basis of Hom(v, w): paths with tail v and head w, winding <= bound,
    // including the trivial path when v == w.
    std::vector<SpiralPath> hom_basis(int v, int w, int winding_bound) const;
    // All basis paths of length <= max_length (trivial ones included).
    std::vector<SpiralPath> all_paths(int max_length) const;

    std::string describe(const SpiralPath& p) const;

private:
    RectifiedDimer rd_;
    std::vector<std::vector<int>> pos_, neg_;           // cycles as arrow lists
    std::vector<std::pair<int, int>> pos_of_, neg_of_;  // arrow -> (cycle, pos)
};

// Weights of the A-infinity structure: one rational per (positive cycle,
// power); unset entries are zero.
struct KappaMap {
    std::map<std::pair<int, int>, Rational> weights;

    Rational operator()(int cycle, int n) const;
    void set(int cycle, int n, const Rational& v);
    // The distinguished structure: weight 1 at power 1 for every cycle.
    static KappaMap mu_bar(const GentleCategory& g);
};

// Evaluator for the higher products: arity 2 is the gentle product; higher
// arities repeatedly collapse a positive-cycle power block against kappa.
class MuEvaluator {
public:
    struct Site {
        int begin = -1;   // argument index carrying b1 as its first arrow
        int end = -1;     // argument index carrying the block's last arrow
        int cycle = -1;   // positive cycle
        int power = 0;
    };

    MuEvaluator(const GentleCategory& g, KappaMap kappa);

    // Pick the rightmost admissible reduction site instead of the leftmost
    // (the result must not depend on this; property-tested).
    bool rightmost = false;
    // Test hook: flips the sign of every reduction (negative control).
    bool corrupt_sign = false;

    const GentleCategory& category() const { return g_; }
    const KappaMap& kappa() const { return kappa_; }

    std::vector<Site> reduction_sites(const std::vector<SpiralPath>& args) const;

    // Value on a basis tuple: a scalar multiple of one basis path, or zero.
    std::optional<std::pair<Rational, SpiralPath>> eval(const std::vector<SpiralPath>& args) const;

    // Multilinear extension.
    GentleMorphism eval_linear(const std::vector<GentleMorphism>& args) const;

private:
    const GentleCategory& g_;
    KappaMap kappa_;
};

struct VerifyOptions {
    int arity_bound = 5;
    int winding_bound = 1;
    bool rightmost = false;
    bool corrupt_sign = false;
    bool brute_force_low_arity = true;
};

struct VerifyReport {
    long long candidate_tuples = 0; // tuples with a potentially nonzero term
    long long brute_tuples = 0;     // exhaustively checked low-arity tuples
    long long support_size = 0;
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

// Checks the A-infinity identities for mu^kappa on all tuples of basis paths
// (within the bounds) that can have a nonzero term, plus an exhaustive sweep
// at low arity.
VerifyReport verify_m_identities(const GentleCategory& g, const KappaMap& kappa,
                                 const VerifyOptions& opt);

// Serial reference implementation of the candidate sweep (same contract).
VerifyReport verify_m_identities_serial(const GentleCategory& g, const KappaMap& kappa,
                                        const VerifyOptions& opt);

// Rescaling a |-> rho(a) a transported to the weights.
KappaMap rescale_kappa(const GentleCategory& g, const KappaMap& kappa,
                       const std::vector<Rational>& rho);
// Scale of a path under the functor defined by rho.
Rational rescale_path(const GentleCategory& g, const std::vector<Rational>& rho,
                      const SpiralPath& p);
// Solves for rho turning kappa1 into kappa2 (both supported at power 1 with
// identical zero sets); nullopt when the zero sets differ.
std::optional<std::vector<Rational>> solve_rescaling(const GentleCategory& g,
                                                     const KappaMap& kappa1,
                                                     const KappaMap& kappa2);

} // namespace dimerlab

#endif
