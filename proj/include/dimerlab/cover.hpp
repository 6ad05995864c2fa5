#ifndef DIMERLAB_COVER_HPP
#define DIMERLAB_COVER_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dimerlab/dimer.hpp"
#include "dimerlab/homology.hpp"

namespace dimerlab {

// Lazy finite approximation of the universal cover of an embedded quiver,
// grown one face at a time.  Lifted vertices track which slots of the base
// vertex link are already present, so reattachment around a vertex reuses
// existing cells and the developing map stays injective.
class CoverPatch {
public:
    explicit CoverPatch(const QuiverModel& m);

    // Create a fresh lifted copy of a base arrow (a new component seed).
    int seed_arrow(int base_arrow);

    // The lifted successor of a lifted arrow inside the boundary cycle where
    // the base arrow appears forward (fwd=true) or inverted (fwd=false),
    // attaching the face lift if necessary.  Returns -1 if the face budget
    // would be exceeded.
    int lifted_successor_in_cycle(int lifted_arrow, bool fwd, int face_budget);

    int faces_attached() const { return faces_attached_; }
    int base_arrow(int lifted_arrow) { return arrows_[find_arrow(lifted_arrow)].base; }

    // Canonical representative of a lifted arrow; attaching faces can
    // identify previously distinct lifts, so compare through this.
    int canonical(int lifted_arrow) { return find_arrow(lifted_arrow); }

private:
    struct LVertex {
        int base = -1;
        std::map<int, int> slots; // base link position -> lifted arrow
    };
    struct LArrow {
        int base = -1;
        int tail = -1, head = -1;            // lifted vertices
        int cycle_lift_fwd = -1;             // attached face lift ids
        int cycle_lift_inv = -1;
    };

    const QuiverModel& m_;
    std::vector<std::vector<FaceEntry>> cycles_;
    // For each arrow: (cycle, position) where it appears forward / inverted.
    std::vector<std::pair<int, int>> fwd_at_, inv_at_;
    // For each edge end: its vertex and position in that vertex's link.
    std::map<EdgeEnd, std::pair<int, int>> end_slot_;
    std::vector<int> link_len_;
    // Link adjacency in the base: for link position p at vertex v, the corner
    // with in-end at p leads to position p+1 (cyclically).
    std::vector<LVertex> vertices_;
    std::vector<LArrow> arrows_;
    std::vector<std::vector<int>> face_lifts_; // lifted arrows per cycle position
    int faces_attached_ = 0;

    // Union-find over lifted cells: gluing a face disk shut identifies the
    // freshly walked cells with existing ones, and identifications cascade.
    std::vector<int> vparent_, aparent_, fparent_;
    std::vector<std::pair<int, int>> merge_queue_; // arrow pairs to identify

    int find_vertex(int v);
    int find_arrow(int a);
    int find_face(int f);
    void enqueue_arrow_merge(int a, int b);
    void process_merges();
    void merge_vertices(int u, int v);

    int new_vertex(int base);
    int new_arrow(int base, int tail, int head);
    int attach_face(int cycle, int pos, int lifted_arrow, bool entry_inverse);
    int lift_vertex_of_entry_head(int lifted_arrow, bool entry_inverse);
};

enum class Verdict { Consistent, Inconsistent, Inconclusive };

struct ConsistencyReport {
    Verdict verdict = Verdict::Inconclusive;
    // Witness for inconsistency: zag index i, zig index j with Z-[i] = Z+[j]
    // beyond the common start.
    std::string start_arrow, meet_arrow;
    long long i = -1, j = -1;
    std::string note;
};

// Exact verdict on sphere/torus, budgeted patch search otherwise.
ConsistencyReport check_consistency(const QuiverModel& m, int face_budget = 500);

// Brute-force patch search over `periods` full periods of every ray; used as
// an oracle for the torus decision and as the genus >= 2 procedure.
ConsistencyReport patch_consistency_search(const QuiverModel& m, int face_budget, int periods);

// Homology toolkit for a model: boundary matrices, tree-based arrow classes.
class SurfaceHomology {
public:
    explicit SurfaceHomology(const QuiverModel& m);
    int rank() const { return h1_->rank(); }
    // H1 class of a closed edge walk given as signed edge vector.
    std::vector<Integer> cycle_class(const std::vector<Integer>& edge_vector) const;
    // Per-arrow weight: class of (tree path to tail) + arrow + (tree path back).
    const std::vector<std::vector<Integer>>& arrow_weight() const { return w_; }
    // Loop edge-vector realizing arrow_weight(a) (the tree loop through a).
    std::vector<Integer> tree_loop(int arrow) const;

private:
    const QuiverModel& m_;
    std::optional<H1Coordinates> h1_;
    std::vector<int> parent_edge_;   // tree arrow into each vertex (-1 at root)
    std::vector<int> parent_sign_;   // +1 if tree arrow points toward vertex
    std::vector<std::vector<Integer>> w_;
};

} // namespace dimerlab

#endif
