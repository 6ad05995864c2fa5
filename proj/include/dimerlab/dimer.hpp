#ifndef DIMERLAB_DIMER_HPP
#define DIMERLAB_DIMER_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace dimerlab {

// Thrown for unreadable/ill-formed input files (CLI exit code 2).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a structural/mathematical requirement fails (CLI exit code 1).
struct MathError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Arrow {
    std::string id;
    int tail = -1;
    int head = -1;
};

struct FaceEntry {
    int arrow = -1;
    bool inverse = false;
    bool operator==(const FaceEntry&) const = default;
};

struct Face {
    bool positive = true;
    std::vector<FaceEntry> entries;
};

// An edge end: the head or tail end of an arrow, as seen from its vertex.
struct EdgeEnd {
    int arrow = -1;
    bool head = false;
    bool operator==(const EdgeEnd&) const = default;
    auto operator<=>(const EdgeEnd&) const = default;
};

// A corner of a boundary cycle: the transition between two consecutive
// traversal entries, located at a vertex.
struct Corner {
    int cycle = -1;    // boundary cycle index
    int pos = -1;      // position k: between entries k and k+1 (mod length)
    int vertex = -1;
    EdgeEnd in, out;
};

// Embedded quiver or dimer model on a closed oriented surface, given by its
// boundary cycles (for a dimer: positive faces are real boundary cycles,
// negative faces are stored as the real cycle whose inverse bounds the disk).
class QuiverModel {
public:
    bool dimer = false;
    std::vector<std::string> vertex_ids;
    std::vector<Arrow> arrows;
    std::vector<Face> faces;

    int vertex_index(const std::string& id) const;
    int arrow_index(const std::string& id) const;
    int num_vertices() const { return static_cast<int>(vertex_ids.size()); }
    int num_arrows() const { return static_cast<int>(arrows.size()); }

    // Entry endpoints in traversal order.
    int entry_tail(const FaceEntry& e) const { return e.inverse ? arrows[e.arrow].head : arrows[e.arrow].tail; }
    int entry_head(const FaceEntry& e) const { return e.inverse ? arrows[e.arrow].tail : arrows[e.arrow].head; }

    // Boundary cycles of the embedded quiver: positive faces as stored,
    // negative faces inverted. One per face, same indexing.
    std::vector<std::vector<FaceEntry>> boundary_cycles() const;

    int euler_characteristic() const;
    int genus() const;

    // Full structural validation; throws MathError on failure.
    void validate_surface() const;

    // All corners, and the vertex links as cyclic corner sequences.
    std::vector<Corner> corners() const;
    std::vector<std::vector<Corner>> vertex_links() const;

    void build_index();

private:
    std::map<std::string, int> vertex_idx_;
    std::map<std::string, int> arrow_idx_;
};

// The rectified dimer RQ of an embedded quiver, with its Z2-grading.
struct RectifiedDimer {
    QuiverModel rq;               // a dimer model
    std::vector<int> degree;      // per RQ arrow, in {0,1}
    // Provenance: RQ arrow j comes from corner (cycle, pos) of the source.
    std::vector<Corner> corner_of_arrow;
};

RectifiedDimer rectify(const QuiverModel& q);

// Zigzag machinery (dimer models only).
struct ZigzagData {
    // Successor of an arrow inside its positive/negative face (traversal order).
    std::vector<int> pos_succ, neg_succ;
    std::vector<int> pos_pred, neg_pred;
    // Face membership: positive/negative (face index, position) per arrow.
    std::vector<std::pair<int, int>> pos_face_of, neg_face_of;
    // Zigzag cycles: orbits of (arrow, phase); phase 0 = next step is a zig
    // (positive-face successor), phase 1 = next step is a zag.
    // Each cycle lists (arrow, phase) pairs in orbit order.
    std::vector<std::vector<std::pair<int, int>>> cycles;
    // Orbit index of (arrow, phase).
    std::vector<std::vector<int>> cycle_of; // [phase][arrow]
};

ZigzagData zigzag_data(const QuiverModel& m);

// Mirror dimer: vertices = zigzag cycles, arrows kept, positive faces kept,
// negative faces reversed.
QuiverModel mirror_dimer(const QuiverModel& m);

// Comparison up to the canonical vertex relabelling induced by arrow ids.
bool isomorphic_relabel(const QuiverModel& a, const QuiverModel& b);

// Serialization.
QuiverModel parse_model(const std::string& text);
QuiverModel load_model(const std::string& path);
std::string emit_model(const QuiverModel& m);
std::string emit_dot(const QuiverModel& m);

} // namespace dimerlab

#endif
