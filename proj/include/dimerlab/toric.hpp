#ifndef DIMERLAB_TORIC_HPP
#define DIMERLAB_TORIC_HPP

#include <string>
#include <utility>
#include <vector>

#include "dimerlab/jacobi.hpp"

namespace dimerlab {

struct LatticePolygon {
    std::vector<std::pair<long long, long long>> points; // one per stable matching
    std::vector<std::pair<long long, long long>> hull;   // counterclockwise
    long long twice_area = 0;
    int boundary = 0; // lattice points on the hull boundary
    int interior = 0; // lattice points strictly inside
};

struct ToricReport {
    int matchings = 0;
    std::vector<int> stable;              // indices of stable matchings
    LatticePolygon polygon;
    int lattice_points = 0;               // boundary + interior
    int triangles = 0;                    // unimodular stable triangles
    int zigzag_cycles = 0;
    int mirror_genus = 0;
    std::vector<std::string> violations;  // failed cross-checks
    bool ok() const { return violations.empty(); }
};

// Perfect-matching degrees of a torus dimer against a homology basis of
// cycles through a trivial vertex o, the resulting lattice polygon, and the
// cross-checks tying its boundary/interior counts to the mirror surface.
class ToricData {
public:
    // x and y default to the two shortest directed cycles through o whose
    // homology classes form a unimodular basis
    explicit ToricData(const QuiverModel& m, int o = 0);
    ToricData(const QuiverModel& m, int o, std::vector<int> x, std::vector<int> y);

    const QuiverModel& model() const { return m_; }
    int trivial_vertex() const { return o_; }
    const std::vector<int>& cycle_x() const { return x_; }
    const std::vector<int>& cycle_y() const { return y_; }
    const std::vector<PerfectMatching>& matchings() const { return matchings_; }

    // matching degree along a cycle given as an arrow path
    long long degree_along(const PerfectMatching& p, const std::vector<int>& cycle) const;
    std::pair<long long, long long> point(int matching) const;

    // theta-stability of a collection: every vertex is reachable from o
    // through arrows unmatched in every member
    bool stable(const std::vector<int>& collection) const;

    ToricReport report() const;

private:
    QuiverModel m_;
    int o_;
    std::vector<int> x_, y_;
    std::vector<PerfectMatching> matchings_;

    void pick_cycles();
    void validate_cycle(const std::vector<int>& c, const char* name) const;
};

} // namespace dimerlab

#endif
