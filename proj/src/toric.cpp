#include "dimerlab/toric.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <set>

namespace dimerlab {

namespace {

using Pt = std::pair<long long, long long>;

long long cross(const Pt& o, const Pt& a, const Pt& b) {
    return (a.first - o.first) * (b.second - o.second) -
           (a.second - o.second) * (b.first - o.first);
}

// Andrew monotone chain; returns the hull counterclockwise without repeats.
std::vector<Pt> convex_hull(std::vector<Pt> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() <= 2) return pts;
    std::vector<Pt> h(2 * pts.size());
    size_t k = 0;
    for (size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    size_t lower = k + 1;
    for (size_t i = pts.size() - 1; i-- > 0;) {
        while (k >= lower && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

long long polygon_twice_area(const std::vector<Pt>& h) {
    long long a = 0;
    for (size_t i = 0; i < h.size(); ++i) {
        const Pt& p = h[i];
        const Pt& q = h[(i + 1) % h.size()];
        a += p.first * q.second - q.first * p.second;
    }
    return a;
}

int boundary_lattice_points(const std::vector<Pt>& h) {
    if (h.size() == 1) return 1;
    if (h.size() == 2)
        return 1 + static_cast<int>(std::gcd(std::abs(h[1].first - h[0].first),
                                             std::abs(h[1].second - h[0].second)));
    int b = 0;
    for (size_t i = 0; i < h.size(); ++i) {
        const Pt& p = h[i];
        const Pt& q = h[(i + 1) % h.size()];
        b += static_cast<int>(
            std::gcd(std::abs(q.first - p.first), std::abs(q.second - p.second)));
    }
    return b;
}

bool inside_hull(const std::vector<Pt>& h, const Pt& p, bool strict) {
    for (size_t i = 0; i < h.size(); ++i) {
        long long c = cross(h[i], h[(i + 1) % h.size()], p);
        if (c < 0 || (strict && c == 0)) return false;
    }
    return true;
}

bool strictly_inside_triangle(const Pt& a, const Pt& b, const Pt& c, const Pt& p) {
    long long d1 = cross(a, b, p), d2 = cross(b, c, p), d3 = cross(c, a, p);
    return (d1 > 0 && d2 > 0 && d3 > 0) || (d1 < 0 && d2 < 0 && d3 < 0);
}

bool segments_cross(const Pt& a, const Pt& b, const Pt& c, const Pt& d) {
    auto sgn = [](long long v) { return v > 0 ? 1 : v < 0 ? -1 : 0; };
    int d1 = sgn(cross(a, b, c)), d2 = sgn(cross(a, b, d));
    int d3 = sgn(cross(c, d, a)), d4 = sgn(cross(c, d, b));
    return d1 * d2 < 0 && d3 * d4 < 0;
}

bool triangles_overlap(const std::array<Pt, 3>& s, const std::array<Pt, 3>& t) {
    for (const Pt& p : t)
        if (strictly_inside_triangle(s[0], s[1], s[2], p)) return true;
    for (const Pt& p : s)
        if (strictly_inside_triangle(t[0], t[1], t[2], p)) return true;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (segments_cross(s[i], s[(i + 1) % 3], t[j], t[(j + 1) % 3])) return true;
    return false;
}

} // namespace

ToricData::ToricData(const QuiverModel& m, int o) : m_(m), o_(o) {
    m_.validate_surface();
    if (!m_.dimer) throw MathError("toric data requires a dimer model");
    if (m_.genus() != 1) throw MathError("toric data requires a torus dimer");
    if (o < 0 || o >= m_.num_vertices()) throw InputError("trivial vertex out of range");
    matchings_ = enumerate_matchings(m_);
    pick_cycles();
}

ToricData::ToricData(const QuiverModel& m, int o, std::vector<int> x, std::vector<int> y)
    : m_(m), o_(o), x_(std::move(x)), y_(std::move(y)) {
    m_.validate_surface();
    if (!m_.dimer) throw MathError("toric data requires a dimer model");
    if (m_.genus() != 1) throw MathError("toric data requires a torus dimer");
    if (o < 0 || o >= m_.num_vertices()) throw InputError("trivial vertex out of range");
    matchings_ = enumerate_matchings(m_);
    validate_cycle(x_, "x");
    validate_cycle(y_, "y");
    SurfaceHomology h(m_);
    std::vector<Integer> ex(m_.num_arrows(), Integer(0)), ey(m_.num_arrows(), Integer(0));
    for (int a : x_) ex[a] += 1;
    for (int a : y_) ey[a] += 1;
    auto cx = h.cycle_class(ex), cy = h.cycle_class(ey);
    if (cx.size() != 2) throw MathError("toric: homology rank is not 2");
    Integer det = cx[0] * cy[1] - cx[1] * cy[0];
    if (det != 1 && det != -1)
        throw InputError("cycles x and y do not form a homology basis");
}

void ToricData::validate_cycle(const std::vector<int>& c, const char* name) const {
    if (c.empty()) throw InputError(std::string("cycle ") + name + " is empty");
    int v = o_;
    for (int a : c) {
        if (a < 0 || a >= m_.num_arrows()) throw InputError("cycle arrow out of range");
        if (m_.arrows[a].tail != v) throw InputError(std::string("cycle ") + name +
                                                     " is not a path through the trivial vertex");
        v = m_.arrows[a].head;
    }
    if (v != o_) throw InputError(std::string("cycle ") + name + " does not close up");
}

void ToricData::pick_cycles() {
    SurfaceHomology h(m_);
    // directed cycles through o, shortest first
    std::vector<std::vector<int>> found;
    std::vector<std::vector<Integer>> classes;
    std::vector<std::pair<int, std::vector<int>>> frontier{{o_, {}}};
    int depth_limit = m_.num_arrows();
    for (int depth = 0; depth < depth_limit && static_cast<int>(found.size()) < 2; ++depth) {
        std::vector<std::pair<int, std::vector<int>>> next;
        for (auto& [v, path] : frontier)
            for (int a = 0; a < m_.num_arrows(); ++a) {
                if (m_.arrows[a].tail != v) continue;
                auto p = path;
                p.push_back(a);
                int w = m_.arrows[a].head;
                if (w == o_) {
                    std::vector<Integer> ev(m_.num_arrows(), Integer(0));
                    for (int e : p) ev[e] += 1;
                    auto cls = h.cycle_class(ev);
                    if (cls.size() != 2) throw MathError("toric: homology rank is not 2");
                    if (cls[0] == 0 && cls[1] == 0) continue;
                    bool keep = found.empty();
                    if (found.size() == 1) {
                        Integer det = classes[0][0] * cls[1] - classes[0][1] * cls[0];
                        keep = det == 1 || det == -1;
                    }
                    if (keep) {
                        found.push_back(p);
                        classes.push_back(cls);
                        if (found.size() == 2) break;
                    }
                } else {
                    next.emplace_back(w, std::move(p));
                }
            }
        frontier = std::move(next);
    }
    if (found.size() < 2) throw MathError("toric: no homology basis of cycles through o");
    x_ = found[0];
    y_ = found[1];
}

long long ToricData::degree_along(const PerfectMatching& p, const std::vector<int>& cycle) const {
    long long d = 0;
    for (int a : cycle) d += p.arrows[a] ? 1 : 0;
    return d;
}

std::pair<long long, long long> ToricData::point(int matching) const {
    const PerfectMatching& p = matchings_[matching];
    return {degree_along(p, x_), degree_along(p, y_)};
}

bool ToricData::stable(const std::vector<int>& collection) const {
    std::vector<char> blocked(m_.num_arrows(), 0);
    for (int i : collection)
        for (int a = 0; a < m_.num_arrows(); ++a)
            if (matchings_[i].arrows[a]) blocked[a] = 1;
    std::vector<char> seen(m_.num_vertices(), 0);
    std::vector<int> stack{o_};
    seen[o_] = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int a = 0; a < m_.num_arrows(); ++a) {
            if (blocked[a] || m_.arrows[a].tail != v) continue;
            int w = m_.arrows[a].head;
            if (!seen[w]) {
                seen[w] = 1;
                stack.push_back(w);
            }
        }
    }
    for (char s : seen)
        if (!s) return false;
    return true;
}

ToricReport ToricData::report() const {
    ToricReport rep;
    rep.matchings = static_cast<int>(matchings_.size());
    for (int i = 0; i < rep.matchings; ++i)
        if (stable({i})) rep.stable.push_back(i);

    LatticePolygon& poly = rep.polygon;
    for (int i : rep.stable) poly.points.push_back(point(i));
    poly.hull = convex_hull(poly.points);
    if (poly.hull.size() < 3) {
        rep.violations.push_back("stable matching points are collinear");
        return rep;
    }
    poly.twice_area = polygon_twice_area(poly.hull);
    poly.boundary = boundary_lattice_points(poly.hull);
    // Pick: 2A = 2I + B - 2  =>  I = (2A - B + 2) / 2
    poly.interior = static_cast<int>((poly.twice_area - poly.boundary + 2) / 2);
    if (2LL * poly.interior != poly.twice_area - poly.boundary + 2)
        rep.violations.push_back("area/boundary parity violates the lattice point count");
    rep.lattice_points = poly.boundary + poly.interior;

    // every matching point (stable or not) lies in the hull
    for (int i = 0; i < rep.matchings; ++i)
        if (!inside_hull(poly.hull, point(i), false))
            rep.violations.push_back("matching point outside the stable hull");

    // each lattice point of the polygon carries exactly one stable matching
    std::map<Pt, int> at_point;
    for (int i : rep.stable) at_point[point(i)]++;
    int covered = 0;
    for (auto& [pt, cnt] : at_point) {
        ++covered;
        if (cnt != 1)
            rep.violations.push_back("several stable matchings share one lattice point");
    }
    if (covered != rep.lattice_points)
        rep.violations.push_back("stable matchings do not cover the lattice points");

    // matching degree of every face is 1
    for (const auto& p : matchings_)
        for (const Face& f : m_.faces) {
            int d = 0;
            for (const FaceEntry& e : f.entries) d += p.arrows[e.arrow] ? 1 : 0;
            if (d != 1) rep.violations.push_back("face with matching degree != 1");
        }

    ZigzagData zz = zigzag_data(m_);
    rep.zigzag_cycles = static_cast<int>(zz.cycles.size());
    rep.mirror_genus = mirror_dimer(m_).genus();
    if (rep.zigzag_cycles != poly.boundary)
        rep.violations.push_back("boundary lattice count differs from the zigzag cycle count");
    if (rep.mirror_genus != poly.interior)
        rep.violations.push_back("interior lattice count differs from the mirror genus");
    if (m_.num_vertices() != poly.boundary + 2 * poly.interior - 2)
        rep.violations.push_back("vertex count differs from B + 2I - 2");
    if (poly.twice_area != poly.boundary + 2 * poly.interior - 2)
        rep.violations.push_back("polygon area violates the triangle count");

    // consecutive stable matchings on the boundary differ in one zigzag cycle
    std::vector<std::set<int>> cycle_arrows(zz.cycles.size());
    for (size_t z = 0; z < zz.cycles.size(); ++z)
        for (auto& [a, ph] : zz.cycles[z]) cycle_arrows[z].insert(a);
    std::vector<Pt> ring;
    for (size_t i = 0; i < poly.hull.size(); ++i) {
        Pt p = poly.hull[i], q = poly.hull[(i + 1) % poly.hull.size()];
        long long g = std::gcd(std::abs(q.first - p.first), std::abs(q.second - p.second));
        for (long long t = 0; t < g; ++t)
            ring.push_back({p.first + (q.first - p.first) * t / g,
                            p.second + (q.second - p.second) * t / g});
    }
    for (size_t i = 0; i < ring.size(); ++i) {
        Pt p = ring[i], q = ring[(i + 1) % ring.size()];
        int mi = -1, mj = -1;
        for (int s : rep.stable) {
            if (point(s) == p) mi = s;
            if (point(s) == q) mj = s;
        }
        if (mi < 0 || mj < 0) {
            rep.violations.push_back("boundary lattice point without a stable matching");
            continue;
        }
        std::set<int> sym;
        for (int a = 0; a < m_.num_arrows(); ++a)
            if (matchings_[mi].arrows[a] != matchings_[mj].arrows[a]) sym.insert(a);
        bool is_cycle = false;
        for (auto& ca : cycle_arrows) is_cycle |= ca == sym;
        if (!is_cycle)
            rep.violations.push_back(
                "consecutive boundary matchings do not differ in one zigzag cycle");
    }

    // fan: unimodular triangles of stable triples must tile the polygon
    std::vector<std::array<Pt, 3>> tris;
    int ns = static_cast<int>(rep.stable.size());
    for (int i = 0; i < ns; ++i)
        for (int j = i + 1; j < ns; ++j)
            for (int k = j + 1; k < ns; ++k) {
                Pt a = point(rep.stable[i]), b = point(rep.stable[j]), c = point(rep.stable[k]);
                long long ar = cross(a, b, c);
                if (ar != 1 && ar != -1) continue;
                if (!stable({rep.stable[i], rep.stable[j], rep.stable[k]})) continue;
                tris.push_back({a, b, c});
            }
    rep.triangles = static_cast<int>(tris.size());
    if (rep.triangles != m_.num_vertices())
        rep.violations.push_back("triangle count differs from the vertex count");
    long long tarea = 0;
    for (auto& t : tris) tarea += std::abs(cross(t[0], t[1], t[2]));
    if (tarea != poly.twice_area)
        rep.violations.push_back("triangle areas do not add up to the polygon");
    for (size_t i = 0; i < tris.size(); ++i)
        for (size_t j = i + 1; j < tris.size(); ++j)
            if (triangles_overlap(tris[i], tris[j]))
                rep.violations.push_back("overlapping fan triangles");
    return rep;
}

} // namespace dimerlab
