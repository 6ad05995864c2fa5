#include "dimerlab/jacobi.hpp"

#include <algorithm>
#include <queue>

namespace dimerlab {

bool is_perfect_matching(const QuiverModel& m, const PerfectMatching& p) {
    if (static_cast<int>(p.arrows.size()) != m.num_arrows()) return false;
    for (const auto& f : m.faces) {
        int hits = 0;
        for (const auto& e : f.entries)
            if (p.arrows[e.arrow]) ++hits;
        if (hits != 1) return false;
    }
    return true;
}

namespace {

void match_rec(const QuiverModel& m, int face, std::vector<char>& picked,
               std::vector<int>& covered, std::vector<PerfectMatching>& out) {
    int nf = static_cast<int>(m.faces.size());
    if (face == nf) {
        out.push_back({picked});
        return;
    }
    if (covered[face]) {
        match_rec(m, face + 1, picked, covered, out);
        return;
    }
    for (const auto& e : m.faces[face].entries) {
        int a = e.arrow;
        if (picked[a]) continue;
        // The arrow covers this face and the face of the opposite sign; the
        // latter must not be covered yet.
        int other = -1;
        for (int f2 = 0; f2 < nf; ++f2) {
            if (f2 == face) continue;
            for (const auto& e2 : m.faces[f2].entries)
                if (e2.arrow == a) other = f2;
        }
        if (other >= 0 && covered[other]) continue;
        picked[a] = 1;
        ++covered[face];
        if (other >= 0) ++covered[other];
        match_rec(m, face + 1, picked, covered, out);
        picked[a] = 0;
        --covered[face];
        if (other >= 0) --covered[other];
    }
}

} // namespace

std::vector<PerfectMatching> enumerate_matchings(const QuiverModel& m) {
    std::vector<PerfectMatching> out;
    std::vector<char> picked(m.num_arrows(), 0);
    std::vector<int> covered(m.faces.size(), 0);
    match_rec(m, 0, picked, covered, out);
    return out;
}

JacobiAlgebra::JacobiAlgebra(const QuiverModel& m, int matching_index, int face_budget)
    : m_(m), zz_(zigzag_data(m)) {
    if (!m_.dimer) throw MathError("Jacobi normal forms need a dimer model");
    if (m_.genus() != 1) throw MathError("Jacobi normal forms are only sound on the torus");
    auto rep = check_consistency(m_, face_budget);
    if (rep.verdict != Verdict::Consistent)
        throw MathError("Jacobi normal forms need a certified-consistent dimer");
    homology_.emplace(m_);
    matchings_ = enumerate_matchings(m_);
    if (matchings_.empty()) throw MathError("dimer admits no perfect matching");
    if (matching_index < 0 || matching_index >= static_cast<int>(matchings_.size()))
        throw InputError("matching index out of range");
    p0_ = matchings_[matching_index];

    pos_cycle_at_.assign(m_.num_vertices(), {});
    for (const auto& f : m_.faces) {
        if (!f.positive) continue;
        int len = static_cast<int>(f.entries.size());
        for (int k = 0; k < len; ++k) {
            int v = m_.entry_tail(f.entries[k]);
            if (!pos_cycle_at_[v].empty()) continue;
            for (int j = 0; j < len; ++j) pos_cycle_at_[v].push_back(f.entries[(k + j) % len].arrow);
        }
    }
    for (int v = 0; v < m_.num_vertices(); ++v)
        if (pos_cycle_at_[v].empty()) throw MathError("vertex misses every positive face");
}

JacElement JacobiAlgebra::trivial(int v) const {
    JacElement e;
    e.tail = e.head = v;
    e.cls.assign(homology_->rank(), 0);
    return e;
}

JacElement JacobiAlgebra::arrow(int a) const {
    JacElement e;
    e.tail = m_.arrows[a].tail;
    e.head = m_.arrows[a].head;
    e.cls = homology_->arrow_weight()[a];
    e.deg = arrow_degree(a);
    e.witness = {a};
    return e;
}

JacElement JacobiAlgebra::normal_form(const std::vector<int>& path) const {
    if (path.empty()) throw std::invalid_argument("empty path has no base vertex; use trivial()");
    JacElement e = trivial(m_.arrows[path.front()].tail);
    for (int a : path) {
        if (m_.arrows[a].tail != e.head) throw std::invalid_argument("path arrows do not chain");
        e.head = m_.arrows[a].head;
        for (size_t i = 0; i < e.cls.size(); ++i) e.cls[i] += homology_->arrow_weight()[a][i];
        e.deg += arrow_degree(a);
    }
    e.witness = path;
    return e;
}

JacElement JacobiAlgebra::multiply(const JacElement& f, const JacElement& g) const {
    if (f.tail != g.head) throw std::invalid_argument("elements do not compose");
    JacElement e;
    e.tail = g.tail;
    e.head = f.head;
    e.cls.resize(f.cls.size());
    for (size_t i = 0; i < e.cls.size(); ++i) e.cls[i] = f.cls[i] + g.cls[i];
    e.deg = f.deg + g.deg;
    e.witness = g.witness;
    e.witness.insert(e.witness.end(), f.witness.begin(), f.witness.end());
    return e;
}

std::vector<int> JacobiAlgebra::abar(int a) const {
    auto [face, pos] = zz_.pos_face_of[a];
    const auto& entries = m_.faces[face].entries;
    int len = static_cast<int>(entries.size());
    std::vector<int> out;
    for (int j = 1; j < len; ++j) out.push_back(entries[(pos + j) % len].arrow);
    return out;
}

std::vector<int> JacobiAlgebra::relation_pos(int a) const { return abar(a); }

std::vector<int> JacobiAlgebra::relation_neg(int a) const {
    auto [face, pos] = zz_.neg_face_of[a];
    const auto& entries = m_.faces[face].entries;
    int len = static_cast<int>(entries.size());
    std::vector<int> out;
    for (int j = 1; j < len; ++j) out.push_back(entries[(pos + j) % len].arrow);
    return out;
}

JacElement JacobiAlgebra::ell(int v) const { return normal_form(pos_cycle_at_[v]); }

int JacobiAlgebra::auto_radius(const std::vector<Integer>& cls) const {
    Integer mx = 1;
    for (const auto& c : cls) mx = std::max(mx, abs_int(c));
    return 2 * mx.convert_to<int>() + 2;
}

namespace {

struct State {
    Integer cost;
    int id;
    bool operator>(const State& o) const { return cost > o.cost; }
};

} // namespace

std::optional<std::vector<int>> JacobiAlgebra::min_path(int from, int to,
                                                        const std::vector<Integer>& cls,
                                                        int class_radius) const {
    int R = class_radius >= 0 ? class_radius : auto_radius(cls);
    int rank = homology_->rank();
    for (const auto& c : cls)
        if (abs_int(c) > R) throw MathError("class radius exhausted");
    int side = 2 * R + 1;
    long long boxes = 1;
    for (int i = 0; i < rank; ++i) boxes *= side;
    long long nstates = boxes * m_.num_vertices();

    auto encode = [&](int v, const std::vector<int>& x) {
        long long id = v;
        for (int i = 0; i < rank; ++i) id = id * side + (x[i] + R);
        return id;
    };
    std::map<long long, Integer> dist;
    std::map<long long, std::pair<long long, int>> parent; // (prev state, arrow)
    (void)nstates;

    std::priority_queue<std::pair<Integer, long long>, std::vector<std::pair<Integer, long long>>,
                        std::greater<>> pq;
    std::vector<int> zero(rank, 0);
    long long start = encode(from, zero);
    dist[start] = 0;
    pq.push({0, start});
    std::vector<int> goal(rank);
    for (int i = 0; i < rank; ++i) goal[i] = cls[i].convert_to<int>();
    long long target = encode(to, goal);

    while (!pq.empty()) {
        auto [c, id] = pq.top();
        pq.pop();
        if (dist.count(id) && dist[id] < c) continue;
        if (id == target) break;
        // decode
        long long rem = id;
        std::vector<int> x(rank);
        for (int i = rank - 1; i >= 0; --i) {
            x[i] = static_cast<int>(rem % side) - R;
            rem /= side;
        }
        int v = static_cast<int>(rem);
        for (int a = 0; a < m_.num_arrows(); ++a) {
            if (m_.arrows[a].tail != v) continue;
            std::vector<int> y = x;
            bool in_box = true;
            for (int i = 0; i < rank; ++i) {
                y[i] += homology_->arrow_weight()[a][i].convert_to<int>();
                if (std::abs(y[i]) > R) in_box = false;
            }
            if (!in_box) continue;
            long long nid = encode(m_.arrows[a].head, y);
            Integer nc = c + arrow_degree(a);
            auto it = dist.find(nid);
            if (it == dist.end() || nc < it->second) {
                dist[nid] = nc;
                parent[nid] = {id, a};
                pq.push({nc, nid});
            }
        }
    }
    // The quiver of a consistent dimer is strongly connected, so every class
    // is reachable eventually; failure inside the box means the radius was
    // too small to certify anything.
    if (!dist.count(target)) throw MathError("class radius exhausted");
    std::vector<int> path;
    for (long long id = target; id != start;) {
        auto [prev, a] = parent[id];
        path.push_back(a);
        id = prev;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

std::optional<Integer> JacobiAlgebra::min_degree(int from, int to, const std::vector<Integer>& cls,
                                                 int class_radius) const {
    auto p = min_path(from, to, cls, class_radius);
    if (!p) return std::nullopt;
    Integer d = 0;
    for (int a : *p) d += arrow_degree(a);
    return d;
}

std::optional<JacElement> JacobiAlgebra::divide_left(int a, const JacElement& f,
                                                     int class_radius) const {
    if (f.head != m_.arrows[a].head) return std::nullopt;
    JacElement g;
    g.tail = f.tail;
    g.head = m_.arrows[a].tail;
    g.cls.resize(f.cls.size());
    for (size_t i = 0; i < g.cls.size(); ++i) g.cls[i] = f.cls[i] - homology_->arrow_weight()[a][i];
    g.deg = f.deg - arrow_degree(a);
    if (g.deg < 0) return std::nullopt;

    int R = class_radius >= 0 ? class_radius : auto_radius(g.cls);
    auto base = min_path(g.tail, g.head, g.cls, R);
    if (!base) return std::nullopt;
    Integer mind = 0;
    for (int b : *base) mind += arrow_degree(b);
    if (g.deg < mind) return std::nullopt;

    g.witness = *base;
    // Pad the minimal path with central cycles at the head.
    for (Integer k = 0; k < g.deg - mind; ++k)
        for (int b : pos_cycle_at_[g.head]) g.witness.push_back(b);
    return g;
}

} // namespace dimerlab
