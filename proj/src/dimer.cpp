#include "dimerlab/dimer.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace dimerlab {

void QuiverModel::build_index() {
    vertex_idx_.clear();
    arrow_idx_.clear();
    for (int i = 0; i < num_vertices(); ++i) {
        if (!vertex_idx_.emplace(vertex_ids[i], i).second)
            throw InputError("duplicate vertex id: " + vertex_ids[i]);
    }
    for (int i = 0; i < num_arrows(); ++i) {
        if (!arrow_idx_.emplace(arrows[i].id, i).second)
            throw InputError("duplicate arrow id: " + arrows[i].id);
    }
}

int QuiverModel::vertex_index(const std::string& id) const {
    auto it = vertex_idx_.find(id);
    if (it == vertex_idx_.end()) throw InputError("unknown vertex id: " + id);
    return it->second;
}

int QuiverModel::arrow_index(const std::string& id) const {
    auto it = arrow_idx_.find(id);
    if (it == arrow_idx_.end()) throw InputError("unknown arrow id: " + id);
    return it->second;
}

std::vector<std::vector<FaceEntry>> QuiverModel::boundary_cycles() const {
    std::vector<std::vector<FaceEntry>> cycles;
    for (const Face& f : faces) {
        std::vector<FaceEntry> c = f.entries;
        if (!f.positive) {
            std::reverse(c.begin(), c.end());
            for (FaceEntry& e : c) e.inverse = !e.inverse;
        }
        cycles.push_back(std::move(c));
    }
    return cycles;
}

int QuiverModel::euler_characteristic() const {
    return num_vertices() - num_arrows() + static_cast<int>(faces.size());
}

int QuiverModel::genus() const {
    int chi = euler_characteristic();
    if (chi % 2 != 0 || chi > 2) throw MathError("Euler characteristic not of a closed oriented surface");
    return (2 - chi) / 2;
}

std::vector<Corner> QuiverModel::corners() const {
    std::vector<Corner> cs;
    auto cycles = boundary_cycles();
    for (int ci = 0; ci < static_cast<int>(cycles.size()); ++ci) {
        const auto& c = cycles[ci];
        int n = static_cast<int>(c.size());
        for (int k = 0; k < n; ++k) {
            const FaceEntry& e0 = c[k];
            const FaceEntry& e1 = c[(k + 1) % n];
            Corner corner;
            corner.cycle = ci;
            corner.pos = k;
            corner.vertex = entry_head(e0);
            corner.in = EdgeEnd{e0.arrow, !e0.inverse};   // traversal-head end of e0
            corner.out = EdgeEnd{e1.arrow, e1.inverse};   // traversal-tail end of e1
            cs.push_back(corner);
        }
    }
    return cs;
}

std::vector<std::vector<Corner>> QuiverModel::vertex_links() const {
    auto cs = corners();
    // Each edge end has exactly one corner leaving it (in == end).
    std::map<EdgeEnd, int> corner_from;
    for (int i = 0; i < static_cast<int>(cs.size()); ++i) {
        if (!corner_from.emplace(cs[i].in, i).second)
            throw MathError("edge end used twice as corner source; gluing inconsistent");
    }
    if (corner_from.size() != cs.size() || static_cast<int>(cs.size()) != 2 * num_arrows())
        throw MathError("corner count does not match edge ends");
    std::vector<std::vector<Corner>> links(num_vertices());
    std::set<EdgeEnd> seen;
    for (int a = 0; a < num_arrows(); ++a) {
        for (bool h : {false, true}) {
            EdgeEnd start{a, h};
            if (seen.count(start)) continue;
            std::vector<Corner> link;
            EdgeEnd cur = start;
            int v = -1;
            do {
                auto it = corner_from.find(cur);
                if (it == corner_from.end()) throw MathError("dangling edge end in vertex link");
                const Corner& c = cs[it->second];
                if (v < 0) v = c.vertex;
                if (c.vertex != v) throw MathError("vertex link mixes vertices; gluing inconsistent");
                link.push_back(c);
                seen.insert(cur);
                cur = c.out;
            } while (!(cur == start));
            if (!links[v].empty())
                throw MathError("vertex link disconnected at vertex " + vertex_ids[v]);
            links[v] = std::move(link);
        }
    }
    for (int v = 0; v < num_vertices(); ++v)
        if (links[v].empty()) throw MathError("isolated vertex " + vertex_ids[v]);
    return links;
}

void QuiverModel::validate_surface() const {
    if (num_vertices() == 0 || num_arrows() == 0 || faces.empty())
        throw MathError("empty model");
    for (const Arrow& a : arrows)
        if (a.tail < 0 || a.tail >= num_vertices() || a.head < 0 || a.head >= num_vertices())
            throw MathError("arrow endpoints out of range");
    auto cycles = boundary_cycles();
    std::vector<int> fwd(num_arrows(), 0), inv(num_arrows(), 0);
    for (const auto& c : cycles) {
        if (c.size() < 2) throw MathError("degenerate boundary cycle of length < 2");
        int n = static_cast<int>(c.size());
        for (int k = 0; k < n; ++k) {
            if (entry_head(c[k]) != entry_tail(c[(k + 1) % n]))
                throw MathError("boundary cycle does not chain");
            (c[k].inverse ? inv : fwd)[c[k].arrow]++;
        }
    }
    for (int a = 0; a < num_arrows(); ++a)
        if (fwd[a] != 1 || inv[a] != 1)
            throw MathError("arrow " + arrows[a].id +
                            " must appear exactly once forward and once inverted in the boundary cycles");
    if (dimer) {
        for (const Face& f : faces)
            for (const FaceEntry& e : f.entries)
                if (e.inverse) throw MathError("dimer face cycles must be real (no inverse entries)");
    }
    // Vertex links must be single cycles (this also proves the glued complex
    // is a surface); computed for its side effects.
    (void)vertex_links();
    // Connectivity of the underlying graph.
    std::vector<int> comp(num_vertices(), -1);
    std::vector<int> stack{0};
    comp[0] = 0;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (const Arrow& a : arrows) {
            for (int w : {a.tail == v ? a.head : -1, a.head == v ? a.tail : -1})
                if (w >= 0 && comp[w] < 0) {
                    comp[w] = 0;
                    stack.push_back(w);
                }
        }
    }
    for (int v = 0; v < num_vertices(); ++v)
        if (comp[v] < 0) throw MathError("complex is disconnected");
    (void)genus();
}

RectifiedDimer rectify(const QuiverModel& q) {
    q.validate_surface();
    auto cycles = q.boundary_cycles();
    auto links = q.vertex_links();

    RectifiedDimer r;
    r.rq.dimer = true;
    // One vertex per arrow of q (the arrow midpoint), keeping the arrow id.
    for (const Arrow& a : q.arrows) r.rq.vertex_ids.push_back(a.id);

    // One RQ arrow per corner; degree 1 iff both entries have the same sense.
    std::map<std::pair<int, int>, int> arrow_of_corner; // (cycle,pos) -> arrow index
    std::map<std::string, int> name_count;
    auto cs = q.corners();
    for (const Corner& c : cs) {
        const auto& cyc = cycles[c.cycle];
        int n = static_cast<int>(cyc.size());
        const FaceEntry& e0 = cyc[c.pos];
        const FaceEntry& e1 = cyc[(c.pos + 1) % n];
        Arrow a;
        std::string base = q.arrows[e0.arrow].id + "." + q.arrows[e1.arrow].id;
        int cnt = name_count[base]++;
        a.id = cnt == 0 ? base : base + "." + std::to_string(cnt);
        a.tail = e0.arrow;
        a.head = e1.arrow;
        arrow_of_corner[{c.cycle, c.pos}] = r.rq.num_arrows();
        r.rq.arrows.push_back(a);
        r.degree.push_back(e0.inverse == e1.inverse ? 1 : 0);
        r.corner_of_arrow.push_back(c);
    }
    // Positive faces: the boundary cycles.
    for (int ci = 0; ci < static_cast<int>(cycles.size()); ++ci) {
        Face f;
        f.positive = true;
        for (int k = 0; k < static_cast<int>(cycles[ci].size()); ++k)
            f.entries.push_back(FaceEntry{arrow_of_corner.at({ci, k}), false});
        r.rq.faces.push_back(std::move(f));
    }
    // Negative faces: the vertex links, stored as real cycles.
    for (int v = 0; v < q.num_vertices(); ++v) {
        Face f;
        f.positive = false;
        for (const Corner& c : links[v])
            f.entries.push_back(FaceEntry{arrow_of_corner.at({c.cycle, c.pos}), false});
        r.rq.faces.push_back(std::move(f));
    }
    r.rq.build_index();
    r.rq.validate_surface();
    return r;
}

ZigzagData zigzag_data(const QuiverModel& m) {
    if (!m.dimer) throw MathError("zigzag machinery requires a dimer model");
    ZigzagData z;
    int n = m.num_arrows();
    z.pos_succ.assign(n, -1);
    z.neg_succ.assign(n, -1);
    z.pos_pred.assign(n, -1);
    z.neg_pred.assign(n, -1);
    z.pos_face_of.assign(n, {-1, -1});
    z.neg_face_of.assign(n, {-1, -1});
    for (int fi = 0; fi < static_cast<int>(m.faces.size()); ++fi) {
        const Face& f = m.faces[fi];
        int len = static_cast<int>(f.entries.size());
        for (int k = 0; k < len; ++k) {
            int a = f.entries[k].arrow;
            int b = f.entries[(k + 1) % len].arrow;
            if (f.positive) {
                if (z.pos_succ[a] >= 0) throw MathError("arrow in two positive faces");
                z.pos_succ[a] = b;
                z.pos_pred[b] = a;
                z.pos_face_of[a] = {fi, k};
            } else {
                if (z.neg_succ[a] >= 0) throw MathError("arrow in two negative faces");
                z.neg_succ[a] = b;
                z.neg_pred[b] = a;
                z.neg_face_of[a] = {fi, k};
            }
        }
    }
    for (int a = 0; a < n; ++a)
        if (z.pos_succ[a] < 0 || z.neg_succ[a] < 0)
            throw MathError("arrow " + m.arrows[a].id + " missing a positive or negative face");
    z.cycle_of.assign(2, std::vector<int>(n, -1));
    for (int phase = 0; phase <= 1; ++phase)
        for (int a = 0; a < n; ++a) {
            if (z.cycle_of[phase][a] >= 0) continue;
            std::vector<std::pair<int, int>> orbit;
            int ca = a, cp = phase;
            while (z.cycle_of[cp][ca] < 0) {
                z.cycle_of[cp][ca] = static_cast<int>(z.cycles.size());
                orbit.push_back({ca, cp});
                int na = cp == 0 ? z.pos_succ[ca] : z.neg_succ[ca];
                cp = 1 - cp;
                ca = na;
            }
            z.cycles.push_back(std::move(orbit));
        }
    return z;
}

QuiverModel mirror_dimer(const QuiverModel& m) {
    m.validate_surface();
    if (!m.dimer) throw MathError("mirror requires a dimer model");
    ZigzagData z = zigzag_data(m);
    QuiverModel r;
    r.dimer = true;
    for (int i = 0; i < static_cast<int>(z.cycles.size()); ++i)
        r.vertex_ids.push_back("Z" + std::to_string(i));
    for (int a = 0; a < m.num_arrows(); ++a) {
        Arrow na;
        na.id = m.arrows[a].id;
        na.head = z.cycle_of[0][a]; // zig cycle
        na.tail = z.cycle_of[1][a]; // zag cycle
        r.arrows.push_back(na);
    }
    for (const Face& f : m.faces) {
        Face nf;
        nf.positive = f.positive;
        nf.entries = f.entries;
        if (!f.positive) std::reverse(nf.entries.begin(), nf.entries.end());
        r.faces.push_back(std::move(nf));
    }
    r.build_index();
    r.validate_surface();
    return r;
}

namespace {

// Canonical rotation of a cyclic entry sequence (by arrow index then flag).
std::vector<FaceEntry> canonical_rotation(const std::vector<FaceEntry>& v) {
    std::vector<FaceEntry> best = v;
    int n = static_cast<int>(v.size());
    for (int s = 1; s < n; ++s) {
        std::vector<FaceEntry> rot(v.begin() + s, v.end());
        rot.insert(rot.end(), v.begin(), v.begin() + s);
        auto key = [](const std::vector<FaceEntry>& x) {
            std::vector<std::pair<int, bool>> k;
            for (auto& e : x) k.push_back({e.arrow, e.inverse});
            return k;
        };
        if (key(rot) < key(best)) best = rot;
    }
    return best;
}

} // namespace

bool isomorphic_relabel(const QuiverModel& a, const QuiverModel& b) {
    if (a.dimer != b.dimer) return false;
    if (a.num_vertices() != b.num_vertices() || a.num_arrows() != b.num_arrows() ||
        a.faces.size() != b.faces.size())
        return false;
    // Arrow ids must agree as sets; match arrows by id.
    std::map<std::string, int> bid;
    for (int i = 0; i < b.num_arrows(); ++i) bid[b.arrows[i].id] = i;
    std::vector<int> amap(a.num_arrows(), -1);
    for (int i = 0; i < a.num_arrows(); ++i) {
        auto it = bid.find(a.arrows[i].id);
        if (it == bid.end()) return false;
        amap[i] = it->second;
    }
    // The vertex bijection is forced by arrow endpoints.
    std::vector<int> vmap(a.num_vertices(), -1);
    for (int i = 0; i < a.num_arrows(); ++i) {
        const Arrow& x = a.arrows[i];
        const Arrow& y = b.arrows[amap[i]];
        for (auto [va, vb] : {std::pair{x.tail, y.tail}, std::pair{x.head, y.head}}) {
            if (vmap[va] < 0) vmap[va] = vb;
            else if (vmap[va] != vb) return false;
        }
    }
    std::set<int> image(vmap.begin(), vmap.end());
    if (static_cast<int>(image.size()) != a.num_vertices()) return false;
    // Faces must match as cyclic sequences with signs.
    auto face_keys = [&](const QuiverModel& m, bool remap) {
        std::vector<std::pair<bool, std::vector<FaceEntry>>> keys;
        for (const Face& f : m.faces) {
            std::vector<FaceEntry> es = f.entries;
            if (remap)
                for (FaceEntry& e : es) e.arrow = amap[e.arrow];
            keys.push_back({f.positive, canonical_rotation(es)});
        }
        std::sort(keys.begin(), keys.end(), [](const auto& l, const auto& r) {
            auto key = [](const std::vector<FaceEntry>& x) {
                std::vector<std::pair<int, bool>> k;
                for (auto& e : x) k.push_back({e.arrow, e.inverse});
                return k;
            };
            return std::tuple{l.first, key(l.second)} < std::tuple{r.first, key(r.second)};
        });
        return keys;
    };
    auto ka = face_keys(a, true);
    auto kb = face_keys(b, false);
    if (ka.size() != kb.size()) return false;
    for (size_t i = 0; i < ka.size(); ++i)
        if (ka[i].first != kb[i].first || !(ka[i].second == kb[i].second)) return false;
    return true;
}

QuiverModel parse_model(const std::string& text) {
    QuiverModel m;
    std::istringstream in(text);
    std::string line;
    bool have_kind = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        auto fail = [&](const std::string& msg) -> void {
            throw InputError("line " + std::to_string(lineno) + ": " + msg);
        };
        if (!have_kind) {
            if (tok == "dimer") m.dimer = true;
            else if (tok == "quiver") m.dimer = false;
            else fail("first line must be 'dimer' or 'quiver'");
            have_kind = true;
            continue;
        }
        if (tok == "vertex") {
            std::string id;
            if (!(ls >> id)) fail("vertex needs an id");
            m.vertex_ids.push_back(id);
        } else if (tok == "arrow") {
            std::string id, t, h;
            if (!(ls >> id >> t >> h)) fail("arrow needs: id tail head");
            Arrow a;
            a.id = id;
            auto find_vertex = [&](const std::string& v) {
                for (int i = 0; i < m.num_vertices(); ++i)
                    if (m.vertex_ids[i] == v) return i;
                fail("unknown vertex " + v);
                return -1;
            };
            a.tail = find_vertex(t);
            a.head = find_vertex(h);
            m.arrows.push_back(a);
        } else if (tok == "face") {
            std::string sign;
            if (!(ls >> sign) || (sign != "+" && sign != "-")) fail("face needs a sign + or -");
            Face f;
            f.positive = sign == "+";
            std::string e;
            while (ls >> e) {
                FaceEntry fe;
                if (e.size() > 1 && e[0] == '~') {
                    if (m.dimer) fail("inverse entries are only allowed in quiver files");
                    fe.inverse = true;
                    e = e.substr(1);
                }
                int idx = -1;
                for (int i = 0; i < m.num_arrows(); ++i)
                    if (m.arrows[i].id == e) idx = i;
                if (idx < 0) fail("unknown arrow " + e);
                fe.arrow = idx;
                f.entries.push_back(fe);
            }
            if (f.entries.size() < 2) fail("face of length < 2");
            m.faces.push_back(std::move(f));
        } else {
            fail("unknown directive '" + tok + "'");
        }
    }
    if (!have_kind) throw InputError("empty model file");
    m.build_index();
    return m;
}

QuiverModel load_model(const std::string& path) {
    FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw InputError("cannot open " + path);
    std::string text;
    char buf[4096];
    size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) text.append(buf, n);
    std::fclose(f);
    return parse_model(text);
}

std::string emit_model(const QuiverModel& m) {
    std::ostringstream out;
    out << (m.dimer ? "dimer" : "quiver") << "\n";
    for (const auto& v : m.vertex_ids) out << "vertex " << v << "\n";
    for (const Arrow& a : m.arrows)
        out << "arrow " << a.id << " " << m.vertex_ids[a.tail] << " " << m.vertex_ids[a.head] << "\n";
    for (const Face& f : m.faces) {
        out << "face " << (f.positive ? "+" : "-");
        for (const FaceEntry& e : f.entries)
            out << " " << (e.inverse ? "~" : "") << m.arrows[e.arrow].id;
        out << "\n";
    }
    return out.str();
}

std::string emit_dot(const QuiverModel& m) {
    std::ostringstream out;
    out << "digraph dimer {\n";
    for (const auto& v : m.vertex_ids) out << "  \"" << v << "\";\n";
    for (const Arrow& a : m.arrows)
        out << "  \"" << m.vertex_ids[a.tail] << "\" -> \"" << m.vertex_ids[a.head]
            << "\" [label=\"" << a.id << "\"];\n";
    out << "}\n";
    return out.str();
}

} // namespace dimerlab
