#include "dimerlab/cover.hpp"

#include <algorithm>
#include <set>

namespace dimerlab {

CoverPatch::CoverPatch(const QuiverModel& m) : m_(m) {
    cycles_ = m.boundary_cycles();
    fwd_at_.assign(m.num_arrows(), {-1, -1});
    inv_at_.assign(m.num_arrows(), {-1, -1});
    for (int ci = 0; ci < static_cast<int>(cycles_.size()); ++ci)
        for (int k = 0; k < static_cast<int>(cycles_[ci].size()); ++k) {
            const FaceEntry& e = cycles_[ci][k];
            (e.inverse ? inv_at_ : fwd_at_)[e.arrow] = {ci, k};
        }
    auto links = m.vertex_links();
    link_len_.assign(m.num_vertices(), 0);
    for (int v = 0; v < m.num_vertices(); ++v) {
        link_len_[v] = static_cast<int>(links[v].size());
        // Link positions: position p holds the edge end links[v][p].in; the
        // corner links[v][p] joins position p to position p+1.
        for (int p = 0; p < link_len_[v]; ++p)
            end_slot_[links[v][p].in] = {v, p};
    }
}

int CoverPatch::find_vertex(int v) {
    while (vparent_[v] != v) v = vparent_[v] = vparent_[vparent_[v]];
    return v;
}

int CoverPatch::find_arrow(int a) {
    while (aparent_[a] != a) a = aparent_[a] = aparent_[aparent_[a]];
    return a;
}

int CoverPatch::find_face(int f) {
    while (fparent_[f] != f) f = fparent_[f] = fparent_[fparent_[f]];
    return f;
}

int CoverPatch::new_vertex(int base) {
    vertices_.push_back(LVertex{base, {}});
    vparent_.push_back(static_cast<int>(vertices_.size()) - 1);
    return vparent_.back();
}

int CoverPatch::new_arrow(int base, int tail, int head) {
    arrows_.push_back(LArrow{base, tail, head, -1, -1});
    aparent_.push_back(static_cast<int>(arrows_.size()) - 1);
    int id = aparent_.back();
    auto [tv, tp] = end_slot_.at(EdgeEnd{base, false});
    auto [hv, hp] = end_slot_.at(EdgeEnd{base, true});
    (void)tv; (void)hv;
    if (tail >= 0) vertices_[find_vertex(tail)].slots[tp] = id;
    if (head >= 0) vertices_[find_vertex(head)].slots[hp] = id;
    return id;
}

void CoverPatch::enqueue_arrow_merge(int a, int b) {
    merge_queue_.emplace_back(a, b);
}

void CoverPatch::merge_vertices(int u, int v) {
    u = find_vertex(u);
    v = find_vertex(v);
    if (u == v) return;
    if (vertices_[u].base != vertices_[v].base)
        throw MathError("cover patch: identified lifts of distinct vertices");
    vparent_[v] = u;
    for (auto [slot, arr] : vertices_[v].slots) {
        auto it = vertices_[u].slots.find(slot);
        if (it == vertices_[u].slots.end())
            vertices_[u].slots[slot] = arr;
        else
            enqueue_arrow_merge(it->second, arr);
    }
    vertices_[v].slots.clear();
}

void CoverPatch::process_merges() {
    while (!merge_queue_.empty()) {
        auto [ra, rb] = merge_queue_.back();
        merge_queue_.pop_back();
        int a = find_arrow(ra), b = find_arrow(rb);
        if (a == b) continue;
        if (arrows_[a].base != arrows_[b].base)
            throw MathError("cover patch: identified lifts of distinct arrows");
        aparent_[b] = a;
        merge_vertices(arrows_[a].tail, arrows_[b].tail);
        merge_vertices(arrows_[a].head, arrows_[b].head);
        for (bool fwd : {false, true}) {
            int& fa = fwd ? arrows_[a].cycle_lift_fwd : arrows_[a].cycle_lift_inv;
            int fb = fwd ? arrows_[b].cycle_lift_fwd : arrows_[b].cycle_lift_inv;
            if (fb < 0) continue;
            if (fa < 0) {
                fa = fb;
                continue;
            }
            int f1 = find_face(fa), f2 = find_face(fb);
            if (f1 == f2) continue;
            fparent_[f2] = f1;
            const auto& l1 = face_lifts_[f1];
            const auto& l2 = face_lifts_[f2];
            for (size_t k = 0; k < l1.size(); ++k) enqueue_arrow_merge(l1[k], l2[k]);
        }
    }
}

int CoverPatch::seed_arrow(int base_arrow) {
    int t = new_vertex(m_.arrows[base_arrow].tail);
    int h = new_vertex(m_.arrows[base_arrow].head);
    return new_arrow(base_arrow, t, h);
}

int CoverPatch::lift_vertex_of_entry_head(int lifted_arrow, bool entry_inverse) {
    const LArrow& a = arrows_[find_arrow(lifted_arrow)];
    return find_vertex(entry_inverse ? a.tail : a.head);
}

// Attach the lift of boundary cycle `cycle`, given that its entry at position
// `pos` is already lifted as `lifted_arrow`.  Returns the face lift id.
int CoverPatch::attach_face(int cycle, int pos, int lifted_arrow, bool entry_inverse) {
    const auto& cyc = cycles_[cycle];
    int n = static_cast<int>(cyc.size());
    (void)entry_inverse;
    std::vector<int> lifts(n, -1);
    lifts[pos] = lifted_arrow;
    for (int step = 0; step < n; ++step) {
        int u = (pos + step) % n;
        int un = (u + 1) % n;
        const FaceEntry& eu = cyc[u];
        const FaceEntry& en = cyc[un];
        int lv = lift_vertex_of_entry_head(lifts[u], eu.inverse);
        // The corner between entries u and u+1 sits at link position p of the
        // traversal-head end of eu; the next entry's traversal-tail end is at
        // position p+1 in the base link.
        EdgeEnd in_end{eu.arrow, !eu.inverse};
        auto [bv, p] = end_slot_.at(in_end);
        int pn = (p + 1) % link_len_[bv];
        LVertex& vert = vertices_[lv];
        auto it = vert.slots.find(pn);
        int next_lift;
        if (it != vert.slots.end()) {
            next_lift = find_arrow(it->second);
            if (arrows_[next_lift].base != en.arrow)
                throw MathError("cover patch link mismatch");
        } else {
            // Create the next lifted arrow; its near end sits at this vertex,
            // the far end is a fresh lifted vertex.
            bool near_is_tail = !en.inverse; // traversal-tail end of en
            int far_base = near_is_tail ? m_.arrows[en.arrow].head : m_.arrows[en.arrow].tail;
            int far = new_vertex(far_base);
            int tail = near_is_tail ? lv : far;
            int head = near_is_tail ? far : lv;
            next_lift = new_arrow(en.arrow, tail, head);
        }
        if (lifts[un] >= 0 && find_arrow(lifts[un]) != next_lift) {
            // Gluing the disk shut identifies the two lifts.
            enqueue_arrow_merge(lifts[un], next_lift);
        }
        if (lifts[un] < 0) lifts[un] = next_lift;
    }
    face_lifts_.push_back(lifts);
    fparent_.push_back(static_cast<int>(face_lifts_.size()) - 1);
    int face_id = fparent_.back();
    for (int u = 0; u < n; ++u) {
        int aid = find_arrow(lifts[u]);
        LArrow& a = arrows_[aid];
        int& slot = cyc[u].inverse ? a.cycle_lift_inv : a.cycle_lift_fwd;
        if (slot >= 0 && find_face(slot) != face_id) {
            // The face was already attached on this side; identify the lifts.
            int f1 = find_face(slot), f2 = face_id;
            fparent_[f2] = f1;
            for (size_t k = 0; k < face_lifts_[f1].size(); ++k)
                enqueue_arrow_merge(face_lifts_[f1][k], face_lifts_[f2][k]);
            face_id = f1;
        } else {
            slot = face_id;
        }
    }
    process_merges();
    ++faces_attached_;
    return find_face(face_id);
}

int CoverPatch::lifted_successor_in_cycle(int lifted_arrow, bool fwd, int face_budget) {
    int aid = find_arrow(lifted_arrow);
    auto [ci, k] = fwd ? fwd_at_[arrows_[aid].base] : inv_at_[arrows_[aid].base];
    int lift_id = fwd ? arrows_[aid].cycle_lift_fwd : arrows_[aid].cycle_lift_inv;
    if (lift_id < 0) {
        if (faces_attached_ >= face_budget) return -1;
        lift_id = attach_face(ci, k, aid, !fwd);
    }
    int n = static_cast<int>(cycles_[ci].size());
    // Forward: successor in the positive face.  Inverse: the stored negative
    // cycle runs against the boundary cycle, so its successor is the previous
    // boundary entry.
    int kn = fwd ? (k + 1) % n : (k - 1 + n) % n;
    return find_arrow(face_lifts_[find_face(lift_id)][kn]);
}

SurfaceHomology::SurfaceHomology(const QuiverModel& m) : m_(m) {
    int V = m.num_vertices(), E = m.num_arrows(), F = static_cast<int>(m.faces.size());
    IntMat d1(V, E);
    for (int e = 0; e < E; ++e) {
        d1.at(m.arrows[e].head, e) += 1;
        d1.at(m.arrows[e].tail, e) -= 1;
    }
    IntMat d2(E, F);
    auto cycles = m.boundary_cycles();
    for (int f = 0; f < F; ++f)
        for (const FaceEntry& e : cycles[f])
            d2.at(e.arrow, f) += e.inverse ? -1 : 1;
    h1_.emplace(d1, d2);
    if (!h1_->torsion_free()) throw MathError("H1 has torsion; not a closed oriented surface");

    // BFS spanning tree.
    parent_edge_.assign(V, -1);
    parent_sign_.assign(V, 0);
    std::vector<int> order{0};
    std::vector<bool> seen(V, false);
    seen[0] = true;
    for (size_t qi = 0; qi < order.size(); ++qi) {
        int v = order[qi];
        for (int e = 0; e < E; ++e) {
            const Arrow& a = m.arrows[e];
            if (a.tail == v && !seen[a.head]) {
                seen[a.head] = true;
                parent_edge_[a.head] = e;
                parent_sign_[a.head] = 1;
                order.push_back(a.head);
            } else if (a.head == v && !seen[a.tail]) {
                seen[a.tail] = true;
                parent_edge_[a.tail] = e;
                parent_sign_[a.tail] = -1;
                order.push_back(a.tail);
            }
        }
    }
    w_.assign(E, {});
    for (int e = 0; e < E; ++e)
        w_[e] = h1_->cycle_class(tree_loop(e));
}

std::vector<Integer> SurfaceHomology::tree_loop(int arrow) const {
    std::vector<Integer> vec(m_.num_arrows());
    auto add_tree_path_to_root = [&](int v, int sign) {
        while (parent_edge_[v] >= 0) {
            int e = parent_edge_[v];
            // parent_sign_=+1: edge points toward v, walking v->root uses it inversely
            vec[e] += Integer(-sign * parent_sign_[v]);
            v = parent_sign_[v] > 0 ? m_.arrows[e].tail : m_.arrows[e].head;
        }
    };
    // root -> tail, arrow, head -> root
    add_tree_path_to_root(m_.arrows[arrow].tail, -1);
    vec[arrow] += 1;
    add_tree_path_to_root(m_.arrows[arrow].head, 1);
    return vec;
}

std::vector<Integer> SurfaceHomology::cycle_class(const std::vector<Integer>& edge_vector) const {
    return h1_->cycle_class(edge_vector);
}

namespace {

struct Ray {
    std::vector<int> base;                      // base arrow at each index
    std::vector<std::vector<Integer>> pos;      // H1 position at each index
    int period = 0;                             // zigzag cycle length
    std::vector<Integer> g;                     // deck shift of one period
};

Ray build_ray(const QuiverModel& m, const ZigzagData& z, const SurfaceHomology& h, int a0, int phase0) {
    Ray r;
    r.period = static_cast<int>(z.cycles[z.cycle_of[phase0][a0]].size());
    int a = a0, phase = phase0;
    std::vector<Integer> p(h.rank());
    for (int i = 0; i < r.period; ++i) {
        r.base.push_back(a);
        r.pos.push_back(p);
        for (int c = 0; c < h.rank(); ++c) p[c] += h.arrow_weight()[a][c];
        int na = phase == 0 ? z.pos_succ[a] : z.neg_succ[a];
        phase = 1 - phase;
        a = na;
    }
    r.g = p;
    return r;
}

// Find m,n >= 0 with m*gm - n*gp = D, not excluded; minimizes m+n.
std::optional<std::pair<long long, long long>> solve_shift(
    const std::vector<Integer>& gm, const std::vector<Integer>& gp,
    const std::vector<Integer>& D, bool exclude_zero) {
    Integer det = gm[0] * (-gp[1]) - (-gp[0]) * gm[1];
    auto ok = [&](const Integer& mm, const Integer& nn) {
        return mm >= 0 && nn >= 0 && !(exclude_zero && mm == 0 && nn == 0);
    };
    if (det != 0) {
        // Cramer.
        Integer mnum = D[0] * (-gp[1]) - (-gp[0]) * D[1];
        Integer nnum = gm[0] * D[1] - D[0] * gm[1];
        if (mnum % det != 0 || nnum % det != 0) return std::nullopt;
        Integer mm = mnum / det, nn = nnum / det;
        if (ok(mm, nn)) return std::pair{mm.convert_to<long long>(), nn.convert_to<long long>()};
        return std::nullopt;
    }
    bool gm0 = gm[0] == 0 && gm[1] == 0;
    bool gp0 = gp[0] == 0 && gp[1] == 0;
    auto is_zero = [](const std::vector<Integer>& v) { return v[0] == 0 && v[1] == 0; };
    if (gm0 && gp0) {
        if (!is_zero(D)) return std::nullopt;
        if (!exclude_zero) return std::pair{0LL, 0LL};
        return std::pair{1LL, 0LL};
    }
    if (gm0 || gp0) {
        // One-variable equation n*gp = -D (or m*gm = D).
        const std::vector<Integer>& g = gm0 ? gp : gm;
        std::vector<Integer> rhs = D;
        if (gm0) { rhs[0] = -rhs[0]; rhs[1] = -rhs[1]; }
        Integer t;
        if (g[0] != 0) {
            if (rhs[0] % g[0] != 0) return std::nullopt;
            t = rhs[0] / g[0];
            if (g[1] * t != rhs[1]) return std::nullopt;
        } else {
            if (rhs[0] != 0 || rhs[1] % g[1] != 0) return std::nullopt;
            t = rhs[1] / g[1];
        }
        if (t < 0) return std::nullopt;
        Integer mm = gm0 ? 0 : t, nn = gm0 ? t : 0;
        if (ok(mm, nn)) return std::pair{mm.convert_to<long long>(), nn.convert_to<long long>()};
        // The free variable can be bumped (its deck shift is zero).
        if (gm0) mm += 1; else nn += 1;
        if (ok(mm, nn)) return std::pair{mm.convert_to<long long>(), nn.convert_to<long long>()};
        return std::nullopt;
    }
    // Parallel nonzero shifts: reduce to one dimension along a primitive vector.
    // gm = s*u, gp = t*u, D = r*u  (u primitive direction of gm).
    Integer g0 = boost::multiprecision::gcd(abs_int(gm[0]), abs_int(gm[1]));
    std::vector<Integer> u{gm[0] / g0, gm[1] / g0};
    auto project = [&](const std::vector<Integer>& v) -> std::optional<Integer> {
        // v = k*u ?
        Integer k;
        if (u[0] != 0) {
            if (v[0] % u[0] != 0) return std::nullopt;
            k = v[0] / u[0];
        } else {
            if (v[0] != 0) return std::nullopt;
            k = v[1] / u[1];
            if (v[1] % u[1] != 0) return std::nullopt;
        }
        if (u[0] * k != v[0] || u[1] * k != v[1]) return std::nullopt;
        return k;
    };
    auto S = project(gm), T = project(gp), R = project(D);
    if (!S || !T || !R) return std::nullopt;
    Integer s = *S, t = *T, r = *R;
    // m*s - n*t = r over nonnegative integers; scan m in a bounded window and
    // extend by the progression if both coefficients pull the same way.
    Integer tt = abs_int(t);
    for (Integer mm = 0; mm <= tt + 2; ++mm) {
        Integer rem = mm * s - r;
        if (t == 0) {
            if (rem == 0 && ok(mm, Integer(0)))
                return std::pair{mm.convert_to<long long>(), 0LL};
            continue;
        }
        if (rem % t != 0) continue;
        Integer nn = rem / t;
        if (ok(mm, nn)) return std::pair{mm.convert_to<long long>(), nn.convert_to<long long>()};
        // If s and t share sign, m and n can be raised together.
        if (nn < 0 && ((s > 0 && t > 0) || (s < 0 && t < 0))) {
            Integer step_m = abs_int(t / boost::multiprecision::gcd(s, t));
            Integer step_n = abs_int(s / boost::multiprecision::gcd(s, t));
            while (nn < 0 || (exclude_zero && mm == 0 && nn == 0)) {
                mm += step_m;
                nn += step_n;
            }
            if (ok(mm, nn)) return std::pair{mm.convert_to<long long>(), nn.convert_to<long long>()};
        }
    }
    return std::nullopt;
}

} // namespace

ConsistencyReport patch_consistency_search(const QuiverModel& m, int face_budget, int periods) {
    ZigzagData z = zigzag_data(m);
    ConsistencyReport best;
    best.verdict = Verdict::Consistent;
    for (int a = 0; a < m.num_arrows(); ++a) {
        CoverPatch patch(m);
        int seed = patch.seed_arrow(a);
        auto trace = [&](int phase0) {
            std::vector<int> ray{seed};
            int cur = seed, phase = phase0;
            long long steps = static_cast<long long>(periods) *
                              static_cast<long long>(z.cycles[z.cycle_of[phase0][a]].size());
            for (long long i = 0; i < steps; ++i) {
                int nxt = patch.lifted_successor_in_cycle(cur, phase == 0, face_budget);
                if (nxt < 0) break;
                ray.push_back(nxt);
                cur = nxt;
                phase = 1 - phase;
            }
            return ray;
        };
        // Negative faces of a dimer store the real cycle; the zag successor is
        // the successor in the stored cycle, which appears inverted in the
        // boundary; phase 0 (zig) walks the positive face.
        std::vector<int> zig = trace(0);
        std::vector<int> zag = trace(1);
        long long want_zig = static_cast<long long>(periods) * z.cycles[z.cycle_of[0][a]].size();
        long long want_zag = static_cast<long long>(periods) * z.cycles[z.cycle_of[1][a]].size();
        std::map<int, long long> zig_at;
        for (long long j = 0; j < static_cast<long long>(zig.size()); ++j) {
            int c = patch.canonical(zig[j]);
            if (!zig_at.count(c)) zig_at[c] = j;
        }
        bool met = false;
        for (long long i = 0; i < static_cast<long long>(zag.size()) && !met; ++i) {
            auto it = zig_at.find(patch.canonical(zag[i]));
            if (it == zig_at.end()) continue;
            long long j = it->second;
            if (i == 0 && j == 0) continue;
            ConsistencyReport r;
            r.verdict = Verdict::Inconsistent;
            r.start_arrow = m.arrows[a].id;
            r.meet_arrow = m.arrows[patch.base_arrow(zag[i])].id;
            r.i = i;
            r.j = j;
            return r;
        }
        if (static_cast<long long>(zig.size()) <= want_zig ||
            static_cast<long long>(zag.size()) <= want_zag) {
            best.verdict = Verdict::Inconclusive;
            best.note = "face budget exhausted";
        }
    }
    return best;
}

ConsistencyReport check_consistency(const QuiverModel& m, int face_budget) {
    m.validate_surface();
    if (!m.dimer) throw MathError("consistency is defined for dimer models");
    int g = m.genus();
    if (g == 0) {
        ConsistencyReport r;
        r.verdict = Verdict::Inconsistent;
        r.note = "a dimer model on a sphere is never zigzag consistent";
        return r;
    }
    if (g >= 2) return patch_consistency_search(m, face_budget, 2);

    // Torus: exact via H1 = Z^2 deck coordinates.
    ZigzagData z = zigzag_data(m);
    SurfaceHomology h(m);
    ConsistencyReport best;
    best.verdict = Verdict::Consistent;
    long long best_total = -1;
    for (int a = 0; a < m.num_arrows(); ++a) {
        Ray zig = build_ray(m, z, h, a, 0);
        Ray zag = build_ray(m, z, h, a, 1);
        for (int i0 = 0; i0 < zag.period; ++i0)
            for (int j0 = 0; j0 < zig.period; ++j0) {
                if (zag.base[i0] != zig.base[j0]) continue;
                std::vector<Integer> D{zig.pos[j0][0] - zag.pos[i0][0],
                                       zig.pos[j0][1] - zag.pos[i0][1]};
                bool exclude = i0 == 0 && j0 == 0;
                auto sol = solve_shift(zag.g, zig.g, D, exclude);
                if (!sol) continue;
                long long i = i0 + sol->first * zag.period;
                long long j = j0 + sol->second * zig.period;
                long long total = i + j;
                if (best.verdict != Verdict::Inconsistent || total < best_total ||
                    (total == best_total && i < best.i)) {
                    best.verdict = Verdict::Inconsistent;
                    best.start_arrow = m.arrows[a].id;
                    best.meet_arrow = m.arrows[zag.base[i0]].id;
                    best.i = i;
                    best.j = j;
                    best_total = total;
                }
            }
        if (best.verdict == Verdict::Inconsistent) return best; // first arrow in order
    }
    return best;
}

} // namespace dimerlab
