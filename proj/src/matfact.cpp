#include "dimerlab/matfact.hpp"

#include <algorithm>

#include "dimerlab/transfer.hpp"

namespace dimerlab {

namespace {

// dense exact Gaussian elimination helper
struct QElim {
    // reduced rows with pivot positions
    std::vector<std::vector<Rational>> rows;
    std::vector<size_t> pivots;

    // reduce v against the current rows; returns the residual
    std::vector<Rational> reduce(std::vector<Rational> v) const {
        for (size_t r = 0; r < rows.size(); ++r) {
            const Rational& c = v[pivots[r]];
            if (c == 0) continue;
            Rational f = c;
            for (size_t k = 0; k < v.size(); ++k) v[k] -= f * rows[r][k];
        }
        return v;
    }
    static bool nonzero(const std::vector<Rational>& v) {
        for (const auto& x : v)
            if (x != 0) return true;
        return false;
    }
    // add v if independent; returns whether the rank grew
    bool add(const std::vector<Rational>& v) {
        auto r = reduce(v);
        size_t p = 0;
        while (p < r.size() && r[p] == 0) ++p;
        if (p == r.size()) return false;
        Rational inv = Rational(1) / r[p];
        for (auto& x : r) x *= inv;
        rows.push_back(std::move(r));
        pivots.push_back(p);
        return true;
    }
};

// solve A y = x for the column list A; returns y or nullopt
std::optional<std::vector<Rational>> solve_columns(const std::vector<std::vector<Rational>>& cols,
                                                   const std::vector<Rational>& x) {
    if (cols.empty()) {
        for (const auto& v : x)
            if (v != 0) return std::nullopt;
        return std::vector<Rational>{};
    }
    size_t n = cols[0].size(), m = cols.size();
    // augmented matrix [A | x], rows = n
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(m + 1));
    for (size_t j = 0; j < m; ++j)
        for (size_t i = 0; i < n; ++i) a[i][j] = cols[j][i];
    for (size_t i = 0; i < n; ++i) a[i][m] = x[i];
    std::vector<int> pivot_col(n, -1);
    size_t row = 0;
    for (size_t col = 0; col < m && row < n; ++col) {
        size_t sel = row;
        while (sel < n && a[sel][col] == 0) ++sel;
        if (sel == n) continue;
        std::swap(a[sel], a[row]);
        Rational inv = Rational(1) / a[row][col];
        for (auto& v : a[row]) v *= inv;
        for (size_t i = 0; i < n; ++i) {
            if (i == row || a[i][col] == 0) continue;
            Rational f = a[i][col];
            for (size_t k = col; k <= m; ++k) a[i][k] -= f * a[row][k];
        }
        pivot_col[row] = static_cast<int>(col);
        ++row;
    }
    for (size_t i = row; i < n; ++i)
        if (a[i][m] != 0) return std::nullopt;
    std::vector<Rational> y(m, Rational(0));
    for (size_t i = 0; i < row; ++i) y[pivot_col[i]] = a[i][m];
    return y;
}

} // namespace

MFCategory::MFCategory(const QuiverModel& m, int matching_index, int deg_bound,
                       bool corrupt_differential, int wrap_bound)
    : jac_(m, matching_index), zz_(zigzag_data(jac_.model())), deg_bound_(deg_bound),
      corrupt_(corrupt_differential), wrap_bound_(wrap_bound) {}

int MFCategory::component_vertex(int a, int i) const {
    const Arrow& ar = model().arrows[a];
    return i == 0 ? ar.head : ar.tail;
}

void MFCategory::append(JacLinear& acc, const Rational& c, const JacElement& x) const {
    if (c == 0) return;
    for (auto it = acc.begin(); it != acc.end(); ++it) {
        if (it->elem == x) {
            it->coeff += c;
            if (it->coeff == 0) acc.erase(it);
            return;
        }
    }
    acc.push_back({c, x});
}

MFHomElement MFCategory::zero_hom(int src, int dst) const {
    MFHomElement f;
    f.src = src;
    f.dst = dst;
    return f;
}

MFHomElement MFCategory::identity(int a) const {
    MFHomElement f = zero_hom(a, a);
    append(f.e[0][0], 1, jac_.trivial(component_vertex(a, 0)));
    append(f.e[1][1], 1, jac_.trivial(component_vertex(a, 1)));
    return f;
}

MFHomElement MFCategory::add(const MFHomElement& f, const MFHomElement& g) const {
    if (f.zero()) return g;
    if (g.zero()) return f;
    if (f.src != g.src || f.dst != g.dst) throw MathError("mf add: endpoint mismatch");
    MFHomElement r = f;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (const auto& t : g.e[i][j]) append(r.e[i][j], t.coeff, t.elem);
    return r;
}

MFHomElement MFCategory::scale(const Rational& c, const MFHomElement& f) const {
    if (c == 0) return zero_hom(f.src, f.dst);
    MFHomElement r = f;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (auto& t : r.e[i][j]) t.coeff *= c;
    return r;
}

bool MFCategory::equal(const MFHomElement& f, const MFHomElement& g) const {
    MFHomElement d = add(f, scale(-1, g));
    return d.zero();
}

MFHomElement MFCategory::compose(const MFHomElement& f, const MFHomElement& g) const {
    if (f.zero() || g.zero()) return MFHomElement{};
    if (g.dst != f.src) throw MathError("mf compose: endpoint mismatch");
    MFHomElement r = zero_hom(g.src, f.dst);
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k)
            for (int j = 0; j < 2; ++j)
                for (const auto& a : g.e[i][j])
                    for (const auto& b : f.e[j][k])
                        append(r.e[i][k], a.coeff * b.coeff, jac_.multiply(a.elem, b.elem));
    return r;
}

int MFCategory::parity(const MFHomElement& f) const {
    bool diag = !f.e[0][0].empty() || !f.e[1][1].empty();
    bool off = !f.e[0][1].empty() || !f.e[1][0].empty();
    if (diag && off) throw MathError("mf parity: mixed element");
    return off ? 1 : 0;
}

MFHomElement MFCategory::product(const MFHomElement& f, const MFHomElement& g) const {
    if (f.zero() || g.zero()) return MFHomElement{};
    MFHomElement r = compose(f, g);
    if (parity(f) == 1 && parity(g) == 1) return scale(-1, r);
    return r;
}

MFHomElement MFCategory::differential(const MFHomElement& f) const {
    if (f.zero()) return MFHomElement{};
    MFHomElement r = zero_hom(f.src, f.dst);
    JacElement ds[2][2], dt[2][2];
    auto fill = [&](int a, JacElement (&d)[2][2]) {
        d[0][1] = jac_.arrow(a);
        d[1][0] = jac_.normal_form(jac_.abar(a));
    };
    fill(f.src, ds);
    fill(f.dst, dt);
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) {
            // structure map of the source followed by f
            int j = 1 - i;
            for (const auto& b : f.e[j][k]) {
                Rational c = b.coeff;
                if (corrupt_ && i == 1) c = -c;
                append(r.e[i][k], c, jac_.multiply(ds[i][j], b.elem));
            }
            // sign-twisted f followed by the structure map of the target
            j = 1 - k;
            for (const auto& a : f.e[i][j]) {
                Rational c = -a.coeff;
                if (i != j) c = -c;
                append(r.e[i][k], c, jac_.multiply(a.elem, dt[j][k]));
            }
        }
    return r;
}

std::vector<int> MFCategory::segment_ray(const ZigSegment& s) const {
    std::vector<int> ray{s.arrow};
    int phase = s.phase;
    for (int j = 1; j < s.length; ++j) {
        ray.push_back(phase == 0 ? zz_.pos_succ[ray.back()] : zz_.neg_succ[ray.back()]);
        phase = 1 - phase;
    }
    return ray;
}

int MFCategory::segment_src(const ZigSegment& s) const { return s.arrow; }

int MFCategory::segment_dst(const ZigSegment& s) const { return segment_ray(s).back(); }

JacElement MFCategory::arc_between(int a, int b, bool positive) const {
    const auto& fp = positive ? zz_.pos_face_of[a] : zz_.neg_face_of[a];
    const auto& entries = model().faces[fp.first].entries;
    int k = static_cast<int>(entries.size());
    int m = fp.second;
    if (entries[(m + 1) % k].arrow != b) throw MathError("arc: arrows not consecutive");
    std::vector<int> path;
    for (int t = 2; t < k; ++t) path.push_back(entries[(m + t) % k].arrow);
    if (path.empty()) return jac_.trivial(model().arrows[a].tail);
    return jac_.normal_form(path);
}

MFHomElement MFCategory::zeta(const ZigSegment& s) const {
    auto ray = segment_ray(s);
    int u = s.length - 1;
    // arcs at the turns, composed per parity class; turn j is positive when
    // the j-th step runs through a positive face
    auto opp = [&](int first_turn, int last_turn) -> JacElement {
        std::optional<JacElement> acc;
        for (int j = first_turn; j <= last_turn; j += 2) {
            bool positive = ((s.phase + j) % 2) == 0;
            JacElement arc = arc_between(ray[j], ray[j + 1], positive);
            acc = acc ? jac_.multiply(*acc, arc) : arc;
        }
        if (acc) return *acc;
        throw MathError("opp: empty range");
    };
    MFHomElement f = zero_hom(s.arrow, ray.back());
    if (u % 2 == 1) { // even number of arrows
        JacElement even_opp = opp(0, u - 1);
        JacElement odd_opp = u >= 3 ? opp(1, u - 2)
                                    : jac_.trivial(model().arrows[ray[0]].head);
        append(f.e[0][1], -1, odd_opp);
        append(f.e[1][0], 1, even_opp);
    } else { // odd number of arrows
        JacElement even_opp = u >= 2 ? opp(0, u - 2)
                                     : jac_.trivial(model().arrows[ray[0]].tail);
        JacElement odd_opp = u >= 2 ? opp(1, u - 1)
                                    : jac_.trivial(model().arrows[ray[0]].head);
        append(f.e[0][0], 1, odd_opp);
        append(f.e[1][1], 1, even_opp);
    }
    return f;
}

std::optional<ZigSegment> MFCategory::concat(const ZigSegment& f, const ZigSegment& g) const {
    // g runs first; its final arrow and phase must match f's start.  A
    // length-1 segment is an identity, so its phase is immaterial.
    if (segment_dst(g) != f.arrow) return std::nullopt;
    if (f.length == 1) return g;
    if (g.length == 1) return f;
    int end_phase = (g.phase + g.length - 1) % 2;
    if (end_phase != f.phase) return std::nullopt;
    return ZigSegment{g.arrow, g.phase, g.length + f.length - 1};
}

std::vector<ZigSegment> MFCategory::segments_between(int src, int dst) const {
    std::vector<ZigSegment> out;
    for (int phase = 0; phase < 2; ++phase) {
        // cap by windings around the zigzag cycle: the cover class of a wrap
        // is nonzero, so longer runs land in other sectors anyway
        int cyclen = static_cast<int>(zz_.cycles[zz_.cycle_of[phase][src]].size());
        int max_len = wrap_bound_ * cyclen + 1;
        for (int len = 1; len <= max_len; ++len) {
            ZigSegment s{src, phase, len};
            MFHomElement z = zeta(s);
            Integer maxdeg = 0;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    for (const auto& t : z.e[i][j]) maxdeg = std::max(maxdeg, t.elem.deg);
            if (maxdeg > deg_bound_) continue;
            if (len == 1 && phase == 1) continue; // identity counted once
            if (segment_dst(s) == dst) out.push_back(s);
        }
    }
    return out;
}

std::vector<Integer> MFCategory::sector_label(const MFHomElement& f) const {
    const auto& w = jac_.arrow_class();
    std::optional<std::vector<Integer>> label;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (const auto& t : f.e[i][j]) {
                std::vector<Integer> lam = t.elem.cls;
                if (i == 1)
                    for (size_t k = 0; k < lam.size(); ++k) lam[k] += w[f.src][k];
                if (j == 1)
                    for (size_t k = 0; k < lam.size(); ++k) lam[k] -= w[f.dst][k];
                if (label && *label != lam) throw MathError("mf sector: mixed labels");
                label = lam;
            }
    if (!label) throw MathError("mf sector: zero morphism");
    return *label;
}

const MFCategory::Sector& MFCategory::sector_for(int src, int dst,
                                                 const std::vector<Integer>& lambda) {
    auto key = std::make_tuple(src, dst, lambda);
    auto it = sectors_.find(key);
    if (it != sectors_.end()) return it->second;

    Sector s;
    s.src = src;
    s.dst = dst;
    s.lambda = lambda;
    const auto& w = jac_.arrow_class();
    size_t rank = w.empty() ? 0 : w[0].size();
    // basis in preference order for the splitting: slots (0,0), (0,1),
    // (1,1), (1,0); low degrees first within a slot
    const int slot_order[4][2] = {{0, 0}, {0, 1}, {1, 1}, {1, 0}};
    std::vector<BasisElt> low, high;
    for (const auto& sl : slot_order) {
        int i = sl[0], j = sl[1];
        std::vector<Integer> cls(rank);
        for (size_t k = 0; k < rank; ++k) {
            cls[k] = lambda[k];
            if (i == 1) cls[k] -= w[src][k];
            if (j == 1) cls[k] += w[dst][k];
        }
        int tailv = component_vertex(dst, j);
        int headv = component_vertex(src, i);
        auto mind = jac_.min_degree(tailv, headv, cls);
        if (!mind) continue;
        std::vector<int> base = *jac_.min_path(tailv, headv, cls);
        std::vector<int> ellpath = jac_.ell(headv).witness;
        for (Integer deg = *mind; deg <= Integer(deg_bound_) + 1; ++deg) {
            std::vector<int> witness = base;
            for (Integer x = *mind; x < deg; ++x)
                witness.insert(witness.end(), ellpath.begin(), ellpath.end());
            JacElement el =
                witness.empty() ? jac_.trivial(tailv) : jac_.normal_form(witness);
            if (el.deg != deg) throw MathError("mf sector: padding degree drift");
            (deg <= Integer(deg_bound_) ? low : high).push_back({i, j, deg, el});
        }
    }
    s.basis = low;
    s.dim_low = static_cast<int>(low.size());
    s.basis.insert(s.basis.end(), high.begin(), high.end());

    // zeta representatives
    for (const auto& seg : segments_between(src, dst)) {
        MFHomElement z = zeta(seg);
        if (sector_label(z) == lambda) s.segments.push_back(seg);
    }

    QElim elim;
    std::vector<std::vector<Rational>> zeta_cols;
    for (const auto& seg : s.segments) {
        MFHomElement z = zeta(seg);
        if (!differential(z).zero()) throw MathError("mf: zeta not closed");
        auto col = coords(s, z);
        if (!elim.add(col)) throw MathError("mf: dependent zeta representatives");
        s.cols.push_back(col);
        s.col_kind.push_back(1);
        s.col_mate.push_back(-1);
    }
    // greedy complement
    for (int idx = 0; idx < s.dim_low; ++idx) {
        MFHomElement u = zero_hom(src, dst);
        append(u.e[s.basis[idx].i][s.basis[idx].j], 1, s.basis[idx].elem);
        std::vector<Rational> ucol(s.basis.size(), Rational(0));
        ucol[idx] = 1;
        auto ducol = coords(s, differential(u));
        QElim trial = elim;
        if (!trial.add(ucol)) continue;
        if (!trial.add(ducol)) continue;
        elim = std::move(trial);
        s.cols.push_back(ucol);
        s.col_kind.push_back(0);
        s.col_mate.push_back(-1);
        int ucol_index = static_cast<int>(s.cols.size()) - 1;
        s.cols.push_back(ducol);
        s.col_kind.push_back(2);
        s.col_mate.push_back(ucol_index);
    }
    // completeness: every truncated basis vector must decompose
    for (int idx = 0; idx < s.dim_low; ++idx) {
        std::vector<Rational> unit(s.basis.size(), Rational(0));
        unit[idx] = 1;
        if (QElim::nonzero(elim.reduce(unit))) {
            s.complete = false;
            break;
        }
    }
    return sectors_.emplace(key, std::move(s)).first->second;
}

std::vector<Rational> MFCategory::coords(const Sector& s, const MFHomElement& f) const {
    std::vector<Rational> x(s.basis.size(), Rational(0));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (const auto& t : f.e[i][j]) {
                bool found = false;
                for (size_t b = 0; b < s.basis.size(); ++b) {
                    if (s.basis[b].i == i && s.basis[b].j == j && s.basis[b].deg == t.elem.deg) {
                        x[b] += t.coeff;
                        found = true;
                        break;
                    }
                }
                if (!found) throw MathError("mf sector: element out of truncation range");
            }
    return x;
}

MFHomElement MFCategory::from_coords(const Sector& s, const std::vector<Rational>& x) const {
    MFHomElement f = zero_hom(s.src, s.dst);
    for (size_t b = 0; b < x.size(); ++b)
        if (x[b] != 0) append(f.e[s.basis[b].i][s.basis[b].j], x[b], s.basis[b].elem);
    return f;
}

std::vector<Rational> MFCategory::solve_decomposition(const Sector& s,
                                                      const std::vector<Rational>& x) const {
    size_t n = s.basis.size(), m = s.cols.size();
    if (m == 0) {
        for (const auto& v : x)
            if (v != 0) throw MathError("mf sector: decomposition failed (raise deg_bound)");
        return {};
    }
    if (s.elim.empty()) {
        // row-reduce the column matrix once, recording the row operations
        std::vector<std::vector<Rational>> a(n, std::vector<Rational>(m));
        for (size_t j = 0; j < m; ++j)
            for (size_t i = 0; i < n; ++i) a[i][j] = s.cols[j][i];
        s.elim.assign(n, std::vector<Rational>(n, Rational(0)));
        for (size_t i = 0; i < n; ++i) s.elim[i][i] = 1;
        s.pivot_col.clear();
        size_t row = 0;
        for (size_t col = 0; col < m && row < n; ++col) {
            size_t sel = row;
            while (sel < n && a[sel][col] == 0) ++sel;
            if (sel == n) throw MathError("mf sector: dependent decomposition columns");
            std::swap(a[sel], a[row]);
            std::swap(s.elim[sel], s.elim[row]);
            Rational inv = Rational(1) / a[row][col];
            for (auto& v : a[row]) v *= inv;
            for (auto& v : s.elim[row]) v *= inv;
            for (size_t i = 0; i < n; ++i) {
                if (i == row || a[i][col] == 0) continue;
                Rational f = a[i][col];
                for (size_t k = col; k < m; ++k) a[i][k] -= f * a[row][k];
                for (size_t k = 0; k < n; ++k) s.elim[i][k] -= f * s.elim[row][k];
            }
            s.pivot_col.push_back(static_cast<int>(col));
            ++row;
        }
        if (s.pivot_col.size() != m)
            throw MathError("mf sector: dependent decomposition columns");
    }
    std::vector<Rational> z(n, Rational(0));
    for (size_t i = 0; i < n; ++i) {
        for (size_t k = 0; k < n; ++k)
            if (x[k] != 0 && s.elim[i][k] != 0) z[i] += s.elim[i][k] * x[k];
    }
    std::vector<Rational> y(m, Rational(0));
    for (size_t i = 0; i < s.pivot_col.size(); ++i) y[s.pivot_col[i]] = z[i];
    for (size_t i = m; i < n; ++i)
        if (z[i] != 0) throw MathError("mf sector: decomposition failed (raise deg_bound)");
    return y;
}

MFCategory::SectorReport MFCategory::sector_report(int src, int dst,
                                                   const std::vector<Integer>& lambda) {
    const Sector& s = sector_for(src, dst, lambda);
    SectorReport r;
    r.basis_dim = s.dim_low;
    r.segment_count = static_cast<int>(s.segments.size());
    r.split_complete = s.complete;
    // homology of the truncated sector: kernel of d on the low part modulo
    // the image directions that stay inside the low part
    size_t n = s.basis.size();
    std::vector<std::vector<Rational>> dcols;
    for (int idx = 0; idx < s.dim_low; ++idx) {
        MFHomElement u = zero_hom(src, dst);
        append(u.e[s.basis[idx].i][s.basis[idx].j], 1, s.basis[idx].elem);
        dcols.push_back(coords(s, differential(u)));
    }
    QElim full, high;
    int rank_full = 0, rank_high = 0;
    for (const auto& c : dcols) {
        if (full.add(c)) ++rank_full;
        std::vector<Rational> hc(c.begin() + s.dim_low, c.end());
        hc.resize(n, Rational(0));
        if (high.add(hc)) ++rank_high;
    }
    int ker = s.dim_low - rank_full;
    int im_low = rank_full - rank_high;
    r.homology_dim = ker - im_low;
    return r;
}

MFHomElement MFCategory::h(const MFHomElement& f) {
    if (f.zero()) return f;
    const Sector& s = sector_for(f.src, f.dst, sector_label(f));
    auto y = solve_decomposition(s, coords(s, f));
    std::vector<Rational> out(s.basis.size(), Rational(0));
    for (size_t c = 0; c < y.size(); ++c) {
        if (y[c] == 0 || s.col_kind[c] != 2) continue;
        const auto& ucol = s.cols[s.col_mate[c]];
        for (size_t b = 0; b < out.size(); ++b) out[b] += y[c] * ucol[b];
    }
    return from_coords(s, out);
}

MFHomElement MFCategory::pi(const MFHomElement& f) {
    if (f.zero()) return f;
    const Sector& s = sector_for(f.src, f.dst, sector_label(f));
    auto y = solve_decomposition(s, coords(s, f));
    std::vector<Rational> out(s.basis.size(), Rational(0));
    for (size_t c = 0; c < y.size(); ++c) {
        if (y[c] == 0 || s.col_kind[c] != 1) continue;
        for (size_t b = 0; b < out.size(); ++b) out[b] += y[c] * s.cols[c][b];
    }
    return from_coords(s, out);
}

namespace {
struct MFOps {
    MFCategory* cat;
    MFHomElement zero() const { return MFHomElement{}; }
    bool is_zero(const MFHomElement& f) const { return f.zero(); }
    MFHomElement add(const MFHomElement& a, const MFHomElement& b) const {
        return cat->add(a, b);
    }
    MFHomElement mu2(const MFHomElement& a, const MFHomElement& b) const {
        return cat->product(a, b);
    }
    MFHomElement h(const MFHomElement& f) const { return cat->h(f); }
    MFHomElement pi(const MFHomElement& f) const { return cat->pi(f); }
};
} // namespace

namespace {
// product over the binary nodes of the leaf-count sign used in mu
int tree_sign(const PlanarTree& t) {
    if (t.leaf() || t.children.size() != 2) return 1;
    int nl = t.children[0].leaves(), nr = t.children[1].leaves();
    int s = (nr & 1) && !(nl & 1) ? -1 : 1;
    return s * tree_sign(t.children[0]) * tree_sign(t.children[1]);
}
} // namespace

MFHomElement MFCategory::mu_via_trees(const std::vector<MFHomElement>& inputs) {
    if (inputs.empty()) throw MathError("mf mu: no inputs");
    if (inputs.size() == 1) return differential(inputs[0]);
    MFOps ops{this};
    int n = static_cast<int>(inputs.size());
    MFHomElement acc;
    bool any = false;
    for (const PlanarTree& t : enumerate_trees(n)) {
        int cursor = 0;
        MFHomElement v = transfer_product_tree<MFHomElement>(ops, t, inputs, cursor, true);
        if (v.zero()) continue;
        if (tree_sign(t) < 0) v = scale(Rational(-1), v);
        acc = any ? add(acc, v) : v;
        any = true;
    }
    return acc;
}

MFHomElement MFCategory::mu(const std::vector<MFHomElement>& inputs) {
    if (inputs.empty()) throw MathError("mf mu: no inputs");
    int n = static_cast<int>(inputs.size());
    if (n == 1) return differential(inputs[0]);
    // Interval dynamic program equivalent to the binary-tree sum: S[i][j) is
    // the sum over cut points of the products of the h-corrected halves,
    // T = h(S) feeds larger intervals; mu = pi(S) at the root.
    std::vector<std::vector<MFHomElement>> T(n + 1, std::vector<MFHomElement>(n + 1));
    std::vector<std::vector<bool>> tz(n + 1, std::vector<bool>(n + 1, true));
    auto S = [&](int i, int j) {
        MFHomElement acc;
        bool any = false;
        for (int c = i + 1; c < j; ++c) {
            if (tz[i][c] || tz[c][j]) continue;
            MFHomElement p = product(T[i][c], T[c][j]);
            if (p.zero()) continue;
            // node sign by leaf counts: flip when the right factor covers an
            // odd number of leaves and the left an even number
            if (((j - c) & 1) && !((c - i) & 1)) p = scale(Rational(-1), p);
            acc = any ? add(acc, p) : p;
            any = true;
        }
        return acc;
    };
    for (int i = 0; i < n; ++i) {
        T[i][i + 1] = inputs[i];
        tz[i][i + 1] = inputs[i].zero();
    }
    for (int len = 2; len < n; ++len)
        for (int i = 0; i + len <= n; ++i) {
            MFHomElement s = S(i, i + len);
            if (!s.zero()) T[i][i + len] = h(s);
            tz[i][i + len] = T[i][i + len].zero();
        }
    MFHomElement root = S(0, n);
    return root.zero() ? root : pi(root);
}

std::vector<std::pair<Rational, ZigSegment>> MFCategory::zeta_coordinates(const MFHomElement& f) {
    std::vector<std::pair<Rational, ZigSegment>> out;
    if (f.zero()) return out;
    const Sector& s = sector_for(f.src, f.dst, sector_label(f));
    auto y = solve_decomposition(s, coords(s, f));
    size_t seg = 0;
    for (size_t c = 0; c < y.size(); ++c) {
        if (s.col_kind[c] != 1) {
            if (y[c] != 0) throw MathError("mf: morphism is not in the zeta span");
            continue;
        }
        if (y[c] != 0) out.emplace_back(y[c], s.segments[seg]);
        ++seg;
    }
    return out;
}

} // namespace dimerlab
