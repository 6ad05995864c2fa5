#include "dimerlab/twisted.hpp"

#include <algorithm>
#include <functional>

namespace dimerlab {

namespace {

GentleMorphism single(const SpiralPath& p) {
    GentleMorphism m;
    m.add(Rational(1), p);
    return m;
}

void scale_into(TwistedHom& acc, const TwistedHom& t, const Rational& c) {
    for (size_t r = 0; r < t.entries.size(); ++r)
        for (size_t s = 0; s < t.entries[r].size(); ++s)
            for (const auto& [coef, path] : t.entries[r][s].terms)
                acc.entries[r][s].add(c * coef, path);
}

} // namespace

TwistedObject TwistedObject::plain(int object, int shift) {
    TwistedObject t;
    t.summands.push_back({object, shift});
    t.delta.assign(1, std::vector<GentleMorphism>(1));
    return t;
}

bool TwistedHom::zero() const {
    for (const auto& row : entries)
        for (const auto& e : row)
            if (!e.zero()) return false;
    return true;
}

void TwistedHom::normalize() {
    for (auto& row : entries)
        for (auto& e : row) e.normalize();
}

TwistedCategory::TwistedCategory(const GentleCategory& g, KappaMap kappa)
    : g_(g), mu_(g, std::move(kappa)) {}

std::optional<int> TwistedCategory::degree(const TwistedObject& dst, const TwistedObject& src,
                                           const TwistedHom& f) const {
    std::optional<int> deg;
    for (int r = 0; r < dst.size(); ++r)
        for (int s = 0; s < src.size(); ++s)
            for (const auto& [coef, path] : f.entries[r][s].terms) {
                if (coef == Rational(0)) continue;
                int d = (g_.degree(path) + dst.summands[r].shift + src.summands[s].shift) % 2;
                if (deg && *deg != d) return std::nullopt;
                deg = d;
            }
    return deg;
}

bool TwistedCategory::validate(const TwistedObject& t, std::string* why) const {
    auto fail = [&](const std::string& s) {
        if (why) *why = s;
        return false;
    };
    int n = t.size();
    if (n == 0) return fail("twisted object has no summands");
    if ((int)t.delta.size() != n) return fail("delta has wrong shape");
    for (const auto& row : t.delta)
        if ((int)row.size() != n) return fail("delta has wrong shape");
    for (const auto& sm : t.summands)
        if (sm.object < 0 || sm.object >= g_.num_objects() || (sm.shift & ~1))
            return fail("summand out of range");
    for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s)
            for (const auto& [coef, path] : t.delta[r][s].terms) {
                if (coef == Rational(0)) continue;
                if (r >= s) return fail("delta is not strictly upper triangular");
                if (g_.tail(path) != t.summands[s].object ||
                    g_.head(path) != t.summands[r].object)
                    return fail("delta entry has wrong endpoints");
                if ((g_.degree(path) + t.summands[r].shift + t.summands[s].shift) % 2 != 1)
                    return fail("delta entry is not of degree 1");
            }
    // Maurer-Cartan: sum_d (-1)^{d(d-1)/2} mu_d(delta,...,delta) = 0; the sum
    // is finite because delta is strictly triangular (mu_1 vanishes).
    TwistedHom dlt{t.delta};
    TwistedHom mc = zero_hom(t, t);
    std::vector<TwistedObject> objs;
    std::vector<TwistedHom> fs;
    objs.push_back(t);
    for (int d = 1; d < n; ++d) {
        objs.push_back(t);
        fs.push_back(dlt);
        if (d < 2) continue;
        Rational sgn((d * (d - 1) / 2) % 2 ? -1 : 1);
        scale_into(mc, matrix_mu(objs, fs), sgn);
    }
    mc.normalize();
    if (!mc.zero()) return fail("Maurer-Cartan sum does not vanish");
    return true;
}

TwistedHom TwistedCategory::identity(const TwistedObject& t) const {
    TwistedHom f = zero_hom(t, t);
    for (int r = 0; r < t.size(); ++r)
        f.entries[r][r] = single(g_.trivial(t.summands[r].object));
    return f;
}

TwistedHom TwistedCategory::zero_hom(const TwistedObject& dst, const TwistedObject& src) const {
    TwistedHom f;
    f.entries.assign(dst.size(), std::vector<GentleMorphism>(src.size()));
    return f;
}

bool TwistedCategory::equal(TwistedHom a, TwistedHom b) const {
    a.normalize();
    b.normalize();
    return a.entries == b.entries;
}

void TwistedCategory::check_shapes(const std::vector<TwistedObject>& objs,
                                   const std::vector<TwistedHom>& fs) const {
    if (objs.size() != fs.size() + 1) throw InputError("twisted product: object count mismatch");
    for (size_t i = 0; i < fs.size(); ++i)
        if ((int)fs[i].entries.size() != objs[i].size() ||
            (fs[i].entries.empty() ? 0 : (int)fs[i].entries[0].size()) != objs[i + 1].size())
            throw InputError("twisted product: matrix shape mismatch");
}

TwistedHom TwistedCategory::matrix_mu(const std::vector<TwistedObject>& objs,
                                      const std::vector<TwistedHom>& fs) const {
    check_shapes(objs, fs);
    int t = (int)fs.size();
    TwistedHom out = zero_hom(objs.front(), objs.back());
    std::vector<GentleMorphism> args(t);
    // sum over all summand chains r0, r1, ..., rt through the matrices
    std::function<void(int, int, int)> rec = [&](int pos, int r0, int cur) {
        if (pos == t) {
            GentleMorphism v = mu_.eval_linear(args);
            for (const auto& [coef, path] : v.terms) out.entries[r0][cur].add(coef, path);
            return;
        }
        for (int nxt = 0; nxt < objs[pos + 1].size(); ++nxt) {
            if (fs[pos].entries[cur][nxt].zero()) continue;
            args[pos] = fs[pos].entries[cur][nxt];
            rec(pos + 1, r0, nxt);
        }
    };
    for (int r0 = 0; r0 < objs[0].size(); ++r0) rec(0, r0, r0);
    out.normalize();
    return out;
}

int TwistedCategory::nilpotency(const TwistedObject& t) const {
    int n = t.size();
    std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
    for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) reach[r][s] = !t.delta[r][s].zero();
    int d = 0;
    auto nonzero = [&] {
        for (auto& row : reach)
            for (char c : row)
                if (c) return true;
        return false;
    };
    std::vector<std::vector<char>> cur = reach;
    while (nonzero()) {
        ++d;
        if (d >= n) break; // strict triangularity would forbid this
        std::vector<std::vector<char>> nxt(n, std::vector<char>(n, 0));
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                if (reach[r][c])
                    for (int s = 0; s < n; ++s)
                        if (cur[c][s]) nxt[r][s] = 1;
        reach = nxt;
    }
    return d;
}

TwistedHom TwistedCategory::product(const std::vector<TwistedObject>& objs,
                                    const std::vector<TwistedHom>& fs) const {
    check_shapes(objs, fs);
    int n = (int)fs.size();
    std::vector<int> cap(n + 1), cnt(n + 1, 0);
    for (int j = 0; j <= n; ++j) cap[j] = nilpotency(objs[j]);
    TwistedHom out = zero_hom(objs.front(), objs.back());
    std::function<void(int)> rec = [&](int slot) {
        if (slot > n) {
            std::vector<TwistedObject> eobjs;
            std::vector<TwistedHom> efs;
            for (int j = 0; j <= n; ++j) {
                for (int c = 0; c < cnt[j]; ++c) {
                    eobjs.push_back(objs[j]);
                    efs.push_back(TwistedHom{objs[j].delta});
                }
                eobjs.push_back(objs[j]);
                if (j < n) efs.push_back(fs[j]);
            }
            int ndelta = 0;
            for (int j = 0; j <= n; ++j) ndelta += cnt[j];
            if (efs.empty()) return;
            scale_into(out, matrix_mu(eobjs, efs), Rational(ndelta % 2 ? -1 : 1));
            return;
        }
        for (cnt[slot] = 0; cnt[slot] <= cap[slot]; ++cnt[slot]) rec(slot + 1);
        cnt[slot] = 0;
    };
    rec(0);
    out.normalize();
    return out;
}

QuiverModel reverse_arrow(const QuiverModel& q, int arrow) {
    if (arrow < 0 || arrow >= q.num_arrows()) throw InputError("reverse_arrow: no such arrow");
    QuiverModel out = q;
    std::swap(out.arrows[arrow].tail, out.arrows[arrow].head);
    for (auto& f : out.faces)
        for (auto& e : f.entries)
            if (e.arrow == arrow) e.inverse = !e.inverse;
    out.dimer = false;
    out.build_index();
    return out;
}

QuiverModel split_face(const QuiverModel& q, int face, int i0, int i1, const std::string& id) {
    if (face < 0 || face >= (int)q.faces.size() || !q.faces[face].positive)
        throw InputError("split_face: no such positive face");
    const Face& f = q.faces[face];
    int l = (int)f.entries.size();
    if (i0 < 0 || i1 < 0 || i0 >= l || i1 >= l || i0 == i1)
        throw InputError("split_face: bad entry positions");
    QuiverModel out = q;
    Arrow b;
    b.id = id;
    b.tail = q.entry_head(f.entries[i0]);
    b.head = q.entry_head(f.entries[i1]);
    int bi = out.num_arrows();
    out.arrows.push_back(b);
    // the face walk from i1+1 to i0 followed by b, and from i0+1 to i1
    // followed by the inverse of b
    Face f1, f2;
    f1.positive = f2.positive = true;
    for (int j = (i1 + 1) % l; ; j = (j + 1) % l) {
        f1.entries.push_back(f.entries[j]);
        if (j == i0) break;
    }
    f1.entries.push_back({bi, false});
    for (int j = (i0 + 1) % l; ; j = (j + 1) % l) {
        f2.entries.push_back(f.entries[j]);
        if (j == i1) break;
    }
    f2.entries.push_back({bi, true});
    out.faces[face] = f1;
    out.faces.push_back(f2);
    out.dimer = false;
    out.build_index();
    out.validate_surface();
    return out;
}

namespace {

// Chain object of a positive rectified face through v0: walking the face from
// the corner leaving v0, the intermediate objects become shifted summands with
// the walk arrows on the superdiagonal; `in` and `out` are the corner maps.
struct ChainObject {
    TwistedObject w;
    TwistedHom in, out; // v0 -> w and w -> v0
};

std::vector<ChainObject> chain_objects(const GentleCategory& g, int v0) {
    std::vector<ChainObject> out;
    for (int c = 0; c < g.num_positive(); ++c) {
        int l = g.positive_length(c);
        for (int start = 0; start < l; ++start) {
            SpiralPath first = g.arrow_path(g.positive_arrow(c, start));
            if (g.tail(first) != v0 || l < 3) continue;
            std::vector<SpiralPath> walk;
            for (int j = 0; j < l; ++j)
                walk.push_back(g.arrow_path(g.positive_arrow(c, (start + j) % l)));
            int m = l - 1;
            ChainObject ch;
            ch.w.summands.resize(m);
            // summand j is the head of walk arrow m-1-j; shifts chosen so
            // every delta entry has degree 1
            for (int j = 0; j < m; ++j)
                ch.w.summands[j].object = g.head(walk[m - 1 - j]);
            ch.w.summands[m - 1].shift = g.degree(walk[0]) % 2;
            for (int j = m - 1; j > 0; --j)
                ch.w.summands[j - 1].shift =
                    (1 + g.degree(walk[m - j]) + ch.w.summands[j].shift) % 2;
            ch.w.delta.assign(m, std::vector<GentleMorphism>(m));
            for (int j = 0; j + 1 < m; ++j) {
                GentleMorphism e;
                e.add(Rational(1), walk[m - 1 - j]);
                ch.w.delta[j][j + 1] = e;
            }
            ch.in.entries.assign(m, std::vector<GentleMorphism>(1));
            ch.in.entries[m - 1][0] = single(walk[0]);
            ch.out.entries.assign(1, std::vector<GentleMorphism>(m));
            ch.out.entries[0][0] = single(walk[l - 1]);
            out.push_back(std::move(ch));
        }
    }
    return out;
}

} // namespace

TwistedCheckReport added_arrow_check(const QuiverModel& q_split, int new_arrow) {
    TwistedCheckReport rep;
    if (new_arrow < 0 || new_arrow >= q_split.num_arrows())
        throw InputError("added_arrow_check: no such arrow");
    GentleCategory g(rectify(q_split));
    TwistedCategory tw(g, KappaMap::mu_bar(g));
    int v0 = new_arrow; // rectified objects are indexed by the source arrows
    TwistedObject plain = TwistedObject::plain(v0);
    auto chains = chain_objects(g, v0);
    rep.chain_objects = (int)chains.size();
    if (chains.empty()) rep.violations.push_back("no positive face through the new object");
    for (const auto& ch : chains) {
        std::string why;
        if (!tw.validate(ch.w, &why)) {
            rep.violations.push_back("chain object invalid: " + why);
            continue;
        }
        auto din = tw.degree(ch.w, plain, ch.in);
        auto dout = tw.degree(plain, ch.w, ch.out);
        if (!din || !dout || *din != 0 || *dout != 0)
            rep.violations.push_back("corner maps are not of degree 0");
        TwistedHom p1 = tw.product({plain, ch.w, plain}, {ch.out, ch.in});
        if (!tw.equal(p1, tw.identity(plain)))
            rep.violations.push_back("product out.in is not the identity of the plain object");
        TwistedHom p2 = tw.product({ch.w, plain, ch.w}, {ch.in, ch.out});
        if (!tw.equal(p2, tw.identity(ch.w)))
            rep.violations.push_back("product in.out is not the identity of the chain object");
    }
    return rep;
}

TwistedCheckReport reverse_direction_check(const QuiverModel& q, int arrow) {
    TwistedCheckReport rep;
    if (arrow < 0 || arrow >= q.num_arrows())
        throw InputError("reverse_direction_check: no such arrow");
    QuiverModel q2 = reverse_arrow(q, arrow);
    RectifiedDimer r1 = rectify(q);
    RectifiedDimer r2 = rectify(q2);
    int v0 = arrow;
    // identical rectified quivers, degrees flipped once per endpoint at v0
    if (r1.rq.num_arrows() != r2.rq.num_arrows()) {
        rep.violations.push_back("rectified quivers differ in size");
        return rep;
    }
    for (int j = 0; j < r1.rq.num_arrows(); ++j) {
        if (r1.rq.arrows[j].id != r2.rq.arrows[j].id ||
            r1.rq.arrows[j].tail != r2.rq.arrows[j].tail ||
            r1.rq.arrows[j].head != r2.rq.arrows[j].head) {
            rep.violations.push_back("rectified quivers differ structurally");
            return rep;
        }
        int flips = (r1.rq.arrows[j].tail == v0) + (r1.rq.arrows[j].head == v0);
        if ((r1.degree[j] + flips) % 2 != r2.degree[j] % 2)
            rep.violations.push_back("unexpected degree change at " + r1.rq.arrows[j].id);
    }
    GentleCategory g1(std::move(r1)), g2(std::move(r2));
    TwistedCategory t1(g1, KappaMap::mu_bar(g1)), t2(g2, KappaMap::mu_bar(g2));
    // the functor swaps the shift on summands at v0 and keeps morphisms
    auto swap_shift = [&](TwistedObject t) {
        for (auto& sm : t.summands)
            if (sm.object == v0) sm.shift ^= 1;
        return t;
    };
    for (int v = 0; v < g1.num_objects(); ++v) {
        auto chains = chain_objects(g1, v);
        rep.chain_objects += (int)chains.size();
        for (const auto& ch : chains) {
            TwistedObject w2 = swap_shift(ch.w);
            std::string why;
            if (!t1.validate(ch.w, &why)) {
                rep.violations.push_back("source object invalid: " + why);
                continue;
            }
            if (!t2.validate(w2, &why)) {
                rep.violations.push_back("image object invalid: " + why);
                continue;
            }
            TwistedObject p1 = TwistedObject::plain(v);
            TwistedObject p2 = swap_shift(p1);
            auto d1 = t1.degree(ch.w, p1, ch.in);
            auto d2 = t2.degree(w2, p2, ch.in);
            if (d1 != d2) rep.violations.push_back("degree not preserved by the functor");
            TwistedHom a1 = t1.product({p1, ch.w, p1}, {ch.out, ch.in});
            TwistedHom a2 = t2.product({p2, w2, p2}, {ch.out, ch.in});
            if (!t1.equal(a1, a2)) rep.violations.push_back("product out.in not preserved");
            TwistedHom b1 = t1.product({ch.w, p1, ch.w}, {ch.in, ch.out});
            TwistedHom b2 = t2.product({w2, p2, w2}, {ch.in, ch.out});
            if (!t1.equal(b1, b2)) rep.violations.push_back("product in.out not preserved");
        }
    }
    return rep;
}

} // namespace dimerlab
