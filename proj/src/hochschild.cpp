#include "dimerlab/hochschild.hpp"

#include <algorithm>
#include <stdexcept>

namespace dimerlab {

namespace {

// All spiral paths from v to w of length at most max_len, plus the trivial
// path when v == w.
std::vector<SpiralPath> paths_up_to(const GentleCategory& g, int v, int w, int max_len) {
    std::vector<SpiralPath> out;
    if (v == w) out.push_back(g.trivial(v));
    for (int z = 0; z < g.num_cycles(); ++z) {
        int n = g.cycle_length(z);
        for (int o = 0; o < n; ++o) {
            SpiralPath probe{z, o, 1, 0};
            if (g.tail(probe) != v) continue;
            for (int len = 1; len <= max_len; ++len) {
                SpiralPath p = g.path(z, o, len);
                if (g.head(p) == w) out.push_back(p);
            }
        }
    }
    return out;
}

} // namespace

int BardzellComplex::word_arrow(int i) const {
    // Word order runs opposite to traversal order.
    return g->positive_arrow(cycle, -i);
}

int BardzellComplex::index_of(int start, int len, const SpiralPath& target) const {
    if (len < 0 || len > max_degree) return -1;
    int l = g->positive_length(cycle);
    start = ((start % l) + l) % l;
    const auto& b = basis[len];
    for (int i = 0; i < static_cast<int>(b.size()); ++i)
        if (b[i].arc_start == start && b[i].target == target) return i;
    return -1;
}

bool BardzellComplex::reliable(int k) const {
    if (k < 0 || k >= max_degree) return false;
    if (truncated[k]) return false;
    if (k > 0 && truncated[k - 1]) return false;
    return true;
}

bool BardzellComplex::d_squared_zero() const {
    for (int k = 0; k + 1 < max_degree; ++k) {
        if (truncated[k] || truncated[k + 1]) continue;
        IntMat prod = d[k + 1].mul(d[k]);
        for (const auto& e : prod.a)
            if (e != 0) return false;
    }
    return true;
}

BardzellComplex bardzell_cochain_complex(const GentleCategory& g, int cycle, int winding_bound,
                                         bool corrupt) {
    BardzellComplex bc;
    bc.g = &g;
    bc.cycle = cycle;
    bc.winding_bound = winding_bound;
    int l = g.positive_length(cycle);
    bc.max_degree = winding_bound * l + 1;

    int max_neg = 1;
    for (int z = 0; z < g.num_cycles(); ++z) max_neg = std::max(max_neg, g.cycle_length(z));
    // Target lengths are capped relative to the degree; the differential adds
    // one arrow to both the arc and the target, so the cap never cuts a term.
    int slack = winding_bound * max_neg;

    bc.basis.resize(bc.max_degree + 1);
    for (int k = 0; k <= bc.max_degree; ++k)
        for (int s = 0; s < l; ++s) {
            int headv = g.rectified().rq.arrows[bc.word_arrow(s)].head;
            int tailv = k == 0 ? headv : g.rectified().rq.arrows[bc.word_arrow(s + k - 1)].tail;
            for (const auto& x : paths_up_to(g, tailv, headv, k + slack))
                bc.basis[k].push_back({s, k, x});
        }

    bc.truncated.assign(bc.max_degree + 1, false);
    bc.d.resize(bc.max_degree);
    for (int k = 0; k < bc.max_degree; ++k) {
        bc.d[k] = IntMat(bc.dim(k + 1), bc.dim(k));
        for (int col = 0; col < bc.dim(k); ++col) {
            const auto& e = bc.basis[k][col];
            int i = e.arc_start, j = e.arc_start + k - 1;
            auto left = g.compose(g.arrow_path(bc.word_arrow(i - 1)), e.target);
            if (left) {
                int row = bc.index_of(i - 1, k + 1, *left);
                if (row < 0)
                    bc.truncated[k] = true;
                else
                    bc.d[k].at(row, col) += 1;
            }
            auto right = g.compose(e.target, g.arrow_path(bc.word_arrow(j + 1)));
            if (right) {
                int row = bc.index_of(i, k + 1, *right);
                if (row < 0)
                    bc.truncated[k] = true;
                else
                    bc.d[k].at(row, col) += (k % 2 == 0) ? 1 : -1;
            }
        }
    }

    if (corrupt) {
        for (int k = 1; k < bc.max_degree && corrupt; ++k)
            for (auto& e : bc.d[k].a)
                if (e != 0) {
                    e = -e;
                    corrupt = false;
                    break;
                }
    }
    return bc;
}

const HHEntry& HHReport::at(int degree) const {
    for (const auto& e : entries)
        if (e.degree == degree) return e;
    throw std::out_of_range("no homology entry for requested degree");
}

HHReport hh_dimensions(const BardzellComplex& bc) {
    HHReport rep;
    rep.d_squared_zero = bc.d_squared_zero();
    std::vector<int> rank(bc.max_degree);
    for (int k = 0; k < bc.max_degree; ++k) rank[k] = smith_normal_form(bc.d[k]).rank;
    for (int k = 1; k < bc.max_degree; ++k) {
        HHEntry e;
        e.degree = k;
        e.kernel = bc.dim(k) - rank[k];
        e.image = rank[k - 1];
        e.homology = e.kernel - e.image;
        e.reliable = bc.reliable(k) && rep.d_squared_zero;
        rep.entries.push_back(e);
    }
    return rep;
}

Cochain apply_d(const BardzellComplex& bc, const Cochain& c) {
    Cochain out;
    out.degree = c.degree + 1;
    out.coeff.assign(bc.dim(out.degree), Rational(0));
    const IntMat& m = bc.d[c.degree];
    for (int r = 0; r < m.rows; ++r)
        for (int col = 0; col < m.cols; ++col)
            if (m.at(r, col) != 0 && c.coeff[col] != 0)
                out.coeff[r] += Rational(m.at(r, col)) * c.coeff[col];
    return out;
}

bool is_cocycle(const BardzellComplex& bc, const Cochain& c) {
    if (c.degree >= bc.max_degree) throw std::out_of_range("degree beyond complex");
    auto d = apply_d(bc, c);
    return std::all_of(d.coeff.begin(), d.coeff.end(), [](const Rational& x) { return x == 0; });
}

bool is_coboundary(const BardzellComplex& bc, const Cochain& c) {
    int k = c.degree;
    if (k == 0) return std::all_of(c.coeff.begin(), c.coeff.end(),
                                   [](const Rational& x) { return x == 0; });
    // Rational coefficients are cleared to integers, then compare the rank of
    // the incoming differential with and without the cochain adjoined.
    Integer lcm = 1;
    for (const auto& x : c.coeff) {
        Integer den = boost::multiprecision::denominator(x);
        lcm = lcm / boost::multiprecision::gcd(lcm, den) * den;
    }
    const IntMat& m = bc.d[k - 1];
    IntMat aug(m.rows, m.cols + 1);
    for (int r = 0; r < m.rows; ++r) {
        for (int col = 0; col < m.cols; ++col) aug.at(r, col) = m.at(r, col);
        aug.at(r, m.cols) = boost::multiprecision::numerator(c.coeff[r]) *
                            (lcm / boost::multiprecision::denominator(c.coeff[r]));
    }
    return smith_normal_form(aug).rank == smith_normal_form(m).rank;
}

Cochain omega0(const BardzellComplex& bc, int n) {
    const GentleCategory& g = *bc.g;
    int l = g.positive_length(bc.cycle);
    Cochain c;
    c.degree = n * l;
    c.coeff.assign(bc.dim(c.degree), Rational(0));
    for (int i = 1; i <= n * l; ++i) {
        int headv = g.rectified().rq.arrows[bc.word_arrow(i)].head;
        int idx = bc.index_of(i, n * l, g.trivial(headv));
        if (idx < 0) throw std::out_of_range("omega0 target outside basis");
        c.coeff[idx] += (static_cast<long long>(i) * (n * l - 1)) % 2 == 0 ? 1 : -1;
    }
    return c;
}

Cochain omega1(const BardzellComplex& bc, int n) {
    const GentleCategory& g = *bc.g;
    int l = g.positive_length(bc.cycle);
    Cochain c;
    c.degree = n * l + 1;
    c.coeff.assign(bc.dim(c.degree), Rational(0));
    for (int i = 1; i <= n * l; ++i) {
        int idx = bc.index_of(i, n * l + 1, g.arrow_path(bc.word_arrow(i)));
        if (idx < 0) throw std::out_of_range("omega1 target outside basis");
        c.coeff[idx] += (static_cast<long long>(i) * (n * l + 1)) % 2 == 0 ? 1 : -1;
    }
    return c;
}

bool hh_generator_check(const BardzellComplex& bc, int n) {
    int l = bc.g->positive_length(bc.cycle);
    if (n * l + 1 >= bc.max_degree) return false;
    for (Cochain c : {omega0(bc, n), omega1(bc, n)}) {
        bool zero = std::all_of(c.coeff.begin(), c.coeff.end(),
                                [](const Rational& x) { return x == 0; });
        if (zero) return false;
        if (!is_cocycle(bc, c)) return false;
        if (is_coboundary(bc, c)) return false;
    }
    return true;
}

GentleMorphism g_multifunctor(const GentleCategory& g, const ZetaChoice& zc,
                              const std::vector<SpiralPath>& xs) {
    GentleMorphism out;
    int k = static_cast<int>(xs.size());
    if (k < 2) return out;
    const SpiralPath& x1 = xs.front();
    const SpiralPath& xk = xs.back();
    if (x1.cycle < 0 || xk.cycle < 0) return out;
    for (int m = 0; m + 1 < k; ++m)
        if (g.tail(xs[m]) != g.head(xs[m + 1])) return out;

    int a = g.first_arrow(x1);
    if (g.last_arrow(xk) != a) return out;
    int c = g.pos_cycle_of(a);
    int l = g.positive_length(c);
    if ((k - 1) % l != 0) return out;
    int n = (k - 1) / l;
    // The middle entries, read right to left, must continue the positive
    // cycle backwards from a so that the full word is its n-th power.
    int pos = g.pos_index_of(a);
    for (int m = 2; m <= k - 1; ++m) {
        const SpiralPath& x = xs[m - 1];
        if (x.cycle < 0 || x.length != 1) return out;
        if (g.first_arrow(x) != g.positive_arrow(c, pos - (m - 1))) return out;
    }
    auto it = zc.zeta.find({a, n});
    if (it == zc.zeta.end() || it->second == 0) return out;
    auto sat = g.compose(g.strip_first(x1), xk);
    if (!sat) return out;
    out.add(it->second, *sat);
    return out;
}

GentleMorphism dg_multifunctor(const GentleCategory& g, const ZetaChoice& zc, int arity,
                               const std::vector<SpiralPath>& us) {
    GentleMorphism out;
    int k = arity;
    if (static_cast<int>(us.size()) != k + 1) throw std::invalid_argument("need k+1 arguments");

    std::vector<SpiralPath> head(us.begin() + 1, us.end());
    GentleMorphism gv = g_multifunctor(g, zc, head);
    for (auto& [coef, p] : gv.terms)
        if (auto q = g.compose(us[0], p)) out.add(coef, *q);

    for (int i = 1; i <= k; ++i) {
        auto prod = g.compose(us[i - 1], us[i]);
        if (!prod) continue;
        std::vector<SpiralPath> args;
        for (int m = 0; m < i - 1; ++m) args.push_back(us[m]);
        args.push_back(*prod);
        for (int m = i + 1; m <= k; ++m) args.push_back(us[m]);
        GentleMorphism gm = g_multifunctor(g, zc, args);
        for (auto& [coef, p] : gm.terms) out.add(i % 2 ? -coef : coef, p);
    }

    std::vector<SpiralPath> tail(us.begin(), us.end() - 1);
    GentleMorphism gt = g_multifunctor(g, zc, tail);
    for (auto& [coef, p] : gt.terms)
        if (auto q = g.compose(p, us[k]))
            out.add((k + 1) % 2 ? -coef : coef, *q);

    out.normalize();
    return out;
}

} // namespace dimerlab
