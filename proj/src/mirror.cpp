#include "dimerlab/mirror.hpp"

#include <algorithm>
#include <set>
#include <random>
#include <sstream>

namespace dimerlab {

namespace {

constexpr int kMismatchCap = 8;

std::string describe_segment(const QuiverModel& m, const ZigSegment& s) {
    std::ostringstream os;
    os << "seg(" << m.arrows[s.arrow].id << "," << (s.phase ? "zag" : "zig") << "," << s.length
       << ")";
    return os.str();
}

} // namespace

MirrorComparison::MirrorComparison(const QuiverModel& m, int deg_bound, int wrap_bound)
    : mf_(m, 0, deg_bound, false, wrap_bound),
      g_(rectify(mirror_dimer(m))),
      zz_(zigzag_data(m)),
      wrap_bound_(wrap_bound) {
    // objects correspond through the arrow ids
    const QuiverModel& rq = g_.rectified().rq;
    if (rq.num_vertices() != m.num_arrows()) throw MathError("mirror: object count mismatch");
    for (int a = 0; a < m.num_arrows(); ++a)
        if (rq.vertex_ids[a] != m.arrows[a].id) throw MathError("mirror: object id mismatch");
}

SpiralPath MirrorComparison::spiral_of(const ZigSegment& s) const {
    std::vector<int> ray = mf_.segment_ray(s);
    int L = static_cast<int>(ray.size());
    if (L == 1) return g_.trivial(vertex_of(ray[0]));
    const QuiverModel& rq = g_.rectified().rq;
    for (int z = 0; z < g_.num_cycles(); ++z) {
        int n = g_.cycle_length(z);
        for (int o = 0; o < n; ++o) {
            bool match = true;
            for (int j = 0; j + 1 < L && match; ++j) {
                const Arrow& a = rq.arrows[g_.cycle_arrow(z, o + j)];
                match = a.tail == vertex_of(ray[j]) && a.head == vertex_of(ray[j + 1]);
            }
            if (match) return g_.path(z, o, L - 1);
        }
    }
    throw MathError("mirror: segment has no spiral image");
}

ZigSegment MirrorComparison::segment_of_arrow(int rq_arrow) const {
    const Arrow& a = g_.rectified().rq.arrows[rq_arrow];
    int u = a.tail, v = a.head; // arrows of the dimer
    // the corner vertex of the rectified arrow picks the zigzag cycle, hence
    // the phase of the dual step
    int z = g_.neg_cycle_of(rq_arrow);
    if (zz_.pos_succ[u] == v && zz_.cycle_of[0][u] == z) return ZigSegment{u, 0, 2};
    if (zz_.neg_succ[u] == v && zz_.cycle_of[1][u] == z) return ZigSegment{u, 1, 2};
    throw MathError("mirror: rectified arrow is not a zigzag step");
}

std::vector<ZigSegment> MirrorComparison::segments(int a, int b, int winding_bound) const {
    std::vector<ZigSegment> out;
    if (a == b) out.push_back(ZigSegment{a, 0, 1});
    for (int ph = 0; ph < 2; ++ph) {
        int n = static_cast<int>(zz_.cycles[zz_.cycle_of[ph][a]].size());
        for (int len = 2; len <= (winding_bound + 1) * n; ++len) {
            ZigSegment s{a, ph, len};
            if (mf_.segment_dst(s) == b) out.push_back(s);
        }
    }
    return out;
}

bool MirrorComparison::check_tuple(const std::vector<ZigSegment>& segs, const MuEvaluator& ev,
                                   const std::vector<Rational>& rho, MirrorReport& rep) {
    std::vector<MFHomElement> margs;
    std::vector<SpiralPath> gargs;
    Rational in_scale = 1;
    for (const ZigSegment& s : segs) {
        margs.push_back(mf_.zeta(s));
        SpiralPath p = spiral_of(s);
        in_scale *= rescale_path(g_, rho, p);
        gargs.push_back(p);
    }
    ++rep.products_checked;

    GentleMorphism lhs; // transported matrix-factorization value
    MFHomElement mv = mf_.mu(margs);
    if (!mv.zero())
        for (auto& [c, s] : mf_.zeta_coordinates(mv)) {
            SpiralPath p = spiral_of(s);
            lhs.add(c * rescale_path(g_, rho, p), p);
        }
    lhs.normalize();

    GentleMorphism rhs;
    if (auto gv = ev.eval(gargs)) rhs.add(in_scale * gv->first, gv->second);
    rhs.normalize();

    if (lhs == rhs) return true;
    if (static_cast<int>(rep.mismatches.size()) < kMismatchCap) {
        std::ostringstream os;
        os << "product mismatch on (";
        for (size_t i = 0; i < segs.size(); ++i)
            os << (i ? ", " : "") << describe_segment(mf_.model(), segs[i]);
        os << "): mf gives";
        if (lhs.zero()) os << " 0";
        for (auto& [c, p] : lhs.terms) os << " " << c << "*" << g_.describe(p);
        os << ", gentle gives";
        if (rhs.zero()) os << " 0";
        for (auto& [c, p] : rhs.terms) os << " " << c << "*" << g_.describe(p);
        rep.mismatches.push_back(os.str());
    }
    return false;
}

MirrorReport MirrorComparison::run(int arity_bound, int winding_bound) {
    MirrorReport rep;
    const QuiverModel& m = mf_.model();
    int na = m.num_arrows();
    rep.objects = na;

    // hom-basis bijection: segments from a to b <-> spiral paths a -> b
    for (int a = 0; a < na; ++a)
        for (int b = 0; b < na; ++b) {
            std::set<SpiralPath> images;
            for (const ZigSegment& s : segments(a, b, winding_bound)) {
                SpiralPath p = spiral_of(s);
                if (g_.tail(p) != vertex_of(a) || g_.head(p) != vertex_of(b))
                    throw MathError("mirror: spiral image has wrong endpoints");
                if (mf_.parity(mf_.zeta(s)) != g_.degree(p))
                    throw MathError("mirror: spiral image has wrong degree");
                if (!images.insert(p).second) throw MathError("mirror: spiral image repeated");
            }
            auto basis = g_.hom_basis(vertex_of(a), vertex_of(b), winding_bound);
            std::set<SpiralPath> want(basis.begin(), basis.end());
            if (images == want) {
                ++rep.basis_pairs;
            } else if (static_cast<int>(rep.mismatches.size()) < kMismatchCap) {
                std::ostringstream os;
                os << "hom basis mismatch at (" << m.arrows[a].id << ", " << m.arrows[b].id
                   << "): " << images.size() << " segment images vs " << want.size()
                   << " spiral paths";
                rep.mismatches.push_back(os.str());
            }
        }

    // rescaling from the full positive cycles of the rectified mirror
    MuEvaluator bar(g_, KappaMap::mu_bar(g_));
    KappaMap kmf;
    for (int c = 0; c < g_.num_positive(); ++c) {
        int l = g_.positive_length(c);
        std::vector<SpiralPath> gargs;
        std::vector<MFHomElement> margs;
        for (int k = 0; k < l; ++k) {
            int rq_arrow = g_.positive_arrow(c, -k); // mu order walks backwards
            gargs.push_back(g_.arrow_path(rq_arrow));
            margs.push_back(mf_.zeta(segment_of_arrow(rq_arrow)));
        }
        auto gv = bar.eval(gargs);
        MFHomElement mv = mf_.mu(margs);
        if (!gv || gv->second.length != 0 || mv.zero()) {
            rep.mismatches.push_back("full-cycle product degenerate on cycle " +
                                     std::to_string(c));
            continue;
        }
        auto co = mf_.zeta_coordinates(mv);
        if (co.size() != 1 || co[0].second.length != 1) {
            rep.mismatches.push_back("full-cycle mf product is not a multiple of the identity");
            continue;
        }
        kmf.set(c, 1, co[0].first / gv->first);
    }
    auto rho = solve_rescaling(g_, kmf, KappaMap::mu_bar(g_));
    if (!rho) {
        rep.mismatches.push_back("no rescaling matches the full-cycle weights");
        return rep;
    }
    rep.rho = *rho;
    for (const Rational& r : rep.rho) rep.rescaling_trivial &= r == 1;

    // Structure constants.  Arity 2 and 3 are checked exhaustively.  At
    // higher arity the chains where the gentle side can reduce (a positive
    // cycle block is present) are all checked, and the remaining sea of
    // mutually-zero products is spot-checked by uniform sampling.
    std::vector<std::vector<ZigSegment>> by_dst(na);
    for (int a = 0; a < na; ++a)
        for (int b = 0; b < na; ++b)
            for (const ZigSegment& s : segments(a, b, winding_bound))
                by_dst[b].push_back(s);
    // chains may not outrun the segment enumeration of the result sector
    int max_cycle = 1;
    for (auto& cyc : zz_.cycles) max_cycle = std::max(max_cycle, static_cast<int>(cyc.size()));
    int budget = wrap_bound_ * max_cycle - 1;

    std::mt19937 rng(0x5eed);
    std::vector<ZigSegment> chain;
    auto rec = [&](auto&& self, int used) -> void {
        int k = static_cast<int>(chain.size());
        if (k >= 2) {
            if (k <= 3) {
                check_tuple(chain, bar, rep.rho, rep);
            } else {
                std::vector<SpiralPath> gargs;
                for (const ZigSegment& s : chain) gargs.push_back(spiral_of(s));
                bool candidate = !bar.reduction_sites(gargs).empty();
                unsigned denom = 1u << (6 + 2 * (k - 4));
                if (candidate || rng() % denom == 0) check_tuple(chain, bar, rep.rho, rep);
            }
        }
        if (k == arity_bound) return;
        for (const ZigSegment& s : by_dst[chain.back().arrow]) {
            if (used + s.length - 1 > budget) continue;
            chain.push_back(s);
            self(self, used + s.length - 1);
            chain.pop_back();
        }
    };
    for (const auto& ss : by_dst)
        for (const ZigSegment& s : ss) {
            chain.assign(1, s);
            rec(rec, s.length - 1);
        }
    return rep;
}

} // namespace dimerlab
