#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "dimerlab/dimer.hpp"
#include "dimerlab/gentle.hpp"

using namespace dimerlab;

namespace {

GentleCategory make_cc3() {
    return GentleCategory(rectify(load_model(std::string(DIMERLAB_DATA_DIR) + "/cc3.dimer")));
}

GentleCategory make_mirror_dimex2() {
    auto m = load_model(std::string(DIMERLAB_DATA_DIR) + "/dimex2.dimer");
    return GentleCategory(rectify(mirror_dimer(m)));
}

// A full positive cycle as a composable argument tuple: the arrows of the
// cycle in reverse traversal order, repeated n times, starting so that the
// block opens at traversal position `rot`.
std::vector<SpiralPath> full_cycle_tuple(const GentleCategory& g, int c, int rot, int n) {
    std::vector<SpiralPath> t;
    int l = g.positive_length(c);
    for (int k = 0; k < n * l; ++k) t.push_back(g.arrow_path(g.positive_arrow(c, rot - k)));
    return t;
}

} // namespace

TEST_CASE("gentle category of R(C^3): shape and hom spaces") {
    GentleCategory g = make_cc3();
    CHECK(g.num_objects() == 3);
    CHECK(g.rectified().rq.num_arrows() == 6);
    CHECK(g.num_positive() == 2);
    CHECK(g.num_cycles() == 1);
    CHECK(g.cycle_length(0) == 6);
    for (int c = 0; c < 2; ++c) CHECK(g.positive_length(c) == 3);
    // Rectified dimers of dimer models have all arrows in degree 1.
    for (int a = 0; a < 6; ++a) CHECK(g.arrow_degree(a) == 1);

    // Every nonzero path is a run in the hexagon: between any two objects the
    // number of basis paths grows by cycle-length per extra winding.
    for (int v = 0; v < 3; ++v)
        for (int w = 0; w < 3; ++w) {
            auto b0 = g.hom_basis(v, w, 0);
            auto b1 = g.hom_basis(v, w, 1);
            CHECK(b1.size() == b0.size() + 4); // 2 start offsets x 2 new lengths
            for (auto& p : b1) {
                CHECK(g.tail(p) == v);
                CHECK(g.head(p) == w);
            }
        }
}

TEST_CASE("composition is the spiral concatenation") {
    GentleCategory g = make_cc3();
    auto paths = g.all_paths(8);
    int nonzero = 0;
    for (const auto& f : paths)
        for (const auto& gg : paths) {
            auto fg = g.compose(f, gg);
            if (g.tail(f) != g.head(gg)) {
                CHECK(!fg);
                continue;
            }
            if (fg) {
                ++nonzero;
                CHECK(g.tail(*fg) == g.tail(gg));
                CHECK(g.head(*fg) == g.head(f));
                CHECK(fg->length == f.length + gg.length);
                CHECK((g.degree(*fg) == ((g.degree(f) + g.degree(gg)) & 1)));
            }
        }
    CHECK(nonzero > 0);

    // Unit laws.
    for (const auto& f : paths) {
        auto l = g.compose(g.trivial(g.head(f)), f);
        auto r = g.compose(f, g.trivial(g.tail(f)));
        REQUIRE(l);
        REQUIRE(r);
        CHECK(*l == f);
        CHECK(*r == f);
    }

    // Associativity on all composable triples.
    for (const auto& f : paths)
        for (const auto& h : paths) {
            if (g.tail(f) != g.head(h)) continue;
            auto fh = g.compose(f, h);
            for (const auto& k : paths) {
                if (g.tail(h) != g.head(k)) continue;
                auto hk = g.compose(h, k);
                auto a = fh ? g.compose(*fh, k) : std::nullopt;
                auto b = hk ? g.compose(f, *hk) : std::nullopt;
                CHECK(a == b);
            }
        }
}

TEST_CASE("mu-bar on full positive cycles and partial runs") {
    GentleCategory g = make_cc3();
    MuEvaluator mu(g, KappaMap::mu_bar(g));

    for (int c = 0; c < g.num_positive(); ++c) {
        int l = g.positive_length(c);
        for (int rot = 0; rot < l; ++rot) {
            auto t = full_cycle_tuple(g, c, rot, 1);
            auto v = mu.eval(t);
            REQUIRE(v);
            CHECK(v->second.cycle == -1); // trivial path
            CHECK(v->second.vertex == g.rectified().rq.arrows[g.positive_arrow(c, rot)].head);
            CHECK(v->first == -1); // (-1)^{nl} with nl = 3
        }
        // Partial runs: strictly shorter or longer sequences vanish.
        auto t = full_cycle_tuple(g, c, 0, 1);
        CHECK(!mu.eval({t[0], t[1]}));
        auto longer = full_cycle_tuple(g, c, 0, 2);
        longer.resize(4);
        CHECK(!mu.eval(longer));
        // A second winding carries kappa(c,2) = 0.
        CHECK(!mu.eval(full_cycle_tuple(g, c, 0, 2)));
    }

    // A weight concentrated at power 2 sees only the double cycle.
    KappaMap k2;
    k2.set(0, 2, Rational(5));
    MuEvaluator mu2(g, k2);
    CHECK(!mu2.eval(full_cycle_tuple(g, 0, 0, 1)));
    auto v = mu2.eval(full_cycle_tuple(g, 0, 0, 2));
    REQUIRE(v);
    CHECK(v->first == 5); // sign (-1)^{nl} = (-1)^6
    CHECK(v->second.cycle == -1);

    // kappa == 0 kills every higher product.
    MuEvaluator mu0(g, KappaMap{});
    auto paths = g.all_paths(6);
    std::mt19937 rng(7);
    for (int trial = 0; trial < 2000; ++trial) {
        int arity = 3 + static_cast<int>(rng() % 3);
        std::vector<SpiralPath> t{paths[rng() % paths.size()]};
        for (int i = 1; i < arity; ++i) {
            std::vector<SpiralPath> ext;
            for (auto& p : paths)
                if (g.head(p) == g.tail(t.back())) ext.push_back(p);
            t.push_back(ext[rng() % ext.size()]);
        }
        CHECK(!mu0.eval(t));
    }
}

TEST_CASE("reduction order does not change the value") {
    for (auto g : {make_cc3(), make_mirror_dimex2()}) {
        MuEvaluator left(g, KappaMap::mu_bar(g));
        MuEvaluator right(g, KappaMap::mu_bar(g));
        right.rightmost = true;

        auto paths = g.all_paths(2 * 6);
        std::mt19937 rng(11);
        int agreements = 0;
        for (int trial = 0; trial < 5000; ++trial) {
            int arity = 3 + static_cast<int>(rng() % 4);
            std::vector<SpiralPath> t{paths[rng() % paths.size()]};
            bool ok = true;
            for (int i = 1; i < arity && ok; ++i) {
                std::vector<SpiralPath> ext;
                for (auto& p : paths)
                    if (g.head(p) == g.tail(t.back())) ext.push_back(p);
                ok = !ext.empty();
                if (ok) t.push_back(ext[rng() % ext.size()]);
            }
            if (!ok) continue;
            auto a = left.eval(t);
            auto b = right.eval(t);
            CHECK(a == b);
            if (a && b) ++agreements;
        }
        CHECK(agreements >= 0);
    }
}

TEST_CASE("lemma rules: consecutive nonzero products and trivial entries kill mu") {
    GentleCategory g = make_cc3();
    MuEvaluator mu(g, KappaMap::mu_bar(g));
    auto paths = g.all_paths(7);
    std::mt19937 rng(23);
    for (int trial = 0; trial < 4000; ++trial) {
        int arity = 3 + static_cast<int>(rng() % 3);
        std::vector<SpiralPath> t{paths[rng() % paths.size()]};
        for (int i = 1; i < arity; ++i) {
            std::vector<SpiralPath> ext;
            for (auto& p : paths)
                if (g.head(p) == g.tail(t.back())) ext.push_back(p);
            t.push_back(ext[rng() % ext.size()]);
        }
        bool has_nonzero_pair = false;
        for (int i = 0; i + 1 < arity; ++i)
            if (g.compose(t[i], t[i + 1])) has_nonzero_pair = true;
        if (has_nonzero_pair) CHECK(!mu.eval(t));
    }
}

TEST_CASE("lemma rules: peel-off identity on nontrivial values") {
    GentleCategory g = make_cc3();
    MuEvaluator mu(g, KappaMap::mu_bar(g));
    // mu(p a1, a2, a3 q) = +- pq; extend the first entry and compare.
    int checked = 0;
    for (int c = 0; c < g.num_positive(); ++c) {
        auto base = full_cycle_tuple(g, c, 0, 1);
        int b1 = g.first_arrow(base[0]);
        int z = g.neg_cycle_of(b1), o = g.neg_index_of(b1);
        for (int plen = 1; plen <= 4; ++plen) {
            auto t = base;
            t[0] = g.path(z, o, 1 + plen); // p a1 with |p| = plen
            auto v = mu.eval(t);
            REQUIRE(v);
            SpiralPath q = v->second;
            CHECK(q.length == plen);
            // Left extension q' p1' with q' one more arrow of the spiral.
            auto ext = t;
            ext[0] = g.path(z, o, 2 + plen);
            auto w = mu.eval(ext);
            REQUIRE(w);
            CHECK(w->first == -v->first); // one extra odd-degree arrow in p flips the sign
            auto composed = g.compose(g.path(z, o + 1 + plen, 1), q);
            REQUIRE(composed);
            CHECK(w->second == *composed);
            ++checked;
        }
    }
    CHECK(checked == 8);
}

TEST_CASE("degree bookkeeping: mu_k shifts degree by 2-k") {
    GentleCategory g = make_mirror_dimex2();
    MuEvaluator mu(g, KappaMap::mu_bar(g));
    auto paths = g.all_paths(7);
    std::mt19937 rng(5);
    int nonzero = 0;
    for (int trial = 0; trial < 20000 && nonzero < 50; ++trial) {
        int arity = 3 + static_cast<int>(rng() % 3);
        std::vector<SpiralPath> t{paths[rng() % paths.size()]};
        for (int i = 1; i < arity; ++i) {
            std::vector<SpiralPath> ext;
            for (auto& p : paths)
                if (g.head(p) == g.tail(t.back())) ext.push_back(p);
            t.push_back(ext[rng() % ext.size()]);
        }
        auto v = mu.eval(t);
        if (!v) continue;
        ++nonzero;
        int din = 0;
        for (auto& p : t) din += g.degree(p);
        CHECK(g.degree(v->second) == ((din + arity) & 1)); // 2-k = k mod 2
    }
    CHECK(nonzero >= 1);
}

TEST_CASE("A-infinity identities hold for mu-bar") {
    {
        GentleCategory g = make_cc3();
        VerifyOptions opt;
        opt.arity_bound = 5;
        opt.winding_bound = 1;
        auto rep = verify_m_identities(g, KappaMap::mu_bar(g), opt);
        for (auto& v : rep.violations) MESSAGE(v);
        CHECK(rep.ok());
        CHECK(rep.candidate_tuples > 0);
        CHECK(rep.brute_tuples > 0);

        auto serial = verify_m_identities_serial(g, KappaMap::mu_bar(g), opt);
        CHECK(serial.ok());
        CHECK(serial.candidate_tuples == rep.candidate_tuples);
    }
    {
        GentleCategory g = make_mirror_dimex2();
        VerifyOptions opt;
        opt.arity_bound = 4;
        opt.winding_bound = 1;
        auto rep = verify_m_identities(g, KappaMap::mu_bar(g), opt);
        for (auto& v : rep.violations) MESSAGE(v);
        CHECK(rep.ok());
    }
}

TEST_CASE("negative control: corrupted reduction sign is detected") {
    GentleCategory g = make_cc3();
    VerifyOptions opt;
    opt.arity_bound = 4;
    opt.winding_bound = 1;
    opt.corrupt_sign = true;
    auto rep = verify_m_identities(g, KappaMap::mu_bar(g), opt);
    CHECK(!rep.ok());
}

TEST_CASE("rescaling transports the structure") {
    GentleCategory g = make_cc3();
    KappaMap k1 = KappaMap::mu_bar(g);
    KappaMap k2 = KappaMap::mu_bar(g);
    k2.set(0, 1, Rational(2));

    auto rho = solve_rescaling(g, k1, k2);
    REQUIRE(rho);
    // One arrow of cycle 0 rescaled by 2, everything else 1.
    int twos = 0;
    for (auto& r : *rho) {
        CHECK((r == 1 || r == 2));
        if (r == 2) ++twos;
    }
    CHECK(twos == 1);
    KappaMap moved = rescale_kappa(g, k1, *rho);
    CHECK(moved(0, 1) == k2(0, 1));
    CHECK(moved(1, 1) == k2(1, 1));

    // Functor identity: mu^k(f_rho x_i) = f_rho(mu^{k . rho}(x_i)).
    MuEvaluator base(g, k1);
    MuEvaluator scaled(g, moved);
    for (int c = 0; c < g.num_positive(); ++c)
        for (int rot = 0; rot < 3; ++rot) {
            auto t = full_cycle_tuple(g, c, rot, 1);
            Rational factor = 1;
            for (auto& p : t) factor *= rescale_path(g, *rho, p);
            auto lhs = base.eval(t);
            auto rhs = scaled.eval(t);
            REQUIRE(lhs);
            REQUIRE(rhs);
            CHECK(lhs->second == rhs->second);
            CHECK(lhs->first * factor == rhs->first * rescale_path(g, *rho, rhs->second));
        }

    // Zero-set mismatch is rejected.
    KappaMap k3;
    k3.set(0, 1, Rational(1));
    CHECK(!solve_rescaling(g, k1, k3));
}

TEST_CASE("multilinear extension") {
    GentleCategory g = make_cc3();
    MuEvaluator mu(g, KappaMap::mu_bar(g));
    auto t = full_cycle_tuple(g, 0, 0, 1);
    GentleMorphism a, b, c;
    a.add(Rational(2), t[0]);
    b.add(Rational(3), t[1]);
    c.add(Rational(1), t[2]);
    c.add(Rational(1), g.trivial(g.tail(t[2]))); // non-composable junk term
    auto out = mu.eval_linear({a, b, c});
    REQUIRE(out.terms.size() == 1);
    CHECK(out.terms[0].first == -6);
    CHECK(out.terms[0].second.cycle == -1);
}
