#include "dimerlab/gentle.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace dimerlab {

void GentleMorphism::add(const Rational& c, const SpiralPath& p) {
    terms.push_back({c, p});
}

void GentleMorphism::normalize() {
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    std::vector<std::pair<Rational, SpiralPath>> out;
    for (auto& t : terms) {
        if (!out.empty() && out.back().second == t.second)
            out.back().first += t.first;
        else
            out.push_back(t);
    }
    out.erase(std::remove_if(out.begin(), out.end(),
                             [](const auto& t) { return t.first == 0; }),
              out.end());
    terms = std::move(out);
}

GentleCategory::GentleCategory(RectifiedDimer rd) : rd_(std::move(rd)) {
    const QuiverModel& q = rd_.rq;
    if (!q.dimer) throw MathError("gentle category requires a rectified dimer");
    pos_of_.assign(q.num_arrows(), {-1, -1});
    neg_of_.assign(q.num_arrows(), {-1, -1});
    for (const Face& f : q.faces) {
        std::vector<int> cyc;
        for (const FaceEntry& e : f.entries) cyc.push_back(e.arrow);
        auto& list = f.positive ? pos_ : neg_;
        auto& of = f.positive ? pos_of_ : neg_of_;
        int idx = static_cast<int>(list.size());
        for (int k = 0; k < static_cast<int>(cyc.size()); ++k) of[cyc[k]] = {idx, k};
        list.push_back(std::move(cyc));
    }
    for (int a = 0; a < q.num_arrows(); ++a)
        if (pos_of_[a].first < 0 || neg_of_[a].first < 0)
            throw MathError("arrow missing from a positive or negative cycle");
}

int GentleCategory::cycle_arrow(int z, int pos) const {
    int n = cycle_length(z);
    return neg_[z][((pos % n) + n) % n];
}

int GentleCategory::positive_arrow(int c, int pos) const {
    int n = positive_length(c);
    return pos_[c][((pos % n) + n) % n];
}

SpiralPath GentleCategory::trivial(int v) const { return SpiralPath{-1, 0, 0, v}; }

SpiralPath GentleCategory::path(int cycle, int offset, int length) const {
    if (length <= 0) throw MathError("spiral path of length < 1 needs a vertex");
    int n = cycle_length(cycle);
    SpiralPath p{cycle, ((offset % n) + n) % n, length, -1};
    p.vertex = tail(p);
    return p;
}

SpiralPath GentleCategory::arrow_path(int arrow) const {
    auto [z, k] = neg_of_[arrow];
    return path(z, k, 1);
}

int GentleCategory::tail(const SpiralPath& p) const {
    if (p.cycle < 0) return p.vertex;
    return rd_.rq.arrows[cycle_arrow(p.cycle, p.offset)].tail;
}

int GentleCategory::head(const SpiralPath& p) const {
    if (p.cycle < 0) return p.vertex;
    return rd_.rq.arrows[cycle_arrow(p.cycle, p.offset + p.length - 1)].head;
}

int GentleCategory::degree(const SpiralPath& p) const {
    int d = 0;
    for (int k = 0; k < p.length; ++k) d += rd_.degree[cycle_arrow(p.cycle, p.offset + k)];
    return d & 1;
}

int GentleCategory::first_arrow(const SpiralPath& p) const {
    return p.cycle < 0 ? -1 : cycle_arrow(p.cycle, p.offset);
}

int GentleCategory::last_arrow(const SpiralPath& p) const {
    return p.cycle < 0 ? -1 : cycle_arrow(p.cycle, p.offset + p.length - 1);
}

SpiralPath GentleCategory::strip_first(const SpiralPath& p) const {
    if (p.length < 1) throw MathError("cannot strip a trivial path");
    if (p.length == 1) return trivial(head(p));
    return path(p.cycle, p.offset + 1, p.length - 1);
}

SpiralPath GentleCategory::strip_last(const SpiralPath& p) const {
    if (p.length < 1) throw MathError("cannot strip a trivial path");
    if (p.length == 1) return trivial(tail(p));
    return path(p.cycle, p.offset, p.length - 1);
}

std::optional<SpiralPath> GentleCategory::compose(const SpiralPath& f, const SpiralPath& g) const {
    if (tail(f) != head(g)) return std::nullopt;
    if (g.cycle < 0) return f;
    if (f.cycle < 0) return g;
    if (f.cycle != g.cycle) return std::nullopt;
    int n = cycle_length(f.cycle);
    if ((g.offset + g.length) % n != f.offset) return std::nullopt;
    return path(g.cycle, g.offset, g.length + f.length);
}

std::vector<SpiralPath> GentleCategory::hom_basis(int v, int w, int winding_bound) const {
    std::vector<SpiralPath> out;
    if (v == w) out.push_back(trivial(v));
    for (int z = 0; z < num_cycles(); ++z) {
        int n = cycle_length(z);
        for (int o = 0; o < n; ++o) {
            if (rd_.rq.arrows[neg_[z][o]].tail != v) continue;
            for (int len = 1; len <= (winding_bound + 1) * n - 1; ++len) {
                SpiralPath p = path(z, o, len);
                if (head(p) == w) out.push_back(p);
            }
        }
    }
    return out;
}

std::vector<SpiralPath> GentleCategory::all_paths(int max_length) const {
    std::vector<SpiralPath> out;
    for (int v = 0; v < num_objects(); ++v) out.push_back(trivial(v));
    for (int z = 0; z < num_cycles(); ++z)
        for (int o = 0; o < cycle_length(z); ++o)
            for (int len = 1; len <= max_length; ++len) out.push_back(path(z, o, len));
    return out;
}

std::string GentleCategory::describe(const SpiralPath& p) const {
    std::ostringstream os;
    if (p.cycle < 0) {
        os << "e(" << rd_.rq.vertex_ids[p.vertex] << ")";
        return os.str();
    }
    // Word order: last-applied arrow first.
    for (int k = p.length - 1; k >= 0; --k) {
        os << rd_.rq.arrows[cycle_arrow(p.cycle, p.offset + k)].id;
        if (k) os << ".";
    }
    return os.str();
}

Rational KappaMap::operator()(int cycle, int n) const {
    auto it = weights.find({cycle, n});
    return it == weights.end() ? Rational(0) : it->second;
}

void KappaMap::set(int cycle, int n, const Rational& v) {
    if (v == 0)
        weights.erase({cycle, n});
    else
        weights[{cycle, n}] = v;
}

KappaMap KappaMap::mu_bar(const GentleCategory& g) {
    KappaMap k;
    for (int c = 0; c < g.num_positive(); ++c) k.set(c, 1, 1);
    return k;
}

MuEvaluator::MuEvaluator(const GentleCategory& g, KappaMap kappa)
    : g_(g), kappa_(std::move(kappa)) {}

// A reduction site: args[begin] = p.b1 (b1 its first traversal arrow), then
// single arrows walking the positive cycle of b1 backwards in traversal order,
// and args[end] = b_{nl}.p' (b_{nl} its last traversal arrow), with nl = power
// times cycle length. Only sites whose weight is nonzero are reported.
std::vector<MuEvaluator::Site> MuEvaluator::reduction_sites(const std::vector<SpiralPath>& args) const {
    std::vector<Site> sites;
    int u = static_cast<int>(args.size());
    for (int i = 0; i < u; ++i) {
        if (args[i].length < 1) continue;
        int b1 = g_.first_arrow(args[i]);
        int c = g_.pos_cycle_of(b1);
        int pos = g_.pos_index_of(b1);
        int l = g_.positive_length(c);
        for (int e = i + 1; e < u; ++e) {
            int j = e - i + 1; // block entries if closed at e
            int expected = g_.positive_arrow(c, pos - (j - 1));
            if (j % l == 0 && args[e].length >= 1 && g_.last_arrow(args[e]) == expected) {
                Site s{i, e, c, j / l};
                if (kappa_(c, s.power) != 0) sites.push_back(s);
            }
            // The walk continues only through exact single-arrow entries.
            if (!(args[e].cycle >= 0 && args[e].length == 1 &&
                  g_.first_arrow(args[e]) == expected))
                break;
        }
    }
    return sites;
}

std::optional<std::pair<Rational, SpiralPath>> MuEvaluator::eval(const std::vector<SpiralPath>& args) const {
    int u = static_cast<int>(args.size());
    if (u < 1) return std::nullopt;
    for (int i = 0; i + 1 < u; ++i)
        if (g_.tail(args[i]) != g_.head(args[i + 1])) return std::nullopt;
    if (u == 1) return std::nullopt; // minimal structure: no differential
    if (u == 2) {
        auto p = g_.compose(args[0], args[1]);
        if (!p) return std::nullopt;
        return std::make_pair(Rational(1), *p);
    }
    auto sites = reduction_sites(args);
    if (sites.empty()) return std::nullopt;
    Site site = sites.front();
    if (rightmost) site = sites.back();

    int nl = site.power * g_.positive_length(site.cycle);
    std::vector<SpiralPath> reduced;
    reduced.reserve(u - nl + 2);
    for (int m = 0; m < site.begin; ++m) reduced.push_back(args[m]);
    reduced.push_back(g_.strip_first(args[site.begin]));
    reduced.push_back(g_.strip_last(args[site.end]));
    for (int m = site.end + 1; m < u; ++m) reduced.push_back(args[m]);

    int k = static_cast<int>(reduced.size());
    int i1 = site.begin + 1; // 1-based index of the left residue
    int degs = 0;
    for (int m = 0; m <= site.begin; ++m) degs += g_.degree(reduced[m]);
    long long s = static_cast<long long>(nl) * (degs + k - i1);
    if (corrupt_sign) s += degs; // deliberately wrong: drops the degree dependence

    auto sub = eval(reduced);
    if (!sub) return std::nullopt;
    Rational coef = kappa_(site.cycle, site.power) * sub->first;
    if (s & 1) coef = -coef;
    if (coef == 0) return std::nullopt;
    return std::make_pair(coef, sub->second);
}

GentleMorphism MuEvaluator::eval_linear(const std::vector<GentleMorphism>& args) const {
    GentleMorphism out;
    std::vector<int> idx(args.size(), 0);
    for (const auto& a : args)
        if (a.zero()) return out;
    std::vector<SpiralPath> tuple(args.size());
    while (true) {
        Rational c = 1;
        for (size_t i = 0; i < args.size(); ++i) {
            c *= args[i].terms[idx[i]].first;
            tuple[i] = args[i].terms[idx[i]].second;
        }
        if (auto v = eval(tuple)) out.add(c * v->first, v->second);
        size_t i = 0;
        for (; i < args.size(); ++i) {
            if (++idx[i] < static_cast<int>(args[i].terms.size())) break;
            idx[i] = 0;
        }
        if (i == args.size()) break;
    }
    out.normalize();
    return out;
}

namespace {

using Tuple = std::vector<SpiralPath>;

// Builder of the support of mu^kappa: all basis tuples with nonzero value,
// generated by inverting reductions starting from nonzero binary products.
struct SupportBuilder {
    const GentleCategory& g;
    const MuEvaluator& mu;
    int arity_bound;
    int small_len;    // length bound for ordinary entries (winding bound)
    int long_len;     // one entry per tuple may stretch up to this
    std::vector<std::vector<int>> in_arrows; // per vertex

    std::vector<std::set<Tuple>> support; // index = arity

    SupportBuilder(const GentleCategory& g_, const MuEvaluator& mu_, int arity, int small,
                   int longer)
        : g(g_), mu(mu_), arity_bound(arity), small_len(small), long_len(longer) {
        in_arrows.resize(g.num_objects());
        for (int a = 0; a < g.rectified().rq.num_arrows(); ++a)
            in_arrows[g.rectified().rq.arrows[a].head].push_back(a);
        support.resize(arity_bound + 1);
        if (arity_bound < 2) return;
        seed_pairs();
        std::vector<Tuple> work(support[2].begin(), support[2].end());
        while (!work.empty()) {
            Tuple t = std::move(work.back());
            work.pop_back();
            inflate(t, work);
        }
    }

    bool length_ok(const Tuple& t) const {
        int over = 0;
        for (const auto& p : t) {
            if (p.length > long_len) return false;
            if (p.length > small_len) ++over;
        }
        return over <= 1;
    }

    void seed_pairs() {
        for (int v = 0; v < g.num_objects(); ++v)
            support[2].insert({g.trivial(v), g.trivial(v)});
        for (int z = 0; z < g.num_cycles(); ++z) {
            int n = g.cycle_length(z);
            for (int o = 0; o < n; ++o) {
                for (int len = 1; len <= long_len; ++len) {
                    SpiralPath p = g.path(z, o, len);
                    Tuple a{g.trivial(g.head(p)), p};
                    Tuple b{p, g.trivial(g.tail(p))};
                    if (length_ok(a)) support[2].insert(a);
                    if (length_ok(b)) support[2].insert(b);
                    for (int len2 = 1; len2 <= long_len; ++len2) {
                        SpiralPath q = g.path(z, o + len, len2);
                        Tuple c{q, p};
                        if (length_ok(c)) support[2].insert(c);
                    }
                }
            }
        }
    }

    // Inserts the inflation of t at every junction, for every admissible block.
    void inflate(const Tuple& t, std::vector<Tuple>& work) {
        int k = static_cast<int>(t.size());
        for (int j = 0; j + 1 < k; ++j) {
            const SpiralPath& p = t[j];
            const SpiralPath& q = t[j + 1];
            std::vector<std::pair<int, SpiralPath>> lefts; // (b1, new left entry)
            if (p.cycle >= 0) {
                int f = g.first_arrow(p);
                int z = g.neg_cycle_of(f);
                int o = g.neg_index_of(f);
                lefts.push_back({g.cycle_arrow(z, o - 1), g.path(z, o - 1, p.length + 1)});
            } else {
                for (int a : in_arrows[p.vertex]) lefts.push_back({a, g.arrow_path(a)});
            }
            for (auto& [b1, left] : lefts) {
                int c = g.pos_cycle_of(b1);
                int l = g.positive_length(c);
                int pos = g.pos_index_of(b1);
                for (int n = 1; k + n * l - 2 <= arity_bound; ++n) {
                    if (mu.kappa()(c, n) == 0) continue;
                    int nl = n * l;
                    int bnl = g.positive_arrow(c, pos - (nl - 1));
                    std::optional<SpiralPath> right;
                    if (q.cycle >= 0) {
                        if (g.cycle_arrow(q.cycle, q.offset - 1) == bnl)
                            right = g.path(q.cycle, q.offset - 1, q.length + 1);
                    } else {
                        if (g.rectified().rq.arrows[bnl].tail == q.vertex)
                            right = g.arrow_path(bnl);
                    }
                    if (!right) continue;
                    Tuple big;
                    big.reserve(k + nl - 2);
                    for (int m = 0; m < j; ++m) big.push_back(t[m]);
                    big.push_back(left);
                    for (int m = 1; m < nl - 1; ++m)
                        big.push_back(g.arrow_path(g.positive_arrow(c, pos - m)));
                    big.push_back(*right);
                    for (int m = j + 2; m < k; ++m) big.push_back(t[m]);
                    if (!length_ok(big)) continue;
                    int u = static_cast<int>(big.size());
                    if (support[u].insert(big).second) work.push_back(std::move(big));
                }
            }
        }
    }
};

// Full evaluation of the A-infinity identity on one tuple; returns a nonzero
// residual description or an empty string.
std::string check_identity(const GentleCategory& g, const MuEvaluator& mu, const Tuple& t) {
    int k = static_cast<int>(t.size());
    std::map<SpiralPath, Rational> acc;
    for (int r = 2; r < k; ++r) {
        for (int s = 0; s + r <= k; ++s) {
            int tt = k - r - s;
            std::vector<SpiralPath> inner(t.begin() + s, t.begin() + s + r);
            auto iv = mu.eval(inner);
            if (!iv) continue;
            std::vector<SpiralPath> outer;
            outer.reserve(k - r + 1);
            for (int m = 0; m < s; ++m) outer.push_back(t[m]);
            outer.push_back(iv->second);
            for (int m = s + r; m < k; ++m) outer.push_back(t[m]);
            auto ov = mu.eval(outer);
            if (!ov) continue;
            int degs = 0;
            for (int m = 0; m < s; ++m) degs += g.degree(t[m]);
            long long sign = s + static_cast<long long>(r) * tt +
                             static_cast<long long>(2 - r) * degs;
            Rational term = iv->first * ov->first;
            if (sign & 1) term = -term;
            acc[ov->second] += term;
        }
    }
    for (auto& [p, c] : acc) {
        if (c == 0) continue;
        std::ostringstream os;
        os << "[M_" << k << "] residual " << c << " * " << g.describe(p) << " on (";
        for (int m = 0; m < k; ++m) os << (m ? ", " : "") << g.describe(t[m]);
        os << ")";
        return os.str();
    }
    return {};
}

VerifyReport run_verify(const GentleCategory& g, const KappaMap& kappa, const VerifyOptions& opt,
                        bool parallel) {
    MuEvaluator mu(g, kappa);
    mu.rightmost = opt.rightmost;
    mu.corrupt_sign = opt.corrupt_sign;
    VerifyReport rep;

    int max_cycle = 1;
    for (int z = 0; z < g.num_cycles(); ++z) max_cycle = std::max(max_cycle, g.cycle_length(z));
    int small_len = (opt.winding_bound + 1) * max_cycle - 1;
    int long_len = opt.arity_bound * small_len;

    SupportBuilder sb(g, mu, opt.arity_bound, small_len, long_len);
    for (auto& s : sb.support) rep.support_size += static_cast<long long>(s.size());

    // Index the support values of all-small tuples: these are the admissible
    // inner factors.
    std::map<SpiralPath, std::vector<const Tuple*>> by_value;
    for (int r = 2; r <= opt.arity_bound; ++r) {
        for (const Tuple& t : sb.support[r]) {
            bool small = true;
            for (const auto& p : t) small &= p.length <= small_len;
            if (!small) continue;
            if (auto v = mu.eval(t)) by_value[v->second].push_back(&t);
        }
    }

    // Candidate tuples: substitute an inner support tuple into an outer one.
    std::set<Tuple> candidates;
    for (int m = 2; m <= opt.arity_bound; ++m) {
        for (const Tuple& o : sb.support[m]) {
            for (int p = 0; p < m; ++p) {
                bool others_small = true;
                for (int i = 0; i < m; ++i)
                    if (i != p && o[i].length > small_len) others_small = false;
                if (!others_small) continue;
                auto it = by_value.find(o[p]);
                if (it == by_value.end()) continue;
                for (const Tuple* r : it->second) {
                    if (m + static_cast<int>(r->size()) - 1 > opt.arity_bound) continue;
                    Tuple t;
                    t.reserve(m + r->size() - 1);
                    for (int i = 0; i < p; ++i) t.push_back(o[i]);
                    for (const auto& x : *r) t.push_back(x);
                    for (int i = p + 1; i < m; ++i) t.push_back(o[i]);
                    candidates.insert(std::move(t));
                }
            }
        }
    }

    std::vector<const Tuple*> work;
    work.reserve(candidates.size());
    for (const Tuple& t : candidates) work.push_back(&t);
    rep.candidate_tuples = static_cast<long long>(work.size());

    if (parallel) {
#pragma omp parallel
        {
            std::vector<std::string> local;
#pragma omp for schedule(dynamic, 64)
            for (long long i = 0; i < static_cast<long long>(work.size()); ++i) {
                std::string v = check_identity(g, mu, *work[i]);
                if (!v.empty()) local.push_back(v);
            }
#pragma omp critical
            rep.violations.insert(rep.violations.end(), local.begin(), local.end());
        }
    } else {
        for (const Tuple* t : work) {
            std::string v = check_identity(g, mu, *t);
            if (!v.empty()) rep.violations.push_back(v);
        }
    }

    // Exhaustive sweep at low arity as an independent cross-check of the
    // support enumeration.
    if (opt.brute_force_low_arity) {
        int blen = std::min(small_len, max_cycle + 1);
        std::vector<SpiralPath> paths = g.all_paths(blen);
        std::vector<Tuple> chains;
        for (const auto& p : paths) chains.push_back({p});
        int max_brute = std::min(opt.arity_bound, 4);
        for (int k = 2; k <= max_brute; ++k) {
            std::vector<Tuple> next;
            for (const Tuple& t : chains) {
                for (const auto& p : paths) {
                    if (g.tail(t.back()) != g.head(p)) continue;
                    Tuple e = t;
                    e.push_back(p);
                    next.push_back(std::move(e));
                }
            }
            chains = std::move(next);
            if (k < 3) continue;
            for (const Tuple& t : chains) {
                ++rep.brute_tuples;
                std::string v = check_identity(g, mu, t);
                if (!v.empty()) rep.violations.push_back(v);
            }
        }
    }
    std::sort(rep.violations.begin(), rep.violations.end());
    rep.violations.erase(std::unique(rep.violations.begin(), rep.violations.end()),
                         rep.violations.end());
    return rep;
}

} // namespace

VerifyReport verify_m_identities(const GentleCategory& g, const KappaMap& kappa,
                                 const VerifyOptions& opt) {
    return run_verify(g, kappa, opt, true);
}

VerifyReport verify_m_identities_serial(const GentleCategory& g, const KappaMap& kappa,
                                        const VerifyOptions& opt) {
    return run_verify(g, kappa, opt, false);
}

KappaMap rescale_kappa(const GentleCategory& g, const KappaMap& kappa,
                       const std::vector<Rational>& rho) {
    KappaMap out;
    for (const auto& [key, v] : kappa.weights) {
        auto [c, n] = key;
        Rational scale = 1;
        for (int k = 0; k < g.positive_length(c); ++k) scale *= rho[g.positive_arrow(c, k)];
        Rational s = v;
        for (int m = 0; m < n; ++m) s *= scale;
        out.set(c, n, s);
    }
    return out;
}

Rational rescale_path(const GentleCategory& g, const std::vector<Rational>& rho,
                      const SpiralPath& p) {
    Rational c = 1;
    for (int k = 0; k < p.length; ++k) c *= rho[g.cycle_arrow(p.cycle, p.offset + k)];
    return c;
}

std::optional<std::vector<Rational>> solve_rescaling(const GentleCategory& g,
                                                     const KappaMap& kappa1,
                                                     const KappaMap& kappa2) {
    for (const auto& [key, v] : kappa1.weights)
        if (key.second > 1 && v != 0) return std::nullopt;
    for (const auto& [key, v] : kappa2.weights)
        if (key.second > 1 && v != 0) return std::nullopt;
    std::vector<Rational> rho(g.rectified().rq.num_arrows(), 1);
    for (int c = 0; c < g.num_positive(); ++c) {
        Rational k1 = kappa1(c, 1), k2 = kappa2(c, 1);
        if ((k1 == 0) != (k2 == 0)) return std::nullopt;
        if (k1 == 0) continue;
        rho[g.positive_arrow(c, 0)] = k2 / k1;
    }
    return rho;
}

} // namespace dimerlab
