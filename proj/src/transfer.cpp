#include "dimerlab/transfer.hpp"

namespace dimerlab {

std::vector<PlanarTree> enumerate_trees(int n) {
    if (n <= 0) return {};
    if (n == 1) return {PlanarTree{}};
    std::vector<PlanarTree> out;
    // Root has r >= 2 children; distribute the n leaves over r ordered
    // nonempty blocks and recurse.
    // iterate over compositions of n into parts >= 1, at least 2 parts
    std::vector<std::vector<int>> comps;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int rest) -> void {
        if (rest == 0) {
            if (cur.size() >= 2) comps.push_back(cur);
            return;
        }
        for (int p = 1; p <= rest; ++p) {
            cur.push_back(p);
            self(self, rest - p);
            cur.pop_back();
        }
    };
    rec(rec, n);
    for (const auto& c : comps) {
        std::vector<std::vector<PlanarTree>> choices;
        for (int part : c) choices.push_back(enumerate_trees(part));
        std::vector<int> idx(c.size(), 0);
        while (true) {
            PlanarTree t;
            for (size_t i = 0; i < c.size(); ++i) t.children.push_back(choices[i][idx[i]]);
            out.push_back(std::move(t));
            size_t k = c.size();
            while (k > 0) {
                --k;
                if (++idx[k] < (int)choices[k].size()) break;
                idx[k] = 0;
                if (k == 0) goto done;
            }
        }
    done:;
    }
    return out;
}

} // namespace dimerlab
