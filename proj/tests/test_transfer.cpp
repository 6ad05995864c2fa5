#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "dimerlab/transfer.hpp"

using namespace dimerlab;

namespace {

int count_binary(const PlanarTree& t) {
    if (t.leaf()) return 1;
    if (t.children.size() != 2) return 0;
    return count_binary(t.children[0]) * count_binary(t.children[1]);
}

// Toy values: integers with mu2 = multiplication, h = 0, pi = identity.  With
// a zero codifferential only the corolla contributes and the transfer is the
// bare iterated product.
struct IntOps {
    long long zero() const { return 0; }
    bool is_zero(long long v) const { return v == 0; }
    long long add(long long a, long long b) const { return a + b; }
    long long mu2(long long a, long long b) const { return a * b; }
    long long h(long long) const { return 0; }
    long long pi(long long v) const { return v; }
};

} // namespace

TEST_CASE("tree enumeration counts") {
    // little Schroeder numbers, with the Catalan numbers as the binary part
    int want_all[] = {1, 3, 11, 45, 197, 903};
    int want_bin[] = {1, 2, 5, 14, 42, 132};
    for (int n = 2; n <= 7; ++n) {
        auto trees = enumerate_trees(n);
        CHECK((int)trees.size() == want_all[n - 2]);
        int bin = 0;
        std::set<std::string> keys;
        for (auto& t : trees) {
            CHECK(t.leaves() == n);
            bin += count_binary(t);
            keys.insert(t.serialize());
        }
        CHECK(bin == want_bin[n - 2]);
        CHECK((int)keys.size() == (int)trees.size()); // no duplicates
    }
}

TEST_CASE("trivial transfer datum reproduces the bare products") {
    IntOps ops;
    // h = 0 kills every tree with an internal edge, so mu_n is the product of
    // the inputs for n = 2 and zero above (mu_{>2} has at least one h).
    CHECK(transfer_product<long long>(ops, 2, {3, 5}) == 15);
    CHECK(transfer_product<long long>(ops, 3, {2, 3, 5}) == 0);
    CHECK(transfer_product<long long>(ops, 4, {1, 2, 3, 4}) == 0);
}

namespace {

// Same toy values with h = id: every binary tree then contributes the plain
// leaf product, so the sum counts binary trees.
struct IdHOps : IntOps {
    long long h(long long v) const { return v; }
};

} // namespace

TEST_CASE("only binary trees contribute") {
    IdHOps ops;
    // n = 4: 5 binary trees out of 11, each evaluating to 2*3*5*7 = 210
    CHECK(transfer_product<long long>(ops, 4, {2, 3, 5, 7}) == 5 * 210);
    // n = 5: 14 binary trees
    CHECK(transfer_product<long long>(ops, 5, {1, 1, 1, 1, 2}) == 14 * 2);
    // per-tree evaluation consumes exactly the leaves and respects shape
    for (auto& t : enumerate_trees(4)) {
        int cursor = 0;
        long long v = transfer_product_tree<long long>(ops, t, {2, 3, 5, 7}, cursor, true);
        CHECK(cursor == 4);
        CHECK(v == (count_binary(t) ? 210 : 0));
    }
}
