#ifndef DIMERLAB_TRANSFER_HPP
#define DIMERLAB_TRANSFER_HPP

#include <memory>
#include <string>
#include <vector>

namespace dimerlab {

// Rooted planar tree with ordered leaves; internal nodes have arity >= 2.
struct PlanarTree {
    std::vector<PlanarTree> children; // empty = leaf
    bool leaf() const { return children.empty(); }
    int leaves() const {
        if (leaf()) return 1;
        int n = 0;
        for (const auto& c : children) n += c.leaves();
        return n;
    }
    std::string serialize() const {
        if (leaf()) return "*";
        std::string s = "(";
        for (const auto& c : children) s += c.serialize();
        return s + ")";
    }
};

// All rooted planar trees with n ordered leaves, internal arity >= 2, each
// exactly once, in a deterministic order.
std::vector<PlanarTree> enumerate_trees(int n);

// Minimal-model products via tree summation.  The dg structure is binary
// (higher one-level products vanish), so only all-binary trees contribute;
// other trees are enumerated but evaluate to zero.
//
// Ops requirements:
//   V zero();  bool is_zero(const V&);
//   V mu2(const V&, const V&);   // composition, arguments in mu order
//   V h(const V&);               // codifferential
//   V pi(const V&);              // projection 1 - dh - hd
template <class V, class Ops>
V transfer_product_tree(const Ops& ops, const PlanarTree& t, const std::vector<V>& inputs,
                        int& cursor, bool root) {
    if (t.leaf()) return inputs[cursor++];
    if (t.children.size() != 2) {
        cursor += t.leaves();
        return ops.zero();
    }
    V left = transfer_product_tree<V>(ops, t.children[0], inputs, cursor, false);
    if (ops.is_zero(left)) { // still consume the right subtree's leaves
        cursor += t.children[1].leaves();
        return ops.zero();
    }
    V right = transfer_product_tree<V>(ops, t.children[1], inputs, cursor, false);
    if (ops.is_zero(right)) return ops.zero();
    V prod = ops.mu2(left, right);
    return root ? ops.pi(prod) : ops.h(prod);
}

template <class V, class Ops>
V transfer_product(const Ops& ops, int n, const std::vector<V>& inputs) {
    V acc = ops.zero();
    for (const auto& t : enumerate_trees(n)) {
        int cursor = 0;
        V v = transfer_product_tree<V>(ops, t, inputs, cursor, true);
        if (!ops.is_zero(v)) acc = ops.add(acc, v);
    }
    return acc;
}

} // namespace dimerlab

#endif
