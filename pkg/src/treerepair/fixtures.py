"""Synthetic tree families used for benchmarks and tests.

All generators return already-ranked :class:`BinaryTree` values (they do
not round-trip through XML).  Generation is iterative, so deep trees do
not hit the interpreter recursion limit.
"""

from __future__ import annotations

from .xml_tree import BinaryTree, ChildrenCharacteristic, TerminalSymbol, Tree

_CC = ChildrenCharacteristic


def _perfect(depth, leaf_symbols):
    """Perfect binary tree over f of the given depth; one leaf symbol per
    leaf position, cycled if fewer are given."""
    f = TerminalSymbol("f", _CC.TWO_CHILDREN)
    t = Tree()
    n_leaves = 2 ** depth
    nodes = [t.new_node(leaf_symbols[k % len(leaf_symbols)])
             for k in range(n_leaves)]
    while len(nodes) > 1:
        merged = []
        for j in range(0, len(nodes), 2):
            v = t.new_node(f)
            t.set_children(v, [nodes[j], nodes[j + 1]])
            merged.append(v)
        nodes = merged
    order = [f]
    seen = {f}
    for sym in leaf_symbols:
        if sym not in seen:
            order.append(sym)
            seen.add(sym)
    return BinaryTree(t, nodes[0], order)


def gen_perfect_binary(depth) -> BinaryTree:
    """Perfect binary tree of the given depth: f at inner nodes, one shared
    leaf symbol a.  Has 2**(depth+1) - 2 edges."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    return _perfect(depth, [TerminalSymbol("a", _CC.NO_CHILDREN)])


def gen_M(i) -> BinaryTree:
    """Perfect binary tree of depth 2**i with pairwise distinct leaves.

    Distinct leaf names defeat subtree sharing, so compression must come
    from the upper f-structure alone.  Has 2**(2**i + 1) - 2 edges; i is
    capped at 4 (131070 edges) to keep generation bounded.
    """
    if not 0 <= i <= 4:
        raise ValueError("i must be between 0 and 4")
    depth = 2 ** i
    leaves = [TerminalSymbol("leaf_%d" % k, _CC.NO_CHILDREN)
              for k in range(2 ** depth)]
    return _perfect(depth, leaves)


def gen_U(n) -> BinaryTree:
    """Right spine of 2**n f-nodes over the cyclic leaf alphabet a..e.

    The i-th spine node (0-based) carries the leaf labeled "abcde"[i % 5]
    on the left and the rest of the spine on the right; the spine ends in
    the leaf for position 2**n.  Has 2**(n+1) edges.  The five-cycle keeps
    any fixed window of the spine from repeating with period under five,
    which separates rank-limited from rank-unlimited compression.
    """
    if n < 3:
        raise ValueError("n must be at least 3")
    f = TerminalSymbol("f", _CC.TWO_CHILDREN)
    letters = [TerminalSymbol(c, _CC.NO_CHILDREN) for c in "abcde"]
    t = Tree()
    count = 2 ** n
    prev = t.new_node(letters[count % 5])
    for i in range(count - 1, -1, -1):
        leaf = t.new_node(letters[i % 5])
        v = t.new_node(f)
        t.set_children(v, [leaf, prev])
        prev = v
    return BinaryTree(t, prev, [f] + letters)
