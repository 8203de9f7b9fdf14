"""Independent reference implementations used to cross-check expectations.

Everything here is deliberately written with a different approach than the
package under test (plain recursion, ElementTree, textbook formulas) so a
shared bug cannot hide.
"""

import heapq
import xml.etree.ElementTree as ET
from fractions import Fraction


def element_shape(data):
    """Element-only nested shape of an XML document: (tag, [children])."""
    root = ET.fromstring(data.decode("utf-8") if isinstance(data, bytes) else data)

    def walk(e):
        return (e.tag, [walk(c) for c in e])

    return walk(root)


def fcns_shape(shape):
    """First-child/next-sibling binary form of an element shape.

    Returns nested (name, left, right) where left is the first child and
    right the next sibling; the document root never has a sibling.
    """

    def rec(siblings, i):
        name, kids = siblings[i]
        left = rec(kids, 0) if kids else None
        right = rec(siblings, i + 1) if i + 1 < len(siblings) else None
        return (name, left, right)

    return rec([shape], 0)


def binary_shape(bt):
    """(name, left, right) view of a parsed binary tree.

    Slot meaning is taken from each label's 2-bit children characteristic,
    so the result is comparable with fcns_shape() output.
    """
    tree = bt.tree

    def rec(v):
        label = tree.labels[v]
        kids = [c for c in tree.children[v] if c >= 0]
        i = 0
        left = right = None
        if label.characteristic.has_first_child:
            left = rec(kids[i])
            i += 1
        if label.characteristic.has_next_sibling:
            right = rec(kids[i])
            i += 1
        assert i == len(kids)
        return (label.name, left, right)

    return rec(bt.root)


def postorder_nodes(tree, root):
    """Recursive postorder (children in slot order, root last)."""
    out = []

    def rec(v):
        for c in tree.children[v]:
            if c >= 0:
                rec(c)
        out.append(v)

    rec(root)
    return out


def mdag_counts(shape):
    """Hash-consed minimal-DAG node and edge counts of a (label, [kids]) shape."""
    seen = {}

    def key(node):
        label, kids = node
        k = (label, tuple(key(c) for c in kids))
        return seen.setdefault(k, len(seen))

    key(shape)
    nodes = len(seen)
    edges = sum(len(kids) for _, kids in seen)
    return nodes, edges


def max_nonoverlapping(tree, root, parent_sym, index, child_sym):
    """Largest set of pairwise node-disjoint occurrences of a digram.

    Occurrences conflict only when the child node of one is the parent node
    of another, so conflict components are vertical chains; each chain of m
    occurrences contributes ceil(m/2) to the maximum.
    """
    occ = {}
    for v in postorder_nodes(tree, root):
        if tree.labels[v] != parent_sym:
            continue
        kids = tree.children[v]
        if len(kids) >= index and kids[index - 1] >= 0:
            w = kids[index - 1]
            if tree.labels[w] == child_sym:
                occ[v] = w
    child_nodes = set(occ.values())
    total = 0
    for u in occ:
        if u in child_nodes:
            continue
        m = 0
        cur = u
        while cur in occ:
            m += 1
            cur = occ[cur]
        total += (m + 1) // 2
    return total


def rle_expand(tokens, n):
    """Token-level inverse of the run-length coder.

    Accepts the exact token stream the encoder produces: plain ints up to
    n+3 and ('bits', width, value) payload tuples after each run indicator.
    A repeat indicator (n+1) directly after its sample literal contributes
    value+3 copies (the sample supplies one more); each further consecutive
    repeat indicator contributes value+4.  Zero indicators carry absolute
    counts: n+2 gives value+4 zeros, n+3 gives value+12.
    """
    out = []
    i = 0
    in_run = False
    while i < len(tokens):
        tok = tokens[i]
        assert not isinstance(tok, tuple), "payload without indicator"
        if tok <= n:
            out.append(tok)
            in_run = False
            i += 1
            continue
        tag, width, value = tokens[i + 1]
        assert tag == "bits"
        i += 2
        if tok == n + 1:
            assert width == 2
            assert out and out[-1] != 0, "repeat indicator without sample"
            out.extend([out[-1]] * (value + (4 if in_run else 3)))
            in_run = True
        elif tok == n + 2:
            assert width == 3
            out.extend([0] * (value + 4))
            in_run = False
        else:
            assert tok == n + 3 and width == 7
            out.extend([0] * (value + 12))
            in_run = False
    return out


def huffman_cost(freqs):
    """Optimal total prefix-code cost sum(freq * length) via heap merging."""
    vals = sorted(freqs.values())
    if not vals:
        return 0
    if len(vals) == 1:
        return vals[0]
    heapq.heapify(vals)
    total = 0
    while len(vals) > 1:
        a = heapq.heappop(vals)
        b = heapq.heappop(vals)
        total += a + b
        heapq.heappush(vals, a + b)
    return total


def code_strings(codes):
    """{symbol: (code, length)} -> {symbol: bit string}."""
    return {s: format(c, "0%db" % l) for s, (c, l) in codes.items()}


def prefix_free(bitstrings):
    """True if no bit string is a prefix of another."""
    items = sorted(bitstrings)
    return all(not b.startswith(a) for a, b in zip(items, items[1:]))


def kraft_sum(lengths):
    """Exact sum of 2**-length over all assigned code lengths."""
    return sum(Fraction(1, 2 ** l) for l in lengths.values() if l)


def binary_mdag_edges(shape):
    """Edge count of the minimal DAG of a (name, left, right) shape.

    Hash-consing: structurally equal subtrees collapse to one node; each
    distinct node contributes one edge per present child.
    """
    table = {}

    def key(node):
        if node is None:
            return None
        name, left, right = node
        k = (name, key(left), key(right))
        if k not in table:
            table[k] = (left is not None) + (right is not None)
        return k

    key(shape)
    return sum(table.values())
