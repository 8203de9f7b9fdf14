"""End-to-end compression pipeline and statistics.

Compression: XML bytes -> binary tree -> (optionally) minimal DAG grammar
-> digram replacement -> pruning -> succinct bit stream.  Decompression
inverts the last step and unfolds the grammar back to the tree.
"""

from __future__ import annotations

import time

from .xml_tree import BinaryTree, Tree, parse_xml, serialize_xml, _first_child, _next_sibling
from .slcf_grammar import GrammarError, SlcfGrammar
from .dag_builder import build_dag_grammar
from .digram_index import build_index
from .replacer import run_replacement_step
from .pruner import EDGES_THRESHOLD, FILESIZE_THRESHOLD, prune
from .succinct_coder import DecodeError, encode
from .succinct_decoder import decode

# Bound on the unfolded size when decompressing; a corrupted stream can
# describe a tree exponentially larger than itself.
DEFAULT_NODE_CAP = 2 ** 24

OPTIMIZE_THRESHOLDS = {
    "edges": EDGES_THRESHOLD,
    "filesize": FILESIZE_THRESHOLD,
}


def _copy_binary_tree(bt: BinaryTree) -> BinaryTree:
    t = Tree()
    root = bt.tree.copy_subtree(bt.root, into=t)
    return BinaryTree(t, root, list(bt.terminal_order))


def build_grammar(bt: BinaryTree, max_rank=4, optimize="filesize",
                  use_dag=True) -> SlcfGrammar:
    """Run the grammar construction on a tree (consumes its arena)."""
    if optimize not in OPTIMIZE_THRESHOLDS:
        raise ValueError("optimize must be one of %s" % sorted(OPTIMIZE_THRESHOLDS))
    n_edges = bt.edge_count
    if use_dag:
        g = build_dag_grammar(bt)
    else:
        g = SlcfGrammar.from_tree(bt)
    idx = build_index(g, n_edges=n_edges, max_rank=max_rank)
    run_replacement_step(g, idx)
    prune(g, OPTIMIZE_THRESHOLDS[optimize])
    return g


def compress_tree(bt: BinaryTree, max_rank=4, optimize="filesize",
                  use_dag=True) -> bytes:
    return encode(build_grammar(bt, max_rank, optimize, use_dag))


def compress_xml_bytes(data, max_rank=4, optimize="filesize",
                       use_dag=True) -> bytes:
    return compress_tree(parse_xml(data), max_rank, optimize, use_dag)


def decompress_tree(data: bytes, node_cap=DEFAULT_NODE_CAP) -> BinaryTree:
    g = decode(data)
    try:
        return g.unfold_value(node_cap)
    except GrammarError as exc:
        raise DecodeError(str(exc)) from None


def decompress_bytes(data: bytes, node_cap=DEFAULT_NODE_CAP) -> bytes:
    """Compressed stream back to XML bytes."""
    return serialize_xml(decompress_tree(data, node_cap))


def _unranked_mdag_sizes(bt: BinaryTree):
    """Node and edge count of the minimal DAG of the unranked element tree.

    The unranked shape is recovered from the characteristics: a node's
    children are its first child followed by that child's sibling chain.
    """
    t = bt.tree
    kids = {}
    order = []
    stack = [bt.root]
    while stack:
        v = stack.pop()
        order.append(v)
        ks = []
        c = _first_child(t, v)
        while c != -1:
            ks.append(c)
            c = _next_sibling(t, c)
        kids[v] = ks
        stack.extend(ks)
    table = {}
    dag_id = {}
    n_edges = 0
    for v in reversed(order):  # children before parents
        key = (t.labels[v].name, tuple(dag_id[c] for c in kids[v]))
        hit = table.get(key)
        if hit is None:
            hit = len(table)
            table[key] = hit
            n_edges += len(key[1])
        dag_id[v] = hit
    return len(table), n_edges


def gather_stats(data, max_rank=4, optimize="filesize", use_dag=True) -> dict:
    """Compress XML bytes and report size measures of every stage.

    Keys appear in report order; values are ints except for the two
    percentage factors and the wall-clock time.
    """
    started = time.perf_counter()
    bt = parse_xml(data)
    stats = {
        "input bytes": len(data),
        "binary tree edges": bt.edge_count,
    }

    mdag = build_dag_grammar(_copy_binary_tree(bt))
    stats["binary mdag edges"] = mdag.grammar_size()
    stats["binary mdag nonterminals"] = mdag.nonterminal_count

    mdag_nodes, mdag_edges = _unranked_mdag_sizes(bt)
    stats["unranked mdag edges"] = mdag_edges
    stats["unranked mdag nodes"] = mdag_nodes

    g = build_grammar(bt, max_rank, optimize, use_dag)
    out = encode(g)
    stats["grammar edges"] = g.grammar_size()
    stats["grammar nonterminals"] = g.nonterminal_count
    stats["edge factor %"] = 100.0 * g.grammar_size() / stats["binary tree edges"]
    stats["output bytes"] = len(out)
    stats["file size factor %"] = 100.0 * len(out) / len(data)
    stats["wall ms"] = 1000.0 * (time.perf_counter() - started)
    return stats
