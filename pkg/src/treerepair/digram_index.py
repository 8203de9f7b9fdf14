"""Digram occurrence index with constant-time priority maintenance.

A digram is (parent symbol, child index, child symbol).  For every digram
the index keeps a doubly linked list of its currently chosen occurrences,
threaded through per-(node, child slot) link fields stored in the arena
(``onext``/``oprev``), so membership updates are O(1) without auxiliary
allocation.  An occurrence is identified by the parent node of its edge;
all occurrences of one digram share the child index, so the slot is
(node, digram.index).

Digram priorities live in sqrt(n) frequency buckets plus an unsorted top
list for frequencies >= sqrt(n) (n = edge count of the input tree).  The
maximum frequency only decreases over a replacement run, which makes the
scan cursor amortized cheap.

In a DAG-shaped grammar a reference to a rank-0 DAG nonterminal counts as
an occurrence of the digram formed with the root label of its production
(the label is resolved through the reference).  Such cross-production
occurrences are never registered when parent and child symbol coincide;
same-production occurrences instead get the usual overlap check at build
time.  Frequencies count stored list entries: a digram inside a shared
production counts once however often the production is used.
"""

from __future__ import annotations

from math import isqrt

from .slcf_grammar import Nonterminal, SlcfGrammar
from .xml_tree import FREE, END


class Digram:
    __slots__ = ("parent", "index", "child")

    def __init__(self, parent, index, child):
        self.parent = parent
        self.index = index
        self.child = child

    @property
    def par(self):
        """Rank of the nonterminal replacing this digram."""
        return self.parent.rank + self.child.rank - 1

    def key(self):
        return (self.parent, self.index, self.child)

    def __repr__(self):
        return "(%r,%d,%r)" % (self.parent, self.index, self.child)


class _Record:
    __slots__ = ("digram", "head", "tail", "count", "par", "seq", "where")

    def __init__(self, digram, seq):
        self.digram = digram
        self.head = END
        self.tail = END
        self.count = 0
        self.par = digram.par
        self.seq = seq
        self.where = None  # bucket index, "top", or None when unplaced


class DigramIndex:
    def __init__(self, grammar: SlcfGrammar, n_edges=None, max_rank=None):
        self.g = grammar
        if n_edges is None:
            n_edges = grammar.grammar_size()
        self.bucket_limit = max(1, isqrt(max(1, n_edges)))
        self.max_rank = max_rank
        self.records = {}
        self.buckets = [dict() for _ in range(self.bucket_limit)]
        self.top = {}
        self.cursor = self.bucket_limit - 1
        self._seq = 0

    # -- placement -----------------------------------------------------------

    def _unplace(self, rec):
        if rec.where is None:
            return
        if rec.where == "top":
            del self.top[rec]
        else:
            del self.buckets[rec.where][rec]
        rec.where = None

    def _place(self, rec):
        if self.max_rank is not None and rec.par > self.max_rank:
            return
        if rec.count >= self.bucket_limit:
            self.top[rec] = None
            rec.where = "top"
        else:
            b = rec.count
            self.buckets[b][rec] = None
            rec.where = b
            if b > self.cursor:
                self.cursor = b

    # -- key handling ----------------------------------------------------------

    def _edge_key(self, v, i):
        """Digram key of the edge at slot (v, i), from current labels."""
        ar = self.g.arena
        child = ar.children[v][i - 1]
        return (ar.labels[v], i, self.g.resolve_label(ar.labels[child]))

    def record_for(self, parent, index, child):
        key = (parent, index, child)
        rec = self.records.get(key)
        if rec is None:
            rec = _Record(Digram(parent, index, child), self._seq)
            self._seq += 1
            self.records[key] = rec
            self._place(rec)
        return rec

    # -- list updates ------------------------------------------------------------

    def add_edge(self, v, i):
        """Register the edge at slot (v, i) as an occurrence.

        Cross-production edges (child is a DAG-nonterminal reference) with
        equal parent and resolved child symbol are skipped: overlapping
        occurrence chains across a shared production cannot be maintained
        consistently, so such digrams are never offered for replacement.
        """
        g = self.g
        ar = g.arena
        child = ar.children[v][i - 1]
        cl = ar.labels[child]
        pl = ar.labels[v]
        if isinstance(cl, Nonterminal) and cl.is_dag:
            resolved = g.resolve_label(cl)
            if resolved == pl:
                return
        else:
            resolved = cl
        rec = self.record_for(pl, i, resolved)
        assert ar.oprev[v][i - 1] == FREE, "slot already on a list"
        self._unplace(rec)
        if rec.tail == END:
            rec.head = rec.tail = v
            ar.oprev[v][i - 1] = END
            ar.onext[v][i - 1] = END
        else:
            t = rec.tail
            ar.onext[t][i - 1] = v
            ar.oprev[v][i - 1] = t
            ar.onext[v][i - 1] = END
            rec.tail = v
        rec.count += 1
        self._place(rec)

    def remove_edge(self, v, i):
        """Drop the occurrence at slot (v, i) if there is one."""
        ar = self.g.arena
        if i > len(ar.children[v]) or ar.oprev[v][i - 1] == FREE:
            return
        rec = self.records[self._edge_key(v, i)]
        prev = ar.oprev[v][i - 1]
        nxt = ar.onext[v][i - 1]
        self._unplace(rec)
        if prev == END:
            rec.head = nxt
        else:
            ar.onext[prev][i - 1] = nxt
        if nxt == END:
            rec.tail = prev
        else:
            ar.oprev[nxt][i - 1] = prev
        ar.oprev[v][i - 1] = FREE
        ar.onext[v][i - 1] = FREE
        rec.count -= 1
        self._place(rec)

    def occupied(self, v, i):
        ar = self.g.arena
        return i <= len(ar.children[v]) and ar.oprev[v][i - 1] != FREE

    # -- absorbed / fresh occurrences around one replacement ------------------------

    def remove_absorbed(self, v, j):
        """Drop every occurrence a replacement at (v, j) invalidates.

        These are v's parent edge (or, when v is a production root, the
        reference edges of every use of that production), all of v's child
        edges and all child edges of the vanishing child v_j.  Runs before
        any label or structure change, so slot keys still resolve.
        """
        g = self.g
        ar = g.arena
        p = ar.parents[v]
        if p != -1:
            self.remove_edge(p, ar.pindex[v])
        else:
            nt_id = g.root_to_prod[v]
            for r in g.refs[nt_id]:
                rp = ar.parents[r]
                assert rp != -1
                self.remove_edge(rp, ar.pindex[r])
        for i in range(1, len(ar.children[v]) + 1):
            self.remove_edge(v, i)
        w = ar.children[v][j - 1]
        for i in range(1, len(ar.children[w]) + 1):
            self.remove_edge(w, i)

    def add_new(self, v):
        """Register the edges a replacement at v created.

        Unconditional (no overlap re-checks): entries of one digram may
        transiently overlap after this, which is harmless because
        remove_absorbed drops conflicting entries before they could both
        be replaced.
        """
        g = self.g
        ar = g.arena
        p = ar.parents[v]
        if p != -1:
            self.add_edge(p, ar.pindex[v])
        else:
            nt_id = g.root_to_prod[v]
            for r in g.refs[nt_id]:
                rp = ar.parents[r]
                assert rp != -1
                self.add_edge(rp, ar.pindex[r])
        for i in range(1, len(ar.children[v]) + 1):
            self.add_edge(v, i)

    # -- priority queue --------------------------------------------------------------

    def pop_most_frequent(self):
        """Most frequent replaceable digram record, or None.

        Only digrams with at least two occurrences qualify (records with
        too large a par never enter the structure).  Among equally
        frequent top-list digrams the earliest created wins; inside a
        bucket the longest-resident entry is taken.
        """
        best = None
        for rec in self.top:
            if rec.count < 2:
                continue
            if best is None or (rec.count, -rec.seq) > (best.count, -best.seq):
                best = rec
        if best is not None:
            return best
        b = min(self.cursor, self.bucket_limit - 1)
        while b >= 2:
            bucket = self.buckets[b]
            if bucket:
                self.cursor = b
                return next(iter(bucket))
            b -= 1
        self.cursor = 1
        return None

    # -- occurrence listing (tests, tooling) -----------------------------------------

    def occurrence_nodes(self, parent, index, child):
        rec = self.records.get((parent, index, child))
        if rec is None:
            return []
        ar = self.g.arena
        out = []
        v = rec.head
        while v != END:
            out.append(v)
            v = ar.onext[v][index - 1]
        return out


def compute_occurrences(tree, root, parent_sym, index, child_sym):
    """Greedy maximal non-overlapping occurrence set of one digram.

    Walks the tree bottom-up and takes every matching edge whose child end
    is not itself already taken; by the overlap structure of equal digrams
    (conflicts form chains along the child index) this is a maximum
    non-overlapping set.
    """
    chosen = set()
    out = []
    for v in tree.iter_postorder(root):
        if tree.labels[v] != parent_sym:
            continue
        if len(tree.children[v]) < index:
            continue
        c = tree.children[v][index - 1]
        if tree.labels[c] != child_sym:
            continue
        if c in chosen:
            continue
        chosen.add(v)
        out.append(v)
    return out


def build_index(grammar: SlcfGrammar, n_edges=None, max_rank=None) -> DigramIndex:
    """Scan every production bottom-up and register all occurrences.

    Same-production edges get the greedy overlap check; a reference to a
    DAG nonterminal registers its use edge under the resolved root label
    (unconditionally, except for the equal-symbol restriction).  Pattern
    right-hand sides created later by the replacer are never scanned, so a
    fresh production's internal digram does not count occurrences.
    """
    idx = DigramIndex(grammar, n_edges, max_rank)
    g = grammar
    ar = g.arena
    for prod in list(g.productions.values()):
        root = prod.root
        for v in ar.iter_postorder(root):
            if v == root:
                continue
            p = ar.parents[v]
            i = ar.pindex[v]
            lv = ar.labels[v]
            if isinstance(lv, Nonterminal) and lv.is_dag:
                idx.add_edge(p, i)  # add_edge applies the equal-symbol skip
                continue
            # v itself already chosen as an occurrence of the same digram
            # means (p, v) would overlap it; skip then.
            if (idx.occupied(v, i)
                    and lv == ar.labels[p]
                    and g.resolve_label(ar.labels[ar.children[v][i - 1]]) == lv):
                continue
            idx.add_edge(p, i)
    return idx
