"""Straight-line context-free tree grammars with parameters.

A grammar maps nonterminals to productions A(y_1..y_k) -> t where t is a
ranked tree over terminals, previously defined nonterminals and parameter
leaves.  It is linear (each parameter occurs exactly once in t) and
acyclic, so it derives exactly one tree, its value.  The i-th parameter
corresponds to the i-th parameter leaf of t in preorder, so the single
symbol ``y`` suffices for all parameter occurrences.

All right-hand sides live in one shared node arena; nodes move between
productions when a singly-referenced production is spliced into its use
site, which keeps node identities (and the occurrence-list slots threaded
through them) stable.
"""

from __future__ import annotations

import heapq

from .xml_tree import BinaryTree, Tree


class ParameterSymbol:
    """The formal parameter leaf symbol (one shared instance)."""

    __slots__ = ()
    rank = 0
    name = "y"

    def __repr__(self):
        return "y"


PARAMETER = ParameterSymbol()


class Nonterminal:
    """Grammar nonterminal.  Identity object; compared by ``is``.

    ``is_dag`` marks nonterminals of the DAG namespace (rank 0, created by
    subtree sharing or by splitting a shared production during
    replacement).  Digram keys see through such a reference to the root
    label of its right-hand side; all other nonterminals are opaque
    symbols.
    """

    __slots__ = ("id", "rank", "is_dag")

    def __init__(self, nid, rank, is_dag):
        self.id = nid
        self.rank = rank
        self.is_dag = is_dag

    def __repr__(self):
        return "A_%d" % self.id


class GrammarError(ValueError):
    pass


class Production:
    __slots__ = ("nt", "root")

    def __init__(self, nt, root):
        self.nt = nt
        self.root = root


class SlcfGrammar:
    """Grammar over a shared arena.

    ``productions`` preserves creation order (nonterminal ids ascend in
    it).  ``refs`` maps a nonterminal id to the ordered set of nodes
    labeled by it; reference order is insertion order, which all
    downstream processing relies on for determinism.
    """

    def __init__(self, arena: Tree, terminal_order):
        self.arena = arena
        self.terminal_order = list(terminal_order)
        self.productions = {}     # nt id -> Production
        self.refs = {}            # nt id -> dict[node id, None]
        self.root_to_prod = {}    # rhs root node id -> nt id
        self.start_id = None
        self._next_id = 0

    # -- construction --------------------------------------------------------

    @classmethod
    def from_tree(cls, bt: BinaryTree):
        """Wrap a tree as the single start production S -> t."""
        g = cls(bt.tree, bt.terminal_order)
        s = g.new_nonterminal(0, is_dag=False)
        g.add_production(s, bt.root, start=True)
        return g

    def new_nonterminal(self, rank, is_dag):
        nt = Nonterminal(self._next_id, rank, is_dag)
        self._next_id += 1
        self.refs[nt.id] = {}
        return nt

    def add_production(self, nt, root, start=False):
        self.productions[nt.id] = Production(nt, root)
        self.root_to_prod[root] = nt.id
        self.arena.parents[root] = -1
        if start:
            self.start_id = nt.id

    def start(self) -> Production:
        return self.productions[self.start_id]

    @property
    def nonterminal_count(self):
        return len(self.productions)

    # -- label/reference bookkeeping -----------------------------------------

    def new_node(self, label):
        v = self.arena.new_node(label)
        if isinstance(label, Nonterminal):
            self.refs[label.id][v] = None
        return v

    def relabel(self, v, label):
        old = self.arena.labels[v]
        if isinstance(old, Nonterminal):
            del self.refs[old.id][v]
        self.arena.labels[v] = label
        if isinstance(label, Nonterminal):
            self.refs[label.id][v] = None

    def kill_node(self, v):
        label = self.arena.labels[v]
        if isinstance(label, Nonterminal):
            del self.refs[label.id][v]
        self.arena.kill(v)

    def ref(self, nt):
        """List of (production id, node) references to ``nt``."""
        out = []
        for v in self.refs[nt.id]:
            r = v
            while self.arena.parents[r] != -1:
                r = self.arena.parents[r]
            out.append((self.root_to_prod[r], v))
        return out

    def ref_count(self, nt):
        return len(self.refs[nt.id])

    def resolve_label(self, label):
        """Digram-key view of a label: DAG references show their rhs root."""
        if isinstance(label, Nonterminal) and label.is_dag:
            return self.arena.labels[self.productions[label.id].root]
        return label

    # -- measures --------------------------------------------------------------

    def production_size(self, nt_id):
        """Edge count of the production's right-hand side."""
        return self.arena.edge_count(self.productions[nt_id].root)

    def grammar_size(self):
        return sum(self.production_size(i) for i in self.productions)

    def sav(self, nt):
        """Net growth of the grammar if ``nt`` were eliminated.

        Equivalently the saving its existence provides: with t the
        right-hand side and r = |ref|, elimination replaces r references
        (r*rank edges to arguments survive either way) by r copies of t
        and drops the production itself.
        """
        size = self.production_size(nt.id)
        return self.ref_count(nt) * (size - nt.rank) - size

    # -- structural queries ------------------------------------------------------

    def rhs_nonterminals(self, nt_id):
        """Nonterminal ids occurring in a production's rhs (deduplicated)."""
        seen = {}
        t = self.arena
        for v in t.iter_postorder(self.productions[nt_id].root):
            label = t.labels[v]
            if isinstance(label, Nonterminal):
                seen[label.id] = None
        return list(seen)

    def hierarchical_order(self):
        """Production ids ordered referenced-before-referencing, start last.

        Ties (several productions ready at once) break toward the smaller
        creation id.  The start production necessarily comes last because
        every other nonterminal is reachable from it.
        """
        dependents = {i: [] for i in self.productions}
        missing = {}
        ready = []
        for i in self.productions:
            deps = self.rhs_nonterminals(i)
            missing[i] = len(deps)
            for d in deps:
                dependents[d].append(i)
            if not deps:
                heapq.heappush(ready, i)
        order = []
        while ready:
            i = heapq.heappop(ready)
            order.append(i)
            for j in dependents[i]:
                missing[j] -= 1
                if missing[j] == 0:
                    heapq.heappush(ready, j)
        if len(order) != len(self.productions):
            raise GrammarError("grammar is cyclic")
        return order

    # -- elimination ---------------------------------------------------------------

    def _substitute_parameters(self, root, args):
        """Replace the i-th preorder parameter leaf under root by args[i].

        The argument subtrees are moved, not copied.  Returns the root
        (unchanged; a bare-parameter rhs is illegal so root is never a
        parameter leaf itself).
        """
        t = self.arena
        n = 0
        stack = [root]
        while stack:
            v = stack.pop()
            label = t.labels[v]
            if label is PARAMETER:
                arg = args[n]
                n += 1
                p = t.parents[v]
                i = t.pindex[v]
                t.children[p][i - 1] = arg
                t.parents[arg] = p
                t.pindex[arg] = i
                t.kill(v)
                continue
            stack.extend(reversed(t.children[v]))
        assert n == len(args)
        return root

    def _copy_rhs(self, root):
        """Copy a rhs subtree inside the arena, maintaining refs."""
        t = self.arena
        new_root = self.new_node(t.labels[root])
        stack = [(root, new_root)]
        while stack:
            src, dup = stack.pop()
            kids = []
            for c in t.children[src]:
                d = self.new_node(t.labels[c])
                kids.append(d)
                stack.append((c, d))
            t.set_children(dup, kids)
        return new_root

    def _discard_rhs(self, root):
        t = self.arena
        stack = [root]
        while stack:
            v = stack.pop()
            stack.extend(t.children[v])
            self.kill_node(v)

    def eliminate(self, nt):
        """Remove a non-start production, substituting its rhs at each use.

        The last reference receives the original rhs nodes (a splice); any
        earlier ones receive copies.  With a single reference this moves
        nodes without copying, so reference counts of all other
        nonterminals are unchanged.
        """
        if nt.id == self.start_id:
            raise GrammarError("cannot eliminate the start production")
        t = self.arena
        prod = self.productions.pop(nt.id)
        del self.root_to_prod[prod.root]
        ref_nodes = list(self.refs.pop(nt.id))
        for k, r in enumerate(ref_nodes):
            args = t.children[r]
            if k == len(ref_nodes) - 1:
                body = prod.root
            else:
                body = self._copy_rhs(prod.root)
            self._substitute_parameters(body, args)
            p = t.parents[r]
            if p == -1:
                # rhs root of another production was a bare reference
                owner = self.root_to_prod.pop(r)
                self.productions[owner].root = body
                self.root_to_prod[body] = owner
                t.parents[body] = -1
            else:
                i = t.pindex[r]
                t.children[p][i - 1] = body
                t.parents[body] = p
                t.pindex[body] = i
            t.labels[r] = None  # refs entry already dropped with the pop
            t.parents[r] = -1
            t.children[r] = []

    # -- derivation --------------------------------------------------------------

    def _parameter_positions(self, root):
        """Preorder parameter leaves of a rhs."""
        t = self.arena
        out = []
        stack = [root]
        while stack:
            v = stack.pop()
            if t.labels[v] is PARAMETER:
                out.append(v)
                continue
            stack.extend(reversed(t.children[v]))
        return out

    def unfold_value(self, node_cap=2 ** 31) -> BinaryTree:
        """Derive the grammar's value as a fresh tree.

        ``node_cap`` bounds the output size; exceeding it raises
        GrammarError instead of exhausting memory.
        """
        t = self.arena
        params = {i: self._parameter_positions(p.root)
                  for i, p in self.productions.items()}
        param_index = {}
        for leaves in params.values():
            for n, v in enumerate(leaves):
                param_index[v] = n

        out = Tree()
        made = 0

        def out_node(label):
            nonlocal made
            made += 1
            if made > node_cap:
                raise GrammarError("unfolded value exceeds %d nodes" % node_cap)
            return out.new_node(label)

        start_root = self.start().root
        root = out_node(None)
        # Work items: source node, parameter environment, destination node.
        # The environment maps this rhs's parameter leaves to pending
        # (source node, environment) pairs from the referencing side.
        stack = [(start_root, None, root)]
        while stack:
            src, env, dst = stack.pop()
            label = t.labels[src]
            while label is PARAMETER:
                src, env = env[param_index[src]]
                label = t.labels[src]
            if isinstance(label, Nonterminal):
                inner_env = tuple((c, env) for c in t.children[src])
                stack.append((self.productions[label.id].root, inner_env, dst))
                continue
            out.labels[dst] = label
            kids = [out_node(None) for _ in t.children[src]]
            out.set_children(dst, kids)
            stack.extend(zip(t.children[src], (env,) * len(kids), kids))
        return BinaryTree(out, root, self.terminal_order)

    # -- debug text ----------------------------------------------------------------

    def _symbol_text(self, label):
        if label is PARAMETER:
            return "y"
        if isinstance(label, Nonterminal):
            return "S" if label.id == self.start_id else "A_%d" % label.id
        return repr(label)

    def _term_text(self, v):
        t = self.arena
        s = self._symbol_text(t.labels[v])
        if t.children[v]:
            s += "(" + ",".join(self._term_text(c) for c in t.children[v]) + ")"
        return s

    def production_text(self, nt_id):
        prod = self.productions[nt_id]
        head = self._symbol_text(prod.nt)
        if prod.nt.rank:
            head += "(" + ",".join(["y"] * prod.nt.rank) + ")"
        return "%s -> %s" % (head, self._term_text(prod.root))

    def to_text(self):
        """One production per line, non-start in id order, start last."""
        ids = [i for i in sorted(self.productions) if i != self.start_id]
        ids.append(self.start_id)
        return "\n".join(self.production_text(i) for i in ids)

    def canonical_text(self):
        """Like to_text but with ids renumbered along the hierarchical
        order, for comparisons up to nonterminal renaming."""
        order = [i for i in self.hierarchical_order() if i != self.start_id]
        names = {nid: "A_%d" % (k + 1) for k, nid in enumerate(order)}
        names[self.start_id] = "S"

        def sym(label):
            if label is PARAMETER:
                return "y"
            if isinstance(label, Nonterminal):
                return names[label.id]
            return repr(label)

        def term(v):
            t = self.arena
            s = sym(t.labels[v])
            if t.children[v]:
                s += "(" + ",".join(term(c) for c in t.children[v]) + ")"
            return s

        lines = []
        for nid in order + [self.start_id]:
            prod = self.productions[nid]
            head = names[nid]
            if prod.nt.rank:
                head += "(" + ",".join(["y"] * prod.nt.rank) + ")"
            lines.append("%s -> %s" % (head, term(prod.root)))
        return "\n".join(lines)

    # -- validation (used by tests) ---------------------------------------------

    def validate(self):
        t = self.arena
        assert self.start_id in self.productions
        seen_refs = {i: 0 for i in self.productions}
        for i, prod in self.productions.items():
            assert prod.nt.id == i
            assert t.parents[prod.root] == -1
            assert self.root_to_prod[prod.root] == i
            y = 0
            for v in t.iter_postorder(prod.root):
                label = t.labels[v]
                assert label is not None
                if label is PARAMETER:
                    y += 1
                    continue
                assert len(t.children[v]) == label.rank
                if isinstance(label, Nonterminal):
                    assert label.id in self.productions, "dangling reference"
                    assert v in self.refs[label.id]
                    seen_refs[label.id] += 1
            assert y == prod.nt.rank, "parameter count != rank"
            assert t.labels[prod.root] is not PARAMETER
        for i in self.productions:
            assert seen_refs[i] == len(self.refs[i])
            if i != self.start_id:
                assert seen_refs[i] >= 1, "unreferenced nonterminal"
            else:
                assert seen_refs[i] == 0
        self.hierarchical_order()  # raises if cyclic
