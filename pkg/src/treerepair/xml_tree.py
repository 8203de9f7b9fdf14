"""Binary tree model of an XML document's element structure.

An XML element tree is unranked: a node may have any number of children.
The compressor works on ranked trees, so the element structure is encoded
as a binary tree via the first-child/next-sibling rule: child 1 of a node
is its first child in the document, child 2 is its next sibling.  Which of
the two links a node actually has is recorded in a two-bit children
characteristic attached to its label, making the alphabet ranked (an
element type can occur under several characteristics, each a distinct
symbol).
"""

from __future__ import annotations

import enum
from xml.parsers import expat

# Byte value used as the name terminator in the succinct coding; element
# names must not contain it.
ETX = 0x03

# Occurrence-list slot sentinels (see Tree.onext/oprev).
FREE = -1  # slot is not on any occurrence list
END = -2   # slot is on a list and is its first/last element


class ParseError(ValueError):
    """Malformed XML input.  Carries the expat position when available."""

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = "%s (line %d, column %d)" % (message, line, column)
        super().__init__(message)
        self.line = line
        self.column = column


class UnsupportedInputError(ValueError):
    """Well-formed input outside the supported fragment (e.g. a lone root)."""


class ChildrenCharacteristic(enum.IntEnum):
    """Two-bit code for which binary children a node has.

    The high bit says the node has a first child (a "left" binary child),
    the low bit says it has a next sibling (a "right" binary child).
    """

    NO_CHILDREN = 0b00
    NO_LEFT_CHILD = 0b01    # only a next sibling
    NO_RIGHT_CHILD = 0b10   # only a first child
    TWO_CHILDREN = 0b11

    @property
    def rank(self) -> int:
        return (self.value >> 1) + (self.value & 1)

    @property
    def has_first_child(self) -> bool:
        return bool(self.value & 0b10)

    @property
    def has_next_sibling(self) -> bool:
        return bool(self.value & 0b01)

    @property
    def bits(self) -> str:
        return format(self.value, "02b")


class TerminalSymbol:
    """Ranked alphabet symbol.

    XML-derived symbols pair an element name with a children
    characteristic; the rank is the characteristic's. Symbols for
    synthetic trees may instead carry an explicit rank and no
    characteristic (such grammars cannot be written to the succinct
    format, which stores characteristics).
    """

    __slots__ = ("name", "characteristic", "_rank")

    def __init__(self, name, characteristic=None, *, rank=None):
        if not name:
            raise ValueError("empty terminal name")
        if any(ord(c) < 0x20 for c in name):
            raise ValueError("control character in terminal name: %r" % name)
        if (characteristic is None) == (rank is None):
            raise ValueError("give exactly one of characteristic and rank")
        self.name = name
        self.characteristic = characteristic
        self._rank = characteristic.rank if rank is None else rank

    @property
    def rank(self) -> int:
        return self._rank

    def _key(self):
        return (self.name, self.characteristic, self._rank)

    def __eq__(self, other):
        return isinstance(other, TerminalSymbol) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        if self.characteristic is None:
            return "%s/%d" % (self.name, self._rank)
        return "%s^%s" % (self.name, self.characteristic.bits)


class Tree:
    """Arena of ranked tree nodes with integer links.

    Several roots may live in one arena; the grammar keeps every
    production right-hand side in a single shared arena so nodes can move
    between productions without copying.  ``onext``/``oprev`` run parallel
    to ``children`` and thread the digram occurrence lists through the
    child slots (FREE = not on a list, END = list terminator).
    """

    __slots__ = ("labels", "parents", "pindex", "children", "onext", "oprev")

    def __init__(self):
        self.labels = []
        self.parents = []   # -1 for roots
        self.pindex = []    # 1-based position in parent's child list
        self.children = []
        self.onext = []
        self.oprev = []

    def __len__(self):
        return len(self.labels)

    def new_node(self, label):
        v = len(self.labels)
        self.labels.append(label)
        self.parents.append(-1)
        self.pindex.append(0)
        self.children.append([])
        self.onext.append([])
        self.oprev.append([])
        return v

    def set_children(self, v, kids):
        """Attach ``kids`` as v's children, resetting v's slot lists."""
        self.children[v] = kids
        self.onext[v] = [FREE] * len(kids)
        self.oprev[v] = [FREE] * len(kids)
        parents = self.parents
        pindex = self.pindex
        for i, c in enumerate(kids):
            parents[c] = v
            pindex[c] = i + 1

    def kill(self, v):
        """Mark a node dead.  Links of dead nodes are meaningless."""
        self.labels[v] = None
        self.parents[v] = -1
        self.children[v] = []
        self.onext[v] = []
        self.oprev[v] = []

    # -- traversal ---------------------------------------------------------

    def walk_down(self, v):
        children = self.children
        while children[v]:
            v = children[v][0]
        return v

    def next_in_postorder(self, v, root):
        """Postorder successor within the subtree hanging from ``root``.

        Called on ``root`` itself it restarts at the first node; the
        traversal ends when ``root`` is returned (it comes last).
        """
        if v == root:
            return self.walk_down(root)
        i = self.pindex[v]
        p = self.parents[v]
        if len(self.children[p]) >= i + 1:
            return self.walk_down(self.children[p][i])
        return p

    def iter_postorder(self, root):
        v = self.next_in_postorder(root, root)
        while v != root:
            yield v
            v = self.next_in_postorder(v, root)
        yield root

    # -- measures and comparison -------------------------------------------

    def node_count(self, root):
        n = 0
        for _ in self.iter_postorder(root):
            n += 1
        return n

    def edge_count(self, root):
        return self.node_count(root) - 1

    def same_structure(self, root, other, other_root):
        stack = [(root, other_root)]
        while stack:
            a, b = stack.pop()
            if self.labels[a] != other.labels[b]:
                return False
            ka = self.children[a]
            kb = other.children[b]
            if len(ka) != len(kb):
                return False
            stack.extend(zip(ka, kb))
        return True

    def copy_subtree(self, root, into=None):
        """Copy the subtree at ``root`` into arena ``into`` (default: self).

        Returns the new root id.
        """
        dst = self if into is None else into
        new_root = dst.new_node(self.labels[root])
        stack = [(root, new_root)]
        while stack:
            src, dup = stack.pop()
            kids = []
            for c in self.children[src]:
                d = dst.new_node(self.labels[c])
                kids.append(d)
                stack.append((c, d))
            dst.set_children(dup, kids)
        return new_root


class BinaryTree:
    """A rooted binary-model tree plus its alphabet in first-use order."""

    __slots__ = ("tree", "root", "terminal_order")

    def __init__(self, tree, root, terminal_order):
        self.tree = tree
        self.root = root
        self.terminal_order = terminal_order

    @property
    def edge_count(self):
        return self.tree.edge_count(self.root)

    @property
    def node_count(self):
        return self.tree.node_count(self.root)

    def same_structure(self, other):
        return self.tree.same_structure(self.root, other.tree, other.root)

    def validate(self):
        """Check rank/children consistency; raises AssertionError."""
        t = self.tree
        for v in t.iter_postorder(self.root):
            label = t.labels[v]
            assert label is not None, "dead node reachable"
            assert len(t.children[v]) == label.rank, (
                "node %d: %r has %d children" % (v, label, len(t.children[v])))
            for i, c in enumerate(t.children[v]):
                assert t.parents[c] == v and t.pindex[c] == i + 1


def parse_xml(data) -> BinaryTree:
    """Parse XML bytes into the binary tree of its element structure.

    Text, attributes, comments and processing instructions are dropped;
    only element start/end events matter.  The construction keeps three
    stacks: a hierarchy stack of open-or-unlabeled nodes, an index stack
    of per-element child counts, and a name stack.  A node is labeled (and
    its children attached) once its parent's end tag is seen, because only
    then is it known whether it has a next sibling; the root is labeled
    immediately since it never has one.
    """
    if isinstance(data, str):
        data = data.encode("utf-8")

    tree = Tree()
    alphabet = {}
    order = []

    def intern(name, char):
        sym = alphabet.get((name, char))
        if sym is None:
            sym = TerminalSymbol(name, char)
            alphabet[(name, char)] = sym
            order.append(sym)
        return sym

    hierarchy = []
    index_stack = []
    name_stack = []
    # Pending binary links, filled in while a node is still unlabeled.
    left = []
    right = []
    element_count = 0

    def fresh_node():
        v = tree.new_node(None)
        left.append(-1)
        right.append(-1)
        return v

    def finish(v):
        """Label-time child attachment from the pending links."""
        kids = []
        if left[v] != -1:
            kids.append(left[v])
        if right[v] != -1:
            kids.append(right[v])
        tree.set_children(v, kids)

    def on_start(name, attrs):
        nonlocal element_count
        element_count += 1
        u = fresh_node()
        if hierarchy:
            i = index_stack[-1] + 1
            index_stack[-1] = i
            v = hierarchy[-1]
            if i == 1:
                left[v] = u      # first child of the open element
            else:
                right[v] = u     # next sibling of the previous child
            name_stack.append(name)
        else:
            # The root has a first child at most; label it right away.
            tree.labels[u] = intern(name, ChildrenCharacteristic.NO_RIGHT_CHILD)
        index_stack.append(0)
        hierarchy.append(u)

    def on_end(name):
        i = index_stack.pop()
        for _ in range(i):
            v = hierarchy.pop()
            nm = name_stack.pop()
            bits = (0b10 if left[v] != -1 else 0) | (0b01 if right[v] != -1 else 0)
            tree.labels[v] = intern(nm, ChildrenCharacteristic(bits))
            finish(v)

    parser = expat.ParserCreate()
    parser.StartElementHandler = on_start
    parser.EndElementHandler = on_end
    try:
        parser.Parse(data, True)
    except expat.ExpatError as e:
        raise ParseError(expat.errors.messages[e.code], e.lineno, e.offset) from e

    if element_count < 2:
        raise UnsupportedInputError(
            "document has %d element(s); the binary model needs a root "
            "with at least one child" % element_count)

    root = hierarchy.pop()
    finish(root)
    assert not hierarchy and not index_stack and not name_stack
    return BinaryTree(tree, root, order)


def _first_child(tree, v):
    label = tree.labels[v]
    if label.characteristic.has_first_child:
        return tree.children[v][0]
    return -1


def _next_sibling(tree, v):
    char = tree.labels[v].characteristic
    if not char.has_next_sibling:
        return -1
    # Rank 1 with only a sibling: the single child is the sibling.
    return tree.children[v][1] if char.has_first_child else tree.children[v][0]


def serialize_xml(bt: BinaryTree) -> bytes:
    """Invert the first-child/next-sibling encoding back to XML bytes.

    Only valid for trees whose characteristics are consistent with an XML
    origin (in particular the root must have characteristic 10).
    """
    t = bt.tree
    root_label = t.labels[bt.root]
    if root_label.characteristic != ChildrenCharacteristic.NO_RIGHT_CHILD:
        raise UnsupportedInputError(
            "root has characteristic %s, not an XML-origin tree"
            % root_label.characteristic.bits)

    out = []
    stack = [(bt.root, False)]
    while stack:
        v, closing = stack.pop()
        name = t.labels[v].name
        if closing:
            out.append("</%s>" % name)
            continue
        fc = _first_child(t, v)
        if fc == -1:
            out.append("<%s/>" % name)
            continue
        out.append("<%s>" % name)
        stack.append((v, True))
        chain = []
        c = fc
        while c != -1:
            chain.append(c)
            c = _next_sibling(t, c)
        for c in reversed(chain):
            stack.append((c, False))
    return "".join(out).encode("utf-8")
