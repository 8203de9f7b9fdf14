"""Succinct binary coding of a linear tree grammar.

Layout of the compressed stream, all bit-level, MSB first:

1. fixed 32-bit field: bit width n_s of the super code length entries
2. fixed 32-bit field: size of the super alphabet (= n + 4, where n is the
   largest code length over the three base codings)
3. the super code length table, one raw n_s-bit entry per super symbol
4. for each base coding (symbol ids, then name bytes is NOT the order --
   see below): a 32-bit entry count followed by the run-length encoded
   code length table, tokens written in the super code
5. the value sequence itself, every integer written in its base coding and
   characteristic tags written as raw 2-bit fields
6. zero padding to a byte boundary

Base codings: C1 codes the start production's symbol ids, C2 codes every
other integer (counts, alphabet ids, non-start production bodies), C3 codes
the name bytes. Their length tables are written in the order C1, C2, C3.

The value sequence is:

- |F| and |N|-1 (terminal count, non-start production count), in C2
- three blocks, one per characteristic 00, 01, 10: a raw 2-bit tag, the
  number of terminals with that characteristic (C2), then their ids in
  ascending order (C2); terminals missing from all blocks have rank 2
- the terminal names in ascending id order, UTF-8 bytes in C3, each name
  terminated by ETX (0x03); names must not contain ETX
- the non-start production bodies in ascending id order, then the start
  production body: preorder label id sequences, ranks implied by the ids
"""

from __future__ import annotations

import heapq
from collections import Counter

from .bitio import BitReader, BitWriter, BitstreamEnd
from .xml_tree import ETX, ChildrenCharacteristic, TerminalSymbol
from .slcf_grammar import PARAMETER, Nonterminal, SlcfGrammar

FIELD_BITS = 32

# characteristics listed explicitly in the terminal alphabet blocks;
# TWO_CHILDREN is implied by absence
LISTED_CHARACTERISTICS = (
    ChildrenCharacteristic.NO_CHILDREN,
    ChildrenCharacteristic.NO_LEFT_CHILD,
    ChildrenCharacteristic.NO_RIGHT_CHILD,
)


class EncodeError(ValueError):
    pass


class DecodeError(ValueError):
    pass


def huffman_code_lengths(freqs) -> dict:
    """Code length per symbol for a Huffman code over ``freqs``.

    Deterministic: ties are broken by preferring leaves over merged nodes and
    lower symbols / earlier merges within each kind.
    """
    if not freqs:
        return {}
    if len(freqs) == 1:
        return {next(iter(freqs)): 1}
    # heap items: (freq, kind, ident, payload); leaf payload is the symbol,
    # internal payload is (left, right)
    heap = [(f, 0, sym, sym) for sym, f in freqs.items()]
    heapq.heapify(heap)
    seq = 0
    while len(heap) > 1:
        f1, k1, i1, p1 = heapq.heappop(heap)
        f2, k2, i2, p2 = heapq.heappop(heap)
        heapq.heappush(heap, (f1 + f2, 1, seq, ((k1, p1), (k2, p2))))
        seq += 1
    lengths = {}
    stack = [(heap[0][1], heap[0][3], 0)]
    while stack:
        kind, payload, depth = stack.pop()
        if kind == 0:
            lengths[payload] = depth
        else:
            (lk, lp), (rk, rp) = payload
            stack.append((lk, lp, depth + 1))
            stack.append((rk, rp, depth + 1))
    return lengths


def kraft_sum_num(lengths) -> tuple[int, int]:
    """Kraft sum of the length multiset as (numerator, 2**max_len)."""
    if not lengths:
        return 0, 1
    m = max(lengths.values())
    num = sum(1 << (m - l) for l in lengths.values())
    return num, 1 << m


def canonical_codes(lengths) -> dict:
    """Canonical code per symbol: ``{symbol: (code, length)}``.

    Symbols are ordered by (length, symbol); codes of one length are
    consecutive and every code is the previous one incremented, shifted left
    when the length grows.
    """
    if not lengths:
        return {}
    num, denom = kraft_sum_num(lengths)
    if num > denom:
        raise EncodeError("code lengths overflow the code space")
    codes = {}
    code = 0
    prev_len = 0
    for sym in sorted(lengths, key=lambda s: (lengths[s], s)):
        l = lengths[sym]
        code <<= l - prev_len
        codes[sym] = (code, l)
        code += 1
        prev_len = l
    return codes


# widest plausible code word: length tables are byte-sized in practice,
# anything past 64 bits cannot come from this encoder.  The decoder builds
# per-length tables, so an unchecked corrupt length would size allocations.
MAX_CODE_BITS = 64


class CanonicalDecoder:
    """Bit-by-bit decoder for a canonical code given its length table."""

    def __init__(self, lengths):
        if not lengths:
            raise DecodeError("empty code")
        if max(lengths.values()) > MAX_CODE_BITS:
            raise DecodeError("implausible code length %d" % max(lengths.values()))
        num, denom = kraft_sum_num(lengths)
        if num > denom:
            raise DecodeError("code lengths overflow the code space")
        self.max_len = max(lengths.values())
        by_len = [[] for _ in range(self.max_len + 1)]
        for sym in sorted(lengths, key=lambda s: (lengths[s], s)):
            by_len[lengths[sym]].append(sym)
        self._first = [0] * (self.max_len + 1)
        self._syms = by_len
        code = 0
        for l in range(1, self.max_len + 1):
            code <<= 1
            self._first[l] = code
            code += len(by_len[l])

    def read(self, reader: BitReader):
        acc = 0
        for l in range(1, self.max_len + 1):
            acc = (acc << 1) | reader.read(1)
            syms = self._syms[l]
            if syms:
                d = acc - self._first[l]
                if 0 <= d < len(syms):
                    return syms[d]
        raise DecodeError("invalid code word")


def lengths_table(lengths) -> list:
    """Dense code length list indexed by symbol, up to the largest symbol."""
    size = max(lengths) + 1
    return [lengths.get(s, 0) for s in range(size)]


def run_length_encode(values, n) -> list:
    """Run-length encode a code length table.

    ``n`` is the largest code length over all three base codings; values
    n+1, n+2 and n+3 act as run indicators.  Tokens are plain ints (super
    coded later) or ``('bits', width, value)`` for raw binary run lengths.

    - runs of up to three values are written verbatim
    - a nonzero run of k > 3 copies of m: m itself, then floor(k/7) tokens
      (n+1, bin2(3)); a leftover l = k mod 7 above 3 becomes (n+1, bin2(l-4)),
      otherwise l verbatim copies.  An (n+1, bin2(c)) token stands for c+4
      occurrences, the first one absorbing the explicit sample.
    - a zero run of k > 3: floor(k/139) tokens (n+3, bin7(127)); the leftover
      l = k mod 139 becomes (n+3, bin7(l-12)) if l > 11, (n+2, bin3(l-4)) if
      l > 3, else l verbatim zeros.  Zero run tokens carry no sample.
    """
    out = []
    i = 0
    total = len(values)
    while i < total:
        m = values[i]
        k = 1
        while i + k < total and values[i + k] == m:
            k += 1
        i += k
        if k <= 3:
            out.extend([m] * k)
        elif m != 0:
            out.append(m)
            full, l = divmod(k, 7)
            for _ in range(full):
                out.append(n + 1)
                out.append(('bits', 2, 3))
            if l > 3:
                out.append(n + 1)
                out.append(('bits', 2, l - 4))
            else:
                out.extend([m] * l)
        else:
            full, l = divmod(k, 139)
            for _ in range(full):
                out.append(n + 3)
                out.append(('bits', 7, 127))
            if l > 11:
                out.append(n + 3)
                out.append(('bits', 7, l - 12))
            elif l > 3:
                out.append(n + 2)
                out.append(('bits', 3, l - 4))
            else:
                out.extend([0] * l)
    return out


class SymbolIdTable:
    """Bidirectional symbol/id mapping used by the value sequence.

    Terminals get ids 1..|F| in registration order, the formal parameter
    gets |F|+1, and the non-start nonterminals get |F|+2.. in hierarchical
    order (the start production needs no id).
    """

    def __init__(self, terminals, nonterminals):
        self.terminals = list(terminals)
        self.nonterminals = list(nonterminals)
        self.parameter_id = len(self.terminals) + 1
        self.id_of = {}
        for i, sym in enumerate(self.terminals, start=1):
            self.id_of[sym] = i
        self.id_of[PARAMETER] = self.parameter_id
        for i, nt in enumerate(self.nonterminals, start=self.parameter_id + 1):
            self.id_of[nt] = i

    def symbol(self, sid):
        if 1 <= sid <= len(self.terminals):
            return self.terminals[sid - 1]
        if sid == self.parameter_id:
            return PARAMETER
        k = sid - self.parameter_id - 1
        if 0 <= k < len(self.nonterminals):
            return self.nonterminals[k]
        return None


def assign_ids(grammar: SlcfGrammar) -> SymbolIdTable:
    for sym in grammar.terminal_order:
        if sym.characteristic is None:
            raise EncodeError("terminal %r has no children characteristic" % sym.name)
        if ETX in sym.name.encode("utf-8"):
            raise EncodeError("terminal name contains the ETX byte")
    order = grammar.hierarchical_order()
    nts = [grammar.productions[nt_id].nt for nt_id in order
           if nt_id != grammar.start_id]
    return SymbolIdTable(grammar.terminal_order, nts)


def _preorder_ids(grammar: SlcfGrammar, root, table: SymbolIdTable):
    t = grammar.arena
    out = []
    stack = [root]
    while stack:
        v = stack.pop()
        out.append(table.id_of[t.labels[v]])
        stack.extend(reversed(t.children[v]))
    return out


def serialize_values(grammar: SlcfGrammar, table: SymbolIdTable) -> list:
    """Value sequence as (channel, value) pairs.

    Channels: 'c1' start production ids, 'c2' every other integer, 'c3'
    name bytes, 'tag' raw 2-bit characteristic tags.
    """
    vals = [('c2', len(table.terminals)), ('c2', len(table.nonterminals))]
    for char in LISTED_CHARACTERISTICS:
        ids = [i for i, sym in enumerate(table.terminals, start=1)
               if sym.characteristic == char]
        vals.append(('tag', char.value))
        vals.append(('c2', len(ids)))
        vals.extend(('c2', i) for i in ids)
    for sym in table.terminals:
        vals.extend(('c3', b) for b in sym.name.encode("utf-8"))
        vals.append(('c3', ETX))
    for nt in table.nonterminals:
        prod = grammar.productions[nt.id]
        vals.extend(('c2', sid) for sid in _preorder_ids(grammar, prod.root, table))
    start = grammar.start()
    vals.extend(('c1', sid) for sid in _preorder_ids(grammar, start.root, table))
    return vals


def encode(grammar: SlcfGrammar) -> bytes:
    table = assign_ids(grammar)
    vals = serialize_values(grammar, table)

    freqs = {'c1': Counter(), 'c2': Counter(), 'c3': Counter()}
    for channel, value in vals:
        if channel != 'tag':
            freqs[channel][value] += 1

    lengths = {ch: huffman_code_lengths(freqs[ch]) for ch in ('c1', 'c2', 'c3')}
    codes = {ch: canonical_codes(lengths[ch]) for ch in ('c1', 'c2', 'c3')}
    n = max(max(l.values()) for l in lengths.values())

    length_tables = [lengths_table(lengths[ch]) for ch in ('c1', 'c2', 'c3')]
    streams = [run_length_encode(tbl, n) for tbl in length_tables]

    super_freqs = Counter(tok for stream in streams for tok in stream
                          if not isinstance(tok, tuple))
    super_lengths = huffman_code_lengths(super_freqs)
    super_codes = canonical_codes(super_lengths)
    n_s = max(super_lengths.values()).bit_length()

    w = BitWriter()

    def field(value):
        if value >> FIELD_BITS:
            raise EncodeError("field value %d too large" % value)
        w.write(value, FIELD_BITS)

    field(n_s)
    field(n + 4)
    for s in range(n + 4):
        w.write(super_lengths.get(s, 0), n_s)
    for tbl, stream in zip(length_tables, streams):
        field(len(tbl))
        for tok in stream:
            if isinstance(tok, tuple):
                w.write(tok[2], tok[1])
            else:
                w.write(*super_codes[tok])
    for channel, value in vals:
        if channel == 'tag':
            w.write(value, 2)
        else:
            w.write(*codes[channel][value])
    return w.getvalue()
