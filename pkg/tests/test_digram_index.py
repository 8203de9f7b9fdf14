"""Digram bookkeeping: counts, the priority structure, occurrence lists."""

from treerepair import ChildrenCharacteristic, build_index, compute_occurrences, parse_xml
from treerepair.fixtures import gen_perfect_binary
from treerepair.replacer import pattern_tree, replace_occurrence
from treerepair.slcf_grammar import SlcfGrammar

from conftest import BOOKS, make_grammar, random_xml, ranked, ranked_bt
from oracles import max_nonoverlapping

CC = ChildrenCharacteristic


def cterm(name, bits):
    from treerepair.xml_tree import TerminalSymbol

    return TerminalSymbol(name, characteristic=CC(int(bits, 2)))


def chain(token, depth, leaf="a/0"):
    spec = leaf
    for _ in range(depth):
        spec = (token, [spec])
    return spec


class TestInitialCounts:
    def test_books_digram_table(self):
        g = SlcfGrammar.from_tree(parse_xml(BOOKS))
        idx = build_index(g)
        expected = {
            (cterm("title", "01"), 1, cterm("isbn", "00")): 5,
            (cterm("author", "01"), 1, cterm("title", "01")): 5,
            (cterm("book", "11"), 1, cterm("author", "01")): 4,
            (cterm("book", "11"), 2, cterm("book", "11")): 2,
            (cterm("book", "11"), 2, cterm("book", "10")): 1,
            (cterm("books", "10"), 1, cterm("book", "11")): 1,
            (cterm("book", "10"), 1, cterm("author", "01")): 1,
        }
        for (parent, i, child), count in expected.items():
            assert idx.record_for(parent, i, child).count == count, (parent, i, child)
            assert len(idx.occurrence_nodes(parent, i, child)) == count

    def test_books_first_pop_takes_the_oldest_tie(self):
        g = SlcfGrammar.from_tree(parse_xml(BOOKS))
        idx = build_index(g)
        rec = idx.pop_most_frequent()
        assert (rec.digram.parent, rec.digram.index, rec.digram.child) == (
            cterm("title", "01"), 1, cterm("isbn", "00"))
        assert rec.count == 5

    def test_pop_falls_back_to_bucket_walk(self):
        # ten edges put the top-list threshold at 3, so the count-2 digram
        # is only reachable through the frequency buckets
        g = SlcfGrammar.from_tree(ranked_bt(
            ("f/5", [("g/1", ["a/0"]), ("g/1", ["a/0"]),
                     ("p/1", ["q/0"]), ("r/1", ["s/0"]), ("t/1", ["u/0"])])
        ))
        idx = build_index(g)
        rec = idx.pop_most_frequent()
        assert (rec.digram.parent, rec.digram.index, rec.digram.child) == (
            ranked("g/1"), 1, ranked("a/0"))
        assert rec.count == 2

    def test_chain_keeps_alternate_occurrences(self):
        g = SlcfGrammar.from_tree(ranked_bt(chain("f/1", 6)))
        idx = build_index(g)
        f = ranked("f/1")
        assert idx.record_for(f, 1, f).count == 3
        assert len(idx.occurrence_nodes(f, 1, f)) == 3
        assert max_nonoverlapping(g.arena, g.start().root, f, 1, f) == 3

    def test_perfect_tree_right_slot_occurrences(self):
        bt = gen_perfect_binary(4)
        f = cterm("f", "11")
        occ = compute_occurrences(bt.tree, bt.root, f, 2, f)
        assert len(occ) == 5
        assert max_nonoverlapping(bt.tree, bt.root, f, 2, f) == 5

    def test_matches_oracle_on_random_trees(self):
        for seed in range(120):
            bt = parse_xml(random_xml(seed, 120))
            digrams = set()
            for v in bt.tree.iter_postorder(bt.root):
                for i, w in enumerate(bt.tree.children[v]):
                    if w >= 0:
                        digrams.add((bt.tree.labels[v], i + 1, bt.tree.labels[w]))
            for parent, i, child in digrams:
                got = len(compute_occurrences(bt.tree, bt.root, parent, i, child))
                want = max_nonoverlapping(bt.tree, bt.root, parent, i, child)
                assert got == want, (seed, parent, i, child)


class TestRankBound:
    def test_digrams_beyond_the_bound_are_never_offered(self):
        f, a = cterm("f", "11"), cterm("a", "00")
        g = SlcfGrammar.from_tree(gen_perfect_binary(3))
        idx = build_index(g)
        assert idx.record_for(f, 1, f).count == 2
        g = SlcfGrammar.from_tree(gen_perfect_binary(3))
        idx = build_index(g, max_rank=1)
        rec = idx.pop_most_frequent()
        # (f,1,f) would need a rank-3 pattern, so the bounded queue only
        # ever offers the leaf digrams
        assert rec.digram.par <= 1
        assert (rec.digram.parent, rec.digram.index, rec.digram.child) == (f, 1, a)
        assert rec.count == 4

    def test_pop_is_empty_when_every_repeat_is_over_the_bound(self):
        spec = ("r/3", [
            ("f/2", ["b1/0", ("f/2", ["c1/0", "d1/0"])]),
            ("f/2", ["b2/0", ("f/2", ["c2/0", "d2/0"])]),
            ("f/2", ["b3/0", ("f/2", ["c3/0", "d3/0"])]),
        ])
        g = SlcfGrammar.from_tree(ranked_bt(spec))
        idx = build_index(g, max_rank=2)
        f = ranked("f/2")
        assert idx.record_for(f, 2, f).count == 3
        assert idx.pop_most_frequent() is None
        g = SlcfGrammar.from_tree(ranked_bt(spec))
        idx = build_index(g)
        rec = idx.pop_most_frequent()
        assert (rec.digram.parent, rec.digram.index, rec.digram.child) == (f, 2, f)


class TestSharedProductions:
    def test_each_reference_counts_once(self):
        g, _ = make_grammar([
            ("A", 0, ("f/2", ["a/0", ("f/2", ["a/0", ("f/2", ["a/0", "a/0"])])])),
            ("S", 0, ("f/2", [("f/2", ["b/0", "A"]), ("f/2", ["c/0", "A"])])),
        ], dag={"A"})
        idx = build_index(g)
        f = ranked("f/2")
        rec = idx.record_for(f, 2, f)
        assert rec.count == 2
        assert len(idx.occurrence_nodes(f, 2, f)) == 2
        # the flattened tree chains through the shared subtree twice, so the
        # sharing-aware index undercounts against the unfolded optimum
        bt = g.unfold_value()
        assert len(compute_occurrences(bt.tree, bt.root, f, 2, f)) == 4
        assert max_nonoverlapping(bt.tree, bt.root, f, 2, f) == 4

    def test_one_node_can_host_occurrences_of_two_digrams(self):
        g, nts = make_grammar([
            ("A", 0, ("g/3", ["a/0", "b/0", "c/0"])),
            ("S", 0, ("f/2", ["A", "A"])),
        ], dag={"A"})
        idx = build_index(g)
        s_root = g.start().root
        f, gsym = ranked("f/2"), ranked("g/3")
        assert idx.occurrence_nodes(f, 1, gsym) == [s_root]
        assert idx.occurrence_nodes(f, 2, gsym) == [s_root]


class TestIncrementalMaintenance:
    def test_replacement_can_lose_occurrences_a_rescan_would_find(self):
        g = SlcfGrammar.from_tree(
            ranked_bt(("f/2", ["a/0", ("f/2", ["b/0", ("f/2", ["c/0", "d/0"])])]))
        )
        idx = build_index(g)
        f, c = ranked("f/2"), ranked("c/0")
        assert len(idx.occurrence_nodes(f, 2, f)) == 1
        rec = idx.record_for(f, 1, c)
        assert rec.count == 1
        a = g.new_nonterminal(rec.digram.par, is_dag=False)
        g.add_production(a, pattern_tree(g, rec.digram))
        replace_occurrence(g, idx, rec.head, rec.digram.index, a)
        g.validate()
        # the maintained set is now empty although the rewritten tree
        # still contains one occurrence
        assert idx.occurrence_nodes(f, 2, f) == []
        root = g.start().root
        assert len(compute_occurrences(g.arena, root, f, 2, f)) == 1
