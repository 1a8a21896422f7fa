"""QuaNT: PDFA learning with quantized distributions and an n-ary classification tree.

Leaves of the tree are access strings (one per discovered state, each storing
the next-symbol distribution it reaches); inner nodes are distinguishing
suffixes, and arcs are labeled with quantization vectors. A string is
classified ("sifted") by descending from the root, querying the distribution
after ``string + suffix`` at each inner node and following the arc with the
matching quantization vector.
"""
from __future__ import annotations

from typing import Callable

from .errors import ContractViolation, InputError
from .pdfa import Pdfa
from .quantize import format_vector, quantize_distribution
from .teacher import Teacher

Word = tuple  # tuple[int, ...]


class Leaf:
    __slots__ = ("astring", "dist", "parent")

    def __init__(self, astring: Word, dist, parent: "Inner | None"):
        self.astring = astring
        self.dist = dist
        self.parent = parent


class Inner:
    __slots__ = ("dstring", "children", "parent")

    def __init__(self, dstring: Word, parent: "Inner | None" = None):
        self.dstring = dstring
        self.children: dict[tuple, Leaf | Inner] = {}
        self.parent = parent


class ClassificationTree:
    """N-ary classification tree over a teacher's membership oracle.

    ``acc`` lists access strings in discovery order; ``acc[0]`` is always the
    empty string, which is also the distinguishing string at the root.
    """

    def __init__(self, teacher: Teacher, kappa: int):
        self.teacher = teacher
        self.kappa = kappa
        self.root = Inner(())
        self.leaves: dict[Word, Leaf] = {}
        self.acc: list[Word] = []
        self.dis: list[Word] = [()]
        self._qcache: dict = {}
        # sift results stay valid until a leaf is split
        self._sift_memo: dict[Word, Word] = {}

    def quant(self, s: Word) -> tuple:
        d = self.teacher.mq_next_symbol(s)
        v = self._qcache.get(d)
        if v is None:
            v = self._qcache[d] = quantize_distribution(d, self.kappa)
        return v

    def _add_leaf(self, node: Inner, label: tuple, s: Word) -> Leaf:
        leaf = Leaf(s, self.teacher.mq_next_symbol(s), node)
        node.children[label] = leaf
        self.leaves[s] = leaf
        self.acc.append(s)
        return leaf

    def sift(self, s: Word) -> tuple[Word, bool]:
        """Access string of the class of ``s``; ``True`` if a new leaf was created."""
        hit = self._sift_memo.get(s)
        if hit is not None:
            return hit, False
        node = self.root
        while True:
            label = self.quant(s + node.dstring)
            child = node.children.get(label)
            if child is None:
                self._add_leaf(node, label, s)
                self._sift_memo[s] = s
                return s, True
            if isinstance(child, Leaf):
                self._sift_memo[s] = child.astring
                return child.astring, False
            node = child

    def split(self, old: Word, new: Word, dstring: Word) -> None:
        """Replace leaf ``old`` by an inner node ``dstring`` with leaves ``old`` and ``new``."""
        if new in self.leaves:
            raise ContractViolation(f"{new!r} is already an access string")
        leaf = self.leaves[old]
        k_old = self.quant(old + dstring)
        k_new = self.quant(new + dstring)
        if k_old == k_new:
            raise ContractViolation("distinguishing string does not separate the two leaves")
        parent = leaf.parent
        node = Inner(dstring, parent)
        for label, child in parent.children.items():
            if child is leaf:
                parent.children[label] = node
                break
        leaf.parent = node
        node.children[k_old] = leaf
        self._add_leaf(node, k_new, new)
        self.dis.append(dstring)
        self._sift_memo.clear()

    def lca(self, a1: Word, a2: Word) -> Word:
        """Distinguishing string of the deepest common ancestor of two leaves."""
        if a1 not in self.leaves or a2 not in self.leaves:
            raise InputError("both arguments must be access strings of the tree")
        if a1 == a2:
            raise InputError("lowest common ancestor needs two distinct leaves")
        seen = set()
        node = self.leaves[a1].parent
        while node is not None:
            seen.add(id(node))
            node = node.parent
        node = self.leaves[a2].parent
        while id(node) not in seen:
            node = node.parent
        return node.dstring

    @property
    def n_leaves(self) -> int:
        return len(self.leaves)

    def size(self) -> int:
        """Total node count (inner nodes plus leaves)."""
        count = 0
        stack = [self.root]
        while stack:
            node = stack.pop()
            count += 1
            if isinstance(node, Inner):
                stack.extend(node.children.values())
        return count

    def dump(self) -> str:
        """Indented text rendering: ``D`` inner nodes, ``[v]`` arcs, ``A`` leaves."""
        show = self.teacher.alphabet.show
        lines = []

        def walk(node, depth):
            pad = "  " * depth
            if isinstance(node, Leaf):
                dist = ", ".join(f"{x:g}" for x in node.dist)
                lines.append(f"{pad}A {show(node.astring)} ({dist})")
                return
            lines.append(f"{pad}D {show(node.dstring)}")
            for label, child in node.children.items():
                lines.append(f"{pad}  [{format_vector(label)}]")
                walk(child, depth + 2)

        walk(self.root, 0)
        return "\n".join(lines) + "\n"


def single_state_hypothesis(teacher: Teacher) -> Pdfa:
    m = len(teacher.alphabet)
    return Pdfa(teacher.alphabet, [teacher.mq_next_symbol(())], [[0] * m], 0)


def initialize_tree(gamma: Word, teacher: Teacher, kappa: int) -> ClassificationTree:
    tree = ClassificationTree(teacher, kappa)
    k_root, k_gamma = tree.quant(()), tree.quant(gamma)
    if k_root == k_gamma:
        raise ContractViolation("counterexample has the same quantization as the empty string")
    tree._add_leaf(tree.root, k_root, ())
    tree._add_leaf(tree.root, k_gamma, gamma)
    return tree


def build_hypothesis(tree: ClassificationTree) -> Pdfa:
    """One state per access string, transitions by sifting ``s + a``.

    Restarts from scratch whenever a sift discovers a new class.
    """
    m = len(tree.teacher.alphabet)
    while True:
        acc = list(tree.acc)
        index = {s: i for i, s in enumerate(acc)}
        trans = []
        restart = False
        for s in acc:
            row = []
            for a in range(m):
                target, updated = tree.sift(s + (a,))
                if updated:
                    restart = True
                    break
                row.append(index[target])
            if restart:
                break
            trans.append(row)
        if not restart:
            dists = [tree.leaves[s].dist for s in acc]
            return Pdfa(tree.teacher.alphabet, dists, trans, index[()])


def process_counterexample(tree: ClassificationTree, gamma: Word, hyp: Pdfa) -> bool:
    """Grow ``tree`` from a counterexample to ``hyp``.

    ``hyp`` must have been built from the current tree, with state ``i``
    standing for ``tree.acc[i]``. Returns ``True`` when the tree grew only
    through a sift-update during the scan (the hypothesis is then stale and
    the scan is abandoned); ``False`` after a regular leaf split.
    """
    acc = tree.acc
    prev = ()
    q = hyp.initial
    for j in range(1, len(gamma) + 1):
        s_j, updated = tree.sift(gamma[:j])
        if updated:
            return True
        q = hyp.trans[q][gamma[j - 1]]
        h_j = acc[q]
        if h_j != s_j:
            d = tree.lca(h_j, s_j)
            tree.split(prev, gamma[:j - 1], (gamma[j - 1],) + d)
            return False
        prev = s_j
    raise ContractViolation("word is not a counterexample for the hypothesis")


class QuantLearner:
    """Main loop of QuaNT against a teacher.

    ``on_iteration`` (if given) is called with the learner after every
    equivalence query once the tree exists.
    """

    def __init__(self, teacher: Teacher, kappa: int,
                 on_iteration: Callable[["QuantLearner"], None] | None = None):
        if not isinstance(kappa, int) or kappa < 1:
            raise InputError(f"quantization parameter must be a positive integer, got {kappa!r}")
        self.teacher = teacher
        self.kappa = kappa
        self.tree: ClassificationTree | None = None
        self.hypothesis: Pdfa | None = None
        self.counterexamples: list[Word] = []
        self.on_iteration = on_iteration

    def structure_size(self) -> int:
        return 0 if self.tree is None else self.tree.size()

    def run(self) -> Pdfa:
        hyp = single_state_hypothesis(self.teacher)
        self.hypothesis = hyp
        gamma = self.teacher.eq_quantized(hyp, self.kappa)
        if gamma is None:
            return hyp
        self.counterexamples.append(gamma)
        self.tree = initialize_tree(gamma, self.teacher, self.kappa)
        while True:
            hyp = self.hypothesis = build_hypothesis(self.tree)
            gamma = self.teacher.eq_quantized(hyp, self.kappa)
            if self.on_iteration is not None:
                self.on_iteration(self)
            if gamma is None:
                return hyp
            self.counterexamples.append(gamma)
            process_counterexample(self.tree, gamma, hyp)


def learn_quant(teacher: Teacher, kappa: int) -> Pdfa:
    return QuantLearner(teacher, kappa).run()
