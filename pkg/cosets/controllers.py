import logging

from django.conf import settings
from sympy.combinatorics import Permutation

from actions.models import Exact, AtLeast
from core.utils import warn_if_last_more_than
from cosets.models import COSET_STATUSES, COSET_STRATEGIES, CosetTable

logger = logging.getLogger(__name__)


class _Capped(Exception):
    pass


class _Enumeration:
    """
    Working state of an enumeration: a growing table and a union-find forest over its rows.
    Dead rows (merged into a smaller one) keep their index until the final compaction.
    Every new entry (definition, deduction or coincidence) is pushed on `deductions` when it is tracked.
    """

    def __init__(self, generators, cap, track_deductions=False):
        self.columns = list(generators) + [g.inverse for g in generators]
        self.column = {sym: i for i, sym in enumerate(self.columns)}
        self.inverse = [self.column[sym.inverse] for sym in self.columns]
        self.cap = cap
        self.table = [[None] * len(self.columns)]
        self.parent = [0]
        self.deductions = [] if track_deductions else None

    def encode(self, word):
        return [self.column[sym] for sym in word]

    def find(self, c):
        root = c
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[c] != root:
            self.parent[c], c = root, self.parent[c]
        return root

    def live(self, c):
        return self.parent[c] == c

    def deduce(self, c, x, d):
        self.table[c][x] = d
        self.table[d][self.inverse[x]] = c
        if self.deductions is not None:
            self.deductions.append((c, x))

    def define(self, c, x):
        if len(self.table) >= self.cap:
            raise _Capped
        d = len(self.table)
        self.table.append([None] * len(self.columns))
        self.parent.append(d)
        self.deduce(c, x, d)

    def scan(self, c, word, fill=False):
        """
        Trace `word` from c forwards and backwards. A single gap is a deduction and a closed trace ending on two
        rows is a coincidence. With `fill`, rows are defined until the relator closes at c.
        """
        table, inverse = self.table, self.inverse
        while True:
            f, b, i, j = c, c, 0, len(word) - 1
            while i <= j and table[f][word[i]] is not None:
                f = table[f][word[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and table[b][inverse[word[j]]] is not None:
                b = table[b][inverse[word[j]]]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                self.deduce(f, word[i], b)
                return
            if not fill:
                return
            self.define(f, word[i])

    def merge(self, k, l, queue):
        k, l = self.find(k), self.find(l)
        if k == l:
            return
        k, l = min(k, l), max(k, l)
        self.parent[l] = k
        queue.append(l)

    def coincidence(self, a, b):
        table, inverse = self.table, self.inverse
        queue = []
        self.merge(a, b, queue)
        position = 0
        while position < len(queue):
            e = queue[position]
            position += 1
            for x in range(len(self.columns)):
                f = table[e][x]
                if f is None:
                    continue
                table[f][inverse[x]] = None
                e1, f1 = self.find(e), self.find(f)
                if table[e1][x] is not None:
                    self.merge(f1, table[e1][x], queue)
                elif table[f1][inverse[x]] is not None:
                    self.merge(e1, table[f1][inverse[x]], queue)
                else:
                    self.deduce(e1, x, f1)

    def process_deductions(self, rotations):
        """Scan every relator rotation through each pushed entry, at both of its ends."""
        while self.deductions:
            c, x = self.deductions.pop()
            if not self.live(c):
                continue
            for word in rotations[x]:
                self.scan(c, word)
                if not self.live(c):
                    break
            d = self.table[c][x] if self.live(c) else None
            if d is None or not self.live(d):
                continue
            for word in rotations[self.inverse[x]]:
                self.scan(d, word)
                if not self.live(d):
                    break

    def compact(self, status):
        """Live rows renumbered in creation order."""
        live = [c for c in range(len(self.table)) if self.live(c)]
        number = {c: i for i, c in enumerate(live)}
        rows = [
            [None if entry is None else number[self.find(entry)] for entry in self.table[c]]
            for c in live
        ]
        return CosetTable(self.columns, rows, status, defined=len(self.table))


def _rotations(relators, nb_columns, inverse):
    """Cyclic conjugates of the relators and of their inverses, by first column."""
    res = [[] for _x in range(nb_columns)]
    for relator in relators:
        for word in (relator, [inverse[x] for x in reversed(relator)]):
            for i in range(len(word)):
                rotation = word[i:] + word[:i]
                if rotation not in res[rotation[0]]:
                    res[rotation[0]].append(rotation)
    return res


class CosetController:
    @staticmethod
    def todd_coxeter(presentation, subgroup=(), cap: int | None = None, strategy: str | None = None) -> CosetTable:
        """
        Coset enumeration of `subgroup`, cosets in creation order and relators in declaration order.

        FELSCH fills the first empty entry of the first live coset, then scans every relator rotation through
        the new entries. HLT scans and fills every relator from each coset in turn, then completes its row.
        """
        cap = cap or settings.COSET_CAP
        strategy = strategy or COSET_STRATEGIES.FELSCH
        felsch = strategy == COSET_STRATEGIES.FELSCH
        enumeration = _Enumeration(presentation.generators, cap, track_deductions=felsch)
        relators = [enumeration.encode(r) for r in presentation.relators if r]
        rotations = _rotations(relators, len(enumeration.columns), enumeration.inverse)
        status = COSET_STATUSES.CLOSED
        with warn_if_last_more_than(tag=presentation.name, seconds=30):
            try:
                for word in subgroup:
                    if word:
                        enumeration.scan(0, enumeration.encode(word), fill=True)
                if felsch:
                    CosetController._felsch(enumeration, rotations)
                else:
                    CosetController._hlt(enumeration, relators)
            except _Capped:
                status = COSET_STATUSES.CAPPED
                logger.warning("Coset enumeration of %s capped at %s rows", presentation.name, cap)
        table = enumeration.compact(status)
        if table.closed:
            logger.info(
                "Coset enumeration of %s (%s) closed with index %s after %s rows",
                presentation.name,
                strategy,
                table.index,
                table.defined,
            )
        return table

    @staticmethod
    def _felsch(enumeration, rotations):
        enumeration.process_deductions(rotations)
        c = 0
        while c < len(enumeration.table):
            for x in range(len(enumeration.columns)):
                if enumeration.live(c) and enumeration.table[c][x] is None:
                    enumeration.define(c, x)
                    enumeration.process_deductions(rotations)
            c += 1

    @staticmethod
    def _hlt(enumeration, relators):
        c = 0
        while c < len(enumeration.table):
            for relator in relators:
                if not enumeration.live(c):
                    break
                enumeration.scan(c, relator, fill=True)
            if enumeration.live(c):
                for x in range(len(enumeration.columns)):
                    if enumeration.table[c][x] is None:
                        enumeration.define(c, x)
            c += 1

    @staticmethod
    def quotient_order(
        presentation, extra_relators=(), cap: int | None = None, strategy: str | None = None
    ) -> Exact | AtLeast:
        cap = cap or settings.COSET_CAP
        extended = presentation._replace(relators=list(presentation.relators) + list(extra_relators))
        table = CosetController.todd_coxeter(extended, cap=cap, strategy=strategy)
        if table.closed:
            return Exact(table.index)
        return AtLeast(table.defined)

    @staticmethod
    def verify_table(table: CosetTable, presentation, subgroup=()) -> bool:
        """
        Re-check a closed table as a permutation representation: columns are permutations inverse to their
        inverse columns, relators act trivially and the subgroup fixes row 0.
        """
        if not table.closed or any(entry is None for row in table.rows for entry in row):
            return False
        try:
            permutations = table.permutations()
        except ValueError:
            return False
        identity = Permutation(list(range(len(table.rows))))
        if any(permutations[g] * permutations[g.inverse] != identity for g in presentation.generators):
            return False

        def product(word):
            res = identity
            for sym in word:
                res = res * permutations[sym]
            return res

        if not all(product(r).is_Identity for r in presentation.relators):
            return False
        return all(product(w).array_form[0] == 0 for w in subgroup)
