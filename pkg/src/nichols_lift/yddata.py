"""Finite abelian groups, characters and diagonal Yetter-Drinfeld data.

Group elements and characters are plain exponent tuples. A character with
exponents (a_j) evaluates on g = (b_j) as zeta_e^(sum a_j b_j e/m_j); inside the
engine every root of unity is kept as an exponent k of the ambient zeta_n.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .scalars import CycNumber, lcm

GroupElement = tuple[int, ...]
Character = tuple[int, ...]
Word = str

LETTERS = "123456789"


def word_from_letters(letters: Sequence[int]) -> Word:
    """Letters are 1-based indices into the datum."""
    return "".join(LETTERS[i - 1] for i in letters)


def word_letters(word: Word) -> list[int]:
    return [int(c) for c in word]


class GroupMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class AbelianGroup:
    invariant_factors: tuple[int, ...]

    def __post_init__(self):
        if any(m < 1 for m in self.invariant_factors):
            raise ValueError("invariant factors must be positive")

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def order(self) -> int:
        out = 1
        for m in self.invariant_factors:
            out *= m
        return out

    @property
    def exponent(self) -> int:
        return lcm(*self.invariant_factors) if self.invariant_factors else 1

    def identity(self) -> GroupElement:
        return (0,) * self.rank

    def element(self, exps: Sequence[int]) -> GroupElement:
        if len(exps) != self.rank:
            raise GroupMismatchError(f"expected {self.rank} exponents, got {len(exps)}")
        return tuple(int(b) % m for b, m in zip(exps, self.invariant_factors))

    def generators(self) -> list[GroupElement]:
        gens = []
        for j in range(self.rank):
            e = [0] * self.rank
            e[j] = 1
            gens.append(self.element(e))
        return gens

    def mul(self, g: GroupElement, h: GroupElement) -> GroupElement:
        return tuple((a + b) % m for a, b, m in zip(g, h, self.invariant_factors))

    def inv(self, g: GroupElement) -> GroupElement:
        return tuple((-a) % m for a, m in zip(g, self.invariant_factors))

    def power(self, g: GroupElement, k: int) -> GroupElement:
        return tuple((a * k) % m for a, m in zip(g, self.invariant_factors))

    def elements(self):
        from itertools import product

        return [tuple(t) for t in product(*(range(m) for m in self.invariant_factors))]

    def char(self, exps: Sequence[int]) -> Character:
        return self.element(exps)

    def char_mul(self, chi: Character, psi: Character) -> Character:
        return self.mul(chi, psi)


@dataclass
class YDDatum:
    """Rank-theta diagonal braiding realized over an abelian group.

    `order` is the ambient cyclotomic order; it is a multiple of the group
    exponent and of every root order appearing in the session's scalars.
    """

    group: AbelianGroup
    g: list[GroupElement]
    chi: list[Character]
    order: int = 0
    _steps: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self):
        if len(self.g) != len(self.chi):
            raise ValueError("need one (g_i, chi_i) pair per generator")
        if self.theta > len(LETTERS):
            raise ValueError("at most 9 generators are supported")
        self.g = [self.group.element(x) for x in self.g]
        self.chi = [self.group.char(x) for x in self.chi]
        e = self.group.exponent
        if self.order == 0:
            self.order = e
        if self.order % e:
            raise ValueError(f"ambient order {self.order} is not a multiple of exponent {e}")
        n = self.order
        self._steps = tuple(n // m for m in self.group.invariant_factors)
        self._letter_g = {LETTERS[i]: self.g[i] for i in range(self.theta)}
        self._letter_chi = {LETTERS[i]: self.chi[i] for i in range(self.theta)}
        self._weights: dict = {}

    @property
    def theta(self) -> int:
        return len(self.g)

    @property
    def identity(self) -> GroupElement:
        return self.group.identity()

    def letters(self) -> str:
        return LETTERS[: self.theta]

    # character values -------------------------------------------------------
    def pairing(self, chi: Character, g: GroupElement) -> int:
        """k such that chi(g) = zeta_n^k."""
        n = self.order
        return sum(a * b * s for a, b, s in zip(chi, g, self._steps)) % n

    def evaluate(self, chi: Character, g: GroupElement) -> CycNumber:
        if len(chi) != self.group.rank or len(g) != self.group.rank:
            raise GroupMismatchError("character and element belong to different groups")
        return CycNumber.zeta(self.order, self.pairing(chi, g))

    def q_exp(self, i: int, j: int) -> int:
        """Exponent of q_ij = chi_j(g_i); indices are 1-based."""
        return self.pairing(self.chi[j - 1], self.g[i - 1])

    def q(self, i: int, j: int) -> CycNumber:
        return CycNumber.zeta(self.order, self.q_exp(i, j))

    def braiding_matrix(self) -> list[list[CycNumber]]:
        return [[self.q(i, j) for j in range(1, self.theta + 1)] for i in range(1, self.theta + 1)]

    def letter_g(self, letter: str) -> GroupElement:
        return self._letter_g[letter]

    def letter_chi(self, letter: str) -> Character:
        return self._letter_chi[letter]

    def word_weight(self, word: Word) -> tuple[GroupElement, Character]:
        """(g_w, chi_w): products of the letters' group-likes and characters."""
        hit = self._weights.get(word)
        if hit is not None:
            return hit
        grp = self.group
        gw = grp.identity()
        cw = grp.identity()
        for c in word:
            if c not in self._letter_g:
                raise IndexError(f"letter x{c} out of range for rank {self.theta}")
            gw = grp.mul(gw, self._letter_g[c])
            cw = grp.mul(cw, self._letter_chi[c])
        if len(self._weights) < 500_000:
            self._weights[word] = (gw, cw)
        return gw, cw

    def word_pairing(self, word: Word, h: GroupElement) -> int:
        """Exponent of chi_word(h), i.e. the scalar picked up by h word = chi_word(h) word h."""
        if not word:
            return 0
        _, cw = self.word_weight(word)
        return self.pairing(cw, h)

    def is_trivial_on_group(self, chi: Character) -> bool:
        return all(self.pairing(chi, t) == 0 for t in self.group.generators())

    def is_yd_pair(self, i: int) -> bool:
        """chi(h) g = chi(h_2) h_1 g S(h_3) on group-likes h, where h_1=h_2=h_3=h."""
        grp = self.group
        gi, ci = self.g[i - 1], self.chi[i - 1]
        for h in grp.generators() + [grp.identity()]:
            lhs = (self.pairing(ci, h), gi)
            conj = grp.mul(grp.mul(h, gi), grp.inv(h))
            rhs = (self.pairing(ci, h), conj)
            if lhs != rhs:
                return False
        return True

    def with_order(self, n: int) -> "YDDatum":
        return YDDatum(self.group, list(self.g), list(self.chi), order=n)


def minimal_realization(q: Sequence[Sequence[CycNumber]]) -> YDDatum:
    """Realize a braiding matrix of roots of unity over a product of cyclic groups.

    Generator i gets a cyclic factor of order lcm of the root orders in row i
    and column i, g_i is its generator and chi_j(g_i) = q_ij.
    """
    theta = len(q)
    if any(len(row) != theta for row in q):
        raise ValueError("braiding matrix must be square")
    n = q[0][0].order if theta else 1
    orders = [[0] * theta for _ in range(theta)]
    exps = [[0] * theta for _ in range(theta)]
    for i in range(theta):
        for j in range(theta):
            x = q[i][j]
            if x.order != n:
                raise ValueError("braiding entries must share one ambient field")
            r = x.root_order()
            k = x.root_exponent()
            if r is None or k is None:
                raise ValueError(f"q_{i + 1}{j + 1} = {x} is not a root of unity in Q(zeta_{n})")
            orders[i][j] = r
            exps[i][j] = k
    factors = []
    for i in range(theta):
        factors.append(lcm(*(orders[i][j] for j in range(theta)), *(orders[j][i] for j in range(theta))))
    group = AbelianGroup(tuple(factors))
    n_amb = lcm(n, group.exponent)
    gs = group.generators()
    chis = []
    for j in range(theta):
        a = []
        for i in range(theta):
            # q_ij = zeta_n^k = zeta_{m_i}^(a_ji) with zeta_{m_i} = zeta_n^(n/m_i)
            k = exps[i][j] * (n_amb // n)
            step = n_amb // factors[i]
            assert k % step == 0
            a.append(k // step)
        chis.append(tuple(a))
    datum = YDDatum(group, gs, chis, order=n_amb)
    for i in range(theta):
        for j in range(theta):
            assert datum.q(i + 1, j + 1) == q[i][j].embed(n_amb)
    return datum
