"""The smash product T(V)#kG and its tensor square.

Basis elements are pairs (word, g) read as ``word * g``; group parts always sit
to the right, moved there with g x_i = chi_i(g) x_i g.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Optional, Union

from .scalars import CycNumber
from .yddata import GroupElement, Word, YDDatum

Basis = tuple[Word, GroupElement]
TensorKey = tuple[Word, GroupElement, Word, GroupElement]


def _add_into(acc: dict, key, c: CycNumber) -> None:
    # c is assumed nonzero; products of nonzero scalars are (no zero divisors)
    old = acc.get(key)
    if old is None:
        acc[key] = c
    else:
        s = old + c
        if s:
            acc[key] = s
        else:
            del acc[key]


class SmashElement:
    """Finite linear combination of basis pairs (word, g) with nonzero coefficients."""

    __slots__ = ("datum", "terms")

    def __init__(self, datum: YDDatum, terms: Optional[dict] = None):
        self.datum = datum
        self.terms: dict[Basis, CycNumber] = {}
        if terms:
            for k, c in terms.items():
                if c:
                    self.terms[k] = c

    @classmethod
    def _wrap(cls, datum: YDDatum, terms: dict) -> "SmashElement":
        obj = cls.__new__(cls)
        obj.datum = datum
        obj.terms = terms
        return obj

    # constructors ----------------------------------------------------------
    @classmethod
    def zero(cls, datum: YDDatum) -> "SmashElement":
        return cls._wrap(datum, {})

    @classmethod
    def scalar(cls, datum: YDDatum, value) -> "SmashElement":
        c = _as_scalar(datum, value)
        return cls._wrap(datum, {("", datum.identity): c} if c else {})

    @classmethod
    def one(cls, datum: YDDatum) -> "SmashElement":
        return cls.scalar(datum, 1)

    @classmethod
    def monomial(cls, datum: YDDatum, word: Word, g: Optional[GroupElement] = None, coeff=1) -> "SmashElement":
        c = _as_scalar(datum, coeff)
        g = datum.identity if g is None else datum.group.element(g)
        return cls._wrap(datum, {(word, g): c} if c else {})

    @classmethod
    def letter(cls, datum: YDDatum, i: int) -> "SmashElement":
        if not 1 <= i <= datum.theta:
            raise IndexError(f"x{i} out of range")
        return cls.monomial(datum, str(i))

    @classmethod
    def group(cls, datum: YDDatum, g: GroupElement) -> "SmashElement":
        return cls.monomial(datum, "", g)

    # inspection ------------------------------------------------------------
    def __iter__(self) -> Iterator[tuple[Basis, CycNumber]]:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self) -> int:
        return max((len(w) for w, _ in self.terms), default=-1)

    def coefficient(self, word: Word, g: Optional[GroupElement] = None) -> CycNumber:
        g = self.datum.identity if g is None else g
        return self.terms.get((word, g), CycNumber.zero(self.datum.order))

    def words(self) -> set[Word]:
        return {w for w, _ in self.terms}

    def counit(self) -> CycNumber:
        """epsilon(w g) = 1 if w is empty, else 0."""
        out = CycNumber.zero(self.datum.order)
        for (w, _), c in self.terms.items():
            if not w:
                out = out + c
        return out

    def is_homogeneous(self) -> bool:
        return len({len(w) for w, _ in self.terms}) <= 1

    def weights(self) -> set:
        """Set of (g_w, chi_w) over the word parts of all terms."""
        return {self.datum.word_weight(w) for w, _ in self.terms}

    def __eq__(self, other) -> bool:
        if isinstance(other, SmashElement):
            return self.terms == other.terms
        if isinstance(other, (int, CycNumber)):
            return self.terms == SmashElement.scalar(self.datum, other).terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # arithmetic ------------------------------------------------------------
    def _lift(self, other) -> "SmashElement":
        if isinstance(other, SmashElement):
            return other
        return SmashElement.scalar(self.datum, other)

    def __add__(self, other) -> "SmashElement":
        o = self._lift(other)
        acc = dict(self.terms)
        for k, c in o.terms.items():
            _add_into(acc, k, c)
        return SmashElement._wrap(self.datum, acc)

    __radd__ = __add__

    def __neg__(self) -> "SmashElement":
        return SmashElement._wrap(self.datum, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> "SmashElement":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "SmashElement":
        return self._lift(other) - self

    def scale(self, value) -> "SmashElement":
        c = _as_scalar(self.datum, value)
        if not c:
            return SmashElement.zero(self.datum)
        return SmashElement._wrap(self.datum, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other) -> "SmashElement":
        if isinstance(other, SmashElement):
            return SmashElement._wrap(self.datum, smash_product_terms(self.datum, self.terms, other.terms))
        if isinstance(other, (int, CycNumber)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other) -> "SmashElement":
        if isinstance(other, (int, CycNumber)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> "SmashElement":
        if k < 0:
            raise ValueError("negative powers are not defined in T(V)#kG")
        out = SmashElement.one(self.datum)
        for _ in range(k):
            out = out * self
        return out

    def right_group(self, g: GroupElement) -> "SmashElement":
        """self * g."""
        grp = self.datum.group
        return SmashElement._wrap(self.datum, {(w, grp.mul(h, g)): c for (w, h), c in self.terms.items()})

    def left_group(self, g: GroupElement) -> "SmashElement":
        """g * self."""
        return SmashElement.group(self.datum, g) * self

    def leading_word(self, order) -> Word:
        return max((w for w, _ in self.terms), key=order.key)

    def __repr__(self) -> str:
        return f"SmashElement({format_element(self)!r})"

    def __str__(self) -> str:
        return format_element(self)


def _as_scalar(datum: YDDatum, value) -> CycNumber:
    if isinstance(value, CycNumber):
        if value.order != datum.order:
            value = value.embed(datum.order)
        return value
    return CycNumber.rational(datum.order, value)


def smash_product_terms(datum: YDDatum, a: dict, b: dict) -> dict:
    """(w g)(w' g') = chi_{w'}(g) w w' g g'."""
    grp = datum.group
    acc: dict = {}
    ident = datum.identity
    for (w2, g2), c2 in b.items():
        _, chi2 = datum.word_weight(w2)
        for (w1, g1), c1 in a.items():
            c = c1 * c2
            if g1 != ident and w2:
                k = datum.pairing(chi2, g1)
                if k:
                    c = c.mul_zeta(k)
            _add_into(acc, (w1 + w2, grp.mul(g1, g2)), c)
    return acc


class TensorElement:
    """Element of (T(V)#kG) tensor (T(V)#kG); keys are (w1, g1, w2, g2)."""

    __slots__ = ("datum", "terms")

    def __init__(self, datum: YDDatum, terms: Optional[dict] = None):
        self.datum = datum
        self.terms: dict[TensorKey, CycNumber] = {k: c for k, c in (terms or {}).items() if c}

    @classmethod
    def _wrap(cls, datum, terms) -> "TensorElement":
        obj = cls.__new__(cls)
        obj.datum = datum
        obj.terms = terms
        return obj

    @classmethod
    def zero(cls, datum: YDDatum) -> "TensorElement":
        return cls._wrap(datum, {})

    @classmethod
    def pure(cls, left: SmashElement, right: SmashElement) -> "TensorElement":
        acc: dict = {}
        for (w1, g1), c1 in left.terms.items():
            for (w2, g2), c2 in right.terms.items():
                _add_into(acc, (w1, g1, w2, g2), c1 * c2)
        return cls._wrap(left.datum, acc)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def __eq__(self, other) -> bool:
        if isinstance(other, TensorElement):
            return self.terms == other.terms
        return NotImplemented

    def __add__(self, other: "TensorElement") -> "TensorElement":
        acc = dict(self.terms)
        for k, c in other.terms.items():
            _add_into(acc, k, c)
        return TensorElement._wrap(self.datum, acc)

    def __neg__(self) -> "TensorElement":
        return TensorElement._wrap(self.datum, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + (-other)

    def scale(self, value) -> "TensorElement":
        c = _as_scalar(self.datum, value)
        if not c:
            return TensorElement.zero(self.datum)
        return TensorElement._wrap(self.datum, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, TensorElement):
            return TensorElement._wrap(self.datum, tensor_product_terms(self.datum, self.terms, other.terms))
        if isinstance(other, (int, CycNumber)):
            return self.scale(other)
        return NotImplemented

    def left_leg_degree(self) -> int:
        return max((len(k[0]) for k in self.terms), default=-1)

    def apply_left_counit(self) -> SmashElement:
        """(epsilon tensor id)."""
        acc: dict = {}
        for (w1, g1, w2, g2), c in self.terms.items():
            if not w1:
                _add_into(acc, (w2, g2), c)
        return SmashElement._wrap(self.datum, acc)

    def apply_right_counit(self) -> SmashElement:
        acc: dict = {}
        for (w1, g1, w2, g2), c in self.terms.items():
            if not w2:
                _add_into(acc, (w1, g1), c)
        return SmashElement._wrap(self.datum, acc)

    def multiply_legs(self, left_map=None, right_map=None) -> SmashElement:
        """m o (f tensor h); maps act on SmashElements of a single basis pair."""
        d = self.datum
        acc: dict = {}
        for (w1, g1, w2, g2), c in self.terms.items():
            a = SmashElement._wrap(d, {(w1, g1): c})
            b = SmashElement._wrap(d, {(w2, g2): CycNumber.one(d.order)})
            if left_map is not None:
                a = left_map(a)
            if right_map is not None:
                b = right_map(b)
            for k, v in smash_product_terms(d, a.terms, b.terms).items():
                _add_into(acc, k, v)
        return SmashElement._wrap(d, acc)

    def __repr__(self) -> str:
        return f"TensorElement({format_tensor(self)!r})"

    def __str__(self) -> str:
        return format_tensor(self)


def tensor_product_terms(datum: YDDatum, a: dict, b: dict) -> dict:
    """(a1 (x) a2)(b1 (x) b2) = a1 b1 (x) a2 b2 in the tensor-square algebra."""
    grp = datum.group
    ident = datum.identity
    acc: dict = {}
    for (v1, h1, v2, h2), cb in b.items():
        _, chi1 = datum.word_weight(v1)
        _, chi2 = datum.word_weight(v2)
        for (w1, g1, w2, g2), ca in a.items():
            c = ca * cb
            k = 0
            if v1 and g1 != ident:
                k += datum.pairing(chi1, g1)
            if v2 and g2 != ident:
                k += datum.pairing(chi2, g2)
            if k:
                c = c.mul_zeta(k)
            _add_into(acc, (w1 + v1, grp.mul(g1, h1), w2 + v2, grp.mul(g2, h2)), c)
    return acc


def letter_coproduct(datum: YDDatum, letter: str) -> dict:
    """Delta(x_i) = x_i (x) 1 + g_i (x) x_i."""
    e = datum.identity
    one = CycNumber.one(datum.order)
    return {(letter, e, "", e): one, ("", datum.letter_g(letter), letter, e): one}


def group_coproduct(datum: YDDatum, g: GroupElement) -> dict:
    return {("", g, "", g): CycNumber.one(datum.order)}


def coproduct(a: SmashElement) -> TensorElement:
    """Coproduct of the bosonization, expanded in the free algebra (no reduction)."""
    d = a.datum
    acc: dict = {}
    cache: dict[Word, dict] = {}
    for (w, g), c in a.terms.items():
        dw = _word_coproduct(d, w, cache)
        for k, v in tensor_product_terms(d, dw, group_coproduct(d, g)).items():
            _add_into(acc, k, v * c)
    return TensorElement._wrap(d, acc)


def _word_coproduct(d: YDDatum, w: Word, cache: dict) -> dict:
    if w in cache:
        return cache[w]
    if not w:
        e = d.identity
        out = {("", e, "", e): CycNumber.one(d.order)}
    else:
        out = tensor_product_terms(d, _word_coproduct(d, w[:-1], cache), letter_coproduct(d, w[-1]))
    cache[w] = out
    return out


def antipode(a: SmashElement) -> SmashElement:
    """S(g) = g^-1, S(x_i) = -g_i^-1 x_i, extended as an anti-algebra map."""
    d = a.datum
    grp = d.group
    acc: dict = {}
    minus_one = CycNumber.rational(d.order, -1)
    letter_s = {
        l: {("", grp.inv(d.letter_g(l))): CycNumber.one(d.order)}
        for l in d.letters()
    }
    for l in d.letters():
        letter_s[l] = smash_product_terms(d, letter_s[l], {(l, d.identity): minus_one})
    for (w, g), c in a.terms.items():
        img = {("", grp.inv(g)): c}
        for l in reversed(w):
            img = smash_product_terms(d, img, letter_s[l])
        # S(w g) = S(g) S(w) = g^-1 S(x_k) ... S(x_1)
        for k, v in img.items():
            _add_into(acc, k, v)
    return SmashElement._wrap(d, acc)


def q_bracket(a: SmashElement, b: SmashElement, q) -> SmashElement:
    """Braided commutator a b - q b a."""
    return a * b - (b * a).scale(q)


def root_vectors(datum: YDDatum, i: int = 1, j: int = 2) -> dict[str, SmashElement]:
    """Iterated brackets in two letters with the usual braiding coefficients.

    Keys use the index pattern of the letters, e.g. "12", "112", "1112", "122",
    "1,122" for i=1, j=2.
    """
    q = datum.q
    xi = SmashElement.letter(datum, i)
    xj = SmashElement.letter(datum, j)
    x_ij = q_bracket(xi, xj, q(i, j))
    x_iij = q_bracket(xi, x_ij, q(i, i) * q(i, j))
    x_iiij = q_bracket(xi, x_iij, q(i, i) ** 2 * q(i, j))
    x_ijj = q_bracket(x_ij, xj, q(i, j) * q(j, j))
    x_i_ijj = q_bracket(xi, x_ijj, q(i, i) * q(i, j) ** 2)
    a, b = str(i), str(j)
    return {
        a + b: x_ij,
        a + a + b: x_iij,
        a + a + a + b: x_iiij,
        a + b + b: x_ijj,
        f"{a},{a}{b}{b}": x_i_ijj,
    }


# printing -------------------------------------------------------------------

def format_group(g: GroupElement) -> str:
    return "g(" + ",".join(str(x) for x in g) + ")"


def format_basis(word: Word, g: GroupElement, datum: YDDatum) -> str:
    parts = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        run = j - i
        parts.append(f"x{word[i]}" + (f"^{run}" if run > 1 else ""))
        i = j
    if g != datum.identity:
        parts.append(format_group(g))
    return "*".join(parts) if parts else "1"


def _format_sum(items: Iterable[tuple[str, CycNumber]]) -> str:
    out = []
    for mono, c in items:
        lit = c.to_literal()
        if mono == "1":
            body = lit if " " not in lit else f"({lit})"
            out.append(body)
        elif lit == "1":
            out.append(mono)
        elif lit == "-1":
            out.append("-" + mono)
        elif " " in lit or "/" in lit:
            out.append(f"({lit})*{mono}")
        else:
            out.append(f"{lit}*{mono}")
    if not out:
        return "0"
    text = out[0]
    for piece in out[1:]:
        text += " - " + piece[1:] if piece.startswith("-") else " + " + piece
    return text


def format_element(a: SmashElement, order=None) -> str:
    keys = sorted(a.terms, key=lambda k: ((order.key(k[0]) if order else (len(k[0]), k[0])), k[1]), reverse=True)
    return _format_sum((format_basis(w, g, a.datum), a.terms[(w, g)]) for w, g in keys)


def format_tensor(t: TensorElement) -> str:
    keys = sorted(t.terms, key=lambda k: (len(k[0]), k[0], k[1], len(k[2]), k[2], k[3]), reverse=True)
    pieces = []
    for k in keys:
        w1, g1, w2, g2 = k
        pieces.append(
            (f"{format_basis(w1, g1, t.datum)} (x) {format_basis(w2, g2, t.datum)}", t.terms[k])
        )
    return _format_sum(pieces)
