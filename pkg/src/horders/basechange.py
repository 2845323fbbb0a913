"""Unramified base change of block-order invariants and its inverse.

Over the maximal unramified local extension the coefficient division
algebra splits; each block size is multiplied by the residue degree s
and the whole tuple is repeated t times, where (s, t) are the declared
residue parameters.  The explicit index permutation that conjugates the
tensored valuation pattern onto the target block pattern is available as
a witness and can be verified by brute force at desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotDivisible, NotPeriodic, SizeLimit
from .orders import (
    BlockOrder,
    DivisionSpec,
    SemisimpleOrder,
    Signature,
    cyclic_normal_form,
    pattern_of,
    radical_pattern,
    ss_iso_decide,
)
from .scalars import BASE


@dataclass(frozen=True)
class ShResult:
    """A block order over the split coefficient ring, plus the index
    permutation witnessing the pattern identification."""

    order: BlockOrder
    perm: tuple[int, ...] | None = None


def sh_signature(sig: Signature, s: int, t: int) -> Signature:
    """Concatenate t copies of the s-scaled signature."""
    scaled = tuple(s * p for p in sig.parts)
    return Signature(scaled * t)


def descend_signature(m: tuple[int, ...] | Signature, s: int, t: int) -> Signature:
    """Invert :func:`sh_signature` on a cyclic class.

    The input must be, up to rotation, t repetitions of a block of
    length len(m)/t, with every part divisible by s.  The result is
    returned in canonical (least-rotation) form.  Note the de-facto
    length of the descended tuple is len(m)/t, not len(m); the inverse
    is read as de-concatenation followed by division by s.
    """
    parts = m.parts if isinstance(m, Signature) else tuple(m)
    if any(p % s for p in parts):
        raise NotDivisible(f"parts {parts} are not all divisible by s={s}")
    u = len(parts)
    if u % t:
        raise NotPeriodic(f"length {u} is not divisible by t={t}")
    r = u // t
    if any(parts[i] != parts[(i + r) % u] for i in range(u)):
        raise NotPeriodic(f"{parts} is not {t}-periodic up to rotation")
    return Signature(cyclic_normal_form(p // s for p in parts[:r]))


def sh_permutation(s: int, t: int, sig: Signature) -> tuple[int, ...]:
    """Index permutation of {0, ..., s*t*n - 1} mapping the tensor layout
    (inner position i, unramified copy j, matrix position k) to the
    block layout (i, k, j); returned as image[index]."""
    n = sig.n
    perm = [0] * (s * t * n)
    for k in range(n):
        for j in range(t):
            for i in range(s):
                perm[i + s * j + s * t * k] = i + s * k + s * n * j
    return tuple(perm)


def verify_sh_pattern(s: int, t: int, sig: Signature) -> bool:
    """Brute-force check that conjugating the tensored pattern by the
    index permutation yields the pattern of the base-changed signature."""
    n = sig.n
    big = s * t * n
    if big > 64:
        raise SizeLimit(f"size {big} exceeds the brute-force bound 64")
    inner = Signature((s,) * t)
    cell_order = pattern_of(inner).entries
    cell_radical = radical_pattern(inner).entries
    base = pattern_of(sig).entries
    st = s * t

    tensored = [[0] * big for _ in range(big)]
    for k in range(n):
        for l in range(n):
            cell = cell_radical if base[k][l] else cell_order
            for a in range(st):
                for b in range(st):
                    tensored[k * st + a][l * st + b] = cell[a][b]

    perm = sh_permutation(s, t, sig)
    conjugated = [[0] * big for _ in range(big)]
    for x in range(big):
        px = perm[x]
        for y in range(big):
            conjugated[px][perm[y]] = tensored[x][y]

    target = pattern_of(sh_signature(sig, s, t)).entries
    return all(tuple(row) == trow for row, trow in zip(conjugated, target))


def sh_order(order: BlockOrder) -> ShResult:
    """Base-change a block order; the result lives over a split division
    datum (base scalars, s = t = 1) labelled after the input."""
    d = order.division
    split = DivisionSpec(d.label + "_sh", BASE, 1, 1)
    return ShResult(
        order=BlockOrder(split, sh_signature(order.sig, d.s, d.t)),
        perm=sh_permutation(d.s, d.t, order.sig),
    )


_SPLIT = DivisionSpec("_split", BASE, 1, 1)


def becomes_iso_after_sh(a: SemisimpleOrder, b: SemisimpleOrder) -> bool:
    """Do the two products become isomorphic after unramified base change?

    Every in-scope division datum splits after the base change, so the
    base-changed components all live over one and the same coefficient
    ring and are matched by signature alone.
    """
    def pushed(ss: SemisimpleOrder) -> SemisimpleOrder:
        return SemisimpleOrder(tuple(
            BlockOrder(_SPLIT, sh_signature(c.sig, c.division.s, c.division.t))
            for c in ss.components))

    return ss_iso_decide(pushed(a), pushed(b))
