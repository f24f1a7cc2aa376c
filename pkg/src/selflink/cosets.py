"""Arithmetic and canonicalization in the coset-class rings.

Five flavors of context are supported, all additive groups on canonical
class keys:

  plain      the full integer group ring, one class per element
  reduced    classes {g, g^-1}, trivial class dropped
  coset      double cosets by powers of gamma on both sides, inversion,
             trivial orbit dropped
  two_sided  cosets gamma^n g delta^m, no inversion, nothing dropped
  conjugacy  conjugacy classes modulo inversion, trivial class dropped

Keys are canonicalized to the shortlex-least element of the orbit, so
class equality is word equality.  Elements serialize as signed
integer-coefficient sums of class representatives in shortlex order,
e.g. ``+1*[x] -1*[x y]``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache

from . import groups as G
from .errors import NotInCentralizer, ParseError, SpecMismatch

PLAIN = "plain"
REDUCED = "reduced"
COSET = "coset"
TWO_SIDED = "two_sided"
CONJUGACY = "conjugacy"

_TERM_RE = re.compile(r"([+-]\d+)\*\[([^\]]*)\]")
_TERM_RE_LENIENT = re.compile(r"([+-]?\d*)\s*\*?\s*\[([^\]]*)\]")


@dataclass(frozen=True)
class RingContext:
    spec: G.GroupSpec = field(repr=False)
    flavor: str
    gamma: G.GroupElement | None = None
    delta: G.GroupElement | None = None

    def describe(self) -> str:
        if self.flavor == COSET:
            return f"coset[{G.format_word(self.gamma)}]"
        if self.flavor == TWO_SIDED:
            return f"two_sided[{G.format_word(self.gamma)}; {G.format_word(self.delta)}]"
        return self.flavor


def plain_ring(spec: G.GroupSpec) -> RingContext:
    return RingContext(spec, PLAIN)


def reduced_ring(spec: G.GroupSpec) -> RingContext:
    return RingContext(spec, REDUCED)


def coset_ring(spec: G.GroupSpec, gamma: G.GroupElement) -> RingContext:
    """Relative context for a class gamma; gamma = 1 degenerates to reduced."""
    if gamma.spec != spec:
        raise SpecMismatch("gamma belongs to a different spec")
    if G.is_identity(gamma):
        return reduced_ring(spec)
    return RingContext(spec, COSET, gamma)


def two_sided_ring(spec: G.GroupSpec, gamma: G.GroupElement, delta: G.GroupElement) -> RingContext:
    if gamma.spec != spec or delta.spec != spec:
        raise SpecMismatch("gamma/delta belong to a different spec")
    if G.is_identity(gamma) and G.is_identity(delta):
        return plain_ring(spec)
    return RingContext(spec, TWO_SIDED, gamma, delta)


def conjugacy_ring(spec: G.GroupSpec) -> RingContext:
    return RingContext(spec, CONJUGACY)


@dataclass(frozen=True)
class CosetKey:
    representative: G.GroupElement
    context: RingContext = field(repr=False)

    def __repr__(self):
        return f"[{G.format_word(self.representative)}]"


# ---------------------------------------------------------------------------
# canonicalization


def _power_table(elem: G.GroupElement, bound: int):
    table = {0: G.identity(elem.spec)}
    for n in range(1, bound + 1):
        table[n] = G.multiply(table[n - 1], elem)
        table[-n] = G.invert(table[n])
    return table


def _orbit_min(spec, candidates, left, right):
    """Shortlex-least element of {left^n c right^m} by iterative tightening.

    The search bound per side is ceil((|g| + |best|)/|side|) + 2, widened by
    the other side's length for abelian two-sided orbits where the two
    translation directions can nearly cancel.  Validated against a
    brute-force BFS oracle in the test suite.
    """
    use_left = left is not None and not G.is_identity(left)
    use_right = right is not None and not G.is_identity(right)
    best = G.shortlex_min(candidates)
    if not (use_left or use_right):
        return best
    glen = max(c.length() for c in candidates)
    if (use_left and use_right and left == right
            and all(G.commutes(left, c) for c in candidates)):
        # left^n c right^m = c left^(n+m): a single exponent suffices
        bound = (glen + best.length()) // left.length() + 3
        table = _power_table(left, 2 * bound)
        for c in candidates:
            for j in range(-2 * bound, 2 * bound + 1):
                cand = G.multiply(c, table[j])
                if G.shortlex_key(cand) < G.shortlex_key(best):
                    best = cand
        return best
    # greedy descent seeds a near-minimal best, shrinking the exact bounds
    moves = []
    if use_left:
        moves += [(left, True), (G.invert(left), True)]
    if use_right:
        moves += [(right, False), (G.invert(right), False)]
    for c in candidates:
        cur, key_cur = c, G.shortlex_key(c)
        improved = True
        while improved:
            improved = False
            for t, on_left in moves:
                nxt = G.multiply(t, cur) if on_left else G.multiply(cur, t)
                k = G.shortlex_key(nxt)
                if k < key_cur:
                    cur, key_cur, improved = nxt, k, True
        if key_cur < G.shortlex_key(best):
            best = cur
    abelian_pad = 1
    if spec.kind == G.FREE_ABELIAN and use_left and use_right and left != right:
        abelian_pad = max(1, left.length(), right.length())
    seen_bounds = None
    while True:
        bl = ((glen + best.length()) // left.length() + 3) * abelian_pad if use_left else 0
        br = ((glen + best.length()) // right.length() + 3) * abelian_pad if use_right else 0
        if seen_bounds == (bl, br):
            return best
        seen_bounds = (bl, br)
        lp = _power_table(left, bl) if use_left else {0: G.identity(spec)}
        rp = _power_table(right, br) if use_right else {0: G.identity(spec)}
        key_best = G.shortlex_key(best)
        # in free-type specs the power blocks cannot annihilate each other
        # through a candidate outside <gamma>, capping |n| + |m| jointly
        combined = None
        if (spec.kind in (G.FREE, G.FREE_PRODUCT) and use_left and use_right
                and left == right):
            combined = (glen + best.length()) // left.length() + 4
        for n in range(-bl, bl + 1):
            for c in candidates:
                lc = G.multiply(lp[n], c)
                for m in range(-br, br + 1):
                    if combined is not None and abs(n) + abs(m) > combined:
                        continue
                    cand = G.multiply(lc, rp[m])
                    if cand.length() > key_best[0]:
                        continue
                    k = G.shortlex_key(cand)
                    if k < key_best:
                        best, key_best = cand, k


def _cyclic_core(spec, g):
    """Conjugacy-minimal core of g: g is conjugate to the returned element."""
    if spec.kind == G.FREE:
        _, core = G._cyclic_reduce_letters(g.letters)
        return G.make_element(spec, core)
    if spec.kind == G.FREE_ABELIAN:
        return g
    if spec.kind == G.FREE_TIMES_Z:
        free_part, c = G._ftz_split(spec, g)
        letters = G.make_element(spec, free_part).letters
        _, core = G._cyclic_reduce_letters(letters)
        sylls = list(core) + ([(spec.central_index, c)] if c else [])
        return G.make_element(spec, sylls)
    _, runs = G._cyclic_reduce_runs(spec, g)
    return G.make_element(spec, [s for _, run in runs for s in run])


def _conjugacy_min(spec, g):
    best = None
    for cand in (g, G.invert(g)):
        core = _cyclic_core(spec, cand)
        letters = list(core.letters)
        if not letters:
            return core
        for r in range(len(letters)):
            rot = G.make_element(spec, letters[r:] + letters[:r])
            if best is None or G.shortlex_key(rot) < G.shortlex_key(best):
                best = rot
    return best


def canonicalize(ctx: RingContext, g: G.GroupElement) -> CosetKey | None:
    """Canonical key of g's class, or None for the dropped zero class."""
    if g.spec != ctx.spec:
        raise SpecMismatch("element belongs to a different spec")
    return _canonicalize_cached(ctx, g)


@lru_cache(maxsize=1 << 18)
def _canonicalize_cached(ctx: RingContext, g: G.GroupElement) -> CosetKey | None:
    if ctx.flavor == PLAIN:
        return CosetKey(g, ctx)
    if ctx.flavor == REDUCED:
        if G.is_identity(g):
            return None
        return CosetKey(G.shortlex_min([g, G.invert(g)]), ctx)
    if ctx.flavor == CONJUGACY:
        if G.is_identity(g):
            return None
        return CosetKey(_conjugacy_min(ctx.spec, g), ctx)
    if ctx.flavor == COSET:
        rep = _orbit_min(ctx.spec, [g, G.invert(g)], ctx.gamma, ctx.gamma)
        if G.is_identity(rep):
            return None
        return CosetKey(rep, ctx)
    rep = _orbit_min(ctx.spec, [g], ctx.gamma, ctx.delta)
    return CosetKey(rep, ctx)


# ---------------------------------------------------------------------------
# ring elements


@dataclass(frozen=True)
class RingElement:
    context: RingContext = field(repr=False)
    terms: tuple[tuple[CosetKey, int], ...]

    def __repr__(self):
        return f"<{format_ring(self)}>"

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        return add(self, other)

    def __neg__(self):
        return negate(self)

    def __sub__(self, other):
        return add(self, negate(other))

    def coefficient(self, key: CosetKey) -> int:
        for k, c in self.terms:
            if k == key:
                return c
        return 0

    def support(self) -> list[CosetKey]:
        return [k for k, _ in self.terms]


def _sorted_terms(acc):
    terms = [(k, c) for k, c in acc.items() if c]
    terms.sort(key=lambda kc: G.shortlex_key(kc[0].representative))
    return tuple(terms)


def zero(ctx: RingContext) -> RingElement:
    return RingElement(ctx, ())


def from_terms(ctx: RingContext, pairs) -> RingElement:
    """Build an element from (group element or key, coefficient) pairs."""
    acc: dict[CosetKey, int] = {}
    for g, c in pairs:
        key = g if isinstance(g, CosetKey) else canonicalize(ctx, g)
        if key is None:
            continue
        if key.context != ctx:
            raise SpecMismatch("key belongs to a different context")
        acc[key] = acc.get(key, 0) + c
    return RingElement(ctx, _sorted_terms(acc))


def single(ctx: RingContext, g: G.GroupElement, coeff: int = 1) -> RingElement:
    return from_terms(ctx, [(g, coeff)])


def _check_ctx(a: RingElement, b: RingElement):
    if a.context != b.context:
        raise SpecMismatch("ring elements belong to different contexts")


def add(a: RingElement, b: RingElement) -> RingElement:
    _check_ctx(a, b)
    acc = dict(a.terms)
    for k, c in b.terms:
        acc[k] = acc.get(k, 0) + c
    return RingElement(a.context, _sorted_terms(acc))


def negate(a: RingElement) -> RingElement:
    return RingElement(a.context, tuple((k, -c) for k, c in a.terms))


def scale(n: int, a: RingElement) -> RingElement:
    if n == 0:
        return zero(a.context)
    return RingElement(a.context, tuple((k, n * c) for k, c in a.terms))


def conj_act(phi: G.GroupElement, y: RingElement) -> RingElement:
    """Termwise conjugation y -> phi y phi^-1.

    For coset contexts phi must centralize gamma, else the result would
    land in a different context.
    """
    ctx = y.context
    if phi.spec != ctx.spec:
        raise SpecMismatch("conjugator belongs to a different spec")
    if ctx.flavor == TWO_SIDED:
        raise SpecMismatch("two-sided contexts use biact, not conj_act")
    if ctx.flavor == COSET and not G.commutes(phi, ctx.gamma):
        raise NotInCentralizer(f"{G.format_word(phi)} does not centralize {G.format_word(ctx.gamma)}")
    return from_terms(ctx, [(G.conjugate(k.representative, phi), c) for k, c in y.terms])


def biact(phi: G.GroupElement, psi: G.GroupElement, y: RingElement) -> RingElement:
    """Termwise two-sided action y -> phi y psi^-1 on a two_sided context."""
    ctx = y.context
    if ctx.flavor not in (TWO_SIDED, PLAIN):
        raise SpecMismatch("biact needs a two-sided (or plain) context")
    if phi.spec != ctx.spec or psi.spec != ctx.spec:
        raise SpecMismatch("actor belongs to a different spec")
    gamma = ctx.gamma if ctx.flavor == TWO_SIDED else G.identity(ctx.spec)
    delta = ctx.delta if ctx.flavor == TWO_SIDED else G.identity(ctx.spec)
    if not G.commutes(phi, gamma):
        raise NotInCentralizer(f"{G.format_word(phi)} does not centralize {G.format_word(gamma)}")
    if not G.commutes(psi, delta):
        raise NotInCentralizer(f"{G.format_word(psi)} does not centralize {G.format_word(delta)}")
    psi_inv = G.invert(psi)
    return from_terms(ctx, [(G.multiply(G.multiply(phi, k.representative), psi_inv), c)
                            for k, c in y.terms])


def project_pi(y: RingElement) -> RingElement:
    """Quotient map from the reduced ring to conjugacy classes mod inversion."""
    if y.context.flavor != REDUCED:
        raise SpecMismatch("project_pi expects a reduced-ring element")
    ctx = conjugacy_ring(y.context.spec)
    return from_terms(ctx, [(k.representative, c) for k, c in y.terms])


# ---------------------------------------------------------------------------
# serialization


def format_ring(y: RingElement) -> str:
    if not y.terms:
        return "0"
    return " ".join(f"{c:+d}*[{G.format_word(k.representative)}]" for k, c in y.terms)


def parse_ring(ctx: RingContext, text: str, strict_sign: bool = False) -> RingElement:
    """Parse `+1*[x] -1*[x y]` (or `0`).  The lenient default also accepts
    unsigned or coefficient-free terms like `2*[x]` and `[x]`; strict_sign
    requires every coefficient to be explicitly signed."""
    text = text.strip()
    if text == "0":
        return zero(ctx)
    pat = _TERM_RE if strict_sign else _TERM_RE_LENIENT
    pairs = []
    consumed = 0
    for m in pat.finditer(text):
        consumed += len(re.sub(r"\s", "", m.group(0)))
        raw = m.group(1)
        coeff = int(raw) if raw.strip("+-") else int(raw + "1")
        word = m.group(2).strip()
        g = G.identity(ctx.spec) if word == "1" else G.parse_word(ctx.spec, word)
        pairs.append((g, coeff))
    if consumed != len(re.sub(r"\s", "", text)):
        raise ParseError(f"cannot parse ring element {text!r}")
    return from_terms(ctx, pairs)
