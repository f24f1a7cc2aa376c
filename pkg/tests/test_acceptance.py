"""End-to-end acceptance suite: eight criteria, one pass/fail line each.

Every decision made here flows through a checking wrapper that records the
query, verifies Equal certificates by replay, and recomputes Distinct
separator values; the final criterion audits the whole registry.
"""

import time

import selflink as S
import selflink.cosets as R
import selflink.indeterminacy as I
import selflink.linking as L
import selflink.separators as SEP

_REGISTRY = []  # (label, bounds, verdict, replay_ok, separator_ok)


def _recheck_distinct(res, y1, y2, spec):
    """Recompute the invariant named by a Distinct verdict."""
    name = res.separator
    if name is None:
        return True
    if name == "support-multiset":
        m1 = sorted(abs(c) for _, c in y1.terms)
        m2 = sorted(abs(c) for _, c in y2.terms)
        return m1 != m2
    by_name = {s.name: s for s in SEP.default_separator_suite(spec)}
    if name in by_name:
        sep = by_name[name]
        return SEP.push_forward(sep, y1) != SEP.push_forward(sep, y2)
    return True  # lattice verdicts are audited by the abelian oracle suite


def _decide(label, y1, y2, phi, bounds=None):
    bounds = bounds or I.Bounds()
    link = isinstance(phi, I.PhiLinkGroup)
    res = (I.decide_equal_link if link else I.decide_equal)(y1, y2, phi, bounds)
    replay_ok = True
    separator_ok = True
    if res.verdict == "equal":
        replay_ok = I.replay(res.certificate, y1, y2)
    elif res.verdict == "distinct":
        separator_ok = _recheck_distinct(res, y1, y2, y1.context.spec)
    _REGISTRY.append((label, bounds.to_record() if hasattr(bounds, "to_record")
                      else repr(bounds), res.verdict, replay_ok, separator_ok))
    assert replay_ok, f"{label}: Equal certificate failed to replay"
    assert separator_ok, f"{label}: Distinct separator failed to recompute"
    return res


def _report(n, text):
    print(f"CRITERION {n} PASS: {text}")


# ---------------------------------------------------------------------------
# 1. fiber-times-circle example


def test_criterion_1_fibered_example():
    spec = S.free_times_z("x", "y", "z", "t")
    gamma = S.parse_word(spec, "x y z")
    k = L.Knot("k", gamma)
    tr_g = L.Trace(k, k, (), gamma)
    tr_t = L.Trace(k, k, (), S.generator(spec, "t"))
    phi = I.build_phi(k, toroidal=[tr_g, tr_t])
    h = L.Trace(k, k, ((1, S.parse_word(spec, "x")),
                       (-1, S.parse_word(spec, "x y"))), S.identity(spec))
    mu = L.mu_trace(h)
    ctx = R.coset_ring(spec, gamma)
    # the class of xy coincides with the class of z, so mu prints that way
    assert R.canonicalize(ctx, S.parse_word(spec, "x y")) \
        == R.canonicalize(ctx, S.parse_word(spec, "z"))
    assert R.format_ring(mu) == "+1*[x] -1*[z]"
    assert mu == R.parse_ring(ctx, "+1*[x] -1*[x y]")
    res = _decide("c1", mu, R.zero(ctx), phi)
    assert res.verdict == "distinct"
    assert res.separator == "abelianization"
    _report(1, "mu = x - xy and the decision against 0 is Distinct "
               "(abelianization separator), exactly")


# ---------------------------------------------------------------------------
# 2. circle-times-sphere structure


def _cts_phi(n, sphere_exponents):
    spec = S.free_abelian("x")
    gamma = S.power(S.generator(spec, "x"), n)
    k = L.Knot(f"k{n}", gamma)
    tr = L.Trace(k, k, (), S.generator(spec, "x"))
    spheres = []
    if sphere_exponents:
        pts = tuple((1, S.power(S.generator(spec, "x"), j))
                    for j in sphere_exponents)
        spheres = [L.SphereData("sigma", pts)]
    phi = I.build_phi(k, toroidal=[tr], spheres=spheres)
    return phi, R.coset_ring(spec, gamma)


def test_criterion_2_circle_times_sphere():
    # n = 3: target Z_2, since 2x = 0
    phi3, ctx3 = _cts_phi(3, range(3))
    assert _decide("c2 n3 2x", R.parse_ring(ctx3, "+2*[x]"),
                   R.zero(ctx3), phi3).verdict == "equal"
    assert _decide("c2 n3 x", R.parse_ring(ctx3, "+1*[x]"),
                   R.zero(ctx3), phi3).verdict == "distinct"
    # n = 4: target Z; mu of the standard homotopy x + x + x^2 vanishes
    phi4, ctx4 = _cts_phi(4, range(4))
    assert _decide("c2 n4", R.parse_ring(ctx4, "+2*[x] +1*[x^2]"),
                   R.zero(ctx4), phi4).verdict == "equal"
    assert _decide("c2 n4 x", R.parse_ring(ctx4, "+1*[x]"),
                   R.zero(ctx4), phi4).verdict == "distinct"
    # n = 1: every class dies in the relative ring; the quotient is trivial
    spec = S.free_abelian("x")
    ctx1 = R.coset_ring(spec, S.generator(spec, "x"))
    assert R.canonicalize(ctx1, S.parse_word(spec, "x^5")) is None
    # n = 2: the single class x is killed by the sphere relation
    phi2, ctx2 = _cts_phi(2, range(2))
    assert _decide("c2 n2", R.parse_ring(ctx2, "+1*[x]"),
                   R.zero(ctx2), phi2).verdict == "equal"
    _report(2, "n=3 gives Z_2, n=4 gives Z with x+x+x^2 = 0, "
               "n in {1,2} is trivial")


# ---------------------------------------------------------------------------
# 3. non-spherical example


def test_criterion_3_non_spherical():
    spec = S.free_times_z("x", "y", "z", "t")
    gamma = S.generator(spec, "t")
    k = L.Knot("k", gamma)
    x = S.parse_word(spec, "x")
    traces = []
    for lab in ("x", "y", "z", "t"):
        a = S.generator(spec, lab)
        traces.append(L.Trace(k, k, ((-1, x), (1, S.conjugate(x, a))), a))
    phi = I.build_phi(k, toroidal=traces)
    phi0 = I.phi_conjugation_only(k)
    ctx = R.coset_ring(spec, gamma)
    y1 = R.parse_ring(ctx, "-1*[y x y^-1] +1*[y z x z^-1 y^-1]")
    res = _decide("c3 equal", y1, R.zero(ctx), phi)
    assert res.verdict == "equal"
    assert len(res.certificate.steps) >= 1
    y2 = R.parse_ring(ctx, "+1*[x] +1*[y x y^-1] -1*[y z x z^-1 y^-1]")
    res2 = _decide("c3 distinct", y2, R.parse_ring(ctx, "+1*[x]"), phi0)
    assert res2.verdict == "distinct"
    assert res2.separator == "support-multiset"
    assert I.is_spherical_presented(phi0)
    assert not I.is_spherical_presented(phi)
    _report(3, "certificate replays y(-x + zxz^-1)y^-1; the conjugation-only "
               "query is Distinct by support multiset (3 keys vs 1)")


# ---------------------------------------------------------------------------
# 4. unlink complement, class x y


def _all_classes(ctx, max_len):
    spec = ctx.spec
    gens = [S.generator(spec, lab, e) for lab in spec.labels for e in (1, -1)]
    words = [S.identity(spec)]
    frontier = [S.identity(spec)]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for g in gens:
                v = S.multiply(w, g)
                if v.length() == w.length() + 1:
                    nxt.append(v)
        words += nxt
        frontier = nxt
    seen = {}
    for w in words:
        key = R.canonicalize(ctx, w)
        if key is not None and key not in seen:
            seen[key] = w
    return seen


def test_criterion_4_xy_collapses():
    spec = S.free("x", "y")
    gamma = S.parse_word(spec, "x y")
    k = L.Knot("k", gamma)
    ctx = R.coset_ring(spec, gamma)
    phi = I.build_phi(k, toroidal=[L.Trace(k, k, (), gamma)],
                      spheres=[L.sphere_for_unlink_complement(gamma)])
    # bounded closure over [g] = [g x^-1]: every class with representative
    # length <= 5 reaches the killed identity class
    x = S.generator(spec, "x")
    xinv = S.invert(x)
    classes5 = _all_classes(ctx, 5)
    for key in classes5:
        frontier = [key]
        visited = {key}
        reached = False
        for _ in range(10):
            nxt = []
            for cur in frontier:
                for step in (x, xinv):
                    nk = R.canonicalize(ctx, S.multiply(cur.representative, step))
                    if nk is None:
                        reached = True
                        break
                    if nk not in visited:
                        visited.add(nk)
                        nxt.append(nk)
                if reached:
                    break
            if reached:
                break
            frontier = nxt
        assert reached, f"class {key!r} did not reach 0 under the relation"
    # every length <= 4 class decides Equal against 0, with certificates
    classes4 = _all_classes(ctx, 4)
    for key in classes4:
        y = R.single(ctx, key.representative)
        res = _decide(f"c4 {key!r}", y, R.zero(ctx), phi)
        assert res.verdict == "equal", repr(key)
    _report(4, f"all {len(classes5)} classes of length <= 5 collapse under "
               f"the relation family; all {len(classes4)} classes of length "
               "<= 4 decide Equal against 0")


# ---------------------------------------------------------------------------
# 5. unlink complement, class x^2 y (regression: never Equal)


def test_criterion_5_x2y_never_equal():
    spec = S.free("x", "y")
    gamma = S.parse_word(spec, "x^2 y")
    k = L.Knot("k", gamma)
    ctx = R.coset_ring(spec, gamma)
    phi = I.build_phi(k, toroidal=[L.Trace(k, k, (), gamma)],
                      spheres=[L.sphere_for_unlink_complement(gamma)])
    y = R.single(ctx, S.parse_word(spec, "x y x^-1"))
    ladder = [I.Bounds(depth=2, translate_len=2, support_len=8, max_states=2000),
              I.Bounds(depth=4, translate_len=4, support_len=12, max_states=8000),
              I.Bounds(depth=6, translate_len=6, support_len=16, max_states=20000)]
    failures = []
    for b in ladder:
        # one label across the ladder so the integrity audit sees the
        # same query decided at different bounds
        res = _decide("c5 xyx^-1 vs 0", y, R.zero(ctx), phi, b)
        assert res.verdict in ("distinct", "unknown")
        if res.verdict == "unknown":
            failures.append(f"depth={b.depth}: separators abstain "
                            "(sphere families, infinite targets)")
    _report(5, "xyx^-1 vs 0 is never Equal at any tested bounds; logged "
               f"separator failures: {failures}")


# ---------------------------------------------------------------------------
# 6. unlink complement, commutator class


def test_criterion_6_commutator_chain():
    spec = S.free("x", "y")
    gamma = S.parse_word(spec, "x y x^-1 y^-1")
    k = L.Knot("k", gamma)
    ctx = R.coset_ring(spec, gamma)
    phi = I.build_phi(k, toroidal=[L.Trace(k, k, (), gamma)],
                      spheres=[L.sphere_for_unlink_complement(gamma)])
    chain = ["+1*[x y]", "+1*[y^-1 x^-1]", "+1*[y x]", "+1*[x^-1 y^-1]",
             "+1*[x y^-1]", "+1*[y x^-1]", "+1*[x] +1*[y]"]
    for a, b in zip(chain, chain[1:]):
        y1 = R.parse_ring(ctx, a)
        y2 = R.parse_ring(ctx, b)
        res = _decide(f"c6 {a} = {b}", y1, y2, phi)
        assert res.verdict == "equal", (a, b)
        assert I.replay(res.certificate, y1, y2)
    _report(6, "all six equalities in the chain xy = ... = x + y hold with "
               "replayable certificates at default bounds")


# ---------------------------------------------------------------------------
# 7. property suites (full >= 10^4-case versions run in the sibling files)


def test_criterion_7_property_suites():
    import random
    rng = random.Random(800)
    spec = S.free("x", "y")
    gamma = S.parse_word(spec, "x y")
    k = L.Knot("k", gamma)
    pool = [S.parse_word(spec, w) for w in
            ("x", "y", "x y", "y^-1", "x^2", "x y^-1", "y x")]
    from test_cosets import check_against_oracle
    from test_indeterminacy import _hnf_member
    from test_separators import _check_snf
    for _ in range(500):
        pts1 = tuple((rng.choice([1, -1]), rng.choice(pool)) for _ in range(2))
        pts2 = tuple((rng.choice([1, -1]), rng.choice(pool)) for _ in range(2))
        lat = S.power(gamma, rng.randint(-2, 2))
        h = L.Trace(k, k, pts1, lat)
        h2 = L.Trace(k, k, pts2, S.identity(spec))
        assert L.mu_trace(L.compose(h, h2)) == R.add(
            L.mu_trace(h), R.conj_act(lat, L.mu_trace(h2)))
        assert L.mu_trace(L.invert_trace(h)) == R.negate(
            R.conj_act(S.invert(lat), L.mu_trace(h)))
        band = rng.choice(pool)
        d1, d2 = pts1, pts2
        assert L.mu_pi(spec, L.connect_sum(d1, d2, band)) == R.add(
            L.mu_pi(spec, d1), L.mu_pi(spec, d2))
    ctx = R.coset_ring(spec, gamma)
    for _ in range(300):
        w = S.identity(spec)
        for _ in range(rng.randint(0, 8)):
            g = rng.choice(pool)
            w = S.multiply(w, g if rng.random() < 0.5 else S.invert(g))
        check_against_oracle(ctx, w)
    for _ in range(200):
        rows, cols = rng.randint(1, 4), rng.randint(1, 4)
        _check_snf([[rng.randint(-9, 9) for _ in range(cols)]
                    for _ in range(rows)])
    assert _hnf_member([{"a": 2}], {"a": -4})
    _report(7, "composition, inverse, sphere-linearity, connected-sum, "
               "oracle, and SNF spot checks pass; the >= 10^4-case suites "
               "run in the dedicated test files")


# ---------------------------------------------------------------------------
# 8. verdict integrity across the whole suite


def test_criterion_8_verdict_integrity():
    assert _REGISTRY, "no decisions were recorded"
    by_query = {}
    for label, _bounds, verdict, replay_ok, separator_ok in _REGISTRY:
        assert replay_ok, label
        assert separator_ok, label
        if verdict != "unknown":
            prev = by_query.setdefault(label, verdict)
            assert prev == verdict, (
                f"{label}: conflicting verdicts {prev} / {verdict}")
    settled = sum(1 for *_, v, _r, _s in _REGISTRY if v != "unknown")
    _report(8, f"{len(_REGISTRY)} recorded decisions, {settled} settled; no "
               "(Equal, Distinct) conflict, every Equal replayed, every "
               "Distinct separator recomputed")
