#!/usr/bin/env python3
"""Generate the bundled knot table and peripheral certificates from PD codes.

Presentations are Wirtinger presentations read off planar diagram codes
(KnotInfo convention: X[i,j,k,l], i the incoming under-edge, slots counted
counterclockwise).  Identities among relations come from growing a disk
region crossing by crossing; peripheral certificates come from transporting
the meridian once around the knot.  Every emitted certificate is checked by
free reduction before it is written.

Run from the repository root:
    python3 tools/knot_table.py [--check]
--check additionally identifies each knot and mutant with SnapPy.
"""
import json
import os
import sys

# ---------------------------------------------------------------- free words


def reduce(w):
    out = []
    for g, e in w:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def inv(w):
    return tuple((g, -e) for g, e in reversed(w))


def mul(*ws):
    out = []
    for w in ws:
        out.extend(w)
    return reduce(out)


def power(w, k):
    if k < 0:
        return power(inv(w), -k)
    return mul(*([w] * k))


def subst(w, images):
    """Apply the homomorphism gen -> images[gen] to w."""
    return mul(*[images[g] if e == 1 else inv(images[g]) for g, e in w])


def cyc_conj(w, r):
    """Return (u, eps) with w == u^-1 r^eps u freely, else None."""
    w = reduce(w)
    for eps in (1, -1):
        re = r if eps == 1 else inv(r)
        for k in range(len(re)):
            u = re[:k]
            if mul(inv(u), re, u) == w:
                return reduce(u), eps
    return None


# ----------------------------------------------- products of conjugated relators


class Cert:
    """An element written as prod g r_i^s g^-1; entries (g, i, s)."""

    def __init__(self, entries=()):
        self.entries = list(entries)

    def expand(self, rels):
        return mul(*[mul(g, power(rels[i], s), inv(g)) for g, i, s in self.entries])

    def conj(self, g):
        return Cert([(mul(g, h), i, s) for h, i, s in self.entries])

    def inverse(self):
        return Cert([(h, i, -s) for h, i, s in reversed(self.entries)])

    def __add__(self, other):
        return Cert(self.entries + other.entries)

    def substitute(self, idx, repl):
        """Replace relator idx by repl, a Cert with repl.expand == r_idx."""
        out = []
        for g, i, s in self.entries:
            if i == idx:
                piece = repl if s == 1 else repl.inverse()
                out.extend(piece.conj(g).entries)
            else:
                out.append((g, i, s))
        return Cert(out)


class Trivial:
    """A word together with a certificate that it is trivial."""

    def __init__(self, word, cert):
        self.word = reduce(word)
        self.cert = cert

    def check(self, rels):
        assert self.cert.expand(rels) == self.word, "certificate mismatch"
        return self

    def inverse(self):
        return Trivial(inv(self.word), self.cert.inverse())

    def conj(self, g):
        return Trivial(mul(g, self.word, inv(g)), self.cert.conj(g))

    def __mul__(self, other):
        return Trivial(mul(self.word, other.word), self.cert + other.cert)


# ---------------------------------------------------------------- diagrams


class Diagram:
    def __init__(self, pd):
        self.pd = [tuple(x) for x in pd]
        self.n = len(pd)
        self.m = 2 * self.n
        self.occ = {}
        for c, X in enumerate(self.pd):
            for s, e in enumerate(X):
                self.occ.setdefault(e, []).append((c, s))
        self.head = {}
        self.tail = {}
        for c, (i, j, k, l) in enumerate(self.pd):
            self.head[i] = c
            self.tail[k] = c
            if l == self.succ(j):
                self.head[j], self.tail[l] = c, c
            else:
                self.head[l], self.tail[j] = c, c

    def succ(self, e):
        return 1 if e == self.m else e + 1

    def over_forward(self, c):
        i, j, k, l = self.pd[c]
        return l == self.succ(j)

    def other_end(self, e, c, s):
        a, b = self.occ[e]
        return b if a == (c, s) else a


def wirtinger(dg, crossings, cut=()):
    """Arcs and crossing relators of the sub-diagram on `crossings`.

    Cut edges are included as half-edges belonging to this side.  Returns
    (arc_of_edge, num_arcs, relators, sigma) where relators[k] belongs to
    crossings[k] and reads x_o^s x_in x_o^-s x_out^-1.
    """
    cs = set(crossings)
    edges = sorted({e for c in crossings for e in dg.pd[c]})
    parent = {e: e for e in edges}

    def find(e):
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    for c in crossings:
        i, j, k, l = dg.pd[c]
        parent[find(j)] = find(l)
    # number arcs by first appearance along the knot starting at edge 1
    order = []
    e = 1
    for _ in range(dg.m):
        if e in parent:
            r = find(e)
            if r not in order:
                order.append(r)
        e = dg.succ(e)
    arc = {e: order.index(find(e)) for e in edges}
    rels = []
    for c in crossings:
        i, j, k, l = dg.pd[c]
        s = 1 if dg.over_forward(c) else -1
        o = arc[j]
        rels.append(reduce([(o, s), (arc[i], 1), (o, -s), (arc[k], -1)]))
    return arc, len(order), rels


def grow(dg, region_cs, arc, rels, start=None):
    """Grow a disk over the crossings `region_cs`, one crossing at a time.

    Returns (boundary, cert): boundary is the ccw list of (edge, sign) crossed
    by the final curve, and cert certifies word(boundary) as a product of
    conjugated relators (relator index = position in region_cs).  Absorption
    orders that pinch the region are abandoned by backtracking.
    """
    ridx = {c: k for k, c in enumerate(region_cs)}
    allowed = set(region_cs)

    def word(curve):
        return reduce([(arc[e], s) for e, s in curve])

    def absorb(R, curve, cert, X):
        slots = [s for s in range(4) if dg.other_end(dg.pd[X][s], X, s)[0] in R]
        mlen = len(slots)
        if not slots or (mlen == 4 and len(curve) != 4):
            return None
        start_slot = next((s0 for s0 in range(4)
                           if all(((s0 + t) % 4) in slots for t in range(mlen))), None)
        if start_slot is None:
            return None
        run_edges = [dg.pd[X][(start_slot + t) % 4] for t in reversed(range(mlen))]
        pos = [p for p, (e, _) in enumerate(curve) if e == run_edges[0]]
        if len(pos) != 1:
            return None
        p0 = pos[0]
        rot = curve[p0:] + curve[:p0]
        if [e for e, _ in rot[:mlen]] != run_edges:
            return None
        cert = cert.conj(inv(word(curve[:p0])))
        run = rot[:mlen]
        new_run = []
        for t in range(4 - mlen):
            e = dg.pd[X][(start_slot + mlen + t) % 4]
            new_run.append((e, 1 if dg.tail[e] == X else -1))
        L = mul(word(run), inv(word(new_run)))
        found = cyc_conj(L, rels[ridx[X]])
        assert found is not None, "loop around crossing is not a relator"
        u, eps = found
        cert = Cert([(inv(u), ridx[X], -eps)]) + cert
        return R | {X}, new_run + rot[mlen:], cert

    def search(R, curve, cert):
        if len(R) == len(allowed):
            return curve, cert
        for X in region_cs:
            if X in R:
                continue
            nxt = absorb(R, curve, cert, X)
            if nxt is not None:
                out = search(*nxt)
                if out is not None:
                    return out
        return None

    starts = region_cs if start is None else [start] + list(region_cs)
    for s0 in starts:
        curve = [(e, 1 if dg.tail[e] == s0 else -1) for e in dg.pd[s0]]
        u, eps = cyc_conj(word(curve), rels[ridx[s0]])
        out = search({s0}, curve, Cert([(inv(u), ridx[s0], eps)]))
        if out is not None:
            return out
    raise AssertionError("region growth failed")


# ------------------------------------------------------------- knot tables


def knot_entry(name, pd):
    dg = Diagram(pd)
    cs = list(range(dg.n))
    arc, n, rels = wirtinger(dg, cs)
    # spherical identity
    curve, sph = grow(dg, cs, arc, rels, cs[-1])
    assert curve == [] and sph.expand(rels) == ()
    drop = dg.n - 1
    # r_drop from 1 = L g r^eps g^-1 R
    k = [t for t, (g, i, s) in enumerate(sph.entries) if i == drop]
    assert len(k) == 1
    k = k[0]
    g, _, eps = sph.entries[k]
    Lc, Rc = Cert(sph.entries[:k]), Cert(sph.entries[k + 1:])
    # g r^eps g^-1 = L^-1 R^-1
    rhs = (Lc.inverse() + Rc.inverse()).conj(inv(g))
    repl = rhs if eps == 1 else rhs.inverse()
    assert repl.expand(rels) == rels[drop]
    # traversal
    m0, U, Phi = transport_knot(dg, arc, rels)
    Phi = Phi.substitute(drop, repl)
    kept = rels[:drop]
    mu = ((m0, 1),)
    e = sum(x for _, x in U)
    lam = mul(power(mu, -e), U)
    cert = Phi.conj(power(mu, -e))
    target = mul(mu, lam, inv(mu), inv(lam))
    assert cert.expand(kept) == target
    entry = {
        "name": name,
        "generators": ["x%d" % (t + 1) for t in range(n)],
        "relators": [word_json(r) for r in kept],
        "meridian": word_json(mu),
        "longitude": word_json(lam),
    }
    return entry, cert_json(cert), dict(dg=dg, arc=arc, rels=rels)


def transport_knot(dg, arc, rels):
    """Walk the knot from edge 1 and return (m0, U, Phi) with Phi == [m0, U]."""
    e = 1
    # start right after an under-crossing so that the first arc is whole
    m0 = arc[e]
    U = ()
    Phi = Cert()
    cur = m0
    for _ in range(dg.m):
        c = dg.head[e]
        if dg.pd[c][0] == e:
            # under-passage: x_out = r^-1 x_o^s x_in x_o^-s
            sg = 1 if dg.over_forward(c) else -1
            u = ((arc[dg.pd[c][1]], sg),)
            E = Cert([((), c, -1)])
            Phi = E + Phi.conj(u)
            U = mul(u, U)
            cur = arc[dg.pd[c][2]]
        e = dg.succ(e)
    assert cur == m0
    assert Phi.expand(rels) == mul(((m0, 1),), U, ((m0, -1),), inv(U))
    return m0, U, Phi


def word_json(w):
    return [[g, e] for g, e in w]


def cert_json(c):
    return [{"relator_index": i, "conjugator_word": word_json(g), "sign": s}
            for g, i, s in c.entries]



# ------------------------------------------------------- mutation spheres

A, B, C, D = 0, 1, 2, 3


def _l(x):
    return ((x, 1),)


def _c(g, x):
    return mul(g, _l(x), inv(g))


# Involutive automorphisms of pi_1(F) = <a,b,c> (d = (abc)^-1) induced by the
# three half-turns, each fixing a base point on the sphere.  The fourth entry
# is the image of d written as a conjugate of a single puncture loop.
_ABCI = ((C, -1), (B, -1), (A, -1))
MOVES = {
    "identity": [_l(A), _l(B), _l(C), _l(D)],
    "ab_cd": [_l(B), _l(A), ((A, -1), (C, -1), (B, -1)), _c(_l(B), C)],
    "ad_bc": [_ABCI, _c(mul(_l(A), _l(B)), C), _c(_l(A), B), _l(A)],
    "ac_bd": [_l(C), _ABCI, _l(A), _l(B)],
}
# The same maps with every image written as a conjugate of one puncture loop.
MOVES4 = {
    "identity": [_l(A), _l(B), _l(C), _l(D)],
    "ab_cd": [_l(B), _l(A), _c(mul(_l(B), _l(C)), D), _c(_l(B), C)],
    "ad_bc": [_l(D), _c(mul(_l(A), _l(B)), C), _c(_l(A), B), _l(A)],
    "ac_bd": [_l(C), _l(D), _l(A), _l(B)],
}
PERM = {"identity": [0, 1, 2, 3], "ab_cd": [1, 0, 3, 2],
        "ad_bc": [3, 2, 1, 0], "ac_bd": [2, 3, 0, 1]}


def check_moves():
    for name, t in MOVES.items():
        t3 = t[:3]
        for x in range(3):
            assert subst(t[x], t3) == _l(x), name
        q = mul(*t)
        assert q == () or name == "identity", name


def conj_prefix(w, target):
    for k in range(len(w) + 1):
        if mul(inv(w[:k]), w, w[:k]) == target:
            return w[:k]
    raise AssertionError("not a conjugate")


def split_conj_letter(w):
    """w == v x^s v^-1 with x a letter; returns (v, x, s)."""
    w = reduce(w)
    h = len(w) // 2
    v, x = w[:h], w[h]
    assert mul(v, (x,), inv(v)) == w
    return v, x[0], x[1]


def conway_circle(dg, S_):
    S_ = set(S_)
    cut = [e for e, ((a, _), (b, _)) in dg.occ.items() if (a in S_) != (b in S_)]
    assert len(cut) == 4
    return cut


class Splitting:
    """Split Wirtinger data for a diagram cut along a Conway circle."""

    def __init__(self, dg, piece1):
        self.dg = dg
        p1 = sorted(piece1)
        p2 = sorted(set(range(dg.n)) - set(p1))
        self.p1, self.p2 = p1, p2
        self.arc1, self.n1, self.rels1 = wirtinger(dg, p1)
        self.arc2, self.n2, self.rels2 = wirtinger(dg, p2)
        curve1, cert1 = grow(dg, p1, self.arc1, self.rels1, p1[0])
        assert len(curve1) == 4
        signs = [s for _, s in curve1]
        # rotate so the first two punctures carry the same sign
        rot = next((k for k in range(4) if signs[k] == signs[(k + 1) % 4]), 0)
        w_before = reduce([(self.arc1[e], s) for e, s in curve1[:rot]])
        curve1 = curve1[rot:] + curve1[:rot]
        cert1 = cert1.conj(inv(w_before))
        self.cut = [e for e, _ in curve1]
        self.signs = [s for _, s in curve1]
        self.w1 = [((self.arc1[e], s),) for e, s in curve1]
        self.B1 = Trivial(mul(*self.w1), cert1).check(self.rels1)
        # piece 2, with generators and relators shifted into amalgam indexing
        curve2, cert2 = grow(dg, p2, self.arc2, self.rels2, p2[0])
        assert sorted(e for e, _ in curve2) == sorted(self.cut)
        self.w2 = [((self.n1 + self.arc2[e], s),) for e, s in curve1]
        sh = self.shift2
        c2 = Cert([(sh(g), len(self.rels1) + i, s) for g, i, s in cert2.entries])
        word2 = reduce([(self.n1 + self.arc2[e], s) for e, s in curve2])
        T2 = Trivial(word2, c2)
        # word2 is a cyclic rotation of (w2(a)w2(b)w2(c)w2(d))^-1
        target = inv(mul(*self.w2))
        g = conj_prefix(word2, target)
        self.B2 = T2.conj(inv(g)).inverse()
        assert self.B2.word == mul(*self.w2)
        self.rels1g = list(self.rels1)
        self.rels2g = [sh(r) for r in self.rels2]

    def shift2(self, w):
        return tuple((g + self.n1, e) for g, e in w)

    def sphere_words1(self, move):
        t = MOVES[move]
        return [subst(t[x], self.w1) for x in range(4)]

    def amalgam(self, move):
        T1 = self.sphere_words1(move)
        ident = [mul(self.w2[x], inv(T1[x])) for x in range(3)]
        rels = self.rels1g + self.rels2g + ident
        return rels, T1

    def transport(self, move, rels, T1):
        dg = self.dg
        nr = len(self.rels1g) + len(self.rels2g)
        J = [Trivial(rels[nr + x], Cert([((), nr + x, 1)])) for x in range(3)]
        # fourth identification, derived
        A1 = mul(T1[0], T1[1], T1[2])
        Q = self.B1 if move == "identity" else Trivial((), Cert())
        assert Q.word == mul(A1, T1[3])
        Psi = J[0] * J[1].conj(T1[0]) * J[2].conj(mul(T1[0], T1[1]))
        Jd = (Psi.inverse() * self.B2 * Q.inverse()).conj(inv(A1))
        assert Jd.word == mul(self.w2[3], inv(T1[3]))
        J.append(Jd.check(rels))
        # rewrite each identification against the conjugate-of-a-letter form
        abcd = ((A, 1), (B, 1), (C, 1), (D, 1))
        T1c = []
        for x in range(4):
            img4 = MOVES4[move][x]
            T1c.append(subst(img4, self.w1))
            diff = mul(MOVES[move][x], inv(img4))
            if diff:
                u, eps = cyc_conj(diff, abcd)
                Bt = self.B1 if eps == 1 else self.B1.inverse()
                J[x] = (J[x] * Bt.conj(inv(subst(u, self.w1)))).check(rels)
            assert J[x].word == mul(self.w2[x], inv(T1c[x]))
        T1 = T1c
        perm = PERM[move]
        p1set = set(self.p1)
        ridx1 = {c: k for k, c in enumerate(self.p1)}
        ridx2 = {c: len(self.p1) + k for k, c in enumerate(self.p2)}
        e0 = next(e for e in range(1, dg.m + 1)
                  if dg.head[e] not in p1set and dg.tail[e] not in p1set)
        m0 = self.n1 + self.arc2[e0]
        cur, piece, e = m0, 2, e0
        U, Phi = (), Cert()
        steps = 0
        while True:
            c = dg.head[e]
            inside = (c in p1set) == (piece == 1)
            if inside:
                if dg.pd[c][0] == e:
                    sg = 1 if dg.over_forward(c) else -1
                    if piece == 1:
                        o, nxt, ri = self.arc1[dg.pd[c][1]], self.arc1[dg.pd[c][2]], ridx1[c]
                    else:
                        o, nxt, ri = (self.n1 + self.arc2[dg.pd[c][1]],
                                      self.n1 + self.arc2[dg.pd[c][2]], ridx2[c])
                    u = ((o, sg),)
                    E = Trivial(mul(_l(nxt), u, ((cur, -1),), inv(u)), Cert([((), ri, -1)]))
                    E.check(rels)
                    Phi = E.cert + Phi.conj(u)
                    U = mul(u, U)
                    cur = nxt
                e = dg.succ(e)
                steps += 1
            else:
                gam = self.cut.index(e)
                if piece == 2:
                    # leaving piece 2 at gam, entering piece 1 at perm[gam]
                    new_e = self.cut[perm[gam]]
                    new = self.arc1[new_e]
                    E, u = self._cross(J[gam], T1[gam], old=cur, new=new, to_piece=1, rels=rels)
                    piece = 1
                else:
                    # leaving piece 1 at gam; glued to piece-2 puncture perm[gam]
                    g2 = perm[gam]
                    new_e = self.cut[g2]
                    new = self.n1 + self.arc2[new_e]
                    E, u = self._cross(J[g2], T1[g2], old=cur, new=new, to_piece=2, rels=rels)
                    piece = 2
                Phi = E.cert + Phi.conj(u)
                U = mul(u, U)
                cur = new
                e = new_e
                # the head of new_e lies in the new piece
                assert (dg.head[e] in p1set) == (piece == 1), "orientation mismatch"
                c = dg.head[e]
                if dg.pd[c][0] == e:
                    pass
                # process the head crossing on the next loop iteration
                continue
            if piece == 2 and e == e0:
                break
            assert steps < 10 * dg.m
        assert cur == m0
        mu = _l(m0)
        assert Phi.expand(rels) == mul(mu, U, inv(mu), inv(U))
        ex = sum(x for _, x in U)
        lam = mul(power(mu, -ex), U)
        cert = Phi.conj(power(mu, -ex))
        assert cert.expand(rels) == mul(mu, lam, inv(mu), inv(lam))
        return mu, lam, cert

    def _cross(self, J, T1x, old, new, to_piece, rels):
        v, z, s = split_conj_letter(T1x)
        if to_piece == 2:
            u = v
            assert z == old
        else:
            u = inv(v)
            assert z == new
        target = mul(_l(new), u, ((old, -1),), inv(u))
        for cj in ((), v, inv(v), mul(v, _l(z), inv(v)), mul(inv(v), _l(old)),
                   mul(inv(v), _l(new)), _l(old), _l(new)):
            for eps in (1, -1):
                Jt = J if eps == 1 else J.inverse()
                cand = Jt.conj(cj)
                if cand.word == target:
                    return cand.check(rels), u
        raise AssertionError("no transition found")


def relabel(pd):
    """Renumber edges 1..2n along the knot orientation fixed by the under-strands."""
    occ = {}
    for c, X in enumerate(pd):
        for s, e in enumerate(X):
            occ.setdefault(e, []).append((c, s))
    n = len(pd)
    new = [[None] * 4 for _ in range(n)]
    c, s = 0, 2
    lab = 1
    for _ in range(2 * n):
        e = pd[c][s]
        new[c][s] = lab
        a, b = occ[e]
        c2, s2 = b if a == (c, s) else a
        new[c2][s2] = lab
        assert s2 != 2, "inconsistent orientation"
        s = {0: 2, 1: 3, 3: 1}[s2]
        c = c2
        lab += 1
    assert (c, s) == (0, 2)
    return [tuple(x) for x in new]


def mutant_pd(dg, sp, move):
    """PD code of the mutant obtained by turning piece 1 over."""
    perm = PERM[move]
    flip = move in ("ab_cd", "ad_bc")
    p1 = set(sp.p1)
    new = [list(X) for X in dg.pd]
    if flip:
        for c in p1:
            i, j, k, l = dg.pd[c]
            new[c] = [j, i, l, k] if dg.over_forward(c) else [l, k, j, i]
    inner = {sp.cut[perm[p]]: ("in", sp.cut[p]) for p in range(4)}
    for c in p1:
        new[c] = [inner.get(e, e) for e in new[c]]
    new = [[x[1] if isinstance(x, tuple) else x for x in X] for X in new]
    return relabel(new)


# ------------------------------------------------------------------ output

TREFOIL = [(1, 5, 2, 4), (3, 1, 4, 6), (5, 3, 6, 2)]
FIGURE_EIGHT = [(4, 2, 5, 1), (8, 6, 1, 5), (6, 3, 7, 4), (2, 7, 3, 8)]
KT = [(4, 2, 5, 1), (8, 4, 9, 3), (9, 18, 10, 19), (12, 5, 13, 6), (6, 13, 7, 14),
      (19, 15, 20, 14), (11, 21, 12, 20), (17, 22, 18, 1), (21, 16, 22, 17),
      (15, 10, 16, 11), (2, 8, 3, 7)]
KT_PIECE1 = [0, 1, 3, 4, 10]
KT_MOVE = "ab_cd"
PRETZEL = None  # built from tangles in main(); see pretzel_pd()
PRETZEL_PIECE1 = [0, 1, 2, 3, 4, 5]
PRETZEL_MOVE = "ac_bd"


def pretzel_pd():
    """P(3,3,3,-2) as a closed sum of vertical twist tangles."""
    from spherogram.links.tangles import RationalTangle as R
    T = R(1, 3) + R(1, 3) + R(1, 3) + R(1, -2)
    return relabel(T.numerator_closure().PD_code())


def dump(obj, path):
    with open(path, "w") as f:
        f.write(json.dumps(obj, indent=2))
        f.write("\n")


def presentation_json(prefix, n, rels):
    return {"generators": ["%s%d" % (prefix, t + 1) for t in range(n)],
            "relators": [word_json(r) for r in rels]}


def decomposition(sp, move, mutant):
    """Decomposition data; with mutant=True piece 1 is reglued by `move`."""
    rels, T1 = sp.amalgam(move if mutant else "identity")
    mu, lam, cert = sp.transport(move if mutant else "identity", rels, T1)
    w1 = T1 if mutant else sp.w1
    p1 = presentation_json("u", sp.n1, sp.rels1)
    p2 = presentation_json("v", sp.n2, [tuple((g - sp.n1, e) for g, e in r) for r in sp.rels2g])
    local2 = [tuple((g - sp.n1, e) for g, e in w) for w in sp.w2]
    enter1 = [x for x in range(4) if sp.signs[x] == -1]
    enter2 = [x for x in range(4) if sp.signs[x] == 1]
    d = {
        "piece1": p1,
        "piece2": p2,
        "sphere_words": {"piece1": [word_json(w) for w in w1],
                         "piece2": [word_json(w) for w in local2]},
        "signs": ["+" if s == 1 else "-" for s in sp.signs],
        "arc_meridians": {
            "piece1": [[[sp.w1[x][0][0], 1]] for x in enter1],
            "piece2": [[[local2[x][0][0], 1]] for x in enter2],
        },
        "meridian": [[mu[0][0] - sp.n1, 1]],
        "longitude": word_json(lam),
    }
    return d, cert_json(cert), rels


def main(argv):
    check = "--check" in argv
    if check:
        import snappy  # noqa: F401  (registers the exterior() backend)
    root = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..",
                        "crates", "torsio-core", "data")
    kdir = os.path.join(root, "knots")
    cdir = os.path.join(root, "certificates")
    os.makedirs(kdir, exist_ok=True)
    os.makedirs(cdir, exist_ok=True)
    check_moves()

    pz = pretzel_pd()
    dg_kt = Diagram(KT)
    sp_kt = Splitting(dg_kt, KT_PIECE1)
    conway = mutant_pd(dg_kt, sp_kt, KT_MOVE)
    dg_pz = Diagram(pz)
    sp_pz = Splitting(dg_pz, PRETZEL_PIECE1)

    jobs = [("3_1", "trefoil", TREFOIL, None), ("4_1", "figure_eight", FIGURE_EIGHT, None),
            ("11n42", "kinoshita_terasaka", KT, (sp_kt, KT_MOVE, False)),
            ("11n34", "conway", conway, (sp_kt, KT_MOVE, True)),
            ("P(3,3,3,-2)", "pretzel_3_3_3_m2", pz, (sp_pz, PRETZEL_MOVE, False)),
            ("P(3,3,3,-2) mutant", "pretzel_3_3_3_m2_mutant",
             mutant_pd(dg_pz, sp_pz, PRETZEL_MOVE), (sp_pz, PRETZEL_MOVE, True))]
    for name, stem, pd, dec in jobs:
        entry, cert, _ = knot_entry(name, pd)
        if dec is not None:
            sp, move, mutant = dec
            d, acert, _ = decomposition(sp, move, mutant)
            _, mcert, _ = decomposition(sp, move, not mutant)
            entry["tangle_decomposition"] = d
            dump(acert, os.path.join(cdir, stem + ".amalgam.json"))
            dump(mcert, os.path.join(cdir, stem + ".mutant.json"))
        dump(entry, os.path.join(kdir, stem + ".json"))
        dump(cert, os.path.join(cdir, stem + ".json"))
        print("wrote", stem, len(entry["generators"]), "generators,",
              len(entry["relators"]), "relators")
        if check:
            import spherogram
            link = spherogram.Link([list(x) for x in pd])
            ids = link.exterior().identify()
            print("   identifies as", [str(m) for m in ids])
    if check:
        import spherogram
        for mv in ("ab_cd", "ad_bc", "ac_bd"):
            for tag, dg, sp in (("KT", dg_kt, sp_kt), ("pretzel", dg_pz, sp_pz)):
                if any(sp.signs[x] != sp.signs[PERM[mv][x]] for x in range(4)):
                    continue
                ids = spherogram.Link([list(x) for x in mutant_pd(dg, sp, mv)]).exterior().identify()
                print("  ", tag, "positive mutant", mv, [str(m) for m in ids])


if __name__ == "__main__":
    main(sys.argv[1:])
