"""Buchberger's algorithm on raw term dicts.

Polynomials here are ``dict[exponent tuple, coefficient]``; the object layer
in :mod:`ralab.ideals` wraps them.  Pair selection uses the sugar strategy and
pairs are pruned with the Gebauer-Moeller criteria.
"""

from __future__ import annotations

import os
from dataclasses import dataclass


class ResourceLimitError(RuntimeError):
    """A Groebner computation exceeded the configured pair or degree cap."""


@dataclass(frozen=True)
class Limits:
    max_pairs: int = 100_000
    max_degree: int = 40

    @classmethod
    def from_env(cls) -> "Limits":
        """Read ``RALAB_LIMITS`` such as ``"pairs=5000,degree=30"``."""
        raw = os.environ.get("RALAB_LIMITS", "").strip()
        kw = {}
        if raw:
            for item in raw.split(","):
                key, _, val = item.partition("=")
                key = key.strip()
                if key in ("pairs", "max_pairs"):
                    kw["max_pairs"] = int(val)
                elif key in ("degree", "max_degree"):
                    kw["max_degree"] = int(val)
                else:
                    raise ValueError(f"unknown RALAB_LIMITS key {key!r}")
        return cls(**kw)


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def _disjoint(a, b):
    return all(not (x and y) for x, y in zip(a, b))


def _leading(p, key):
    return max(p, key=key)


def _make_monic(p, lm):
    c = p[lm]
    if c == 1:
        return p
    inv = 1 / c
    return {e: v * inv for e, v in p.items()}


def reduce(f: dict, basis: list[tuple[tuple, dict]], key) -> dict:
    """Full reduction of ``f`` by monic ``basis`` given as ``(lm, poly)`` pairs."""
    p = dict(f)
    r = {}
    while p:
        m = max(p, key=key)
        c = p[m]
        for lm, g in basis:
            if _divides(lm, m):
                q = tuple(x - y for x, y in zip(m, lm))
                for e, cg in g.items():
                    e2 = tuple(x + y for x, y in zip(e, q))
                    v = p.get(e2, 0) - c * cg
                    if v:
                        p[e2] = v
                    else:
                        p.pop(e2, None)
                break
        else:
            r[m] = c
            del p[m]
    return r


def _spoly(f, lf, g, lg):
    l = _lcm(lf, lg)
    qf = tuple(x - y for x, y in zip(l, lf))
    qg = tuple(x - y for x, y in zip(l, lg))
    out = {}
    for e, c in f.items():
        out[tuple(x + y for x, y in zip(e, qf))] = c
    for e, c in g.items():
        e2 = tuple(x + y for x, y in zip(e, qg))
        v = out.get(e2, 0) - c
        if v:
            out[e2] = v
        else:
            out.pop(e2, None)
    return out


def buchberger(polys: list[dict], key, limits: Limits | None = None) -> list[dict]:
    """Reduced Groebner basis of the ideal generated by ``polys``.

    Output polynomials are monic and sorted by decreasing leading monomial.
    Deterministic for a fixed order and input list.
    """
    limits = limits or Limits.from_env()
    polys = [dict(p) for p in polys if p]
    if not polys:
        return []
    nv = len(next(iter(polys[0])))
    one = (0,) * nv
    for p in polys:
        if len(p) == 1 and one in p:
            return [{one: p[one] / p[one]}]

    G: list[dict] = []        # all basis elements ever added
    LM: list[tuple] = []
    SUGAR: list[int] = []
    active: list[int] = []    # indices still in the basis
    pairs: dict[tuple[int, int], tuple] = {}

    def add(h, sugar):
        lm = _leading(h, key)
        h = _make_monic(h, lm)
        k = len(G)
        G.append(h)
        LM.append(lm)
        SUGAR.append(sugar)
        _update(k)

    def _update(h):
        lh = LM[h]
        rest = [(g, _lcm(lh, LM[g])) for g in active]
        chosen = []
        while rest:
            g1, l1 = rest.pop(0)
            if _disjoint(lh, LM[g1]) or not (
                    any(_divides(l2, l1) for _, l2 in rest)
                    or any(_divides(l2, l1) for _, l2 in chosen)):
                chosen.append((g1, l1))
        keep = chosen
        for pair in list(pairs):
            a, b = pair
            lab = pairs[pair][1]
            if (_divides(lh, lab) and _lcm(LM[a], lh) != lab
                    and _lcm(LM[b], lh) != lab):
                del pairs[pair]
        for g, l in keep:
            if _disjoint(lh, LM[g]):
                continue
            deg_l = sum(l)
            sug = max(SUGAR[h] + deg_l - sum(lh), SUGAR[g] + deg_l - sum(LM[g]))
            pairs[(g, h)] = (sug, l)
        active[:] = [g for g in active if not _divides(lh, LM[g])] + [h]

    order_in = sorted(range(len(polys)), key=lambda i: key(_leading(polys[i], key)))
    for i in order_in:
        p = polys[i]
        basis = [(LM[g], G[g]) for g in active]
        r = reduce(p, basis, key)
        if r:
            if max(sum(e) for e in r) > limits.max_degree:
                raise ResourceLimitError("degree cap exceeded")
            add(r, max(sum(e) for e in p))
            if len(r) == 1 and one in r:
                return [{one: G[-1][one]}]

    processed = 0
    while pairs:
        pair = min(pairs, key=lambda pq: (pairs[pq][0], key(pairs[pq][1]), pq))
        sug, _ = pairs.pop(pair)
        processed += 1
        if processed > limits.max_pairs:
            raise ResourceLimitError(
                f"S-pair cap of {limits.max_pairs} exceeded; instance too large")
        a, b = pair
        s = _spoly(G[a], LM[a], G[b], LM[b])
        if not s:
            continue
        basis = [(LM[g], G[g]) for g in active]
        r = reduce(s, basis, key)
        if r:
            if max(sum(e) for e in r) > limits.max_degree:
                raise ResourceLimitError(
                    f"degree cap of {limits.max_degree} exceeded")
            if len(r) == 1 and one in r:
                return [{one: r[one] / r[one]}]
            add(r, sug)

    return interreduce([G[g] for g in active], key)


def interreduce(polys: list[dict], key) -> list[dict]:
    """Minimalize and tail-reduce a Groebner basis; monic, sorted descending."""
    items = []
    for p in polys:
        if not p:
            continue
        lm = _leading(p, key)
        items.append((lm, _make_monic(p, lm)))
    items.sort(key=lambda t: key(t[0]))
    minimal = []
    for i, (lm, p) in enumerate(items):
        if any(_divides(lm2, lm) and (lm2 != lm or j < i)
               for j, (lm2, _) in enumerate(items) if j != i):
            continue
        minimal.append((lm, p))
    out = []
    for i, (lm, p) in enumerate(minimal):
        others = [t for j, t in enumerate(minimal) if j != i]
        tail = {e: c for e, c in p.items() if e != lm}
        r = reduce(tail, others, key)
        r[lm] = p[lm]
        out.append((lm, r))
    out.sort(key=lambda t: key(t[0]), reverse=True)
    return [p for _, p in out]
