"""Build objects from a parsed session and run its tasks."""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from ralab.derivation import (Derivation, NotLocallyNilpotent, check_exp_axioms, check_lnd,
                              exp_from_lnd, exp_translation, generator_guess, invariants_upto)
from ralab.graded import check_graded_preconditions, decompose
from ralab.ideals import Ideal, PresentedRing, RingMap
from ralab.jets import DEFAULT_ORDER, JetMap, jet_decompose
from ralab.local import LocalAlgebra, depth_and_cm_report, socle_and_gorenstein
from ralab.poly import DEGREVLEX, MonomialOrder, PolyRing
from ralab.report import Report, bundle
from ralab.retract import (DecompositionFailed, IdempotencyError, LambdaNotUnit,
                           NormalizationFailed, PatchData, is_invertible, mu_graded,
                           prime_image_analysis, principal_upto, sym_of_ideal, tag_weights,
                           verify_patch_decomposition, verify_retraction)
from ralab.session.ast import (DerivationDecl, IdealDecl, MapDecl, RingDecl, SessionAst,
                               SubalgebraDecl, TaskDecl)
from ralab.session.parser import as_int, as_ref
from ralab.subalgebra import SubAlgebra


@dataclass
class Options:
    degree: int | None = None
    cap: int | None = None
    order: int | None = None
    workers: int = 4
    monomial_order: MonomialOrder = DEGREVLEX


@dataclass
class SubIdeal:
    """An ideal of a subalgebra, kept both in the ambient ring and in tag coordinates."""
    algebra: SubAlgebra
    ambient: Ideal
    tagged: Ideal


@dataclass
class Env:
    objects: dict = field(default_factory=dict)
    broken: dict = field(default_factory=dict)

    def get(self, name):
        if name in self.broken:
            raise RuntimeError(f"declaration {name!r} failed: {self.broken[name]}")
        return self.objects[name]


def build_env(ast: SessionAst, order: MonomialOrder = DEGREVLEX) -> Env:
    env = Env()
    for d in ast.declarations:
        if isinstance(d, TaskDecl):
            continue
        try:
            env.objects[d.name] = _build(d, env, order)
        except Exception as e:  # recorded and surfaced by the tasks that use it
            env.broken[d.name] = f"{type(e).__name__}: {e}"
    return env


def _build(d, env: Env, order: MonomialOrder):
    if isinstance(d, RingDecl):
        free = PolyRing(d.variables)
        return PresentedRing(free, [e.to_poly(free) for e in d.relations], order, d.base)
    if isinstance(d, SubalgebraDecl):
        ring = env.get(d.ring)
        return SubAlgebra(ring, [e.to_poly(ring.free) for e in d.generators])
    if isinstance(d, DerivationDecl):
        ring = env.get(d.ring)
        return Derivation(ring, {v: e.to_poly(ring.free) for v, e in d.images})
    if isinstance(d, MapDecl):
        src, tgt = env.get(d.source), env.get(d.target)
        return RingMap(src, tgt, {v: e.to_poly(tgt.free) for v, e in d.images},
                       base_fixing=d.source == d.target)
    if isinstance(d, IdealDecl):
        owner = env.get(d.ring)
        if isinstance(owner, SubAlgebra):
            amb = owner.ambient
            gens = [e.to_poly(amb.free) for e in d.generators]
            tagged = []
            for g in gens:
                res = owner.member(g)
                if not res:
                    raise ValueError(f"{g} is not in the subalgebra {d.ring}")
                tagged.append(res.expression)
            return SubIdeal(owner, Ideal(amb, gens), Ideal(owner.presented_ring(), tagged))
        return Ideal(owner, [e.to_poly(owner.free) for e in d.generators])
    raise TypeError(d)


# -- tasks ---------------------------------------------------------------------------

def _int(t: TaskDecl, key: str, default):
    v = t.kwarg(key)
    return default if v is None else as_int(v)


def _poly(ring: PresentedRing, e):
    return e.to_poly(ring.free)


def _task_check_retraction(t, env, opts):
    m = env.get(as_ref(t.args[0]))
    try:
        r = verify_retraction(m)
    except IdempotencyError as e:
        return Report("", t.kind, "fail", [("variable", e.variable), ("pi(x)", e.once),
                                            ("pi(pi(x))", e.twice)])
    wit = [(f"pi({n})", g) for n, g in r.certificate]
    wit.append(("pi o pi = pi", "certified on every variable"))
    return Report("", t.kind, "pass", wit)


def _task_lnd(t, env, opts):
    D = env.get(as_ref(t.args[0]))
    cap = _int(t, "cap", opts.cap or 8)
    rep = check_lnd(D, cap)
    wit = [("cap", cap)] + [(f"order({n})", k) for n, k in rep.orders.items()]
    if rep.stuck:
        wit.append(("not nilpotent within cap", ", ".join(rep.stuck)))
        return Report("", t.kind, "unknown", wit)
    return Report("", t.kind, "pass", wit)


def _task_exp(t, env, opts):
    first = env.get(as_ref(t.args[0]))
    if isinstance(first, SubAlgebra):
        ring = first.ambient
        F, a = (_poly(ring, e) for e in t.args[1:3])
        return exp_translation(ring, first.generators, F, a, _int(t, "m", 1)).report
    cap = _int(t, "cap", opts.cap or 32)
    try:
        phi = exp_from_lnd(first, cap)
    except NotLocallyNilpotent as e:
        return Report("", t.kind, "unknown", [("reason", str(e))])
    ax = check_exp_axioms(phi)
    wit = [(f"phi({n})", g) for n, g in zip(phi.ring.names, phi.images)]
    return bundle("", t.kind, [ax]) if not ax.passed else Report("", t.kind, "pass", wit,
                                                                 checks=[ax])


def _task_invariants(t, env, opts):
    D = env.get(as_ref(t.args[0]))
    d = _int(t, "degree", opts.degree or 4)
    basis = invariants_upto(D, d)
    return Report("", t.kind, "pass", [("degree", d), ("dimension", len(basis)),
                                       ("basis", [str(b) for b in basis])])


def _task_kernel(t, env, opts):
    D = env.get(as_ref(t.args[0]))
    d = _int(t, "degree", opts.degree or 4)
    guess = generator_guess(D.ring, invariants_upto(D, d))
    wit = [("degree", d), ("generators", [str(g) for g in guess.generators])]
    if not guess.covered:
        wit.append(("uncovered", [str(g) for g in guess.uncovered]))
        return Report("", t.kind, "fail", wit)
    return Report("", t.kind, "pass", wit,
                  notes=[f"generators of the invariants in degree <= {d} only"])


def _task_graded(t, env, opts):
    r = verify_retraction(env.get(as_ref(t.args[0])))
    pre = check_graded_preconditions(r)
    if not pre.passed:
        return pre
    return decompose(r).report


def _task_jet(t, env, opts):
    m = env.get(as_ref(t.args[0]))
    if not m.source.is_free():
        raise ValueError("jet decomposition needs a free polynomial ring")
    N = _int(t, "order", opts.order or DEFAULT_ORDER)
    return jet_decompose(JetMap(m.source.free, list(m.images), N)).report


def _task_patch(t, env, opts):
    A = env.get(as_ref(t.args[0]))
    pi = verify_retraction(env.get(as_ref(t.args[1])))
    ring = A.ambient
    x, y, F, G = (_poly(ring, e) for e in t.args[2:6])
    p = PatchData(A, x, y, F, G, N=_int(t, "N", 2), normalize=bool(_int(t, "normalize", 1)))
    try:
        return verify_patch_decomposition(p, pi)
    except (NormalizationFailed, LambdaNotUnit) as e:
        return Report("", t.kind, "fail", [("step", type(e).__name__), ("reason", str(e))])
    except DecompositionFailed as e:
        return Report("", t.kind, "fail", [("reason", str(e)), ("witness", e.witness or "-")])


def _task_prime_image(t, env, opts):
    pi = verify_retraction(env.get(as_ref(t.args[0])))
    return prime_image_analysis(pi, _poly(pi.ring, t.args[1]))


def _task_local(t, env, opts):
    ring = env.get(as_ref(t.args[0]))
    L = LocalAlgebra(ring)
    cand = t.kwarg("candidate")
    rep = depth_and_cm_report(L, None if cand is None else _poly(ring, cand))
    if L.artinian:
        s = socle_and_gorenstein(L)
        rep.add("dim_Q", len(L.basis()))
        rep.add("socle", [str(g) for g in s.socle])
        rep.add("Gorenstein", s.gorenstein)
    return rep


def _task_member(t, env, opts):
    A = env.get(as_ref(t.args[1]))
    f = _poly(A.ambient, t.args[0])
    res = A.member(f)
    wit = [("f", A.ambient.nf(f)), ("member", bool(res))]
    if res:
        wit.append(("expression", res.expression))
    return Report("", t.kind, "pass", wit)


def _ideal(env, name) -> Ideal:
    obj = env.get(name)
    return obj.ambient if isinstance(obj, SubIdeal) else obj


def _task_contract(t, env, opts):
    I = _ideal(env, as_ref(t.args[0]))
    A = env.get(as_ref(t.args[1]))
    q = A.contract(I)
    return Report("", t.kind, "pass", [("contraction", [str(g) for g in q.groebner()]),
                                       ("tags", [f"{n} = {g}" for n, g in
                                                 zip(A.tags, A.generators)])])


def _task_trdeg(t, env, opts):
    A = env.get(as_ref(t.args[0]))
    return Report("", t.kind, "pass", [("trdeg", A.trdeg())])


def _task_invertible(t, env, opts):
    obj = env.get(as_ref(t.args[0]))
    I = obj.tagged if isinstance(obj, SubIdeal) else obj
    w = t.kwarg("witness")
    cert = is_invertible(I, witness=None if w is None else _poly(I.ring, w))
    d = _int(t, "degree", opts.degree or 6)
    pr = principal_upto(I, d)
    wit = [("witness f", cert.witness), ("(fR : I)", [str(g) for g in cert.inverse.generators]),
           ("verdict", cert.verdict), ("principality", pr.verdict)]
    if pr.generator is not None:
        wit.append(("generator", pr.generator))
    return Report("", t.kind, "pass", wit)


def _task_mu(t, env, opts):
    obj = env.get(as_ref(t.args[0]))
    if isinstance(obj, SubIdeal):
        w = tag_weights(obj.algebra)
        return Report("", t.kind, "pass", [("mu", mu_graded(obj.tagged, w)),
                                           ("mu of extension", mu_graded(obj.ambient))])
    return Report("", t.kind, "pass", [("mu", mu_graded(obj))])


def _task_sym(t, env, opts):
    obj = env.get(as_ref(t.args[0]))
    I = obj.tagged if isinstance(obj, SubIdeal) else obj
    s = sym_of_ideal(I.ring, I.generators)
    return Report("", t.kind, "pass", [("variables", [f"{v} <-> {g}" for v, g in
                                                      zip(s.tvars, s.ideal_gens)]),
                                       ("relations", [str(r) for r in s.linear_relations])])


HANDLERS = {
    "check-retraction": _task_check_retraction,
    "lnd": _task_lnd,
    "exp": _task_exp,
    "invariants": _task_invariants,
    "kernel": _task_kernel,
    "graded-decompose": _task_graded,
    "jet-decompose": _task_jet,
    "patch-verify": _task_patch,
    "prime-image": _task_prime_image,
    "local-report": _task_local,
    "member": _task_member,
    "contract": _task_contract,
    "trdeg": _task_trdeg,
    "invertible": _task_invertible,
    "mu": _task_mu,
    "sym": _task_sym,
}


def task_id(t: TaskDecl, index: int) -> str:
    return t.label or f"{t.kind}-{index + 1}"


def run_task(t: TaskDecl, env: Env, opts: Options | None = None, index: int = 0) -> Report:
    """Exactly one report; module errors become status ``error`` with the task context."""
    opts = opts or Options()
    start = time.perf_counter()
    try:
        rep = HANDLERS[t.kind](t, env, opts)
    except Exception as e:
        rep = Report("", t.kind, "error", [("task", task_id(t, index)),
                                            ("error", f"{type(e).__name__}: {e}")])
    rep.id = task_id(t, index)
    rep.kind = t.kind
    rep.elapsed = time.perf_counter() - start
    return rep


def run_session(ast: SessionAst, opts: Options | None = None) -> list[Report]:
    opts = opts or Options()
    env = build_env(ast, opts.monomial_order)
    tasks = ast.tasks
    if opts.workers <= 1 or len(tasks) <= 1:
        return [run_task(t, env, opts, i) for i, t in enumerate(tasks)]
    with ThreadPoolExecutor(max_workers=opts.workers) as pool:
        futures = [pool.submit(run_task, t, env, opts, i) for i, t in enumerate(tasks)]
        return [f.result() for f in futures]
