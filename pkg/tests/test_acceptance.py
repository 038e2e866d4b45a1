"""The thirteen acceptance criteria, one test each, with their time budgets."""

import random
import time

import pytest

from plumbdga.dga import check_d_squared, check_grading
from plumbdga.genus import expected_commutator_product, genus_reduction
from plumbdga.internal import (InternalSpec, build_internal, build_kontsevich, catalan,
                               check_retraction, verify_a_infinity, verify_functor_equation,
                               verify_homotopy_identity)
from plumbdga.plumbing import (PlumbingGraph, augmentation, build_ce, build_mpp,
                               ginzburg_truncation, verify_phi)
from plumbdga.reps import count_onedim_reps
from plumbdga.pipeline import Pipeline, PipelineError
from plumbdga.secondary import CASE1_SCRIPT, REDUCTION_SCRIPTS, build_secondary_quad

from conftest import CORPUS, TREES
from oracles import catalan_factorial, naive_rep_count

pytestmark = pytest.mark.acceptance


class Clock:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.start


def finish(record, number, title, failures, clock, budget, extra=""):
    detail = f"{clock.seconds:.2f}s of {budget}s"
    if extra:
        detail = f"{extra}; {detail}"
    if failures:
        detail = f"{failures[0]}; {detail}"
    ok = record(number, title, not failures and clock.seconds < budget, detail)
    assert not failures, failures[:5]
    assert clock.seconds < budget, f"took {clock.seconds:.2f}s, budget {budget}s"
    return ok


def test_criterion_01_internal_d_squared(record_criterion):
    rng = random.Random(20240101)
    failures = []
    count = 0
    with Clock() as clock:
        for n in range(1, 6):
            for top in range(4):
                for _ in range(5):
                    m = tuple(rng.randint(-2, 2) for _ in range(n))
                    rep = check_d_squared(build_internal(InternalSpec(n, m, top)))
                    count += len(rep.checks)
                    if not rep.ok:
                        failures.append(f"n={n} m={m} P={top}: {rep.failures()[0].line()}")
    finish(record_criterion, 1, "internal d^2 = 0", failures, clock, 30, f"{count} generators")


def test_criterion_02_retraction_chain_map(record_criterion):
    rng = random.Random(7)
    failures = []
    with Clock() as clock:
        for n in range(1, 5):
            for m in [(0,) * n, tuple(rng.randint(-3, 3) for _ in range(n))]:
                rep = check_retraction(InternalSpec(n, m, 4))
                if not rep.ok:
                    failures.append(f"n={n} m={m}: {rep.failures()[0].line()}")
    finish(record_criterion, 2, "retraction is a chain map", failures, clock, 60)


def test_criterion_03_homotopy_identity(record_criterion):
    rng = random.Random(3)
    failures = []
    signs = set()
    with Clock() as clock:
        for n in range(1, 4):
            for m in [(0,) * n, tuple(rng.randint(-2, 2) for _ in range(n))]:
                res = verify_homotopy_identity(InternalSpec(n, m, 3))
                if not res.ok:
                    failures.append(f"n={n} m={m}: {res.report.failures()[0].line()}")
                signs.add(res.sign)
        # for information: the product rule with the second term negated
        alt = verify_homotopy_identity(InternalSpec(1, (0,), 3), product_sign=-1)
    if len(signs) != 1:
        failures.append(f"signs differ across sweeps: {signs}")
    extra = f"eps = {next(iter(signs)):+d}" if len(signs) == 1 else ""
    alt_outcome = "passes" if alt.ok else "fails at " + ", ".join(alt.residues)
    extra += f"; alternative product rule {alt_outcome}"
    finish(record_criterion, 3, "homotopy identity with one sign", failures, clock, 60, extra)


def test_criterion_04_catalan(record_criterion):
    failures = []
    with Clock() as clock:
        for p in range(2, 13):
            total = sum(catalan(q) * catalan(p - q - 2) for q in range(p - 1))
            if catalan(p - 1) != total:
                failures.append(f"recurrence at p={p}")
        for p in range(13):
            if catalan(p) != catalan_factorial(p):
                failures.append(f"closed form at p={p}")
        if (catalan(3), catalan(4)) != (5, 14):
            failures.append("C3, C4")
    finish(record_criterion, 4, "Catalan recurrence", failures, clock, 1)


def test_criterion_05_a_infinity(record_criterion):
    failures = []
    sequences = 0
    with Clock() as clock:
        for n in range(2, 7):
            rep = verify_a_infinity(build_kontsevich(n))
            sequences += rep.info["sequences"]
            if not rep.ok:
                failures.append(f"K_{n}: {rep.failures()[0].line()}")
        for n in range(1, 5):
            rep = verify_functor_equation(InternalSpec(n, (0,) * n, 3))
            if not rep.ok:
                failures.append(f"functor n={n}: {rep.failures()[0].line()}")
    finish(record_criterion, 5, "A-infinity relations and functor equation", failures, clock, 30,
           f"{sequences} sequences")


def test_criterion_06_corpus_d_squared(record_criterion):
    failures = []
    with Clock() as clock:
        for name, g in CORPUS.items():
            for model, P in (("CE", build_ce(g)), ("MPP", build_mpp(g))):
                for rep in (check_d_squared(P), check_grading(P)):
                    if not rep.ok:
                        failures.append(f"{name} {model}: {rep.failures()[0].line()}")
    finish(record_criterion, 6, "plumbing corpus d^2 and degrees", failures, clock, 30,
           f"{len(CORPUS)} graphs")


def test_criterion_07_phi(record_criterion):
    failures = []
    with Clock() as clock:
        for name, g in CORPUS.items():
            rep = verify_phi(g)
            if not rep.ok:
                failures.append(f"{name}: {rep.failures()[0].line()}")
    finish(record_criterion, 7, "phi is a DG-isomorphism", failures, clock, 30)


def test_criterion_08_secondary_quads(record_criterion):
    failures = []
    with Clock() as clock:
        for case in (1, 2, 3):
            pipe = Pipeline(build_secondary_quad(case))
            try:
                for pivot, image in REDUCTION_SCRIPTS[case] + CASE1_SCRIPT:
                    pipe.substitute(pivot, image)
                P = pipe.current
                for name, text in {"p": "q", "q": "0", "r": "- s", "s": "0"}.items():
                    if P.differential(name) != P.el(text):
                        failures.append(f"case {case}: d {name} = {P.differential(name)}")
                pipe.destabilize("p", "q").destabilize("r", "s")
            except PipelineError as exc:
                failures.append(f"case {case}: {exc}")
                continue
            if set("pqrs") & set(pipe.current.free_generators()):
                failures.append(f"case {case}: crossing generators remain")
            if not check_d_squared(pipe.current).ok:
                failures.append(f"case {case}: d^2 fails after cancelling")
    finish(record_criterion, 8, "crossing cancellation, cases 1-3", failures, clock, 5)


def test_criterion_09_genus_reduction(record_criterion):
    failures = []
    timings = []
    with Clock() as clock:
        for g in (1, 2, 3, 4):
            start = time.perf_counter()
            res = genus_reduction(g)
            timings.append(time.perf_counter() - start)
            P = res.reduced
            target = expected_commutator_product(P.alphabet, 1, g)
            middle = P.differential("tau1") - P.e(1)
            if middle != -P.gen("t1") * target:
                failures.append(f"g={g}: d tau1 = {P.differential('tau1')}")
            if not res.ok:
                failures.append(f"g={g}: {res.report.failures()[0].line()}")
            if not all(s.d_squared for s in res.log):
                failures.append(f"g={g}: an intermediate step breaks d^2")
    finish(record_criterion, 9, "genus reduction to commutator products", failures, clock, 60,
           f"g=4 took {timings[-1]:.2f}s")


def test_criterion_10_augmentation(record_criterion):
    failures = []
    with Clock() as clock:
        for name, g in CORPUS.items():
            rep = augmentation(g)
            if not rep.ok:
                failures.append(f"{name}: {rep.failures()[0].line()}")
    finish(record_criterion, 10, "augmentation kills the differential", failures, clock, 5)


def test_criterion_11_representation_counts(record_criterion):
    failures = []
    expected = [("loop", 3, 7), ("genus1", 5, 16), ("A2", 2, 3)]
    with Clock() as clock:
        for name, p, want in expected:
            g = CORPUS[name]
            oracle = naive_rep_count(g.vertices, list(g.edges), set(g.tree), g.genus, p,
                                     [1] * g.vertices)
            got = count_onedim_reps(g, p)
            if not got == oracle == want:
                failures.append(f"{name} over F_{p}: got {got}, oracle {oracle}, frozen {want}")
    finish(record_criterion, 11, "representation counts", failures, clock, 5, "7, 16, 3")


def test_criterion_12_tree_independence(record_criterion):
    failures = []
    edges = [(1, 2), (2, 3), (3, 1)]
    counts = {}
    with Clock() as clock:
        for chord in range(3):
            tree = {a for a in range(3) if a != chord}
            for flip in (False, True):
                es = list(edges)
                if flip:
                    es[chord] = es[chord][::-1]
                g = PlumbingGraph(3, es, tree)
                for p in (2, 3):
                    counts.setdefault(p, set()).add(count_onedim_reps(g, p))
        for p, seen in counts.items():
            if len(seen) != 1:
                failures.append(f"F_{p}: counts {sorted(seen)}")
    extra = ", ".join(f"F_{p}: {sorted(s)[0]}" for p, s in sorted(counts.items()))
    finish(record_criterion, 12, "triangle counts independent of tree and orientation",
           failures, clock, 10, extra)


def test_criterion_13_ginzburg(record_criterion):
    failures = []
    with Clock() as clock:
        for name, g in TREES.items():
            rep = check_d_squared(ginzburg_truncation(g))
            if not rep.ok:
                failures.append(f"{name}: {rep.failures()[0].line()}")
        P = ginzburg_truncation(CORPUS["A2"])
        if P.differential("tau1") != P.el("- c1* c1") or P.differential("tau2") != P.el("c1 c1*"):
            failures.append(f"A2: d tau1 = {P.differential('tau1')}, d tau2 = {P.differential('tau2')}")
    finish(record_criterion, 13, "Ginzburg truncation", failures, clock, 5)
