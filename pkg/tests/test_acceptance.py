"""End-to-end acceptance checks, one test per criterion.

Every criterion fills a RunReport; the test asserts on its status and
prints a one-line PASS/FAIL summary.  The determinism check re-runs the
other eight and compares the key=value renderings byte for byte.
"""

import time

import pytest

from condensing.corpus import (condensing_sweep, domain_corpus,
                               program_corpus, soundness_sweep)
from condensing.domains import apply_closure, enumerate_domains, identity_domain
from condensing.quantale import (SampleConfig, SubstQuantale,
                                 boolean_meet_quantale, standard_quantales,
                                 verify_linear_laws, verify_quantale)
from condensing.report import RunReport
from condensing.scenarios import sharing_scenario, refined_sharing_scenario
from condensing.shells import (FunctionFamily, complete_shell_run,
                               is_weak_complete, is_weak_complete_direct,
                               lin_arrow_domain, rf_operator,
                               shell_closure_map)
from condensing.subst import default_carrier


def small_quantales(max_size):
    return [Q for Q in standard_quantales(8) if len(Q.lattice) <= max_size]


def run_sharing(report):
    sharing_scenario(report)


def run_refined_sharing(report):
    refined_sharing_scenario(report)


def run_law_suite(report):
    zoo = small_quantales(8)
    names = [Q.name for Q in zoo]
    report.add("zoo.size", len(zoo))
    report.add("zoo.names", " ".join(names))
    report.check("at least 5 explicit quantales", len(zoo) >= 5, ">= 5", len(zoo))
    boolean = boolean_meet_quantale()
    report.check("Boolean meet-quantale is in the zoo",
                 boolean.name in names, boolean.name, names)
    for Q in zoo + [SubstQuantale(default_carrier())]:
        for v in verify_quantale(Q, SampleConfig()):
            report.add_law(f"{Q.name} quantale", v, Q.ambient)
        for v in verify_linear_laws(Q, SampleConfig()):
            report.add_law(f"{Q.name} linear", v, Q.ambient)
    report.add("subst.carrier", default_carrier().n)


def run_rf_oracle(report):
    pairs = 0
    for Q in small_quantales(5):
        doms = enumerate_domains(Q.lattice)
        eta = FunctionFamily.tensor_sections(Q)
        bad = 0
        for rho in doms:
            if rf_operator(eta, rho) != lin_arrow_domain(Q, identity_domain(Q.ambient), rho):
                bad += 1
            pairs += 1
        report.check(f"{Q.name}: R_F(eta, rho) = C -o^ rho on {len(doms)} domains", bad == 0, 0, bad)
    report.add("pairs", pairs)


def run_complete_shells(report):
    for Q in small_quantales(5):
        C = identity_domain(Q.ambient)
        worst = 0
        closed_ok = map_ok = True
        for A in enumerate_domains(Q.lattice):
            run = complete_shell_run(Q, A)
            worst = max(worst, run.stabilized_at)
            closed_ok &= run.domain == lin_arrow_domain(Q, C, A)
            map_ok &= all(shell_closure_map(Q, A, x) == apply_closure(run.domain, x)
                          for x in Q.lattice.elements)
        report.check(f"{Q.name}: stabilizes by iterate 2", worst <= 2, "<= 2", worst)
        report.check(f"{Q.name}: shell = C -o^ A", closed_ok, "true", closed_ok)
        report.check(f"{Q.name}: closure map matches the shell", map_ok, "true", map_ok)


def run_weak_brute_force(report):
    total = 0
    for Q in small_quantales(4):
        doms = enumerate_domains(Q.lattice)
        disagree = sum(bool(is_weak_complete_direct(Q, rho)) != bool(is_weak_complete(Q, rho))
                       for rho in doms)
        weak = sum(bool(is_weak_complete(Q, rho)) for rho in doms)
        total += len(doms)
        report.add(f"{Q.name}.weak_complete", f"{weak}/{len(doms)}")
        report.check(f"{Q.name}: direct enumeration agrees with the residual criterion",
                     disagree == 0, 0, disagree)
    report.add("domains", total)


_CORPUS = {}


def corpus():
    if not _CORPUS:
        _CORPUS["programs"] = program_corpus(100, seed=0)
        _CORPUS["domains"] = domain_corpus(20, seed=0)
    return _CORPUS["programs"], _CORPUS["domains"]


def run_condensing_sweep(report):
    programs, domains = corpus()
    res = condensing_sweep(programs, domains)
    report.add("programs", res.programs)
    report.add("domains", res.domains)
    report.add("weak_complete", res.weak_complete)
    report.add("condensing_checks", res.condensing_checks)
    report.add("counterexamples", res.counterexamples)
    report.check(">= 100 programs and >= 20 domains", res.programs >= 100 and res.domains >= 20,
                 "true", f"{res.programs} programs, {res.domains} domains")
    report.check("every weak-complete domain is condensing and every other has a counterexample",
                 res.ok, "no failures", res.failures)


def run_soundness(report):
    programs, domains = corpus()
    res = soundness_sweep(programs, domains)
    report.add("checks", res.checks)
    report.check("rho(concrete) <= abstract everywhere", res.ok, "no failures", res.failures[:5])


CRITERIA = {
    1: ("scenario 4.2, pair-sharing is not condensing", run_sharing, 5.0),
    2: ("scenario 4.9, refined pair-sharing", run_refined_sharing, 30.0),
    3: ("quantale and linear-implication laws", run_law_suite, None),
    4: ("R_F oracle equivalence", run_rf_oracle, 60.0),
    5: ("complete shell iteration and closure map", run_complete_shells, None),
    6: ("weak completeness by brute force", run_weak_brute_force, 60.0),
    7: ("corpus condensing sweep", run_condensing_sweep, None),
    8: ("soundness on the corpus", run_soundness, None),
}

_RENDERED = {}


def run_criterion(n):
    title, fn, budget = CRITERIA[n]
    report = RunReport([f"acceptance-{n}"])
    t0 = time.perf_counter()
    fn(report)
    elapsed = time.perf_counter() - t0
    if budget is not None and elapsed >= budget:
        report.status = "fail"
    return report, elapsed


def _summary(n, report, elapsed, extra=""):
    title, _, budget = CRITERIA[n]
    mark = "PASS" if report.status == "pass" else "FAIL"
    limit = f" (limit {budget:.0f}s)" if budget else ""
    print(f"criterion {n} [{mark}] {title}: {elapsed:.2f}s{limit}{extra}")
    if report.status != "pass":
        print(report.render_kv())


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n):
    report, elapsed = run_criterion(n)
    _RENDERED[n] = report.render_kv()
    _summary(n, report, elapsed)
    failed = [c.name for c in report.checks if not c.ok] + [g for g, _ in report.laws]
    assert report.status == "pass", failed


def test_criterion_9_determinism():
    diffs = []
    for n in sorted(CRITERIA):
        first = _RENDERED.get(n)
        if first is None:
            first = run_criterion(n)[0].render_kv()
        second = run_criterion(n)[0].render_kv()
        if first != second:
            diffs.append(n)
    ok = not diffs
    print(f"criterion 9 [{'PASS' if ok else 'FAIL'}] byte-identical key=value reports across two runs"
          + (f"; differing: {diffs}" if diffs else ""))
    assert ok, diffs
