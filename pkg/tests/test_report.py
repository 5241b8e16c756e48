from condensing.domains import moore_closure
from condensing.report import KV_VERSION, RunReport
from condensing.subst import default_carrier, named_sets


def make_report():
    r = RunReport(["shell", "--domain", "TOP I(X,Y)"])
    r.add_input("domain", "TOP I(X,Y)")
    c = default_carrier()
    r.add_domain("dom", moore_closure(c.powerset, [named_sets(c)["I(X,Y)"]]))
    r.add("note", "two\nlines")
    return r


def test_kv_layout():
    text = make_report().render_kv()
    lines = text.splitlines()
    assert lines[0] == f"format={KV_VERSION}"
    assert "status=pass" in lines
    assert "dom.size=2" in lines and "dom.1=I(X,Y)" in lines
    assert "note=two\\nlines" in lines
    assert lines[-1] == "laws.violations=0"


def test_kv_is_stable_and_untimed():
    assert make_report().render_kv() == make_report().render_kv()


def test_failed_check_flips_status():
    r = make_report()
    r.check("one equals two", False, "1", "2")
    assert r.status == "fail"
    kv = r.render_kv()
    assert "check.0.ok=false" in kv and "check.0.expected=1" in kv
    human = r.render_human()
    assert "[FAIL] one equals two" in human and "status: FAIL" in human


def test_digest_depends_on_inputs():
    a, b = make_report(), make_report()
    b.add_input("extra", "x")
    assert a.digest != b.digest
