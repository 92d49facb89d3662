"""Smoke test for the qsv_py extension.

Run after `pip install --no-build-isolation -e crates/python`:

    python python/smoke_test.py      # or: pytest python/smoke_test.py
"""

from fractions import Fraction

import mpmath

import qsv_py

mpmath.mp.dps = 40


def mpc(s):
    """Parses the core's "re+imi" decimal format at full precision."""
    s = s.replace(" ", "")
    if not s.endswith("i"):
        return mpmath.mpc(s)
    cut = max(i for i, ch in enumerate(s) if ch in "+-" and i > 0 and s[i - 1] not in "eE")
    return mpmath.mpc(s[:cut], s[cut:-1])


def close(a, b, tol):
    return abs(a - b) <= tol * max(1.0, abs(b))


def test_catalog():
    ids = [i.id for i in qsv_py.identities()]
    assert len(ids) == 21 and len(set(ids)) == 21
    jackson = qsv_py.identity("JACKSON_8W7")
    assert jackson.n_range == (0, 4)
    assert "rational" in jackson.backends
    assert [c for c, _ in jackson.constraints] == ["z"]


def test_primitives_against_mpmath():
    x, q = 0.7 + 0.3j, 0.35 - 0.1j
    for n in (0, 1, 5):
        ours = mpc(qsv_py.qpoch(x, q, n=n, digits=35))
        ref = mpmath.qp(mpmath.mpc(x), mpmath.mpc(q), n)
        assert close(ours, ref, 1e-30), (n, ours, ref)
    X, Q = mpmath.mpc(x), mpmath.mpc(q)
    assert close(mpc(qsv_py.qpoch(x, q, digits=35)), mpmath.qp(X, Q), 1e-30)
    assert close(mpc(qsv_py.theta(x, q, digits=35)), mpmath.qp(X, Q) * mpmath.qp(Q / X, Q), 1e-30)
    # plain complex output
    assert close(qsv_py.theta(x, q), complex(mpmath.qp(X, Q) * mpmath.qp(Q / X, Q)), 1e-14)


def test_check_explicit():
    rep = qsv_py.check("WEIERSTRASS", {"q": "1/3", "x": 2, "a": 3, "b": 5, "c": 7})
    assert rep["pass"], rep
    assert float(rep["rel_residual"]) < 1e-22

    rep = qsv_py.identity("JACKSON_8W7").check(
        {"q": Fraction(1, 2), "n": 1, "a": 10, "b": 2, "c": 3, "d": 5}, backend="rational"
    )
    assert rep["pass"] and rep["params"]["z"] == "12"

    rep = qsv_py.check("JTP", {"x": "3/2*q", "q": "q"}, backend="formal", formal_order=15)
    assert rep["pass"] and rep["formal_order"] == 15

    try:
        qsv_py.check("NOPE", {"q": 0.5})
    except ValueError:
        pass
    else:
        raise AssertionError("unknown identity accepted")


def test_suite_is_deterministic():
    kw = dict(identities=["BAILEY_66", "THM_I"], backend="both", samples=2, seed=42)
    a, b = qsv_py.run_suite(**kw), qsv_py.run_suite(**kw)
    assert a == b
    assert [s["id"] for s in a["identities"]] == ["BAILEY_66", "BAILEY_66", "THM_I", "THM_I"]
    assert all(s["passes"] == s["samples"] == 2 for s in a["identities"])
    assert qsv_py.run_suite(text=True, identities=["JTP"], samples=1).splitlines()[2].startswith("JTP")


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_"):
            fn()
            print(f"ok  {name}")
