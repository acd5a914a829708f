from kolakoski import verify


def test_check_result_line():
    res = verify.CheckResult("demo", checked=3)
    assert res.passed and res.line().startswith("PASS demo: checked=3 failures=0")
    res.fail("boom")
    assert not res.passed and "first=boom" in res.line()
    assert not verify.CheckResult("empty").passed


def test_small_checks_pass():
    for res in (
        verify.check_prefix_16(),
        verify.check_fixed_point(2000),
        verify.check_c_infinity(50, 100),
        verify.check_length_estimates(200),
        verify.check_inverse_pairs(1000),
        verify.check_mirror_dichotomy(1000, 40, 200),
        verify.check_closed_forms(2000),
        verify.check_syntax(300, 4),
        verify.check_derivative_containment(50),
    ):
        assert res.passed, res.line()


def test_geometric_bound_helper(big):
    assert verify.geometric_bound_violations(big, 16) == []
    assert verify.geometric_bound_violations(big, 2) == [2]


def test_suites_are_registered():
    assert set(verify.SUITES) == {"sequence", "lemmas", "structure"}
    assert all(callable(c) for checks in verify.SUITES.values() for c in checks)
