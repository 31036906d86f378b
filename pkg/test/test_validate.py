from rfcombiner.validate import CHECKS, run_invariant_suite


def test_invariant_suite_passes():
    results = run_invariant_suite(seed=0)
    assert [r.name for r in results] == [name for name, _ in CHECKS]
    failed = [f"{r.name}: {r.detail}" for r in results if not r.passed]
    assert failed == []


def test_check_errors_are_reported(monkeypatch):
    from rfcombiner import validate

    def broken(rng):
        raise RuntimeError("boom")

    monkeypatch.setattr(validate, "CHECKS", [("broken", broken)])
    (result,) = validate.run_invariant_suite()
    assert not result.passed
    assert result.detail == "RuntimeError: boom"
