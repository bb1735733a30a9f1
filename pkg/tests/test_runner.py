import threading

from src.utils.config import RunConfig
from src.utils.errors import NormalFormError
from src.verification.runner import CheckRunner
from src.verification.suite import CheckReport, build_checks, report_to_json, run_check, verify_all


def report(name, passed=True):
    return lambda: CheckReport(name, passed)


def test_results_sorted_by_name():
    runner = CheckRunner([("b", report("b")), ("a", report("a")), ("c", report("c", False))], workers=3)
    reports = runner.run()
    assert [r.name for r in reports] == ["a", "b", "c"]
    assert [r.passed for r in reports] == [True, True, False]
    assert not runner.is_alive()


def test_stop_on_failure():
    """A single worker stops after the first failing check"""
    checks = [("a", report("a", False)), ("b", report("b")), ("c", report("c"))]
    reports = CheckRunner(checks, workers=1, stop_on_failure=True).run()
    assert [r.name for r in reports] == ["a"]


def test_checks_run_on_worker_threads():
    seen = set()

    def check():
        seen.add(threading.current_thread().name)
        return CheckReport("t", True)

    CheckRunner([("t", check)], workers=2).run()
    assert threading.main_thread().name not in seen


def test_run_check_records_engine_errors():
    def broken(ctx):
        raise NormalFormError("gauge block at order 0 is singular")

    result = run_check("normal_form.broken", broken, None)
    assert not result.passed
    assert result.witness.startswith("NormalFormError")
    assert result.failures == 1
    assert "elapsed" not in result.to_json()


def test_raising_check_does_not_drop_the_queue():
    """A single worker records the error and keeps going"""
    def boom():
        return 1 / 0

    reports = CheckRunner([("a", boom), ("b", report("b"))], workers=1).run()
    assert [r.name for r in reports] == ["a", "b"]
    assert not reports[0].passed
    assert reports[0].witness.startswith("ZeroDivisionError")
    assert reports[1].passed


def test_run_check_records_unexpected_errors():
    def broken(ctx):
        return {}["missing"]

    result = run_check("casimir.broken", broken, None)
    assert not result.passed
    assert result.witness.startswith("KeyError")


def test_empty_report_is_not_a_pass():
    assert report_to_json(RunConfig(cartan_type="A1"), [])["passed"] is False


def test_build_checks_depends_on_config():
    names = {name for name, _ in build_checks(RunConfig(cartan_type="A1", N=1))}
    assert "wakimoto.n1_proposition" in names
    assert "casimir.perturbed_control" not in names
    names = {name for name, _ in build_checks(RunConfig(cartan_type="A2", N=2))}
    assert "wakimoto.n1_proposition" not in names
    assert "casimir.perturbed_control" in names


def test_verify_subset():
    config = RunConfig(cartan_type="A1", N=1, D=1, workers=2)
    names = ["liealg.structure.A1", "casimir.leibniz", "casimir.twist.adjoint", "normal_form.round_trip",
             "wakimoto.homomorphism"]
    reports = verify_all(config, names)
    assert [r.name for r in reports] == sorted(names)
    assert all(r.passed for r in reports), [r.witness for r in reports]
    data = report_to_json(config, reports)
    assert data["passed"]
    assert "workers" not in data["config"]
