"""
Background execution of independent checks
"""
import logging
import queue
import threading
from dataclasses import dataclass, field

logger = logging.getLogger(__name__)


@dataclass
class CheckReport:
    """Outcome of one named check"""
    name: str
    passed: bool
    parameters: dict = field(default_factory=dict)
    witness: str = ""
    failures: int = 0
    elapsed: float = 0.0

    def to_json(self):
        # elapsed stays out so reports are reproducible
        return {"name": self.name, "passed": self.passed, "parameters": self.parameters,
                "witness": self.witness, "failures": self.failures}


class CheckRunner:
    """
    Run named checks on a pool of worker threads

    Each check is a zero-argument callable returning a CheckReport. Results
    arrive through a queue in completion order and come back sorted by name.
    """

    def __init__(self, checks, workers=1, stop_on_failure=False):
        """
        Initialize with the checks to run

        Args:
            checks: List of (name, callable)
            workers: Number of worker threads
            stop_on_failure: Skip the remaining checks after the first failure
        """
        self.checks = list(checks)
        self.workers = max(1, workers)
        self.stop_on_failure = stop_on_failure
        self.task_queue = queue.Queue()
        self.result_queue = queue.Queue()
        self.stop_event = threading.Event()
        self.threads = []

    def start(self):
        """Start the worker threads"""
        if any(t.is_alive() for t in self.threads):
            return
        for item in self.checks:
            self.task_queue.put(item)
        self.threads = []
        for _ in range(min(self.workers, len(self.checks)) or 1):
            thread = threading.Thread(target=self._run)
            thread.daemon = True
            thread.start()
            self.threads.append(thread)

    def stop(self):
        """Ask the workers to finish after their current check"""
        self.stop_event.set()
        for thread in self.threads:
            thread.join(timeout=1.0)

    def _run(self):
        while not self.stop_event.is_set():
            try:
                name, check = self.task_queue.get_nowait()
            except queue.Empty:
                return
            logger.debug("running %s", name)
            try:
                report = check()
            except Exception as e:
                logger.exception("check %s raised", name)
                report = CheckReport(name, False, witness=f"{type(e).__name__}: {e}", failures=1)
            self.result_queue.put(report)
            if self.stop_on_failure and not report.passed:
                self.stop_event.set()

    def is_alive(self):
        """Check if any worker is still running"""
        return any(t.is_alive() for t in self.threads)

    def results(self):
        """
        Wait for the workers and collect their reports

        Returns:
            List of CheckReport sorted by name
        """
        for thread in self.threads:
            thread.join()
        reports = []
        while True:
            try:
                reports.append(self.result_queue.get_nowait())
            except queue.Empty:
                break
        return sorted(reports, key=lambda r: r.name)

    def run(self):
        """Start, wait and return the sorted reports"""
        self.start()
        return self.results()
