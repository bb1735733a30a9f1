"""
Helper utility functions
"""
import os
import time


def create_directories(directories):
    """
    Create multiple directories if they don't exist

    Args:
        directories: List of directory paths to create
    """
    for directory in directories:
        os.makedirs(directory, exist_ok=True)
        print(f"Ensured directory exists: {directory}")


class Timer:
    """Simple timer class for measuring execution time"""

    def __init__(self, name="Operation", quiet=False):
        """
        Initialize timer

        Args:
            name: Name of the operation being timed
            quiet: Keep the elapsed time without printing it
        """
        self.name = name
        self.quiet = quiet
        self.start_time = None
        self.elapsed = 0.0

    def __enter__(self):
        """Start the timer when entering a context"""
        self.start_time = time.time()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        """Print elapsed time when exiting the context"""
        self.elapsed = time.time() - self.start_time
        if not self.quiet:
            print(f"{self.name} completed in {self.elapsed:.2f} seconds")


def print_report_summary(reports):
    """
    Print a one-line status per check and the totals

    Args:
        reports: List of CheckReport objects
    """
    failed = [r for r in reports if not r.passed]
    print("Check summary:")
    for report in reports:
        mark = "PASS" if report.passed else "FAIL"
        print(f"  [{mark}] {report.name} ({report.elapsed:.2f}s)")
    print(f"  Passed: {len(reports) - len(failed)} / {len(reports)}")
    if failed:
        print(f"  First failure: {failed[0].name}: {failed[0].witness}")
