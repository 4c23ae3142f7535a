#!/usr/bin/env python3
"""
fpimpulse Test Suite Runner
===========================

Runs the pytest suite by category and optionally writes a JSON report.

Usage:
    python testing/run_tests.py [--category CATEGORY] [--verbose] [--report] [--coverage]

Categories:
    - growth: SDE stepping, Monte Carlo statistics
    - calibrate: data readers, P/Err measures, parameter searches
    - numerics: grid, WENO, limiter, diffusion, Heun
    - pde: forward/adjoint solvers, duality, mass laws
    - optimize: controls, objective, Picard loop, sweeps
    - cli: configuration, runner, plots
    - acceptance: slow acceptance-scale runs
    - all: everything except acceptance (default)
"""

import argparse
import json
import os
import subprocess
import sys
import time
from pathlib import Path
from typing import Any, Dict, List

PROJECT_ROOT = Path(__file__).parent.parent
TESTING_DIR = PROJECT_ROOT / "testing"

# category -> (test paths relative to testing/, extra pytest args)
CATEGORIES: Dict[str, tuple] = {
    "growth": (["unit/test_growth.py"], []),
    "calibrate": (["unit/test_calibrate.py"], []),
    "numerics": (["unit/test_grid.py", "unit/test_weno.py", "unit/test_kernels.py"], []),
    "pde": (["unit/test_pde.py"], []),
    "optimize": (["unit/test_optimize.py"], []),
    "cli": (["unit/test_run_config.py", "unit/test_plots.py", "integration/test_cli.py"], []),
    "acceptance": (["integration/test_acceptance.py"], ["-m", "slow"]),
}
DEFAULT_CATEGORIES = ["growth", "calibrate", "numerics", "pde", "optimize", "cli"]


class TestRunner:
    __test__ = False

    def __init__(self, verbose: bool = False, generate_report: bool = False, coverage: bool = False):
        self.verbose = verbose
        self.generate_report = generate_report
        self.coverage = coverage
        self.results: List[Dict[str, Any]] = []
        self.start_time = time.time()

    def command(self, category: str) -> List[str]:
        paths, extra = CATEGORIES[category]
        runner = [sys.executable, "-m", "coverage", "run", "--append", "-m", "pytest"] if self.coverage \
            else [sys.executable, "-m", "pytest"]
        args = ["-c", str(TESTING_DIR / "pytest.ini"), "--rootdir", str(TESTING_DIR)]
        if not self.verbose:
            args.append("-q")
        return runner + args + extra + [str(TESTING_DIR / p) for p in paths]

    def run_test_category(self, category: str) -> Dict[str, Any]:
        """Run tests for a specific category"""
        print(f"\n📋 Running {category.upper()} tests...")
        started = time.time()
        proc = subprocess.run(self.command(category), cwd=PROJECT_ROOT, env=os.environ.copy())
        result = {
            "category": category,
            "exit_code": proc.returncode,
            "passed": proc.returncode == 0,
            "duration": time.time() - started,
        }
        print(f"   {'✅' if result['passed'] else '❌'} {category} ({result['duration']:.1f}s)")
        return result

    def check_venv(self) -> bool:
        """Check if running in virtual environment"""
        return hasattr(sys, "real_prefix") or (hasattr(sys, "base_prefix") and sys.base_prefix != sys.prefix)

    def generate_report_file(self):
        """Generate detailed test report"""
        if not self.generate_report:
            return
        report_dir = TESTING_DIR / "reports"
        report_dir.mkdir(exist_ok=True)
        timestamp = time.strftime("%Y%m%d_%H%M%S")
        report_file = report_dir / f"test_report_{timestamp}.json"
        report_data = {
            "timestamp": timestamp,
            "duration": time.time() - self.start_time,
            "environment": {
                "python_version": sys.version,
                "virtual_env": self.check_venv(),
                "platform": sys.platform,
                "project_root": str(PROJECT_ROOT),
            },
            "results": self.results,
        }
        report_file.write_text(json.dumps(report_data, indent=2))
        print(f"\n📄 Test report saved: {report_file}")

    def run(self, categories: List[str]) -> int:
        """Run the selected categories and print a summary"""
        print("🚀 fpimpulse Test Suite Starting...")
        print(f"   Project root: {PROJECT_ROOT}")
        print(f"   Virtual environment: {'Yes' if self.check_venv() else 'No'}")
        try:
            for category in categories:
                self.results.append(self.run_test_category(category))
            failed = [r["category"] for r in self.results if not r["passed"]]
            print("\n🏁 Test Suite Complete!")
            print(f"   Categories: {len(self.results)}, failed: {len(failed)}")
            print(f"   Duration: {time.time() - self.start_time:.2f}s")
            if failed:
                print(f"\n⚠️  Failed categories: {', '.join(failed)}")
                return 1
            print("\n🎉 All tests passed!")
            return 0
        finally:
            self.generate_report_file()


def main():
    parser = argparse.ArgumentParser(description="fpimpulse Test Suite")
    parser.add_argument("--category", choices=[*CATEGORIES, "all"], default="all", help="Test category to run")
    parser.add_argument("--verbose", "-v", action="store_true", help="Verbose output")
    parser.add_argument("--report", "-r", action="store_true", help="Generate test report")
    parser.add_argument("--coverage", action="store_true", help="Collect coverage with coverage.py")
    args = parser.parse_args()

    categories = DEFAULT_CATEGORIES if args.category == "all" else [args.category]
    runner = TestRunner(verbose=args.verbose, generate_report=args.report, coverage=args.coverage)
    return runner.run(categories)


if __name__ == "__main__":
    sys.exit(main())
