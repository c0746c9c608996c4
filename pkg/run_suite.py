# In: run_suite.py

import os
import sys

from dotenv import load_dotenv

from treespace.logging_config import configure_logging
from treespace.suite import run_suite


def main() -> int:
    """
    Runs the quick property suite with the seed configured in the .env file
    and prints one status line per check.
    """
    print("Loading environment variables from .env file...")
    load_dotenv()

    seed = int(os.getenv("TREESPACE_SUITE_SEED", "0"))
    configure_logging()
    print(f"Running the quick property suite with seed {seed}...")

    report = run_suite(quick=True, seed=seed)
    for check in report.checks:
        mark = "✅" if check.passed else "🔴"
        line = f"{mark} {check.name}: {check.cases} cases"
        if check.detail:
            line += f" ({check.detail})"
        print(line)

    if report.passed:
        print("✅ SUCCESS: every property check passed.")
        return 0
    print("🔴 ERROR: at least one property check failed.")
    return 3


if __name__ == "__main__":
    sys.exit(main())
