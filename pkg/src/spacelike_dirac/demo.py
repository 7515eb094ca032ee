"""
Demo module for the spacelike Dirac toolkit.
Can be run with: python -m spacelike_dirac.demo

Runs every named scenario in human-readable format.
"""

from typing import List, Optional
import sys

from .__main__ import PRESETS, main as cli_main


def main(names: Optional[List[str]] = None) -> int:
    """Run the given presets (default: all of them); returns the worst exit code."""
    worst = 0
    for name in names or sorted(PRESETS):
        print("=" * 80)
        print(f" {name}: spacelike-dirac {' '.join(PRESETS[name])}")
        print("=" * 80)
        code = cli_main(["--format", "human", "--preset", name])
        print(f"[exit {code}]\n")
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:] or None))
