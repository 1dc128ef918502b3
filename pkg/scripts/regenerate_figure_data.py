#!/usr/bin/env python
"""
Regenerate the data behind every scenario in scenarios/.

Each scenario is run as written into its out_dir. With --snap-tau1, tau1 is
first moved to the nearest local minimum of the first-passage inversion.

Usage examples:
  python scripts/regenerate_figure_data.py
  python scripts/regenerate_figure_data.py --only linear_resonant --only wigner_linear
  python scripts/regenerate_figure_data.py --snap-tau1
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import List

REPO_ROOT = Path(__file__).resolve().parents[1]
if str(REPO_ROOT) not in sys.path:
    sys.path.insert(0, str(REPO_ROOT))

from cavity.errors import CavityError
from cavity.runner import cmd_minima, cmd_run
from cavity.scenario import ScenarioConfig, load_scenario

logger = logging.getLogger("cavity.scripts.regenerate")

SCENARIO_DIR = REPO_ROOT / "scenarios"


def _parse_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser(description="Regenerate scenario outputs.")
    parser.add_argument("--only", action="append", default=[], help="Scenario name without .cfg (repeat the flag).")
    parser.add_argument("--snap-tau1", action="store_true", help="Move tau1 to the nearest inversion minimum.")
    return parser.parse_args()


def _snap_tau1(config: ScenarioConfig) -> ScenarioConfig:
    candidates = cmd_minima(config)
    if not candidates:
        logger.warning("No inversion minimum on [0, %s]; keeping tau1=%s", config.tau1_scan_max, config.tau1)
        return config
    nearest = min(candidates, key=lambda c: abs(c.tau1 - config.tau1))
    if nearest.tau1 != config.tau1:
        logger.info("tau1 %s -> %s (P(g) = %.6f)", config.tau1, nearest.tau1, nearest.probability)
    return config.with_value("tau1", nearest.tau1)


def _scenario_paths(only: List[str]) -> List[Path]:
    paths = sorted(SCENARIO_DIR.glob("*.cfg"))
    if only:
        paths = [p for p in paths if p.stem in set(only)]
    return paths


def main() -> int:
    args = _parse_args()
    logging.basicConfig(level="INFO", format="%(asctime)s - %(name)s - %(levelname)s - %(message)s")

    failures = 0
    for path in _scenario_paths(args.only):
        try:
            config = load_scenario(path)
            if args.snap_tau1:
                config = _snap_tau1(config)
            report = cmd_run(config)
            logger.info("%s: %d rows, files %s", path.stem, report.rows, ", ".join(report.files))
        except CavityError as exc:
            failures += 1
            logger.error("%s failed [%s]: %s", path.stem, exc.code, exc)
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
