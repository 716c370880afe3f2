"""
eiscoh - Curated Scenario Suite

Runs both rationality-diagram checks over every curated scenario:
1. Build the field towers (embeddings, Galois generators)
2. Run the scenarios in parallel
3. Write one report per scenario plus a suite status file

Usage:
    python scripts/run_suite.py
    python scripts/run_suite.py --numeric --workers 4
    python scripts/run_suite.py --only gauss-n2 zeta5-n2
"""

import argparse
import json
import logging
import sys
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from datetime import datetime
from pathlib import Path
from threading import Lock

from tqdm import tqdm

# Add parent to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from eiscoh.config import setup_logging
from eiscoh.rationality import PASS, ScenarioConfig, dump_json, run_scenario
from eiscoh.scenarios import curated_scenarios

# Paths
SCRIPT_DIR = Path(__file__).parent
PROJECT_DIR = SCRIPT_DIR.parent
OUTPUT_DIR = PROJECT_DIR / "output"
STATUS_FILE = OUTPUT_DIR / "status.json"

# Configuration
MAX_WORKERS = 4

print_lock = Lock()
logger = logging.getLogger(__name__)


def run_one(scenario: ScenarioConfig, output_dir: Path) -> dict:
    """Run one scenario and write its report; failures are recorded, not raised."""
    start = time.time()
    try:
        document = run_scenario(scenario)
    except Exception as e:
        with print_lock:
            logger.error(f"{scenario.name}: {type(e).__name__}: {e}")
        return {
            'scenario': scenario.name,
            'status': 'error',
            'error': f"{type(e).__name__}: {e}",
            'seconds': round(time.time() - start, 2),
        }

    report_file = output_dir / f"{scenario.name}.json"
    report_file.write_text(dump_json(document) + "\n", encoding='utf-8')
    return {
        'scenario': scenario.name,
        'status': 'success',
        'verdict': document['verdict'],
        'report': str(report_file.relative_to(PROJECT_DIR)) if report_file.is_relative_to(PROJECT_DIR) else str(report_file),
        'seconds': round(time.time() - start, 2),
    }


def write_status(results: list[dict], started_at: str, state: str) -> dict:
    success = [r for r in results if r['status'] == 'success']
    status = {
        'status': state,
        'started_at': started_at,
        'last_updated': datetime.now().isoformat(timespec='seconds'),
        'progress': {
            'completed': len(results),
            'passed': sum(1 for r in success if r['verdict'] == PASS),
            'failed': sum(1 for r in success if r['verdict'] != PASS),
            'errors': len(results) - len(success),
        },
        'scenarios': sorted(results, key=lambda r: r['scenario']),
    }
    STATUS_FILE.write_text(json.dumps(status, indent=2, ensure_ascii=False), encoding='utf-8')
    return status


def main():
    parser = argparse.ArgumentParser(description="Run the curated rationality scenario suite")
    parser.add_argument("--numeric", action="store_true", help="Include scenarios with the quadrature oracle")
    parser.add_argument("--workers", type=int, default=MAX_WORKERS, help="Scenarios run in parallel")
    parser.add_argument("--only", nargs="+", metavar="NAME", help="Run only these scenarios")
    parser.add_argument("--output", type=Path, default=OUTPUT_DIR, help="Report directory")
    args = parser.parse_args()

    setup_logging(logging.WARNING)
    output_dir = args.output
    output_dir.mkdir(parents=True, exist_ok=True)

    scenarios = curated_scenarios(include_numeric=args.numeric)
    if args.only:
        unknown = set(args.only) - {s.name for s in scenarios}
        if unknown:
            print(f"Unknown scenarios: {', '.join(sorted(unknown))}")
            sys.exit(2)
        scenarios = [s for s in scenarios if s.name in args.only]

    print("=" * 70)
    print("EISCOH - Curated Scenario Suite")
    print(f"Scenarios: {len(scenarios)}")
    print(f"Workers: {args.workers}")
    print("=" * 70)

    # Towers are shared; build their embeddings and generators once, up front
    print("\n[1/3] Building field towers...")
    towers = {s.field: s.load_tower() for s in scenarios}
    for name, tower in sorted(towers.items()):
        tower.sigma_set()
        print(f"  {name}: degree {tower.degree}, {len(tower.generators)} generators")

    print("\n[2/3] Running scenarios...")
    started_at = datetime.now().isoformat(timespec='seconds')
    results = []

    with ThreadPoolExecutor(max_workers=args.workers) as executor:
        futures = {executor.submit(run_one, s, output_dir): s for s in scenarios}

        with tqdm(total=len(scenarios), desc="Scenarios", ncols=80) as pbar:
            for future in as_completed(futures):
                result = future.result()
                with print_lock:
                    results.append(result)
                    write_status(results, started_at, 'running')
                pbar.update(1)

    print("\n[3/3] Saving status...")
    status = write_status(results, started_at, 'completed')

    # Summary
    progress = status['progress']
    print("\n" + "=" * 70)
    print("RESULTS")
    print("=" * 70)
    print(f"\nPassed: {progress['passed']}/{len(results)}")
    for r in status['scenarios']:
        mark = r.get('verdict', 'ERROR')
        print(f"  {r['scenario']:<28} {mark:<6} {r['seconds']:>7.2f}s")

    print(f"\nFailed: {progress['failed']}")
    print(f"Errors: {progress['errors']}")
    for r in status['scenarios']:
        if r['status'] == 'error':
            print(f"  - {r['scenario']}: {r['error']}")
    print(f"\nReports saved to: {output_dir}")

    sys.exit(0 if progress['passed'] == len(results) else 1)


if __name__ == "__main__":
    main()
