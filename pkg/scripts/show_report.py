#!/usr/bin/env python3
"""
Show suite status or a saved scenario report.

Usage:
    python show_report.py                      # Suite status
    python show_report.py --report gauss-n2    # One scenario, record by record
    python show_report.py --errors             # Scenarios that raised
"""

import argparse
import json
from pathlib import Path

OUTPUT_DIR = Path(__file__).parent.parent / "output"
STATUS_FILE = OUTPUT_DIR / "status.json"


def load_json(path: Path):
    """Load a JSON file written by run_suite.py."""
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError:
        return None
    except json.JSONDecodeError:
        return {"error": f"{path.name} is corrupted"}


def format_status(status):
    """Format suite status for display."""
    if not status:
        print("No status file found. Run scripts/run_suite.py first.")
        return

    if "error" in status:
        print(f"Error: {status['error']}")
        return

    print("=" * 60)
    print("  EISCOH SUITE STATUS")
    print("=" * 60)

    st = status.get("status", "unknown")
    print(f"\n  Status: {st.upper()}")

    prog = status.get("progress", {})
    completed = prog.get("completed", 0)
    passed = prog.get("passed", 0)
    percent = 100 * passed / completed if completed else 0.0

    print("\n  Scenarios:")
    print(f"    Passed:  {passed} / {completed}")
    print(f"    Failed:  {prog.get('failed', 0)}")
    print(f"    Errors:  {prog.get('errors', 0)}")

    bar_width = 40
    filled = int(bar_width * percent / 100)
    bar = "█" * filled + "░" * (bar_width - filled)
    print(f"\n    [{bar}] {percent:.1f}% passing")

    print()
    for r in status.get("scenarios", []):
        verdict = r.get("verdict", "ERROR")
        print(f"    {r['scenario']:<28} {verdict:<6} {r.get('seconds', 0):>7.2f}s")

    print(f"\n  Started:  {status.get('started_at', 'N/A')}")
    print(f"  Updated:  {status.get('last_updated', 'N/A')}")

    if prog.get("errors", 0) > 0:
        print(f"\n  ⚠️  {prog['errors']} scenarios raised (run with --errors to see)")

    print("\n" + "=" * 60)


def format_report(name: str):
    """Format one scenario report: a line per record and the axiom ledger."""
    report = load_json(OUTPUT_DIR / f"{name}.json")
    if not report:
        print(f"No report found for {name}.")
        return
    if "error" in report:
        print(f"Error: {report['error']}")
        return

    print("=" * 60)
    print(f"  {name}: {report['verdict']}")
    print("=" * 60)

    scenario = report.get("scenario", {})
    print(f"\n  Field: {scenario.get('field')}   n = {scenario.get('n')}")
    print(f"  eta:   {scenario.get('eta')}")

    for check in ("intertwine_equivariance", "constant_term_diagram"):
        section = report.get(check, {})
        print(f"\n  {check}: {section.get('verdict', 'N/A')}")
        for record in section.get("records", []):
            print(f"    k={record['k']} sigma={record['sigma']:<8} {record['verdict']}")

    ledger = report.get("constant_term_diagram", {}).get("axiom_ledger", [])
    if ledger:
        print("\n  Axioms used:")
        for entry in ledger:
            where = f"k={entry['k']}" if "k" in entry else entry.get("scope", "")
            print(f"    {entry['axiom']:<12} {where}")

    flags = report.get("constant_term_diagram", {}).get("convention_flags", [])
    for flag in flags:
        print(f"\n  Convention {flag['name']} = {flag['value']} ({flag['depends_on']})")

    print("\n" + "=" * 60)


def show_errors():
    """Show scenarios that raised."""
    status = load_json(STATUS_FILE)
    if not status:
        print("No status file found.")
        return

    errors = [r for r in status.get("scenarios", []) if r.get("status") == "error"]
    print("=" * 60)
    print(f"  SUITE ERRORS ({len(errors)} total)")
    print("=" * 60)

    for err in errors:
        print(f"\n  {err['scenario']}")
        print(f"    Error: {err.get('error', 'unknown')}")


def main():
    parser = argparse.ArgumentParser(description="Show suite status or a scenario report")
    parser.add_argument("--report", "-r", metavar="NAME", help="Show one scenario report")
    parser.add_argument("--errors", "-e", action="store_true", help="Show scenarios that raised")
    args = parser.parse_args()

    if args.errors:
        show_errors()
    elif args.report:
        format_report(args.report)
    else:
        format_status(load_json(STATUS_FILE))


if __name__ == "__main__":
    main()
