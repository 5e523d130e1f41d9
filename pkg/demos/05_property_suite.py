"""
Running the property suite
==========================

The suite samples states on Boolean spaces, MO_n and Greechie pastings and
checks each property exactly.  Mutations inject faults to make sure the
checks can fail.
"""

from collections import Counter
from pathlib import Path

from commoncause.theorems import SuiteConfig, parse_config, run_suite, suite_failed

config = parse_config(Path(__file__).with_name("small.cfg").read_text())
reports = run_suite(config)
tally = Counter((r.property, r.verdict.value) for r in reports)
for (prop, verdict), count in sorted(tally.items()):
    print(f"{prop:22s} {verdict:15s} {count}")
print("failed:", suite_failed(reports))

for mutation in ("additivity", "certificate"):
    mutated = SuiteConfig(families=("boolean",), boolean_atoms=(3,), seeds=(0,), mutations=(mutation,))
    bad = [r for r in run_suite(mutated) if r.failed]
    print(f"{mutation}: {bad[0].property} fails ({bad[0].reason})")
