"""
Running scenario files
======================

Scenario files describe base, fiber, warp and the checks to run.  The
same machinery backs the ``warpcheck`` command.
"""

from pathlib import Path

from warpcheck import scenario

root = Path(__file__).resolve().parents[1] / "scenarios"

# %%
# Every bundled scenario, with its exit status: 0 when all checks pass,
# 1 when a check fails.
for path in sorted(root.glob("*.json")):
    report = scenario.run_scenario(scenario.parse_scenario(path))
    print(f"{path.stem:36s} exit {report.exit_status}")

# %%
# The text report for the flagship case.
report = scenario.run_scenario(scenario.parse_scenario(root / "flagship_h3_inverse_xn_r2.json"))
print(scenario.emit_report(report, "text").decode())
