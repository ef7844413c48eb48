#!/usr/bin/env python3
"""From a team schedule to monthly factory orders, step by step.

The 1982 home-building programme: 9 large-panel buildings on 8 assembly
teams over 19 months. Each building is a multiset of vertical sections;
each section climbs its floor ladder at a constant rate; each floor of
each section type consumes a fixed bill of structural details. Chaining
those three tables turns the schedule into month-by-month detail demand.
"""

import numpy as np

from balsched.fixtures import build_fixture
from balsched.fileio import comparison_report, render_gantt
from balsched.homebuilding import (
    DETAIL_TYPES,
    detail_shares,
    horizon_requirement_table,
    monthly_detail_requirements,
    monthly_floor_requirements,
)

f = build_fixture("kope-1982")
project, schedule = f.project, f.team_schedule

print(render_gantt(project, schedule))

# month 1: only building a1 has started (at month 0.5), so half a month
# of progress at 19 floor-units / 9 months
profile = monthly_floor_requirements(project, schedule, 1)
print("month 1 floor-units by section type (nonzero only):")
for section, row in profile.sections.items():
    nonzero = {floor: round(units, 2) for floor, units in row.items() if units > 1e-9}
    if nonzero:
        print(f"  {section}: {nonzero}")

gamma = monthly_detail_requirements(project, schedule, 1)
print("\nmonth 1 detail requirements:")
for name, value in zip(DETAIL_TYPES, gamma):
    print(f"  {name}: {value:7.2f}")
shares = detail_shares(gamma)
print("  shares (%):", " ".join(f"{s:.1f}" for s in shares))

table = horizon_requirement_table(project, schedule)
print("\nfull horizon, d1 column (floor-slab class):")
d1 = table.column("d1")
for month, value in zip(table.months, d1):
    bar = "#" * int(value / 60)
    print(f"  {month:>2} {value:8.1f} {bar}")
month, value = table.peak("d1")
print(f"peak: {value:.1f} in month {month}")

# the bundled fixture carries the published monthly table; compare
rows = comparison_report(table, f.reference_requirements)
close = sum(1 for r in rows if r.rel_deviation <= 0.10)
print(f"\nvs the published table: {close}/{len(rows)} cells within 10%")
worst = max((r for r in rows if np.isfinite(r.rel_deviation)),
            key=lambda r: r.rel_deviation)
print(f"worst finite cell: month {worst.month} {worst.detail} "
      f"computed {worst.computed:.1f} vs {worst.reference:.1f}")
row = next(r for r in rows if r.month == 1 and r.detail == "d2")
print(f"month-1 d2: computed {row.computed:.0f} vs published {row.reference:.0f} "
      f"({100 * row.rel_deviation:.1f}% off)")
