#!/usr/bin/env python3
"""Just-in-time window evaluation: every job must finish inside [t1, t2].

Two instances: a 7-job single-machine chain, and the bundled 12-job
three-machine set. Dispatch rule is earliest start within the window,
positions fixed.
"""

from balsched.fixtures import build_fixture
from balsched.jit import PenaltyWeights, WindowJob, penalty_max, penalty_sum, schedule_windows

ROWS = [
    # id, processing time, window open, window close
    ("a1", 0.5, 0.0, 1.1),
    ("a2", 0.6, 0.6, 1.6),
    ("a3", 0.6, 1.2, 2.4),
    ("a4", 0.9, 1.8, 2.8),
    ("a5", 0.7, 2.7, 3.7),
    ("a6", 0.8, 3.5, 4.5),
    ("a7", 0.7, 4.0, 5.0),
]


def run(rows, note):
    jobs = [
        WindowJob(id=j, processing_time=th, t1=t1, t2=t2, machine=1, position=p)
        for p, (j, th, t1, t2) in enumerate(rows, start=1)
    ]
    res = schedule_windows(jobs)
    print(note)
    for job in jobs:
        mark = "" if job.id not in res.infeasible_jobs else "   <- misses its window"
        print(
            f"  {job.id}: start {res.starts[job.id]:.1f} "
            f"finish {res.completions[job.id]:.1f} window [{job.t1}, {job.t2}]{mark}"
        )
    print(f"  feasible: {res.feasible}")
    return jobs, res


jobs, res = run(ROWS, "single machine, 7 jobs:")
w = PenaltyWeights(alpha=1.0, beta=1.0)
print(f"  penalty sum {penalty_sum(jobs, res.completions, w):.2f}, "
      f"max {penalty_max(jobs, res.completions, w):.2f}")

# Stretch the fourth job from 0.9 to 1.2 and the chain breaks at a4 and
# ripples into a7.
bumped = [(j, 1.2 if j == "a4" else th, t1, t2) for j, th, t1, t2 in ROWS]
jobs, res = run(bumped, "\nsame chain, a4 stretched to 1.2:")
print(f"  penalty sum now {penalty_sum(jobs, res.completions, w):.2f}")

print("\nthree machines, 12 jobs (bundled fixture):")
f = build_fixture("jit-windows")
res = schedule_windows(f.window_jobs)
by_machine = {}
for job in f.window_jobs:
    by_machine.setdefault(job.machine, []).append(job)
for m in sorted(by_machine):
    line = "  ".join(
        f"{j.id}->{res.completions[j.id]:.1f}"
        for j in sorted(by_machine[m], key=lambda j: j.position)
    )
    print(f"  machine {m}: {line}")
print(f"  feasible: {res.feasible}")
