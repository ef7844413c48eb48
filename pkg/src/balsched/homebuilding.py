"""Monthly detail-requirement cascade for serial home building.

The hierarchy: assembly teams erect buildings; a building is a multiset of
typical architectural sections (vertical "columns"); every section of a
building climbs the same ladder of typical floors bottom-up; each floor type
of each section type consumes a fixed bill of structural details. Given a
team schedule (who builds what, starting when, in months), the cascade turns
linear per-section progress into month-by-month detail requirement vectors
that a house-building factory must supply.

Progress model: a section climbs its building's floor ladder at the constant
rate of (U - 1) floor-units per assembly duration, where U is the total unit
count of the ladder; the terminal unit is never entered (the default "U-1"
rate basis; "U" uses all U units at rate U/duration). Months are uniform
unit intervals: month m covers [m-1, m); day-denominated quantities convert
at 30 days per month.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

FLOOR_TYPES = ("r1", "r2", "r3", "r4", "r5", "r6", "r7", "r8")
DETAIL_TYPES = ("d1", "d2", "d3", "d4", "d5", "d6", "d7", "d8")

#: How day-denominated shifts convert to the monthly clock.
DAYS_PER_MONTH = 30.0

RATE_BASES = ("U-1", "U")


@dataclass(frozen=True)
class SectionType:
    """A section template: floor type x detail type -> details per floor.

    ``detail_matrix`` is an 8x8 grid in (FLOOR_TYPES, DETAIL_TYPES) order.
    """

    id: str
    detail_matrix: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        if len(self.detail_matrix) != len(FLOOR_TYPES):
            raise ValueError(
                f"section {self.id}: detail matrix needs "
                f"{len(FLOOR_TYPES)} floor rows"
            )
        for floor, row in zip(FLOOR_TYPES, self.detail_matrix):
            if len(row) != len(DETAIL_TYPES):
                raise ValueError(
                    f"section {self.id}: row {floor} needs "
                    f"{len(DETAIL_TYPES)} detail entries"
                )
            if any(v < 0 for v in row):
                raise ValueError(
                    f"section {self.id}: negative entry in row {floor}"
                )

    def row(self, floor: str) -> tuple[float, ...]:
        return self.detail_matrix[FLOOR_TYPES.index(floor)]

    def matrix_array(self) -> np.ndarray:
        return np.asarray(self.detail_matrix, dtype=float)


@dataclass(frozen=True)
class BuildingType:
    """A building template: how many units of each floor type it stacks."""

    id: str
    floor_counts: Mapping[str, int]

    def __post_init__(self):
        for floor, count in self.floor_counts.items():
            if floor not in FLOOR_TYPES:
                raise ValueError(
                    f"building type {self.id}: unknown floor type '{floor}'"
                )
            if count < 0:
                raise ValueError(
                    f"building type {self.id}: negative count for {floor}"
                )
        if self.total_units < 1:
            raise ValueError(
                f"building type {self.id}: needs at least one floor unit"
            )

    @property
    def total_units(self) -> int:
        """U: total floor units on the ladder."""
        return sum(self.floor_counts.values())


def floor_sequence(building_type: BuildingType) -> list[tuple[str, int]]:
    """Bottom-up ladder of (floor type, unit count), zero counts skipped."""
    return [
        (floor, building_type.floor_counts[floor])
        for floor in FLOOR_TYPES
        if building_type.floor_counts.get(floor, 0) > 0
    ]


def _unit_layout(building_type: BuildingType) -> list[str]:
    """The ladder expanded unit by unit: element j is the floor type of
    the j-th floor-unit a section passes through."""
    layout: list[str] = []
    for floor, count in floor_sequence(building_type):
        layout.extend([floor] * count)
    return layout


@dataclass(frozen=True)
class Building:
    """One concrete building: template, section multiset, timing."""

    id: str
    building_type: str
    section_counts: Mapping[str, int]
    assembly_duration: float
    start: float
    general_square: float = 0.0

    def __post_init__(self):
        if self.assembly_duration <= 0:
            raise ValueError(
                f"building {self.id}: assembly_duration must be positive"
            )
        if self.start < 0:
            raise ValueError(f"building {self.id}: negative start")
        if sum(self.section_counts.values()) < 1:
            raise ValueError(
                f"building {self.id}: needs at least one section"
            )
        if any(c < 0 for c in self.section_counts.values()):
            raise ValueError(
                f"building {self.id}: negative section count"
            )


@dataclass(frozen=True)
class TeamSchedule:
    """Assembly teams and their building placements.

    ``assignments`` maps a team id to an ordered list of
    (building id, start month); the implied occupancy is
    [start, start + duration).
    """

    teams: tuple[str, ...]
    assignments: Mapping[str, tuple[tuple[str, float], ...]]

    def placements(self) -> list[tuple[str, str, float]]:
        """All (team, building id, start) triples in team order."""
        out = []
        for team in self.teams:
            for building_id, start in self.assignments.get(team, ()):
                out.append((team, building_id, start))
        return out


def team_schedule_violations(
    schedule: TeamSchedule, buildings: Mapping[str, Building]
) -> list[str]:
    """Structural checks: known ids, single placement, disjoint occupancy."""
    violations: list[str] = []
    for team in schedule.assignments:
        if team not in schedule.teams:
            violations.append(f"schedule: unknown team '{team}'")
    placed: set[str] = set()
    for team in schedule.teams:
        spans: list[tuple[float, float, str]] = []
        for building_id, start in schedule.assignments.get(team, ()):
            if building_id not in buildings:
                violations.append(
                    f"team {team}: unknown building id '{building_id}'"
                )
                continue
            if building_id in placed:
                violations.append(
                    f"building {building_id}: placed more than once"
                )
            placed.add(building_id)
            if start < 0:
                violations.append(
                    f"building {building_id}: negative start {start}"
                )
            duration = buildings[building_id].assembly_duration
            spans.append((start, start + duration, building_id))
        spans.sort()
        for (s1, e1, b1), (s2, e2, b2) in zip(spans, spans[1:]):
            if s2 < e1 - 1e-9:
                violations.append(
                    f"team {team}: placements {b1} and {b2} overlap"
                )
    return violations


def validate_team_schedule(
    schedule: TeamSchedule, buildings: Mapping[str, Building]
) -> TeamSchedule:
    """Raise ValueError on any broken rule; otherwise return the schedule."""
    violations = team_schedule_violations(schedule, buildings)
    if violations:
        raise ValueError("; ".join(violations))
    return schedule


@dataclass(frozen=True)
class MonthlyFloorProfile:
    """Per-month fractional floor-unit output, by section and floor type."""

    month: int
    sections: Mapping[str, Mapping[str, float]]

    def entry(self, section: str, floor: str) -> float:
        return self.sections.get(section, {}).get(floor, 0.0)


@dataclass(frozen=True)
class RequirementTable:
    """Month x detail-type requirement values (gamma)."""

    months: tuple[int, ...]
    values: tuple[tuple[float, ...], ...]
    details: tuple[str, ...] = DETAIL_TYPES

    def row(self, month: int) -> tuple[float, ...]:
        return self.values[self.months.index(month)]

    def column(self, detail: str) -> tuple[float, ...]:
        j = self.details.index(detail)
        return tuple(row[j] for row in self.values)

    def peak(self, detail: str) -> tuple[int, float]:
        """(month, value) of the column maximum; earliest month on ties."""
        col = self.column(detail)
        best = max(col)
        return self.months[col.index(best)], best

    def to_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


@dataclass(frozen=True)
class Project:
    """The static home-building world: templates, buildings, horizon."""

    section_types: Mapping[str, SectionType]
    building_types: Mapping[str, BuildingType]
    buildings: Mapping[str, Building]
    horizon_months: int
    rate_basis: str = "U-1"

    def __post_init__(self):
        if self.rate_basis not in RATE_BASES:
            raise ValueError(
                f"unknown rate basis '{self.rate_basis}'; "
                f"expected one of {RATE_BASES}"
            )
        if self.horizon_months < 1:
            raise ValueError("horizon_months must be positive")
        for building in self.buildings.values():
            if building.building_type not in self.building_types:
                raise ValueError(
                    f"building {building.id}: unknown building type "
                    f"'{building.building_type}'"
                )
            for section in building.section_counts:
                if section not in self.section_types:
                    raise ValueError(
                        f"building {building.id}: unknown section type "
                        f"'{section}'"
                    )

    def building_type_of(self, building: Building) -> BuildingType:
        return self.building_types[building.building_type]


def _progress_cap(project: Project, building_type: BuildingType) -> int:
    """How many floor-units a section actually completes over the duration."""
    u = building_type.total_units
    return u - 1 if project.rate_basis == "U-1" else u


def section_progress(
    project: Project,
    building: Building,
    month: int,
    start: float | None = None,
) -> dict[str, float]:
    """Fractional floor-units one section of ``building`` completes in a month.

    The section climbs the floor ladder linearly from ``start`` (defaults to
    the building's own planned start) over the assembly duration; the month
    window is [month-1, month). Partially covered floor-units are prorated.
    """
    if start is None:
        start = building.start
    building_type = project.building_type_of(building)
    cap = _progress_cap(project, building_type)
    rate = cap / building.assembly_duration

    def cumulative(t: float) -> float:
        return min(max(rate * (t - start), 0.0), float(cap))

    c0 = cumulative(float(month - 1))
    c1 = cumulative(float(month))
    profile = {floor: 0.0 for floor in FLOOR_TYPES}
    if c1 <= c0:
        return profile
    layout = _unit_layout(building_type)
    for unit in range(int(c0), min(int(np.ceil(c1)), cap)):
        overlap = min(c1, unit + 1.0) - max(c0, float(unit))
        if overlap > 0:
            profile[layout[unit]] += overlap
    return profile


def monthly_floor_requirements(
    project: Project, schedule: TeamSchedule, month: int
) -> MonthlyFloorProfile:
    """Floor-units demanded in a month, by section type and floor type.

    Every section of a building progresses in parallel, so a building
    contributes its per-section progress multiplied by its section counts.
    """
    sections: dict[str, dict[str, float]] = {
        s: {floor: 0.0 for floor in FLOOR_TYPES} for s in project.section_types
    }
    for _team, building_id, start in schedule.placements():
        building = project.buildings[building_id]
        progress = section_progress(project, building, month, start)
        for section, count in building.section_counts.items():
            if count == 0:
                continue
            row = sections[section]
            for floor, units in progress.items():
                row[floor] += count * units
    return MonthlyFloorProfile(month=month, sections=sections)


def _combined_section_matrix(project: Project, building: Building) -> np.ndarray:
    """Sum of section detail matrices weighted by the building's counts."""
    combined = np.zeros((len(FLOOR_TYPES), len(DETAIL_TYPES)))
    for section, count in building.section_counts.items():
        if count:
            combined += count * project.section_types[section].matrix_array()
    return combined


def _floor_vector(
    project: Project, building: Building, month: int, start: float
) -> np.ndarray:
    progress = section_progress(project, building, month, start)
    return np.array([progress[floor] for floor in FLOOR_TYPES])


def building_requirement_table(
    project: Project, building: Building, start: float | None = None
) -> np.ndarray:
    """The (horizon x 8) detail requirements of one building in isolation.

    Schedules are linear in their buildings, so a full table is the sum of
    these per-building tables -- the basis for cheap what-if scoring.
    """
    if start is None:
        start = building.start
    combined = _combined_section_matrix(project, building)
    rows = [
        _floor_vector(project, building, month, start) @ combined
        for month in range(1, project.horizon_months + 1)
    ]
    return np.vstack(rows)


def monthly_detail_requirements(
    project: Project, schedule: TeamSchedule, month: int
) -> tuple[float, ...]:
    """Detail requirement vector gamma for one month of the schedule."""
    gamma = np.zeros(len(DETAIL_TYPES))
    for _team, building_id, start in schedule.placements():
        building = project.buildings[building_id]
        combined = _combined_section_matrix(project, building)
        gamma += _floor_vector(project, building, month, start) @ combined
    return tuple(float(v) for v in gamma)


def horizon_requirement_table(
    project: Project,
    schedule: TeamSchedule,
    months: Sequence[int] | None = None,
) -> RequirementTable:
    """Requirement rows for every month of the horizon (or a subrange)."""
    if months is None:
        months = range(1, project.horizon_months + 1)
    months = tuple(months)
    total = np.zeros((project.horizon_months, len(DETAIL_TYPES)))
    for _team, building_id, start in schedule.placements():
        building = project.buildings[building_id]
        total += building_requirement_table(project, building, start)
    values = tuple(
        tuple(float(v) for v in total[month - 1]) for month in months
    )
    return RequirementTable(months=months, values=values)


def detail_shares(gamma: Sequence[float]) -> tuple[float, ...]:
    """Percentage split of a requirement vector: 100 * gamma_k / sum(gamma).

    Raises:
        ValueError: on an all-zero vector ("empty month").
    """
    total = sum(gamma)
    if total <= 0:
        raise ValueError("empty month: requirement vector sums to zero")
    return tuple(100.0 * g / total for g in gamma)
