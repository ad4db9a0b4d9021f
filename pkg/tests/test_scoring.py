"""Aggregation: weighted rates, capability profiles, random baselines."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridbench.scoring import (
    ANALYTIC_KINDS,
    BaselineEstimate,
    CAPABILITY_ORDER,
    LEVEL_WEIGHTS,
    MissingCellsError,
    SuccessTable,
    UnsupportedBaseline,
    analytic_random_baseline,
    capability_profile,
    default_capability_map,
    estimate_random_baseline,
    weighted_rate,
)
from gridbench.tasks import TASK_KINDS

# Published per-task success rates for three reference models, ordered
# CL SE SO MA FI PU PL CO DMA MMA MDE MFI per level.
KIND_ORDER = ("CL", "SE", "SO", "MA", "FI", "PU",
              "PL", "CO", "DMA", "MMA", "MDE", "MFI")

REFERENCE_RATES = {
    "gemini-2.5-pro": (
        (0.99, 1.00, 0.99, 0.95, 0.81, 0.19, 1.00, 0.72, 0.93, 0.66, 1.00, 0.81),
        (1.00, 1.00, 0.99, 0.18, 0.66, 0.13, 1.00, 0.36, 0.24, 0.49, 1.00, 0.66),
        (1.00, 1.00, 0.93, 0.03, 0.36, 0.07, 0.74, 0.19, 0.16, 0.00, 1.00, 0.36),
    ),
    "o3": (
        (1.00, 1.00, 0.97, 0.87, 0.83, 0.26, 1.00, 0.30, 0.90, 0.44, 1.00, 0.81),
        (0.98, 1.00, 0.95, 0.42, 0.52, 0.11, 0.98, 0.26, 0.47, 0.18, 1.00, 0.50),
        (0.92, 1.00, 0.97, 0.27, 0.30, 0.06, 0.71, 0.13, 0.17, 0.05, 1.00, 0.37),
    ),
    "gpt-4o": (
        (0.46, 1.00, 0.48, 0.33, 0.66, 0.26, 0.71, 0.00, 0.58, 0.00, 0.95, 0.64),
        (0.24, 0.76, 0.31, 0.19, 0.28, 0.09, 0.37, 0.00, 0.14, 0.00, 0.98, 0.26),
        (0.13, 0.50, 0.08, 0.00, 0.15, 0.03, 0.20, 0.01, 0.00, 0.00, 1.00, 0.18),
    ),
}

REFERENCE_PROFILES = {
    "gemini-2.5-pro": {"E": 100, "M": 70, "L": 79, "P": 31, "PR": 48},
    "o3": {"E": 95, "M": 67, "L": 80, "P": 30, "PR": 43},
    "gpt-4o": {"E": 23, "M": 49, "L": 43, "P": 7, "PR": 21},
}


def reference_table(model: str) -> SuccessTable:
    l1, l2, l3 = REFERENCE_RATES[model]
    rows = {
        kind: (l1[i], l2[i], l3[i]) for i, kind in enumerate(KIND_ORDER)
    }
    return SuccessTable.from_rows(rows, provenance="published")


class TestWeightedRate:
    def test_weights_are_point_two_three_five(self):
        assert LEVEL_WEIGHTS == (0.2, 0.3, 0.5)

    def test_worked_example(self):
        assert weighted_rate(0.99, 1.0, 1.0) == pytest.approx(0.998)
        assert weighted_rate(1.0, 0.5, 0.0) == pytest.approx(0.35)

    @pytest.mark.parametrize("bad", [(-0.1, 0, 0), (0, 1.2, 0), (0, 0, 2)])
    def test_out_of_range_rejected(self, bad):
        with pytest.raises(ValueError):
            weighted_rate(*bad)

    @given(st.floats(min_value=0, max_value=1))
    @settings(max_examples=50, deadline=None)
    def test_uniform_rate_is_a_fixed_point(self, p):
        assert weighted_rate(p, p, p) == pytest.approx(p)

    @given(
        st.floats(min_value=0, max_value=1),
        st.floats(min_value=0, max_value=1),
        st.floats(min_value=0, max_value=1),
        st.integers(min_value=0, max_value=2),
        st.floats(min_value=0, max_value=0.5),
    )
    @settings(max_examples=100, deadline=None)
    def test_monotone_in_each_level(self, p1, p2, p3, which, bump):
        ps = [p1, p2, p3]
        bumped = list(ps)
        bumped[which] = min(1.0, bumped[which] + bump)
        assert weighted_rate(*bumped) >= weighted_rate(*ps) - 1e-12


class TestCapabilityMap:
    def test_axes_cover_all_twelve_tasks(self):
        cap_map = default_capability_map()
        assert tuple(cap_map) == CAPABILITY_ORDER
        covered = {kind for kinds in cap_map.values() for kind in kinds}
        assert covered == set(TASK_KINDS)

    def test_axis_sizes(self):
        cap_map = default_capability_map()
        assert {cap: len(kinds) for cap, kinds in cap_map.items()} == {
            "E": 1, "M": 4, "L": 4, "P": 4, "PR": 5,
        }

    def test_axis_membership(self):
        cap_map = default_capability_map()
        assert set(cap_map["E"]) == {"CL"}
        assert set(cap_map["M"]) == {"SE", "MMA", "MDE", "MFI"}
        assert set(cap_map["L"]) == {"SO", "PL", "DMA", "MDE"}
        assert set(cap_map["P"]) == {"MA", "CO", "DMA", "MMA"}
        assert set(cap_map["PR"]) == {"FI", "PU", "PL", "CO", "MFI"}


class TestCapabilityProfile:
    @pytest.mark.parametrize("model", sorted(REFERENCE_RATES))
    def test_reference_model_profiles(self, model):
        profile = capability_profile(reference_table(model))
        assert profile == REFERENCE_PROFILES[model]

    def test_perfect_table_scores_100_everywhere(self):
        table = SuccessTable.from_rows(
            {kind: (1.0, 1.0, 1.0) for kind in TASK_KINDS}
        )
        assert capability_profile(table) == {c: 100 for c in CAPABILITY_ORDER}

    def test_missing_cell_is_an_error(self):
        table = reference_table("o3")
        del table.rates[("SE", 2)]
        with pytest.raises(MissingCellsError) as err:
            capability_profile(table)
        assert ("SE", 2) in err.value.cells


class TestSuccessTable:
    def test_set_validates_range(self):
        table = SuccessTable()
        with pytest.raises(ValueError):
            table.set("CL", 1, 1.5)

    def test_missing_cells_lists_the_full_grid_when_empty(self):
        assert len(SuccessTable().missing_cells()) == 36
        assert reference_table("o3").missing_cells() == []

    def test_json_round_trip(self):
        table = reference_table("gemini-2.5-pro")
        table.counts[("CL", 1)] = (99, 100)
        again = SuccessTable.from_json(table.to_json())
        assert again.rates == table.rates
        assert again.counts == table.counts
        assert again.provenance == "published"

    def test_csv_round_trip(self):
        table = reference_table("gpt-4o")
        again = SuccessTable.from_csv(table.to_csv())
        assert again.rates == pytest.approx(table.rates)


class TestAnalyticBaselines:
    @pytest.mark.parametrize("kind,level,expected", [
        ("SE", 1, Fraction(1, 4)),
        ("SE", 2, Fraction(2, 6) * Fraction(1, 5)),
        ("SO", 1, Fraction(1, 2)),
        ("SO", 2, Fraction(1, 6)),
        ("SO", 3, Fraction(1, 24)),
        ("FI", 1, Fraction(1, 4)),
        ("FI", 2, Fraction(1, 12)),
        ("FI", 3, Fraction(1, 24)),
        ("PU", 1, Fraction(1, 4)),
        ("MFI", 2, Fraction(1, 12)),
        ("PL", 1, Fraction(1, 4)),
        ("PL", 2, Fraction(1, 8)),
        ("MDE", 1, Fraction(1, 4)),
        ("MDE", 2, Fraction(1, 6)),
        ("MDE", 3, Fraction(1, 8)),
    ])
    def test_closed_forms(self, kind, level, expected):
        assert analytic_random_baseline(kind, level) == expected

    @pytest.mark.parametrize("kind", ["CL", "MA", "CO", "DMA", "MMA"])
    def test_no_closed_form_for_stateful_kinds(self, kind):
        assert kind not in ANALYTIC_KINDS
        with pytest.raises(UnsupportedBaseline):
            analytic_random_baseline(kind, 1)


class TestMonteCarloBaselines:
    def test_estimate_is_seed_deterministic(self):
        a = estimate_random_baseline("SO", 1, rounds=100, seed=3)
        b = estimate_random_baseline("SO", 1, rounds=100, seed=3)
        assert a == b
        assert 0.0 <= a.mean <= 1.0

    def test_estimate_tracks_the_closed_form(self):
        est = estimate_random_baseline("SE", 1, rounds=200)
        analytic = float(analytic_random_baseline("SE", 1))
        assert abs(est.mean - analytic) <= max(3 * est.std_error, 0.02)

    def test_std_error_definition(self):
        est = BaselineEstimate("SO", 1, 500, 0.5, half_width=0.0438)
        assert est.std_error == pytest.approx(0.0438 / 1.96)

    def test_rounds_must_be_positive(self):
        with pytest.raises(ValueError):
            estimate_random_baseline("SO", 1, rounds=0)
