"""The 12 task rule sets, goal templating, outcomes, and the plan solver."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from ..world import (
    Action,
    TaskInstance,
    WorldState,
    generate_actions,
    apply_action,
    initial_state,
)

TASK_KINDS = (
    "CL", "SE", "SO", "MA", "FI", "PU",
    "PL", "CO", "DMA", "MMA", "MDE", "MFI",
)

# capability tags per kind: E, M, L, P, PR
CAPABILITY_TAGS = {
    "CL": ("E",),
    "SE": ("M",),
    "SO": ("L",),
    "MA": ("P",),
    "FI": ("PR",),
    "PU": ("PR",),
    "PL": ("L", "PR"),
    "CO": ("PR", "P"),
    "DMA": ("L", "P"),
    "MMA": ("M", "P"),
    "MDE": ("M", "L"),
    "MFI": ("PR", "M"),
}


@dataclass(frozen=True)
class Outcome:
    status: str  # ongoing | success | failure
    reason: Optional[str] = None
    # reasons: completed, wrong-terminal-choice, overshoot,
    #          step-budget-exhausted, invalid-response

    @property
    def is_terminal(self) -> bool:
        return self.status != "ongoing"


ONGOING = Outcome("ongoing")
SUCCESS = Outcome("success", "completed")


def level_param(kind: str, level: int):
    """Kind-specific difficulty scale for level 1-3."""
    if level not in (1, 2, 3):
        raise ValueError(f"level must be 1-3, got {level}")
    table = {
        "CL": (1, 2, 3),       # copies per item kind
        "SE": (1, 2, 3),       # items to remember
        "SO": (2, 3, 4),       # animals to sort
        "MA": (1, 2, 3),       # doors on path
        "DMA": (1, 2, 3),
        "MMA": (1, 2, 3),
        "FI": (1, 2, 3),       # missing pieces
        "PU": (1, 2, 3),
        "MFI": (1, 2, 3),
        "PL": (4, 8, 8),       # candidate positions (L3 adds a rotation)
        "CO": ((1, 3), (2, 6), (3, 9)),  # target count range
        "MDE": (1, 2, 3),      # correspondence pairs
    }
    return table[kind][level - 1]


_REGISTRY: dict[str, type] = {}


def register(kind: str):
    def deco(cls):
        _REGISTRY[kind] = cls
        return cls

    return deco


def rules_for(kind: str) -> type:
    if kind not in _REGISTRY:
        raise KeyError(f"unknown task kind {kind!r}")
    return _REGISTRY[kind]


def goal_text(instance: TaskInstance) -> str:
    return rules_for(instance.kind).goal(instance)


def step_outcome(instance: TaskInstance, state: WorldState) -> Outcome:
    out = rules_for(instance.kind).outcome(instance, state)
    if out.status == "ongoing" and state.budget is not None:
        if state.step_index >= state.budget:
            return Outcome("failure", "step-budget-exhausted")
    return out


def solve_bfs(
    instance: TaskInstance, max_depth: int = 24
) -> Optional[list[Action]]:
    """Shortest success plan by breadth-first search over the action graph.

    Returns None when no success state is reachable within ``max_depth``.
    """
    start = initial_state(instance, budget=None)
    if start.status == "success":
        return []
    seen = {start.canonical_key()}
    queue: deque[tuple[WorldState, list[Action]]] = deque([(start, [])])
    while queue:
        state, path = queue.popleft()
        if len(path) >= max_depth:
            continue
        for action in generate_actions(state):
            nxt = apply_action(state, action)
            if nxt.status == "success":
                return path + [action]
            if nxt.status == "failure":
                continue
            key = nxt.canonical_key()
            if key not in seen:
                seen.add(key)
                queue.append((nxt, path + [action]))
    return None


class Unsolvable(Exception):
    pass


def optimal_plan(instance: TaskInstance) -> list[Action]:
    """Minimum-length success sequence; raises Unsolvable if none exists."""
    plan = solve_bfs(instance)
    if plan is None:
        raise Unsolvable(f"no success plan for {instance.kind}-L{instance.level} seed {instance.seed}")
    return plan


def pluralize(name: str, n: int) -> str:
    return name if n == 1 else name + "s"


# register the rule sets
from . import basics, choosing, maze, pieces, placing  # noqa: E402,F401
