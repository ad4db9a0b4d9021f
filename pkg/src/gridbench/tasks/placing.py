"""Sorting (SO) and Placement (PL): place backpack contents at marked positions."""

from __future__ import annotations

from ..world import Action, SLOT_LETTERS, TaskInstance, Verb, WorldState
from . import Outcome, ONGOING, SUCCESS, register


def empty_positions(inst: TaskInstance, state: WorldState) -> list[str]:
    return [p for p in inst.goal["positions"] if state.placed_at(p) is None]


@register("SO")
class Sorting:
    """Rank the backpack animals by a rule that may contradict world knowledge."""

    @staticmethod
    def goal(inst: TaskInstance) -> str:
        g = inst.goal
        positions = ", ".join(g["positions"])
        return (
            f"{g['rule']} Rank the {g['type']} in the backpack from "
            f"{g['dir_high']} to {g['dir_low']} by {g['property']} "
            f"in position {positions}."
        )

    @staticmethod
    def actions(inst: TaskInstance, state: WorldState) -> list[Action]:
        out = []
        for slot, held in enumerate(state.backpack):
            if held is None:
                continue
            letter = SLOT_LETTERS[slot]
            for pos in empty_positions(inst, state):
                out.append(Action(
                    Verb.PLACE_AT, subject=letter, obj=pos,
                    surface_text=(
                        f"place {inst.goal['type']} from backpack {letter} "
                        f"into the grid at position {pos}"
                    ),
                ))
        return out

    @staticmethod
    def apply(inst: TaskInstance, state: WorldState, action: Action) -> WorldState:
        slot = SLOT_LETTERS.index(action.subject)
        return state.remove_from_backpack(state.backpack[slot], f"pos:{action.obj}")

    @staticmethod
    def outcome(inst: TaskInstance, state: WorldState) -> Outcome:
        order = inst.goal["order"]  # label expected at each position, in order
        placed = 0
        for i, pos in enumerate(inst.goal["positions"]):
            lb = state.placed_at(pos)
            if lb is None:
                continue
            if lb != order[i]:
                return Outcome("failure", "wrong-terminal-choice")
            placed += 1
        return SUCCESS if placed == len(order) else ONGOING


@register("PL")
class Placement:
    """Place the item opposite the stated direction (L3 adds a one-step turn)."""

    @staticmethod
    def goal(inst: TaskInstance) -> str:
        g = inst.goal
        text = (
            f"A direction will be provided: {g['orientation']}. Determine its "
            f"opposite direction, and then place {g['item1']} in the "
            f"corresponding location around {g['item2']}."
        )
        if g.get("rotation"):
            text += f" Then turn one grid {g['rotation']}."
        return text

    @staticmethod
    def actions(inst: TaskInstance, state: WorldState) -> list[Action]:
        out = []
        for slot, held in enumerate(state.backpack):
            if held is None:
                continue
            letter = SLOT_LETTERS[slot]
            for pos in empty_positions(inst, state):
                out.append(Action(
                    Verb.PLACE_AT, subject=letter, obj=pos,
                    surface_text=(
                        f"place {inst.goal['item1']} into the grid "
                        f"at position {pos}"
                    ),
                ))
        return out

    apply = Sorting.apply

    @staticmethod
    def outcome(inst: TaskInstance, state: WorldState) -> Outcome:
        for pos in inst.goal["positions"]:
            if state.placed_at(pos) is not None:
                if pos == inst.goal["correct_pos"]:
                    return SUCCESS
                return Outcome("failure", "wrong-terminal-choice")
        return ONGOING
