"""Selection (SE) and Memory Decode (MDE): remember, then choose."""

from __future__ import annotations

from dataclasses import replace

from ..world import Action, TaskInstance, Verb, WorldState
from . import Outcome, ONGOING, SUCCESS, register

SE_GOAL = (
    "In the first image, an item will be shown on the left margin that you "
    "need to remember. In the following images, several random items will be "
    "generated in the scene, and you need to select the one you recall. "
    "If you understand the rules, select the `continue' action to start the task."
)

MDE_GOAL = (
    "In the first image, arrow-connected items with one-to-one "
    "correspondence(s) will be shown on the left margin that you need to "
    "remember. In the following images, the correspondence(s) will not be "
    "shown, and a target item will be generated in the black box in the "
    "upper left corner. You need to select the correct corresponding item "
    "for the target based on the pairing you remembered in the first image. "
    "If you understand the rules, choose `continue' to begin the task."
)


def _choose_actions(inst: TaskInstance, state: WorldState, noun_from_category: bool) -> list[Action]:
    out = []
    for lb in state.scene_labels():
        ent = inst.entity(lb)
        if ent.kind != "item":
            continue
        noun = ent.category if noun_from_category else "item"
        out.append(Action(
            Verb.CHOOSE, subject=lb,
            surface_text=f"choose {noun} with label {lb}",
        ))
    return out


def _apply_choose(state: WorldState, action: Action) -> WorldState:
    nxt = state.with_loc(action.subject, ("gone", "selected"))
    return replace(nxt, chosen=state.chosen + (action.subject,))


@register("SE")
class Selection:
    """Memorize the hinted items, then pick exactly those from the scene."""

    @staticmethod
    def goal(inst: TaskInstance) -> str:
        return SE_GOAL

    @staticmethod
    def actions(inst: TaskInstance, state: WorldState) -> list[Action]:
        return _choose_actions(inst, state, noun_from_category=True)

    apply = staticmethod(lambda inst, state, action: _apply_choose(state, action))

    @staticmethod
    def outcome(inst: TaskInstance, state: WorldState) -> Outcome:
        targets = {e.label for e in inst.entities if e.props.get("target")}
        for lb in state.chosen:
            if lb not in targets:
                return Outcome("failure", "wrong-terminal-choice")
        return SUCCESS if set(state.chosen) == targets else ONGOING


@register("MDE")
class MemoryDecode:
    """Memorize item pairings, then choose the partner of the shown target."""

    @staticmethod
    def goal(inst: TaskInstance) -> str:
        return MDE_GOAL

    @staticmethod
    def actions(inst: TaskInstance, state: WorldState) -> list[Action]:
        return _choose_actions(inst, state, noun_from_category=False)

    apply = staticmethod(lambda inst, state, action: _apply_choose(state, action))

    @staticmethod
    def outcome(inst: TaskInstance, state: WorldState) -> Outcome:
        if not state.chosen:
            return ONGOING
        if state.chosen[0] == inst.goal["correct"]:
            return SUCCESS
        return Outcome("failure", "wrong-terminal-choice")
