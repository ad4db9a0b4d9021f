"""Maze family (MA, DMA, MMA): keys, doors in series, and the diamond.

The play area is partitioned into compartments 0..d separated by doors
1..d in series. Compartment j is reachable once doors 1..j are unlocked.
Obtain options are offered for every visible key/diamond/chest; obtaining
an unreachable one is a wasted step (the state is unchanged), which the
strict step budget turns into a loss.
"""

from __future__ import annotations

from ..world import Action, SLOT_LETTERS, TaskInstance, Verb, WorldState
from . import Outcome, ONGOING, SUCCESS, register

MA_GOAL = (
    "There is a diamond shown in the scene, and you need to obtain the "
    "diamond. When your path is blocked by a door, you can use a key of the "
    "same color to unlock it. Note: You must pick up the key first before "
    "you can use it to unlock doors."
)

DMA_GOAL = (
    "There is a diamond in the scene, and your goal is to obtain it. Some "
    "paths are blocked by doors, and the key required to unlock each door "
    "color is shown in the left hint panel. You must consult the hint panel "
    "and use the specified key to open the corresponding door."
)

MMA_GOAL = (
    "In the first image, a diamond will be shown in the scene that you need "
    "to remember its location. In the following images, the diamond will not "
    "be shown and several treasure boxes will be generated in the scene. You "
    "must choose to open the treasure box located at the diamond's original "
    "position to obtain the diamond. When your path is blocked by a door, "
    "you can use a key of the same color to unlock it. Note: You must obtain "
    "the key before you can use it to unlock doors. If you understand the "
    "rules, choose `continue' to begin the task."
)


def _doors(inst: TaskInstance) -> list:
    return sorted(
        (e for e in inst.entities if e.kind == "door"),
        key=lambda e: e.props["index"],
    )


def reachable_zone(inst: TaskInstance, state: WorldState) -> int:
    reach = 0
    for door in _doors(inst):
        if state.loc_of(door.label) == ("gone", "unlocked"):
            reach = door.props["index"]
        else:
            break
    return reach


def _obtain(label: int) -> Action:
    return Action(
        Verb.OBTAIN, subject=label,
        surface_text=f"obtain item with label {label}",
    )


class _MazeTask:
    key_rule = "same-color"

    @classmethod
    def _key_opens(cls, inst: TaskInstance, key, door) -> bool:
        if cls.key_rule == "mapping":
            return inst.goal["mapping"].get(key.color) == door.color
        return key.color == door.color

    @classmethod
    def actions(cls, inst: TaskInstance, state: WorldState) -> list[Action]:
        reach = reachable_zone(inst, state)
        out = []
        for lb in state.scene_labels():
            ent = inst.entity(lb)
            if ent.kind in ("diamond", "chest"):
                out.append(_obtain(lb))
            elif ent.kind == "key":
                if ent.zone > reach or state.free_slot() is not None:
                    out.append(_obtain(lb))
        frontier = [d for d in _doors(inst) if d.props["index"] == reach + 1]
        for door in frontier:
            for slot, held in enumerate(state.backpack):
                if held is None:
                    continue
                letter = SLOT_LETTERS[slot]
                out.append(Action(
                    Verb.UNLOCK, subject=letter, obj=door.label,
                    surface_text=(
                        f"use the key in backpack {letter} "
                        f"to unlock door with label {door.label}"
                    ),
                ))
        return out

    @classmethod
    def apply(cls, inst: TaskInstance, state: WorldState, action: Action) -> WorldState:
        reach = reachable_zone(inst, state)
        if action.verb is Verb.OBTAIN:
            ent = inst.entity(action.subject)
            if ent.zone > reach:
                return state  # blocked by a closed door: wasted step
            if ent.kind == "key":
                return state.move_to_backpack(ent.label)
            if ent.kind == "diamond":
                return state.with_loc(ent.label, ("gone", "collected"))
            return state.with_loc(ent.label, ("gone", "opened"))
        # unlock
        slot = SLOT_LETTERS.index(action.subject)
        key = inst.entity(state.backpack[slot])
        door = inst.entity(action.obj)
        if not cls._key_opens(inst, key, door):
            return state  # wrong key for this door: wasted step
        nxt = state.remove_from_backpack(key.label, "used")
        return nxt.with_loc(door.label, ("gone", "unlocked"))

    @classmethod
    def outcome(cls, inst: TaskInstance, state: WorldState) -> Outcome:
        for ent in inst.entities:
            if ent.kind == "diamond" and state.loc_of(ent.label) == ("gone", "collected"):
                return SUCCESS
            if ent.kind == "chest" and state.loc_of(ent.label) == ("gone", "opened"):
                if ent.label == inst.goal["diamond_chest"]:
                    return SUCCESS
                return Outcome("failure", "wrong-terminal-choice")
        return ONGOING


@register("MA")
class Maze(_MazeTask):
    @staticmethod
    def goal(inst: TaskInstance) -> str:
        return MA_GOAL


@register("DMA")
class DecodeMaze(_MazeTask):
    key_rule = "mapping"

    @staticmethod
    def goal(inst: TaskInstance) -> str:
        return DMA_GOAL


@register("MMA")
class MemoryMaze(_MazeTask):
    @staticmethod
    def goal(inst: TaskInstance) -> str:
        return MMA_GOAL
