"""Filling (FI), Puzzle (PU), and Memory Filling (MFI): complete a 2x2 image.

The target is a 2x2 assembly of quadrant pieces. The scene holds a frame
with 1-3 quadrants missing; the backpack holds four pieces, of which the
correct ones carry a ``correct_pos`` property naming their frame position.
"""

from __future__ import annotations

from ..world import Action, SLOT_LETTERS, TaskInstance, Verb, WorldState
from . import Outcome, ONGOING, SUCCESS, register
from .placing import empty_positions

FRAME_GOAL = (
    "There is a target item shown on the left margin. You need to fill the "
    "correct piece(s) from the backpack to complete the missing part(s) of "
    "the frame in the scene, ensuring they match and align with the target item."
)

MFI_GOAL = (
    "In the first image, a target item will be shown on the left margin that "
    "you need to remember. In the following images, the target item will not "
    "be shown. You need to fill the correct piece(s) from the backpack to "
    "complete the missing part(s) of the frame in the scene, ensuring they "
    "match and align with the target item. If you understand the rules, "
    "choose `continue' to begin the task."
)


class _FrameTask:
    surface_template = "place the piece from backpack {letter} into the grid at position {pos}"

    @classmethod
    def actions(cls, inst: TaskInstance, state: WorldState) -> list[Action]:
        out = []
        for slot, held in enumerate(state.backpack):
            if held is None:
                continue
            letter = SLOT_LETTERS[slot]
            for pos in empty_positions(inst, state):
                out.append(Action(
                    Verb.PLACE_AT, subject=letter, obj=pos,
                    surface_text=cls.surface_template.format(letter=letter, pos=pos),
                ))
        return out

    @staticmethod
    def apply(inst: TaskInstance, state: WorldState, action: Action) -> WorldState:
        slot = SLOT_LETTERS.index(action.subject)
        return state.remove_from_backpack(state.backpack[slot], f"pos:{action.obj}")

    @staticmethod
    def outcome(inst: TaskInstance, state: WorldState) -> Outcome:
        placed = 0
        for pos in inst.goal["positions"]:
            lb = state.placed_at(pos)
            if lb is None:
                continue
            if inst.entity(lb).props.get("correct_pos") != pos:
                return Outcome("failure", "wrong-terminal-choice")
            placed += 1
        return SUCCESS if placed == len(inst.goal["positions"]) else ONGOING


@register("FI")
class Filling(_FrameTask):
    @staticmethod
    def goal(inst: TaskInstance) -> str:
        return FRAME_GOAL


@register("PU")
class Puzzle(_FrameTask):
    @staticmethod
    def goal(inst: TaskInstance) -> str:
        return FRAME_GOAL


@register("MFI")
class MemoryFilling(_FrameTask):
    surface_template = "place piece from backpack {letter} into the grid at position {pos}"

    @staticmethod
    def goal(inst: TaskInstance) -> str:
        return MFI_GOAL
