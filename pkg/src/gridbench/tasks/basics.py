"""Classification (CL) and Counting (CO) rule sets."""

from __future__ import annotations

from dataclasses import replace

from ..world import Action, SLOT_LETTERS, TaskInstance, Verb, WorldState
from . import Outcome, ONGOING, SUCCESS, pluralize, register


def _pick_up(label: int) -> Action:
    return Action(
        Verb.PICK_UP, subject=label,
        surface_text=f"pick up item with label {label}",
    )


@register("CL")
class Classification:
    """Place each item into its designated colored basket."""

    @staticmethod
    def goal(inst: TaskInstance) -> str:
        g = inst.goal
        return (
            f"Place {g['item1']} in {g['color1']} basket and "
            f"{g['item2']} in {g['color2']} basket respectively."
        )

    @staticmethod
    def actions(inst: TaskInstance, state: WorldState) -> list[Action]:
        out = []
        baskets = [
            lb for lb in state.scene_labels()
            if inst.entity(lb).kind == "basket"
        ]
        for lb in state.scene_labels():
            if inst.entity(lb).kind == "item" and state.free_slot() is not None:
                out.append(_pick_up(lb))
        for slot, held in enumerate(state.backpack):
            if held is None:
                continue
            letter = SLOT_LETTERS[slot]
            for basket in baskets:
                out.append(Action(
                    Verb.PUT_INTO, subject=letter, obj=basket,
                    surface_text=(
                        f"put the item from backpack {letter} "
                        f"into the basket with label {basket}"
                    ),
                ))
        return out

    @staticmethod
    def apply(inst: TaskInstance, state: WorldState, action: Action) -> WorldState:
        if action.verb is Verb.PICK_UP:
            return state.move_to_backpack(action.subject)
        slot = SLOT_LETTERS.index(action.subject)
        item = state.backpack[slot]
        return state.remove_from_backpack(item, f"basket:{action.obj}")

    @staticmethod
    def outcome(inst: TaskInstance, state: WorldState) -> Outcome:
        items = [e for e in inst.entities if e.kind == "item"]
        done = 0
        for ent in items:
            loc = state.loc_of(ent.label)
            if loc[0] == "gone":
                target = f"basket:{ent.props['target_basket']}"
                if loc[1] != target:
                    return Outcome("failure", "wrong-terminal-choice")
                done += 1
        return SUCCESS if done == len(items) else ONGOING


@register("CO")
class Counting:
    """Collect exactly the target number of items from piles of 1-3."""

    @staticmethod
    def goal(inst: TaskInstance) -> str:
        n = inst.goal["target"]
        items = pluralize(inst.goal["item"], n)
        return (
            f"Collect {n} {items}. Make sure you have gathered exactly this "
            f"amount, no more and no less. You should be aware that there may "
            f"be 1 to 3 items of different quantities in one grid. Once you "
            f"have collected this number of {items}, select the action: "
            f"“I have already collected {n} {items}”."
        )

    @staticmethod
    def _declare(inst: TaskInstance) -> Action:
        n = inst.goal["target"]
        items = pluralize(inst.goal["item"], n)
        return Action(
            Verb.DECLARE_DONE,
            surface_text=f"I have already collected {n} {items}",
        )

    @staticmethod
    def actions(inst: TaskInstance, state: WorldState) -> list[Action]:
        out = [Counting._declare(inst)]
        name = inst.goal["item"]
        for lb in state.scene_labels():
            if inst.entity(lb).kind == "pile" and state.free_slot() is not None:
                out.append(Action(
                    Verb.PICK_UP, subject=lb,
                    surface_text=f"pick up {name} with label {lb}",
                ))
        return out

    @staticmethod
    def apply(inst: TaskInstance, state: WorldState, action: Action) -> WorldState:
        if action.verb is Verb.DECLARE_DONE:
            return replace(state, declared_done=True)
        nxt = state.move_to_backpack(action.subject)
        return replace(nxt, collected=state.collected + inst.entity(action.subject).count)

    @staticmethod
    def outcome(inst: TaskInstance, state: WorldState) -> Outcome:
        target = inst.goal["target"]
        if state.collected > target:
            return Outcome("failure", "overshoot")
        if state.declared_done:
            if state.collected == target:
                return SUCCESS
            return Outcome("failure", "wrong-terminal-choice")
        return ONGOING
