"""Core world model: entities, backpack, hint bar, state transitions, options.

A :class:`WorldState` is an immutable value. Applying an action returns a new
state; the (instance, action sequence) pair fully determines the trajectory.
Task-specific legality and transition rules live in :mod:`gridbench.tasks`
and are dispatched through the task registry.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Optional

from .geometry import GridGeometry

SCHEMA_VERSION = 1

BACKPACK_SLOTS = 4
SLOT_LETTERS = "ABCD"

MEMORY_KINDS = ("SE", "MMA", "MDE", "MFI")

ROMAN = ("I", "II", "III", "IV", "V", "VI", "VII", "VIII")


class EpisodeFinishedError(Exception):
    """Raised when actions are requested for a terminal state."""


class RejectedActionError(Exception):
    """Raised when an action outside the legal set is applied."""


class Verb(Enum):
    PICK_UP = "pick-up"
    PUT_INTO = "put-into"
    PLACE_AT = "place-at"
    OBTAIN = "obtain"
    UNLOCK = "unlock"
    CHOOSE = "choose"
    DECLARE_DONE = "declare-done"
    CONTINUE = "continue"


# canonical pre-shuffle ordering of verbs
_VERB_ORDER = [v.value for v in Verb]


@dataclass(frozen=True)
class Action:
    verb: Verb
    subject: Any = None  # entity label or backpack slot letter
    obj: Any = None  # entity label or position name
    surface_text: str = ""

    def key(self) -> str:
        return f"{self.verb.value}|{self.subject}|{self.obj}"

    def sort_key(self) -> tuple:
        return (
            _VERB_ORDER.index(self.verb.value),
            str(self.subject),
            str(self.obj),
        )


CONTINUE_ACTION = Action(Verb.CONTINUE, surface_text="continue")


@dataclass(frozen=True)
class OptionList:
    options: tuple[tuple[str, Action], ...]
    permutation_seed: Optional[int] = None

    def letters(self) -> list[str]:
        return [letter for letter, _ in self.options]

    def action_for(self, letter: str) -> Action:
        for lt, action in self.options:
            if lt == letter:
                return action
        raise KeyError(letter)

    def lines(self) -> list[str]:
        return [f"{letter}) `{a.surface_text}'" for letter, a in self.options]

    def __len__(self) -> int:
        return len(self.options)


@dataclass(frozen=True)
class Entity:
    """A labeled element of the scene, backpack, or hint bar.

    ``visible_phase`` controls when the entity exists for play: "always",
    "pre" (only before the continue step, e.g. the remembered diamond), or
    "active" (appears once the task starts, e.g. treasure chests).
    """

    label: Optional[int]
    kind: str  # item/key/door/basket/chest/diamond/pile/piece/frame-slot/agent
    name: str = ""
    category: Optional[str] = None
    color: Optional[str] = None
    count: int = 1
    cell: Optional[tuple[int, int]] = None  # initial play-region cell
    slot: Optional[int] = None  # initial backpack slot
    zone: int = 0  # maze compartment index
    visible_phase: str = "always"
    props: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "kind": self.kind,
            "name": self.name,
            "category": self.category,
            "color": self.color,
            "count": self.count,
            "cell": list(self.cell) if self.cell else None,
            "slot": self.slot,
            "zone": self.zone,
            "visible_phase": self.visible_phase,
            "props": self.props,
        }

    @classmethod
    def from_json(cls, d: dict) -> "Entity":
        return cls(
            label=d["label"],
            kind=d["kind"],
            name=d.get("name", ""),
            category=d.get("category"),
            color=d.get("color"),
            count=d.get("count", 1),
            cell=tuple(d["cell"]) if d.get("cell") else None,
            slot=d.get("slot"),
            zone=d.get("zone", 0),
            visible_phase=d.get("visible_phase", "always"),
            props=d.get("props", {}),
        )


@dataclass(frozen=True)
class TaskInstance:
    """Immutable episode definition produced by the generator."""

    kind: str
    level: int
    seed: int
    theme: str
    entities: tuple[Entity, ...]
    agent_cell: tuple[int, int]
    goal: dict
    hint: tuple[dict, ...] = ()
    decor: tuple[int, ...] = ()
    witness: Optional[tuple[str, ...]] = None

    @property
    def is_memory(self) -> bool:
        return self.kind in MEMORY_KINDS

    @property
    def optimal_length(self) -> Optional[int]:
        return len(self.witness) if self.witness is not None else None

    def entity(self, label: int) -> Entity:
        for e in self.entities:
            if e.label == label:
                return e
        raise KeyError(f"no entity with label {label}")

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": self.kind,
            "level": self.level,
            "seed": self.seed,
            "theme": self.theme,
            "entities": [e.to_json() for e in self.entities],
            "agent_cell": list(self.agent_cell),
            "goal": self.goal,
            "hint": list(self.hint),
            "decor": list(self.decor),
            "witness": list(self.witness) if self.witness is not None else None,
        }

    def serialize(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, d: dict) -> "TaskInstance":
        return cls(
            kind=d["kind"],
            level=d["level"],
            seed=d["seed"],
            theme=d["theme"],
            entities=tuple(Entity.from_json(e) for e in d["entities"]),
            agent_cell=tuple(d["agent_cell"]),
            goal=d["goal"],
            hint=tuple(d.get("hint", [])),
            decor=tuple(d.get("decor", [])),
            witness=tuple(d["witness"]) if d.get("witness") is not None else None,
        )


# Location encodings within a WorldState:
#   ("scene", row, col)   in the play region
#   ("backpack", slot)    held in slot 0-3
#   ("gone", dest)        consumed; dest records where (e.g. "basket:3")
Loc = tuple


@dataclass(frozen=True)
class WorldState:
    instance: TaskInstance
    loc: tuple[tuple[int, Loc], ...]  # sorted (label, location) pairs
    backpack: tuple[Optional[int], ...]  # slot -> entity label
    agent: tuple[int, int]
    step_index: int = 0
    phase: str = "active"  # awaiting-continue | active | terminal
    declared_done: bool = False
    collected: int = 0
    chosen: tuple[int, ...] = ()
    status: str = "ongoing"  # ongoing | success | failure
    reason: Optional[str] = None
    budget: Optional[int] = None

    # -- views ------------------------------------------------------------

    def loc_of(self, label: int) -> Loc:
        for lb, loc in self.loc:
            if lb == label:
                return loc
        raise KeyError(label)

    def loc_map(self) -> dict[int, Loc]:
        return dict(self.loc)

    def in_scene(self, label: int) -> bool:
        """Present and selectable in the scene under the current phase."""
        ent = self.instance.entity(label)
        if ent.visible_phase == "pre" and self.phase != "awaiting-continue":
            return False
        if ent.visible_phase == "active" and self.phase == "awaiting-continue":
            return False
        return self.loc_of(label)[0] == "scene"

    def scene_labels(self) -> list[int]:
        return [lb for lb, _ in self.loc if self.in_scene(lb)]

    def free_slot(self) -> Optional[int]:
        for i, lb in enumerate(self.backpack):
            if lb is None:
                return i
        return None

    def slot_letter_of(self, label: int) -> str:
        loc = self.loc_of(label)
        if loc[0] != "backpack":
            raise ValueError(f"entity {label} not in backpack")
        return SLOT_LETTERS[loc[1]]

    def placed_at(self, pos_name: str) -> Optional[int]:
        dest = f"pos:{pos_name}"
        for lb, loc in self.loc:
            if loc[0] == "gone" and loc[1] == dest:
                return lb
        return None

    # -- transitions ------------------------------------------------------

    def with_loc(self, label: int, new_loc: Loc) -> "WorldState":
        pairs = tuple(
            (lb, new_loc if lb == label else loc) for lb, loc in self.loc
        )
        return replace(self, loc=pairs)

    def move_to_backpack(self, label: int) -> "WorldState":
        slot = self.free_slot()
        if slot is None:
            raise RejectedActionError("backpack full")
        packs = list(self.backpack)
        packs[slot] = label
        return replace(
            self.with_loc(label, ("backpack", slot)), backpack=tuple(packs)
        )

    def remove_from_backpack(self, label: int, dest: str) -> "WorldState":
        loc = self.loc_of(label)
        if loc[0] != "backpack":
            raise RejectedActionError(f"entity {label} not in backpack")
        packs = list(self.backpack)
        packs[loc[1]] = None
        return replace(
            self.with_loc(label, ("gone", dest)), backpack=tuple(packs)
        )

    # -- canonical form ---------------------------------------------------

    def canonical_key(self) -> str:
        payload = (
            self.loc,
            self.backpack,
            self.phase,
            self.declared_done,
            self.collected,
            self.chosen,
            self.status,
        )
        return repr(payload)

    def to_json(self) -> dict:
        """Versioned snapshot used by transcripts and the play service."""
        return {
            "schema_version": SCHEMA_VERSION,
            "entities": [
                {"label": lb, "location": list(loc)} for lb, loc in self.loc
            ],
            "backpack": list(self.backpack),
            "agent": list(self.agent),
            "step_index": self.step_index,
            "phase": self.phase,
            "declared_done": self.declared_done,
            "collected": self.collected,
            "chosen": list(self.chosen),
            "status": self.status,
            "reason": self.reason,
        }


def initial_state(instance: TaskInstance, budget: Optional[int] = None) -> WorldState:
    """Build the episode's starting WorldState from its instance."""
    locs: list[tuple[int, Loc]] = []
    backpack: list[Optional[int]] = [None] * BACKPACK_SLOTS
    for ent in instance.entities:
        if ent.label is None:
            continue
        if ent.slot is not None:
            backpack[ent.slot] = ent.label
            locs.append((ent.label, ("backpack", ent.slot)))
        elif ent.cell is not None:
            locs.append((ent.label, ("scene", ent.cell[0], ent.cell[1])))
        else:
            raise ValueError(f"entity {ent.label} has neither cell nor slot")
    locs.sort(key=lambda p: p[0])
    phase = "awaiting-continue" if instance.is_memory else "active"
    if budget is None and instance.witness is not None:
        budget = len(instance.witness)
    return WorldState(
        instance=instance,
        loc=tuple(locs),
        backpack=tuple(backpack),
        agent=instance.agent_cell,
        phase=phase,
        budget=budget,
    )


def _rules_for(kind: str):
    from .tasks import rules_for  # deferred: tasks imports this module

    return rules_for(kind)


def generate_actions(state: WorldState) -> list[Action]:
    """All currently executable high-level actions, in canonical order."""
    if state.phase == "terminal":
        raise EpisodeFinishedError("episode-finished")
    if state.phase == "awaiting-continue":
        return [CONTINUE_ACTION]
    actions = _rules_for(state.instance.kind).actions(state.instance, state)
    return sorted(actions, key=Action.sort_key)


def step_outcome(state: WorldState):
    from .tasks import Outcome

    rules = _rules_for(state.instance.kind)
    out = rules.outcome(state.instance, state)
    if out.status == "ongoing" and state.budget is not None:
        if state.step_index >= state.budget:
            return Outcome("failure", "step-budget-exhausted")
    return out


def apply_action(state: WorldState, action: Action) -> WorldState:
    """Apply a legal action and return the successor state."""
    legal = generate_actions(state)
    if action not in legal:
        raise RejectedActionError(f"rejected-action: {action.surface_text!r}")
    if action.verb is Verb.CONTINUE:
        nxt = replace(state, phase="active")
    else:
        nxt = _rules_for(state.instance.kind).apply(state.instance, state, action)
    nxt = replace(nxt, step_index=state.step_index + 1)
    out = step_outcome(nxt)
    if out.status != "ongoing":
        nxt = replace(nxt, phase="terminal", status=out.status, reason=out.reason)
    return nxt


def present_options(
    actions: list[Action], rng: random.Random, permutation_seed: Optional[int] = None
) -> OptionList:
    """Letter the actions under a uniform random permutation."""
    if not actions:
        raise ValueError("no-actions")
    perm = list(actions)
    rng.shuffle(perm)
    letters = [chr(ord("A") + i) for i in range(len(perm))]
    return OptionList(
        options=tuple(zip(letters, perm)), permutation_seed=permutation_seed
    )


def derive_seed(*parts) -> int:
    """Platform-stable 64-bit seed from a derivation path."""
    text = "/".join(str(p) for p in parts)
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def option_rng(instance_seed: int, step_index: int) -> random.Random:
    """Fresh per-step stream so the permutation is reproducible bit-exactly."""
    return random.Random(derive_seed("options", instance_seed, step_index))


DEFAULT_GEOMETRY = GridGeometry()
