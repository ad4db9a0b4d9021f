"""Seeded instance generation, solvability checking, and state-space counts.

Every instance is produced from a (kind, level, seed) triple through a single
:class:`random.Random` stream, so generation is bit-reproducible across
platforms. Generated instances are checked solvable by breadth-first search
and ship with their optimal witness plan.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, replace
from functools import lru_cache
from importlib import resources
from typing import Optional

from .geometry import GridGeometry, RegionKind, region_of
from .world import (
    Entity,
    ROMAN,
    SLOT_LETTERS,
    TaskInstance,
    apply_action,
    derive_seed,
    generate_actions,
    initial_state,
)
from .tasks import level_param, pluralize, solve_bfs

MAX_GENERATION_ATTEMPTS = 1000

_GEO = GridGeometry()
_PLAY = _GEO.play_region


class GenerationExhausted(Exception):
    """No solvable instance found within the attempt budget."""


# ---------------------------------------------------------------------------
# catalog


@lru_cache(maxsize=1)
def load_catalog() -> dict:
    text = resources.files("gridbench").joinpath("data/catalog.json").read_text()
    cat = json.loads(text)
    for category, names in cat["categories"].items():
        if len(names) < 8:
            raise ValueError(f"catalog category {category!r} needs >= 8 items")
    return cat


def _name_category(catalog: dict) -> dict[str, str]:
    return {
        name: category
        for category, names in catalog["categories"].items()
        for name in names
    }


def _theme_pool(catalog: dict, theme: str) -> list[str]:
    pool: list[str] = []
    for category in catalog["themes"][theme]["categories"]:
        pool.extend(catalog["categories"][category])
    return pool


def decor_cells(geometry: GridGeometry = _GEO) -> list[tuple[int, int]]:
    return [
        (r, c)
        for r in range(geometry.total_rows)
        for c in range(geometry.total_cols)
        if region_of(r, c, geometry) is RegionKind.DECOR
    ]


# ---------------------------------------------------------------------------
# helpers


def _abs(local: tuple[int, int]) -> tuple[int, int]:
    return (_PLAY.row0 + local[0], _PLAY.col0 + local[1])


def _sample_decor(rng: random.Random, catalog: dict) -> tuple[int, ...]:
    v = catalog["decor_variants"]
    return tuple(rng.randrange(v) for _ in decor_cells())


def _labels(rng: random.Random, n: int) -> list[int]:
    order = list(range(n))
    rng.shuffle(order)
    return order


def _pick_theme(rng: random.Random, catalog: dict, kind: str) -> str:
    return rng.choice(catalog["task_themes"][kind])


# ---------------------------------------------------------------------------
# per-kind builders (all draw exclusively from the passed rng)


def _build_cl(rng, catalog, theme, level) -> tuple[list[Entity], tuple, dict, tuple]:
    copies = level_param("CL", level)
    by_cat = _name_category(catalog)
    name1, name2 = rng.sample(_theme_pool(catalog, theme), 2)
    color1, color2 = rng.sample(catalog["basket_colors"], 2)
    n_items = 2 * copies
    labels = _labels(rng, n_items + 2)
    basket1, basket2 = labels[n_items], labels[n_items + 1]
    cells = rng.sample(_PLAY.cells(), n_items + 3)
    entities = []
    for i in range(n_items):
        name, basket = (name1, basket1) if i < copies else (name2, basket2)
        entities.append(Entity(
            label=labels[i], kind="item", name=name, category=by_cat[name],
            cell=cells[i], props={"target_basket": basket},
        ))
    entities.append(Entity(
        label=basket1, kind="basket", name="basket", color=color1, cell=cells[n_items],
    ))
    entities.append(Entity(
        label=basket2, kind="basket", name="basket", color=color2, cell=cells[n_items + 1],
    ))
    goal = {
        "item1": pluralize(name1, copies), "color1": color1,
        "item2": pluralize(name2, copies), "color2": color2,
    }
    return entities, cells[-1], goal, ()


def _build_se(rng, catalog, theme, level):
    k = level_param("SE", level)
    by_cat = _name_category(catalog)
    names = rng.sample(_theme_pool(catalog, theme), 2 * k + 2)
    targets = set(names[:k])
    order = list(names)
    rng.shuffle(order)
    labels = _labels(rng, len(order))
    cells = rng.sample(_PLAY.cells(), len(order) + 1)
    entities = [
        Entity(
            label=labels[i], kind="item", name=name, category=by_cat[name],
            cell=cells[i], visible_phase="active",
            props={"target": name in targets},
        )
        for i, name in enumerate(order)
    ]
    hint = tuple(
        {"type": "item", "name": name, "phase": "pre"} for name in names[:k]
    )
    return entities, cells[-1], {"targets": sorted(targets)}, hint


def _build_so(rng, catalog, theme, level):
    k = level_param("SO", level)
    ranks_by_prop = catalog["animal_ranks"]
    prop_a = rng.choice(["weight", "size"])
    ranks = ranks_by_prop[prop_a]
    animals = rng.sample(list(ranks), k)
    adj_a = {"weight": ("lighter", "heavier"), "size": ("smaller", "bigger")}[prop_a]
    a_high_is_fast = rng.random() < 0.5
    adj = adj_a[1] if a_high_is_fast else adj_a[0]
    rule = f"The {adj} the animal is, the faster it is."
    fast_to_slow = rng.random() < 0.5
    dir_high, dir_low = ("fast", "slow") if fast_to_slow else ("slow", "fast")

    labels = _labels(rng, k)
    entities = [
        Entity(label=labels[i], kind="item", name=animals[i],
               category="animal", slot=i)
        for i in range(k)
    ]
    # speed score under the counterfactual rule, then the requested direction
    def speed(i: int) -> int:
        r = ranks[animals[i]]
        return r if a_high_is_fast else -r

    ranked = sorted(range(k), key=speed, reverse=fast_to_slow)
    order = [labels[i] for i in ranked]

    row = rng.randrange(5)
    c0 = rng.randrange(5 - k + 1)
    positions = list(ROMAN[:k])
    entities += [
        Entity(label=None, kind="frame-slot", cell=_abs((row, c0 + i)),
               props={"pos": positions[i]})
        for i in range(k)
    ]
    free = [c for c in _PLAY.cells()
            if c not in {e.cell for e in entities if e.cell}]
    goal = {
        "rule": rule, "type": "animal", "property": "speed",
        "dir_high": dir_high, "dir_low": dir_low,
        "positions": positions, "order": order,
    }
    return entities, rng.choice(free), goal, ()


_DIR_RING = (
    "north", "northeast", "east", "southeast",
    "south", "southwest", "west", "northwest",
)
_DIR_OFFSET = {
    "north": (-1, 0), "northeast": (-1, 1), "east": (0, 1),
    "southeast": (1, 1), "south": (1, 0), "southwest": (1, -1),
    "west": (0, -1), "northwest": (-1, -1),
}


def _build_pl(rng, catalog, theme, level):
    n_pos = level_param("PL", level)
    by_cat = _name_category(catalog)
    item1, item2 = rng.sample(_theme_pool(catalog, theme), 2)
    anchor = (rng.randrange(1, 4), rng.randrange(1, 4))
    dirs = _DIR_RING if n_pos == 8 else _DIR_RING[::2]
    ring_cells = {d: (anchor[0] + _DIR_OFFSET[d][0], anchor[1] + _DIR_OFFSET[d][1])
                  for d in dirs}
    # numerals run in reading order over the marked cells
    ordered = sorted(dirs, key=lambda d: ring_cells[d])
    pos_of_dir = {d: ROMAN[i] for i, d in enumerate(ordered)}

    orientation = rng.choice(dirs)
    opposite = _DIR_RING[(_DIR_RING.index(orientation) + 4) % 8]
    rotation = None
    correct_dir = opposite
    if level == 3:
        rotation = rng.choice(["clockwise", "counterclockwise"])
        step = 1 if rotation == "clockwise" else -1
        correct_dir = _DIR_RING[(_DIR_RING.index(opposite) + step) % 8]

    entities = [
        Entity(label=0, kind="item", name=item1, category=by_cat[item1], slot=0),
        Entity(label=None, kind="item", name=item2, category=by_cat[item2],
               cell=_abs(anchor)),
    ]
    entities += [
        Entity(label=None, kind="frame-slot", cell=_abs(ring_cells[d]),
               props={"pos": pos_of_dir[d], "dir": d})
        for d in ordered
    ]
    free = [c for c in _PLAY.cells()
            if c not in {e.cell for e in entities if e.cell}]
    goal = {
        "item1": item1, "item2": item2, "orientation": orientation,
        "rotation": rotation, "positions": [ROMAN[i] for i in range(n_pos)],
        "correct_pos": pos_of_dir[correct_dir],
    }
    return entities, rng.choice(free), goal, ()


def _build_co(rng, catalog, theme, level):
    lo, hi = level_param("CO", level)
    name = rng.choice(_theme_pool(catalog, theme))
    by_cat = _name_category(catalog)
    n_piles = {1: 3, 2: 4, 3: 5}[level]
    for _ in range(50):
        counts = [rng.randint(1, 3) for _ in range(n_piles)]
        sums = set()
        for mask in range(1, 1 << n_piles):
            if bin(mask).count("1") <= 4:
                sums.add(sum(c for i, c in enumerate(counts) if mask >> i & 1))
        feasible = sorted(s for s in sums if lo <= s <= hi)
        if feasible:
            target = rng.choice(feasible)
            break
    else:  # pragma: no cover - counts of 1-3 always reach the range
        raise GenerationExhausted("CO target range unreachable")
    labels = _labels(rng, n_piles)
    cells = rng.sample(_PLAY.cells(), n_piles + 1)
    entities = [
        Entity(label=labels[i], kind="pile", name=name, category=by_cat[name],
               count=counts[i], cell=cells[i])
        for i in range(n_piles)
    ]
    return entities, cells[-1], {"item": name, "target": target}, ()


def _build_mde(rng, catalog, theme, level):
    k = level_param("MDE", level)
    by_cat = _name_category(catalog)
    names = rng.sample(_theme_pool(catalog, theme), 3 * k + 2)
    left = names[:k]
    right = names[k:2 * k]
    scene = names[k:]  # the k partners plus k+2 distractors
    order = list(scene)
    rng.shuffle(order)
    labels = _labels(rng, len(order))
    cells = rng.sample(_PLAY.cells(), len(order) + 1)
    entities = [
        Entity(label=labels[i], kind="item", name=name, category=by_cat[name],
               cell=cells[i], visible_phase="active")
        for i, name in enumerate(order)
    ]
    pair = rng.randrange(k)
    correct = labels[order.index(right[pair])]
    hint = tuple(
        {"type": "pair", "left": left[i], "right": right[i], "phase": "pre"}
        for i in range(k)
    ) + ({"type": "marker", "name": left[pair], "phase": "active"},)
    goal = {"pairs": [[left[i], right[i]] for i in range(k)],
            "target": left[pair], "correct": correct}
    return entities, cells[-1], goal, hint


_QUADS = ("TL", "TR", "BL", "BR")
_QUAD_OFFSET = {"TL": (0, 0), "TR": (0, 1), "BL": (1, 0), "BR": (1, 1)}


def _build_frame(rng, catalog, theme, level, kind):
    k = level_param(kind, level)
    if kind == "PU":
        colors = catalog["basket_colors"] + ["orange", "purple"]
        pattern = [rng.choice(colors) for _ in range(4)]
        target = "pattern"
        alt_sources = None
    else:
        animals = list(catalog["animal_ranks"]["weight"])
        target = rng.choice(animals)
        alt_sources = [a for a in animals if a != target]
        pattern = None

    r0, c0 = rng.randrange(4), rng.randrange(4)
    quad_cell = {q: _abs((r0 + dr, c0 + dc)) for q, (dr, dc) in _QUAD_OFFSET.items()}
    missing = rng.sample(_QUADS, k)
    ordered = sorted(missing, key=lambda q: quad_cell[q])
    pos_of_quad = {q: ROMAN[i] for i, q in enumerate(ordered)}

    entities = []
    for q in _QUADS:
        if q in missing:
            entities.append(Entity(
                label=None, kind="frame-slot", cell=quad_cell[q],
                props={"pos": pos_of_quad[q], "quad": q},
            ))
        else:
            entities.append(Entity(
                label=None, kind="frame-fill", cell=quad_cell[q],
                props={"quad": q, "source": target,
                       "pattern": pattern and pattern[_QUADS.index(q)]},
            ))

    piece_specs = []
    for q in ordered:
        piece_specs.append({"source": target, "quad": q,
                            "correct_pos": pos_of_quad[q],
                            "pattern": pattern and pattern[_QUADS.index(q)]})
    for _ in range(4 - k):
        q = rng.choice(_QUADS)
        if kind == "PU":
            wrong = rng.choice([c for c in colors if c != pattern[_QUADS.index(q)]])
            piece_specs.append({"source": "pattern", "quad": q,
                                "correct_pos": None, "pattern": wrong})
        else:
            piece_specs.append({"source": rng.choice(alt_sources), "quad": q,
                                "correct_pos": None, "pattern": None})
    rng.shuffle(piece_specs)
    labels = _labels(rng, 4)
    entities += [
        Entity(label=labels[i], kind="piece", name=spec["source"], slot=i,
               props=spec)
        for i, spec in enumerate(piece_specs)
    ]
    free = [c for c in _PLAY.cells() if c not in quad_cell.values()]
    hint_phase = "pre" if kind == "MFI" else "always"
    hint = ({"type": "target", "name": target, "phase": hint_phase,
             "pattern": pattern},)
    goal = {"target": target, "pattern": pattern,
            "positions": [ROMAN[i] for i in range(k)]}
    return entities, rng.choice(free), goal, hint


# maze compartment templates in play-local coordinates:
#   zones -> cell lists, walls -> cells, doors -> (cell, leads-to zone)
def _maze_template(rng: random.Random, n_doors: int):
    if n_doors == 1:
        door_r = rng.randrange(5)
        walls = [(r, 2) for r in range(5) if r != door_r]
        zones = {0: [(r, c) for r in range(5) for c in (0, 1)],
                 1: [(r, c) for r in range(5) for c in (3, 4)]}
        doors = [((door_r, 2), 1)]
    elif n_doors == 2:
        r1, r2 = rng.randrange(5), rng.randrange(5)
        walls = [(r, 1) for r in range(5) if r != r1]
        walls += [(r, 3) for r in range(5) if r != r2]
        zones = {0: [(r, 0) for r in range(5)],
                 1: [(r, 2) for r in range(5)],
                 2: [(r, 4) for r in range(5)]}
        doors = [((r1, 1), 1), ((r2, 3), 2)]
    else:
        r1 = rng.randrange(2)
        r3 = rng.randrange(3, 5)
        walls = [(r, 1) for r in range(5) if r != r1]
        walls += [(r, 3) for r in range(5) if r != r3]
        zones = {0: [(r, 0) for r in range(5)],
                 1: [(0, 2), (1, 2)],
                 2: [(3, 2), (4, 2)],
                 3: [(r, 4) for r in range(5)]}
        doors = [((r1, 1), 1), ((2, 2), 2), ((r3, 3), 3)]
    return zones, walls, doors


def _build_maze(rng, catalog, theme, level, kind):
    d = level_param(kind, level)
    zones, walls, door_specs = _maze_template(rng, d)
    colors = catalog["key_colors"]
    door_colors = rng.sample(colors, d)
    if kind == "DMA":
        key_colors = rng.sample([c for c in colors if c not in door_colors], d)
        mapping = dict(zip(key_colors, door_colors))
        distractor_color = rng.choice([c for c in colors if c not in key_colors])
    else:
        key_colors = list(door_colors)
        mapping = None
        distractor_color = None

    n_chests = 3 if kind == "MMA" else 0
    n_keys = d + (1 if kind == "DMA" else 0)
    n_labeled = d + n_keys + 1 + n_chests  # doors + keys + diamond + chests
    labels = _labels(rng, n_labeled)
    it = iter(labels)

    entities = [Entity(label=None, kind="wall", cell=_abs(w)) for w in walls]
    free = {z: list(cells) for z, cells in zones.items()}
    for z in free:
        rng.shuffle(free[z])

    for i, (cell, zone) in enumerate(door_specs):
        entities.append(Entity(
            label=next(it), kind="door", color=door_colors[i], zone=zone,
            cell=_abs(cell), props={"index": zone},
        ))
    for i in range(d):
        entities.append(Entity(
            label=next(it), kind="key", color=key_colors[i], zone=i,
            cell=_abs(free[i].pop()),
        ))
    if kind == "DMA":
        entities.append(Entity(
            label=next(it), kind="key", color=distractor_color, zone=0,
            cell=_abs(free[0].pop()), props={"distractor": True},
        ))

    last = max(zones)
    diamond_label = next(it)
    goal: dict = {}
    hint: tuple = ()
    if kind == "MMA":
        chest_cells = [free[last].pop() for _ in range(n_chests)]
        diamond_chest = rng.randrange(n_chests)
        for i, cell in enumerate(chest_cells):
            lb = next(it)
            entities.append(Entity(
                label=lb, kind="chest", name="treasure box", zone=last,
                cell=_abs(cell), visible_phase="active",
            ))
            if i == diamond_chest:
                goal["diamond_chest"] = lb
        entities.append(Entity(
            label=diamond_label, kind="diamond", name="diamond", zone=last,
            cell=_abs(chest_cells[diamond_chest]), visible_phase="pre",
        ))
    else:
        entities.append(Entity(
            label=diamond_label, kind="diamond", name="diamond", zone=last,
            cell=_abs(free[last].pop()),
        ))
    if kind == "DMA":
        goal["mapping"] = mapping
        hint = tuple(
            {"type": "mapping", "key_color": kc, "door_color": dc,
             "phase": "always"}
            for kc, dc in mapping.items()
        )
    return entities, _abs(free[0].pop()), goal, hint


_BUILDERS = {
    "CL": _build_cl,
    "SE": _build_se,
    "SO": _build_so,
    "PL": _build_pl,
    "CO": _build_co,
    "MDE": _build_mde,
}


def _build(kind: str, level: int, seed: int, rng: random.Random) -> TaskInstance:
    catalog = load_catalog()
    theme = _pick_theme(rng, catalog, kind)
    if kind in _BUILDERS:
        entities, agent, goal, hint = _BUILDERS[kind](rng, catalog, theme, level)
    elif kind in ("FI", "PU", "MFI"):
        entities, agent, goal, hint = _build_frame(rng, catalog, theme, level, kind)
    elif kind in ("MA", "DMA", "MMA"):
        entities, agent, goal, hint = _build_maze(rng, catalog, theme, level, kind)
    else:
        raise KeyError(f"unknown task kind {kind!r}")
    return TaskInstance(
        kind=kind, level=level, seed=seed, theme=theme,
        entities=tuple(entities), agent_cell=agent, goal=goal, hint=hint,
        decor=_sample_decor(rng, catalog),
    )


def _min_count_subset(counts: list[int], target: int) -> Optional[list[int]]:
    """Indices of a minimum-cardinality subset summing to target, or None."""
    best = None
    for mask in range(1, 1 << len(counts)):
        picked = [i for i in range(len(counts)) if mask >> i & 1]
        if len(picked) > 4:
            continue
        if sum(counts[i] for i in picked) == target:
            if best is None or len(picked) < len(best):
                best = picked
    return best


def constructed_plan(inst: TaskInstance) -> Optional[list[str]]:
    """Canonical success plan built directly from the instance structure.

    Every builder places exactly the structure these plans assume, so they
    are also minimum-length: each constituent step is individually required.
    Returns None for instances not produced by the shipped builders.
    """
    keys: list[str] = []
    if inst.is_memory:
        keys.append("continue|None|None")
    if inst.kind == "CL":
        for ent in inst.entities:
            if ent.kind == "item":
                keys.append(f"pick-up|{ent.label}|None")
                keys.append(f"put-into|A|{ent.props['target_basket']}")
    elif inst.kind == "SE":
        for ent in inst.entities:
            if ent.props.get("target"):
                keys.append(f"choose|{ent.label}|None")
    elif inst.kind == "MDE":
        keys.append(f"choose|{inst.goal['correct']}|None")
    elif inst.kind in ("SO", "PL", "FI", "PU", "MFI"):
        if inst.kind == "SO":
            pairs = zip(inst.goal["order"], inst.goal["positions"])
            for label, pos in pairs:
                letter = SLOT_LETTERS[inst.entity(label).slot]
                keys.append(f"place-at|{letter}|{pos}")
        elif inst.kind == "PL":
            keys.append(f"place-at|A|{inst.goal['correct_pos']}")
        else:
            for pos in inst.goal["positions"]:
                piece = next(
                    e for e in inst.entities
                    if e.kind == "piece" and e.props.get("correct_pos") == pos
                )
                keys.append(f"place-at|{SLOT_LETTERS[piece.slot]}|{pos}")
    elif inst.kind == "CO":
        piles = [e for e in inst.entities if e.kind == "pile"]
        picked = _min_count_subset(
            [p.count for p in piles], inst.goal["target"]
        )
        if picked is None:
            return None
        for i in picked:
            keys.append(f"pick-up|{piles[i].label}|None")
        keys.append("declare-done|None|None")
    elif inst.kind in ("MA", "DMA", "MMA"):
        doors = sorted(
            (e for e in inst.entities if e.kind == "door"),
            key=lambda e: e.props["index"],
        )
        correct_keys = sorted(
            (e for e in inst.entities
             if e.kind == "key" and not e.props.get("distractor")),
            key=lambda e: e.zone,
        )
        for key, door in zip(correct_keys, doors):
            keys.append(f"obtain|{key.label}|None")
            keys.append(f"unlock|A|{door.label}")
        if inst.kind == "MMA":
            keys.append(f"obtain|{inst.goal['diamond_chest']}|None")
        else:
            diamond = next(e for e in inst.entities if e.kind == "diamond")
            keys.append(f"obtain|{diamond.label}|None")
    else:
        return None
    return keys


def replay_plan(inst: TaskInstance, keys) -> bool:
    """True iff the key sequence is legal throughout and ends in success."""
    state = initial_state(inst, budget=None)
    for key in keys:
        if state.phase == "terminal":
            return False
        match = next(
            (a for a in generate_actions(state) if a.key() == key), None
        )
        if match is None:
            return False
        state = apply_action(state, match)
    return state.status == "success"


def check_solvable(instance: TaskInstance) -> Optional[tuple[str, ...]]:
    """Optimal witness plan (as action keys), or None if unsolvable.

    Tries the canonical constructed plan first and falls back to
    breadth-first search when that replay fails.
    """
    plan = constructed_plan(instance)
    if plan is not None and replay_plan(instance, plan):
        return tuple(plan)
    found = solve_bfs(instance)
    if found is None:
        return None
    return tuple(a.key() for a in found)


def sample_instance(kind: str, level: int, seed: int) -> TaskInstance:
    """Deterministically generate a solvable instance with its witness."""
    for attempt in range(MAX_GENERATION_ATTEMPTS):
        rng = random.Random(derive_seed("instance", kind, level, seed, attempt))
        inst = _build(kind, level, seed, rng)
        witness = check_solvable(inst)
        if witness is not None:
            return replace(inst, witness=witness)
    raise GenerationExhausted(
        f"generation-exhausted: {kind}-L{level} seed {seed}"
    )


def episode_seed(suite_seed: int, kind: str, level: int, round_index: int) -> int:
    """Per-round instance seed derived suite -> task -> level -> round."""
    return derive_seed("episode", suite_seed, kind, level, round_index)


# ---------------------------------------------------------------------------
# state-space counting


@dataclass(frozen=True)
class StateSpaceConfig:
    """Cardinalities the closed-form count ranges over."""

    play_cells: int
    item_names: int
    basket_colors: int
    decor_cells: int
    decor_variants: int

    @classmethod
    def from_catalog(cls) -> "StateSpaceConfig":
        catalog = load_catalog()
        return cls(
            play_cells=len(_PLAY.cells()),
            item_names=sum(len(v) for v in catalog["categories"].values()),
            basket_colors=len(catalog["basket_colors"]),
            decor_cells=len(decor_cells()),
            decor_variants=catalog["decor_variants"],
        )


def state_space_size(
    kind: str, level: int, config: Optional[StateSpaceConfig] = None
) -> int:
    """Exact count of distinct initial configurations for a task cell.

    A configuration is the agent cell, one distinct cell per entity, the
    ordered identity draw, the ordered basket-color draw, and the decorative
    variant vector. Only CL currently has a closed form.
    """
    if kind != "CL":
        raise NotImplementedError(f"state_space_size unsupported for {kind!r}")
    cfg = config or StateSpaceConfig.from_catalog()
    copies = level_param("CL", level)
    occupied = 2 * copies + 2 + 1  # items, baskets, agent
    return (
        math.perm(cfg.play_cells, occupied)
        * math.perm(cfg.item_names, 2)
        * math.perm(cfg.basket_colors, 2)
        * cfg.decor_variants ** cfg.decor_cells
    )
