"""Deterministic rasterization of world states to PNG frames.

A frame is a pure function of (instance, state, cell size): rendering the
same state twice yields byte-identical PNG bytes. All art is procedural and
text uses the built-in bitmap font, so output does not depend on system
fonts or library versions beyond the PNG encoder itself.
"""

from __future__ import annotations

import hashlib
import io
import math
from dataclasses import dataclass

from PIL import Image, ImageDraw

from . import font
from .geometry import GridGeometry, RegionKind, region_of
from .world import SLOT_LETTERS, WorldState

COLOR_RGB = {
    "red": (214, 69, 65),
    "yellow": (244, 208, 63),
    "green": (82, 179, 89),
    "blue": (75, 119, 190),
    "orange": (235, 151, 78),
    "purple": (142, 68, 173),
}

_ITEM_PALETTE = (
    (214, 69, 65), (235, 151, 78), (244, 208, 63), (82, 179, 89),
    (54, 166, 186), (75, 119, 190), (142, 68, 173), (190, 100, 60),
)

_GRID_LINE = (120, 120, 120)
_HINT_BG = (236, 238, 242)
_BACKPACK_BG = (222, 216, 202)
_LABEL_BG = (255, 255, 255)
_LABEL_FG = (20, 20, 20)


class TilesetError(Exception):
    """A sprite was requested that the tileset cannot draw."""


@dataclass(frozen=True)
class RenderConfig:
    cell_px: int = 64

    @property
    def geometry(self) -> GridGeometry:
        return GridGeometry(cell_px=self.cell_px)

    @property
    def label_scale(self) -> int:
        # glyph height 7*s must cover at least a quarter of the cell
        return max(1, math.ceil(self.cell_px / (4 * font.GLYPH_H)))

    @property
    def small_scale(self) -> int:
        return max(1, math.ceil(self.cell_px / 48))


@dataclass(frozen=True)
class Frame:
    png: bytes
    sha256: str
    size: tuple[int, int]

    @classmethod
    def from_image(cls, img: Image.Image) -> "Frame":
        buf = io.BytesIO()
        img.save(buf, format="PNG")
        data = buf.getvalue()
        return cls(png=data, sha256=hashlib.sha256(data).hexdigest(), size=img.size)


def _style_of(name: str) -> tuple[tuple[int, int, int], int]:
    digest = hashlib.sha256(name.encode("utf-8")).digest()
    return _ITEM_PALETTE[digest[0] % len(_ITEM_PALETTE)], digest[1] % 5


def _shade(color, delta: int):
    return tuple(max(0, min(255, c + delta)) for c in color)


class Tileset:
    """Procedural sprite painter; every known entity kind has a sprite."""

    KINDS = (
        "item", "pile", "basket", "key", "door", "wall",
        "diamond", "chest", "piece", "frame-fill", "agent",
    )

    def __init__(self, cfg: RenderConfig):
        self.cfg = cfg

    def draw(self, drw: ImageDraw.ImageDraw, box, entity) -> None:
        kind = entity.kind
        if kind not in self.KINDS:
            raise TilesetError(f"no sprite for entity kind {kind!r}")
        getattr(self, "_" + kind.replace("-", "_"))(drw, box, entity)

    # box is (x0, y0, x1, y1) in pixels, inclusive

    def _shape(self, drw, box, color, shape_id: int) -> None:
        x0, y0, x1, y1 = box
        outline = _shade(color, -70)
        if shape_id == 0:
            drw.ellipse(box, fill=color, outline=outline)
        elif shape_id == 1:
            drw.rectangle(box, fill=color, outline=outline)
        elif shape_id == 2:
            cx = (x0 + x1) // 2
            drw.polygon([(cx, y0), (x1, y1), (x0, y1)], fill=color, outline=outline)
        elif shape_id == 3:
            cx, cy = (x0 + x1) // 2, (y0 + y1) // 2
            drw.polygon([(cx, y0), (x1, cy), (cx, y1), (x0, cy)],
                        fill=color, outline=outline)
        else:
            qw = (x1 - x0) // 4
            drw.polygon([(x0 + qw, y0), (x1 - qw, y0), (x1, (y0 + y1) // 2),
                         (x1 - qw, y1), (x0 + qw, y1), (x0, (y0 + y1) // 2)],
                        fill=color, outline=outline)

    def _named_sprite(self, drw, box, name: str) -> None:
        color, shape_id = _style_of(name)
        x0, y0, x1, y1 = box
        pad = max(2, (x1 - x0) // 8)
        inner = (x0 + pad, y0 + pad, x1 - pad, y1 - pad)
        self._shape(drw, inner, color, shape_id)
        s = self.cfg.small_scale
        ch = name[:1].upper()
        tw, th = font.text_size(ch, s)
        cx = (x0 + x1 - tw) // 2
        cy = (y0 + y1 - th) // 2
        font.draw_text(drw, (cx, cy), ch, _shade(color, -110), s)

    def _item(self, drw, box, ent) -> None:
        self._named_sprite(drw, box, ent.name)

    def _pile(self, drw, box, ent) -> None:
        x0, y0, x1, y1 = box
        w = (x1 - x0 + 1) // 2
        h = (y1 - y0 + 1) // 2
        spots = [(x0, y0), (x1 - w, y0), (x0 + w // 2, y1 - h)][: ent.count]
        for sx, sy in spots:
            self._named_sprite(drw, (sx, sy, sx + w, sy + h), ent.name)

    def _basket(self, drw, box, ent) -> None:
        x0, y0, x1, y1 = box
        color = COLOR_RGB[ent.color]
        top = y0 + (y1 - y0) // 4
        inset = (x1 - x0) // 6
        drw.polygon([(x0, top), (x1, top), (x1 - inset, y1), (x0 + inset, y1)],
                    fill=color, outline=_shade(color, -70))
        drw.line((x0, top, x1, top), fill=_shade(color, -70), width=2)

    def _key(self, drw, box, ent) -> None:
        x0, y0, x1, y1 = box
        color = COLOR_RGB[ent.color]
        d = (y1 - y0) // 2
        drw.ellipse((x0, y0, x0 + d, y0 + d), outline=color,
                    width=max(2, d // 4))
        shaft_y = y0 + d // 2
        drw.line((x0 + d, shaft_y, x1, shaft_y), fill=color,
                 width=max(2, d // 5))
        drw.line((x1 - d // 3, shaft_y, x1 - d // 3, shaft_y + d // 2),
                 fill=color, width=max(2, d // 5))
        drw.line((x1, shaft_y, x1, shaft_y + d // 2), fill=color,
                 width=max(2, d // 5))

    def _door(self, drw, box, ent) -> None:
        x0, y0, x1, y1 = box
        color = COLOR_RGB[ent.color]
        drw.rectangle(box, fill=color, outline=_shade(color, -90))
        drw.rectangle((x0 + 3, y0 + 3, x1 - 3, y1 - 3),
                      outline=_shade(color, -90))
        kx = (x0 + x1) // 2
        ky = (y0 + 2 * y1) // 3
        r = max(2, (x1 - x0) // 10)
        drw.ellipse((kx - r, ky - r, kx + r, ky + r), fill=_shade(color, -90))

    def _wall(self, drw, box, ent) -> None:
        x0, y0, x1, y1 = box
        drw.rectangle(box, fill=(118, 110, 104), outline=(80, 74, 70))
        h = (y1 - y0) // 3
        for i in range(1, 3):
            drw.line((x0, y0 + i * h, x1, y0 + i * h), fill=(80, 74, 70))
        drw.line(((x0 + x1) // 2, y0, (x0 + x1) // 2, y0 + h), fill=(80, 74, 70))
        drw.line(((x0 + 3 * x1) // 4, y0 + h, (x0 + 3 * x1) // 4, y0 + 2 * h),
                 fill=(80, 74, 70))

    def _diamond(self, drw, box, ent) -> None:
        x0, y0, x1, y1 = box
        cx, cy = (x0 + x1) // 2, (y0 + y1) // 2
        color = (90, 200, 230)
        drw.polygon([(cx, y0), (x1, cy), (cx, y1), (x0, cy)],
                    fill=color, outline=_shade(color, -90))
        drw.line((x0, cy, x1, cy), fill=_shade(color, -90))
        drw.line((cx, y0, cx, y1), fill=_shade(color, -90))

    def _chest(self, drw, box, ent) -> None:
        x0, y0, x1, y1 = box
        color = (158, 110, 62)
        lid = y0 + (y1 - y0) // 3
        drw.rectangle((x0, lid, x1, y1), fill=color, outline=_shade(color, -70))
        drw.rectangle((x0, y0, x1, lid), fill=_shade(color, 25),
                      outline=_shade(color, -70))
        cx = (x0 + x1) // 2
        drw.rectangle((cx - 3, lid - 3, cx + 3, lid + 5), fill=(230, 200, 90))

    def _piece(self, drw, box, ent) -> None:
        pattern = ent.props.get("pattern")
        if pattern:
            color = COLOR_RGB[pattern]
            drw.rectangle(box, fill=color, outline=_shade(color, -70))
        else:
            self._named_sprite(drw, box, ent.name)
        x0, y0, x1, y1 = box
        q = ent.props.get("quad", "")
        w = max(3, (x1 - x0) // 5)
        corner = {
            "TL": (x0, y0, x0 + w, y0 + w),
            "TR": (x1 - w, y0, x1, y0 + w),
            "BL": (x0, y1 - w, x0 + w, y1),
            "BR": (x1 - w, y1 - w, x1, y1),
        }.get(q)
        if corner:
            drw.rectangle(corner, fill=(30, 30, 30))

    _frame_fill = _piece

    def _agent(self, drw, box, ent) -> None:
        x0, y0, x1, y1 = box
        cx = (x0 + x1) // 2
        h = y1 - y0
        r = h // 5
        drw.ellipse((cx - r, y0, cx + r, y0 + 2 * r), fill=(60, 60, 70),
                    outline=(30, 30, 40))
        drw.polygon([(cx, y0 + 2 * r), (x1 - h // 6, y1), (x0 + h // 6, y1)],
                    fill=(60, 60, 70), outline=(30, 30, 40))


def _hint_visible(entry: dict, phase: str) -> bool:
    p = entry.get("phase", "always")
    if p == "pre":
        return phase == "awaiting-continue"
    if p == "active":
        return phase != "awaiting-continue"
    return True


def render_frame(state: WorldState, config: RenderConfig | None = None) -> Frame:
    cfg = config or RenderConfig()
    geo = cfg.geometry
    cell = cfg.cell_px
    inst = state.instance
    img = Image.new("RGB", geo.image_size, (250, 250, 250))
    drw = ImageDraw.Draw(img)
    tiles = Tileset(cfg)
    s = cfg.label_scale

    from .procgen import decor_cells, load_catalog

    theme_base = tuple(load_catalog()["themes"][inst.theme]["base_color"])
    decor_map = dict(zip(decor_cells(geo), inst.decor))

    def box_of(r: int, c: int, pad: int = 0):
        x0, y0 = c * cell + pad, r * cell + pad
        return (x0, y0, x0 + cell - 1 - 2 * pad, y0 + cell - 1 - 2 * pad)

    # backgrounds
    for r in range(geo.total_rows):
        for c in range(geo.total_cols):
            region = region_of(r, c, geo)
            if region is RegionKind.HINT:
                fill = _HINT_BG
            elif region is RegionKind.BACKPACK:
                fill = _BACKPACK_BG
            elif region is RegionKind.PLAY:
                fill = _shade(theme_base, 12)
            else:
                variant = decor_map.get((r, c), 0)
                fill = _shade(theme_base, -10 * variant)
            drw.rectangle(box_of(r, c), fill=fill)
            if region in (RegionKind.PLAY, RegionKind.DECOR):
                drw.rectangle(box_of(r, c), outline=_GRID_LINE)
            if region is RegionKind.DECOR:
                variant = decor_map.get((r, c), 0)
                x0, y0, x1, y1 = box_of(r, c, pad=cell // 3)
                if variant == 1:
                    drw.ellipse((x0, y0, x1, y1), outline=_shade(theme_base, -60))
                elif variant >= 2:
                    drw.line((x0, y1, x1, y0), fill=_shade(theme_base, -60),
                             width=1 + variant - 2)

    # hint panel entries, two cells wide, one per row
    visible_hints = [h for h in inst.hint if _hint_visible(h, state.phase)]
    for row, entry in enumerate(visible_hints[:8]):
        x0, y0, _, y1 = box_of(row, 0, pad=max(2, cell // 16))
        x1 = 2 * cell - 1 - max(2, cell // 16)
        half = (x1 - x0) // 2
        kind = entry["type"]
        if kind == "item" or kind == "target":
            if entry.get("pattern"):
                pw = (y1 - y0) // 2
                for i, pc in enumerate(entry["pattern"]):
                    px = x0 + (i % 2) * pw
                    py = y0 + (i // 2) * pw
                    drw.rectangle((px, py, px + pw, py + pw),
                                  fill=COLOR_RGB[pc], outline=(60, 60, 60))
            else:
                tiles._named_sprite(drw, (x0, y0, x0 + (y1 - y0), y1), entry["name"])
                font.draw_text(drw, (x0 + (y1 - y0) + 2, y0),
                               entry["name"][:8], _LABEL_FG, cfg.small_scale)
        elif kind == "pair":
            tiles._named_sprite(drw, (x0, y0, x0 + half - 6, y1), entry["left"])
            font.draw_text(drw, (x0 + half - 4, (y0 + y1) // 2 - 3), ">",
                           _LABEL_FG, cfg.small_scale)
            tiles._named_sprite(drw, (x0 + half + 4, y0, x1, y1), entry["right"])
        elif kind == "marker":
            drw.rectangle((x0, y0, x1, y1), fill=(15, 15, 15))
            inset = max(3, cell // 10)
            tiles._named_sprite(
                drw, (x0 + inset, y0 + inset, x0 + (y1 - y0) - inset, y1 - inset),
                entry["name"],
            )
        elif kind == "mapping":
            key_stub = type(inst.entities[0])(
                label=None, kind="key", color=entry["key_color"]
            )
            door_stub = type(inst.entities[0])(
                label=None, kind="door", color=entry["door_color"]
            )
            tiles.draw(drw, (x0, y0, x0 + half - 6, y1), key_stub)
            font.draw_text(drw, (x0 + half - 4, (y0 + y1) // 2 - 3), ">",
                           _LABEL_FG, cfg.small_scale)
            tiles.draw(drw, (x0 + half + 4, y0, x1, y1), door_stub)

    # scene entities
    pad = max(2, cell // 12)
    loc_map = state.loc_map()

    def draw_label_badge(r: int, c: int, label: int) -> None:
        text = str(label)
        tw, th = font.text_size(text, s)
        x0 = c * cell + 2
        y0 = r * cell + 2
        drw.rectangle((x0, y0, x0 + tw + 3, y0 + th + 3), fill=_LABEL_BG,
                      outline=_GRID_LINE)
        font.draw_text(drw, (x0 + 2, y0 + 2), text, _LABEL_FG, s)

    for ent in inst.entities:
        if ent.label is None:
            if ent.kind == "frame-slot":
                continue  # drawn below with placement state
            if ent.cell is not None:
                tiles.draw(drw, box_of(*ent.cell, pad=pad), ent)
            continue
        loc = loc_map.get(ent.label)
        if loc is None or loc[0] != "scene" or not state.in_scene(ent.label):
            continue
        r, c = loc[1], loc[2]
        tiles.draw(drw, box_of(r, c, pad=pad), ent)
        draw_label_badge(r, c, ent.label)

    # position markers, or whatever has been placed on them
    for ent in inst.entities:
        if ent.kind != "frame-slot":
            continue
        r, c = ent.cell
        pos = ent.props["pos"]
        placed = state.placed_at(pos)
        if placed is not None:
            tiles.draw(drw, box_of(r, c, pad=pad), inst.entity(placed))
        else:
            x0, y0, x1, y1 = box_of(r, c, pad=max(2, cell // 16))
            drw.rectangle((x0, y0, x1, y1), outline=(40, 40, 40))
            tw, th = font.text_size(pos, s)
            font.draw_text(drw, ((x0 + x1 - tw) // 2, (y0 + y1 - th) // 2),
                           pos, (40, 40, 40), s)

    # agent
    agent_ent = type(inst.entities[0])(label=None, kind="agent")
    tiles.draw(drw, box_of(*state.agent, pad=max(2, cell // 6)), agent_ent)

    # backpack strip
    for slot, (r, c) in enumerate(geo.backpack_slot_cells):
        drw.rectangle(box_of(r, c), outline=(90, 90, 90))
        letter = SLOT_LETTERS[slot]
        font.draw_text(drw, (c * cell + 3, r * cell + 3), letter,
                       (60, 60, 60), s)
        held = state.backpack[slot]
        if held is not None:
            tiles.draw(drw, box_of(r, c, pad=pad + cell // 8), inst.entity(held))
    for r, c in geo.backpack_cells[4:]:
        drw.rectangle(box_of(r, c, pad=cell // 8), fill=_shade(_BACKPACK_BG, -20))

    return Frame.from_image(img)
