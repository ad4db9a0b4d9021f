"""HTTP session service for human play.

Serves exactly what a model client sees — rendered frame, goal text, and
lettered options — and accepts letter choices. Finished episodes become
PlayRecords that aggregate into the same SuccessTable format used for
models.
"""

from __future__ import annotations

import json
import math
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException, Response
from pydantic import BaseModel

from .procgen import sample_instance
from .render import RenderConfig, render_frame
from .scoring import SuccessTable
from .tasks import TASK_KINDS, goal_text
from .world import (
    TaskInstance,
    WorldState,
    apply_action,
    derive_seed,
    generate_actions,
    initial_state,
    option_rng,
    present_options,
)


@dataclass
class PlayRecord:
    participant: str
    kind: str
    level: int
    success: bool
    steps: int
    started_at: float
    finished_at: float

    def to_json(self) -> dict:
        return {
            "participant": self.participant,
            "kind": self.kind,
            "level": self.level,
            "success": self.success,
            "steps": self.steps,
            "started_at": self.started_at,
            "finished_at": self.finished_at,
        }

    @classmethod
    def from_json(cls, d: dict) -> "PlayRecord":
        return cls(**d)


@dataclass
class Session:
    session_id: str
    participant: str
    instance: TaskInstance
    state: WorldState
    started_at: float
    responses: dict[int, dict] = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)
    recorded: bool = False


def _options_for(session: Session):
    state = session.state
    inst = session.instance
    actions = generate_actions(state)
    perm_seed = derive_seed("options", inst.seed, state.step_index)
    return present_options(
        actions, option_rng(inst.seed, state.step_index), perm_seed
    )


def step_view(session: Session) -> dict:
    state = session.state
    inst = session.instance
    view = {
        "session_id": session.session_id,
        "step_index": state.step_index,
        "goal": goal_text(inst),
        "kind": inst.kind,
        "level": inst.level,
        "frame_url": f"/sessions/{session.session_id}/frame.png",
        "options": [],
        "terminal": None,
    }
    if state.phase == "terminal":
        view["terminal"] = {"status": state.status, "reason": state.reason}
    else:
        options = _options_for(session)
        view["options"] = [
            {"letter": letter, "text": action.surface_text}
            for letter, action in options.options
        ]
    return view


def aggregate_human_table(records) -> SuccessTable:
    """Success fractions per (kind, level), with raw counts retained."""
    tally: dict[tuple[str, int], list[int]] = {}
    for rec in records:
        cell = tally.setdefault((rec.kind, rec.level), [0, 0])
        cell[0] += rec.success
        cell[1] += 1
    table = SuccessTable(provenance="human")
    for (kind, level), (succ, total) in tally.items():
        table.rates[(kind, level)] = math.floor(succ / total * 100 + 0.5) / 100
        table.counts[(kind, level)] = (succ, total)
    return table


class CreateSessionRequest(BaseModel):
    participant: str
    kind: str
    level: int
    seed: Optional[int] = None


class ChoiceRequest(BaseModel):
    letter: str
    step_index: int


def create_app(
    store_path: Optional[Path] = None, cell_px: int = 64
) -> FastAPI:
    app = FastAPI(title="gridbench play service")
    sessions: dict[str, Session] = {}
    records: list[PlayRecord] = []
    render_cfg = RenderConfig(cell_px=cell_px)
    store_lock = threading.Lock()

    if store_path is not None:
        store_path = Path(store_path)
        if store_path.exists():
            for line in store_path.read_text().splitlines():
                if line.strip():
                    records.append(PlayRecord.from_json(json.loads(line)))

    def persist(record: PlayRecord) -> None:
        with store_lock:
            records.append(record)
            if store_path is not None:
                with store_path.open("a") as fh:
                    fh.write(json.dumps(record.to_json(), sort_keys=True) + "\n")

    def get_session(session_id: str) -> Session:
        session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return session

    def finish_if_terminal(session: Session) -> None:
        if session.state.phase == "terminal" and not session.recorded:
            session.recorded = True
            persist(PlayRecord(
                participant=session.participant,
                kind=session.instance.kind,
                level=session.instance.level,
                success=session.state.status == "success",
                steps=session.state.step_index,
                started_at=session.started_at,
                finished_at=time.time(),
            ))

    @app.post("/sessions")
    def create_session(req: CreateSessionRequest) -> dict:
        if req.kind not in TASK_KINDS or req.level not in (1, 2, 3):
            raise HTTPException(status_code=400, detail="invalid kind/level")
        session_id = uuid.uuid4().hex
        seed = req.seed
        if seed is None:
            seed = derive_seed("play-session", req.participant, session_id)
        inst = sample_instance(req.kind, req.level, seed)
        state = initial_state(inst, budget=len(inst.witness))
        session = Session(
            session_id=session_id,
            participant=req.participant,
            instance=inst,
            state=state,
            started_at=time.time(),
        )
        sessions[session_id] = session
        return step_view(session)

    @app.get("/sessions/{session_id}/step")
    def get_step(session_id: str) -> dict:
        return step_view(get_session(session_id))

    @app.post("/sessions/{session_id}/choice")
    def submit_choice(session_id: str, req: ChoiceRequest) -> dict:
        session = get_session(session_id)
        with session.lock:
            recorded = session.responses.get(req.step_index)
            if recorded is not None:
                return recorded  # idempotent replay of a double submit
            if session.state.phase == "terminal":
                raise HTTPException(status_code=409, detail="session finished")
            if req.step_index != session.state.step_index:
                raise HTTPException(status_code=409, detail="stale step index")
            options = _options_for(session)
            if req.letter not in options.letters():
                raise HTTPException(
                    status_code=400, detail="letter out of range"
                )
            action = options.action_for(req.letter)
            session.state = apply_action(session.state, action)
            finish_if_terminal(session)
            view = step_view(session)
            session.responses[req.step_index] = view
            return view

    @app.get("/sessions/{session_id}/frame.png")
    def get_frame(session_id: str) -> Response:
        session = get_session(session_id)
        frame = render_frame(session.state, render_cfg)
        return Response(
            content=frame.png,
            media_type="image/png",
            headers={"ETag": frame.sha256},
        )

    @app.get("/results/table")
    def results_table() -> dict:
        with store_lock:
            snapshot = list(records)
        return aggregate_human_table(snapshot).to_json()

    return app
