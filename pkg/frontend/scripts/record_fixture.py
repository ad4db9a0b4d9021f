"""Record a real CL level-1 session into a JSON fixture for the UI tests.

Runs the play service in-process, follows the instance's stored witness
plan, and captures every HTTP exchange. The frontend tests replay these
exchanges through a fake fetch, so the UI is exercised against genuine
server responses.

Usage: python3 frontend/scripts/record_fixture.py
"""

import json
from pathlib import Path

from fastapi.testclient import TestClient

from gridbench.procgen import sample_instance
from gridbench.service import create_app
from gridbench.world import (
    apply_action,
    generate_actions,
    initial_state,
    option_rng,
    present_options,
)

KIND, LEVEL, SEED = "CL", 1, 7
OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "cl-session.json"


def main() -> None:
    client = TestClient(create_app())
    exchanges = []

    def call(method: str, path: str, body=None):
        if method == "POST":
            resp = client.post(path, json=body)
        else:
            resp = client.get(path)
        exchanges.append({
            "method": method,
            "path": path,
            "body": body,
            "status": resp.status_code,
            "json": resp.json(),
        })
        return resp.json()

    create_body = {
        "participant": "fixture", "kind": KIND, "level": LEVEL, "seed": SEED,
    }
    view = call("POST", "/sessions", create_body)
    session_id = view["session_id"]
    call("GET", f"/sessions/{session_id}/step")

    inst = sample_instance(KIND, LEVEL, SEED)
    state = initial_state(inst, budget=len(inst.witness))
    clicks = []
    for key in inst.witness:
        options = present_options(
            generate_actions(state), option_rng(inst.seed, state.step_index)
        )
        letter = next(
            lt for lt, action in options.options if action.key() == key
        )
        clicks.append(letter)
        call("POST", f"/sessions/{session_id}/choice",
             {"letter": letter, "step_index": state.step_index})
        state = apply_action(
            state, options.action_for(letter)
        )

    assert state.status == "success", state.status
    fixture = {
        "kind": KIND,
        "level": LEVEL,
        "seed": SEED,
        "create_body": create_body,
        "session_id": session_id,
        "clicks": clicks,
        "exchanges": exchanges,
    }
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(fixture, indent=2, sort_keys=True) + "\n")
    print(f"wrote {OUT} ({len(exchanges)} exchanges, {len(clicks)} clicks)")


if __name__ == "__main__":
    main()
