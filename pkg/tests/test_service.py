"""Play service: session flow, idempotency, format parity with the harness."""

import hashlib

import pytest
from fastapi.testclient import TestClient

from gridbench.procgen import sample_instance
from gridbench.render import RenderConfig, render_frame
from gridbench.service import (
    PlayRecord,
    aggregate_human_table,
    create_app,
)
from gridbench.world import (
    apply_action,
    generate_actions,
    initial_state,
    option_rng,
    present_options,
)


@pytest.fixture()
def client():
    return TestClient(create_app())


def start(client, kind="CL", level=1, seed=123, participant="p1"):
    resp = client.post("/sessions", json={
        "participant": participant, "kind": kind, "level": level, "seed": seed,
    })
    assert resp.status_code == 200
    return resp.json()


def play_letter(view, key, inst, state):
    """Letter the harness would assign to the action with this key."""
    options = present_options(
        generate_actions(state), option_rng(inst.seed, state.step_index)
    )
    for letter, action in options.options:
        if action.key() == key:
            return letter, action
    raise AssertionError(key)


class TestSessionFlow:
    def test_create_returns_first_step_view(self, client):
        view = start(client)
        assert view["step_index"] == 0
        assert view["kind"] == "CL"
        assert view["terminal"] is None
        assert view["goal"]
        letters = [o["letter"] for o in view["options"]]
        assert letters == [chr(ord("A") + i) for i in range(len(letters))]

    def test_witness_playthrough_succeeds(self, client):
        view = start(client, seed=7)
        inst = sample_instance("CL", 1, 7)
        state = initial_state(inst, budget=len(inst.witness))
        for key in inst.witness:
            letter, action = play_letter(view, key, inst, state)
            resp = client.post(
                f"/sessions/{view['session_id']}/choice",
                json={"letter": letter, "step_index": state.step_index},
            )
            assert resp.status_code == 200
            view = resp.json()
            state = apply_action(state, action)
        assert view["terminal"] == {"status": "success", "reason": "completed"}
        assert view["options"] == []

    def test_wrong_choice_records_failure(self, client):
        view = start(client, kind="PL", level=1, seed=2)
        inst = sample_instance("PL", 1, 2)
        state = initial_state(inst)
        correct_letter, _ = play_letter(view, inst.witness[0], inst, state)
        wrong = next(
            o["letter"] for o in view["options"] if o["letter"] != correct_letter
        )
        resp = client.post(
            f"/sessions/{view['session_id']}/choice",
            json={"letter": wrong, "step_index": 0},
        )
        assert resp.json()["terminal"]["status"] == "failure"

    def test_memory_task_opens_with_sole_continue_option(self, client):
        view = start(client, kind="SE", level=1, seed=0)
        assert len(view["options"]) == 1
        assert view["options"][0]["letter"] == "A"
        assert "continue" in view["options"][0]["text"].lower()


class TestValidation:
    def test_unknown_session_404(self, client):
        assert client.get("/sessions/nope/step").status_code == 404

    def test_invalid_kind_400(self, client):
        resp = client.post("/sessions", json={
            "participant": "p", "kind": "XX", "level": 1,
        })
        assert resp.status_code == 400

    def test_invalid_level_400(self, client):
        resp = client.post("/sessions", json={
            "participant": "p", "kind": "CL", "level": 4,
        })
        assert resp.status_code == 400

    def test_out_of_range_letter_leaves_state_unchanged(self, client):
        view = start(client)
        resp = client.post(
            f"/sessions/{view['session_id']}/choice",
            json={"letter": "Z", "step_index": 0},
        )
        assert resp.status_code == 400
        after = client.get(f"/sessions/{view['session_id']}/step").json()
        assert after["step_index"] == 0
        assert after["options"] == view["options"]

    def test_stale_step_index_409(self, client):
        view = start(client)
        resp = client.post(
            f"/sessions/{view['session_id']}/choice",
            json={"letter": "A", "step_index": 3},
        )
        assert resp.status_code == 409

    def test_choice_after_finish_409(self, client):
        view = start(client, kind="PL", level=1, seed=2)
        inst = sample_instance("PL", 1, 2)
        state = initial_state(inst)
        letter, _ = play_letter(view, inst.witness[0], inst, state)
        client.post(
            f"/sessions/{view['session_id']}/choice",
            json={"letter": letter, "step_index": 0},
        )
        resp = client.post(
            f"/sessions/{view['session_id']}/choice",
            json={"letter": "A", "step_index": 1},
        )
        assert resp.status_code == 409


class TestIdempotency:
    def test_double_submit_replays_the_recorded_view(self, client):
        view = start(client, seed=7)
        body = {"letter": view["options"][0]["letter"], "step_index": 0}
        first = client.post(
            f"/sessions/{view['session_id']}/choice", json=body
        ).json()
        second = client.post(
            f"/sessions/{view['session_id']}/choice", json=body
        ).json()
        assert first == second
        # even a different letter at the same step replays, not re-applies
        other = client.post(
            f"/sessions/{view['session_id']}/choice",
            json={"letter": "Z", "step_index": 0},
        ).json()
        assert other == first


class TestFormatParity:
    def test_served_options_match_harness_presentation(self, client):
        view = start(client, kind="SO", level=2, seed=9)
        inst = sample_instance("SO", 2, 9)
        state = initial_state(inst, budget=len(inst.witness))
        while state.phase != "terminal":
            options = present_options(
                generate_actions(state),
                option_rng(inst.seed, state.step_index),
            )
            served = [(o["letter"], o["text"]) for o in view["options"]]
            local = [(lt, a.surface_text) for lt, a in options.options]
            assert served == local
            letter, action = play_letter(view, inst.witness[state.step_index],
                                         inst, state)
            view = client.post(
                f"/sessions/{view['session_id']}/choice",
                json={"letter": letter, "step_index": state.step_index},
            ).json()
            state = apply_action(state, action)

    def test_served_frame_bytes_match_harness_render(self, client):
        view = start(client, kind="MA", level=1, seed=4)
        inst = sample_instance("MA", 1, 4)
        state = initial_state(inst, budget=len(inst.witness))
        resp = client.get(view["frame_url"])
        assert resp.status_code == 200
        local = render_frame(state, RenderConfig(cell_px=64))
        assert resp.content == local.png
        assert resp.headers["ETag"] == local.sha256
        assert hashlib.sha256(resp.content).hexdigest() == local.sha256


class TestPersistenceAndAggregation:
    def test_records_persist_across_app_restarts(self, tmp_path, client):
        store = tmp_path / "plays.jsonl"
        app = create_app(store_path=store)
        tc = TestClient(app)
        view = start(tc, kind="PL", level=1, seed=2)
        inst = sample_instance("PL", 1, 2)
        letter, _ = play_letter(view, inst.witness[0], inst, initial_state(inst))
        tc.post(
            f"/sessions/{view['session_id']}/choice",
            json={"letter": letter, "step_index": 0},
        )
        reopened = TestClient(create_app(store_path=store))
        table = reopened.get("/results/table").json()
        assert table["rates"]["PL"]["1"] == 1.0
        assert table["counts"]["PL-L1"] == [1, 1]

    def test_aggregate_human_table_rounds_to_two_places(self):
        records = [
            PlayRecord("p", "CL", 1, success=(i != 0), steps=4,
                       started_at=0.0, finished_at=1.0)
            for i in range(40)
        ]
        table = aggregate_human_table(records)
        assert table.get("CL", 1) == 0.98
        assert table.counts[("CL", 1)] == (39, 40)
        assert table.provenance == "human"

    def test_aggregate_empty_records(self):
        table = aggregate_human_table([])
        assert table.rates == {}
        assert len(table.missing_cells()) == 36
