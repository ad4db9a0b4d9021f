"""Episode evaluation loop: prompts, answer decoding, clients, transcripts.

One episode is a strict loop: enumerate legal actions, letter them under a
seeded permutation, build the prompt, ask the client, decode the reply, and
apply the chosen action until the episode terminates or the step budget
runs out.
"""

from __future__ import annotations

import base64
import json
import os
import re
import time
from dataclasses import dataclass, field, replace
from functools import lru_cache
from pathlib import Path
from typing import Optional, Sequence

from .render import Frame, RenderConfig, render_frame
from .tasks import TASK_KINDS, goal_text
from .world import (
    Action,
    OptionList,
    TaskInstance,
    WorldState,
    apply_action,
    derive_seed,
    generate_actions,
    initial_state,
    option_rng,
    present_options,
)

TRANSCRIPT_SCHEMA_VERSION = 1

RULES_PREAMBLE = (
    "You are playing as a character in a 2D game scene -- the man dressed in "
    "a brown shirt and gray pants. During the game, you need to complete a "
    "task step by step by interacting with various items within the scene.\n"
    "\n"
    "The following are the rules that you need to understand and follow:\n"
    "- Items in the scene are identified by numerical labels, such as 0, 1, "
    "2, 3, etc.\n"
    "- At the bottom of the scene, there are four black squares representing "
    "your backpack slots, labeled A, B, C, and D.\n"
    "- You can directly interact with items in the scene (e.g., picking up "
    "an apple) or use items from your backpack to interact with other items. "
    "(e.g., unlocking a door with a key)."
)

ICL_INTRO = (
    "To help you better understand the rules, let's go through an example "
    "step by step."
)

NON_MEMORY_BRANCH = (
    "Each step, I will provide you with a snapshot of the current state, "
    "along with a list of actionable options that you can choose to perform "
    "at this stage. Then you should analyze the given information and select "
    "the correct action to achieve the goal."
)

MEMORY_BRANCH = (
    "Each step, I will provide you with a snapshot of the current state as "
    "well as a collection of all the previous states of the scene, along "
    "with a list of actionable options that you can choose to perform at "
    "this stage. Then you should analyze the given information and select "
    "the correct action to achieve the goal."
)

ANSWER_FORMAT = (
    "Please directly give your answer within <ANSWER></ANSWER> tags.\n"
    "i.e., <ANSWER> answer here </ANSWER>\n"
    "The answer should only contain the uppercase letter."
)

COT_FORMAT = (
    "You should first think about the reasoning process in your mind and "
    "then provide the answer. The reasoning process and answer are enclosed "
    "within <THINK></THINK> and <ANSWER></ANSWER> tags, respectively.\n"
    "i.e., <THINK> reasoning process here </THINK> <ANSWER> answer here "
    "</ANSWER>.\n"
    "The answer should only contain the uppercase letter."
)

REASONING_MODES = ("zero-shot", "cot", "icl")


@dataclass(frozen=True)
class PromptMode:
    reasoning: str = "zero-shot"

    def __post_init__(self):
        if self.reasoning not in REASONING_MODES:
            raise ValueError(f"unknown reasoning mode {self.reasoning!r}")


@dataclass(frozen=True)
class PromptMessage:
    role: str
    text: str
    frames: tuple[Frame, ...] = ()


MessageSequence = list[PromptMessage]


def goal_and_actions_text(instance: TaskInstance, options: OptionList) -> str:
    lines = "\n".join(options.lines())
    return (
        f"In this task, your goal is: {goal_text(instance)}. "
        f"Now the game starts!\n"
        f"What is the action you will choose?  The actions you can choose "
        f"from are:\n{lines}."
    )


def build_prompt(
    instance: TaskInstance,
    frame_history: Sequence[Frame],
    options: OptionList,
    mode: PromptMode = PromptMode(),
) -> MessageSequence:
    """Assemble the full per-step message sequence for a client.

    ``frame_history`` is the ordered list of frames seen so far including
    the current one. Non-memory tasks attach only the current frame; memory
    tasks attach the whole history.
    """
    parts = [RULES_PREAMBLE]
    example_frames: tuple[Frame, ...] = ()
    if mode.reasoning == "icl":
        example_text, example_frames = icl_bundle(instance.kind)
        parts.append(f"{ICL_INTRO}\n{example_text}")
    parts.append(MEMORY_BRANCH if instance.is_memory else NON_MEMORY_BRANCH)
    parts.append(goal_and_actions_text(instance, options))
    parts.append(COT_FORMAT if mode.reasoning == "cot" else ANSWER_FORMAT)
    if instance.is_memory:
        attached = tuple(frame_history)
    else:
        attached = tuple(frame_history[-1:])
    return [
        PromptMessage(
            role="user",
            text="\n\n".join(parts),
            frames=example_frames + attached,
        )
    ]


_ANSWER_TAG = re.compile(r"<\s*answer\s*>(.*?)<\s*/\s*answer\s*>",
                         re.IGNORECASE | re.DOTALL)
_LONE_UPPER = re.compile(r"\b([A-Z])\b")


def decode_answer(text: str, options: OptionList) -> Optional[int]:
    """Decode a raw client reply to an option index, or None if invalid.

    Precedence: optional answer-tag stripping, then first option whose
    surface text occurs in the reply, then the first lone uppercase letter
    whose index is in range.
    """
    m = _ANSWER_TAG.search(text)
    if m:
        text = m.group(1)
    for i, (_letter, action) in enumerate(options.options):
        if action.surface_text in text:
            return i
    for m in _LONE_UPPER.finditer(text):
        idx = ord(m.group(1)) - ord("A")
        if idx < len(options):
            return idx
    return None


# ---------------------------------------------------------------------------
# clients


class ClientTransportError(Exception):
    """Infrastructure failure talking to a client; retried, never a task loss."""


@dataclass(frozen=True)
class StepContext:
    """Structured view of the current step for scripted clients."""

    instance: TaskInstance
    state: WorldState
    options: OptionList


class AgentClient:
    """Turns a prompt into raw answer text, one step at a time."""

    name = "client"
    needs_images = True

    def reset(self, instance: TaskInstance) -> None:
        """Called once before each episode."""

    def respond(self, messages: MessageSequence, context: StepContext) -> str:
        raise NotImplementedError


class OracleClient(AgentClient):
    """Replays the instance's stored witness plan."""

    name = "oracle"
    needs_images = False

    def __init__(self):
        self._cursor = 0

    def reset(self, instance: TaskInstance) -> None:
        self._cursor = 0

    def respond(self, messages: MessageSequence, context: StepContext) -> str:
        witness = context.instance.witness
        if witness is None or self._cursor >= len(witness):
            raise ClientTransportError("oracle has no witness step to play")
        key = witness[self._cursor]
        self._cursor += 1
        for letter, action in context.options.options:
            if action.key() == key:
                return f"<ANSWER>{letter}</ANSWER>"
        raise ClientTransportError(f"witness step {key!r} not among options")


class RandomClient(AgentClient):
    """Uniform random choice among the offered letters."""

    name = "random"
    needs_images = False

    def __init__(self, seed: int = 0):
        import random

        self._rng = random.Random(seed)

    def respond(self, messages: MessageSequence, context: StepContext) -> str:
        letter = self._rng.choice(context.options.letters())
        return f"<ANSWER>{letter}</ANSWER>"


class ScriptedClient(AgentClient):
    """Plays back a fixed list of raw responses; for tests."""

    name = "scripted"
    needs_images = False

    def __init__(self, responses: Sequence[str]):
        self._responses = list(responses)
        self._cursor = 0

    def reset(self, instance: TaskInstance) -> None:
        self._cursor = 0

    def respond(self, messages: MessageSequence, context: StepContext) -> str:
        if self._cursor >= len(self._responses):
            raise ClientTransportError("script exhausted")
        text = self._responses[self._cursor]
        self._cursor += 1
        return text


class HttpChatClient(AgentClient):
    """Remote chat-completions client (OpenAI-compatible payload shape).

    Credentials come exclusively from environment variables:
    ``GRIDBENCH_API_KEY`` (required) and ``GRIDBENCH_API_BASE`` (optional).
    """

    name = "api"
    needs_images = True

    def __init__(self, model: str, timeout: float = 120.0):
        self.model = model
        self.timeout = timeout
        self.api_key = os.environ.get("GRIDBENCH_API_KEY")
        self.base_url = os.environ.get(
            "GRIDBENCH_API_BASE", "https://api.openai.com/v1"
        )
        if not self.api_key:
            raise ClientTransportError(
                "GRIDBENCH_API_KEY environment variable is not set"
            )

    def respond(self, messages: MessageSequence, context: StepContext) -> str:
        import httpx

        payload_messages = []
        for msg in messages:
            content: list[dict] = [{"type": "text", "text": msg.text}]
            for frame in msg.frames:
                b64 = base64.b64encode(frame.png).decode("ascii")
                content.append({
                    "type": "image_url",
                    "image_url": {"url": f"data:image/png;base64,{b64}"},
                })
            payload_messages.append({"role": msg.role, "content": content})
        try:
            resp = httpx.post(
                f"{self.base_url}/chat/completions",
                headers={"Authorization": f"Bearer {self.api_key}"},
                json={
                    "model": self.model,
                    "messages": payload_messages,
                    "temperature": 0,
                },
                timeout=self.timeout,
            )
            resp.raise_for_status()
        except httpx.HTTPError as exc:
            raise ClientTransportError(str(exc)) from exc
        return resp.json()["choices"][0]["message"]["content"]


# ---------------------------------------------------------------------------
# transcripts


@dataclass(frozen=True)
class TranscriptStep:
    step_index: int
    permutation_seed: int
    options: tuple[tuple[str, str, str], ...]  # (letter, action key, surface)
    frame_sha256: Optional[str]
    raw_response: str
    decoded_letter: Optional[str]
    action_key: Optional[str]
    status: str
    reason: Optional[str]

    def to_json(self) -> dict:
        return {
            "step_index": self.step_index,
            "permutation_seed": self.permutation_seed,
            "options": [list(o) for o in self.options],
            "frame_sha256": self.frame_sha256,
            "raw_response": self.raw_response,
            "decoded_letter": self.decoded_letter,
            "action_key": self.action_key,
            "status": self.status,
            "reason": self.reason,
        }

    @classmethod
    def from_json(cls, d: dict) -> "TranscriptStep":
        return cls(
            step_index=d["step_index"],
            permutation_seed=d["permutation_seed"],
            options=tuple(tuple(o) for o in d["options"]),
            frame_sha256=d.get("frame_sha256"),
            raw_response=d["raw_response"],
            decoded_letter=d.get("decoded_letter"),
            action_key=d.get("action_key"),
            status=d["status"],
            reason=d.get("reason"),
        )


@dataclass(frozen=True)
class Transcript:
    instance: TaskInstance
    client_name: str
    mode: str
    budget: int
    steps: tuple[TranscriptStep, ...]
    status: str
    reason: Optional[str]
    elapsed_s: float

    def to_json_lines(self) -> str:
        header = {
            "schema_version": TRANSCRIPT_SCHEMA_VERSION,
            "record": "header",
            "instance": self.instance.to_json(),
            "client": self.client_name,
            "mode": self.mode,
            "budget": self.budget,
            "status": self.status,
            "reason": self.reason,
            "elapsed_s": self.elapsed_s,
        }
        lines = [json.dumps(header, sort_keys=True)]
        for step in self.steps:
            rec = step.to_json()
            rec["record"] = "step"
            lines.append(json.dumps(rec, sort_keys=True))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_json_lines(cls, text: str) -> "Transcript":
        records = [json.loads(line) for line in text.splitlines() if line.strip()]
        header = records[0]
        if header.get("record") != "header":
            raise ValueError("transcript must start with a header record")
        return cls(
            instance=TaskInstance.from_json(header["instance"]),
            client_name=header["client"],
            mode=header["mode"],
            budget=header["budget"],
            steps=tuple(
                TranscriptStep.from_json(r) for r in records[1:]
                if r.get("record") == "step"
            ),
            status=header["status"],
            reason=header.get("reason"),
            elapsed_s=header.get("elapsed_s", 0.0),
        )


@dataclass(frozen=True)
class EpisodeResult:
    success: bool
    reason: Optional[str]
    steps_used: int
    optimal_length: Optional[int]
    transcript: Transcript


class EpisodeError(Exception):
    """Infrastructure failure (post-retry) — distinct from a task failure."""


@dataclass(frozen=True)
class EpisodeConfig:
    mode: PromptMode = PromptMode()
    budget_policy: str = "strict"  # strict (optimal) | relaxed (2x optimal)
    invalid_policy: str = "fail"  # fail | skip
    cell_px: int = 64
    max_transport_retries: int = 3

    def budget_for(self, instance: TaskInstance) -> int:
        optimal = instance.optimal_length
        if optimal is None:
            raise ValueError("instance has no witness; cannot derive budget")
        return optimal if self.budget_policy == "strict" else 2 * optimal


def run_episode(
    instance: TaskInstance,
    client: AgentClient,
    config: EpisodeConfig = EpisodeConfig(),
) -> EpisodeResult:
    """Play one full episode and record its transcript."""
    budget = config.budget_for(instance)
    state = initial_state(instance, budget=budget)
    render_cfg = RenderConfig(cell_px=config.cell_px)
    client.reset(instance)
    frames: list[Frame] = []
    steps: list[TranscriptStep] = []
    t0 = time.monotonic()

    while state.phase != "terminal":
        actions = generate_actions(state)
        perm_seed = derive_seed("options", instance.seed, state.step_index)
        options = present_options(
            actions, option_rng(instance.seed, state.step_index), perm_seed
        )
        frame_sha = None
        if client.needs_images:
            frame = render_frame(state, render_cfg)
            frames.append(frame)
            frame_sha = frame.sha256
        messages = build_prompt(instance, frames, options, config.mode)
        context = StepContext(instance=instance, state=state, options=options)

        raw = None
        for attempt in range(config.max_transport_retries):
            try:
                raw = client.respond(messages, context)
                break
            except ClientTransportError:
                if attempt == config.max_transport_retries - 1:
                    raise EpisodeError(
                        f"client failed after {config.max_transport_retries} attempts"
                    )

        idx = decode_answer(raw, options)
        if idx is None:
            decoded_letter = action_key = None
            if config.invalid_policy == "fail":
                state = replace(
                    state, phase="terminal", status="failure",
                    reason="invalid-response",
                    step_index=state.step_index + 1,
                )
            else:
                # consume the step without acting; the budget still counts it
                state = replace(state, step_index=state.step_index + 1)
                from .world import step_outcome

                out = step_outcome(state)
                if out.status != "ongoing":
                    state = replace(
                        state, phase="terminal",
                        status=out.status, reason=out.reason,
                    )
        else:
            decoded_letter, action = options.options[idx]
            action_key = action.key()
            state = apply_action(state, action)

        steps.append(TranscriptStep(
            step_index=len(steps),
            permutation_seed=perm_seed,
            options=tuple(
                (lt, a.key(), a.surface_text) for lt, a in options.options
            ),
            frame_sha256=frame_sha,
            raw_response=raw,
            decoded_letter=decoded_letter,
            action_key=action_key,
            status=state.status,
            reason=state.reason,
        ))

    transcript = Transcript(
        instance=instance,
        client_name=client.name,
        mode=config.mode.reasoning,
        budget=budget,
        steps=tuple(steps),
        status=state.status,
        reason=state.reason,
        elapsed_s=time.monotonic() - t0,
    )
    return EpisodeResult(
        success=state.status == "success",
        reason=state.reason,
        steps_used=len(steps),
        optimal_length=instance.optimal_length,
        transcript=transcript,
    )


class TranscriptReplayClient(AgentClient):
    """Feeds a stored transcript's raw responses back through the loop."""

    name = "replay"
    needs_images = False

    def __init__(self, transcript: Transcript):
        self._responses = [s.raw_response for s in transcript.steps]
        self._cursor = 0

    def reset(self, instance: TaskInstance) -> None:
        self._cursor = 0

    def respond(self, messages: MessageSequence, context: StepContext) -> str:
        if self._cursor >= len(self._responses):
            raise ClientTransportError("transcript exhausted")
        text = self._responses[self._cursor]
        self._cursor += 1
        return text


def replay_transcript(transcript: Transcript) -> EpisodeResult:
    """Re-run a stored transcript; the outcome must reproduce bit-exactly."""
    client = TranscriptReplayClient(transcript)
    config = EpisodeConfig(mode=PromptMode(
        transcript.mode if transcript.mode in REASONING_MODES else "zero-shot"
    ))
    return run_episode(transcript.instance, client, config)


# ---------------------------------------------------------------------------
# suites


@dataclass(frozen=True)
class SuiteConfig:
    kinds: tuple[str, ...] = TASK_KINDS
    levels: tuple[int, ...] = (1, 2, 3)
    rounds: int = 100
    suite_seed: int = 0
    episode: EpisodeConfig = field(default_factory=EpisodeConfig)


def run_suite(
    config: SuiteConfig,
    client: AgentClient,
    out_dir: Optional[Path] = None,
):
    """Run the full grid of (kind, level, round) episodes.

    Returns a SuccessTable; optionally persists per-episode transcripts.
    The instance set depends only on the suite seed, so two clients under
    one seed face byte-identical instances and option permutations.
    """
    from .procgen import episode_seed, sample_instance
    from .scoring import SuccessTable

    rates: dict[tuple[str, int], float] = {}
    for kind in config.kinds:
        for level in config.levels:
            successes = 0
            for rnd in range(config.rounds):
                seed = episode_seed(config.suite_seed, kind, level, rnd)
                inst = sample_instance(kind, level, seed)
                result = run_episode(inst, client, config.episode)
                successes += result.success
                if out_dir is not None:
                    path = Path(out_dir) / f"{kind}-L{level}-r{rnd}.jsonl"
                    path.parent.mkdir(parents=True, exist_ok=True)
                    path.write_text(result.transcript.to_json_lines())
            rates[(kind, level)] = successes / config.rounds
    return SuccessTable(rates=rates, provenance="measured")


# ---------------------------------------------------------------------------
# worked-example bundles for in-context learning


_REASON_BY_VERB = {
    "pick-up": "it moves a required item into the backpack",
    "put-into": "it delivers the held item to the required target",
    "place-at": "it fills the correct grid position",
    "obtain": "it collects something the goal requires",
    "unlock": "it opens the door blocking the path",
    "choose": "it selects the item the goal asks for",
    "declare-done": "exactly the required amount has been collected",
    "continue": "the rules and hints have been memorized",
}


@lru_cache(maxsize=None)
def icl_bundle(kind: str, cell_px: int = 64) -> tuple[str, tuple[Frame, ...]]:
    """A fully worked example episode for a task kind: text plus frames."""
    from .procgen import sample_instance

    inst = sample_instance(kind, 1, derive_seed("icl-example", kind))
    state = initial_state(inst, budget=len(inst.witness))
    render_cfg = RenderConfig(cell_px=cell_px)
    lines = [f"Example goal: {goal_text(inst)}"]
    frames = []
    for i, key in enumerate(inst.witness):
        actions = generate_actions(state)
        options = present_options(
            actions, option_rng(inst.seed, state.step_index)
        )
        frames.append(render_frame(state, render_cfg))
        letter = next(
            lt for lt, a in options.options if a.key() == key
        )
        action = options.action_for(letter)
        option_lines = " ".join(options.lines())
        verb = key.split("|", 1)[0]
        lines.append(
            f"Step {i + 1}: the options are: {option_lines} "
            f"The correct choice is {letter}) `{action.surface_text}' "
            f"because {_REASON_BY_VERB[verb]}."
        )
        state = apply_action(state, action)
    lines.append("The example task is now complete.")
    return "\n".join(lines), tuple(frames)
