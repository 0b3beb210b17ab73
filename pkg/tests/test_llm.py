import logging

import httpx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import DATA, EXPERIMENTS, LISTING_1
from semnav.asp import count_effective_lines
from semnav.errors import AuthError, EmptyExtraction, FixtureNotFound, LlmTimeoutError, ProviderError, TransportError
from semnav.harness import load_spec
from semnav.llm import (
    PromptBundle,
    ProviderConfig,
    TaskKind,
    build_prompt,
    complete,
    default_guidelines,
    extract_code,
    fixture_complete,
    fixture_path,
)
from semnav.roadworld import handbook_text

KEY_ENV = "SEMNAV_TEST_KEY"
SECRET = "sk-test-0123456789abcdef"
CONFIG = ProviderConfig("https://llm.invalid/v1/chat/completions", "test-model", KEY_ENV, timeout=5.0)


def bundle(task=TaskKind.CONSTRAINTS_ONLY, instruction="Turn left at the next junction, then go straight, and finally turn right."):
    return PromptBundle(handbook_text(), instruction, default_guidelines(), task)


# prompt


def test_prompt_contains_instruction_and_sections():
    prompt = build_prompt(bundle())
    assert "turn left at the next junction, then go straight, and finally turn right" in prompt.lower()
    assert handbook_text().strip() in prompt
    assert default_guidelines() in prompt
    assert prompt.rstrip().endswith("Emit only DLV code in one fenced block.")
    order = [prompt.index(h) for h in ("handbook", "guidelines", "instruction", "Task", "Output format")]
    assert order == sorted(order)


def test_detour_clause_only_for_rules_task():
    clause = "prepare a new program including new rules to handle the detour"
    assert clause in build_prompt(bundle(TaskKind.RULES_AND_CONSTRAINTS))
    assert clause not in build_prompt(bundle())


def test_prompt_is_deterministic():
    assert build_prompt(bundle()) == build_prompt(bundle())


@pytest.mark.parametrize("exp", ["ID1", "ID3"])
def test_prompt_golden(exp):
    expected = (DATA / "golden" / f"{exp}_prompt.txt").read_text(encoding="utf-8")
    assert build_prompt(load_spec(EXPERIMENTS / f"{exp}.spec").bundle()) == expected


def test_guideline_topics():
    g = default_guidelines()
    assert "Time" in g and "T1" in g
    assert "!=" in g and "inequality" in g
    assert "#count" in g


def test_empty_bundle_fields_rejected():
    with pytest.raises(ValueError):
        PromptBundle("", "x", "y")
    with pytest.raises(ValueError):
        PromptBundle("x", "  ", "y")


# live calls against a mock transport


def ok_response(text="```\n:- a.\n```"):
    return httpx.Response(200, json={"choices": [{"message": {"role": "assistant", "content": text}}]})


def client_for(handler):
    return httpx.Client(transport=httpx.MockTransport(handler))


@pytest.fixture
def key(monkeypatch):
    monkeypatch.setenv(KEY_ENV, SECRET)


def no_sleep(_):
    pass


def test_complete_happy_path(key):
    seen = []

    def handler(request):
        seen.append(request)
        return ok_response()

    resp = complete("hello", CONFIG, model_name="m", client=client_for(handler), sleep=no_sleep)
    assert resp.raw_text == "```\n:- a.\n```"
    assert resp.source == "live" and resp.model_name == "m"
    body = httpx.Request("POST", "x", content=seen[0].content).read()
    import json

    payload = json.loads(body)
    assert payload["model"] == "test-model"
    assert [m["role"] for m in payload["messages"]] == ["system", "user"]
    assert payload["messages"][1]["content"] == "hello"
    assert payload["temperature"] == 0.0
    assert seen[0].headers["authorization"] == f"Bearer {SECRET}"


def test_missing_key_fails_before_request(monkeypatch):
    monkeypatch.delenv(KEY_ENV, raising=False)
    calls = []
    with pytest.raises(AuthError):
        complete("hi", CONFIG, client=client_for(lambda r: calls.append(r) or ok_response()))
    assert calls == []


def test_transport_error_retried_twice(key):
    calls, sleeps = [], []

    def handler(request):
        calls.append(request)
        raise httpx.ConnectError("unreachable", request=request)

    with pytest.raises(TransportError):
        complete("hi", CONFIG, client=client_for(handler), sleep=sleeps.append)
    assert len(calls) == 3
    assert sleeps == [1.0, 2.0]


def test_transport_recovers_after_retry(key):
    calls = []

    def handler(request):
        calls.append(request)
        if len(calls) < 2:
            raise httpx.ConnectError("flaky", request=request)
        return ok_response("x.")

    assert complete("hi", CONFIG, client=client_for(handler), sleep=no_sleep).raw_text == "x."


def test_4xx_is_not_retried(key):
    calls = []

    def handler(request):
        calls.append(request)
        return httpx.Response(401, json={"error": "bad key"})

    with pytest.raises(AuthError):
        complete("hi", CONFIG, client=client_for(handler), sleep=no_sleep)
    assert len(calls) == 1


def test_5xx_raises_provider_error_after_retries(key):
    calls = []

    def handler(request):
        calls.append(request)
        return httpx.Response(503)

    with pytest.raises(ProviderError):
        complete("hi", CONFIG, client=client_for(handler), sleep=no_sleep)
    assert len(calls) == 3


def test_timeout(key):
    def handler(request):
        raise httpx.ReadTimeout("slow", request=request)

    with pytest.raises(LlmTimeoutError) as info:
        complete("hi", CONFIG, client=client_for(handler), sleep=no_sleep)
    assert isinstance(info.value, TimeoutError)


def test_malformed_body(key):
    with pytest.raises(ProviderError):
        complete("hi", CONFIG, client=client_for(lambda r: httpx.Response(200, json={"x": 1})), sleep=no_sleep)


def test_key_never_leaks(key, caplog):
    caplog.set_level(logging.DEBUG)
    handlers = [
        lambda r: httpx.Response(403),
        lambda r: httpx.Response(500),
    ]
    for h in handlers:
        with pytest.raises(Exception) as info:
            complete("hi", CONFIG, client=client_for(h), sleep=no_sleep)
        assert SECRET not in str(info.value)
    assert SECRET not in caplog.text
    assert SECRET not in repr(CONFIG)


# fixtures and extraction


def test_fixture_is_byte_exact(tmp_path):
    raw = "Sure!\r\n```\n:- a.\n```\n\u2713 done\n"
    path = fixture_path("IDX", "m", tmp_path)
    path.parent.mkdir()
    path.write_bytes(raw.encode("utf-8"))
    resp = fixture_complete("IDX", "m", tmp_path)
    assert resp.raw_text == raw
    assert resp.source == "fixture" and resp.path == path


def test_listing_fixture():
    resp = fixture_complete("ID1", "chatgpt4o", EXPERIMENTS / "fixtures")
    assert resp.raw_text == LISTING_1


def test_missing_fixture_names_path(tmp_path):
    with pytest.raises(FixtureNotFound) as info:
        fixture_complete("ID9", "nobody", tmp_path)
    assert str(tmp_path / "ID9" / "nobody.txt") in str(info.value)


def test_extract_fenced():
    text = "Here are the constraints:\n```\n:-#count{T : cross_left(T)}=0.\n```"
    assert extract_code(text) == ":-#count{T : cross_left(T)}=0."


def test_extract_concatenates_blocks():
    text = "a:\n```dlv\n:- a.\n```\nand b:\n```\n:- b.\n```\n"
    assert extract_code(text) == ":- a.\n:- b."


def test_extract_bare_listing():
    code = extract_code(LISTING_1)
    assert len(code.splitlines()) == 9
    assert count_effective_lines(code) == 9


def test_extract_refusal():
    with pytest.raises(EmptyExtraction):
        extract_code("I cannot help with that.")


@pytest.mark.parametrize("text", ["Sure.\nIt is done.", "here is the code."])
def test_extract_ignores_prose_lines(text):
    with pytest.raises(EmptyExtraction):
        extract_code(text)


_pieces = st.sampled_from(
    ["a.", ":- a, not b.", "p(1) v p(2).", "% note", "Some prose.", "```", "```dlv", "", "  x :- y.  ", "no dot"]
)


@given(st.lists(_pieces, max_size=12))
def test_extraction_idempotent(pieces):
    text = "\n".join(pieces)
    try:
        once = extract_code(text)
    except EmptyExtraction:
        return
    assert extract_code("```\n" + once + "\n```") == once
    if "```" not in text:
        assert extract_code(once) == once
