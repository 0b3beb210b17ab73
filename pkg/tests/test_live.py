"""Opt-in smoke test against a real provider.

Runs only with SEMNAV_LIVE_TEST=1 and the credential variable set; the
endpoint and model default to the ID1 chatgpt4o provider entry.
"""

import os

import pytest

from conftest import EXPERIMENTS
from semnav.harness import load_spec
from semnav.llm import build_prompt, complete, extract_code

pytestmark = pytest.mark.live


@pytest.mark.skipif(os.environ.get("SEMNAV_LIVE_TEST") != "1", reason="live test not requested")
def test_live_completion_returns_code():
    spec = load_spec(EXPERIMENTS / "ID1.spec")
    config = spec.providers["chatgpt4o"]
    if not os.environ.get(config.api_key_env):
        pytest.skip(f"{config.api_key_env} not set")
    response = complete(build_prompt(spec.bundle()), config, model_name="chatgpt4o")
    assert response.source == "live"
    assert extract_code(response).strip()
