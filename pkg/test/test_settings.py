import pytest

from rfcombiner.lib.exception import InvalidArgumentError
from rfcombiner.lib.settings import (
    DEFAULT_SETTINGS,
    load_config,
    merged_settings,
    normalize_key,
    option_set,
)


def test_normalize_key():
    assert normalize_key("--n-bs") == "n_bs"
    assert normalize_key(" Q_Realizations ") == "q_realizations"


def test_option_set():
    assert option_set({"width": None}, "width", DEFAULT_SETTINGS) == 80
    assert option_set({"width": 100}, "width", DEFAULT_SETTINGS) == 100
    assert option_set(None, "mode", DEFAULT_SETTINGS) == "paper-compat"


def test_merged_settings_copies():
    settings = merged_settings({"plots": False, "unknown": 1})
    assert settings["plots"] is False
    assert "unknown" not in settings
    settings["width"] = 10
    assert DEFAULT_SETTINGS["width"] == 80


def test_config_without_header(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("n-bs = 8\nsnr = 0:5:30\n# comment\nmethods = cgac,psoac\n")
    assert load_config(str(path)) == {"n_bs": "8", "snr": "0:5:30", "methods": "cgac,psoac"}


def test_config_sections(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("[global]\nmode = free\n\n[sweep]\nq_realizations = 10\n")
    assert load_config(str(path)) == {"mode": "free", "q_realizations": "10"}


@pytest.mark.parametrize("text", ["[plot]\nwidth = 3\n", "[sweep]\nnot a key value line\n"])
def test_bad_config(tmp_path, text):
    path = tmp_path / "run.cfg"
    path.write_text(text)
    with pytest.raises(InvalidArgumentError):
        load_config(str(path))


def test_missing_config(tmp_path):
    with pytest.raises(InvalidArgumentError):
        load_config(str(tmp_path / "nope.cfg"))
