from pathlib import Path

import pytest

from hapticpen import configuration, exceptions
from tests.hapticpen.helpers import write_key_values


class TestGetConfigPath:
    def test_unset(self, monkeypatch):
        monkeypatch.delenv("HAPTI_CONFIG", raising=False)
        assert configuration.get_config_path() is None

    def test_from_environment(self, monkeypatch):
        monkeypatch.setenv("HAPTI_CONFIG", "/etc/hapticpen.conf")
        assert configuration.get_config_path() == Path("/etc/hapticpen.conf")


class TestGetDefaultSeed:
    def test_unset(self, monkeypatch):
        monkeypatch.delenv("HAPTI_SEED", raising=False)
        assert configuration.get_default_seed() == 0

    def test_from_environment(self, monkeypatch):
        monkeypatch.setenv("HAPTI_SEED", "42")
        assert configuration.get_default_seed() == 42

    def test_not_an_integer(self, monkeypatch):
        monkeypatch.setenv("HAPTI_SEED", "forty-two")
        pytest.raises(exceptions.InvalidArgumentError, configuration.get_default_seed)


class TestParseKeyValues:
    def test_comments_and_blank_lines(self):
        text = "# motor\n\nR = 10  # ohm\noff_mode=coast\n"
        assert configuration.parse_key_values(text) == {"R": "10", "off_mode": "coast"}

    @pytest.mark.parametrize("text", ["R 10", "R =", "= 10"])
    def test_malformed_line(self, text):
        with pytest.raises(exceptions.InvalidArgumentError) as excinfo:
            configuration.parse_key_values(text, "motor.conf")
        assert "motor.conf:1" in str(excinfo.value)

    def test_duplicate_key(self):
        with pytest.raises(exceptions.InvalidArgumentError) as excinfo:
            configuration.parse_key_values("R = 1\nR = 2\n")
        assert "duplicate key 'R'" in str(excinfo.value)


class TestReadKeyValues:
    def test_reads_file(self, tmp_path):
        path = write_key_values(tmp_path / "harness.conf", {"seed": "7", "p_vis": "0.8"})
        assert configuration.read_key_values(path) == {"seed": "7", "p_vis": "0.8"}

    def test_missing_file(self, tmp_path):
        with pytest.raises(exceptions.InvalidArgumentError):
            configuration.read_key_values(tmp_path / "missing.conf")
