import pytest
from click.testing import CliRunner

from hapticpen.cli import EXIT_NUMERICAL, EXIT_USAGE, main
from tests.hapticpen.fixtures import *
from tests.hapticpen.helpers import write_key_values


@pytest.fixture
def runner():
    return CliRunner()


class TestEffect:
    def test_movement(self, runner):
        result = runner.invoke(main, ["effect", "movement", "--d", "100", "--isoi", "50"])
        assert result.exit_code == 0
        assert result.output.splitlines()[0] == "t_ms,vibe_tip,vibe_end,motor"

    def test_rotation_to_file(self, runner, tmp_path):
        out = tmp_path / "rotation.csv"
        result = runner.invoke(
            main, ["effect", "rotation", "--shape", "dec", "--dir", "ccw", "--out", str(out)]
        )
        assert result.exit_code == 0
        lines = out.read_text().splitlines()
        assert lines[1] == "0.000000,0.000000,0.000000,-1.000000"

    def test_invalid_spec(self, runner):
        result = runner.invoke(main, ["effect", "movement", "--d", "0", "--isoi", "50"])
        assert result.exit_code == EXIT_USAGE
        assert "error:" in result.output

    @pytest.mark.parametrize("d", ["0.04", "0.01"])
    def test_sub_tick_duration(self, runner, d):
        result = runner.invoke(main, ["effect", "movement", "--d", d, "--isoi", "0"])
        assert result.exit_code == EXIT_USAGE
        assert "d >= tick" in result.output


class TestSim:
    def test_torque(self, runner, tmp_path):
        out = tmp_path / "torque.csv"
        result = runner.invoke(
            main,
            ["sim", "torque", "--on", "50", "--off", "50", "--count", "1",
             "--tail-ms", "0", "--out", str(out)],
        )
        assert result.exit_code == 0
        assert result.output.startswith("# peak_fwd=")
        lines = out.read_text().splitlines()
        assert lines[0] == "t_s,omega_rad_s,current_a,tau_casing_nm"
        assert lines[-1].startswith("# peak_fwd=")

    def test_step_out_of_bounds(self, runner):
        result = runner.invoke(main, ["sim", "torque", "--dt-us", "0"])
        assert result.exit_code == EXIT_USAGE

    def test_params_file(self, runner, motor_params_file):
        result = runner.invoke(
            main,
            ["sim", "torque", "--count", "1", "--on", "10", "--off", "0",
             "--tail-ms", "1", "--params", str(motor_params_file)],
        )
        assert result.exit_code == 0

    def test_divergence(self, runner, tmp_path):
        params = write_key_values(tmp_path / "motor.conf", {"v_supply": "1e308"})
        result = runner.invoke(
            main,
            ["sim", "torque", "--count", "1", "--on", "20", "--tail-ms", "0",
             "--params", str(params)],
        )
        assert result.exit_code == EXIT_NUMERICAL

    def test_erm(self, runner):
        result = runner.invoke(
            main,
            ["sim", "erm", "--d", "20", "--isoi", "10", "--channel", "end", "--tail-ms", "0"],
        )
        assert result.exit_code == 0
        assert result.output.splitlines()[0] == "t_s,omega_rad_s,force_n"


class TestProto:
    @pytest.mark.parametrize(
        "command,expected", [("ping", "A5 01 01 12"), ("stop", "A5 01 2F D8")]
    )
    def test_encode(self, runner, command, expected):
        result = runner.invoke(main, ["proto", "encode", command])
        assert result.exit_code == 0
        assert result.output == expected + "\n"

    def test_encode_rotation_round_trip(self, runner):
        encoded = runner.invoke(main, ["proto", "encode", "rotation", "--shape", "inc"]).output
        result = runner.invoke(main, ["proto", "decode", "--hex", encoded.strip()])
        assert result.output == "ROTATION dir=0 on_ms=200 off_ms=200 shape=1 count=3 amp=255\n"

    def test_encode_invalid_vibe(self, runner):
        result = runner.invoke(main, ["proto", "encode", "vibe", "--duration", "0"])
        assert result.exit_code == EXIT_USAGE

    def test_decode_diagnostics(self, runner):
        result = runner.invoke(main, ["proto", "decode", "--hex", "FF A5"])
        assert result.exit_code == 0
        assert result.output == "# resync at 0: discarding bytes while searching for sync\n"

    def test_decode_malformed_hex(self, runner):
        result = runner.invoke(main, ["proto", "decode", "--hex", "A5 0"])
        assert result.exit_code == EXIT_USAGE


class TestExp:
    def test_unknown_experiment(self, runner, tmp_path):
        result = runner.invoke(main, ["exp", "run", "9", "--out", str(tmp_path)])
        assert result.exit_code == EXIT_USAGE
        assert "Unknown experiment '9'" in result.output

    def test_experiment3(self, runner, tmp_path):
        result = runner.invoke(
            main, ["exp", "run", "3", "--participants", "2", "--out", str(tmp_path)]
        )
        assert result.exit_code == 0
        assert "experiment3:" in result.output
        assert "waveform: F(2,2)=" in result.output
        assert (tmp_path / "experiment3_cells.csv").exists()
        assert (tmp_path / "experiment3_summary.csv").exists()

    @pytest.mark.parametrize("experiment", ["1", "2", "3", "tops"])
    def test_same_seed_writes_identical_files(self, runner, tmp_path, experiment):
        outputs = []
        for run in ("first", "second"):
            out = tmp_path / run
            result = runner.invoke(
                main,
                ["exp", "run", experiment, "--participants", "2", "--seed", "11",
                 "--out", str(out)],
            )
            assert result.exit_code == 0
            outputs.append({p.name: p.read_bytes() for p in sorted(out.glob("*.csv"))})
        assert outputs[0]
        assert outputs[0] == outputs[1]

    def test_tops_condition_runs_its_contrasts(self, runner, tmp_path):
        args = ["exp", "run", "tops", "--condition", "oh", "--participants", "4",
                "--seed", "1", "--out", str(tmp_path)]
        result = runner.invoke(main, args)
        assert result.exit_code == 0
        assert "I NVH vs OH direction: F(1,3)=" in result.output
        assert "I NVH vs OH box: F(1,3)=" in result.output
        assert "II " not in result.output
        assert runner.invoke(main, args).output == result.output

    def test_seed_from_environment(self, runner, tmp_path):
        args = ["exp", "run", "tops", "--condition", "NVH", "--participants", "3",
                "--out", str(tmp_path)]
        from_env = runner.invoke(main, args, env={"HAPTI_SEED": "5"})
        from_flag = runner.invoke(main, args + ["--seed", "5"], env={"HAPTI_SEED": None})
        assert from_env.exit_code == 0
        assert from_env.output == from_flag.output

    def test_config_file(self, runner, tmp_path):
        config = write_key_values(tmp_path / "harness.conf", {"participants": "3"})
        result = runner.invoke(
            main,
            ["exp", "run", "tops", "--condition", "OV", "--config", str(config),
             "--out", str(tmp_path)],
        )
        assert result.exit_code == 0
        cells = (tmp_path / "tops_OV_cells.csv").read_text().splitlines()
        assert len(cells) == 1 + 3

    def test_bad_config_key(self, runner, tmp_path):
        config = write_key_values(tmp_path / "harness.conf", {"colour": "red"})
        result = runner.invoke(main, ["exp", "run", "1", "--config", str(config)])
        assert result.exit_code == EXIT_USAGE

    def test_unknown_condition(self, runner, tmp_path):
        result = runner.invoke(
            main, ["exp", "run", "tops", "--condition", "XY", "--out", str(tmp_path)]
        )
        assert result.exit_code == EXIT_USAGE
