"""Command-line front end: ``hapticpen effect|sim|proto|exp``.

Exit codes are 0 on success, 2 for usage and validation errors and 3 for
numerical failures.
"""
import functools
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

import click

from hapticpen import configuration, exceptions
from hapticpen.effects import movement, rotation
from hapticpen.effects.export import write_timeline_csv
from hapticpen.effects.timeline import Channel, WaveformShape
from hapticpen.harness import experiments, tops
from hapticpen.harness.participants import make_panel
from hapticpen.harness.results import ExperimentResult
from hapticpen.options import HarnessOptions
from hapticpen.protocol import device
from hapticpen.protocol.codec import decode_stream, encode_frame
from hapticpen.protocol.exceptions import ProtocolError
from hapticpen.protocol.frames import Frame
from hapticpen.sim.erm import ErmParams, simulate_erm
from hapticpen.sim.metrics import asymmetry_metrics
from hapticpen.sim.motor import DcMotorParams, OffMode, simulate_motor

logger = logging.getLogger(__name__)

EXIT_USAGE = 2
EXIT_NUMERICAL = 3
_VIBE_CHANNELS = {"tip": Channel.VIBE_TIP, "end": Channel.VIBE_END}


def _fail(error: Exception, code: int):
    click.echo(f"error: {error}", err=True)
    raise click.exceptions.Exit(code)


def _reporting_errors(func):
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except exceptions.SimulationDivergedError as e:
            _fail(e, EXIT_NUMERICAL)
        except (exceptions.Error, ProtocolError) as e:
            _fail(e, EXIT_USAGE)

    return wrapper


def _movement_options(func):
    options = [
        click.option("--d", "d_ms", type=float, required=True, help="Stimulus duration in ms."),
        click.option("--isoi", "isoi_ms", type=float, required=True, help="Onset delay in ms."),
        click.option(
            "--dir",
            "direction",
            type=click.Choice([d.value for d in movement.MovementDirection]),
            default=movement.MovementDirection.TIP_TO_END.value,
            show_default=True,
        ),
        click.option("--amplitude", type=float, default=1.0, show_default=True),
        click.option("--repetitions", type=int, default=1, show_default=True),
        click.option("--gap", "gap_ms", type=float, default=500.0, show_default=True),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _rotation_options(func):
    options = [
        click.option("--on", "on_ms", type=float, default=200.0, show_default=True),
        click.option("--off", "off_ms", type=float, default=200.0, show_default=True),
        click.option(
            "--shape",
            type=click.Choice([s.value for s in WaveformShape]),
            default=WaveformShape.SQUARE.value,
            show_default=True,
        ),
        click.option(
            "--dir",
            "direction",
            type=click.Choice([d.value for d in rotation.RotationDirection]),
            default=rotation.RotationDirection.CW.value,
            show_default=True,
        ),
        click.option("--count", type=int, default=3, show_default=True),
        click.option("--amplitude", type=float, default=1.0, show_default=True),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _movement_spec(d_ms, isoi_ms, direction, amplitude, repetitions, gap_ms):
    return movement.MovementSpec(
        movement.MovementDirection(direction), d_ms, isoi_ms, amplitude, repetitions, gap_ms
    )


def _rotation_spec(on_ms, off_ms, shape, direction, count, amplitude):
    return rotation.RotationSpec(
        rotation.RotationDirection(direction),
        on_ms,
        off_ms,
        WaveformShape(shape),
        count,
        amplitude,
    )


def _emit(text: str, out: Optional[Path]):
    if out is None:
        click.echo(text, nl=False)
    else:
        out.write_text(text)


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log at DEBUG level to stderr.")
def main(verbose):
    """Haptic stylus toolkit: effects, motor simulation, protocol and
    simulated perception experiments."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )


@main.group()
def effect():
    """Synthesize an effect and print its timeline CSV."""


@effect.command("movement")
@_movement_options
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None)
@_reporting_errors
def effect_movement(out, **effect_args):
    timeline = movement.schedule_movement(_movement_spec(**effect_args))
    _emit(write_timeline_csv(timeline), out)


@effect.command("rotation")
@_rotation_options
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None)
@_reporting_errors
def effect_rotation(out, **effect_args):
    timeline = rotation.schedule_rotation(_rotation_spec(**effect_args))
    _emit(write_timeline_csv(timeline), out)


@main.group()
def sim():
    """Simulate the motor or an ERM and print the profile CSV."""


def _sim_options(func):
    options = [
        click.option(
            "--params",
            type=click.Path(dir_okay=False, path_type=Path),
            default=None,
            help="key = value file with motor constants in SI units.",
        ),
        click.option("--dt-us", type=float, default=10.0, show_default=True),
        click.option(
            "--tail-ms",
            type=float,
            default=None,
            help="Time simulated after the effect. Default: until the rotor rests.",
        ),
        click.option(
            "--off-mode", type=click.Choice([m.value for m in OffMode]), default=None
        ),
        click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None),
    ]
    for option in reversed(options):
        func = option(func)
    return func


@sim.command("torque")
@_rotation_options
@_sim_options
@_reporting_errors
def sim_torque(params, dt_us, tail_ms, off_mode, out, **effect_args):
    spec = _rotation_spec(**effect_args)
    motor = DcMotorParams() if params is None else DcMotorParams.from_file(params)
    if off_mode is not None:
        motor = motor.with_values(off_mode=OffMode(off_mode))
    profile = simulate_motor(motor, rotation.schedule_rotation(spec), dt_us * 1e-6, tail_ms)
    metrics = asymmetry_metrics(profile, rotation.intended_sign(spec.direction))
    _emit(profile.to_csv() + metrics.comment_line() + "\n", out)
    if out is not None:
        click.echo(metrics.comment_line())


@sim.command("erm")
@_movement_options
@click.option("--channel", type=click.Choice(sorted(_VIBE_CHANNELS)), default="tip")
@_sim_options
@_reporting_errors
def sim_erm(channel, params, dt_us, tail_ms, off_mode, out, **effect_args):
    erm = ErmParams() if params is None else ErmParams.from_file(params)
    if off_mode is not None:
        erm = erm.with_values(motor=erm.motor.with_values(off_mode=OffMode(off_mode)))
    timeline = movement.schedule_movement(_movement_spec(**effect_args))
    profile = simulate_erm(erm, timeline, _VIBE_CHANNELS[channel], dt_us * 1e-6, tail_ms)
    _emit(profile.to_csv(), out)


@main.group()
def proto():
    """Encode and decode stylus protocol frames."""


def _hex(data: bytes) -> str:
    return " ".join(f"{b:02X}" for b in data)


@proto.group()
def encode():
    """Print the encoded frame as space-separated hex."""


def _print_frame(frame: Frame):
    click.echo(_hex(encode_frame(frame)))


@encode.command("ping")
@_reporting_errors
def encode_ping():
    _print_frame(Frame.ping())


@encode.command("stop")
@_reporting_errors
def encode_stop():
    _print_frame(Frame.stop())


@encode.command("status")
@_reporting_errors
def encode_status():
    _print_frame(Frame.status())


@encode.command("movement")
@_movement_options
@_reporting_errors
def encode_movement(**effect_args):
    _print_frame(device.frame_for_movement(_movement_spec(**effect_args)))


@encode.command("rotation")
@_rotation_options
@_reporting_errors
def encode_rotation(**effect_args):
    _print_frame(device.frame_for_rotation(_rotation_spec(**effect_args)))


@encode.command("vibe")
@click.option("--channel", type=click.Choice(sorted(_VIBE_CHANNELS)), default="tip")
@click.option("--amplitude", type=float, default=1.0, show_default=True)
@click.option("--duration", "duration_ms", type=float, required=True, help="ms")
@_reporting_errors
def encode_vibe(channel, amplitude, duration_ms):
    _print_frame(device.frame_for_vibe(_VIBE_CHANNELS[channel], amplitude, duration_ms))


@proto.command("decode")
@click.option("--hex", "hex_text", required=True, help='Bytes like "A5 01 01 12".')
@_reporting_errors
def decode(hex_text):
    """Print one decoded frame per line, diagnostics as # comments."""
    try:
        data = bytes.fromhex("".join(hex_text.split()))
    except ValueError:
        raise exceptions.InvalidArgumentError(f"Malformed hex string: '{hex_text}'") from None
    result = decode_stream(data)
    for frame in result.frames:
        click.echo(frame.describe())
    for diagnostic in result.diagnostics:
        click.echo(f"# {diagnostic.kind.value} at {diagnostic.offset}: {diagnostic.message}")


@main.group()
def exp():
    """Run the perception experiments with simulated participants."""


def _load_options(config: Optional[Path], participants, seed) -> HarnessOptions:
    values: Dict[str, str] = {"seed": str(configuration.get_default_seed())}
    if config is not None:
        values.update(configuration.read_key_values(config))
    return HarnessOptions(values).with_values(participants=participants, seed=seed)


def _report(result: ExperimentResult, out: Path):
    result.write_csv(out)
    click.echo(f"{result.name}:")
    click.echo(result.summary_text())


def _run_tops(condition: Optional[str], panel, options: HarnessOptions, out: Path):
    table = _rotation_table(options)
    if condition is None:
        contrasts = list(tops.GAME_EXPERIMENTS)
        conditions = list(tops.Condition)
    else:
        chosen = tops.Condition.parse(condition)
        contrasts = [name for name, pair in tops.GAME_EXPERIMENTS.items() if chosen in pair]
        conditions = [chosen] + [
            c
            for name in contrasts
            for c in tops.GAME_EXPERIMENTS[name]
            if c is not chosen
        ]
    results: Dict[tops.Condition, ExperimentResult] = {}
    for c in conditions:
        if c not in results:
            results[c] = tops.run_spinning_tops(c, panel, table, options)
            _report(results[c], out)
    for name in contrasts:
        first, second = tops.GAME_EXPERIMENTS[name]
        measures: List[str] = ["direction"]
        if first.scores_box and second.scores_box:
            measures.append("box")
        for measure in measures:
            anova = tops.compare_conditions(results[first], results[second], measure)
            click.echo(f"{name} {first.value} vs {second.value} {measure}: {anova}")


def _rotation_table(options: HarnessOptions) -> rotation.RotationPerceptTable:
    path = options["rotation_table"]
    if path is None:
        return rotation.default_rotation_table()
    return rotation.RotationPerceptTable.from_csv(path)


def _movement_table(options: HarnessOptions) -> movement.PerceptRegionTable:
    path = options["movement_table"]
    if path is None:
        return movement.default_percept_table()
    return movement.PerceptRegionTable.from_csv(path)


@exp.command("run")
@click.argument("experiment")
@click.option("--condition", default=None, help="Game condition for 'tops'. Default: all.")
@click.option("--participants", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option(
    "--out",
    type=click.Path(file_okay=False, path_type=Path),
    default=Path("results"),
    show_default=True,
)
@click.option(
    "--config",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="key = value harness config. Default: $HAPTI_CONFIG.",
)
@_reporting_errors
def exp_run(experiment, condition, participants, seed, out, config):
    """Run EXPERIMENT: 1, 2, 3 or tops."""
    config = config if config is not None else configuration.get_config_path()
    options = _load_options(config, participants, seed)
    panel = make_panel(options["participants"], options["seed"], options["sigma_subj"])
    repetitions = options["repetitions"]
    if experiment == "1":
        result = experiments.run_experiment1(panel, _movement_table(options), repetitions)
        _report(result, out)
        click.echo("dominant labels:")
        for (d_ms, isoi_ms), label in experiments.dominant_labels(result).items():
            click.echo(f"d_ms={d_ms:g} isoi_ms={isoi_ms:g} {label}")
    elif experiment == "2":
        _report(experiments.run_experiment2(panel, _rotation_table(options), repetitions), out)
    elif experiment == "3":
        result = experiments.run_experiment3(panel, _rotation_table(options), repetitions)
        _report(result, out)
        click.echo(f"waveform: {experiments.waveform_anova(result)}")
    elif experiment == "tops":
        _run_tops(condition, panel, options, out)
    else:
        raise exceptions.InvalidArgumentError(
            f"Unknown experiment '{experiment}'! Valid experiments are 1, 2, 3 and tops."
        )


if __name__ == "__main__":
    sys.exit(main())
