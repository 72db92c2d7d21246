class Error(Exception):
    pass


class InvalidArgumentError(Error):
    pass


class InvalidChannelError(Error):
    @classmethod
    def for_value(cls, channel):
        return cls(
            f"'{channel}' is not a valid channel! Valid channels are "
            "'vibe_tip', 'vibe_end' and 'motor'."
        )


class InvalidSpecError(Error):
    @classmethod
    def for_invariant(cls, spec_name: str, invariant: str, value):
        return cls(f"{spec_name} violates '{invariant}' (got {value!r})")


class InvalidTableError(Error):
    pass


class StepSizeError(Error):
    @classmethod
    def for_bound(cls, dt: float, bound: float):
        return cls(
            f"Step size {dt:g} s is outside (0, {bound:g}] s! The step must "
            "resolve the electrical and mechanical time constants of the motor."
        )


class SimulationDivergedError(Error):
    pass


class UnsupportedFirmwareVersionError(Error):
    pass
