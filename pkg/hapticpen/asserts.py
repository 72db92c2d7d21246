from hapticpen.effects.timeline import ActuationTimeline


def assert_timeline(timeline):
    if not isinstance(timeline, ActuationTimeline):
        raise TypeError("Timeline must be an instance of ActuationTimeline class!")


def assert_uniform_source(rng):
    if not callable(getattr(rng, "random", None)):
        raise TypeError(
            "Random state must provide a random() method returning a float in "
            "[0, 1), e.g. numpy.random.Generator!"
        )


def assert_sign(sign):
    if sign not in (1, -1):
        raise TypeError(f"Sign must be +1 or -1, got {sign!r}!")
