"""Exception types shared across the package."""


class ShipwakeError(Exception):
    """Base class for all package-specific failures."""


class EmptySequenceError(ShipwakeError):
    """An input directory or stream yielded no decodable frames."""


class DimensionMismatchError(ShipwakeError):
    """A frame's dimensions differ from the rest of its sequence."""


class DecodeError(ShipwakeError):
    """A frame or record file exists but cannot be parsed."""


class WrongFrameCountError(ShipwakeError):
    """Model initialization received the wrong number of warm-up frames."""


class SceneSpecError(ShipwakeError):
    """A synthetic scene description violates its invariants."""


class FrameRangeMismatchError(ShipwakeError):
    """Detections reference a frame absent from the ground truth."""


class ZeroSPError(ShipwakeError):
    """The VF metric is undefined when no evaluated frame contains a ship."""


class ConfigError(ShipwakeError):
    """Unknown, malformed, or inconsistent configuration."""
