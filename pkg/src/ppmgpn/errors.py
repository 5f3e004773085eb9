"""Exception hierarchy.  Every error the CLI reports derives from PpmgpnError."""


class PpmgpnError(Exception):
    """Base class for all toolkit errors."""


class FeatureTableError(PpmgpnError, ValueError):
    pass


class SegmentationError(PpmgpnError, ValueError):
    def __init__(self, text: str, offset: int, char: str):
        self.text = text
        self.offset = offset
        self.char = char
        super().__init__(
            f"cannot segment {text!r}: no table entry matches {char!r} at byte offset {offset}"
        )


class VocabularyError(PpmgpnError, ValueError):
    pass


class CorpusError(PpmgpnError, ValueError):
    pass


class NoiseModelError(PpmgpnError, ValueError):
    pass


class ExternalCommandError(PpmgpnError, RuntimeError):
    pass


class ConfigError(PpmgpnError, ValueError):
    pass


class RecognizerError(PpmgpnError, RuntimeError):
    pass
