"""Exception hierarchy shared by every stage of the pipeline."""


class LabError(Exception):
    """Base class for recoverable data and configuration errors."""


class CorpusError(LabError):
    """Raised when a corpus cannot be read or contains reserved text."""


class UnknownCharacterError(LabError):
    """A word contains a character outside the tokenizer's alphabet."""

    def __init__(self, word, char, line=None):
        self.word = word
        self.char = char
        self.line = line
        where = f" on line {line + 1}" if line is not None else ""
        super().__init__(f"character {char!r} of word {word!r}{where} is not in the alphabet")


class HyperparameterError(LabError):
    """Variant or metric parameters violate their admissible range."""


class ModelFormatError(LabError):
    """A model file is malformed or has an unsupported version."""
