"""Binaural echoes to depth maps."""

from ._echo2depth import (
    EchoError,
    chirp,
    evaluate,
    locate_onset,
    read_split,
    simulate,
    spectrogram,
)

__all__ = [
    "EchoError",
    "chirp",
    "evaluate",
    "locate_onset",
    "read_split",
    "simulate",
    "spectrogram",
]
