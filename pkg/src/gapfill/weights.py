"""Per-atom weights for the weighted l1 norm.

Each scheme measures how much of an atom falls on reliable samples.  Since
modulation does not change ``|d_n|``, a weight depends only on the time
frame and is broadcast across channels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .frame import TightGaborFrame

SCHEMES = ("none", "supp", "abs", "norm", "energy")
WEIGHT_FLOOR = 1e-6


@dataclass(frozen=True, eq=False)
class WeightVector:
    values: np.ndarray  # shape (num_frames, channels)
    scheme: str

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)


def frame_weights(frame: TightGaborFrame, mask, scheme: str) -> np.ndarray:
    """One weight per time frame, before broadcasting and flooring."""
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != (frame.params.signal_length,):
        raise ValueError("mask length does not match the frame")
    if scheme not in SCHEMES:
        raise ValueError(f"unsupported weighting scheme {scheme!r}; "
                         "iterative weights come from the reweighting drivers")
    K = frame.params.num_frames
    if scheme == "none":
        return np.ones(K)
    g = np.abs(frame.window)
    reliable = mask[frame.frame_support]  # (K, w)
    if scheme == "supp":
        nz = g > 0
        return (reliable & nz).sum(axis=1) / nz.sum()
    if scheme == "abs":
        return (reliable * g).sum(axis=1) / g.sum()
    norm = np.sqrt((reliable * g**2).sum(axis=1) / np.sum(g**2))
    # squaring the norm weight (not reusing the ratio) keeps energy == norm**2 exact
    return norm if scheme == "norm" else norm * norm


def compute_weights(frame: TightGaborFrame, mask, scheme: str,
                    floor: float = WEIGHT_FLOOR) -> WeightVector:
    per_frame = np.maximum(frame_weights(frame, mask, scheme), floor)
    values = np.repeat(per_frame[:, None], frame.params.channels, axis=1)
    return WeightVector(values, scheme)
