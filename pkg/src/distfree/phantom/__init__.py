"""Synthetic phantoms and acquisition data."""

from distfree.phantom.blobs import Blob, Phantom, eval_phantom, rasterize
from distfree.phantom.data import calibrate_white_noise, generate_data, ground_truth_measurement

__all__ = [
    "Blob",
    "Phantom",
    "eval_phantom",
    "rasterize",
    "generate_data",
    "ground_truth_measurement",
    "calibrate_white_noise",
]
