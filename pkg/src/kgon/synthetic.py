"""Seeded synthetic contour generators.

Everything here is deterministic given its arguments, so test suites and
the bundled demo dataset are reproducible.  All generators return raw point
arrays (complex), ready for :func:`kgon.geometry.ingest`.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np


def _densify(corners: np.ndarray, n: int) -> np.ndarray:
    """Sample n arc-length-uniform points on the closed polygon ``corners``."""
    closed = np.concatenate([corners, corners[:1]])
    cum = np.concatenate([[0.0], np.cumsum(np.abs(np.diff(closed)))])
    s = cum[-1] * np.arange(n) / n
    return np.interp(s, cum, closed.real) + 1j * np.interp(s, cum, closed.imag)


def _sample_pieces(pieces, n: int) -> np.ndarray:
    """Sample n uniform arc positions from (length, point_fn) pieces."""
    lengths = np.array([p[0] for p in pieces])
    cum = np.concatenate([[0.0], np.cumsum(lengths)])
    s = cum[-1] * np.arange(n) / n
    out = np.empty(n, dtype=complex)
    idx = np.clip(np.searchsorted(cum, s, side="right") - 1, 0, len(pieces) - 1)
    for i, (length, fn) in enumerate(pieces):
        mask = idx == i
        if np.any(mask):
            out[mask] = fn((s[mask] - cum[i]) / length)
    return out


def circle(n: int, radius: float = 1.0, center: complex = 0j) -> np.ndarray:
    theta = 2 * np.pi * np.arange(n) / n
    return center + radius * np.exp(1j * theta)


def ellipse(n: int, a: float = 2.0, b: float = 1.0) -> np.ndarray:
    theta = 2 * np.pi * np.arange(n) / n
    return a * np.cos(theta) + 1j * b * np.sin(theta)


def square(n: int, side: float = 1.0) -> np.ndarray:
    """Unit-style square from (0,0), n points equally spaced along the rim.

    With n a multiple of 4 the corners are hit exactly.
    """
    corners = side * np.array([0, 1, 1 + 1j, 1j], dtype=complex)
    return _densify(corners, n)


def star(n: int, tips: int = 5, r_outer: float = 1.0, r_inner: float = 0.45) -> np.ndarray:
    angles = np.pi / 2 + 2 * np.pi * np.arange(2 * tips) / (2 * tips)
    radii = np.where(np.arange(2 * tips) % 2 == 0, r_outer, r_inner)
    return _densify(radii * np.exp(1j * angles), n)


def stadium(n: int, radius: float = 1.0, straight: float = 2.0) -> np.ndarray:
    """Two semicircular caps joined by straight segments, CCW from the right apex."""
    h = straight / 2
    r = radius
    pieces = [
        (r * np.pi / 2, lambda t: h + r * np.exp(1j * (np.pi / 2 * t))),
        (straight, lambda t: h - straight * t + 1j * r),
        (r * np.pi, lambda t: -h + r * np.exp(1j * (np.pi / 2 + np.pi * t))),
        (straight, lambda t: -h + straight * t - 1j * r),
        (r * np.pi / 2, lambda t: h + r * np.exp(1j * (-np.pi / 2 + np.pi / 2 * t))),
    ]
    return _sample_pieces(pieces, n)


def rounded_ngon(n: int, sides: int = 4, circumradius: float = 1.0,
                 corner_radius: float = 0.25) -> np.ndarray:
    """Regular polygon offset outward by ``corner_radius``: flats plus corner arcs."""
    verts = circumradius * np.exp(1j * (np.pi / 2 + 2 * np.pi * np.arange(sides) / sides))
    edges = np.roll(verts, -1) - verts
    normals = -1j * edges / np.abs(edges)  # outward for CCW
    sweep = 2 * np.pi / sides
    pieces = []
    for i in range(sides):
        v, nout, nin = verts[i], normals[i], normals[i - 1]
        phi0 = np.angle(nin)
        pieces.append((
            corner_radius * sweep,
            lambda t, v=v, phi0=phi0: v + corner_radius * np.exp(1j * (phi0 + sweep * t)),
        ))
        a = v + corner_radius * nout
        b = verts[(i + 1) % sides] + corner_radius * nout
        pieces.append((abs(b - a), lambda t, a=a, b=b: a + (b - a) * t))
    return _sample_pieces(pieces, n)


def hand_like(n: int, fingers: int = 4, finger_height: float = 0.55,
              finger_width: float = 0.085) -> np.ndarray:
    """Palm disc with Gaussian finger bumps spread over the upper half."""
    theta = 2 * np.pi * np.arange(n) / n
    centers = np.pi / 2 + (np.arange(fingers) - (fingers - 1) / 2) * 2.6 * finger_width * np.pi
    r = 0.9 * np.ones(n)
    for c in centers:
        d = np.angle(np.exp(1j * (theta - c)))
        r += finger_height * np.exp(-0.5 * (d / finger_width) ** 2)
    return r * np.exp(1j * theta)


def random_smooth(n: int, rng: np.random.Generator, harmonics: int = 6,
                  roughness: float = 0.45) -> np.ndarray:
    """Star-shaped blob with random low-order radial harmonics.

    ``roughness`` caps the summed harmonic amplitude, keeping the radius
    positive and the outline non-self-intersecting.
    """
    js = np.arange(1, harmonics + 1)
    a = rng.normal(size=harmonics) / js
    b = rng.normal(size=harmonics) / js
    total = np.sum(np.abs(a)) + np.sum(np.abs(b))
    scale = rng.uniform(0.4, 1.0) * roughness / total
    theta = 2 * np.pi * np.arange(n) / n
    r = 1.0 + scale * (np.cos(np.outer(theta, js)) @ a + np.sin(np.outer(theta, js)) @ b)
    return r * np.exp(1j * theta)


def jagged_blob(n: int, rng: np.random.Generator, noise: float = 0.0035) -> np.ndarray:
    """Rounded polygon with per-point radial digitization noise.

    The base shape has flat runs and curved corners; the noise rides on top
    at the sampling frequency, the regime a small moving-average window is
    meant to clean up.
    """
    sides = int(rng.integers(3, 7))
    base = rounded_ngon(
        n,
        sides=sides,
        circumradius=float(rng.uniform(0.85, 1.2)),
        corner_radius=float(rng.uniform(0.12, 0.28)),
    )
    center = base.mean()
    radial = base - center
    bumps = 1.0 + noise * rng.standard_normal(n)
    return center + radial * bumps


def demo_suite(n: int = 512) -> list[tuple[str, np.ndarray]]:
    """The bundled smoke-test shapes."""
    return [
        ("circle", circle(n)),
        ("ellipse", ellipse(n)),
        ("square", square(n - n % 4)),
        ("star", star(n)),
        ("stadium", stadium(n)),
        ("hand", hand_like(n)),
    ]


def _fish(n: int, rng: np.random.Generator, species: int) -> np.ndarray:
    elong = 1.6 + 0.25 * species
    tail = 0.25 + 0.05 * species
    theta = 2 * np.pi * np.arange(n) / n
    r = 1.0 + tail * np.cos(theta - np.pi) ** 3 + 0.06 * np.cos(2 * theta)
    r *= 1.0 + 0.05 * rng.standard_normal() / 3
    pts = r * np.exp(1j * theta)
    pts = elong * pts.real + 1j * pts.imag
    return pts * (1 + 0.04 * rng.uniform(-1, 1))


def _pear(n: int, rng: np.random.Generator) -> np.ndarray:
    theta = 2 * np.pi * np.arange(n) / n
    neck = rng.uniform(0.26, 0.36)
    r = 1.0 + neck * np.cos(theta) + 0.10 * np.cos(2 * theta)
    r += 0.02 * np.cos(3 * theta + rng.uniform(0, 2 * np.pi))
    return rng.uniform(0.9, 1.1) * r * np.exp(1j * theta)


def _dog(n: int, rng: np.random.Generator) -> np.ndarray:
    base = random_smooth(n, rng, harmonics=8, roughness=0.5)
    theta = 2 * np.pi * np.arange(n) / n
    snout = 0.25 * np.exp(-0.5 * ((np.angle(np.exp(1j * (theta - 0.4)))) / 0.15) ** 2)
    return base * (1 + snout)


def _hand_variant(n: int, rng: np.random.Generator, gesture: int) -> np.ndarray:
    pts = hand_like(
        n,
        fingers=2 + gesture,
        finger_height=0.45 + 0.05 * gesture,
        finger_width=0.075 + 0.008 * gesture,
    )
    return pts * (1 + 0.03 * rng.uniform(-1, 1))


def dataset_entries(seed: int = 0) -> list[tuple[str, str, np.ndarray]]:
    """238 labeled contours mirroring the demo corpus composition:

    10 dogs, six fish species of 20 each, four hand gestures of 5 each,
    and 88 pears.  Returns (contour_id, category, points) triples.
    """
    rng = np.random.default_rng(seed)
    entries = []
    for i in range(10):
        entries.append((f"dog_{i:02d}", "dog", _dog(420, rng)))
    for sp in range(1, 7):
        for i in range(20):
            entries.append((f"fish{sp}_{i:02d}", f"fish{sp}", _fish(360, rng, sp)))
    for g in range(1, 5):
        for i in range(5):
            entries.append((f"hand{g}_{i:02d}", f"hand{g}", _hand_variant(480, rng, g)))
    for i in range(88):
        entries.append((f"pear_{i:02d}", "pear", _pear(300, rng)))
    return entries


def write_dataset(out_dir: str | Path, seed: int = 0) -> Path:
    """Write the synthetic dataset and return the manifest path."""
    out = Path(out_dir)
    contour_dir = out / "contours"
    contour_dir.mkdir(parents=True, exist_ok=True)
    manifest = out / "manifest.csv"
    with open(manifest, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["contour_id", "path", "category"])
        for cid, category, pts in dataset_entries(seed):
            rel = Path("contours") / f"{cid}.txt"
            lines = [f"{float(z.real)!r},{float(z.imag)!r}" for z in pts]
            (out / rel).write_text("\n".join(lines) + "\n")
            writer.writerow([cid, str(rel), category])
    return manifest
