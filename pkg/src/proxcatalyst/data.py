"""Dataset parsing and seeded synthetic generators.

The text format is the usual sparse classification layout: one sample
per line, ``label idx:val idx:val ...`` with 1-based, strictly
increasing feature indices and ``#`` starting a comment.  Labels may be
-1/+1, 0/1, or 1/2; the latter two are remapped (smaller value to -1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .problems.quadratic import spectrum_quadratic


class LibsvmError(ValueError):
    pass


@dataclass
class Dataset:
    """Sparse row-major design matrix plus -1/+1 labels."""

    n_samples: int
    n_features: int
    labels: np.ndarray   # (n,) floats in {-1, +1}
    indptr: np.ndarray   # (n + 1,) int64 row offsets
    indices: np.ndarray  # 0-based feature ids, strictly increasing per row
    values: np.ndarray

    def row(self, i):
        lo, hi = self.indptr[i], self.indptr[i + 1]
        return self.indices[lo:hi], self.values[lo:hi]

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.n_samples, self.n_features))
        for i in range(self.n_samples):
            idx, val = self.row(i)
            out[i, idx] = val
        return out

    def equals(self, other: "Dataset") -> bool:
        return (self.n_samples == other.n_samples
                and self.n_features == other.n_features
                and np.array_equal(self.labels, other.labels)
                and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices)
                and np.array_equal(self.values, other.values))


def _normalize_labels(raw: np.ndarray) -> np.ndarray:
    distinct = set(float(v) for v in raw)
    if distinct <= {-1.0, 1.0}:
        return raw.copy()
    if distinct <= {0.0, 1.0}:
        return np.where(raw == 0.0, -1.0, 1.0)
    if distinct <= {1.0, 2.0}:
        return np.where(raw == 1.0, -1.0, 1.0)
    raise LibsvmError(
        "unsupported label set %s (expected -1/+1, 0/1, or 1/2)"
        % sorted(distinct))


def parse_libsvm(text: str, n_features: int | None = None) -> Dataset:
    """Parse sparse classification text; malformed lines raise
    LibsvmError naming the line number and offending token."""
    labels = []
    indptr = [0]
    indices: list[int] = []
    values: list[float] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        tokens = body.split()
        try:
            labels.append(float(tokens[0]))
        except ValueError:
            raise LibsvmError("line %d: bad label %r" % (lineno, tokens[0])) from None
        prev = 0
        for tok in tokens[1:]:
            idx_s, sep, val_s = tok.partition(":")
            if not sep:
                raise LibsvmError("line %d: expected idx:val, got %r" % (lineno, tok))
            try:
                idx = int(idx_s)
                val = float(val_s)
            except ValueError:
                raise LibsvmError("line %d: bad feature token %r" % (lineno, tok)) from None
            if idx < 1:
                raise LibsvmError("line %d: feature index %d is not 1-based" % (lineno, idx))
            if idx <= prev:
                raise LibsvmError(
                    "line %d: feature indices must be strictly increasing (%d after %d)"
                    % (lineno, idx, prev))
            prev = idx
            indices.append(idx - 1)
            values.append(val)
        indptr.append(len(indices))
    if not labels:
        raise LibsvmError("no samples found")
    max_feat = (max(indices) + 1) if indices else 0
    if n_features is None:
        n_features = max_feat
    elif n_features < max_feat:
        raise LibsvmError(
            "n_features=%d is smaller than max feature index %d" % (n_features, max_feat))
    return Dataset(
        n_samples=len(labels),
        n_features=int(n_features),
        labels=_normalize_labels(np.asarray(labels, dtype=float)),
        indptr=np.asarray(indptr, dtype=np.int64),
        indices=np.asarray(indices, dtype=np.int64),
        values=np.asarray(values, dtype=float),
    )


def serialize_libsvm(ds: Dataset) -> str:
    """Inverse of parse_libsvm up to label normalization; values are
    written with shortest round-trip precision."""
    lines = []
    for i in range(ds.n_samples):
        idx, val = ds.row(i)
        parts = ["%+d" % int(ds.labels[i])]
        parts.extend("%d:%s" % (j + 1, repr(float(v))) for j, v in zip(idx, val))
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def generate_patches(m: int, n: int, seed: int) -> np.ndarray:
    """n signal patches of dimension m: a few random low-frequency
    sinusoids plus mild noise, each column centered and l2-normalized.
    Deterministic in the seed."""
    rng = np.random.Generator(np.random.Philox(seed))
    t = np.arange(m) / m
    freqs = rng.uniform(0.5, 3.0, size=(n, 4))
    phases = rng.uniform(0.0, 2.0 * np.pi, size=(n, 4))
    amps = rng.standard_normal((n, 4))
    waves = amps[:, :, np.newaxis] * np.sin(
        2.0 * np.pi * freqs[:, :, np.newaxis] * t[np.newaxis, np.newaxis, :]
        + phases[:, :, np.newaxis])
    patches = waves.sum(axis=1).T + 0.05 * rng.standard_normal((n, m)).T
    patches -= patches.mean(axis=0)[np.newaxis, :]
    norms = np.linalg.norm(patches, axis=0)
    return patches / np.where(norms > 0, norms, 1.0)[np.newaxis, :]


# quadratic fixture generation lives next to the problem class
generate_quadratic = spectrum_quadratic
