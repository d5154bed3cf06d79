"""Sparse binary-classification datasets in SVMlight format.

Examples are stored row-wise in a CSR matrix; weights are dense numpy
vectors.  A :class:`Dataset` is immutable once built.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp


class DataFormatError(ValueError):
    """Raised for malformed SVMlight input."""

    def __init__(self, lineno, msg):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


@dataclass(frozen=True)
class SparseVector:
    """A sparse feature vector with strictly increasing 0-based indices."""

    indices: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        val = np.asarray(self.values, dtype=np.float64)
        if idx.shape != val.shape or idx.ndim != 1:
            raise ValueError("indices and values must be 1-d and of equal length")
        if idx.size and (idx[0] < 0 or np.any(np.diff(idx) <= 0)):
            raise ValueError("indices must be non-negative and strictly increasing")
        if not np.all(np.isfinite(val)):
            raise ValueError("values must be finite")
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "values", val)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, float]]) -> "SparseVector":
        pairs = list(pairs)
        return cls(np.array([i for i, _ in pairs], dtype=np.int64),
                   np.array([v for _, v in pairs], dtype=np.float64))

    @property
    def entries(self):
        return list(zip(self.indices.tolist(), self.values.tolist()))

    def norm(self):
        return float(np.linalg.norm(self.values))

    def __len__(self):
        return self.indices.size


@dataclass(frozen=True, eq=False)
class Dataset:
    """Feature matrix ``X`` (n x p, CSR) with labels in {+1, -1}."""

    X: sp.csr_matrix
    y: np.ndarray
    pos_idx: np.ndarray = field(init=False)
    neg_idx: np.ndarray = field(init=False)

    def __post_init__(self):
        X = sp.csr_matrix(self.X, dtype=np.float64)
        X.sort_indices()
        y = np.asarray(self.y)
        if y.ndim != 1 or y.shape[0] != X.shape[0]:
            raise ValueError("need one label per example")
        if not np.all((y == 1) | (y == -1)):
            raise ValueError("labels must be +1 or -1")
        if not np.all(np.isfinite(X.data)):
            raise ValueError("feature values must be finite")
        y = y.astype(np.int8)
        y.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        pos = np.flatnonzero(y == 1)
        neg = np.flatnonzero(y == -1)
        pos.setflags(write=False)
        neg.setflags(write=False)
        object.__setattr__(self, "pos_idx", pos)
        object.__setattr__(self, "neg_idx", neg)

    @classmethod
    def from_examples(cls, examples: Sequence[SparseVector], labels, n_features=None):
        """Build from a list of :class:`SparseVector` and a label sequence."""
        indptr = [0]
        indices = []
        values = []
        for x in examples:
            indices.append(x.indices)
            values.append(x.values)
            indptr.append(indptr[-1] + len(x))
        idx = np.concatenate(indices) if indices else np.zeros(0, dtype=np.int64)
        val = np.concatenate(values) if values else np.zeros(0)
        implied = int(idx.max()) + 1 if idx.size else 0
        if n_features is None:
            n_features = implied
        elif n_features < implied:
            raise ValueError(f"feature index {implied - 1} exceeds n_features={n_features}")
        X = sp.csr_matrix((val, idx, np.asarray(indptr)), shape=(len(examples), n_features))
        return cls(X, np.asarray(labels))

    @classmethod
    def from_dense(cls, X, y):
        return cls(sp.csr_matrix(np.asarray(X, dtype=np.float64)), np.asarray(y))

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def p(self):
        return self.X.shape[1]

    @property
    def n_plus(self):
        return self.pos_idx.size

    @property
    def n_minus(self):
        return self.neg_idx.size

    @property
    def m(self):
        """Number of positive/negative pairs."""
        return self.n_plus * self.n_minus

    @property
    def examples(self):
        X = self.X
        return [SparseVector(X.indices[X.indptr[i]:X.indptr[i + 1]],
                             X.data[X.indptr[i]:X.indptr[i + 1]])
                for i in range(self.n)]

    def check_both_classes(self):
        if self.n_plus < 1 or self.n_minus < 1:
            raise ValueError("dataset needs at least one positive and one negative example")

    def with_features(self, p):
        """Return a copy with ``p`` columns; columns at index >= p are dropped."""
        X = self.X
        if p >= X.shape[1]:
            X = sp.csr_matrix((X.data, X.indices, X.indptr), shape=(X.shape[0], p))
        else:
            X = X[:, :p]
        return Dataset(X, self.y)


def _parse_label(tok, lineno):
    if tok in ("+1", "1"):
        return 1
    if tok == "-1":
        return -1
    raise DataFormatError(lineno, f"bad label {tok!r}; expected +1 or -1")


def parse_svmlight(text, n_features=None) -> Dataset:
    """Parse SVMlight/LibSVM text (bytes or str) into a :class:`Dataset`.

    Indices in the file are 1-based.  Lines starting with ``#`` and blank
    lines are skipped; anything after a ``#`` on a data line is a comment.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    labels = []
    indptr = [0]
    indices = []
    values = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        labels.append(_parse_label(toks[0], lineno))
        last = -1
        for tok in toks[1:]:
            key, sep, sval = tok.partition(":")
            if not sep or key == "qid":
                raise DataFormatError(lineno, f"bad feature token {tok!r}")
            try:
                idx = int(key)
                val = float(sval)
            except ValueError:
                raise DataFormatError(lineno, f"bad feature token {tok!r}") from None
            if idx < 1:
                raise DataFormatError(lineno, f"feature index {idx} must be >= 1")
            if idx - 1 <= last:
                raise DataFormatError(lineno, "feature indices must be strictly increasing")
            if not math.isfinite(val):
                raise DataFormatError(lineno, f"non-finite value {sval!r}")
            last = idx - 1
            if val != 0.0:
                indices.append(last)
                values.append(val)
        indptr.append(len(indices))
    implied = max(indices) + 1 if indices else 0
    if n_features is None:
        n_features = implied
    X = sp.csr_matrix((np.array(values, dtype=np.float64),
                       np.array(indices, dtype=np.int64),
                       np.array(indptr, dtype=np.int64)),
                      shape=(len(labels), max(n_features, implied)))
    d = Dataset(X, np.array(labels, dtype=np.int8))
    if n_features < implied:
        d = d.with_features(n_features)
    return d


def load_svmlight(path, n_features=None) -> Dataset:
    with open(path, "rb") as f:
        return parse_svmlight(f.read(), n_features=n_features)


def dump_svmlight(d: Dataset) -> str:
    """Serialize with 17 significant digits so that parsing round-trips exactly."""
    X = d.X
    lines = []
    for i in range(d.n):
        lo, hi = X.indptr[i], X.indptr[i + 1]
        feats = " ".join(f"{j + 1}:{v:.17g}" for j, v in zip(X.indices[lo:hi], X.data[lo:hi]))
        label = "+1" if d.y[i] == 1 else "-1"
        lines.append(f"{label} {feats}".rstrip())
    return "\n".join(lines) + "\n"


def _check_weights(w, p):
    w = np.asarray(w, dtype=np.float64)
    if w.ndim != 1:
        raise ValueError("weights must be a 1-d vector")
    if w.shape[0] < p:
        raise IndexError(f"feature index {p - 1} out of range for weights of length {w.shape[0]}")
    return w


def dot(w, x: SparseVector) -> float:
    w = np.asarray(w, dtype=np.float64)
    if x.indices.size and x.indices[-1] >= w.shape[0]:
        raise IndexError(f"feature index {x.indices[-1]} out of range for weights of length {w.shape[0]}")
    return float(np.dot(w[x.indices], x.values))


def scores(w, d: Dataset) -> np.ndarray:
    """All inner products <w, x_i>, in O(nnz)."""
    w = _check_weights(w, d.p)
    return d.X @ w[:d.p]


def radius(d: Dataset) -> float:
    """Largest Euclidean norm among the examples."""
    if d.n == 0:
        raise ValueError("radius of an empty dataset")
    sq = np.asarray(d.X.multiply(d.X).sum(axis=1)).ravel()
    return float(np.sqrt(sq.max()))
