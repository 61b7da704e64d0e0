"""Covariance models: construction from samples, matrices, or the synthetic
Gaussian benchmark, plus CSV/JSON ingestion and export.

A model holds one correlation matrix C over n observation variables and one
correlation vector b per prediction target. All algorithms in the package
consume these models; nothing downstream ever touches raw samples.
"""

import csv
import json
from dataclasses import dataclass

import numpy as np

from . import numerics
from .errors import (
    DimensionError,
    ModelValidationError,
    ParseError,
    ZeroVarianceError,
)

DIAG_TOL = 1e-9
ENTRY_TOL = 1e-9
PSD_TOL = 1e-8


@dataclass(frozen=True)
class CovarianceModel:
    """Normalized covariance (= correlation) model.

    names   : labels of the n observation variables
    C       : n x n correlation matrix, unit diagonal, symmetric
    targets : (label, b) pairs; b[i] is the correlation of the target with
              variable i
    """

    names: tuple
    C: np.ndarray
    targets: tuple

    @property
    def n(self):
        return self.C.shape[0]

    @property
    def target_labels(self):
        return tuple(label for label, _ in self.targets)

    def target_vector(self, label):
        for name, b in self.targets:
            if name == label:
                return b
        raise KeyError(f"unknown target column {label!r}")

    def default_target(self):
        if len(self.targets) != 1:
            raise ValueError(
                "model has multiple targets; specify one of "
                + ", ".join(repr(t) for t in self.target_labels)
            )
        return self.targets[0][0]

    def restrict(self, idx):
        """Model over a subset of variables (idx strictly increasing)."""
        idx = np.asarray(sorted(int(i) for i in idx), dtype=np.intp)
        C = self.C[np.ix_(idx, idx)]
        names = tuple(self.names[i] for i in idx)
        targets = tuple((label, b[idx]) for label, b in self.targets)
        return CovarianceModel(names=names, C=C, targets=targets)


def _validate(C, targets, names):
    n = C.shape[0]
    if len(names) != n:
        raise DimensionError(f"{len(names)} names for {n} variables")
    if len(set(names)) != n:
        raise ModelValidationError("duplicate variable names")
    d = np.abs(np.diag(C) - 1.0)
    if d.max() > DIAG_TOL:
        i = int(d.argmax())
        raise ModelValidationError(
            f"diagonal: C[{i},{i}] = {C[i, i]!r} is not 1 within {DIAG_TOL}"
        )
    if np.abs(C).max() > 1.0 + ENTRY_TOL:
        raise ModelValidationError("entry range: |C_ij| exceeds 1")
    lam1 = float(np.linalg.eigvalsh(C)[0])
    if lam1 < -PSD_TOL:
        raise ModelValidationError(
            f"positive semidefiniteness: smallest eigenvalue {lam1:.3e}"
        )
    seen = set()
    for label, b in targets:
        if label in seen or label in names:
            raise ModelValidationError(f"duplicate label {label!r}")
        seen.add(label)
        if b.size != n:
            raise DimensionError(f"target {label!r} has size {b.size}, expected {n}")
        if np.abs(b).max() > 1.0 + ENTRY_TOL:
            raise ModelValidationError(f"entry range: |b| exceeds 1 for {label!r}")


def from_matrices(C, targets, names=None):
    """Build a model from a precomputed correlation matrix and target vectors.

    Validates all model invariants (unit diagonal, entries in [-1, 1],
    positive semidefiniteness at tolerance) and does NOT rescale: the caller
    asserts the data is already normalized. Raises ModelValidationError
    naming the violated invariant otherwise.
    """
    C = numerics.as_sym_matrix(C)
    n = C.shape[0]
    if names is None:
        names = tuple(f"x{i}" for i in range(n))
    else:
        names = tuple(str(s) for s in names)
    tgts = tuple((str(label), numerics.as_vector(b)) for label, b in targets)
    _validate(C, tgts, names)
    return CovarianceModel(names=names, C=C, targets=tgts)


@dataclass(frozen=True)
class SampleTable:
    """Named numeric columns of equal length m >= 2."""

    columns: dict

    def __post_init__(self):
        lengths = {len(v) for v in self.columns.values()}
        if not self.columns or len(lengths) != 1:
            raise DimensionError("columns must be nonempty and of equal length")
        if self.m < 2:
            raise DimensionError("need at least 2 rows")
        for name, v in self.columns.items():
            if not np.all(np.isfinite(v)):
                raise ParseError(0, name, "non-finite value")

    @property
    def m(self):
        return len(next(iter(self.columns.values())))

    @property
    def column_names(self):
        return tuple(self.columns.keys())


def table_from_arrays(names, arrays):
    return SampleTable(
        columns={str(n): np.asarray(a, dtype=np.float64) for n, a in zip(names, arrays)}
    )


def from_samples(table, target_cols):
    """Empirical correlation model from raw samples.

    Columns named in target_cols become prediction targets; the rest become
    observation variables in table order. Each column is centered and scaled
    to unit sample variance (denominator m - 1; the choice cancels in the
    correlations but fixes the intermediate values for reproducibility).
    """
    target_cols = [str(c) for c in target_cols]
    for c in target_cols:
        if c not in table.columns:
            raise KeyError(f"unknown target column {c!r}")
    obs_names = [c for c in table.column_names if c not in target_cols]
    if not obs_names:
        raise DimensionError("no observation columns remain")
    m = table.m

    def normalized(name):
        x = table.columns[name]
        x = x - x.mean()
        s = np.sqrt(float(x @ x) / (m - 1))
        if s <= 0.0:
            raise ZeroVarianceError(name)
        return x / (s * np.sqrt(m - 1))  # unit norm -> dot products are correlations

    obs = np.column_stack([normalized(c) for c in obs_names])
    C = obs.T @ obs
    C = (C + C.T) / 2.0
    np.fill_diagonal(C, 1.0)
    targets = []
    for c in target_cols:
        z = normalized(c)
        targets.append((c, obs.T @ z))
    return from_matrices(C, targets, names=obs_names)


@dataclass(frozen=True)
class SyntheticSpec:
    """Parameters of the synthetic Gaussian benchmark.

    Features are equicorrelated at `rho`, target coefficients are uniform on
    [0, coef_max], and noise has variance noise_var. Each of `runs` tables is
    drawn from an independent counter-based substream keyed by (seed, run).
    """

    n: int = 29
    m: int = 100
    rho: float = 0.6
    coef_max: float = 10.0
    noise_var: float = 0.1
    seed: int = 0
    runs: int = 20

    def __post_init__(self):
        if self.n < 1 or self.m < 2 or self.runs < 1:
            raise ValueError("need n >= 1, m >= 2, runs >= 1")
        if not 0.0 <= self.rho < 1.0:
            raise ValueError("rho must lie in [0, 1)")
        if self.noise_var < 0.0:
            raise ValueError("noise_var must be nonnegative")


def _run_rng(seed, run):
    # Philox is counter-based: key words (seed, run) give independent,
    # order-free substreams for the individual runs.
    key = np.array([np.uint64(seed & 0xFFFFFFFFFFFFFFFF), np.uint64(run)])
    return np.random.Generator(np.random.Philox(key=key))


def synth_generate(spec):
    """Generate `spec.runs` sample tables, deterministically from spec.seed."""
    cov = np.full((spec.n, spec.n), spec.rho)
    np.fill_diagonal(cov, 1.0)
    chol = np.linalg.cholesky(cov)
    tables = []
    for r in range(spec.runs):
        rng = _run_rng(spec.seed, r)
        x = rng.standard_normal((spec.m, spec.n)) @ chol.T
        w = rng.uniform(0.0, spec.coef_max, spec.n)
        eps = rng.normal(0.0, np.sqrt(spec.noise_var), spec.m)
        z = x @ w + eps
        cols = {f"x{i}": x[:, i] for i in range(spec.n)}
        cols["z"] = z
        tables.append(SampleTable(columns=cols))
    return tables


# ---------------------------------------------------------------------------
# File formats

def read_csv(path):
    """Read a comma-separated numeric table with a header row.

    Raises ParseError with 1-based (row, column) coordinates on bad cells.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(1, 1, "empty file") from None
        header = [h.strip() for h in header]
        if len(set(header)) != len(header):
            dup = next(h for h in header if header.count(h) > 1)
            raise ParseError(1, header.index(dup) + 1, f"duplicate column {dup!r}")
        data = [[] for _ in header]
        for rownum, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != len(header):
                raise ParseError(rownum, len(row), "wrong number of fields")
            for j, cell in enumerate(row):
                try:
                    data[j].append(float(cell))
                except ValueError:
                    raise ParseError(rownum, j + 1, repr(cell.strip())) from None
    columns = {}
    for name, vals in zip(header, data):
        col = np.asarray(vals, dtype=np.float64)
        if not np.all(np.isfinite(col)):
            bad = int(np.flatnonzero(~np.isfinite(col))[0])
            raise ParseError(bad + 2, header.index(name) + 1, "non-finite value")
        columns[name] = col
    return SampleTable(columns=columns)


def write_csv_table(table, path):
    names = table.column_names
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(",".join(names) + "\n")
        cols = [table.columns[c] for c in names]
        for i in range(table.m):
            fh.write(",".join(repr(float(c[i])) for c in cols) + "\n")


def model_to_json(model):
    return {
        "names": list(model.names),
        "C": [[float(v) for v in row] for row in model.C],
        "targets": [
            {"name": label, "b": [float(v) for v in b]} for label, b in model.targets
        ],
    }


def model_from_json(obj):
    try:
        names = obj["names"]
        C = obj["C"]
        targets = [(t["name"], t["b"]) for t in obj["targets"]]
    except (KeyError, TypeError) as exc:
        raise ModelValidationError(f"malformed model JSON: {exc}") from exc
    return from_matrices(C, targets, names=names)


def read_model_json(path):
    with open(path, encoding="utf-8") as fh:
        return model_from_json(json.load(fh))


def write_model_json(model, path):
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        json.dump(model_to_json(model), fh, indent=2, sort_keys=True)
        fh.write("\n")
