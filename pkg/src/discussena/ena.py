"""Epistemic network models over coded posts.

Per student: count code co-occurrences per post (every pair of codes in a
post co-occurs once), normalize each student's pair-count vector to the
unit sphere, project the normalized vectors to 2-D by SVD, then place the
five code nodes by least squares so each student's network centroid lands
near their projected point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .codebook import Codebook, TOPIC_COUNT
from .coder import CodedUtterance, code_corpus
from .ingestion import Post
from .textprep import TokenizedDoc, preprocess_corpus

# Unordered code pairs in canonical order; ENA edge space is R^10.
PAIRS: tuple[tuple[int, int], ...] = tuple(
    (i, j) for i in range(TOPIC_COUNT) for j in range(i + 1, TOPIC_COUNT)
)
PAIR_INDEX = {pair: idx for idx, pair in enumerate(PAIRS)}
N_PAIRS = len(PAIRS)

SCOPE_ALL = "all"
SCOPE_INITIAL_ONLY = "initial_only"
SCOPES = (SCOPE_ALL, SCOPE_INITIAL_ONLY)

_RANK_TOL = 1e-10


class EnaError(ValueError):
    pass


class MixedCodebookVersions(EnaError):
    pass


class NoNonzeroUnits(EnaError):
    pass


class UnknownStudent(KeyError):
    pass


class BadScope(EnaError):
    pass


@dataclass(frozen=True)
class UnitResult:
    """One student's network: raw pair counts, unit-sphere weights, 2-D point."""

    student_id: str
    raw_counts: np.ndarray
    normalized: np.ndarray
    point: np.ndarray
    centroid: np.ndarray


@dataclass(frozen=True)
class EnaModel:
    discussion_id: str
    codebook_version: int
    scope: str
    topic_names: tuple[str, ...]
    code_positions: np.ndarray            # 5 x 2
    units: tuple[UnitResult, ...]
    group_mean: np.ndarray                # mean normalized vector, zero units included
    basis: np.ndarray                     # 10 x 2, orthonormal
    variance_explained: np.ndarray        # 2, non-increasing
    fit: tuple[float | None, float | None] | None
    flags: tuple[str, ...]
    coded: tuple[CodedUtterance, ...]     # full corpus, unfiltered
    posts: tuple[Post, ...]

    def unit(self, student_id: str) -> UnitResult:
        for u in self.units:
            if u.student_id == student_id:
                return u
        raise UnknownStudent(student_id)


def _check_scope(scope: str) -> None:
    if scope not in SCOPES:
        raise BadScope(f"scope must be one of {SCOPES}, got {scope!r}")


def _in_scope(utterance: CodedUtterance, scope: str) -> bool:
    return scope == SCOPE_ALL or utterance.is_initial


def accumulate(utterances: Sequence[CodedUtterance], scope: str = SCOPE_ALL) -> dict[str, np.ndarray]:
    """Per-student raw pair counts over in-scope posts.

    Every student seen in the corpus appears, with a zero vector if none
    of their posts pass the scope filter or co-occur anything.
    """
    _check_scope(scope)
    versions = {u.codebook_version for u in utterances}
    if len(versions) > 1:
        raise MixedCodebookVersions(f"utterances span codebook versions {sorted(versions)}")
    counts: dict[str, np.ndarray] = {}
    for u in utterances:
        counts.setdefault(u.student_id, np.zeros(N_PAIRS, dtype=np.int64))
    for u in utterances:
        if not _in_scope(u, scope):
            continue
        active = [i for i, c in enumerate(u.codes) if c]
        vec = counts[u.student_id]
        for a_pos, i in enumerate(active):
            for j in active[a_pos + 1 :]:
                vec[PAIR_INDEX[(i, j)]] += 1
    return {sid: counts[sid] for sid in sorted(counts)}


def sphere_normalize(v: np.ndarray) -> np.ndarray:
    """v / ||v||, with the zero vector mapped to itself."""
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        return np.zeros_like(v, dtype=float)
    return np.asarray(v, dtype=float) / norm


def _fix_signs(basis: np.ndarray) -> np.ndarray:
    # Deterministic orientation: the largest-magnitude entry of each
    # column is made positive (first such entry on ties).
    fixed = basis.copy()
    for col in range(fixed.shape[1]):
        column = fixed[:, col]
        idx = int(np.argmax(np.abs(column)))
        if column[idx] < 0:
            fixed[:, col] = -column
    return fixed


def project(normalized: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, tuple[str, ...]]:
    """Center rows, SVD, keep the first two right singular directions.

    Returns (points, basis, variance_explained, flags). Rank below 2
    zero-fills the missing point dimensions and flags the model instead
    of failing.
    """
    matrix = np.asarray(normalized, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] < 1:
        raise EnaError("projection needs at least one row")
    centered = matrix - matrix.mean(axis=0)
    _, singular, vt = np.linalg.svd(centered, full_matrices=True)
    flags: list[str] = []

    top = float(singular[0]) if singular.size else 0.0
    rank = int(np.sum(singular > top * _RANK_TOL)) if top > 0.0 else 0
    basis = _fix_signs(vt[:2].T)
    points = centered @ basis
    if rank < 2:
        points[:, rank:] = 0.0
        flags.append("rank_deficient")

    total = float(np.sum(singular**2))
    variance = np.zeros(2)
    if total > 0.0:
        variance[0] = float(singular[0] ** 2) / total
        if singular.size > 1:
            variance[1] = float(singular[1] ** 2) / total
    else:
        flags.append("zero_variance")
    return points, basis, variance, tuple(flags)


def _influence(weights: np.ndarray) -> np.ndarray:
    """Per-student code influence: how much each code anchors the network.

    c[k] is the share of the student's total edge weight incident to code
    k, halved so the row sums to one and the centroid is a convex
    combination of code positions.
    """
    n = weights.shape[0]
    influence = np.zeros((n, TOPIC_COUNT))
    totals = weights.sum(axis=1)
    for idx, (i, j) in enumerate(PAIRS):
        influence[:, i] += weights[:, idx]
        influence[:, j] += weights[:, idx]
    nonzero = totals > 0
    influence[nonzero] /= 2.0 * totals[nonzero, None]
    return influence


def place_nodes(
    weights: np.ndarray, points: np.ndarray
) -> tuple[np.ndarray, np.ndarray, tuple[float | None, float | None] | None]:
    """Solve code positions so centroids approximate projected points.

    Each plot dimension is an independent least-squares problem; the
    minimum-norm (pseudoinverse) solution keeps underdetermined cases
    deterministic. Fit is the per-dimension Pearson correlation between
    recomputed centroids and points, reported only with three or more
    nonzero students.
    """
    weights = np.asarray(weights, dtype=float)
    points = np.asarray(points, dtype=float)
    if weights.ndim != 2 or weights.shape[0] < 1 or not np.any(weights.sum(axis=1) > 0):
        raise NoNonzeroUnits("node placement needs at least one student with nonzero weights")
    influence = _influence(weights)
    positions = np.linalg.pinv(influence) @ points
    centroids = influence @ positions
    n = weights.shape[0]
    if n < 3:
        return positions, centroids, None
    fit: list[float | None] = []
    for dim in range(2):
        x, y = centroids[:, dim], points[:, dim]
        sx, sy = float(np.std(x)), float(np.std(y))
        if sx == 0.0 or sy == 0.0:
            fit.append(None)
        else:
            fit.append(float(np.corrcoef(x, y)[0, 1]))
    return positions, centroids, (fit[0], fit[1])


def build_model(
    posts: Sequence[Post],
    codebook: Codebook,
    scope: str = SCOPE_ALL,
    docs: Sequence[TokenizedDoc] | None = None,
) -> EnaModel:
    """The full pipeline: code, accumulate, normalize, project, place nodes.

    ``docs`` takes a cached preprocess_corpus result so live re-coding
    skips tokenization; degenerate corpora come back flagged, never as
    errors.
    """
    _check_scope(scope)
    if docs is None:
        docs = preprocess_corpus(posts)
    coded = code_corpus(docs, posts, codebook)
    counts = accumulate(coded, scope)
    students = list(counts)
    raw = np.array([counts[s] for s in students], dtype=np.int64).reshape(len(students), N_PAIRS)
    normalized = np.array([sphere_normalize(r) for r in raw]).reshape(len(students), N_PAIRS)
    group_mean = normalized.mean(axis=0) if students else np.zeros(N_PAIRS)

    nonzero = [i for i in range(len(students)) if raw[i].any()]
    flags: list[str] = []
    points = np.zeros((len(students), 2))
    basis = np.eye(N_PAIRS, 2)
    variance = np.zeros(2)
    positions = np.zeros((TOPIC_COUNT, 2))
    centroids = np.zeros((len(students), 2))
    fit: tuple[float | None, float | None] | None = None

    if nonzero:
        nz_points, basis, variance, proj_flags = project(normalized[nonzero])
        flags.extend(proj_flags)
        points[nonzero] = nz_points
        positions, nz_centroids, fit = place_nodes(normalized[nonzero], nz_points)
        centroids[nonzero] = nz_centroids
    else:
        flags.append("no_nonzero_units")
    if fit is None:
        flags.append("fit_not_applicable")

    units = tuple(
        UnitResult(
            student_id=students[i],
            raw_counts=raw[i],
            normalized=normalized[i],
            point=points[i],
            centroid=centroids[i],
        )
        for i in range(len(students))
    )
    return EnaModel(
        discussion_id=posts[0].discussion_id if posts else codebook.discussion_id,
        codebook_version=codebook.version,
        scope=scope,
        topic_names=codebook.topic_names(),
        code_positions=positions,
        units=units,
        group_mean=group_mean,
        basis=basis,
        variance_explained=variance,
        fit=fit,
        flags=tuple(flags),
        coded=tuple(coded),
        posts=tuple(posts),
    )


@dataclass(frozen=True)
class IndividualView:
    unit: UnitResult
    posts: tuple[CodedUtterance, ...]


def individual_network(model: EnaModel, student_id: str) -> IndividualView:
    """One student's network plus their in-scope coded posts, oldest first.

    Codes with no incident edges stay in the node set; absence of a
    connection is a signal, not missing data.
    """
    unit = model.unit(student_id)
    posts = tuple(
        sorted(
            (
                u
                for u in model.coded
                if u.student_id == student_id and _in_scope(u, model.scope)
            ),
            key=lambda u: (u.created_at, u.post_id),
        )
    )
    return IndividualView(unit=unit, posts=posts)


def model_to_dict(model: EnaModel) -> dict:
    """JSON-ready rendering payload (numeric content only, no post bodies)."""
    return {
        "discussion_id": model.discussion_id,
        "codebook_version": model.codebook_version,
        "scope": model.scope,
        "topic_names": list(model.topic_names),
        "code_positions": [[float(x) for x in row] for row in model.code_positions],
        "edges": [
            {"source": i, "target": j, "weight": float(model.group_mean[idx])}
            for idx, (i, j) in enumerate(PAIRS)
        ],
        "units": [
            {
                "student_id": u.student_id,
                "raw_counts": [int(x) for x in u.raw_counts],
                "weights": [float(x) for x in u.normalized],
                "point": [float(x) for x in u.point],
                "centroid": [float(x) for x in u.centroid],
            }
            for u in model.units
        ],
        "variance_explained": [float(x) for x in model.variance_explained],
        "fit": list(model.fit) if model.fit is not None else None,
        "flags": list(model.flags),
    }
