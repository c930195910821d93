"""Agglomerative hierarchical clustering and 2-D PCA projection."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DegenerateDataError, InvalidMatrixError, SpaceMismatchError
from .features import FeatureVector
from .metricspace import DistanceMatrix

LINKAGES = ("average", "complete", "single")


@dataclass(frozen=True)
class Dendrogram:
    """Binary merge tree.  Leaves are nodes 0..n-1 (indexing `leaves`);
    merge i creates node n+i.  Each merge is (left, right, height, size)."""

    leaves: tuple[str, ...]
    merges: tuple[tuple[int, int, float, int], ...]


@dataclass(frozen=True)
class Projection:
    doc_ids: tuple[str, ...]
    coords: np.ndarray  # n x 2
    explained_variance: tuple[float, float]
    components: np.ndarray  # dim x 2 principal directions


def hierarchical_cluster(dm: DistanceMatrix, linkage: str = "average") -> Dendrogram:
    """Agglomerative clustering with Lance-Williams updates.

    Ties in the minimum inter-cluster distance are broken by the smallest
    (i, j) node-id pair, making the dendrogram deterministic.
    """
    if linkage not in LINKAGES:
        raise ValueError(f"unknown linkage {linkage!r}; expected one of {LINKAGES}")
    d = np.asarray(dm.d, dtype=float)
    n = len(dm.doc_ids)
    if n < 2:
        raise InvalidMatrixError("need at least 2 points to cluster")
    if not np.allclose(d, d.T):
        raise InvalidMatrixError("distance matrix is not symmetric")
    if (d < 0).any():
        raise InvalidMatrixError("distance matrix has negative entries")

    # distances between active clusters, keyed by node id
    dist: dict[tuple[int, int], float] = {}
    for i in range(n):
        for j in range(i + 1, n):
            dist[(i, j)] = d[i, j]
    sizes = {i: 1 for i in range(n)}
    active = set(range(n))
    merges: list[tuple[int, int, float, int]] = []

    for step in range(n - 1):
        best = min(dist.items(), key=lambda kv: (kv[1], kv[0]))
        (a, b), height = best
        new = n + step
        size = sizes[a] + sizes[b]
        merges.append((a, b, height, size))
        active.discard(a)
        active.discard(b)
        for c in active:
            dac = dist.pop(_key(a, c))
            dbc = dist.pop(_key(b, c))
            if linkage == "average":
                dnew = (sizes[a] * dac + sizes[b] * dbc) / size
            elif linkage == "complete":
                dnew = max(dac, dbc)
            else:
                dnew = min(dac, dbc)
            dist[_key(new, c)] = dnew
        del dist[(a, b)]
        sizes[new] = size
        active.add(new)
    return Dendrogram(leaves=dm.doc_ids, merges=tuple(merges))


def _key(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


def cut_clusters(dend: Dendrogram, k: int) -> dict[str, int]:
    """Assign leaves to the k clusters left after removing the k-1 highest
    merges.  Cluster labels 0..k-1 follow first-leaf order."""
    n = len(dend.leaves)
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}]")
    parent = list(range(2 * n - 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    # heights are non-decreasing, so the last k-1 merges are the highest
    for idx, (a, b, _, _) in enumerate(dend.merges[: n - k]):
        node = n + idx
        parent[find(a)] = node
        parent[find(b)] = node

    labels: dict[str, int] = {}
    root_label: dict[int, int] = {}
    for i, leaf in enumerate(dend.leaves):
        root = find(i)
        if root not in root_label:
            root_label[root] = len(root_label)
        labels[leaf] = root_label[root]
    return labels


def pca_project(
    vectors: list[FeatureVector],
    tol: float = 1e-10,
    max_iter: int = 100_000,
    standardize: bool = False,
) -> Projection:
    """Project feature vectors onto their top-2 principal components.

    Uses orthogonal (subspace) iteration on the centered Gram matrix,
    iterating until each direction changes by less than `tol`.  The sign of
    each component is fixed so its largest-magnitude loading is positive.
    """
    if len(vectors) < 3:
        raise ValueError("need at least 3 vectors for a 2-D projection")
    space = vectors[0].space_id
    for v in vectors[1:]:
        if v.space_id != space:
            raise SpaceMismatchError(f"mixed spaces: {space!r} vs {v.space_id!r}")
    X = np.array([v.values for v in vectors], dtype=float)
    if X.shape[1] < 2:
        raise ValueError("feature space must have at least 2 dimensions")
    Xc = X - X.mean(axis=0)
    if standardize:
        sd = Xc.std(axis=0, ddof=1)
        sd[sd == 0] = 1.0
        Xc = Xc / sd
    C = Xc.T @ Xc
    total = float(np.trace(C))
    if total <= 0.0 or not np.isfinite(total):
        raise DegenerateDataError("feature matrix has zero total variance")

    rng = np.random.default_rng(0)
    Q = np.linalg.qr(rng.standard_normal((C.shape[0], 2)))[0]
    for _ in range(max_iter):
        Z = C @ Q
        Qn, _ = np.linalg.qr(Z)
        lams = np.einsum("ij,ij->j", Qn, C @ Qn)
        # direction change measured as sin of the rotation angle;
        # near-zero eigenvalues never stabilize in direction, accept them
        settled = []
        for i, lam in enumerate(lams):
            dot = min(1.0, abs(float(Qn[:, i] @ Q[:, i])))
            settled.append(lam <= tol * total or np.sqrt(1.0 - dot * dot) < tol)
        Q = Qn
        if all(settled):
            break

    lams = np.einsum("ij,ij->j", Q, C @ Q)
    order = np.argsort(-lams)
    Q = Q[:, order]
    lams = lams[order]
    for i in range(2):
        j = int(np.argmax(np.abs(Q[:, i])))
        if Q[j, i] < 0:
            Q[:, i] = -Q[:, i]
    coords = Xc @ Q
    ev = tuple(max(0.0, float(l)) / total for l in lams)
    return Projection(
        doc_ids=tuple(v.doc_id for v in vectors),
        coords=coords,
        explained_variance=ev,  # type: ignore[arg-type]
        components=Q,
    )


# ---------------------------------------------------------------------------
# exports


def to_newick(dend: Dendrogram) -> str:
    """Newick string with branch lengths (leaf heights at 0)."""
    n = len(dend.leaves)
    heights = {i: 0.0 for i in range(n)}
    for idx, (_, _, h, _) in enumerate(dend.merges):
        heights[n + idx] = h

    def render(node: int, parent_height: float) -> str:
        bl = parent_height - heights[node]
        if node < n:
            name = dend.leaves[node].replace(" ", "_").replace(",", "_")
            return f"{name}:{bl:.10g}"
        a, b, h, _ = dend.merges[node - n]
        return f"({render(a, h)},{render(b, h)}):{bl:.10g}"

    if not dend.merges:
        return f"{dend.leaves[0]}:0;"
    root = 2 * n - 2
    a, b, h, _ = dend.merges[-1]
    return f"({render(a, h)},{render(b, h)});"


def to_merge_json(dend: Dendrogram) -> str:
    payload = {
        "leaves": list(dend.leaves),
        "merges": [
            {"left": a, "right": b, "height": h, "size": s}
            for a, b, h, s in dend.merges
        ],
    }
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False)


def write_projection_csv(
    path: str | Path, proj: Projection, volumes: dict[str, int], periods: dict[str, str]
) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("doc_id,x,y,volume,period\n")
        for doc_id, (x, y) in zip(proj.doc_ids, proj.coords):
            fh.write(
                f"{doc_id},{float(x)!r},{float(y)!r},"
                f"{volumes[doc_id]},{periods[doc_id]}\n"
            )


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b")


def dendrogram_svg(dend: Dendrogram, periods: dict[str, str]) -> str:
    """Static SVG rendering: leaves on the left, labels colored by period."""
    n = len(dend.leaves)
    order = _leaf_order(dend)
    ypos = {leaf_idx: 20 + 18 * rank for rank, leaf_idx in enumerate(order)}
    max_h = max((m[2] for m in dend.merges), default=1.0) or 1.0
    width, height = 720, 40 + 18 * n
    plot_w = width - 200

    def x_of(h: float) -> float:
        return 10 + plot_w * (1 - h / max_h)

    period_color = {
        p: _PALETTE[i % len(_PALETTE)]
        for i, p in enumerate(sorted(set(periods.values())))
    }
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    node_y: dict[int, float] = dict(ypos)
    node_h: dict[int, float] = {i: 0.0 for i in range(n)}
    for idx, (a, b, h, _) in enumerate(dend.merges):
        xa, xb = x_of(node_h[a]), x_of(node_h[b])
        xm = x_of(h)
        ya, yb = node_y[a], node_y[b]
        parts.append(
            f'<path d="M {xa:.2f} {ya:.2f} H {xm:.2f} V {yb:.2f} H {xb:.2f}" '
            'fill="none" stroke="#444" stroke-width="1"/>'
        )
        node_y[n + idx] = (ya + yb) / 2
        node_h[n + idx] = h
    for i, leaf in enumerate(dend.leaves):
        color = period_color.get(periods.get(leaf, ""), "#000")
        parts.append(
            f'<text x="{12 + plot_w}" y="{ypos[i] + 4}" font-size="11" '
            f'font-family="sans-serif" fill="{color}">{leaf}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts)


def _leaf_order(dend: Dendrogram) -> list[int]:
    """Left-to-right leaf order from a depth-first walk of the merge tree."""
    n = len(dend.leaves)
    if not dend.merges:
        return [0]
    order: list[int] = []
    stack = [2 * n - 2]
    while stack:
        node = stack.pop()
        if node < n:
            order.append(node)
        else:
            a, b, _, _ = dend.merges[node - n]
            stack.append(b)
            stack.append(a)
    return order


def scatter_svg(
    proj: Projection, volumes: dict[str, int], periods: dict[str, str]
) -> str:
    """Static SVG scatter plot of a 2-D projection, colored by volume."""
    width, height, pad = 640, 480, 40
    xs = proj.coords[:, 0]
    ys = proj.coords[:, 1]
    xr = float(xs.max() - xs.min()) or 1.0
    yr = float(ys.max() - ys.min()) or 1.0
    vol_color = {
        v: _PALETTE[i % len(_PALETTE)]
        for i, v in enumerate(sorted(set(volumes.values())))
    }
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    for doc_id, x, y in zip(proj.doc_ids, xs, ys):
        px = pad + (float(x) - float(xs.min())) / xr * (width - 2 * pad)
        py = height - pad - (float(y) - float(ys.min())) / yr * (height - 2 * pad)
        color = vol_color.get(volumes.get(doc_id, -1), "#000")
        parts.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="4" fill="{color}"/>')
        parts.append(
            f'<text x="{px + 6:.2f}" y="{py + 3:.2f}" font-size="9" '
            f'font-family="sans-serif" fill="#555">{doc_id}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts)
