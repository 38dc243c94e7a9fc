"""Planar polyline curves and the geometric predicates the flows need.

Curves live in an affine plane embedded in R^3, described by an origin
and two orthonormal in-plane directions.  Nodes are stored as in-plane
coordinates.  An open curve is anchored at two centers of the ambient
configuration (by index); a closed curve wraps around implicitly, the
last node connecting back to the first.
"""

from __future__ import annotations

import dataclasses
import json

import numpy as np

from .errors import DegenerateStencil

_ORTHO_TOL = 1e-9


@dataclasses.dataclass(frozen=True)
class Plane:
    """Affine plane in R^3 with an orthonormal in-plane basis."""

    origin: np.ndarray
    u: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        origin = np.asarray(self.origin, dtype=float).copy()
        u = np.asarray(self.u, dtype=float).copy()
        w = np.asarray(self.w, dtype=float).copy()
        for name, vec in (("origin", origin), ("u", u), ("w", w)):
            if vec.shape != (3,) or not np.all(np.isfinite(vec)):
                raise ValueError("plane %s must be a finite 3-vector" % name)
        if abs(np.linalg.norm(u) - 1.0) > _ORTHO_TOL:
            raise ValueError("plane direction u must be a unit vector")
        if abs(np.linalg.norm(w) - 1.0) > _ORTHO_TOL:
            raise ValueError("plane direction w must be a unit vector")
        if abs(float(u @ w)) > _ORTHO_TOL:
            raise ValueError("plane directions must be orthogonal")
        for vec in (origin, u, w):
            vec.setflags(write=False)
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "w", w)

    @property
    def normal(self):
        return np.cross(self.u, self.w)

    def to_plane(self, points):
        """Project ambient points onto in-plane coordinates."""
        pts = np.asarray(points, dtype=float)
        rel = pts - self.origin
        return np.stack([rel @ self.u, rel @ self.w], axis=-1)

    def to_space(self, coords):
        """Lift in-plane coordinates back to ambient points."""
        uv = np.asarray(coords, dtype=float)
        return (
            self.origin
            + uv[..., :1] * self.u
            + uv[..., 1:2] * self.w
        )

    def offset_of(self, points):
        """Signed distance of ambient points from the plane."""
        pts = np.asarray(points, dtype=float)
        return (pts - self.origin) @ self.normal

    def to_dict(self):
        return {
            "origin": [float(c) for c in self.origin],
            "u": [float(c) for c in self.u],
            "w": [float(c) for c in self.w],
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            origin=np.asarray(data["origin"], dtype=float),
            u=np.asarray(data["u"], dtype=float),
            w=np.asarray(data["w"], dtype=float),
        )

    @classmethod
    def coordinate(cls, origin=(0.0, 0.0, 0.0)):
        """The z=0 plane through the given origin."""
        return cls(
            origin=np.asarray(origin, dtype=float),
            u=np.array([1.0, 0.0, 0.0]),
            w=np.array([0.0, 1.0, 0.0]),
        )


@dataclasses.dataclass(frozen=True)
class PolyCurve:
    """Polyline in a plane, either closed or anchored at two centers."""

    plane: Plane
    nodes: np.ndarray
    closed: bool = True
    start: int | None = None
    end: int | None = None

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float).copy()
        if nodes.ndim != 2 or nodes.shape[1] != 2:
            raise ValueError("nodes must have shape (n, 2)")
        if not np.all(np.isfinite(nodes)):
            raise ValueError("nodes must be finite")
        minimum = 3 if self.closed else 2
        if nodes.shape[0] < minimum:
            raise ValueError("need at least %d nodes" % minimum)
        if self.closed:
            if self.start is not None or self.end is not None:
                raise ValueError("closed curves carry no anchor indices")
        else:
            if self.start is None or self.end is None:
                raise ValueError("open curves need start and end center indices")
            if int(self.start) == int(self.end):
                raise ValueError("anchors must be distinct centers")
            object.__setattr__(self, "start", int(self.start))
            object.__setattr__(self, "end", int(self.end))
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "closed", bool(self.closed))

    @property
    def node_count(self):
        return self.nodes.shape[0]

    def points3d(self):
        return self.plane.to_space(self.nodes)

    def segments(self):
        """Segment endpoint pairs, including the wrap for closed curves."""
        if self.closed:
            return self.nodes, np.roll(self.nodes, -1, axis=0)
        return self.nodes[:-1], self.nodes[1:]

    def segment_lengths(self):
        a, b = self.segments()
        return np.linalg.norm(b - a, axis=-1)

    def length(self):
        return float(np.sum(self.segment_lengths()))

    def diameter(self):
        span = self.nodes.max(axis=0) - self.nodes.min(axis=0)
        return float(np.linalg.norm(span))

    def with_nodes(self, nodes):
        return dataclasses.replace(self, nodes=np.asarray(nodes, dtype=float))

    def resample(self, count):
        """Uniform-arclength resample keeping endpoints (open) or the
        base node (closed) exactly."""
        count = int(count)
        minimum = 3 if self.closed else 2
        if count < minimum:
            raise ValueError("need at least %d nodes" % minimum)
        if self.closed:
            pts = np.vstack([self.nodes, self.nodes[:1]])
        else:
            pts = self.nodes
        seg = np.linalg.norm(np.diff(pts, axis=0), axis=-1)
        s = np.concatenate([[0.0], np.cumsum(seg)])
        total = s[-1]
        if total <= 0.0:
            raise ValueError("curve has zero length")
        if self.closed:
            targets = total * np.arange(count) / count
        else:
            targets = np.linspace(0.0, total, count)
        fresh = np.stack(
            [np.interp(targets, s, pts[:, 0]), np.interp(targets, s, pts[:, 1])],
            axis=-1,
        )
        if not self.closed:
            fresh[0] = self.nodes[0]
            fresh[-1] = self.nodes[-1]
        return self.with_nodes(fresh)

    def to_dict(self):
        kind = "closed" if self.closed else {"open": {"start": self.start, "end": self.end}}
        return {
            "plane": self.plane.to_dict(),
            "kind": kind,
            "nodes": [[float(a), float(b)] for a, b in self.nodes],
        }

    @classmethod
    def from_dict(cls, data):
        plane = Plane.from_dict(data["plane"])
        kind = data["kind"]
        nodes = np.asarray(data["nodes"], dtype=float)
        if kind == "closed":
            return cls(plane=plane, nodes=nodes, closed=True)
        if isinstance(kind, dict) and set(kind) == {"open"}:
            anchors = kind["open"]
            return cls(
                plane=plane,
                nodes=nodes,
                closed=False,
                start=int(anchors["start"]),
                end=int(anchors["end"]),
            )
        raise ValueError("kind must be 'closed' or {'open': {...}}")

    def to_json(self, **kwargs):
        kwargs.setdefault("sort_keys", True)
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    @classmethod
    def from_file(cls, path):
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


# -- discrete differential geometry -------------------------------------------


def _cross2(a, b):
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def curvature_profile(curve):
    """Signed curvature at the nodes via the circumradius of each triple.

    Left turns are positive.  Closed curves get a value at every node,
    open curves at interior nodes only.  Collapsed stencils raise
    DegenerateStencil with the offending node index.
    """
    nodes = curve.nodes
    if curve.closed:
        prev = np.roll(nodes, 1, axis=0)
        nxt = np.roll(nodes, -1, axis=0)
        here = nodes
        indices = np.arange(curve.node_count)
    else:
        prev = nodes[:-2]
        here = nodes[1:-1]
        nxt = nodes[2:]
        indices = np.arange(1, curve.node_count - 1)

    e1 = here - prev
    e2 = nxt - here
    chord = nxt - prev
    l1 = np.linalg.norm(e1, axis=-1)
    l2 = np.linalg.norm(e2, axis=-1)
    l3 = np.linalg.norm(chord, axis=-1)
    floor = 1e-14 * max(curve.diameter(), 1e-300)
    bad = (l1 < floor) | (l2 < floor) | (l3 < floor)
    if np.any(bad):
        raise DegenerateStencil(int(indices[np.argmax(bad)]))
    return 2.0 * _cross2(e1, e2) / (l1 * l2 * l3)


def _box_contact(a, b, c):
    lo = np.minimum(a, b) - 1e-15
    hi = np.maximum(a, b) + 1e-15
    return np.all((c >= lo) & (c <= hi), axis=-1)


def first_crossing(curve):
    """Index pair of the first crossing segment pair, or None if embedded.

    Adjacent segments (sharing a node) are skipped; everything else that
    touches counts, including collinear overlap.
    """
    starts, ends = curve.segments()
    n = len(starts)
    if n < 3:
        return None
    p3 = starts[None, :, :]
    p4 = ends[None, :, :]
    s = p4 - p3
    block = max(1, 2_000_000 // max(n, 1))
    for i0 in range(0, n, block):
        i1 = min(n, i0 + block)
        p1 = starts[i0:i1, None, :]
        p2 = ends[i0:i1, None, :]
        r = p2 - p1
        d1 = _cross2(r, p3 - p1)
        d2 = _cross2(r, p4 - p1)
        d3 = _cross2(s, p1 - p3)
        d4 = _cross2(s, p2 - p3)
        proper = (
            ((d1 > 0) != (d2 > 0))
            & ((d3 > 0) != (d4 > 0))
            & (d1 != d2)
            & (d3 != d4)
        )
        # collinear or endpoint contact counts as a crossing
        touch = (
            ((d1 == 0) & _box_contact(p1, p2, p3))
            | ((d2 == 0) & _box_contact(p1, p2, p4))
            | ((d3 == 0) & _box_contact(p3, p4, p1))
            | ((d4 == 0) & _box_contact(p3, p4, p2))
        )
        hits = proper | touch
        cols = np.arange(n)[None, :]
        rows = np.arange(i0, i1)[:, None]
        hits &= cols > rows + 1
        if curve.closed and i0 == 0:
            hits[0, n - 1] = False
        if hits.any():
            flat = int(np.argmax(hits))
            return (i0 + flat // n, flat % n)
    return None


def is_embedded(curve):
    return first_crossing(curve) is None


def winding_number(curve, point):
    """Integer winding of a closed curve about an in-plane point."""
    if not curve.closed:
        raise ValueError("winding number needs a closed curve")
    q = np.asarray(point, dtype=float)
    rel = curve.nodes - q
    nxt = np.roll(rel, -1, axis=0)
    angles = np.arctan2(_cross2(rel, nxt), np.einsum("ij,ij->i", rel, nxt))
    return int(np.rint(np.sum(angles) / (2.0 * np.pi)))


def loop_winding(nodes, point):
    """Winding of an explicit closed node loop (no curve object needed)."""
    q = np.asarray(point, dtype=float)
    rel = np.asarray(nodes, dtype=float) - q
    nxt = np.roll(rel, -1, axis=0)
    angles = np.arctan2(_cross2(rel, nxt), np.einsum("ij,ij->i", rel, nxt))
    return int(np.rint(np.sum(angles) / (2.0 * np.pi)))


def point_segment_distance(p, a, b):
    """Distance from point p to segment [a, b], all in the plane."""
    p = np.asarray(p, dtype=float)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ab = b - a
    denom = float(ab @ ab)
    if denom == 0.0:
        return float(np.linalg.norm(p - a))
    s = np.clip(float((p - a) @ ab) / denom, 0.0, 1.0)
    return float(np.linalg.norm(p - (a + s * ab)))


def _segment_distances(points, starts, ends):
    """Distance from each point (M,2) to each segment (N,2)-(N,2), as (M,N)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    seg = (ends - starts)[None, :, :]
    rel = pts[:, None, :] - starts[None, :, :]
    denom = np.einsum("mnj,mnj->mn", seg, seg)
    tpar = np.einsum("mnj,mnj->mn", rel, seg)
    tpar = np.where(denom > 0.0, tpar, 0.0) / np.where(denom > 0.0, denom, 1.0)
    np.clip(tpar, 0.0, 1.0, out=tpar)
    diff = rel - tpar[..., None] * seg
    return np.sqrt(np.einsum("mnj,mnj->mn", diff, diff))


def _polyline_segments(nodes, closed):
    if closed:
        return nodes, np.roll(nodes, -1, axis=0)
    return nodes[:-1], nodes[1:]


def polyline_point_distance(nodes, closed, q):
    """Distance from point q to a polyline given by its nodes."""
    nodes = np.asarray(nodes, dtype=float)
    starts, ends = _polyline_segments(nodes, closed)
    return float(np.min(_segment_distances(q, starts, ends)))


def hausdorff_to_segment(curve, a, b, samples_per_node=4):
    """Symmetric Hausdorff distance between an open curve and segment [a, b]."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    # node distances suffice one way: point-to-segment distance is convex
    # along each edge, so the max over the curve sits at a node
    forward = float(np.max(_segment_distances(curve.nodes, a[None, :], b[None, :])))
    count = max(2, samples_per_node * curve.node_count)
    ts = np.linspace(0.0, 1.0, count)[:, None]
    chord = a + ts * (b - a)
    starts, ends = _polyline_segments(curve.nodes, curve.closed)
    backward = float(np.max(np.min(_segment_distances(chord, starts, ends), axis=1)))
    return max(forward, backward)


def convex_hull(points):
    """Convex hull of planar points, counterclockwise, via monotone chain."""
    pts = np.unique(np.asarray(points, dtype=float), axis=0)
    if len(pts) <= 2:
        return pts
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]

    def build(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and _cross2(out[-1] - out[-2], p - out[-2]) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = build(pts)
    upper = build(pts[::-1])
    return np.array(lower[:-1] + upper[:-1])
