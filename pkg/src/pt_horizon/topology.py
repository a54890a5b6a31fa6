"""Sampling, membership, connected components, and boundary tracing.

Grids sample cell centers of the requested window.  Component analysis never
trusts endpoint membership alone: every candidate link between two member
samples is accepted only if all three discriminants stay positive along the
straight segment between them (see `segments`).  Candidate links are the
axis-aligned grid edges, all offsets within a small Chebyshev radius, and a
wider 'rescue' search around small fragments; since a positive straight
segment is itself a path inside the domain, extra candidates can only heal
sampling artifacts, never merge genuinely distinct components.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Optional

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from . import oracle, segments
from .errors import InvalidInputError
from .model import PointLike, as_point, eval_p, eval_q, eval_w

AXES = ("a", "b", "c")
DEFAULT_RANGES = {"a": (-3.6, 3.6), "b": (-2.3, 2.3), "c": (-3.6, 3.6)}

LINK_RADIUS = 2           # Chebyshev radius of the dense candidate offsets
RESCUE_RADIUS = 12        # search radius around small fragments
RESCUE_MAX_SAMPLES = 4096  # fragments at most this large get the wide search
MAX_SAMPLES_3D = 10 ** 9


class Mode(Enum):
    STRICT_SIMPLE = "strict"
    REAL_ONLY = "real"


def free_axes(fixed_axis: str):
    return tuple(ax for ax in AXES if ax != fixed_axis)


def grid_centers(rng, resolution: int) -> np.ndarray:
    # midpoint + signed offset so symmetric ranges sample exactly symmetric
    # points (reflection tests compare grids entrywise)
    lo, hi = rng
    mid = (lo + hi) / 2.0
    t = (2 * np.arange(resolution) + 1 - resolution) / (2 * resolution)
    return mid + t * (hi - lo)


@dataclass(frozen=True)
class SliceSpec:
    """A 2-D section of coupling space at one fixed coupling."""

    fixed_axis: str
    fixed_value: float
    u_range: tuple = None
    v_range: tuple = None
    resolution: int = 800
    eta: float = 0.0
    mode: Mode = Mode.STRICT_SIMPLE

    def __post_init__(self):
        if self.fixed_axis not in AXES:
            raise InvalidInputError(f"fixed_axis must be one of {AXES}, got {self.fixed_axis!r}")
        if not np.isfinite(self.fixed_value):
            raise InvalidInputError("fixed_value must be finite")
        fu, fv = free_axes(self.fixed_axis)
        if self.u_range is None:
            object.__setattr__(self, "u_range", DEFAULT_RANGES[fu])
        if self.v_range is None:
            object.__setattr__(self, "v_range", DEFAULT_RANGES[fv])
        for rng in (self.u_range, self.v_range):
            if not (np.isfinite(rng[0]) and np.isfinite(rng[1]) and rng[0] < rng[1]):
                raise InvalidInputError(f"range must satisfy min < max, got {rng}")
        if not (16 <= self.resolution <= 20000):
            raise InvalidInputError(f"resolution must be in [16, 20000], got {self.resolution}")
        if self.eta < 0:
            raise InvalidInputError(f"eta must be >= 0, got {self.eta}")

    @property
    def u_axis(self) -> str:
        return free_axes(self.fixed_axis)[0]

    @property
    def v_axis(self) -> str:
        return free_axes(self.fixed_axis)[1]

    def u_centers(self) -> np.ndarray:
        return grid_centers(self.u_range, self.resolution)

    def v_centers(self) -> np.ndarray:
        return grid_centers(self.v_range, self.resolution)


@dataclass(frozen=True)
class BoxSpec:
    """A full 3-D box sampled at `resolution` cells per axis."""

    a_range: tuple = DEFAULT_RANGES["a"]
    b_range: tuple = DEFAULT_RANGES["b"]
    c_range: tuple = DEFAULT_RANGES["c"]
    resolution: int = 160
    eta: float = 0.0
    mode: Mode = Mode.STRICT_SIMPLE
    factors: tuple = ("W", "Q", "P")

    def __post_init__(self):
        for rng in (self.a_range, self.b_range, self.c_range):
            if not (np.isfinite(rng[0]) and np.isfinite(rng[1]) and rng[0] < rng[1]):
                raise InvalidInputError(f"range must satisfy min < max, got {rng}")
        if self.resolution < 32:
            raise InvalidInputError(f"3-D resolution must be >= 32, got {self.resolution}")
        if self.resolution ** 3 > MAX_SAMPLES_3D:
            raise InvalidInputError(f"refusing > {MAX_SAMPLES_3D:.0e} samples")
        if self.eta < 0:
            raise InvalidInputError(f"eta must be >= 0, got {self.eta}")
        bad = [f for f in self.factors if f not in segments.FACTOR_NAMES]
        if bad or not self.factors:
            raise InvalidInputError(f"factors must be a nonempty subset of W,Q,P, got {self.factors}")


@dataclass
class SliceGrid:
    spec: SliceSpec
    u: np.ndarray
    v: np.ndarray
    W: np.ndarray
    Q: np.ndarray
    P: np.ndarray
    membership: np.ndarray

    def point(self, i: int, j: int) -> tuple:
        vals = {self.spec.fixed_axis: self.spec.fixed_value,
                self.spec.u_axis: self.u[i], self.spec.v_axis: self.v[j]}
        return (vals["a"], vals["b"], vals["c"])


@dataclass
class ComponentStats:
    id: int
    samples: int
    bbox: tuple
    area: float


@dataclass
class ComponentReport:
    count: int
    labels: Optional[np.ndarray]
    components: list = field(default_factory=list)


@dataclass
class BoundaryCurve:
    factor: str
    polyline: np.ndarray  # (k, 2) points in (u, v) coordinates
    closed: bool


# ---------------------------------------------------------------------------
# membership
# ---------------------------------------------------------------------------

def _boundary_guard(norm4):
    # a factor within this band of zero counts as sitting on the boundary;
    # keeps float pinch points (exact zeros perturbed by rounding) outside
    return 1e-12 * (1.0 + norm4)


def membership(p: PointLike, eta: float = 0.0, mode: Mode = Mode.STRICT_SIMPLE) -> bool:
    """Pointwise domain membership under the chosen mode.

    StrictSimple requires W, Q, P > eta, with a rounding-sized guard band so
    points numerically on a boundary do not count as inside.  RealOnly
    additionally admits points that fail only the W test, with W >= -eta up
    to the same guard, whenever the eigenvalue oracle reports a real
    (possibly degenerate) spectrum there.
    """
    if eta < 0:
        raise InvalidInputError(f"eta must be >= 0, got {eta}")
    p = as_point(p)
    W = eval_w(p.a, p.b, p.c)
    Q = eval_q(p.a, p.b, p.c)
    P = eval_p(p.a, p.b, p.c)
    guard = _boundary_guard(p.norm() ** 4)
    strict = (W > eta + guard) and (Q > eta + guard) and (P > eta + guard)
    if strict or mode is Mode.STRICT_SIMPLE:
        return strict
    if (Q > eta + guard) and (P > eta + guard) and (W <= eta + guard) and (W >= -eta - guard):
        return bool(oracle.real_spectrum_batch(np.array([tuple(p)]))[0])
    return False


def _membership_grid(Wg, Qg, Pg, n4g, eta, mode, points_fn, factors=("W", "Q", "P")):
    by_name = {"W": Wg, "Q": Qg, "P": Pg}
    guard = _boundary_guard(n4g)
    member = np.ones(Wg.shape, bool)
    for name in factors:
        member &= by_name[name] > eta + guard
    if mode is Mode.REAL_ONLY and "W" in factors:
        others = np.ones(Wg.shape, bool)
        for name in factors:
            if name != "W":
                others &= by_name[name] > eta + guard
        cand = others & ~(Wg > eta + guard) & (Wg >= -eta - guard)
        idx = np.nonzero(cand.ravel())[0]
        if len(idx):
            pts = points_fn(idx)
            member.ravel()[idx] = oracle.real_spectrum_batch(pts)
    return member


# ---------------------------------------------------------------------------
# segment connectivity
# ---------------------------------------------------------------------------

def segment_connected(p1: PointLike, p2: PointLike, eta: float = 0.0,
                      mode: Mode = Mode.STRICT_SIMPLE) -> bool:
    """True iff every discriminant stays above eta along the straight segment.

    Both endpoints are expected to satisfy membership.  In RealOnly mode a
    W minimum that merely touches zero is admitted when the oracle finds a
    real spectrum at the touch point.
    """
    if eta < 0:
        raise InvalidInputError(f"eta must be >= 0, got {eta}")
    q1 = np.array([tuple(as_point(p1))])
    q2 = np.array([tuple(as_point(p2))])
    return bool(_edges_ok(q1, q2, eta, mode)[0])


def _edges_ok(p0: np.ndarray, p1: np.ndarray, eta: float, mode: Mode) -> np.ndarray:
    ok = np.ones(p0.shape[0], bool)
    for name in segments.FACTOR_NAMES:
        good, m, arg = segments.factor_positive_mask(name, p0, p1, eta)
        if mode is Mode.REAL_ONLY and name == "W":
            relax = ~good & (m >= -eta - 1e-9)
            idx = np.nonzero(relax & ok)[0]
            if len(idx):
                pts = p0[idx] + arg[idx, None] * (p1[idx] - p0[idx])
                good[idx] |= oracle.real_spectrum_batch(pts)
        ok &= good
    return ok


def _edges_ok_factors(p0, p1, eta, mode, factors):
    if tuple(factors) == segments.FACTOR_NAMES:
        return _edges_ok(p0, p1, eta, mode)
    ok = np.ones(p0.shape[0], bool)
    for name in factors:
        good, _, _ = segments.factor_positive_mask(name, p0, p1, eta)
        ok &= good
    return ok


# ---------------------------------------------------------------------------
# connected components over sampled grids
# ---------------------------------------------------------------------------

def _half_offsets(nd, radius):
    out = []
    for off in product(*(range(-radius, radius + 1),) * nd):
        if all(o == 0 for o in off):
            continue
        nz = next(o for o in off if o != 0)
        if nz < 0:
            continue
        out.append(off)
    return out


def _full_offsets(nd, radius):
    return [off for off in product(*(range(-radius, radius + 1),) * nd)
            if any(o != 0 for o in off)]


def _offset_slices(shape, off):
    sl0, sl1 = [], []
    for k, o in enumerate(off):
        if o >= 0:
            sl0.append(slice(None, shape[k] - o) if o else slice(None))
            sl1.append(slice(o, None) if o else slice(None))
        else:
            sl0.append(slice(-o, None))
            sl1.append(slice(None, shape[k] + o))
    return tuple(sl0), tuple(sl1)


class _GridComponents:
    """Deterministic component labelling of a sampled membership grid."""

    def __init__(self, member, lift, eta, mode, factors=segments.FACTOR_NAMES):
        self.member = member
        self.lift = lift          # flat indices -> (n, 3) coupling points
        self.eta = eta
        self.mode = mode
        self.factors = tuple(factors)
        self.shape = member.shape
        self.nd = member.ndim
        self.n_mem = int(member.sum())
        self.idx = -np.ones(member.size, np.int64)
        self.idx[member.ravel()] = np.arange(self.n_mem)

    def _test(self, i0, i1):
        return _edges_ok_factors(self.lift(i0), self.lift(i1), self.eta,
                                 self.mode, self.factors)

    def _edges_for_offsets(self, offs, label=None):
        member, shape = self.member, self.shape
        flat = np.arange(member.size).reshape(shape)
        rows, cols = [], []
        for off in offs:
            sl0, sl1 = _offset_slices(shape, off)
            pair = member[sl0] & member[sl1]
            if label is not None:
                pair &= label[sl0] != label[sl1]
            if not pair.any():
                continue
            i0 = flat[sl0][pair]
            i1 = flat[sl1][pair]
            ok = self._test(i0, i1)
            rows.append(i0[ok])
            cols.append(i1[ok])
        return rows, cols

    def _label(self, rows, cols):
        r = self.idx[np.concatenate(rows)] if rows else np.array([], np.int64)
        c = self.idx[np.concatenate(cols)] if cols else np.array([], np.int64)
        g = sparse.coo_matrix((np.ones(len(r), np.int8), (r, c)),
                              shape=(self.n_mem, self.n_mem))
        n, lab = csgraph.connected_components(g.tocsr(), directed=False)
        full = -np.ones(self.member.size, np.int64)
        full[self.member.ravel()] = lab
        return n, full.reshape(self.shape)

    def _rescue_edges(self, label):
        lab_flat = label.ravel()
        member = self.member.ravel()
        sizes = np.bincount(lab_flat[member])
        small = sizes <= RESCUE_MAX_SAMPLES
        if not small.any():
            return [], []
        src = np.nonzero(member & small[np.maximum(lab_flat, 0)] & (lab_flat >= 0))[0]
        if len(src) == 0:
            return [], []
        src_multi = np.array(np.unravel_index(src, self.shape))
        rows, cols = [], []
        dims = np.array(self.shape)[:, None]
        for off in _full_offsets(self.nd, RESCUE_RADIUS):
            if max(abs(o) for o in off) <= LINK_RADIUS:
                continue
            tgt = src_multi + np.array(off)[:, None]
            valid = np.all((tgt >= 0) & (tgt < dims), axis=0)
            if not valid.any():
                continue
            s = src[valid]
            t = np.ravel_multi_index(tuple(tgt[:, valid]), self.shape)
            good = member[t] & (lab_flat[t] != lab_flat[s])
            if not good.any():
                continue
            s, t = s[good], t[good]
            ok = self._test(s, t)
            rows.append(s[ok])
            cols.append(t[ok])
        return rows, cols

    def run(self):
        if self.n_mem == 0:
            return 0, None
        nd = self.nd
        axis_offs = [tuple(int(i == k) for i in range(nd)) for k in range(nd)]
        rows, cols = self._edges_for_offsets(axis_offs)
        n, lab = self._label(rows, cols)
        extra = [o for o in _half_offsets(nd, LINK_RADIUS) if o not in axis_offs]
        r2, c2 = self._edges_for_offsets(extra, label=lab)
        if r2:
            rows += r2
            cols += c2
            n, lab = self._label(rows, cols)
        r3, c3 = self._rescue_edges(lab)
        if r3:
            rows += r3
            cols += c3
            n, lab = self._label(rows, cols)
        return n, lab


def _canonical_labels(labels: np.ndarray) -> np.ndarray:
    """Relabel so ids follow first encounter in row-major order."""
    flat = labels.ravel()
    out = -np.ones_like(flat)
    mapping = {}
    member_positions = np.nonzero(flat >= 0)[0]
    for pos in member_positions:
        lbl = flat[pos]
        if lbl not in mapping:
            mapping[lbl] = len(mapping)
    if mapping:
        table = np.empty(max(mapping) + 1, np.int64)
        for old, new in mapping.items():
            table[old] = new
        out[member_positions] = table[flat[member_positions]]
    return out.reshape(labels.shape)


def sample_slice(spec: SliceSpec) -> SliceGrid:
    """Evaluate discriminants and membership on the slice's cell centers."""
    u = spec.u_centers()
    v = spec.v_centers()
    vals = {spec.fixed_axis: spec.fixed_value,
            spec.u_axis: u[:, None], spec.v_axis: v[None, :]}
    a, b, c = vals["a"], vals["b"], vals["c"]
    shape = (spec.resolution, spec.resolution)
    Wg = np.broadcast_to(eval_w(a, b, c), shape).copy()
    Qg = np.broadcast_to(eval_q(a, b, c), shape).copy()
    Pg = np.broadcast_to(eval_p(a, b, c), shape).copy()

    def points_fn(flat_idx):
        ii, jj = np.unravel_index(flat_idx, shape)
        pts = {spec.u_axis: u[ii], spec.v_axis: v[jj],
               spec.fixed_axis: np.full(len(flat_idx), spec.fixed_value)}
        return np.stack([pts["a"], pts["b"], pts["c"]], axis=-1)

    n4g = np.broadcast_to((np.square(a) + np.square(b) + np.square(c)) ** 2, shape)
    member = _membership_grid(Wg, Qg, Pg, n4g, spec.eta, spec.mode, points_fn)
    return SliceGrid(spec=spec, u=u, v=v, W=Wg, Q=Qg, P=Pg, membership=member)


def _component_stats_2d(grid: SliceGrid, labels: np.ndarray) -> list:
    stats = []
    hu = grid.u[1] - grid.u[0] if len(grid.u) > 1 else 0.0
    hv = grid.v[1] - grid.v[0] if len(grid.v) > 1 else 0.0
    cell = hu * hv
    count = labels.max() + 1 if labels is not None and labels.size else 0
    for k in range(count):
        ii, jj = np.nonzero(labels == k)
        bbox = ((float(grid.u[ii.min()]), float(grid.u[ii.max()])),
                (float(grid.v[jj.min()]), float(grid.v[jj.max()])))
        stats.append(ComponentStats(id=k, samples=int(len(ii)), bbox=bbox,
                                    area=float(len(ii) * cell)))
    return stats


def components2d(grid: SliceGrid) -> ComponentReport:
    """Label the member samples of a slice; ids in row-major first-seen order."""
    spec = grid.spec
    shape = grid.membership.shape

    def lift(flat_idx):
        ii, jj = np.unravel_index(flat_idx, shape)
        pts = {spec.u_axis: grid.u[ii], spec.v_axis: grid.v[jj],
               spec.fixed_axis: np.full(len(np.atleast_1d(flat_idx)), spec.fixed_value)}
        return np.stack([pts["a"], pts["b"], pts["c"]], axis=-1)

    gc = _GridComponents(grid.membership, lift, spec.eta, spec.mode)
    n, labels = gc.run()
    if labels is None:
        return ComponentReport(count=0, labels=-np.ones(shape, np.int64))
    labels = _canonical_labels(labels)
    return ComponentReport(count=n, labels=labels,
                           components=_component_stats_2d(grid, labels))


def components3d(box: BoxSpec) -> ComponentReport:
    """Label the member cells of a 3-D box; ids in row-major first-seen order."""
    xs = [grid_centers(box.a_range, box.resolution),
          grid_centers(box.b_range, box.resolution),
          grid_centers(box.c_range, box.resolution)]
    A = xs[0][:, None, None]
    B = xs[1][None, :, None]
    C = xs[2][None, None, :]
    shape = (box.resolution,) * 3
    Wg = np.broadcast_to(eval_w(A, B, C), shape)
    Qg = np.broadcast_to(eval_q(A, B, C), shape)
    Pg = np.broadcast_to(eval_p(A, B, C), shape)

    def points_fn(flat_idx):
        ii, jj, kk = np.unravel_index(flat_idx, shape)
        return np.stack([xs[0][ii], xs[1][jj], xs[2][kk]], axis=-1)

    n4g = np.broadcast_to((np.square(A) + np.square(B) + np.square(C)) ** 2, shape)
    member = _membership_grid(Wg, Qg, Pg, n4g, box.eta, box.mode, points_fn,
                              factors=box.factors)

    gc = _GridComponents(member, points_fn, box.eta, box.mode, factors=box.factors)
    n, labels = gc.run()
    if labels is None:
        return ComponentReport(count=0, labels=None)
    labels = _canonical_labels(labels)
    hs = [(r[1] - r[0]) / box.resolution for r in (box.a_range, box.b_range, box.c_range)]
    cell = hs[0] * hs[1] * hs[2]
    stats = []
    for k in range(n):
        ii, jj, kk = np.nonzero(labels == k)
        bbox = ((float(xs[0][ii.min()]), float(xs[0][ii.max()])),
                (float(xs[1][jj.min()]), float(xs[1][jj.max()])),
                (float(xs[2][kk.min()]), float(xs[2][kk.max()])))
        stats.append(ComponentStats(id=k, samples=int(len(ii)), bbox=bbox,
                                    area=float(len(ii) * cell)))
    return ComponentReport(count=n, labels=labels, components=stats)


def grid_oracle_mismatches(grid: SliceGrid, margin: float = 1e-6) -> int:
    """Count samples where strict membership disagrees with the oracle.

    Only samples with all discriminant magnitudes above `margin` are compared.
    """
    robust = ((np.abs(grid.W) > margin) & (np.abs(grid.Q) > margin)
              & (np.abs(grid.P) > margin))
    strict = (grid.W > 0) & (grid.Q > 0) & (grid.P > 0)
    idx = np.nonzero(robust.ravel())[0]
    shape = grid.membership.shape
    spec = grid.spec
    ii, jj = np.unravel_index(idx, shape)
    pts = {spec.u_axis: grid.u[ii], spec.v_axis: grid.v[jj],
           spec.fixed_axis: np.full(len(idx), spec.fixed_value)}
    points = np.stack([pts["a"], pts["b"], pts["c"]], axis=-1)
    agree = oracle.real_simple_batch(points) == strict.ravel()[idx]
    return int((~agree).sum())


# ---------------------------------------------------------------------------
# marching-squares boundary tracing
# ---------------------------------------------------------------------------

_FACTOR_EVAL = {"W": eval_w, "Q": eval_q, "P": eval_p}

# segment table: per case, list of (edge_in, edge_out); edges 0=bottom(j),
# 1=right(i+1), 2=top(j+1), 3=left(i) of the square (i, j)-(i+1, j+1)
_MS_SEGMENTS = {
    1: [(3, 0)], 2: [(0, 1)], 3: [(3, 1)], 4: [(1, 2)],
    6: [(0, 2)], 7: [(3, 2)], 8: [(2, 3)], 9: [(2, 0)],
    11: [(2, 1)], 12: [(1, 3)], 13: [(1, 0)], 14: [(0, 3)],
}


def trace_boundary(spec: SliceSpec, factor: str, clip: bool = False):
    """Zero-level contours of one discriminant on a slice.

    Marching squares over the sample grid with linear interpolation along
    cell edges, then a bisection polish so every vertex sits on the zero set
    to within 1e-6 * (1 + |p|^4).  With `clip`, segments are kept only in
    squares where the other two factors exceed -eta at all four corners.
    """
    factor = factor.upper()
    if factor not in _FACTOR_EVAL:
        raise InvalidInputError(f"factor must be one of W, Q, P, got {factor!r}")
    grid = sample_slice(spec)
    F = {"W": grid.W, "Q": grid.Q, "P": grid.P}[factor]
    u, v = grid.u, grid.v
    res = spec.resolution
    pos = F > 0.0

    fixed = spec.fixed_value

    def f_point(uu, vv):
        vals = {spec.u_axis: uu, spec.v_axis: vv, spec.fixed_axis: fixed}
        return _FACTOR_EVAL[factor](vals["a"], vals["b"], vals["c"])

    if clip:
        others = [n for n in segments.FACTOR_NAMES if n != factor]
        keep = np.ones((res - 1, res - 1), bool)
        for name in others:
            G = {"W": grid.W, "Q": grid.Q, "P": grid.P}[name]
            okc = G > -spec.eta
            keep &= okc[:-1, :-1] & okc[1:, :-1] & okc[:-1, 1:] & okc[1:, 1:]
    else:
        keep = None

    # edge key -> interpolated vertex; edges identified by (i, j, orientation)
    # orientation 0: from (i, j) to (i+1, j); 1: from (i, j) to (i, j+1)
    vert_t0 = {}
    raw_segments = []
    c0 = pos[:-1, :-1]
    c1 = pos[1:, :-1]
    c2 = pos[1:, 1:]
    c3 = pos[:-1, 1:]
    case = (c0.astype(int) + 2 * c1.astype(int) + 4 * c2.astype(int)
            + 8 * c3.astype(int))
    interesting = np.nonzero((case > 0) & (case < 15))
    for i, j in zip(*interesting):
        if keep is not None and not keep[i, j]:
            continue
        k = case[i, j]
        if k in (5, 10):
            center = f_point(0.5 * (u[i] + u[i + 1]), 0.5 * (v[j] + v[j + 1]))
            if k == 5:
                segs = [(3, 0), (1, 2)] if center <= 0 else [(3, 2), (1, 0)]
            else:
                segs = [(0, 1), (2, 3)] if center <= 0 else [(0, 3), (2, 1)]
        else:
            segs = _MS_SEGMENTS[k]
        for e_in, e_out in segs:
            key_in = _edge_key(i, j, e_in)
            key_out = _edge_key(i, j, e_out)
            raw_segments.append((key_in, key_out))
            vert_t0.setdefault(key_in, None)
            vert_t0.setdefault(key_out, None)

    if not raw_segments:
        return []

    # resolve vertex coordinates with vectorized bisection along grid edges
    keys = list(vert_t0.keys())
    starts = np.empty((len(keys), 2))
    ends = np.empty((len(keys), 2))
    for k, (i, j, orient) in enumerate(keys):
        starts[k] = (u[i], v[j])
        ends[k] = (u[i + 1], v[j]) if orient == 0 else (u[i], v[j + 1])
    f_lo = f_point(starts[:, 0], starts[:, 1])
    lo = np.zeros(len(keys))
    hi = np.ones(len(keys))
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        pm = starts + mid[:, None] * (ends - starts)
        fm = f_point(pm[:, 0], pm[:, 1])
        same = (fm > 0) == (f_lo > 0)
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    t = 0.5 * (lo + hi)
    coords = starts + t[:, None] * (ends - starts)
    vertex = {key: coords[k] for k, key in enumerate(keys)}

    # stitch segments into oriented chains
    succ = {}
    for key_in, key_out in raw_segments:
        succ.setdefault(key_in, []).append(key_out)
    incoming = {}
    for key_in, key_out in raw_segments:
        incoming.setdefault(key_out, []).append(key_in)

    unused = {seg for seg in raw_segments}
    curves = []
    seg_from = {}
    for seg in raw_segments:
        seg_from.setdefault(seg[0], []).append(seg)

    def walk(start_seg):
        chain = [start_seg[0], start_seg[1]]
        unused.discard(start_seg)
        while True:
            nxts = [s for s in seg_from.get(chain[-1], []) if s in unused]
            if not nxts:
                break
            seg = nxts[0]
            unused.discard(seg)
            chain.append(seg[1])
            if chain[-1] == chain[0]:
                break
        return chain

    # open chains first: start from vertices with no incoming unused segment
    for seg in sorted(raw_segments):
        if seg not in unused:
            continue
        has_incoming = any(s in unused for s in
                           [(kin, seg[0]) for kin in incoming.get(seg[0], [])])
        if not has_incoming:
            chain = walk(seg)
            closed = chain[0] == chain[-1]
            pts = np.array([vertex[k] for k in chain])
            curves.append(BoundaryCurve(factor=factor, polyline=pts, closed=closed))
    # remaining are loops
    while unused:
        seg = sorted(unused)[0]
        chain = walk(seg)
        closed = chain[0] == chain[-1]
        pts = np.array([vertex[k] for k in chain])
        curves.append(BoundaryCurve(factor=factor, polyline=pts, closed=closed))
    return curves


def _edge_key(i, j, edge):
    # edges of square (i, j): 0 bottom (orient 0 at j), 1 right (orient 1 at i+1),
    # 2 top (orient 0 at j+1), 3 left (orient 1 at i)
    if edge == 0:
        return (i, j, 0)
    if edge == 1:
        return (i + 1, j, 1)
    if edge == 2:
        return (i, j + 1, 0)
    return (i, j, 1)


def thread_count() -> int:
    """Worker cap for slice-level parallelism, from PT_HORIZON_THREADS."""
    raw = os.environ.get("PT_HORIZON_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        n = min(4, os.cpu_count() or 1)
    return n
