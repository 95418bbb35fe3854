"""
Deterministic tourist walks on a grayscale lattice.

From the current pixel the tourist moves to the admissible neighbour with
the smallest (rule MIN) or largest (rule MAX) absolute intensity
difference. The last ``mu`` visited pixels, the current one included, are
not admissible. Candidates are scanned self first, then clockwise from
north, and the first extreme candidate wins.

The walk is a deterministic function of its state (current pixel plus the
memory window), so the first repeated state closes the attractor. The
period is the distance between the two occurrences; the transient is the
number of steps before the pixel sequence becomes periodic.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, field
from typing import Sequence

import numba
import numpy as np

from .image import NEIGHBOR_OFFSETS, GrayImage, PixelCoord, _check_coord, pixel_code
from .sampling import StartSelection

DEAD_END = None


class Rule(enum.IntEnum):
    MIN = 0
    MAX = 1

    @classmethod
    def parse(cls, text) -> "Rule":
        if isinstance(text, Rule):
            return text
        if isinstance(text, (int, np.integer)):
            return cls(int(text))
        try:
            return cls[str(text).strip().upper()]
        except KeyError:
            raise ValueError(f"unknown rule {text!r}; expected 'min' or 'max'") from None

    def __str__(self):
        return self.name.lower()


@dataclass(frozen=True)
class WalkConfig:
    mu: int
    rule: Rule = Rule.MIN
    step_cap: int | None = None  # None -> W*H of the image walked on

    def __post_init__(self):
        if self.mu < 0:
            raise ValueError(f"memory size must be >= 0, got {self.mu}")
        if self.step_cap is not None and self.step_cap < 1:
            raise ValueError(f"step_cap must be >= 1, got {self.step_cap}")
        object.__setattr__(self, "rule", Rule.parse(self.rule))

    def cap_for(self, image: GrayImage) -> int:
        return image.size if self.step_cap is None else self.step_cap


@dataclass(frozen=True)
class Trajectory:
    start: PixelCoord
    tau: int
    rho: int  # 0: no attractor (step cap or dead end)
    path: tuple[PixelCoord, ...] | None = field(default=None, compare=False)


@dataclass(frozen=True)
class WalkState:
    """Current pixel plus the memory window, most recent first."""

    current: PixelCoord
    memory: tuple[PixelCoord, ...] = ()

    @classmethod
    def initial(cls, start, mu: int) -> "WalkState":
        start = PixelCoord(*start)
        return cls(start, (start,) if mu >= 1 else ())

    def advance(self, nxt: PixelCoord, mu: int) -> "WalkState":
        return WalkState(nxt, ((nxt,) + self.memory)[:mu])


# --------------------------------------------------------------------------
# compiled kernels; pixels are addressed by code = W*x + y
# --------------------------------------------------------------------------

@numba.njit(cache=True, nogil=True)
def _neighbor_table(w, h):
    out = np.full((w * h, NEIGHBOR_OFFSETS.shape[0]), -1, dtype=np.int32)
    for c in range(w * h):
        x = c // w
        y = c - x * w
        for k in range(NEIGHBOR_OFFSETS.shape[0]):
            nx = x + NEIGHBOR_OFFSETS[k, 0]
            ny = y + NEIGHBOR_OFFSETS[k, 1]
            if 0 <= nx < h and 0 <= ny < w:
                out[c, k] = nx * w + ny
    return out


@functools.lru_cache(maxsize=16)
def neighbor_table(width: int, height: int) -> np.ndarray:
    """(W*H, 9) codes of each pixel's candidates in scan order, -1 where off-image."""
    table = _neighbor_table(width, height)
    table.setflags(write=False)
    return table


@numba.njit(cache=True, nogil=True, inline="always")
def _choose(img, nbr, path, last, t, mu, use_max):
    # last[c]: most recent step at which pixel c was visited, -1 if never
    cur = path[t]
    val = np.int64(img[cur])
    nmem = min(mu, t + 1)
    sign = np.int64(-1) if use_max else np.int64(1)
    best = -1
    best_key = np.int64(1 << 20)
    for k in range(nbr.shape[1]):
        cand = nbr[cur, k]
        if cand < 0:
            continue
        seen = last[cand]
        if seen >= 0 and t - seen < nmem:
            continue
        # MAX is MIN on the negated weight; strict < keeps the first extreme
        key = sign * abs(np.int64(img[cand]) - val)
        if key < best_key:
            best = cand
            best_key = key
    return best


@numba.njit(cache=True, nogil=True, inline="always")
def _same_state(path, s, t, mu):
    ls = max(1, min(mu, s + 1))
    lt = max(1, min(mu, t + 1))
    if ls != lt:
        return False
    for j in range(ls):
        if path[s - j] != path[t - j]:
            return False
    return True


@numba.njit(cache=True, nogil=True)
def _walk(img, nbr, start, mu, use_max, cap, path, prev, last):
    """One walk. Returns (tau, rho, last_step); ``path[:last_step+1]`` holds it.

    ``last`` must be all -1 on entry and is restored before returning.
    """
    path[0] = start
    prev[0] = -1
    last[start] = 0
    t = 0
    tau = 0
    rho = 0
    while True:
        s = prev[t]
        while s >= 0:
            if _same_state(path, s, t, mu):
                break
            s = prev[s]
        if s >= 0:
            rho = t - s
            tau = s
            while tau > 0 and path[tau - 1] == path[tau - 1 + rho]:
                tau -= 1
            break
        if t >= cap:
            tau = t
            break
        nxt = _choose(img, nbr, path, last, t, mu, use_max)
        if nxt < 0:
            tau = t
            break
        t += 1
        path[t] = nxt
        prev[t] = last[nxt]
        last[nxt] = t
    for i in range(t + 1):
        last[path[i]] = -1
    return tau, rho, t


@numba.njit(cache=True, nogil=True)
def _walk_many(img, nbr, starts, mu, use_max, cap):
    n = starts.shape[0]
    taus = np.empty(n, dtype=np.int64)
    rhos = np.empty(n, dtype=np.int64)
    path = np.empty(cap + 1, dtype=np.int64)
    prev = np.empty(cap + 1, dtype=np.int64)
    last = np.full(img.shape[0], -1, dtype=np.int64)
    for i in range(n):
        tau, rho, _ = _walk(img, nbr, starts[i], mu, use_max, cap, path, prev, last)
        taus[i] = tau
        rhos[i] = rho
    return taus, rhos


# --------------------------------------------------------------------------
# public API
# --------------------------------------------------------------------------

def _flat(image: GrayImage) -> np.ndarray:
    return np.ascontiguousarray(image.pixels.ravel())


def next_step(state: WalkState, image: GrayImage, config: WalkConfig):
    """Next pixel of the walk, or ``DEAD_END`` when memory blocks every neighbour."""
    _check_coord(state.current, image)
    mem = [pixel_code(p, image) for p in state.memory]
    if config.mu >= 1 and mem and mem[0] != pixel_code(state.current, image):
        raise ValueError("memory[0] must be the current pixel")
    # _choose reads the window backwards from index t
    window = mem[: config.mu][::-1] or [pixel_code(state.current, image)]
    t = len(window) - 1
    path = np.array(window, dtype=np.int64)
    last = np.full(image.size, -1, dtype=np.int64)
    for i, c in enumerate(window):
        last[c] = i
    nxt = _choose(_flat(image), neighbor_table(image.width, image.height), path, last, t,
                  len(mem[: config.mu]), config.rule is Rule.MAX)
    if nxt < 0:
        return DEAD_END
    return PixelCoord(*divmod(int(nxt), image.width))


def run_walk(image: GrayImage, start, config: WalkConfig, keep_path: bool = False) -> Trajectory:
    start = _check_coord(start, image)
    cap = config.cap_for(image)
    path = np.empty(cap + 1, dtype=np.int64)
    prev = np.empty(cap + 1, dtype=np.int64)
    last = np.full(image.size, -1, dtype=np.int64)
    tau, rho, t = _walk(_flat(image), neighbor_table(image.width, image.height),
                        pixel_code(start, image),
                        config.mu, config.rule is Rule.MAX, cap, path, prev, last)
    steps = None
    if keep_path:
        steps = tuple(PixelCoord(*divmod(int(c), image.width)) for c in path[: t + 1])
    return Trajectory(start, int(tau), int(rho), steps)


def walk_outcomes(image: GrayImage, codes: Sequence[int] | np.ndarray, config: WalkConfig):
    """(tau, rho) arrays for walks started at the given pixel codes."""
    codes = np.ascontiguousarray(codes, dtype=np.int64)
    if codes.size and (codes.min() < 0 or codes.max() >= image.size):
        raise IndexError("start code outside the image")
    return _walk_many(_flat(image), neighbor_table(image.width, image.height), codes, config.mu,
                      config.rule is Rule.MAX, config.cap_for(image))


def run_batch(image: GrayImage, starts: StartSelection, config: WalkConfig):
    """Joint (tau, rho) distribution over every start in ``starts``."""
    from .features import JointDistribution

    if (starts.width, starts.height) != (image.width, image.height):
        raise ValueError("start selection was built for a different image size")
    taus, rhos = walk_outcomes(image, starts.codes, config)
    return JointDistribution.from_outcomes(taus, rhos, config.mu, config.rule)


def format_trajectory(image: GrayImage, traj: Trajectory) -> str:
    """Text dump: ``step x y code intensity`` lines, then ``tau=.. rho=..``."""
    lines = []
    for i, p in enumerate(traj.path or ()):
        lines.append(f"{i} {p.x} {p.y} {pixel_code(p, image)} {image[p]}")
    lines.append(f"tau={traj.tau} rho={traj.rho}")
    return "\n".join(lines) + "\n"
