"""
Frontlab - Obstacle Specifications
Wall descriptions contained in the slab 0 <= x1 <= M, with cell-center membership tests
and the JSON schema used by scenario files.
"""

import numpy as np
from typing import Dict, List, Optional, Tuple
import logging
from dataclasses import asdict, dataclass, field

from exceptions import InvalidObstacle

logger = logging.getLogger(__name__)

# membership is half-open [lo, hi); centers that sit exactly on a face count as inside
_EPS = 1e-9


def _in_band(v: np.ndarray, lo: float, hi: float) -> np.ndarray:
    return (v >= lo - _EPS) & (v < hi - _EPS)


def _wrap(dy: np.ndarray, height: Optional[float]) -> np.ndarray:
    if height is None:
        return dy
    return dy - height * np.round(dy / height)


@dataclass(frozen=True)
class Empty:
    """No wall at all."""

    kind = 'Empty'

    @property
    def M(self) -> float:
        return 0.0

    @property
    def period(self) -> Optional[float]:
        return None

    def slab(self) -> Optional[Tuple[float, float]]:
        return None

    def solid_mask(self, X: np.ndarray, Y: np.ndarray, height: Optional[float] = None) -> np.ndarray:
        return np.zeros(X.shape, dtype=bool)


@dataclass(frozen=True)
class SlabWithHoles:
    """Slab a <= x1 < b pierced by horizontal holes y0 <= y < y1 running through it."""

    a: float
    b: float
    hole_rects: Tuple[Tuple[float, float], ...] = ()

    kind = 'SlabWithHoles'

    def __post_init__(self):
        if not 0.0 <= self.a < self.b:
            raise InvalidObstacle(f"SlabWithHoles needs 0 <= a < b, got a={self.a}, b={self.b}")
        for y0, y1 in self.hole_rects:
            if y1 <= y0:
                raise InvalidObstacle(f"Hole [{y0}, {y1}) is empty")

    @property
    def M(self) -> float:
        return self.b

    @property
    def period(self) -> Optional[float]:
        return None

    def slab(self) -> Optional[Tuple[float, float]]:
        return self.a, self.b

    def solid_mask(self, X: np.ndarray, Y: np.ndarray, height: Optional[float] = None) -> np.ndarray:
        solid = _in_band(X, self.a, self.b)
        for y0, y1 in self.hole_rects:
            solid &= ~_in_band(Y, y0, y1)
        return solid

    def hole_area(self) -> float:
        return (self.b - self.a) * sum(y1 - y0 for y0, y1 in self.hole_rects)


@dataclass(frozen=True)
class PeriodicSlits:
    """Slab 0 <= x1 < thickness with one slit per period, centered at period / 2."""

    thickness: float
    slit_width: float
    period: float

    kind = 'PeriodicSlits'

    def __post_init__(self):
        if self.thickness <= 0 or self.period <= 0:
            raise InvalidObstacle("PeriodicSlits needs positive thickness and period")
        if not 0.0 <= self.slit_width < self.period:
            raise InvalidObstacle(f"slit_width must lie in [0, period), got {self.slit_width}")

    @property
    def M(self) -> float:
        return self.thickness

    def slab(self) -> Optional[Tuple[float, float]]:
        return 0.0, self.thickness

    def slit(self) -> Tuple[float, float]:
        center = self.period / 2.0
        return center - self.slit_width / 2.0, center + self.slit_width / 2.0

    def solid_mask(self, X: np.ndarray, Y: np.ndarray, height: Optional[float] = None) -> np.ndarray:
        y0, y1 = self.slit()
        return _in_band(X, 0.0, self.thickness) & ~_in_band(Y, y0, y1)

    def hole_area(self) -> float:
        return self.thickness * self.slit_width


@dataclass(frozen=True)
class ParallelBlades:
    """count horizontal plates 0 <= x1 < blade_len, each blade_thickness thick, separated by gap."""

    blade_len: float
    blade_thickness: float
    gap: float
    count: int

    kind = 'ParallelBlades'

    def __post_init__(self):
        if self.blade_len <= 0 or self.blade_thickness < 0 or self.gap <= 0 or self.count < 0:
            raise InvalidObstacle("ParallelBlades needs blade_len > 0, gap > 0, thickness >= 0, count >= 0")

    @property
    def M(self) -> float:
        return self.blade_len

    @property
    def period(self) -> Optional[float]:
        if self.count == 0:
            return None
        return self.count * (self.blade_thickness + self.gap)

    def slab(self) -> Optional[Tuple[float, float]]:
        return 0.0, self.blade_len

    def blades(self) -> List[Tuple[float, float]]:
        pitch = self.blade_thickness + self.gap
        return [(k * pitch + self.gap / 2.0, k * pitch + self.gap / 2.0 + self.blade_thickness)
                for k in range(self.count)]

    def solid_mask(self, X: np.ndarray, Y: np.ndarray, height: Optional[float] = None) -> np.ndarray:
        solid = np.zeros(X.shape, dtype=bool)
        along = _in_band(X, 0.0, self.blade_len)
        for y0, y1 in self.blades():
            solid |= along & _in_band(Y, y0, y1)
        return solid


@dataclass(frozen=True)
class Debris:
    """
    Disks of a common radius, optionally lodged in the tunnel of a base slab.

    base is (a, b, (y0, y1)): a slab a <= x1 < b whose only opening is the tunnel y0 <= y < y1.
    """

    disk_centers: Tuple[Tuple[float, float], ...]
    disk_radius: float
    base: Optional[Tuple[float, float, Tuple[float, float]]] = None

    kind = 'Debris'

    def __post_init__(self):
        if self.disk_radius < 0:
            raise InvalidObstacle(f"disk_radius must be nonnegative, got {self.disk_radius}")
        if self.base is not None:
            a, b, (y0, y1) = self.base
            if not 0.0 <= a < b or y1 <= y0:
                raise InvalidObstacle(f"Malformed debris base {self.base}")

    @property
    def M(self) -> float:
        right = [cx + self.disk_radius for cx, _ in self.disk_centers]
        if self.base is not None:
            right.append(self.base[1])
        return max(right, default=0.0)

    @property
    def period(self) -> Optional[float]:
        return None

    def slab(self) -> Optional[Tuple[float, float]]:
        if self.base is not None:
            return self.base[0], self.base[1]
        if not self.disk_centers:
            return None
        return min(cx - self.disk_radius for cx, _ in self.disk_centers), self.M

    def solid_mask(self, X: np.ndarray, Y: np.ndarray, height: Optional[float] = None) -> np.ndarray:
        solid = np.zeros(X.shape, dtype=bool)
        for cx, cy in self.disk_centers:
            solid |= (X - cx) ** 2 + _wrap(Y - cy, height) ** 2 <= self.disk_radius ** 2
        if self.base is not None:
            a, b, (y0, y1) = self.base
            solid |= _in_band(X, a, b) & ~_in_band(Y, y0, y1)
        return solid

    def with_disks(self, centers) -> 'Debris':
        return Debris(disk_centers=tuple(map(tuple, centers)), disk_radius=self.disk_radius, base=self.base)


@dataclass(frozen=True)
class ConvexBlock:
    """Block between piecewise linear lower and upper boundaries given as knots [x1, y_low, y_high]."""

    profile: Tuple[Tuple[float, float, float], ...]

    kind = 'ConvexBlock'

    def __post_init__(self):
        knots = np.asarray(self.profile, dtype=float)
        if knots.ndim != 2 or knots.shape[1] != 3 or knots.shape[0] < 2:
            raise InvalidObstacle("ConvexBlock profile needs at least two [x1, y_low, y_high] knots")
        if np.any(np.diff(knots[:, 0]) <= 0) or knots[0, 0] < 0:
            raise InvalidObstacle("ConvexBlock knots must have increasing x1 >= 0")
        if np.any(knots[:, 2] < knots[:, 1]):
            raise InvalidObstacle("ConvexBlock knots need y_low <= y_high")

    @property
    def M(self) -> float:
        return float(self.profile[-1][0])

    @property
    def period(self) -> Optional[float]:
        return None

    def slab(self) -> Optional[Tuple[float, float]]:
        return float(self.profile[0][0]), self.M

    def solid_mask(self, X: np.ndarray, Y: np.ndarray, height: Optional[float] = None) -> np.ndarray:
        knots = np.asarray(self.profile, dtype=float)
        low = np.interp(X, knots[:, 0], knots[:, 1])
        high = np.interp(X, knots[:, 0], knots[:, 2])
        return _in_band(X, knots[0, 0], knots[-1, 0]) & (Y >= low - _EPS) & (Y < high - _EPS)


@dataclass(frozen=True)
class Reservoir:
    """
    Solid block 0 <= x1 < M with a closed cavity reached through a narrow entrance channel.

    The channel (entrance) runs from the mouth at x1 = 0 to the cavity; the cavity is a square
    of side cavity_size wrapped in a shell of solid. The block spans 0 <= y < cavity_size + 2 shell,
    a free band above it lets the front pass the block.
    """

    mouth_width: float
    cavity_size: float
    entrance_len: float
    shell: float = 1.0
    band: float = 16.0

    kind = 'Reservoir'

    def __post_init__(self):
        if min(self.mouth_width, self.cavity_size, self.entrance_len, self.shell, self.band) <= 0:
            raise InvalidObstacle("Reservoir dimensions must be positive")
        if self.mouth_width >= self.cavity_size:
            raise InvalidObstacle("Reservoir mouth must be narrower than the cavity")

    @property
    def M(self) -> float:
        return self.entrance_len + self.cavity_size + self.shell

    @property
    def period(self) -> Optional[float]:
        return self.block_height + self.band

    @property
    def block_height(self) -> float:
        return self.cavity_size + 2.0 * self.shell

    def slab(self) -> Optional[Tuple[float, float]]:
        return 0.0, self.entrance_len

    def channel(self) -> Tuple[float, float]:
        center = self.shell + self.cavity_size / 2.0
        return center - self.mouth_width / 2.0, center + self.mouth_width / 2.0

    def region_masks(self, X: np.ndarray, Y: np.ndarray) -> Dict[str, np.ndarray]:
        """Entrance, cavity and block rectangles by cell-center membership."""
        y0, y1 = self.channel()
        entrance = _in_band(X, 0.0, self.entrance_len) & _in_band(Y, y0, y1)
        cavity = (_in_band(X, self.entrance_len, self.entrance_len + self.cavity_size)
                  & _in_band(Y, self.shell, self.shell + self.cavity_size))
        block = _in_band(X, 0.0, self.M) & _in_band(Y, 0.0, self.block_height)
        return {'entrance': entrance, 'cavity': cavity, 'block': block}

    def solid_mask(self, X: np.ndarray, Y: np.ndarray, height: Optional[float] = None) -> np.ndarray:
        regions = self.region_masks(X, Y)
        return regions['block'] & ~regions['entrance'] & ~regions['cavity']


VARIANTS = {cls.kind: cls for cls in (Empty, SlabWithHoles, PeriodicSlits, ParallelBlades,
                                      Debris, ConvexBlock, Reservoir)}


def obstacle_from_dict(data: Dict):
    """
    Build an obstacle from its JSON form {"variant": <name>, <fields>...}.

    Raises:
        InvalidObstacle: unknown variant, missing or unexpected fields, malformed values
    """
    if not isinstance(data, dict) or 'variant' not in data:
        raise InvalidObstacle("Obstacle entry must be an object with a 'variant' field")
    params = {k: v for k, v in data.items() if k != 'variant'}
    name = data['variant']
    if name not in VARIANTS:
        raise InvalidObstacle(f"Unknown obstacle variant '{name}'; expected one of {sorted(VARIANTS)}")

    if name == 'SlabWithHoles':
        params['hole_rects'] = tuple(tuple(map(float, r)) for r in params.get('hole_rects', ()))
    elif name == 'Debris':
        params['disk_centers'] = tuple(tuple(map(float, c)) for c in params.get('disk_centers', ()))
        if params.get('base') is not None:
            a, b, tunnel = params['base']
            params['base'] = (float(a), float(b), tuple(map(float, tunnel)))
    elif name == 'ConvexBlock':
        params['profile'] = tuple(tuple(map(float, k)) for k in params.get('profile', ()))

    try:
        return VARIANTS[name](**params)
    except TypeError as e:
        raise InvalidObstacle(f"Bad fields for {name}: {e}")
    except ValueError as e:
        raise InvalidObstacle(f"Bad values for {name}: {e}")


def obstacle_to_dict(spec) -> Dict:
    data = {'variant': spec.kind}
    data.update(asdict(spec))
    return data
