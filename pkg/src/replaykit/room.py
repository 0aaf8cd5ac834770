"""Shoebox room acoustics: environment taxonomy, geometry sampling,
image-source impulse responses, and reverberation-time measurement.

An acoustic environment is a category triplet (room size, T60,
talker-to-mic distance), each in {a, b, c}; 27 environments total.
Room instances are concrete draws from those intervals: floor area and
aspect ratio, a T60 target realized through a uniform wall absorption,
and randomly placed microphone / talker (and optionally attacker)
positions under distance and wall-margin constraints.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy import signal as sps

from .audio import ImpulseResponse
from .errors import InfeasibleGeometryError, InsufficientDecayError

SPEED_OF_SOUND = 343.0  # m/s, dry air; no air absorption modeled
ROOM_HEIGHT = 2.7       # m, fixed ceiling height
HEAD_HEIGHT = 1.1       # m, mic and talker height
WALL_MARGIN = 0.1       # m, minimum distance of any position from a surface
MAX_ABSORPTION = 0.99

# Category intervals for the environment triplet.
ROOM_AREA_M2 = {"a": (2.0, 5.0), "b": (5.0, 10.0), "c": (10.0, 20.0)}
T60_SECONDS = {"a": (0.05, 0.2), "b": (0.2, 0.6), "c": (0.6, 1.0)}
MIC_DISTANCE_M = {"a": (0.10, 0.50), "b": (0.50, 1.00), "c": (1.00, 1.50)}

# Attacker-to-talker distance zones.  Zone C is open-ended in the
# taxonomy; sampling needs a bound, so it is capped at 2 m (or whatever
# the room allows through rejection).
ATTACKER_DISTANCE_M = {"A": (0.10, 0.50), "B": (0.50, 1.00), "C": (1.00, 2.00)}

ASPECT_RATIO_RANGE = (0.5, 2.0)

# Image-source controls: images are dropped once their cumulative
# reflection attenuation falls 60 dB below the (reflection-free) direct
# path.  Images stronger than -40 dB relative to the direct path get the
# full +/-40-tap windowed-sinc fractional delay; the diffuse remainder
# is placed at the nearest sample, which leaves delay-sensitive early
# reflections exact while keeping dense late tails tractable.
REFLECTION_CUTOFF_DB = 60.0
SINC_HALF_TAPS = 40
_STRONG_IMAGE_DB = 40.0


@dataclass(frozen=True)
class EnvironmentLabel:
    """Category triplet: room size, reverberation, talker-to-mic distance."""

    room_size: str
    reverb: str
    mic_distance: str

    def __post_init__(self):
        for name, v in (
            ("room_size", self.room_size),
            ("reverb", self.reverb),
            ("mic_distance", self.mic_distance),
        ):
            if v not in ("a", "b", "c"):
                raise ValueError(f"{name} must be one of a/b/c, got {v!r}")

    @classmethod
    def from_string(cls, s: str) -> "EnvironmentLabel":
        if len(s) != 3:
            raise ValueError(f"environment label must be 3 characters, got {s!r}")
        return cls(s[0], s[1], s[2])

    def __str__(self) -> str:
        return self.room_size + self.reverb + self.mic_distance

    @property
    def area_interval(self) -> tuple[float, float]:
        return ROOM_AREA_M2[self.room_size]

    @property
    def t60_interval(self) -> tuple[float, float]:
        return T60_SECONDS[self.reverb]

    @property
    def mic_distance_interval(self) -> tuple[float, float]:
        return MIC_DISTANCE_M[self.mic_distance]


ALL_ENVIRONMENTS = [
    EnvironmentLabel(s, r, d) for s in "abc" for r in "abc" for d in "abc"
]


@dataclass
class RoomInstance:
    """A concrete sampled room with placed mic/talker (and attacker)."""

    length_x: float
    width_y: float
    height_z: float
    t60_target: float
    absorption: float
    mic_position: np.ndarray
    talker_position: np.ndarray
    attacker_position: np.ndarray | None = None
    replay_source_position: np.ndarray | None = None
    label: str | None = None

    def __post_init__(self):
        self.mic_position = np.asarray(self.mic_position, dtype=np.float64)
        self.talker_position = np.asarray(self.talker_position, dtype=np.float64)
        if self.attacker_position is not None:
            self.attacker_position = np.asarray(self.attacker_position, dtype=np.float64)
        if self.replay_source_position is not None:
            self.replay_source_position = np.asarray(
                self.replay_source_position, dtype=np.float64
            )
        if min(self.length_x, self.width_y, self.height_z) <= 2 * WALL_MARGIN:
            raise ValueError("room dimensions too small for wall margins")
        if not 0.0 < self.absorption <= MAX_ABSORPTION:
            raise ValueError(f"absorption must be in (0, {MAX_ABSORPTION}]")
        if self.t60_target <= 0:
            raise ValueError("t60_target must be positive")
        for name, p in self._positions():
            if not self.contains(p):
                raise ValueError(f"{name} outside the room (with {WALL_MARGIN} m margin)")

    def _positions(self):
        yield "mic_position", self.mic_position
        yield "talker_position", self.talker_position
        if self.attacker_position is not None:
            yield "attacker_position", self.attacker_position
        if self.replay_source_position is not None:
            yield "replay_source_position", self.replay_source_position

    @property
    def dimensions(self) -> np.ndarray:
        return np.array([self.length_x, self.width_y, self.height_z])

    @property
    def floor_area(self) -> float:
        return self.length_x * self.width_y

    @property
    def volume(self) -> float:
        return self.length_x * self.width_y * self.height_z

    @property
    def surface_area(self) -> float:
        x, y, z = self.length_x, self.width_y, self.height_z
        return 2.0 * (x * y + x * z + y * z)

    def contains(self, p: np.ndarray, margin: float = WALL_MARGIN) -> bool:
        p = np.asarray(p, dtype=np.float64)
        lo = margin - 1e-9
        hi = self.dimensions - margin + 1e-9
        return bool(np.all(p >= lo) and np.all(p <= hi))

    @property
    def mic_orientation(self) -> np.ndarray:
        """The ASV cardioid points at the talker (the legitimate user)."""
        v = self.talker_position - self.mic_position
        return v / np.linalg.norm(v)


def absorption_from_t60(room: RoomInstance) -> float:
    """Uniform absorption from the Sabine inverse, clamped to (0, 0.99].

    alpha = 0.161 V / (T60 * A_total).  A clamp at 0.99 means the room
    cannot physically reach the target, in which case the achieved T60
    will exceed what the formula promises (callers get the clamped value
    and should treat the target as approximate).
    """
    if room.t60_target <= 0:
        raise ValueError("t60_target must be positive")
    alpha = 0.161 * room.volume / (room.t60_target * room.surface_area)
    return float(min(alpha, MAX_ABSORPTION))


def eyring_absorption(volume: float, surface_area: float, t60: float) -> float:
    """Uniform absorption from the Eyring inverse.

    alpha = 1 - exp(-0.161 V / (T60 * A)).  The two classical inverses
    agree as alpha -> 0; neither matches a specular image-source model
    exactly (see :func:`calibrated_absorption`).
    """
    if t60 <= 0:
        raise ValueError("t60 must be positive")
    alpha = 1.0 - math.exp(-0.161 * volume / (t60 * surface_area))
    return float(min(alpha, MAX_ABSORPTION))


def _fibonacci_directions(n: int) -> np.ndarray:
    """Deterministic quasi-uniform unit vectors on the sphere."""
    i = np.arange(n) + 0.5
    phi = math.pi * (1.0 + math.sqrt(5.0)) * i
    cos_t = 1.0 - 2.0 * i / n
    sin_t = np.sqrt(1.0 - cos_t**2)
    return np.column_stack([sin_t * np.cos(phi), sin_t * np.sin(phi), cos_t])


def _model_fitted_t60(
    gamma: float,
    dims: np.ndarray,
    direct_dist: float,
    t60_target: float,
    kappa: np.ndarray,
    pattern_power: float,
) -> float:
    """Fitted T60 of the modeled image-source decay for reflectivity gamma.

    The specular image-source field in a shoebox does not decay as a
    single exponential: the hit count of an image at distance d along
    direction u is ~ d * sum(|u_i| / L_i), so the energy envelope is a
    directional average of exponentials and develops a late slow slope
    from rays grazing the long axis.  This evaluates that averaged
    envelope (plus the direct-path energy), builds the Schroeder curve,
    and fits it exactly the way :func:`measure_t60` does, so that the
    calibration target is what the measurement will see.
    """
    c = SPEED_OF_SOUND
    volume = float(np.prod(dims))
    t0 = direct_dist / c
    horizon = t0 + 1.2 * t60_target + 0.005
    a = gamma * c * kappa  # per-direction decay rates of the energy envelope
    # per-direction truncation from the -60 dB reflection cutoff
    t_cut = np.minimum(horizon, (2.0 * REFLECTION_CUTOFF_DB / 20.0) * math.log(10.0) / a)
    t = np.linspace(0.0, horizon, 512)
    decay = np.exp(-np.outer(t, a))
    tail = np.exp(-a * t_cut)
    sch_rev = np.clip(decay - tail[None, :], 0.0, None) / a[None, :]
    sch_rev = sch_rev.mean(axis=1) * pattern_power * c / (4.0 * math.pi * volume)
    direct_energy = (1.0 / (4.0 * math.pi * direct_dist)) ** 2
    sch = sch_rev + direct_energy * (t <= t0)
    sch /= sch[0]
    with np.errstate(divide="ignore"):
        db = 10.0 * np.log10(np.maximum(sch, 1e-300))
    below_25 = np.nonzero(db <= -25.0)[0]
    if len(below_25) == 0:
        return math.inf  # decays too slowly to even reach -25 dB
    in_range = (db <= -5.0) & (db >= -25.0)
    idx = np.nonzero(in_range)[0]
    if len(idx) < 4:
        # plunged through the whole fit band within a few grid samples:
        # effectively instantaneous decay
        return 3.0 * float(t[below_25[0]])
    slope, _ = np.polyfit(t[idx], db[idx], 1)
    if slope >= 0:
        return math.inf
    return -60.0 / slope


def calibrated_absorption(
    dims: np.ndarray,
    direct_dist: float,
    t60_target: float,
    pattern: str = "cardioid",
    n_directions: int = 400,
) -> float:
    """Uniform absorption tuned so the image-source IR measures ~t60_target.

    Bisects the wall reflectivity under the directional decay model of
    :func:`_model_fitted_t60`.  Clamped at 0.99 when the target is
    physically out of reach for the geometry.
    """
    if t60_target <= 0:
        raise ValueError("t60_target must be positive")
    dims = np.asarray(dims, dtype=np.float64)
    dirs = np.abs(_fibonacci_directions(n_directions))
    kappa = dirs @ (1.0 / dims)
    # cardioid receivers collect 1/3 of the diffuse power an omni does
    pattern_power = 1.0 / 3.0 if pattern == "cardioid" else 1.0

    gamma_hi = -math.log(1.0 - MAX_ABSORPTION)
    if _model_fitted_t60(
        gamma_hi, dims, direct_dist, t60_target, kappa, pattern_power
    ) > t60_target:
        return MAX_ABSORPTION  # even near-total absorption cannot decay fast enough
    lo, hi = 1e-4, gamma_hi
    for _ in range(48):
        mid = math.sqrt(lo * hi)
        fitted = _model_fitted_t60(
            mid, dims, direct_dist, t60_target, kappa, pattern_power
        )
        if fitted > t60_target:
            lo = mid
        else:
            hi = mid
    gamma = math.sqrt(lo * hi)
    return float(min(1.0 - math.exp(-gamma), MAX_ABSORPTION))


def _sample_positions(rng, dims, ds_interval, da_interval):
    """One rejection attempt at mic/talker (and attacker) placement.

    Returns (mic, talker, attacker, replay_source) or None.  Mic and
    talker sit at head height; the attacker's recorder may be anywhere.
    The replay loudspeaker goes at the talker's mic-distance along the
    mic-to-attacker bearing, and must itself fit inside the room.
    """
    lo = np.full(3, WALL_MARGIN)
    hi = dims - WALL_MARGIN
    mic = np.array(
        [rng.uniform(lo[0], hi[0]), rng.uniform(lo[1], hi[1]), HEAD_HEIGHT]
    )
    ds = rng.uniform(*ds_interval)
    theta = rng.uniform(0.0, 2.0 * math.pi)
    talker = mic + ds * np.array([math.cos(theta), math.sin(theta), 0.0])
    if not (np.all(talker >= lo) and np.all(talker <= hi)):
        return None
    if da_interval is None:
        return mic, talker, None, None
    attacker = rng.uniform(lo, hi)
    da = float(np.linalg.norm(attacker - talker))
    if not da_interval[0] <= da <= da_interval[1]:
        return None
    bearing = attacker - mic
    norm = float(np.linalg.norm(bearing))
    if norm < 1e-6:
        return None
    replay_source = mic + ds * bearing / norm
    if not (np.all(replay_source >= lo) and np.all(replay_source <= hi)):
        return None
    return mic, talker, attacker, replay_source


def sample_environment(
    label: EnvironmentLabel | str,
    rng: np.random.Generator,
    attack_da: str | None = None,
    max_position_attempts: int = 10_000,
    max_room_attempts: int = 10,
) -> RoomInstance:
    """Draw a concrete room for an environment label.

    Floor area is uniform within the size category (aspect ratio
    uniform in [0.5, 2]), the T60 target uniform within the
    reverberation category, and positions are rejection-sampled until
    the distance constraints and wall margins hold.  When ``attack_da``
    (a zone in A/B/C) is given, an attacker recording position and the
    replay presentation position are placed too.

    Deterministic for a given rng state.
    """
    if isinstance(label, str):
        label = EnvironmentLabel.from_string(label)
    da_interval = None
    if attack_da is not None:
        da_interval = ATTACKER_DISTANCE_M[attack_da]

    t60 = rng.uniform(*label.t60_interval)
    for _ in range(max_room_attempts):
        area = rng.uniform(*label.area_interval)
        aspect = rng.uniform(*ASPECT_RATIO_RANGE)
        x = math.sqrt(area * aspect)
        y = math.sqrt(area / aspect)
        dims = np.array([x, y, ROOM_HEIGHT])
        for _ in range(max_position_attempts):
            placed = _sample_positions(
                rng, dims, label.mic_distance_interval, da_interval
            )
            if placed is None:
                continue
            mic, talker, attacker, replay_source = placed
            alpha = calibrated_absorption(
                dims, float(np.linalg.norm(talker - mic)), t60
            )
            return RoomInstance(
                length_x=x,
                width_y=y,
                height_z=ROOM_HEIGHT,
                t60_target=t60,
                absorption=alpha,
                mic_position=mic,
                talker_position=talker,
                attacker_position=attacker,
                replay_source_position=replay_source,
                label=str(label),
            )
    raise InfeasibleGeometryError(
        f"could not place positions for environment {label}"
        + (f" with attack zone {attack_da}" if attack_da else "")
        + f" after {max_room_attempts} room draws"
    )


def place_attacker(
    room: RoomInstance, attack_da: str, rng: np.random.Generator,
    max_attempts: int = 10_000,
) -> RoomInstance:
    """Place an attacker (and replay source) in an already-sampled room.

    Keeps the room geometry and mic/talker positions fixed so that the
    attacker distance zone is the only controlled variable across the
    attacks mounted on one presentation.
    """
    da_interval = ATTACKER_DISTANCE_M[attack_da]
    lo = np.full(3, WALL_MARGIN)
    hi = room.dimensions - WALL_MARGIN
    ds = float(np.linalg.norm(room.talker_position - room.mic_position))
    for _ in range(max_attempts):
        attacker = rng.uniform(lo, hi)
        da = float(np.linalg.norm(attacker - room.talker_position))
        if not da_interval[0] <= da <= da_interval[1]:
            continue
        bearing = attacker - room.mic_position
        norm = float(np.linalg.norm(bearing))
        if norm < 1e-6:
            continue
        replay_source = room.mic_position + ds * bearing / norm
        if not (np.all(replay_source >= lo) and np.all(replay_source <= hi)):
            continue
        return RoomInstance(
            length_x=room.length_x,
            width_y=room.width_y,
            height_z=room.height_z,
            t60_target=room.t60_target,
            absorption=room.absorption,
            mic_position=room.mic_position.copy(),
            talker_position=room.talker_position.copy(),
            attacker_position=attacker,
            replay_source_position=replay_source,
            label=room.label,
        )
    raise InfeasibleGeometryError(
        f"could not place attacker in zone {attack_da} "
        f"inside a {room.floor_area:.2f} m^2 room after {max_attempts} attempts"
    )


def _axis_images(src: float, rec: float, length: float, m_max: int):
    """Per-axis image coordinates (relative to receiver) and wall-hit counts.

    Image positions along one axis are (1 - 2p) * (src + 2 m L) for
    p in {0, 1}; the combined wall-hit count for that axis is
    |m + p| + |m|.
    """
    m = np.arange(-m_max, m_max + 1)
    coords = []
    hits = []
    for p in (0, 1):
        coords.append((1 - 2 * p) * (src + 2.0 * m * length) - rec)
        hits.append(np.abs(m + p) + np.abs(m))
    return np.concatenate(coords), np.concatenate(hits)


@functools.lru_cache(maxsize=64)
def _dc_removal_sos(fs: int):
    return sps.butter(2, 50.0, "highpass", fs=fs, output="sos")


def _fractional_delay_taps(delay_samples: np.ndarray, fs: int):
    """+/-40-tap Hann-windowed sinc pulses at fractional sample delays.

    Returns (indices, values) flattened over all pulses; cutoff is
    0.9 * Nyquist so the pulse peaks at the true arrival time.
    """
    h = SINC_HALF_TAPS
    offsets = np.arange(-h, h + 1)
    base = np.floor(delay_samples + 0.5).astype(np.int64)
    idx = base[:, None] + offsets[None, :]
    t = idx - delay_samples[:, None]  # in samples, |t| <= h + 0.5
    win = 0.5 * (1.0 + np.cos(np.pi * t / (h + 0.5)))
    vals = win * np.sinc(0.9 * t)
    return idx, vals


def simulate_rir(
    room: RoomInstance,
    source: np.ndarray,
    receiver: np.ndarray,
    pattern: str = "omnidirectional",
    orientation: np.ndarray | None = None,
    fs: int = 16000,
) -> ImpulseResponse:
    """Image-source room impulse response between two points.

    Each image contributes amplitude (1 - alpha)^(n/2) * g(theta) /
    (4 pi d) at delay d / c, where n is its total wall-hit count,
    g the receiver pattern gain for the arrival direction, and d the
    image distance.  Images are included until their reflection
    attenuation drops 60 dB below the direct path.  The IR covers at
    least 1.2 * T60 after the direct arrival.

    ``pattern`` is "omnidirectional" or "cardioid"; a cardioid receiver
    needs an ``orientation`` unit vector (gain 0.5 * (1 + cos theta)
    relative to it).
    """
    if fs <= 0:
        raise ValueError("fs must be positive")
    if pattern not in ("omnidirectional", "cardioid"):
        raise ValueError(f"unknown pattern {pattern!r}")
    source = np.asarray(source, dtype=np.float64)
    receiver = np.asarray(receiver, dtype=np.float64)
    if np.allclose(source, receiver):
        raise ValueError("source and receiver coincide")
    if not (room.contains(source, 0.0) and room.contains(receiver, 0.0)):
        raise ValueError("source/receiver must be inside the room")
    if pattern == "cardioid":
        if orientation is None:
            raise ValueError("cardioid pattern requires an orientation vector")
        orientation = np.asarray(orientation, dtype=np.float64)
        orientation = orientation / np.linalg.norm(orientation)

    c = SPEED_OF_SOUND
    beta = math.sqrt(max(0.0, 1.0 - room.absorption))
    d_direct = float(np.linalg.norm(source - receiver))
    t_max = d_direct / c + 1.2 * room.t60_target + 0.005
    n_out = int(math.ceil(t_max * fs)) + SINC_HALF_TAPS + 2
    radius = c * t_max

    cutoff_amp = 10.0 ** (-REFLECTION_CUTOFF_DB / 20.0)
    if beta <= 0.0:
        n_hits_max = 0
    else:
        n_hits_max = int(math.floor(math.log(cutoff_amp) / math.log(beta)))

    dims = room.dimensions
    axes = []
    for u in range(3):
        # per-axis lattice bound from both the delay horizon and the
        # per-axis wall-hit budget (2|m| - 1 <= n_hits_max)
        m_delay = int(math.ceil(radius / (2.0 * dims[u]))) + 1
        m_hits = n_hits_max // 2 + 1
        axes.append(
            _axis_images(source[u], receiver[u], dims[u], min(m_delay, m_hits))
        )
    (cx, nx), (cy, ny), (cz, nz) = axes

    # Accumulate in chunks over the x-axis lattice to bound memory.
    ir = np.zeros(n_out)
    sq_y = (cy.astype(np.float32) ** 2)[:, None]
    sq_z = (cz.astype(np.float32) ** 2)[None, :]
    sq_yz = sq_y + sq_z
    n_yz = (ny[:, None] + nz[None, :]).astype(np.int32)
    nx = nx.astype(np.int32)
    log_beta = math.log(beta) if beta > 0 else 0.0
    strong_cut = 10.0 ** (-_STRONG_IMAGE_DB / 20.0)

    chunk = max(1, int(4e6 // sq_yz.size))
    for start in range(0, len(cx), chunk):
        cxs = cx[start : start + chunk]
        nxs = nx[start : start + chunk]
        d2 = cxs.astype(np.float32)[:, None, None] ** 2 + sq_yz[None, :, :]
        hits = nxs[:, None, None] + n_yz[None, :, :]
        mask = (hits <= n_hits_max) & (d2 <= radius * radius)
        if not mask.any():
            continue
        ix, iy, iz = np.nonzero(mask)
        n = hits[mask]
        vec = np.stack(
            [cxs[ix].astype(np.float64), cy[iy].astype(np.float64),
             cz[iz].astype(np.float64)],
            axis=1,
        )
        d = np.linalg.norm(vec, axis=1)
        d = np.maximum(d, 1e-6)
        refl = np.exp(n * log_beta) if beta > 0 else (n == 0).astype(np.float64)
        gain = np.ones_like(d)
        if pattern == "cardioid":
            cos_theta = (vec @ orientation) / d
            gain = 0.5 * (1.0 + cos_theta)
        amp = refl * gain / (4.0 * math.pi * d)
        delay = d * (fs / c)
        keep = delay < n_out - SINC_HALF_TAPS - 1
        amp, delay, refl, d = amp[keep], delay[keep], refl[keep], d[keep]
        if len(amp) == 0:
            continue

        strong = refl * (d_direct / d) >= strong_cut
        if strong.any():
            idx, vals = _fractional_delay_taps(delay[strong], fs)
            vals = vals * amp[strong, None]
            valid = (idx >= 0) & (idx < n_out)
            flat = np.bincount(
                idx[valid], weights=vals[valid], minlength=n_out
            )
            ir += flat[:n_out]
        weak = ~strong
        if weak.any():
            nearest = np.floor(delay[weak] + 0.5).astype(np.int64)
            ir += np.bincount(nearest, weights=amp[weak], minlength=n_out)[:n_out]

    # All image amplitudes are positive, so the dense late tail builds an
    # unphysical near-DC offset whose energy decays at half the true rate.
    # The standard remedy for specular image models is a low high-pass on
    # the synthesized IR; zero-phase filtering keeps arrival times exact.
    if fs > 400:
        sos = _dc_removal_sos(fs)
        ir = sps.sosfiltfilt(sos, ir)

    return ImpulseResponse(ir, fs)


def measure_t60(ir: ImpulseResponse, fit_range_db: tuple[float, float] = (-5.0, -25.0)) -> float:
    """Reverberation time from Schroeder backward integration.

    The squared IR is integrated backwards, the decay curve fitted by
    least squares between -5 dB and -25 dB, and the fitted slope
    extrapolated to a 60 dB decay (T60 = 3 x T20).
    """
    e = ir.taps**2
    total = float(e.sum())
    if total <= 0:
        raise InsufficientDecayError("zero-energy impulse response")
    sch = np.cumsum(e[::-1])[::-1] / total
    with np.errstate(divide="ignore"):
        db = 10.0 * np.log10(sch)
    hi, lo = fit_range_db
    in_range = (db <= hi) & (db >= lo)
    # Ignore the integration artifact at the very tail: the Schroeder
    # curve always plunges over the last few samples.
    n = len(db)
    in_range[int(n * 0.99) :] = False
    idx = np.nonzero(in_range)[0]
    if len(idx) < 8:
        raise InsufficientDecayError(
            f"fewer than 8 samples between {hi} and {lo} dB on the decay curve"
        )
    t = idx / ir.sample_rate
    slope, _ = np.polyfit(t, db[idx], 1)
    if slope >= 0:
        raise InsufficientDecayError("decay curve is not decreasing over the fit range")
    return float(-60.0 / slope)
