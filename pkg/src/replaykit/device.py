"""Replay loudspeaker models: polynomial Hammerstein branches, quality
measurement (occupied bandwidth, its lower edge, linear-to-nonlinear
power ratio), classification, and synthesis of devices inside a
quality class.

A device is five impulse responses G1..G5; its output for input x is

    y = sum_n  x**n  *  Gn          (* = full convolution, n = 1..5)

so G1 carries the linear band-limiting behavior and G2..G5 the
harmonic distortion.  The distinguished "perfect" device is the exact
identity (unit-delta G1, zero G2..G5).

Quality classes (bounds on measured OB / minF / LNLR):

    perfect:  inf / 0 / inf
    high:     OB > 10 kHz,  minF < 600 Hz,  LNLR > 100 dB
    low:      OB < 10 kHz,  minF > 600 Hz,  LNLR < 100 dB

Measurements straddling the two real classes classify as
"indeterminate"; the class bounds do not tile the measurement space.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy import signal as sps
from scipy.fft import rfft

from .audio import ImpulseResponse, Waveform, next_pow2
from .errors import DeviceSynthesisError

N_BRANCHES = 5

OB_BOUND_HZ = 10_000.0
MINF_BOUND_HZ = 600.0
LNLR_BOUND_DB = 100.0

# Realistic measurement ranges for synthesized devices (survey of
# consumer loudspeakers: OB roughly 7.5-17 kHz, minF 0.2-1.5 kHz,
# LNLR 30-145 dB), trimmed inward so verified draws land strictly
# inside their class bounds.
_HIGH_MINF_HZ = (210.0, 590.0)
_HIGH_OB_HZ = (10_300.0, 16_800.0)
_HIGH_LNLR_DB = (102.0, 143.0)
_LOW_MINF_HZ = (620.0, 1_480.0)
_LOW_OB_HZ = (7_600.0, 9_850.0)
_LOW_LNLR_DB = (32.0, 98.0)

# Nonlinear branch length: 128 taps at 16 kHz, scaled with sample rate.
_NL_TAPS_AT_16K = 128


@dataclass
class DeviceMeasurement:
    ob_hz: float
    minf_hz: float
    lnlr_db: float

    def __post_init__(self):
        if not self.ob_hz > 0:
            raise ValueError("ob_hz must be positive")
        if self.minf_hz < 0:
            raise ValueError("minf_hz must be nonnegative")
        if math.isnan(self.lnlr_db):
            raise ValueError("lnlr_db must be finite or +inf")

    def to_dict(self) -> dict:
        return {
            "ob_hz": self.ob_hz,
            "minf_hz": self.minf_hz,
            "lnlr_db": self.lnlr_db,
            "class": classify_device(self),
        }


@dataclass
class DeviceModel:
    """Ordered Hammerstein branches G1..G5 at a common sample rate."""

    branches: list[ImpulseResponse]
    sample_rate: int
    name: str = "device"
    quality: str | None = None

    def __post_init__(self):
        if len(self.branches) != N_BRANCHES:
            raise ValueError(f"expected {N_BRANCHES} branches, got {len(self.branches)}")
        for b in self.branches:
            if b.sample_rate != self.sample_rate:
                raise ValueError("all branches must share the device sample rate")

    @property
    def linear(self) -> ImpulseResponse:
        return self.branches[0]

    @property
    def is_perfect(self) -> bool:
        h1 = self.branches[0].taps
        if not (len(h1) == 1 and h1[0] == 1.0):
            return False
        return all(not np.any(b.taps) for b in self.branches[1:])

    def to_json(self) -> str:
        return json.dumps(
            {
                "name": self.name,
                "quality": self.quality,
                "sample_rate": self.sample_rate,
                "branches": [b.taps.tolist() for b in self.branches],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "DeviceModel":
        obj = json.loads(text)
        fs = int(obj["sample_rate"])
        branches = [ImpulseResponse(np.asarray(t, dtype=np.float64), fs) for t in obj["branches"]]
        return cls(branches, fs, obj.get("name", "device"), obj.get("quality"))


def perfect_device(sample_rate: int) -> DeviceModel:
    """The hypothetical distortion-free, full-bandwidth loudspeaker."""
    branches = [ImpulseResponse.delta(sample_rate)] + [
        ImpulseResponse.zero(1, sample_rate) for _ in range(N_BRANCHES - 1)
    ]
    return DeviceModel(branches, sample_rate, name="perfect", quality="perfect")


def apply_device(w: Waveform, d: DeviceModel) -> Waveform:
    """Run a waveform through the Hammerstein model.

    Output length is the full-convolution length against the longest
    branch; the perfect device returns the input unchanged.
    """
    if w.sample_rate != d.sample_rate:
        raise ValueError(
            f"sample-rate mismatch: waveform {w.sample_rate} Hz vs device {d.sample_rate} Hz"
        )
    if d.is_perfect:
        return Waveform(w.samples.copy(), w.sample_rate)
    out_len = len(w) + max(len(b) for b in d.branches) - 1
    y = np.zeros(out_len)
    x_pow = np.ones_like(w.samples)
    for b in d.branches:
        x_pow = x_pow * w.samples
        if not np.any(b.taps):
            continue
        conv = sps.fftconvolve(x_pow, b.taps, mode="full")
        y[: len(conv)] += conv
    return Waveform(y, w.sample_rate)


def measure_ob_minf(h1: ImpulseResponse, n_grid: int = 8192) -> tuple[float, float]:
    """Occupied bandwidth of the linear branch and its lower edge.

    The cumulative power spectrum (on a >= 8192-point grid) is
    normalized to total power; minF is the 0.5% crossing, the upper
    edge the 99.5% crossing, and OB their difference.  Crossings are
    linearly interpolated between grid points.
    """
    if not np.any(h1.taps):
        raise ValueError("zero-energy linear branch")
    nfft = max(2 * n_grid, next_pow2(len(h1)))
    power = np.abs(rfft(h1.taps, n=nfft)) ** 2
    cum = np.cumsum(power)
    cum /= cum[-1]
    freqs = np.arange(len(power)) * (h1.sample_rate / nfft)

    def crossing(level: float) -> float:
        i = int(np.searchsorted(cum, level))
        if i == 0:
            return float(freqs[0])
        lo, hi = cum[i - 1], cum[i]
        frac = (level - lo) / (hi - lo) if hi > lo else 0.0
        return float(freqs[i - 1] + frac * (freqs[i] - freqs[i - 1]))

    minf = crossing(0.005)
    maxf = crossing(0.995)
    return maxf - minf, minf


def log_sweep(f_start: float, f_stop: float, duration: float, fs: int) -> Waveform:
    """Full-scale exponential sine sweep from f_start to f_stop."""
    if not 0 < f_start < f_stop:
        raise ValueError("need 0 < f_start < f_stop")
    n = int(round(duration * fs))
    t = np.arange(n) / fs
    rate = duration / math.log(f_stop / f_start)
    phase = 2.0 * math.pi * f_start * rate * (np.exp(t / rate) - 1.0)
    return Waveform(np.sin(phase), fs)


def measure_lnlr(d: DeviceModel, sweep_duration: float = 0.5) -> float:
    """Linear-to-nonlinear power ratio in dB (+inf for linear devices).

    The device is probed with a full-scale logarithmic sweep spanning
    the occupied band of its linear branch; the ratio compares the
    output power of the linear branch alone against the summed output
    power of branches 2..5, both restricted to that band.
    """
    if all(not np.any(b.taps) for b in d.branches[1:]):
        return math.inf
    ob, minf = measure_ob_minf(d.linear)
    nyq = d.sample_rate / 2.0
    f1 = max(minf, 10.0)
    f2 = min(minf + ob, 0.999 * nyq)
    probe = log_sweep(f1, f2, sweep_duration, d.sample_rate)

    out_len = len(probe) + max(len(b) for b in d.branches) - 1
    nfft = next_pow2(out_len)
    band_lo = int(math.floor(f1 / d.sample_rate * nfft))
    band_hi = int(math.ceil(f2 / d.sample_rate * nfft)) + 1

    def band_power(x: np.ndarray) -> float:
        spec = rfft(x, n=nfft)
        return float(np.sum(np.abs(spec[band_lo:band_hi]) ** 2))

    lin = sps.fftconvolve(probe.samples, d.linear.taps, mode="full")
    p_lin = band_power(lin)

    nl = np.zeros(out_len)
    x_pow = probe.samples.copy()
    for b in d.branches[1:]:
        x_pow = x_pow * probe.samples
        if not np.any(b.taps):
            continue
        conv = sps.fftconvolve(x_pow, b.taps, mode="full")
        nl[: len(conv)] += conv
    p_nl = band_power(nl)
    if p_nl == 0.0:
        return math.inf
    return 10.0 * math.log10(p_lin / p_nl)


def measure_device(d: DeviceModel) -> DeviceMeasurement:
    if d.is_perfect:
        return DeviceMeasurement(math.inf, 0.0, math.inf)
    ob, minf = measure_ob_minf(d.linear)
    return DeviceMeasurement(ob, minf, measure_lnlr(d))


def classify_device(m: DeviceMeasurement) -> str:
    """Map a measurement to perfect / high / low / indeterminate."""
    if math.isinf(m.lnlr_db) and m.minf_hz == 0.0:
        return "perfect"
    if m.ob_hz > OB_BOUND_HZ and m.minf_hz < MINF_BOUND_HZ and m.lnlr_db > LNLR_BOUND_DB:
        return "high"
    if m.ob_hz < OB_BOUND_HZ and m.minf_hz > MINF_BOUND_HZ and m.lnlr_db < LNLR_BOUND_DB:
        return "low"
    return "indeterminate"


def _bandpass_branch(f_lo: float, f_hi: float, fs: int) -> np.ndarray:
    """Windowed-sinc band-pass for the linear branch."""
    numtaps = int(round(fs / 93.0)) | 1  # ~172 Hz Kaiser transition at beta 8.6
    return sps.firwin(
        numtaps, [f_lo, f_hi], pass_zero=False, window=("kaiser", 8.6), fs=fs
    )


def _nonlinear_branch(rng: np.random.Generator, fs: int) -> np.ndarray:
    """Short low-pass-shaped random IR for a distortion branch.

    Harmonic energy of real loudspeakers concentrates at low and mid
    frequencies, so the raw noise is smoothed and given a decaying
    envelope.
    """
    n = max(8, int(round(_NL_TAPS_AT_16K * fs / 16000)))
    raw = rng.standard_normal(n)
    smooth_len = max(3, int(round(fs / 4000)))
    kernel = np.hanning(smooth_len + 2)[1:-1]
    shaped = np.convolve(raw, kernel / kernel.sum(), mode="same")
    envelope = np.exp(-4.0 * np.arange(n) / n)
    branch = shaped * envelope
    return branch / np.sqrt(np.sum(branch**2))


def synthesize_device(
    quality: str,
    rng: np.random.Generator,
    sample_rate: int = 96000,
    max_attempts: int = 100,
) -> DeviceModel:
    """Draw a device whose measurements land inside a quality class.

    The linear branch is a windowed-sinc band-pass with edges sampled
    from the class's realistic ranges; branches 2..5 are random
    low-pass-shaped IRs jointly rescaled to a target LNLR (power scales
    with gain squared, so one measured correction lands exactly).
    Every returned device is measurement-verified.
    """
    if quality == "perfect":
        return perfect_device(sample_rate)
    if quality == "high":
        minf_range, ob_range, lnlr_range = _HIGH_MINF_HZ, _HIGH_OB_HZ, _HIGH_LNLR_DB
    elif quality == "low":
        minf_range, ob_range, lnlr_range = _LOW_MINF_HZ, _LOW_OB_HZ, _LOW_LNLR_DB
    else:
        raise ValueError(f"unknown quality class {quality!r}")

    nyq = sample_rate / 2.0
    for attempt in range(max_attempts):
        f_lo = rng.uniform(*minf_range)
        ob_hi = min(ob_range[1], 0.93 * nyq - f_lo)
        if ob_hi <= ob_range[0]:
            raise DeviceSynthesisError(
                f"sample rate {sample_rate} Hz too low to fit a {quality!r}-class "
                f"passband (needs about {2.2 * (f_lo + ob_range[0]):.0f} Hz)"
            )
        band = rng.uniform(ob_range[0], ob_hi)
        lnlr_target = rng.uniform(*lnlr_range)

        h1 = _bandpass_branch(f_lo, f_lo + band, sample_rate)
        nl = [1e-2 / (n * n) * _nonlinear_branch(rng, sample_rate) for n in range(2, 6)]
        branches = [ImpulseResponse(h1, sample_rate)] + [
            ImpulseResponse(b, sample_rate) for b in nl
        ]
        model = DeviceModel(
            branches, sample_rate, name=f"{quality}-{attempt}", quality=quality
        )
        lnlr0 = measure_lnlr(model)
        scale = 10.0 ** ((lnlr0 - lnlr_target) / 20.0)
        model = DeviceModel(
            [branches[0]]
            + [ImpulseResponse(b.taps * scale, sample_rate) for b in branches[1:]],
            sample_rate,
            name=f"{quality}-{attempt}",
            quality=quality,
        )
        if classify_device(measure_device(model)) == quality:
            return model
    raise DeviceSynthesisError(
        f"no {quality!r}-class device within {max_attempts} attempts"
    )
