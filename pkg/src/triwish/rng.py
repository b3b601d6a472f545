"""Seeded deterministic random streams and the scalar draw routines.

The generator definition below is frozen; changing any part of it changes
every seeded result in the package and is a breaking change.

Raw stream
    Philox 4x64 with 10 rounds (the counter-based generator shipped with
    numpy as ``numpy.random.Philox``), keyed with the two 64-bit words
    ``(seed, stream)`` and counter starting at zero.  Successive 64-bit
    outputs are consumed in order; blocks are prefetched into a buffer,
    which does not affect the sequence.

Uniform doubles
    ``u = (raw >> 11) * 2**-53``, i.e. the top 53 bits, giving u in [0, 1).

Standard normal
    Box-Muller, cosine branch only, consuming exactly two uniforms per
    draw: with uniforms u1 then u2,
    ``z = sqrt(-2 log(1 - u1)) * cos(2 pi u2)``.
    (1 - u1 lies in (0, 1], so the log is always defined.)

Gamma(shape, scale)
    Marsaglia-Tsang rejection for shape >= 1.  Each attempt consumes one
    normal draw (redrawn while 1 + c*x <= 0), then one uniform for the
    acceptance test; the squeeze ``u < 1 - 0.0331 x^4`` is tried before
    the log test.  For shape < 1 the draw is
    ``gamma(shape + 1, scale) * (1 - u)**(1/shape)``
    with the boost uniform drawn after the gamma.

Chi(k)
    ``sqrt(gamma(k / 2, 2))``, valid for any real k > 0.

Parallel work uses independent streams ``RngStream(seed, stream=i)``; the
stream id is the second Philox key word, so distinct ids give statistically
independent sequences for the same seed.
"""

import math

import numpy as np

from .errors import InvalidDegreesOfFreedom, InvalidParameter

_TWO_PI = 2.0 * math.pi
_U53 = 2.0 ** -53
_BLOCK = 4096


class RngStream:
    """Single-owner deterministic random stream.

    Identical ``(seed, stream)`` pairs produce bit-identical draw
    sequences.  Not safe for concurrent use; give each task its own
    stream.
    """

    def __init__(self, seed, stream=0):
        if not 0 <= int(seed) < 2 ** 64:
            raise InvalidParameter("seed must fit in an unsigned 64-bit integer")
        if not 0 <= int(stream) < 2 ** 64:
            raise InvalidParameter("stream id must fit in an unsigned 64-bit integer")
        self.seed = int(seed)
        self.stream = int(stream)
        key = np.array([self.seed, self.stream], dtype=np.uint64)
        self._bitgen = np.random.Philox(key=key)
        self._buf = []

    def uniform(self):
        """Next uniform double in [0, 1)."""
        buf = self._buf
        if not buf:
            raw = self._bitgen.random_raw(_BLOCK)
            buf = ((raw >> 11) * _U53).tolist()
            buf.reverse()
            self._buf = buf
        return buf.pop()

    def standard_normal(self):
        """One N(0, 1) draw; consumes exactly two raw outputs."""
        u1 = self.uniform()
        u2 = self.uniform()
        return math.sqrt(-2.0 * math.log(1.0 - u1)) * math.cos(_TWO_PI * u2)

    def gamma(self, shape, scale=1.0):
        """One gamma draw with the given shape and scale, any real shape > 0."""
        if not shape > 0.0:
            raise InvalidParameter(f"gamma shape must be positive, got {shape}")
        if not scale > 0.0:
            raise InvalidParameter(f"gamma scale must be positive, got {scale}")
        if shape < 1.0:
            g = self._gamma_mt(shape + 1.0)
            u = self.uniform()
            return g * (1.0 - u) ** (1.0 / shape) * scale
        return self._gamma_mt(shape) * scale

    def _gamma_mt(self, shape):
        # Marsaglia-Tsang, shape >= 1, unit scale.
        d = shape - 1.0 / 3.0
        c = 1.0 / math.sqrt(9.0 * d)
        while True:
            x = self.standard_normal()
            v = 1.0 + c * x
            while v <= 0.0:
                x = self.standard_normal()
                v = 1.0 + c * x
            v = v * v * v
            u = self.uniform()
            x2 = x * x
            if u < 1.0 - 0.0331 * x2 * x2:
                return d * v
            if u > 0.0 and math.log(u) < 0.5 * x2 + d * (1.0 - v + math.log(v)):
                return d * v

    def chi(self, k):
        """One chi draw with k > 0 real degrees of freedom (sqrt of chi-square)."""
        if not k > 0.0:
            raise InvalidDegreesOfFreedom(f"chi degrees of freedom must be positive, got {k}")
        return math.sqrt(self.gamma(0.5 * k, 2.0))

    def spawn(self, stream):
        """Independent stream with the same seed and the given stream id."""
        return RngStream(self.seed, stream)


def draw_std_normal(rng):
    """Functional alias for :meth:`RngStream.standard_normal`."""
    return rng.standard_normal()


def draw_chi(rng, k):
    """Functional alias for :meth:`RngStream.chi`."""
    return rng.chi(k)


def draw_gamma(rng, shape, scale=1.0):
    """Functional alias for :meth:`RngStream.gamma`."""
    return rng.gamma(shape, scale)
