"""Exception types shared across the library.

Everything raised on a documented failure path derives from GHLabError,
so CLI entry points can catch a single base class.
"""


class GHLabError(Exception):
    """Base class for all library errors."""


class EvaluationAtCenter(GHLabError):
    """Evaluation point fell inside the exclusion ball of a center."""

    def __init__(self, center_index, point, distance):
        self.center_index = int(center_index)
        self.point = tuple(float(c) for c in point)
        self.distance = float(distance)
        super().__init__(
            "point (%g, %g, %g) is within the exclusion radius of center %d "
            "(distance %.3e)" % (*self.point, self.center_index, self.distance)
        )


class NonpositivePotential(GHLabError):
    """The harmonic potential is not positive at the requested point."""

    def __init__(self, value, point):
        self.value = float(value)
        self.point = tuple(float(c) for c in point)
        super().__init__(
            "potential %.6g <= 0 at (%g, %g, %g); the metric degenerates here"
            % (self.value, *self.point)
        )


class NoCriticalPoints(GHLabError):
    """The search found no critical points of the potential."""


class NotCritical(GHLabError):
    """A point handed to an index computation is not a critical point."""

    def __init__(self, gradient_norm, tol):
        self.gradient_norm = float(gradient_norm)
        self.tol = float(tol)
        super().__init__(
            "gradient norm %.3e exceeds tolerance %.3e"
            % (self.gradient_norm, self.tol)
        )


class DegenerateCritical(GHLabError):
    """Hessian at a critical point has an eigenvalue too close to zero."""

    def __init__(self, eigenvalue, threshold):
        self.eigenvalue = float(eigenvalue)
        self.threshold = float(threshold)
        super().__init__(
            "eigenvalue %.3e within degeneracy threshold %.3e"
            % (self.eigenvalue, self.threshold)
        )


class DegeneratePresent(GHLabError):
    """A degenerate critical point prevents Morse-count verification."""

    def __init__(self, location):
        self.location = tuple(float(c) for c in location)
        super().__init__(
            "degenerate critical point near (%g, %g, %g)" % self.location
        )


class RootNotBracketed(GHLabError):
    """A scalar root search was given an interval without a sign change."""

    def __init__(self, interval, values):
        self.interval = (float(interval[0]), float(interval[1]))
        self.values = (float(values[0]), float(values[1]))
        super().__init__(
            "no sign change on [%g, %g]: f=%g and %g"
            % (*self.interval, *self.values)
        )


class NotRestPoint(GHLabError):
    """Point handed to rest-point classification is not stationary."""


class PastExtinction(GHLabError):
    """Requested time lies beyond the extinction of the radial solution."""

    def __init__(self, time, extinction_time):
        self.time = float(time)
        self.extinction_time = float(extinction_time)
        super().__init__(
            "t=%g is past extinction at t=%g" % (self.time, self.extinction_time)
        )


class StepUnderflow(GHLabError):
    """Adaptive integration drove the step size below the useful range."""

    def __init__(self, time, dt):
        self.time = float(time)
        self.dt = float(dt)
        super().__init__("step size %.3e underflowed at t=%g" % (self.dt, self.time))


class SelfIntersection(GHLabError):
    """An evolving curve stopped being embedded."""

    def __init__(self, time, segment_pair):
        self.time = float(time)
        self.segment_pair = (int(segment_pair[0]), int(segment_pair[1]))
        super().__init__(
            "segments %d and %d cross at t=%g" % (*self.segment_pair, self.time)
        )


class CenterCollision(GHLabError):
    """An evolving curve ran into a center it was not anchored to."""

    def __init__(self, time, node_index, center_index, distance):
        self.time = float(time)
        self.node_index = int(node_index)
        self.center_index = int(center_index)
        self.distance = float(distance)
        super().__init__(
            "node %d hit center %d at t=%g (distance %.3e)"
            % (self.node_index, self.center_index, self.time, self.distance)
        )


class CoincidentPoints(GHLabError):
    """Two points that must be distinct coincide."""


class CoincidentEndpoints(GHLabError):
    """A computation requires distinct curve endpoints."""


class RayDegeneracy(GHLabError):
    """No generic ray direction could be found for crossing counts."""

    def __init__(self, attempts):
        self.attempts = int(attempts)
        super().__init__(
            "all %d sampled ray directions were degenerate" % self.attempts
        )


class NotAlmostCalibrated(GHLabError):
    """Curve fails the angle-variation bound required by the analysis."""

    def __init__(self, variation):
        self.variation = float(variation)
        super().__init__(
            "tangent angle variation %.6g is not below pi" % self.variation
        )


class NotPerfectMorse(GHLabError):
    """Curve does not satisfy the convexity hypothesis for filtrations."""


class ChordThroughCenter(GHLabError):
    """The chord between two centers passes through a third one."""

    def __init__(self, center_index):
        self.center_index = int(center_index)
        super().__init__("center %d lies on the chord" % self.center_index)


class DegenerateStencil(GHLabError):
    """Finite-difference stencil collapsed (repeated or tiny spacing)."""

    def __init__(self, node_index):
        self.node_index = int(node_index)
        super().__init__("degenerate stencil at node %d" % self.node_index)
