"""Exception hierarchy shared by every engine in the package.

Each error carries a machine-readable ``reason`` slug so reports and the
command line can distinguish failure modes without parsing prose.  Errors
with ``abstention = True`` mean the computation declined to certify an
answer (exit code 2 on the CLI); everything else is a definite failure.
"""


class GsioError(Exception):
    reason = "error"
    abstention = False

    def __init__(self, message=""):
        super().__init__(message or self.reason)


class NonUnimodularPoint(GsioError):
    """Evaluation point is not on the unit circle."""

    reason = "non_unimodular_point"


class NotInvertibleOnCircle(GsioError):
    """A symbol has a zero (or pole) within tolerance of the unit circle."""

    reason = "not_invertible_on_circle"


class TailNotConverged(GsioError):
    """Fourier-tail decay could not be certified below the requested tolerance."""

    reason = "tail_not_converged"
    abstention = True


class WindingMismatch(GsioError):
    """Algebraic and sampled-phase winding numbers disagree."""

    reason = "winding_mismatch"


class NotMonomialInner(GsioError):
    """Inner function is not a pure monomial z^k with k >= 1."""

    reason = "not_monomial_inner"


class InsufficientOrder(GsioError):
    """Truncation order too small for the requested interior margin."""

    reason = "insufficient_order"


class OrderTooSmall(GsioError):
    """Kernel truncation violates the radial tail rule r^(2N) <= 1e-12."""

    reason = "order_too_small"


class EigSolverFailure(GsioError):
    reason = "eig_solver_failure"


class AliasRisk(GsioError):
    """Grid too coarse for alias-free convolution of the involved bandwidths."""

    reason = "alias_risk"


class ProbeUnstable(GsioError):
    """Kernel-dimension probing failed to stabilize across section orders."""

    reason = "probe_unstable"
    abstention = True


class RootSplitFailure(GsioError):
    """Root clustering too ill-conditioned to split inside/outside factors."""

    reason = "root_split_failure"


class ResidualTooLarge(GsioError):
    """Factor solve exhausted its bandwidth budget above the residual bound."""

    reason = "residual_too_large"


class InternalInconsistency(GsioError):
    """Two independent routes to the same quantity disagree."""

    reason = "internal_inconsistency"


class ParseError(GsioError):
    reason = "parse_error"
