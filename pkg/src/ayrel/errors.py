"""Exception taxonomy shared across modules."""


class AyrelError(Exception):
    pass


class GluingMismatch(AyrelError):
    """Paired edges do not carry opposite vectors."""


class NonClosed(AyrelError):
    """An oriented boundary edge has no gluing partner."""


class DegenerateTriangle(AyrelError):
    """A triangle is flat or negatively oriented."""


class LabelMismatch(AyrelError):
    """Vertex labels disagree along a glued vertex class."""


class DisconnectedPath(AyrelError):
    """Consecutive edges of a path do not share a vertex class."""


class SingularMatrix(AyrelError):
    pass


class SegmentHitsSingularity(AyrelError):
    """A traced segment meets a singularity strictly before its far end."""

    def __init__(self, message, hit_length=None):
        super().__init__(message)
        self.hit_length = hit_length


# the rel-surgery facing name for the same obstruction
SeparatrixHitsSingularity = SegmentHitsSingularity


class SegmentNotEmbedded(AyrelError):
    pass


class SlitsOverlap(AyrelError):
    pass


class PreconditionViolated(AyrelError):
    pass


class Collision(AyrelError):
    """A rel deformation would collapse a saddle connection."""


class GuardExceeded(AyrelError):
    """An index or search guard was exhausted."""


class BudgetExceeded(AyrelError):
    """A trace exceeded its crossing budget without terminating."""

    def __init__(self, message, steps=None):
        super().__init__(message)
        self.steps = steps


class NotPeriodicWithinBudget(AyrelError):
    pass


class MixedBoundary(AyrelError):
    """A cylinder boundary circle carries both singularities."""


class MissingRepresentative(AyrelError):
    pass


class TransversalNotFull(AyrelError):
    pass


class VerificationFailed(AyrelError):
    def __init__(self, message, log=None):
        super().__init__(message)
        self.log = log or []
