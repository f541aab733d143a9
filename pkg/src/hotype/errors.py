"""Exception hierarchy.

Every error carries a machine-readable ``reason`` and a ``details`` dict with
the witnessing data; the CLI maps ``exit_code`` straight to the process status.
"""


class HotypeError(Exception):
    reason = "error"
    exit_code = 1

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details

    def to_json(self):
        out = {"error": type(self).__name__, "reason": self.reason, "message": str(self)}
        if self.details:
            out["details"] = self.details
        return out


class ValidationError(HotypeError):
    reason = "validation"
    exit_code = 2


class ResourceLimit(HotypeError):
    reason = "resource_limit"
    exit_code = 3


class InternalCheckFailed(HotypeError):
    """A verified identity failed; always an implementation bug."""

    reason = "internal_check_failed"
    exit_code = 1


# groupoids

class ParseError(ValidationError):
    reason = "parse_error"


class AxiomError(ValidationError):
    reason = "axiom_violation"

    def __init__(self, axiom, witness, message=None):
        super().__init__(message or f"groupoid axiom violated: {axiom} (witness {witness})",
                         axiom=axiom, witness=list(witness))
        self.axiom = axiom
        self.witness = tuple(witness)


class NotAGroup(ValidationError):
    reason = "not_a_group"


class NotAnAction(ValidationError):
    reason = "not_an_action"


class NotACover(ValidationError):
    reason = "not_a_cover"

    def __init__(self, uncovered):
        super().__init__(f"points not covered: {list(uncovered)}", uncovered=list(uncovered))
        self.uncovered = list(uncovered)


class UnknownObject(ValidationError):
    reason = "unknown_object"


class FunctorError(ValidationError):
    reason = "not_a_functor"


class NaturalityError(ValidationError):
    reason = "not_natural"


# simplicial

class FaceIdentityError(ValidationError):
    reason = "face_identity"


class SimplicialMapError(ValidationError):
    reason = "not_a_simplicial_map"


class BoundaryCheckFailed(ValidationError):
    reason = "boundary_check_failed"


class TruncationTooShallow(ValidationError):
    reason = "truncation_too_shallow"


class HomotopyIdentityFailed(InternalCheckFailed):
    reason = "homotopy_identity_failed"


# classifying

class NotAWeakEquivalence(ValidationError):
    reason = "not_a_weak_equivalence"


class InvarianceFailed(InternalCheckFailed):
    reason = "invariance_failed"


# bundles

class SourceTargetMismatch(ValidationError):
    reason = "source_target_mismatch"


class CocycleViolation(ValidationError):
    reason = "cocycle_violation"


class NotSameFiber(ValidationError):
    reason = "not_same_fiber"


class NotPrincipal(ValidationError):
    reason = "not_principal"


class BaseMismatch(ValidationError):
    reason = "base_mismatch"


class NotSimplicial(ValidationError):
    reason = "not_simplicial"


class NotALoop(ValidationError):
    reason = "not_a_loop"


class TooLarge(ResourceLimit):
    reason = "too_large"


class NonExhaustive(ResourceLimit):
    reason = "non_exhaustive"
