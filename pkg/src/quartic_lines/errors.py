"""Shared error types.

UsageError      -- caller broke a precondition (bad input, wrong field, ...).
CapabilityError -- the request is well-posed but outside desk-scale limits
                   (field too large, scan too big); callers may degrade
                   gracefully and report the achieved certificate level.
InconsistencyError -- the computation contradicts an invariant that should
                   hold for smooth surfaces (e.g. a non-reduced fiber cubic);
                   signals bad input geometry or an implementation bug, never
                   swallowed silently.
"""


class UsageError(ValueError):
    pass


class CapabilityError(RuntimeError):
    pass


class InconsistencyError(RuntimeError):
    pass
